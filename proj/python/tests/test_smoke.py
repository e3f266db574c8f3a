import pytest

import compass_sim as cs

BASE = {
    "cluster.worker_count": "5",
    "workload.rate": "0.5",
    "workload.num_jobs": "100",
    "sim.seed": "7",
}


def test_builtin_dfg_ids():
    ids = cs.builtin_dfg_ids()
    assert set(ids) == {"translation", "image_reading", "dialogue", "perception_3d"}
    for i in ids:
        assert cs.lower_bound(i) > 0


def test_run_and_summarize():
    result = cs.run_simulation(BASE)
    assert len(result.jobs) == 100
    assert result.scheduler == "compass"
    for job in result.jobs:
        assert job.slow_down_factor >= 1.0
        assert job.latency_s == pytest.approx(job.completion_s - job.arrival_s)

    summary = cs.summarize(result)
    overall = [r for r in summary.rows if r.scope == "overall"]
    assert len(overall) == 1
    assert overall[0].job_count == 100
    assert 0.0 < summary.hit_rate <= 1.0


def test_determinism():
    a = cs.run_simulation(BASE)
    b = cs.run_simulation(BASE)
    assert [j.completion_s for j in a.jobs] == [j.completion_s for j in b.jobs]

    c = cs.run_simulation({**BASE, "sim.seed": "8"})
    assert [j.completion_s for j in a.jobs] != [j.completion_s for j in c.jobs]


def test_scheduler_ordering_low_load():
    def median_sdf(kind):
        result = cs.run_simulation({**BASE, "scheduler.kind": kind})
        values = sorted(j.slow_down_factor for j in result.jobs)
        return values[len(values) // 2]

    assert median_sdf("compass") <= median_sdf("hash")


def test_bad_config_rejected():
    with pytest.raises(Exception):
        cs.run_simulation({"scheduler.kind": "nonsense"})
    with pytest.raises(Exception):
        cs.run_simulation({"cluster.worker_count": "0"})


def test_slow_down_factor():
    assert cs.slow_down_factor(2.0, 1.0) == 2.0
    with pytest.raises(Exception):
        cs.slow_down_factor(1.0, 0.0)
