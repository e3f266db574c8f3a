#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "compass/engine.hpp"
#include "compass/metrics.hpp"
#include "compass/model.hpp"
#include "compass/scheduler.hpp"

namespace py = pybind11;
using namespace compass;

namespace {

SimConfig config_from_dict(const py::dict& d) {
    std::map<std::string, std::string> kv;
    for (const auto& item : d)
        kv[py::str(item.first)] = py::str(item.second);
    return parse_config(kv);
}

}  // namespace

PYBIND11_MODULE(_compass_sim, m) {
    m.doc() = "cache-aware DAG workflow scheduling simulator";

    py::class_<JobRecord>(m, "JobRecord")
        .def_readonly("job_id", &JobRecord::job_id)
        .def_readonly("dfg_id", &JobRecord::dfg_id)
        .def_readonly("arrival_s", &JobRecord::arrival_s)
        .def_readonly("completion_s", &JobRecord::completion_s)
        .def_readonly("latency_s", &JobRecord::latency_s)
        .def_readonly("lower_bound_s", &JobRecord::lower_bound_s)
        .def_readonly("slow_down_factor", &JobRecord::slow_down_factor);

    py::class_<WorkerReport>(m, "WorkerReport")
        .def_readonly("worker", &WorkerReport::worker)
        .def_readonly("hits", &WorkerReport::hits)
        .def_readonly("misses", &WorkerReport::misses)
        .def_readonly("fetches", &WorkerReport::fetches)
        .def_readonly("evictions", &WorkerReport::evictions)
        .def_readonly("tasks_executed", &WorkerReport::tasks_executed)
        .def_readonly("busy_time_s", &WorkerReport::busy_time_s);

    py::class_<SimResult>(m, "SimResult")
        .def_readonly("jobs", &SimResult::jobs)
        .def_readonly("workers", &SimResult::workers)
        .def_readonly("seed", &SimResult::seed)
        .def_readonly("config_hash", &SimResult::config_hash)
        .def_readonly("scheduler", &SimResult::scheduler)
        .def_readonly("run_duration_s", &SimResult::run_duration_s);

    py::class_<SummaryRow>(m, "SummaryRow")
        .def_readonly("scope", &SummaryRow::scope)
        .def_readonly("job_count", &SummaryRow::job_count)
        .def_readonly("mean_latency_s", &SummaryRow::mean_latency_s)
        .def_readonly("sdf_mean", &SummaryRow::sdf_mean)
        .def_property_readonly("sdf_median",
                               [](const SummaryRow& r) { return r.sdf.median; })
        .def_property_readonly("sdf_q1", [](const SummaryRow& r) { return r.sdf.q1; })
        .def_property_readonly("sdf_q3", [](const SummaryRow& r) { return r.sdf.q3; });

    py::class_<RunSummary>(m, "RunSummary")
        .def_readonly("rows", &RunSummary::rows)
        .def_readonly("hit_rate", &RunSummary::hit_rate)
        .def_readonly("gpu_utilization", &RunSummary::gpu_utilization)
        .def_readonly("fetches", &RunSummary::fetches)
        .def_readonly("evictions", &RunSummary::evictions)
        .def_readonly("active_workers", &RunSummary::active_workers);

    m.def("run_simulation",
          [](const py::dict& config) { return run_simulation(config_from_dict(config)); },
          py::arg("config"),
          "Run one simulation from a dict of config keys (see README).");

    m.def("summarize", &summarize, py::arg("result"));

    m.def("slow_down_factor", &slow_down_factor, py::arg("latency_s"),
          py::arg("lower_bound_s"));

    m.def("builtin_dfg_ids", [] {
        std::vector<std::string> ids;
        for (const auto& d : builtin_workflows().dfgs) ids.push_back(d.id());
        return ids;
    });

    m.def("lower_bound", [](const std::string& dfg_id) {
        WorkflowSet ws = builtin_workflows();
        int idx = ws.dfg_index(dfg_id);
        if (idx < 0) throw std::invalid_argument("unknown dfg: " + dfg_id);
        return compute_lower_bound(ws.dfgs[idx]);
    });
}
