#include <doctest.h>

#include <cmath>
#include <map>

#include "compass/workload.hpp"

using namespace compass;

TEST_CASE("generator stream is platform-stable") {
    Rng a(42);
    Rng b(42);
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());

    Rng c(42);
    for (int i = 0; i < 1000; ++i) {
        double u = c.next_unit();
        CHECK(u > 0);
        CHECK(u <= 1);
    }
}

TEST_CASE("arrival count tracks rate x duration") {
    WorkflowSet ws = builtin_workflows();
    WorkloadSpec spec;
    spec.rate_per_s = 2.0;
    spec.duration_s = 1000.0;

    Rng rng(1);
    auto jobs = gen_poisson(spec, ws, rng);
    // mean 2000, sd ~45; allow 3 sigma
    CHECK(jobs.size() > 1865);
    CHECK(jobs.size() < 2135);
    double last = 0;
    for (const auto& j : jobs) {
        CHECK(j.arrival_time_s >= last);
        last = j.arrival_time_s;
        CHECK(j.arrival_time_s <= spec.duration_s);
    }
}

TEST_CASE("fixed job count is exact and ids are dense") {
    WorkflowSet ws = builtin_workflows();
    WorkloadSpec spec;
    spec.rate_per_s = 1.0;
    spec.num_jobs = 137;
    auto jobs = generate_workload(spec, ws, 9);
    REQUIRE(jobs.size() == 137);
    for (std::size_t i = 0; i < jobs.size(); ++i)
        CHECK(jobs[i].job_id == static_cast<int>(i));
}

TEST_CASE("mix weights steer the dfg distribution") {
    WorkflowSet ws = builtin_workflows();
    WorkloadSpec spec;
    spec.rate_per_s = 1.0;
    spec.num_jobs = 20'000;
    spec.mix = {{"translation", 0.7}, {"dialogue", 0.3}};
    auto jobs = generate_workload(spec, ws, 5);

    std::map<int, int> counts;
    for (const auto& j : jobs) ++counts[j.dfg_index];
    CHECK(counts.size() == 2);
    double frac = static_cast<double>(counts[ws.dfg_index("translation")]) /
                  static_cast<double>(jobs.size());
    CHECK(std::abs(frac - 0.7) < 0.02);
}

TEST_CASE("workload validation") {
    WorkloadSpec spec;
    spec.rate_per_s = 0;
    CHECK_THROWS(spec.validate());

    spec = {};
    spec.mix = {{"translation", 0.5}, {"dialogue", 0.4}};  // sums to 0.9
    CHECK_THROWS(spec.validate());

    spec = {};
    spec.mix = {{"no_such_dfg", 1.0}};
    Rng rng(0);
    CHECK_THROWS(gen_poisson(spec, builtin_workflows(), rng));
}

TEST_CASE("trace parsing") {
    WorkflowSet ws = builtin_workflows();

    auto jobs = parse_trace_text(
        "arrival_s,dfg_id\n0.5,translation\n0.5,dialogue\n2.0,perception_3d\n", 1.0,
        ws);
    REQUIRE(jobs.size() == 3);
    CHECK(jobs[0].arrival_time_s == doctest::Approx(0.5));
    CHECK(jobs[1].dfg_index == ws.dfg_index("dialogue"));
    CHECK(jobs[2].arrival_time_s == doctest::Approx(2.0));

    // rescale compresses timestamps
    jobs = parse_trace_text("arrival_s,dfg_id\n10,translation\n", 0.1, ws);
    CHECK(jobs[0].arrival_time_s == doctest::Approx(1.0));

    CHECK_THROWS_WITH_AS(parse_trace_text("bogus header\n", 1.0, ws),
                         doctest::Contains("line 1"), std::runtime_error);
    CHECK_THROWS_WITH_AS(
        parse_trace_text("arrival_s,dfg_id\n1.0,translation\n0.5,translation\n", 1.0,
                         ws),
        doctest::Contains("decreasing"), std::runtime_error);
    CHECK_THROWS_WITH_AS(parse_trace_text("arrival_s,dfg_id\nabc,translation\n", 1.0, ws),
                         doctest::Contains("bad arrival"), std::runtime_error);
    CHECK_THROWS_WITH_AS(parse_trace_text("arrival_s,dfg_id\n1.0,zzz\n", 1.0, ws),
                         doctest::Contains("unknown dfg_id"), std::runtime_error);
    CHECK_THROWS(parse_trace_text("arrival_s,dfg_id\nno-comma\n", 1.0, ws));
}

TEST_CASE("exponential sampler has the requested mean") {
    Rng rng(11);
    double sum = 0;
    const int n = 100'000;
    for (int i = 0; i < n; ++i) sum += rng.exponential(0.5);
    CHECK(sum / n == doctest::Approx(0.5).epsilon(0.02));
}
