#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "compass/config.hpp"

using namespace compass;

TEST_CASE("defaults are a valid configuration") {
    SimConfig cfg;
    CHECK(cfg.cluster.worker_count == 5);
    CHECK(cfg.cluster.gpu_capacity_bytes == (16ull << 30));
    CHECK(cfg.cluster.eviction_policy == EvictionPolicy::lookahead);
    CHECK(cfg.sst.interval_s == doctest::Approx(0.2));
    CHECK(cfg.scheduler.threshold == doctest::Approx(2.0));
    cfg.validate(builtin_workflows());
}

TEST_CASE("key=value parsing covers every section") {
    std::map<std::string, std::string> kv{
        {"cluster.worker_count", "7"},
        {"cluster.gpu_capacity_bytes", "20000000000"},
        {"cluster.eviction_policy", "fifo"},
        {"scheduler.kind", "jit"},
        {"scheduler.dynamic_adjustment", "false"},
        {"workload.rate", "2.5"},
        {"workload.num_jobs", "100"},
        {"workload.mix.translation", "0.6"},
        {"workload.mix.dialogue", "0.4"},
        {"sst.load_interval_s", "0.5"},
        {"sim.seed", "123"},
        {"sim.noise", "lognormal"},
        {"sim.noise_sigma", "0.2"},
    };
    SimConfig cfg = parse_config(kv);
    CHECK(cfg.cluster.worker_count == 7);
    CHECK(cfg.cluster.eviction_policy == EvictionPolicy::fifo);
    CHECK(cfg.scheduler.kind == SchedulerKind::jit);
    CHECK_FALSE(cfg.scheduler.dynamic_adjustment);
    CHECK(cfg.workload.rate_per_s == doctest::Approx(2.5));
    CHECK(cfg.workload.mix.at("translation") == doctest::Approx(0.6));
    CHECK(cfg.sst.load_interval() == doctest::Approx(0.5));
    CHECK(cfg.sst.cache_interval() == doctest::Approx(0.2));  // falls back
    CHECK(cfg.seed == 123);
    CHECK(cfg.noise == NoiseModel::lognormal);
    cfg.validate(builtin_workflows());
}

TEST_CASE("unknown keys and bad values are rejected") {
    CHECK_THROWS_WITH_AS(parse_config({{"cluster.wrokers", "5"}}),
                         doctest::Contains("unknown config key"),
                         std::invalid_argument);
    CHECK_THROWS(parse_config({{"scheduler.kind", "fifo"}}));
    CHECK_THROWS(parse_config({{"scheduler.dynamic_adjustment", "maybe"}}));
    CHECK_THROWS(parse_config({{"cluster.eviction_policy", "lru"}}));
    CHECK_THROWS(parse_config({{"sim.noise", "gaussian"}}));
}

TEST_CASE("validation rejects inconsistent settings") {
    WorkflowSet ws = builtin_workflows();

    SimConfig cfg;
    cfg.cluster.worker_count = 0;
    CHECK_THROWS(cfg.validate(ws));

    cfg = {};
    cfg.scheduler.threshold = 0;
    CHECK_THROWS(cfg.validate(ws));

    cfg = {};
    cfg.cluster.gpu_capacity_bytes = 1'000'000'000;  // smaller than any model
    CHECK_THROWS(cfg.validate(ws));

    cfg = {};
    cfg.workload.mix = {{"missing", 1.0}};
    CHECK_THROWS(cfg.validate(ws));

    cfg = {};
    cfg.cluster.runtime.worker_multiplier = {1.0, 1.0};  // 5 workers
    CHECK_THROWS(cfg.validate(ws));
}

TEST_CASE("config file parsing") {
    std::string path = "/tmp/compass_test_cfg";
    {
        std::ofstream f(path);
        f << "# comment\n"
          << "cluster.worker_count = 9\n"
          << "workload.rate = 1.5   # inline comment\n"
          << "\n";
    }
    auto kv = read_config_file(path);
    CHECK(kv.at("cluster.worker_count") == "9");
    CHECK(kv.at("workload.rate") == "1.5");
    SimConfig cfg = parse_config(kv);
    CHECK(cfg.cluster.worker_count == 9);

    {
        std::ofstream f(path);
        f << "no equals sign\n";
    }
    CHECK_THROWS(read_config_file(path));
    std::remove(path.c_str());
    CHECK_THROWS(read_config_file(path));
}

TEST_CASE("config hash tracks semantic changes") {
    SimConfig a;
    SimConfig b;
    CHECK(a.config_hash() == b.config_hash());

    b.workload.rate_per_s = 0.75;
    CHECK(a.config_hash() != b.config_hash());

    b = {};
    b.seed = 99;
    CHECK(a.config_hash() != b.config_hash());

    b = {};
    b.scheduler.kind = SchedulerKind::hash;
    CHECK(a.config_hash() != b.config_hash());
}
