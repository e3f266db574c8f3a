#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "compass/cache.hpp"
#include "compass/cost.hpp"
#include "compass/scheduler.hpp"
#include "compass/workload.hpp"

namespace compass {

struct ClusterParams {
    int worker_count = 5;
    std::uint64_t gpu_capacity_bytes = 16ull << 30;  // 16 GiB
    EvictionPolicy eviction_policy = EvictionPolicy::lookahead;
    int lookahead_window = 10;
    LinkParams link;
    RuntimeModel runtime;

    void validate() const;
};

struct SstParams {
    double interval_s = 0.2;
    double load_interval_s = -1;   // < 0: use interval_s
    double cache_interval_s = -1;  // < 0: use interval_s

    double load_interval() const { return load_interval_s >= 0 ? load_interval_s : interval_s; }
    double cache_interval() const { return cache_interval_s >= 0 ? cache_interval_s : interval_s; }
};

enum class NoiseModel { deterministic, lognormal };

struct SimConfig {
    ClusterParams cluster;
    SchedulerOptions scheduler;
    WorkloadSpec workload;
    SstParams sst;
    NoiseModel noise = NoiseModel::deterministic;
    double noise_sigma = 0.0;
    double plan_cost_s = 0.0;
    double max_time_s = 0;  // 0 = no cap
    std::uint64_t seed = 42;
    std::string workflow_file;  // empty = builtins
    bool record_trace = false;

    void validate(const WorkflowSet& workflows) const;

    // Canonical key=value form; also the input to the config hash.
    std::map<std::string, std::string> to_kv() const;
    std::uint64_t config_hash() const;
};

// Flat `section.key = value` text. Unknown keys are an error.
SimConfig parse_config(const std::map<std::string, std::string>& kv);
std::map<std::string, std::string> read_config_file(const std::string& path);

}  // namespace compass
