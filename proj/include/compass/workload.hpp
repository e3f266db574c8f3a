#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "compass/model.hpp"

namespace compass {

// splitmix64 stream; identical output on every platform
struct Rng {
    std::uint64_t state;

    explicit Rng(std::uint64_t seed) : state(seed + 0x9e3779b97f4a7c15ull) {
        next_u64();
        next_u64();
    }
    std::uint64_t next_u64() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
    // uniform in (0, 1]
    double next_unit() {
        return (static_cast<double>(next_u64() >> 11) + 1.0) / 9007199254740993.0;
    }
    double exponential(double mean) { return -mean * std::log(next_unit()); }
    double normal();  // Box-Muller, one value per call
};

struct WorkloadSpec {
    enum class Mode { poisson, trace };
    Mode mode = Mode::poisson;
    double rate_per_s = 0.5;
    std::map<std::string, double> mix;  // dfg_id -> weight; empty = uniform
    double duration_s = 0;              // poisson horizon when num_jobs == 0
    std::uint64_t num_jobs = 0;         // when > 0, generate exactly this many
    std::string trace_path;
    double trace_rescale = 1.0;

    void validate() const;
};

// Exponential inter-arrivals, dfg sampled by mix weight. Deterministic per
// seed. Origin workers are assigned later by the engine.
std::vector<JobInstance> gen_poisson(const WorkloadSpec& spec,
                                     const WorkflowSet& workflows, Rng& rng);

// CSV `arrival_s,dfg_id` with header; timestamps must be non-decreasing.
std::vector<JobInstance> parse_trace(const std::string& path, double rescale,
                                     const WorkflowSet& workflows);
std::vector<JobInstance> parse_trace_text(const std::string& text, double rescale,
                                          const WorkflowSet& workflows);

std::vector<JobInstance> generate_workload(const WorkloadSpec& spec,
                                           const WorkflowSet& workflows,
                                           std::uint64_t seed);

}  // namespace compass
