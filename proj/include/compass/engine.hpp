#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "compass/config.hpp"
#include "compass/metrics.hpp"
#include "compass/model.hpp"

namespace compass {

enum class EventKind {
    job_arrival,
    plan_complete,
    input_arrival,
    model_fetch_complete,
    task_start,
    task_complete,
    sst_publish,
    sim_end,
};

// Trace record for the causality audit. Times are the integer-microsecond
// simulation clock.
struct TraceEvent {
    std::int64_t t_us = 0;
    std::uint64_t seq = 0;
    EventKind kind{};
    int job = -1;
    int task = -1;
    int worker = -1;
    int model = -1;
};

struct AuditReport {
    std::uint64_t start_before_inputs = 0;
    std::uint64_t start_before_model = 0;
    std::uint64_t overlapping_executions = 0;
    std::uint64_t join_relocations = 0;

    std::uint64_t total() const {
        return start_before_inputs + start_before_model + overlapping_executions +
               join_relocations;
    }
};

// Replays a recorded trace and independently re-checks the execution rules.
AuditReport audit_trace(const std::vector<TraceEvent>& trace,
                        const WorkflowSet& workflows,
                        const std::vector<JobInstance>& jobs,
                        const std::vector<int>& job_dfg);

struct SimOutput {
    SimResult result;
    std::vector<TraceEvent> trace;        // filled when config.record_trace
    std::vector<JobInstance> jobs;        // the generated workload
    std::vector<int> job_dfg;             // dfg index per job id
    std::uint64_t join_relocations = 0;   // adjustment moves of join tasks
    std::uint64_t adjustments = 0;        // successful dynamic moves
    std::uint64_t sst_publishes = 0;
};

SimOutput run_simulation_full(const SimConfig& config);
SimResult run_simulation(const SimConfig& config);

}  // namespace compass
