#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <optional>
#include <vector>

#include "compass/cache.hpp"
#include "compass/model.hpp"

namespace compass {

// A task sitting on a worker's execution queue. Runnable once every
// predecessor output has arrived and the model (if any) is resident.
struct QueuedTask {
    int job_id = 0;
    int dfg_index = 0;
    int task_index = 0;
    std::optional<ModelId> model;
    double expected_runtime_s = 0;
    int inputs_pending = 0;
    double enqueue_time_s = 0;
    double ready_time_s = 0;      // when the last input arrived
    bool triggered_fetch = false;  // this task's model needed its own fetch
};

struct WorkerCounters {
    std::uint64_t hits = 0;
    std::uint64_t misses = 0;
    std::uint64_t fetches = 0;
    std::uint64_t tasks_executed = 0;
    double busy_time_s = 0;
};

struct RunningTask {
    QueuedTask task;
    double start_s = 0;
    double end_s = 0;
};

struct InFlightFetch {
    ModelId model = 0;
    double complete_s = 0;
};

struct WorkerState {
    WorkerId id = 0;
    std::deque<QueuedTask> exec_queue;
    std::optional<RunningTask> running;
    std::optional<InFlightFetch> fetch;
    GpuCache cache;

    WorkerState(WorkerId wid, std::uint64_t gpu_capacity)
        : id(wid), cache(gpu_capacity) {}

    WorkerCounters counters;

    // FT(w): now + remaining runtime of the in-flight task + sum of expected
    // runtimes over the queue.
    double estimate_ft(double now_s) const {
        double ft = now_s;
        if (running) ft += std::max(0.0, running->end_s - now_s);
        for (const auto& q : exec_queue) ft += q.expected_runtime_s;
        return ft;
    }

    // Models required by queued tasks, in queue order (for lookahead).
    std::vector<ModelId> upcoming_models() const {
        std::vector<ModelId> out;
        for (const auto& q : exec_queue)
            if (q.model) out.push_back(*q.model);
        return out;
    }
};

}  // namespace compass
