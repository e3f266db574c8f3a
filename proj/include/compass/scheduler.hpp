#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "compass/cost.hpp"
#include "compass/model.hpp"
#include "compass/sst.hpp"

namespace compass {

enum class SchedulerKind { compass, jit, heft, hash };

enum class PenaltyMode { proportional, constant };

SchedulerKind scheduler_kind_from_string(const std::string& s);
std::string to_string(SchedulerKind k);

struct SchedulerOptions {
    SchedulerKind kind = SchedulerKind::compass;
    bool dynamic_adjustment = true;
    bool model_locality = true;
    double threshold = 2.0;
    PenaltyMode penalty_mode = PenaltyMode::proportional;
    double penalty_value_s = 0.5;  // used by PenaltyMode::constant
};

// Mutable working state for one planning pass. Finish times start from the
// (stale) view and advance only through this pass's own assignments; models
// the pass decided to fetch count as resident for its later tasks.
struct PlanContext {
    double now_s = 0;
    std::vector<double> worker_ft;
    std::vector<std::uint64_t> cache_bitmap;
    std::vector<std::uint64_t> available_cache;
    std::vector<std::uint64_t> pending_fetch;  // per-worker bitmap

    static PlanContext from_view(const SstView& view, double now_s);
    int worker_count() const { return static_cast<int>(worker_ft.size()); }
};

// Eq.-style model fetch term used when ranking workers: 0 if resident,
// td_model if it fits, td_model + eviction penalty otherwise. Returns 0 for
// every worker when model locality is disabled (the term is excluded from
// ranking; execution still pays the real fetch).
double model_fetch_time(const TaskSpec& task, WorkerId w, const PlanContext& ctx,
                        const ModelCatalog& catalog, const LinkParams& link,
                        const SchedulerOptions& opts);

// Max over predecessors of their planned finish time plus output transfer
// when the predecessor ran on a different worker. Entry tasks yield the job
// arrival time.
double at_all_inputs(const Dfg& dfg, int task, WorkerId w, const Adfg& adfg,
                     double job_arrival_s, const LinkParams& link);

// Greedy rank-order planning: tasks in descending rank, each placed on the
// worker with the earliest estimated finish time.
Adfg plan_job(const JobInstance& job, const Dfg& dfg,
              const std::vector<double>& ranks, PlanContext& ctx,
              const RuntimeModel& rt, const ModelCatalog& catalog,
              const LinkParams& link, const SchedulerOptions& opts);

// Baseline: same rank-order greedy, but assumes idle workers and ignores the
// model fetch term when deciding.
Adfg heft_plan(const JobInstance& job, const Dfg& dfg,
               const std::vector<double>& ranks, int worker_count,
               const RuntimeModel& rt, const LinkParams& link);

// Re-places one successor after its predecessor finished, if the planned
// worker's published backlog exceeds threshold x the task's runtime. Join
// tasks are never moved. Returns the (possibly updated) worker and applies
// it to the ADFG.
WorkerId adjust_task(const Dfg& dfg, int successor, WorkerId completing_worker,
                     Adfg& adfg, const PlanContext& ctx, const RuntimeModel& rt,
                     const ModelCatalog& catalog, const LinkParams& link,
                     const SchedulerOptions& opts);

// Baseline: per-task greedy earliest start over wait + fetch + input
// transfer, decided the moment the task becomes ready. self_worker is the
// worker running the decision; ties scan outward from it.
WorkerId jit_assign(const Dfg& dfg, int task, const std::vector<WorkerId>& pred_workers,
                    double now_s, WorkerId self_worker, const PlanContext& ctx,
                    const ModelCatalog& catalog, const LinkParams& link,
                    const SchedulerOptions& opts);

// Baseline: stable hash of task id + job id, mod worker count.
WorkerId hash_assign(const std::string& task_id, int job_id, int worker_count);

std::uint64_t stable_hash64(const std::string& s);

}  // namespace compass
