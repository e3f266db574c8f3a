#include "compass/scheduler.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace compass {

SchedulerKind scheduler_kind_from_string(const std::string& s) {
    if (s == "compass") return SchedulerKind::compass;
    if (s == "jit") return SchedulerKind::jit;
    if (s == "heft") return SchedulerKind::heft;
    if (s == "hash") return SchedulerKind::hash;
    throw std::invalid_argument("unknown scheduler: " + s);
}

std::string to_string(SchedulerKind k) {
    switch (k) {
        case SchedulerKind::compass: return "compass";
        case SchedulerKind::jit: return "jit";
        case SchedulerKind::heft: return "heft";
        case SchedulerKind::hash: return "hash";
    }
    return "?";
}

PlanContext PlanContext::from_view(const SstView& view, double now_s) {
    PlanContext ctx;
    ctx.now_s = now_s;
    ctx.worker_ft.reserve(view.rows.size());
    for (const auto& row : view.rows) {
        // A worker cannot finish its queue before the present, however stale
        // the row is.
        ctx.worker_ft.push_back(std::max(row.queue_finish_time_s, now_s));
        ctx.cache_bitmap.push_back(row.cache_bitmap);
        ctx.available_cache.push_back(row.available_cache);
    }
    ctx.pending_fetch.assign(view.rows.size(), 0);
    return ctx;
}

double model_fetch_time(const TaskSpec& task, WorkerId w, const PlanContext& ctx,
                        const ModelCatalog& catalog, const LinkParams& link,
                        const SchedulerOptions& opts) {
    if (!task.model) return 0;
    if (!opts.model_locality) return 0;
    ModelId m = *task.model;
    std::uint64_t bit = std::uint64_t{1} << m;
    if ((ctx.cache_bitmap[w] & bit) || (ctx.pending_fetch[w] & bit)) return 0;
    const ModelSpec& spec = catalog.by_id(m);
    double base = td_model_fetch(spec.size_bytes, link);
    if (spec.size_bytes <= ctx.available_cache[w]) return base;
    double penalty = opts.penalty_mode == PenaltyMode::proportional
                         ? base
                         : opts.penalty_value_s;
    return base + penalty;
}

double at_all_inputs(const Dfg& dfg, int task, WorkerId w, const Adfg& adfg,
                     double job_arrival_s, const LinkParams& link) {
    const auto& preds = dfg.predecessors(task);
    if (preds.empty()) return job_arrival_s;
    double at = 0;
    for (int p : preds) {
        WorkerId wp = adfg.assignment.at(p);
        if (wp < 0) throw std::logic_error("predecessor not yet assigned");
        double arrival = adfg.planned_ft_s.at(p);
        if (wp != w) arrival += td_transfer(dfg.task(p).output_bytes, link);
        at = std::max(at, arrival);
    }
    return at;
}

namespace {

// Descending rank, ties by insertion (task index) order.
std::vector<int> rank_order(const std::vector<double>& ranks) {
    std::vector<int> order(ranks.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return ranks[a] > ranks[b]; });
    return order;
}

}  // namespace

Adfg plan_job(const JobInstance& job, const Dfg& dfg,
              const std::vector<double>& ranks, PlanContext& ctx,
              const RuntimeModel& rt, const ModelCatalog& catalog,
              const LinkParams& link, const SchedulerOptions& opts) {
    Adfg adfg;
    adfg.job_id = job.job_id;
    adfg.assignment.assign(dfg.task_count(), -1);
    adfg.planned_ft_s.assign(dfg.task_count(), 0);

    for (int t : rank_order(ranks)) {
        const TaskSpec& ts = dfg.task(t);
        WorkerId best_w = 0;
        double best_ft = 0;
        for (WorkerId w = 0; w < ctx.worker_count(); ++w) {
            double x = std::max(ctx.worker_ft[w],
                                at_all_inputs(dfg, t, w, adfg, job.arrival_time_s, link));
            double ft = x + model_fetch_time(ts, w, ctx, catalog, link, opts) +
                        rt.r(ts, w);
            if (w == 0 || ft < best_ft) {
                best_w = w;
                best_ft = ft;
            }
        }
        adfg.assignment[t] = best_w;
        adfg.planned_ft_s[t] = best_ft;
        ctx.worker_ft[best_w] = best_ft;
        if (ts.model && opts.model_locality) {
            std::uint64_t bit = std::uint64_t{1} << *ts.model;
            if (!(ctx.cache_bitmap[best_w] & bit) &&
                !(ctx.pending_fetch[best_w] & bit)) {
                ctx.pending_fetch[best_w] |= bit;
                std::uint64_t sz = catalog.by_id(*ts.model).size_bytes;
                ctx.available_cache[best_w] =
                    ctx.available_cache[best_w] > sz
                        ? ctx.available_cache[best_w] - sz
                        : 0;
            }
        }
    }
    return adfg;
}

Adfg heft_plan(const JobInstance& job, const Dfg& dfg,
               const std::vector<double>& ranks, int worker_count,
               const RuntimeModel& rt, const LinkParams& link) {
    Adfg adfg;
    adfg.job_id = job.job_id;
    adfg.assignment.assign(dfg.task_count(), -1);
    adfg.planned_ft_s.assign(dfg.task_count(), 0);

    std::vector<double> worker_ft(worker_count, job.arrival_time_s);
    for (int t : rank_order(ranks)) {
        const TaskSpec& ts = dfg.task(t);
        WorkerId best_w = 0;
        double best_ft = 0;
        for (int i = 0; i < worker_count; ++i) {
            // ties resolve from the planning worker's own position outward,
            // as each origin runs the algorithm independently
            WorkerId w = (job.origin_worker + i) % worker_count;
            double x = std::max(worker_ft[w],
                                at_all_inputs(dfg, t, w, adfg, job.arrival_time_s, link));
            double ft = x + rt.r(ts, w);
            if (i == 0 || ft < best_ft) {
                best_w = w;
                best_ft = ft;
            }
        }
        adfg.assignment[t] = best_w;
        adfg.planned_ft_s[t] = best_ft;
        worker_ft[best_w] = best_ft;
    }
    return adfg;
}

WorkerId adjust_task(const Dfg& dfg, int successor, WorkerId completing_worker,
                     Adfg& adfg, const PlanContext& ctx, const RuntimeModel& rt,
                     const ModelCatalog& catalog, const LinkParams& link,
                     const SchedulerOptions& opts) {
    WorkerId planned = adfg.assignment.at(successor);
    if (dfg.is_join(successor)) return planned;

    const TaskSpec& ts = dfg.task(successor);
    double ft_planned = ctx.worker_ft.at(planned);
    if (ft_planned - ctx.now_s <= rt.r(ts, planned) * opts.threshold)
        return planned;

    WorkerId best_w = 0;
    double best_ft = 0;
    for (int i = 0; i < ctx.worker_count(); ++i) {
        // the scheduler on the completing worker scans outward from itself
        WorkerId w = (completing_worker + i) % ctx.worker_count();
        double ft = ctx.worker_ft[w] +
                    model_fetch_time(ts, w, ctx, catalog, link, opts) +
                    rt.r(ts, w);
        if (w != completing_worker)
            ft += td_transfer(ts.input_bytes, link);
        if (i == 0 || ft < best_ft) {
            best_w = w;
            best_ft = ft;
        }
    }
    adfg.assignment[successor] = best_w;
    adfg.planned_ft_s[successor] = best_ft;
    return best_w;
}

WorkerId jit_assign(const Dfg& dfg, int task, const std::vector<WorkerId>& pred_workers,
                    double now_s, WorkerId self_worker, const PlanContext& ctx,
                    const ModelCatalog& catalog, const LinkParams& link,
                    const SchedulerOptions& opts) {
    const auto& preds = dfg.predecessors(task);
    const TaskSpec& ts = dfg.task(task);
    WorkerId best_w = 0;
    double best_start = 0;
    for (int i = 0; i < ctx.worker_count(); ++i) {
        WorkerId w = (self_worker + i) % ctx.worker_count();
        double inputs_at = now_s;
        for (std::size_t p = 0; p < preds.size(); ++p) {
            double arrival = now_s;
            if (pred_workers.at(p) != w)
                arrival += td_transfer(dfg.task(preds[p]).output_bytes, link);
            inputs_at = std::max(inputs_at, arrival);
        }
        double start = std::max(ctx.worker_ft[w], inputs_at) +
                       model_fetch_time(ts, w, ctx, catalog, link, opts);
        if (i == 0 || start < best_start) {
            best_w = w;
            best_start = start;
        }
    }
    return best_w;
}

std::uint64_t stable_hash64(const std::string& s) {
    // FNV-1a
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

WorkerId hash_assign(const std::string& task_id, int job_id, int worker_count) {
    std::uint64_t h = stable_hash64(task_id + ":" + std::to_string(job_id));
    return static_cast<WorkerId>(h % static_cast<std::uint64_t>(worker_count));
}

}  // namespace compass
