#include "compass/engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <queue>
#include <set>
#include <stdexcept>

#include "compass/scheduler.hpp"
#include "compass/sst.hpp"
#include "compass/workload.hpp"

namespace compass {

namespace {

constexpr double kUsPerS = 1e6;

std::int64_t to_us(double s) { return std::llround(s * kUsPerS); }
double to_s(std::int64_t us) { return static_cast<double>(us) / kUsPerS; }

struct Event {
    std::int64_t t_us;
    std::uint64_t seq;
    EventKind kind;
    int job = -1;
    int task = -1;
    int worker = -1;
    int model = -1;
    int stream = 0;  // sst_publish: 0 = load, 1 = cache

    bool operator>(const Event& o) const {
        if (t_us != o.t_us) return t_us > o.t_us;
        return seq > o.seq;
    }
};

struct TaskState {
    bool pushed = false;
    bool started = false;
    bool completed = false;
    int inputs_arrived = 0;
    double last_input_s = 0;
    double completion_s = 0;
};

struct JobState {
    JobInstance job;
    Adfg adfg;
    std::vector<TaskState> tasks;
    std::size_t done = 0;
    double completion_s = -1;
};

class Engine {
public:
    explicit Engine(const SimConfig& cfg)
        : cfg_(cfg),
          workflows_(cfg.workflow_file.empty() ? builtin_workflows()
                                               : load_workflow_file(cfg.workflow_file)),
          monitor_(cfg.cluster.worker_count),
          rng_(cfg.seed ^ 0xc0ffee) {
        cfg_.validate(workflows_);
        for (const auto& dfg : workflows_.dfgs) {
            ranks_.push_back(compute_ranks(dfg, cfg_.cluster.runtime, cfg_.cluster.link));
            lower_bounds_.push_back(compute_lower_bound(dfg));
        }
        for (int w = 0; w < cfg_.cluster.worker_count; ++w)
            workers_.emplace_back(w, cfg_.cluster.gpu_capacity_bytes);
    }

    SimOutput run() {
        auto jobs = generate_workload(cfg_.workload, workflows_, cfg_.seed);
        for (auto& j : jobs) {
            j.origin_worker = j.job_id % cfg_.cluster.worker_count;
            // quantize to the event clock so latencies stay on the same grid
            j.arrival_time_s = to_s(to_us(j.arrival_time_s));
        }
        jobs_.reserve(jobs.size());
        for (const auto& j : jobs) {
            JobState js;
            js.job = j;
            js.tasks.resize(workflows_.dfgs[j.dfg_index].task_count());
            js.adfg.job_id = j.job_id;
            js.adfg.assignment.assign(js.tasks.size(), -1);
            js.adfg.planned_ft_s.assign(js.tasks.size(), 0);
            jobs_.push_back(std::move(js));
            push_event({to_us(j.arrival_time_s), 0, EventKind::job_arrival, j.job_id});
        }

        // Initial rows plus the periodic publish streams.
        if (!jobs_.empty()) {
            publish_all_load(0);
            publish_all_cache(0);
            if (cfg_.sst.load_interval() > 0)
                push_event({to_us(cfg_.sst.load_interval()), 0, EventKind::sst_publish,
                            -1, -1, -1, -1, 0});
            if (cfg_.sst.cache_interval() > 0)
                push_event({to_us(cfg_.sst.cache_interval()), 0, EventKind::sst_publish,
                            -1, -1, -1, -1, 1});
        }

        std::int64_t cap_us = cfg_.max_time_s > 0 ? to_us(cfg_.max_time_s)
                                                  : std::numeric_limits<std::int64_t>::max();
        while (!queue_.empty()) {
            Event ev = queue_.top();
            queue_.pop();
            if (ev.t_us > cap_us) break;
            now_us_ = ev.t_us;
            dispatch(ev);
        }
        record_trace({cap_us == std::numeric_limits<std::int64_t>::max() ? now_us_ : cap_us,
                      seq_++, EventKind::sim_end});

        return finalize();
    }

private:
    void push_event(Event ev) {
        ev.seq = seq_++;
        queue_.push(ev);
    }

    void record_trace(TraceEvent te) {
        if (cfg_.record_trace) out_.trace.push_back(te);
    }
    void record(EventKind kind, int job, int task, int worker, int model = -1) {
        record_trace({now_us_, seq_++, kind, job, task, worker, model});
    }

    double now_s() const { return to_s(now_us_); }

    const Dfg& dfg_of(const JobState& js) const {
        return workflows_.dfgs[js.job.dfg_index];
    }

    bool all_done() const { return done_jobs_ == jobs_.size(); }

    // ---- SST ----

    void publish_all_load(double t) {
        for (auto& w : workers_) monitor_.publish_load(w.id, t, w.estimate_ft(t));
        ++out_.sst_publishes;
    }
    void publish_all_cache(double t) {
        for (auto& w : workers_)
            monitor_.publish_cache(w.id, t, w.cache.bitmap(), w.cache.available());
        ++out_.sst_publishes;
    }

    SstView view() const {
        bool load_live = cfg_.sst.load_interval() == 0;
        bool cache_live = cfg_.sst.cache_interval() == 0;
        SstView v = monitor_.view_at(now_s());
        if (load_live || cache_live) {
            for (auto& row : v.rows) {
                const WorkerState& w = workers_[row.worker];
                if (load_live) {
                    row.queue_finish_time_s = w.estimate_ft(now_s());
                    row.publish_time_s = now_s();
                }
                if (cache_live) {
                    row.cache_bitmap = w.cache.bitmap();
                    row.available_cache = w.cache.available();
                }
            }
        }
        return v;
    }

    // ---- event dispatch ----

    void dispatch(const Event& ev) {
        switch (ev.kind) {
            case EventKind::job_arrival:
                record(EventKind::job_arrival, ev.job, -1, -1);
                push_event({now_us_ + to_us(cfg_.plan_cost_s), 0,
                            EventKind::plan_complete, ev.job});
                break;
            case EventKind::plan_complete:
                handle_plan(jobs_[ev.job]);
                break;
            case EventKind::input_arrival:
                handle_input_arrival(jobs_[ev.job], ev.task);
                break;
            case EventKind::model_fetch_complete:
                handle_fetch_complete(workers_[ev.worker], ev.model);
                break;
            case EventKind::task_complete:
                handle_task_complete(workers_[ev.worker], jobs_[ev.job], ev.task);
                break;
            case EventKind::sst_publish:
                handle_sst_publish(ev.stream);
                break;
            case EventKind::task_start:
            case EventKind::sim_end:
                break;  // trace markers only
        }
    }

    void handle_sst_publish(int stream) {
        if (stream == 0)
            publish_all_load(now_s());
        else
            publish_all_cache(now_s());
        double interval = stream == 0 ? cfg_.sst.load_interval() : cfg_.sst.cache_interval();
        if (!all_done())
            push_event({now_us_ + to_us(interval), 0, EventKind::sst_publish, -1, -1,
                        -1, -1, stream});
    }

    void handle_plan(JobState& js) {
        const Dfg& dfg = dfg_of(js);
        const auto& ranks = ranks_[js.job.dfg_index];
        switch (cfg_.scheduler.kind) {
            case SchedulerKind::compass: {
                PlanContext ctx = PlanContext::from_view(view(), now_s());
                js.adfg = plan_job(js.job, dfg, ranks, ctx, cfg_.cluster.runtime,
                                   workflows_.catalog, cfg_.cluster.link, cfg_.scheduler);
                break;
            }
            case SchedulerKind::heft:
                js.adfg = heft_plan(js.job, dfg, ranks, cfg_.cluster.worker_count,
                                    cfg_.cluster.runtime, cfg_.cluster.link);
                break;
            case SchedulerKind::hash:
                for (std::size_t t = 0; t < dfg.task_count(); ++t)
                    js.adfg.assignment[t] = hash_assign(dfg.task(static_cast<int>(t)).id,
                                                        js.job.job_id,
                                                        cfg_.cluster.worker_count);
                break;
            case SchedulerKind::jit: {
                PlanContext ctx = PlanContext::from_view(view(), now_s());
                js.adfg.assignment[dfg.entry()] =
                    jit_assign(dfg, dfg.entry(), {}, now_s(), js.job.origin_worker,
                               ctx, workflows_.catalog, cfg_.cluster.link,
                               cfg_.scheduler);
                break;
            }
        }
        push_task(js, dfg.entry());
    }

    void push_task(JobState& js, int t) {
        const Dfg& dfg = dfg_of(js);
        WorkerId w = js.adfg.assignment[t];
        if (w < 0) throw std::logic_error("pushing unassigned task");
        TaskState& ts = js.tasks[t];
        ts.pushed = true;
        const TaskSpec& spec = dfg.task(t);
        QueuedTask q;
        q.job_id = js.job.job_id;
        q.dfg_index = js.job.dfg_index;
        q.task_index = t;
        q.model = spec.model;
        q.expected_runtime_s = cfg_.cluster.runtime.r(spec, w);
        q.inputs_pending = static_cast<int>(dfg.predecessors(t).size()) - ts.inputs_arrived;
        q.enqueue_time_s = now_s();
        q.ready_time_s = now_s();
        workers_[w].exec_queue.push_back(q);
        try_dispatch(workers_[w]);
    }

    void handle_input_arrival(JobState& js, int t) {
        TaskState& ts = js.tasks[t];
        ++ts.inputs_arrived;
        ts.last_input_s = now_s();
        record(EventKind::input_arrival, js.job.job_id, t, js.adfg.assignment[t]);
        WorkerId w = js.adfg.assignment[t];
        if (w < 0) throw std::logic_error("input arrival for unassigned task");
        if (ts.pushed) {
            WorkerState& ws = workers_[w];
            for (auto& q : ws.exec_queue) {
                if (q.job_id == js.job.job_id && q.task_index == t) {
                    --q.inputs_pending;
                    q.ready_time_s = now_s();
                    break;
                }
            }
            try_dispatch(ws);
        }
    }

    void handle_fetch_complete(WorkerState& ws, ModelId m) {
        ws.cache.commit(m, now_s());
        ws.fetch.reset();
        record(EventKind::model_fetch_complete, -1, -1, ws.id, m);
        try_dispatch(ws);
    }

    void handle_task_complete(WorkerState& ws, JobState& js, int t) {
        const Dfg& dfg = dfg_of(js);
        RunningTask done = *ws.running;
        ws.running.reset();
        ws.counters.busy_time_s += done.end_s - done.start_s;
        ++ws.counters.tasks_executed;
        record(EventKind::task_complete, js.job.job_id, t, ws.id);

        TaskState& ts = js.tasks[t];
        ts.completed = true;
        ts.completion_s = now_s();
        ++js.done;
        if (t == dfg.exit()) {
            js.completion_s = now_s();
            ++done_jobs_;
        }

        for (int s : dfg.successors(t)) route_successor(js, t, s);
        try_dispatch(ws);
    }

    void route_successor(JobState& js, int t, int s) {
        const Dfg& dfg = dfg_of(js);
        WorkerId from = js.adfg.assignment[t];

        if (cfg_.scheduler.kind == SchedulerKind::jit) {
            // Assignment happens only once the last input is produced.
            const auto& preds = dfg.predecessors(s);
            bool all_done = true;
            for (int p : preds)
                if (!js.tasks[p].completed) all_done = false;
            if (!all_done) return;
            PlanContext ctx = PlanContext::from_view(view(), now_s());
            std::vector<WorkerId> pred_workers;
            for (int p : preds) pred_workers.push_back(js.adfg.assignment[p]);
            WorkerId w = jit_assign(dfg, s, pred_workers, now_s(), from, ctx,
                                    workflows_.catalog, cfg_.cluster.link,
                                    cfg_.scheduler);
            js.adfg.assignment[s] = w;
            push_task(js, s);
            for (int p : preds) {
                double delay = js.adfg.assignment[p] == w
                                   ? 0
                                   : td_transfer(dfg.task(p).output_bytes,
                                                 cfg_.cluster.link);
                push_event({now_us_ + to_us(delay), 0, EventKind::input_arrival,
                            js.job.job_id, s});
            }
            return;
        }

        if (cfg_.scheduler.kind == SchedulerKind::compass &&
            cfg_.scheduler.dynamic_adjustment && !js.tasks[s].pushed) {
            PlanContext ctx = PlanContext::from_view(view(), now_s());
            WorkerId before = js.adfg.assignment[s];
            WorkerId after = adjust_task(dfg, s, from, js.adfg, ctx,
                                         cfg_.cluster.runtime, workflows_.catalog,
                                         cfg_.cluster.link, cfg_.scheduler);
            if (after != before) {
                ++out_.adjustments;
                if (dfg.is_join(s)) ++out_.join_relocations;
            }
        }

        if (!js.tasks[s].pushed) push_task(js, s);
        double delay = js.adfg.assignment[s] == from
                           ? 0
                           : td_transfer(dfg.task(t).output_bytes, cfg_.cluster.link);
        push_event({now_us_ + to_us(delay), 0, EventKind::input_arrival,
                    js.job.job_id, s});
    }

    // ---- worker dispatch loop ----

    void try_dispatch(WorkerState& ws) {
        bool progress = true;
        while (progress) {
            progress = false;
            if (!ws.running) {
                for (auto it = ws.exec_queue.begin(); it != ws.exec_queue.end(); ++it) {
                    if (it->inputs_pending > 0) continue;
                    if (it->model && !ws.cache.resident(*it->model)) continue;
                    start_task(ws, it);
                    progress = true;
                    break;
                }
            }
            if (!ws.fetch) {
                for (auto& q : ws.exec_queue) {
                    if (q.inputs_pending > 0 || !q.model) continue;
                    if (ws.cache.resident(*q.model) || ws.cache.reserved(*q.model))
                        continue;
                    if (start_fetch(ws, q)) progress = true;
                    break;
                }
            }
        }
    }

    void start_task(WorkerState& ws, std::deque<QueuedTask>::iterator it) {
        QueuedTask q = *it;
        ws.exec_queue.erase(it);
        // the fetch itself counted the miss; everything else is a hit
        if (q.model && !q.triggered_fetch) ++ws.counters.hits;
        JobState& js = jobs_[q.job_id];
        js.tasks[q.task_index].started = true;
        double runtime = sample_runtime(q.expected_runtime_s);
        RunningTask rt;
        rt.task = q;
        rt.start_s = now_s();
        rt.end_s = now_s() + runtime;
        ws.running = rt;
        record(EventKind::task_start, q.job_id, q.task_index, ws.id,
               q.model ? *q.model : -1);
        push_event({to_us(rt.end_s), 0, EventKind::task_complete, q.job_id,
                    q.task_index, ws.id});
    }

    bool start_fetch(WorkerState& ws, QueuedTask& q) {
        ModelId m = *q.model;
        const ModelSpec& spec = workflows_.catalog.by_id(m);
        std::set<ModelId> pinned;
        if (ws.running && ws.running->task.model)
            pinned.insert(*ws.running->task.model);
        auto evicted = ws.cache.reserve(
            m, spec.size_bytes, ws.upcoming_models(),
            static_cast<std::size_t>(cfg_.cluster.lookahead_window), pinned,
            cfg_.cluster.eviction_policy);
        if (!evicted) return false;  // pinned model blocks eviction; retry later
        ++ws.counters.misses;
        ++ws.counters.fetches;
        q.triggered_fetch = true;
        double duration = td_model_fetch(spec.size_bytes, cfg_.cluster.link);
        ws.fetch = InFlightFetch{m, now_s() + duration};
        push_event({to_us(ws.fetch->complete_s), 0, EventKind::model_fetch_complete,
                    -1, -1, ws.id, m});
        return true;
    }

    double sample_runtime(double mean) {
        if (cfg_.noise == NoiseModel::deterministic || cfg_.noise_sigma == 0)
            return mean;
        double sigma = cfg_.noise_sigma;
        return mean * std::exp(sigma * rng_.normal() - 0.5 * sigma * sigma);
    }

    // ---- results ----

    SimOutput finalize() {
        SimResult& res = out_.result;
        res.seed = cfg_.seed;
        res.config_hash = cfg_.config_hash();
        res.scheduler = to_string(cfg_.scheduler.kind);
        for (const auto& js : jobs_) {
            out_.jobs.push_back(js.job);
            out_.job_dfg.push_back(js.job.dfg_index);
            if (js.completion_s < 0) continue;  // cut off by max_time cap
            JobRecord rec;
            rec.job_id = js.job.job_id;
            rec.dfg_id = dfg_of(js).id();
            rec.arrival_s = js.job.arrival_time_s;
            rec.completion_s = js.completion_s;
            rec.latency_s = js.completion_s - js.job.arrival_time_s;
            rec.lower_bound_s = lower_bounds_[js.job.dfg_index];
            // noisy runtimes can legitimately beat the mean-based bound
            rec.slow_down_factor =
                cfg_.noise == NoiseModel::deterministic
                    ? slow_down_factor(rec.latency_s, rec.lower_bound_s)
                    : std::max(1.0, rec.latency_s / rec.lower_bound_s);
            res.run_duration_s = std::max(res.run_duration_s, js.completion_s);
            res.jobs.push_back(std::move(rec));
        }
        for (const auto& w : workers_) {
            WorkerReport r;
            r.worker = w.id;
            r.hits = w.counters.hits;
            r.misses = w.counters.misses;
            r.fetches = w.counters.fetches;
            r.evictions = w.cache.eviction_count();
            r.tasks_executed = w.counters.tasks_executed;
            r.busy_time_s = w.counters.busy_time_s;
            res.workers.push_back(r);
        }
        return std::move(out_);
    }

    SimConfig cfg_;
    WorkflowSet workflows_;
    std::vector<std::vector<double>> ranks_;
    std::vector<double> lower_bounds_;
    std::vector<WorkerState> workers_;
    StateMonitor monitor_;
    Rng rng_;

    std::priority_queue<Event, std::vector<Event>, std::greater<Event>> queue_;
    std::vector<JobState> jobs_;
    std::size_t done_jobs_ = 0;
    std::int64_t now_us_ = 0;
    std::uint64_t seq_ = 1;
    SimOutput out_;
};

}  // namespace

SimOutput run_simulation_full(const SimConfig& config) {
    Engine engine(config);
    return engine.run();
}

SimResult run_simulation(const SimConfig& config) {
    return run_simulation_full(config).result;
}

AuditReport audit_trace(const std::vector<TraceEvent>& trace,
                        const WorkflowSet& workflows,
                        const std::vector<JobInstance>& jobs,
                        const std::vector<int>& job_dfg) {
    AuditReport report;

    struct Key {
        int job, task;
        bool operator<(const Key& o) const {
            return job != o.job ? job < o.job : task < o.task;
        }
    };
    std::map<Key, int> inputs_seen;
    std::map<int, std::int64_t> worker_busy_until;
    std::map<int, std::set<ModelId>> worker_resident;
    (void)jobs;

    for (const auto& ev : trace) {
        switch (ev.kind) {
            case EventKind::input_arrival:
                ++inputs_seen[{ev.job, ev.task}];
                break;
            case EventKind::model_fetch_complete:
                worker_resident[ev.worker].insert(ev.model);
                break;
            case EventKind::task_start: {
                const Dfg& dfg = workflows.dfgs[job_dfg[ev.job]];
                int need = static_cast<int>(dfg.predecessors(ev.task).size());
                if (inputs_seen[{ev.job, ev.task}] < need)
                    ++report.start_before_inputs;
                // caches start empty, so residency must come from a fetch
                if (ev.model >= 0 && !worker_resident[ev.worker].count(ev.model))
                    ++report.start_before_model;
                auto it = worker_busy_until.find(ev.worker);
                if (it != worker_busy_until.end() && ev.t_us < it->second)
                    ++report.overlapping_executions;
                break;
            }
            case EventKind::task_complete:
                worker_busy_until[ev.worker] = ev.t_us;
                break;
            default:
                break;
        }
    }
    return report;
}

}  // namespace compass
