#include "compass/presets.hpp"

#include <sstream>
#include <stdexcept>

namespace compass {

namespace {

std::string num_tag(double v) {
    std::ostringstream ss;
    ss << v;
    std::string s = ss.str();
    for (auto& c : s)
        if (c == '.') c = 'p';
    return s;
}

}  // namespace

std::vector<std::string> preset_names() {
    return {"low_load",  "high_load",      "vary_load",  "ablation",
            "staleness_sweep", "scalability", "trace_replay"};
}

std::vector<PresetRun> expand_preset(const std::string& preset, const SimConfig& base,
                                     const std::set<std::string>& fixed) {
    std::vector<PresetRun> runs;
    auto is_fixed = [&](const std::string& k) { return fixed.count(k) > 0; };

    SimConfig cfg = base;
    cfg.workload.mode = WorkloadSpec::Mode::poisson;

    if (preset == "low_load" || preset == "high_load") {
        if (!is_fixed("cluster.worker_count")) cfg.cluster.worker_count = 5;
        if (!is_fixed("workload.rate"))
            cfg.workload.rate_per_s = preset == "low_load" ? 0.5 : 2.0;
        if (!is_fixed("workload.num_jobs")) cfg.workload.num_jobs = 500;
        runs.push_back({preset, cfg});
    } else if (preset == "vary_load") {
        if (!is_fixed("cluster.worker_count")) cfg.cluster.worker_count = 5;
        if (!is_fixed("workload.num_jobs")) cfg.workload.num_jobs = 500;
        if (is_fixed("workload.rate")) {
            runs.push_back({"rate_" + num_tag(cfg.workload.rate_per_s), cfg});
        } else {
            for (double rate : {0.5, 1.0, 1.5, 2.0, 2.5}) {
                SimConfig c = cfg;
                c.workload.rate_per_s = rate;
                runs.push_back({"rate_" + num_tag(rate), c});
            }
        }
    } else if (preset == "ablation") {
        if (!is_fixed("cluster.worker_count")) cfg.cluster.worker_count = 5;
        if (!is_fixed("workload.rate")) cfg.workload.rate_per_s = 2.0;
        if (!is_fixed("workload.num_jobs")) cfg.workload.num_jobs = 500;
        cfg.scheduler.kind = SchedulerKind::compass;

        SimConfig full = cfg;
        full.scheduler.dynamic_adjustment = true;
        full.scheduler.model_locality = true;
        full.cluster.eviction_policy = EvictionPolicy::lookahead;
        runs.push_back({"full", full});

        SimConfig no_dyn = full;
        no_dyn.scheduler.dynamic_adjustment = false;
        runs.push_back({"no_dynamic_adjustment", no_dyn});

        SimConfig no_loc = full;
        no_loc.scheduler.model_locality = false;
        runs.push_back({"no_model_locality", no_loc});

        SimConfig fifo = full;
        fifo.cluster.eviction_policy = EvictionPolicy::fifo;
        runs.push_back({"fifo_eviction", fifo});
    } else if (preset == "staleness_sweep") {
        if (!is_fixed("cluster.worker_count")) cfg.cluster.worker_count = 5;
        if (!is_fixed("workload.rate")) cfg.workload.rate_per_s = 2.0;
        if (!is_fixed("workload.num_jobs")) cfg.workload.num_jobs = 500;
        const double grid[] = {0.1, 0.2, 0.5, 1.0};
        for (double s : grid) {
            SimConfig c = cfg;
            c.sst.load_interval_s = s;
            c.sst.cache_interval_s = 0.2;
            runs.push_back({"load_" + num_tag(s), c});
        }
        for (double s : grid) {
            SimConfig c = cfg;
            c.sst.load_interval_s = 0.2;
            c.sst.cache_interval_s = s;
            runs.push_back({"cache_" + num_tag(s), c});
        }
    } else if (preset == "scalability") {
        if (!is_fixed("workload.rate")) cfg.workload.rate_per_s = 40.0;
        if (!is_fixed("workload.num_jobs")) cfg.workload.num_jobs = 4000;
        std::vector<int> worker_grid = {100, 125, 150, 175, 200, 250};
        if (is_fixed("cluster.worker_count"))
            worker_grid = {base.cluster.worker_count};
        std::vector<SchedulerKind> kinds = {SchedulerKind::compass, SchedulerKind::hash};
        if (is_fixed("scheduler.kind")) kinds = {base.scheduler.kind};
        for (SchedulerKind k : kinds) {
            for (int w : worker_grid) {
                SimConfig c = cfg;
                c.scheduler.kind = k;
                c.cluster.worker_count = w;
                runs.push_back({to_string(k) + "_w" + std::to_string(w), c});
            }
        }
    } else if (preset == "trace_replay") {
        cfg.workload.mode = WorkloadSpec::Mode::trace;
        if (cfg.workload.trace_path.empty())
            throw std::invalid_argument("trace_replay preset requires --trace");
        if (!is_fixed("cluster.worker_count")) cfg.cluster.worker_count = 5;
        runs.push_back({"trace", cfg});
    } else {
        throw std::invalid_argument("unknown preset: " + preset);
    }
    return runs;
}

}  // namespace compass
