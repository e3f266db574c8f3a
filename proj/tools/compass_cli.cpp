#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "compass/engine.hpp"
#include "compass/metrics.hpp"
#include "compass/presets.hpp"

namespace {

using namespace compass;

struct RunArgs {
    std::string preset;
    std::string config_file;
    std::string out_dir = "results";
    std::string scheduler;
    std::string eviction;
    std::string trace;
    int workers = -1;
    double rate = -1;
    double threshold = -1;
    double sst_load_interval = -1;
    double sst_cache_interval = -1;
    double rescale = -1;
    bool no_dynamic_adjustment = false;
    bool no_model_locality = false;
    std::vector<std::uint64_t> seeds;
};

int do_run(const RunArgs& args) {
    std::map<std::string, std::string> kv;
    if (!args.config_file.empty()) kv = read_config_file(args.config_file);

    // CLI flags override file values; both mark the key as fixed so presets
    // do not sweep over it.
    std::set<std::string> fixed;
    for (const auto& [k, _] : kv) fixed.insert(k);
    auto set = [&](const std::string& k, const std::string& v) {
        kv[k] = v;
        fixed.insert(k);
    };
    if (!args.scheduler.empty()) set("scheduler.kind", args.scheduler);
    if (!args.eviction.empty()) set("cluster.eviction_policy", args.eviction);
    if (!args.trace.empty()) set("workload.trace", args.trace);
    if (args.workers > 0) set("cluster.worker_count", std::to_string(args.workers));
    if (args.rate > 0) set("workload.rate", std::to_string(args.rate));
    if (args.threshold > 0) set("scheduler.threshold", std::to_string(args.threshold));
    if (args.sst_load_interval >= 0)
        set("sst.load_interval_s", std::to_string(args.sst_load_interval));
    if (args.sst_cache_interval >= 0)
        set("sst.cache_interval_s", std::to_string(args.sst_cache_interval));
    if (args.rescale > 0) set("workload.rescale", std::to_string(args.rescale));
    if (args.no_dynamic_adjustment) set("scheduler.dynamic_adjustment", "false");
    if (args.no_model_locality) set("scheduler.model_locality", "false");

    SimConfig base = parse_config(kv);

    std::vector<PresetRun> runs;
    if (!args.preset.empty()) {
        runs = expand_preset(args.preset, base, fixed);
    } else {
        runs.push_back({"run", base});
    }

    std::vector<std::uint64_t> seeds = args.seeds;
    if (seeds.empty()) seeds.push_back(base.seed);

    bool audits_clean = true;
    for (const auto& pr : runs) {
        for (std::uint64_t seed : seeds) {
            SimConfig cfg = pr.config;
            cfg.seed = seed;
            cfg.record_trace = true;
            SimOutput out = run_simulation_full(cfg);
            AuditReport audit =
                audit_trace(out.trace, cfg.workflow_file.empty()
                                           ? builtin_workflows()
                                           : load_workflow_file(cfg.workflow_file),
                            out.jobs, out.job_dfg);
            std::string dir = args.out_dir + "/" + pr.name +
                              (seeds.size() > 1 ? "_seed" + std::to_string(seed) : "");
            write_results(out.result, dir);
            RunSummary s = summarize(out.result);
            const SummaryRow& overall = s.rows.back();
            std::printf("%-28s seed=%llu jobs=%llu median_sdf=%.3f mean_latency=%.3fs "
                        "hit_rate=%.3f audit_violations=%llu\n",
                        pr.name.c_str(), static_cast<unsigned long long>(seed),
                        static_cast<unsigned long long>(overall.job_count),
                        overall.sdf.median, overall.mean_latency_s, s.hit_rate,
                        static_cast<unsigned long long>(audit.total() +
                                                        out.join_relocations));
            if (audit.total() + out.join_relocations > 0) audits_clean = false;
        }
    }
    return audits_clean ? 0 : 1;
}

int do_compare(const std::vector<std::string>& dirs) {
    struct Col {
        std::string dir;
        std::map<std::string, std::pair<double, double>> rows;  // scope -> (median, mean latency)
    };
    std::vector<Col> cols;
    for (const auto& dir : dirs) {
        std::string path = dir + "/summary.csv";
        std::ifstream f(path);
        if (!f) {
            std::cerr << "error: missing " << path << "\n";
            return 1;
        }
        Col col;
        col.dir = dir;
        std::string line;
        std::getline(f, line);  // header
        while (std::getline(f, line)) {
            std::istringstream ss(line);
            std::string scope, tok;
            std::getline(ss, scope, ',');
            std::getline(ss, tok, ',');  // job_count
            std::getline(ss, tok, ',');
            double mean_latency = std::stod(tok);
            std::getline(ss, tok, ',');  // sdf_mean
            std::getline(ss, tok, ',');  // q1
            std::getline(ss, tok, ',');
            double median = std::stod(tok);
            col.rows[scope] = {median, mean_latency};
        }
        cols.push_back(std::move(col));
    }

    std::printf("%-16s", "scope");
    for (const auto& c : cols) std::printf("  %-28s", c.dir.c_str());
    std::printf("\n");
    for (const auto& [scope, _] : cols.front().rows) {
        std::printf("%-16s", scope.c_str());
        for (const auto& c : cols) {
            auto it = c.rows.find(scope);
            if (it == c.rows.end())
                std::printf("  %-28s", "-");
            else {
                double base = cols.front().rows.count(scope)
                                  ? cols.front().rows.at(scope).first
                                  : 0;
                double ratio = base != 0 ? it->second.first / base : 0;
                std::printf("  med=%-7.3f lat=%-7.3f x%-5.2f", it->second.first,
                            it->second.second, ratio);
            }
        }
        std::printf("\n");
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"DAG workflow scheduling simulator"};
    app.require_subcommand(1);

    RunArgs run_args;
    auto* run = app.add_subcommand("run", "execute a preset or config");
    run->add_option("--preset", run_args.preset, "experiment preset")
        ->check(CLI::IsMember(compass::preset_names()));
    run->add_option("--config", run_args.config_file, "config file (key = value)");
    run->add_option("--out", run_args.out_dir, "result directory");
    run->add_option("--scheduler", run_args.scheduler)
        ->check(CLI::IsMember({"compass", "jit", "heft", "hash"}));
    run->add_option("--workers", run_args.workers);
    run->add_option("--rate", run_args.rate);
    run->add_option("--seed", run_args.seeds, "seed (repeatable)");
    run->add_option("--seeds", run_args.seeds, "seed list")->delimiter(',');
    run->add_option("--threshold", run_args.threshold);
    run->add_option("--sst-load-interval", run_args.sst_load_interval);
    run->add_option("--sst-cache-interval", run_args.sst_cache_interval);
    run->add_flag("--no-dynamic-adjustment", run_args.no_dynamic_adjustment);
    run->add_flag("--no-model-locality", run_args.no_model_locality);
    run->add_option("--eviction", run_args.eviction)
        ->check(CLI::IsMember({"fifo", "lookahead"}));
    run->add_option("--trace", run_args.trace, "trace CSV for replay");
    run->add_option("--rescale", run_args.rescale, "trace time rescale factor");

    std::vector<std::string> compare_dirs;
    auto* cmp = app.add_subcommand("compare", "tabulate result directories");
    cmp->add_option("dirs", compare_dirs, "result directories")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return do_run(run_args);
        if (cmp->parsed()) return do_compare(compare_dirs);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
