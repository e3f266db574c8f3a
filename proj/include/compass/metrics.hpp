#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "compass/worker.hpp"

namespace compass {

struct JobRecord {
    int job_id = 0;
    std::string dfg_id;
    double arrival_s = 0;
    double completion_s = 0;
    double latency_s = 0;
    double lower_bound_s = 0;
    double slow_down_factor = 0;
};

struct WorkerReport {
    WorkerId worker = 0;
    std::uint64_t hits = 0;
    std::uint64_t misses = 0;
    std::uint64_t fetches = 0;
    std::uint64_t evictions = 0;
    std::uint64_t tasks_executed = 0;
    double busy_time_s = 0;
};

struct SimResult {
    std::vector<JobRecord> jobs;
    std::vector<WorkerReport> workers;
    std::uint64_t seed = 0;
    std::uint64_t config_hash = 0;
    std::string scheduler;
    double run_duration_s = 0;  // last completion time
};

double slow_down_factor(double latency_s, double lower_bound_s);

struct Quantiles {
    double q1 = 0, median = 0, q3 = 0;
    double whisker_lo = 0, whisker_hi = 0;  // 1.5 x IQR, clamped to data
};

// Linear interpolation between order statistics.
double quantile(std::vector<double> values, double q);
Quantiles box_stats(const std::vector<double>& values);

struct SummaryRow {
    std::string scope;  // dfg id or "overall"
    std::uint64_t job_count = 0;
    double mean_latency_s = 0;
    double sdf_mean = 0;
    Quantiles sdf;
};

struct RunSummary {
    std::vector<SummaryRow> rows;  // per-dfg rows then overall
    double hit_rate = 0;
    double gpu_utilization = 0;  // busy-time proxy, not a hardware measurement
    std::uint64_t fetches = 0;
    std::uint64_t evictions = 0;
    int active_workers = 0;  // workers with >= 1 executed task
};

RunSummary summarize(const SimResult& result);

// Writes jobs.csv, summary.csv and run_meta into `dir` (created if needed).
void write_results(const SimResult& result, const std::string& dir);

std::vector<JobRecord> read_jobs_csv(const std::string& path);

}  // namespace compass
