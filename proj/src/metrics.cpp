#include "compass/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>
#include <stdexcept>

namespace compass {

double slow_down_factor(double latency_s, double lower_bound_s) {
    if (lower_bound_s <= 0)
        throw std::invalid_argument("lower bound must be > 0");
    if (latency_s < lower_bound_s - 1e-9)
        throw std::logic_error("latency below lower bound: invariant violation");
    // event times sit on a microsecond grid; absorb sub-tolerance rounding
    return std::max(1.0, latency_s / lower_bound_s);
}

double quantile(std::vector<double> values, double q) {
    if (values.empty()) throw std::invalid_argument("quantile of empty set");
    std::sort(values.begin(), values.end());
    double pos = q * static_cast<double>(values.size() - 1);
    std::size_t lo = static_cast<std::size_t>(std::floor(pos));
    std::size_t hi = static_cast<std::size_t>(std::ceil(pos));
    double frac = pos - static_cast<double>(lo);
    return values[lo] * (1.0 - frac) + values[hi] * frac;
}

Quantiles box_stats(const std::vector<double>& values) {
    Quantiles s;
    s.q1 = quantile(values, 0.25);
    s.median = quantile(values, 0.5);
    s.q3 = quantile(values, 0.75);
    double iqr = s.q3 - s.q1;
    double lo = s.q1 - 1.5 * iqr;
    double hi = s.q3 + 1.5 * iqr;
    // whiskers sit on the most extreme data points inside the fences
    s.whisker_lo = s.q3;
    s.whisker_hi = s.q1;
    for (double v : values) {
        if (v >= lo) s.whisker_lo = std::min(s.whisker_lo, v);
        if (v <= hi) s.whisker_hi = std::max(s.whisker_hi, v);
    }
    return s;
}

RunSummary summarize(const SimResult& result) {
    RunSummary summary;

    std::map<std::string, std::vector<const JobRecord*>> by_dfg;
    for (const auto& j : result.jobs) by_dfg[j.dfg_id].push_back(&j);

    auto make_row = [](const std::string& scope,
                       const std::vector<const JobRecord*>& jobs) {
        SummaryRow row;
        row.scope = scope;
        row.job_count = jobs.size();
        std::vector<double> sdf;
        for (const auto* j : jobs) {
            row.mean_latency_s += j->latency_s;
            row.sdf_mean += j->slow_down_factor;
            sdf.push_back(j->slow_down_factor);
        }
        if (!jobs.empty()) {
            row.mean_latency_s /= static_cast<double>(jobs.size());
            row.sdf_mean /= static_cast<double>(jobs.size());
            row.sdf = box_stats(sdf);
        }
        return row;
    };

    for (const auto& [dfg, jobs] : by_dfg)
        summary.rows.push_back(make_row(dfg, jobs));
    std::vector<const JobRecord*> all;
    for (const auto& j : result.jobs) all.push_back(&j);
    summary.rows.push_back(make_row("overall", all));

    std::uint64_t hits = 0, misses = 0;
    double busy = 0;
    for (const auto& w : result.workers) {
        hits += w.hits;
        misses += w.misses;
        summary.fetches += w.fetches;
        summary.evictions += w.evictions;
        busy += w.busy_time_s;
        if (w.tasks_executed > 0) ++summary.active_workers;
    }
    if (hits + misses > 0)
        summary.hit_rate = static_cast<double>(hits) / static_cast<double>(hits + misses);
    if (result.run_duration_s > 0 && !result.workers.empty())
        summary.gpu_utilization =
            busy / (result.run_duration_s * static_cast<double>(result.workers.size()));
    return summary;
}

namespace {

std::string fmt(double v) {
    std::ostringstream ss;
    ss << std::setprecision(12) << v;
    return ss.str();
}

}  // namespace

void write_results(const SimResult& result, const std::string& dir) {
    std::filesystem::create_directories(dir);

    {
        std::ofstream f(dir + "/jobs.csv", std::ios::binary);
        f << "job_id,dfg_id,arrival_s,completion_s,latency_s,lower_bound_s,slow_down_factor\n";
        for (const auto& j : result.jobs)
            f << j.job_id << ',' << j.dfg_id << ',' << fmt(j.arrival_s) << ','
              << fmt(j.completion_s) << ',' << fmt(j.latency_s) << ','
              << fmt(j.lower_bound_s) << ',' << fmt(j.slow_down_factor) << '\n';
    }
    {
        RunSummary s = summarize(result);
        std::ofstream f(dir + "/summary.csv", std::ios::binary);
        f << "scope,job_count,mean_latency_s,sdf_mean,sdf_q1,sdf_median,sdf_q3,"
             "sdf_whisker_lo,sdf_whisker_hi,hit_rate,gpu_utilization,fetches,"
             "evictions,active_workers\n";
        for (const auto& row : s.rows)
            f << row.scope << ',' << row.job_count << ',' << fmt(row.mean_latency_s)
              << ',' << fmt(row.sdf_mean) << ',' << fmt(row.sdf.q1) << ','
              << fmt(row.sdf.median) << ',' << fmt(row.sdf.q3) << ','
              << fmt(row.sdf.whisker_lo) << ',' << fmt(row.sdf.whisker_hi) << ','
              << fmt(s.hit_rate) << ',' << fmt(s.gpu_utilization) << ','
              << s.fetches << ',' << s.evictions << ',' << s.active_workers << '\n';
    }
    {
        std::ofstream f(dir + "/run_meta", std::ios::binary);
        f << "seed=" << result.seed << '\n'
          << "config_hash=" << result.config_hash << '\n'
          << "scheduler=" << result.scheduler << '\n'
          << "jobs=" << result.jobs.size() << '\n'
          << "run_duration_s=" << fmt(result.run_duration_s) << '\n';
    }
}

std::vector<JobRecord> read_jobs_csv(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path);
    std::vector<JobRecord> jobs;
    std::string line;
    bool header = true;
    while (std::getline(f, line)) {
        if (header) {
            header = false;
            continue;
        }
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string tok;
        JobRecord j;
        std::getline(ss, tok, ',');
        j.job_id = std::stoi(tok);
        std::getline(ss, j.dfg_id, ',');
        std::getline(ss, tok, ',');
        j.arrival_s = std::stod(tok);
        std::getline(ss, tok, ',');
        j.completion_s = std::stod(tok);
        std::getline(ss, tok, ',');
        j.latency_s = std::stod(tok);
        std::getline(ss, tok, ',');
        j.lower_bound_s = std::stod(tok);
        std::getline(ss, tok, ',');
        j.slow_down_factor = std::stod(tok);
        jobs.push_back(std::move(j));
    }
    return jobs;
}

}  // namespace compass
