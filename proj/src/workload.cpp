#include "compass/workload.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace compass {

double Rng::normal() {
    double u1 = next_unit();
    double u2 = next_unit();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

void WorkloadSpec::validate() const {
    if (mode == Mode::poisson) {
        if (rate_per_s <= 0) throw std::invalid_argument("poisson rate must be > 0");
        if (num_jobs == 0 && duration_s < 0)
            throw std::invalid_argument("duration must be >= 0");
        if (!mix.empty()) {
            double sum = 0;
            for (const auto& [_, w] : mix) {
                if (w < 0) throw std::invalid_argument("mix weights must be >= 0");
                sum += w;
            }
            if (std::abs(sum - 1.0) > 1e-9)
                throw std::invalid_argument("mix weights must sum to 1");
        }
    }
}

std::vector<JobInstance> gen_poisson(const WorkloadSpec& spec,
                                     const WorkflowSet& workflows, Rng& rng) {
    spec.validate();

    std::vector<std::pair<int, double>> weighted;  // dfg index, weight
    if (spec.mix.empty()) {
        double w = 1.0 / static_cast<double>(workflows.dfgs.size());
        for (std::size_t i = 0; i < workflows.dfgs.size(); ++i)
            weighted.emplace_back(static_cast<int>(i), w);
    } else {
        for (const auto& [id, w] : spec.mix) {
            int idx = workflows.dfg_index(id);
            if (idx < 0) throw std::invalid_argument("mix references unknown dfg: " + id);
            weighted.emplace_back(idx, w);
        }
    }

    std::vector<JobInstance> jobs;
    double t = 0;
    int job_id = 0;
    while (true) {
        t += rng.exponential(1.0 / spec.rate_per_s);
        if (spec.num_jobs > 0) {
            if (jobs.size() >= spec.num_jobs) break;
        } else if (t > spec.duration_s) {
            break;
        }
        double u = rng.next_unit();
        int dfg = weighted.back().first;
        double acc = 0;
        for (const auto& [idx, w] : weighted) {
            acc += w;
            if (u <= acc) {
                dfg = idx;
                break;
            }
        }
        jobs.push_back({job_id++, dfg, t, 0});
    }
    return jobs;
}

std::vector<JobInstance> parse_trace_text(const std::string& text, double rescale,
                                          const WorkflowSet& workflows) {
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    std::vector<JobInstance> jobs;
    double last = -1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line_no == 1) {
            if (line != "arrival_s,dfg_id")
                throw std::runtime_error("trace line 1: expected header arrival_s,dfg_id");
            continue;
        }
        auto comma = line.find(',');
        if (comma == std::string::npos)
            throw std::runtime_error("trace line " + std::to_string(line_no) +
                                     ": malformed record '" + line + "'");
        double arrival;
        try {
            std::size_t used = 0;
            arrival = std::stod(line.substr(0, comma), &used);
            if (used != comma) throw std::invalid_argument("trailing chars");
        } catch (const std::exception&) {
            throw std::runtime_error("trace line " + std::to_string(line_no) +
                                     ": bad arrival time");
        }
        std::string dfg_id = line.substr(comma + 1);
        int idx = workflows.dfg_index(dfg_id);
        if (idx < 0)
            throw std::runtime_error("trace line " + std::to_string(line_no) +
                                     ": unknown dfg_id '" + dfg_id + "'");
        if (arrival < last)
            throw std::runtime_error("trace line " + std::to_string(line_no) +
                                     ": decreasing arrival time");
        last = arrival;
        jobs.push_back({static_cast<int>(jobs.size()), idx, arrival * rescale, 0});
    }
    return jobs;
}

std::vector<JobInstance> parse_trace(const std::string& path, double rescale,
                                     const WorkflowSet& workflows) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open trace file: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_trace_text(ss.str(), rescale, workflows);
}

std::vector<JobInstance> generate_workload(const WorkloadSpec& spec,
                                           const WorkflowSet& workflows,
                                           std::uint64_t seed) {
    if (spec.mode == WorkloadSpec::Mode::trace)
        return parse_trace(spec.trace_path, spec.trace_rescale, workflows);
    Rng rng(seed);
    return gen_poisson(spec, workflows, rng);
}

}  // namespace compass
