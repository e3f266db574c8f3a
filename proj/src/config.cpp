#include "compass/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace compass {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "on") return true;
    if (v == "false" || v == "0" || v == "off") return false;
    throw std::invalid_argument("config key " + key + ": expected boolean, got '" + v + "'");
}

}  // namespace

void ClusterParams::validate() const {
    if (worker_count <= 0)
        throw std::invalid_argument("cluster.worker_count must be > 0");
    if (gpu_capacity_bytes == 0)
        throw std::invalid_argument("cluster.gpu_capacity_bytes must be > 0");
    if (lookahead_window < 0)
        throw std::invalid_argument("cluster.lookahead_window must be >= 0");
    link.validate();
    if (!runtime.worker_multiplier.empty() &&
        runtime.worker_multiplier.size() != static_cast<std::size_t>(worker_count))
        throw std::invalid_argument("cluster.worker_multipliers length mismatch");
}

void SimConfig::validate(const WorkflowSet& workflows) const {
    cluster.validate();
    workload.validate();
    if (scheduler.threshold <= 0)
        throw std::invalid_argument("scheduler.threshold must be > 0");
    if (sst.load_interval() < 0 || sst.cache_interval() < 0)
        throw std::invalid_argument("sst intervals must be >= 0");
    if (noise == NoiseModel::lognormal && noise_sigma < 0)
        throw std::invalid_argument("sim.noise_sigma must be >= 0");
    for (const auto& m : workflows.catalog.models())
        if (m.size_bytes > cluster.gpu_capacity_bytes)
            throw std::invalid_argument("model " + m.name +
                                        " exceeds gpu_capacity_bytes");
    for (const auto& [id, _] : workload.mix)
        if (workflows.dfg_index(id) < 0)
            throw std::invalid_argument("workload.mix references unknown dfg: " + id);
}

std::map<std::string, std::string> SimConfig::to_kv() const {
    std::map<std::string, std::string> kv;
    auto num = [](double v) {
        std::ostringstream ss;
        ss.precision(17);
        ss << v;
        return ss.str();
    };
    kv["cluster.worker_count"] = std::to_string(cluster.worker_count);
    kv["cluster.gpu_capacity_bytes"] = std::to_string(cluster.gpu_capacity_bytes);
    kv["cluster.eviction_policy"] =
        cluster.eviction_policy == EvictionPolicy::fifo ? "fifo" : "lookahead";
    kv["cluster.lookahead_window"] = std::to_string(cluster.lookahead_window);
    kv["cluster.network_bandwidth_Bps"] = num(cluster.link.network_bandwidth_Bps);
    kv["cluster.delta_network_s"] = num(cluster.link.delta_network_s);
    kv["cluster.pcie_bandwidth_Bps"] = num(cluster.link.pcie_bandwidth_Bps);
    kv["cluster.delta_pcie_s"] = num(cluster.link.delta_pcie_s);
    kv["scheduler.kind"] = to_string(scheduler.kind);
    kv["scheduler.threshold"] = num(scheduler.threshold);
    kv["scheduler.dynamic_adjustment"] = scheduler.dynamic_adjustment ? "true" : "false";
    kv["scheduler.model_locality"] = scheduler.model_locality ? "true" : "false";
    kv["scheduler.eviction_penalty_mode"] =
        scheduler.penalty_mode == PenaltyMode::proportional ? "proportional" : "constant";
    kv["scheduler.eviction_penalty_value"] = num(scheduler.penalty_value_s);
    kv["workload.mode"] =
        workload.mode == WorkloadSpec::Mode::poisson ? "poisson" : "trace";
    kv["workload.rate"] = num(workload.rate_per_s);
    kv["workload.duration_s"] = num(workload.duration_s);
    kv["workload.num_jobs"] = std::to_string(workload.num_jobs);
    kv["workload.trace"] = workload.trace_path;
    kv["workload.rescale"] = num(workload.trace_rescale);
    for (const auto& [id, w] : workload.mix) kv["workload.mix." + id] = num(w);
    kv["sst.interval_s"] = num(sst.interval_s);
    kv["sst.load_interval_s"] = num(sst.load_interval_s);
    kv["sst.cache_interval_s"] = num(sst.cache_interval_s);
    kv["sim.noise"] = noise == NoiseModel::deterministic ? "deterministic" : "lognormal";
    kv["sim.noise_sigma"] = num(noise_sigma);
    kv["sim.plan_cost_s"] = num(plan_cost_s);
    kv["sim.max_time_s"] = num(max_time_s);
    kv["sim.seed"] = std::to_string(seed);
    kv["sim.workflow_file"] = workflow_file;
    return kv;
}

std::uint64_t SimConfig::config_hash() const {
    std::string canon;
    for (const auto& [k, v] : to_kv()) canon += k + "=" + v + "\n";
    return stable_hash64(canon);
}

SimConfig parse_config(const std::map<std::string, std::string>& kv) {
    SimConfig cfg;
    for (const auto& [key, v] : kv) {
        if (key == "cluster.worker_count") cfg.cluster.worker_count = std::stoi(v);
        else if (key == "cluster.gpu_capacity_bytes") cfg.cluster.gpu_capacity_bytes = std::stoull(v);
        else if (key == "cluster.eviction_policy") {
            if (v == "fifo") cfg.cluster.eviction_policy = EvictionPolicy::fifo;
            else if (v == "lookahead") cfg.cluster.eviction_policy = EvictionPolicy::lookahead;
            else throw std::invalid_argument("config key " + key + ": unknown policy '" + v + "'");
        }
        else if (key == "cluster.lookahead_window") cfg.cluster.lookahead_window = std::stoi(v);
        else if (key == "cluster.network_bandwidth_Bps") cfg.cluster.link.network_bandwidth_Bps = std::stod(v);
        else if (key == "cluster.delta_network_s") cfg.cluster.link.delta_network_s = std::stod(v);
        else if (key == "cluster.pcie_bandwidth_Bps") cfg.cluster.link.pcie_bandwidth_Bps = std::stod(v);
        else if (key == "cluster.delta_pcie_s") cfg.cluster.link.delta_pcie_s = std::stod(v);
        else if (key == "cluster.worker_multipliers") {
            std::istringstream ss(v);
            std::string tok;
            cfg.cluster.runtime.worker_multiplier.clear();
            while (std::getline(ss, tok, ','))
                cfg.cluster.runtime.worker_multiplier.push_back(std::stod(tok));
        }
        else if (key == "scheduler.kind") cfg.scheduler.kind = scheduler_kind_from_string(v);
        else if (key == "scheduler.threshold") cfg.scheduler.threshold = std::stod(v);
        else if (key == "scheduler.dynamic_adjustment") cfg.scheduler.dynamic_adjustment = parse_bool(key, v);
        else if (key == "scheduler.model_locality") cfg.scheduler.model_locality = parse_bool(key, v);
        else if (key == "scheduler.eviction_penalty_mode") {
            if (v == "proportional") cfg.scheduler.penalty_mode = PenaltyMode::proportional;
            else if (v == "constant") cfg.scheduler.penalty_mode = PenaltyMode::constant;
            else throw std::invalid_argument("config key " + key + ": unknown mode '" + v + "'");
        }
        else if (key == "scheduler.eviction_penalty_value") cfg.scheduler.penalty_value_s = std::stod(v);
        else if (key == "workload.mode") {
            if (v == "poisson") cfg.workload.mode = WorkloadSpec::Mode::poisson;
            else if (v == "trace") cfg.workload.mode = WorkloadSpec::Mode::trace;
            else throw std::invalid_argument("config key " + key + ": unknown mode '" + v + "'");
        }
        else if (key == "workload.rate") cfg.workload.rate_per_s = std::stod(v);
        else if (key == "workload.duration_s") cfg.workload.duration_s = std::stod(v);
        else if (key == "workload.num_jobs") cfg.workload.num_jobs = std::stoull(v);
        else if (key == "workload.trace") cfg.workload.trace_path = v;
        else if (key == "workload.rescale") cfg.workload.trace_rescale = std::stod(v);
        else if (key.rfind("workload.mix.", 0) == 0)
            cfg.workload.mix[key.substr(13)] = std::stod(v);
        else if (key == "sst.interval_s") cfg.sst.interval_s = std::stod(v);
        else if (key == "sst.load_interval_s") cfg.sst.load_interval_s = std::stod(v);
        else if (key == "sst.cache_interval_s") cfg.sst.cache_interval_s = std::stod(v);
        else if (key == "sim.noise") {
            if (v == "deterministic") cfg.noise = NoiseModel::deterministic;
            else if (v == "lognormal") cfg.noise = NoiseModel::lognormal;
            else throw std::invalid_argument("config key " + key + ": unknown noise model '" + v + "'");
        }
        else if (key == "sim.noise_sigma") cfg.noise_sigma = std::stod(v);
        else if (key == "sim.plan_cost_s") cfg.plan_cost_s = std::stod(v);
        else if (key == "sim.max_time_s") cfg.max_time_s = std::stod(v);
        else if (key == "sim.seed") cfg.seed = std::stoull(v);
        else if (key == "sim.workflow_file") cfg.workflow_file = v;
        else throw std::invalid_argument("unknown config key: " + key);
    }
    return cfg;
}

std::map<std::string, std::string> read_config_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open config file: " + path);
    std::map<std::string, std::string> kv;
    std::string line;
    int line_no = 0;
    while (std::getline(f, line)) {
        ++line_no;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                     ": expected key = value");
        kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return kv;
}

}  // namespace compass
