#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "compass/cost.hpp"

namespace compass {

using WorkerId = int;
using ModelId = int;  // 0..63, so cache contents fit a 64-bit bitmap

constexpr int kMaxModels = 64;

struct DfgError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ModelSpec {
    ModelId id = 0;
    std::string name;
    std::uint64_t size_bytes = 0;
};

class ModelCatalog {
public:
    void add(ModelSpec m);
    const ModelSpec& by_id(ModelId id) const;
    const ModelSpec* find_by_name(const std::string& name) const;
    const std::vector<ModelSpec>& models() const { return models_; }
    std::uint64_t total_bytes() const;
    bool empty() const { return models_.empty(); }

private:
    std::vector<ModelSpec> models_;
    std::unordered_map<int, std::size_t> by_id_;
};

struct TaskSpec {
    std::string id;
    std::optional<ModelId> model;  // absent for aggregation / exit tasks
    double mean_runtime_s = 0;
    std::uint64_t input_bytes = 0;
    std::uint64_t output_bytes = 0;
};

// Validated dataflow graph. Tasks are indexed densely; edge endpoints,
// predecessor/successor lists and the topological order all use indices.
class Dfg {
public:
    Dfg() = default;
    Dfg(std::string id, std::vector<TaskSpec> tasks,
        std::vector<std::pair<std::string, std::string>> edges);

    const std::string& id() const { return id_; }
    std::size_t task_count() const { return tasks_.size(); }
    const TaskSpec& task(int i) const { return tasks_.at(i); }
    const std::vector<TaskSpec>& tasks() const { return tasks_; }
    int index_of(const std::string& task_id) const;

    const std::vector<int>& topo_order() const { return topo_order_; }
    const std::vector<int>& successors(int i) const { return succs_.at(i); }
    const std::vector<int>& predecessors(int i) const { return preds_.at(i); }
    int entry() const { return entry_; }
    int exit() const { return exit_; }
    bool is_join(int i) const { return preds_.at(i).size() > 1; }

private:
    void validate();

    std::string id_;
    std::vector<TaskSpec> tasks_;
    std::vector<std::vector<int>> succs_;
    std::vector<std::vector<int>> preds_;
    std::vector<int> topo_order_;
    int entry_ = -1;
    int exit_ = -1;
};

struct JobInstance {
    int job_id = 0;
    int dfg_index = 0;
    double arrival_time_s = 0;
    WorkerId origin_worker = 0;
};

// Per-job-instance assignment map, mutated only by dynamic adjustment.
struct Adfg {
    int job_id = 0;
    std::vector<WorkerId> assignment;   // task index -> worker
    std::vector<double> planned_ft_s;   // FT(t, assignment[t]) from planning
};

// Per-worker runtime scaling. Empty multipliers mean a homogeneous cluster
// where R(t, w) == mean_runtime for every worker.
struct RuntimeModel {
    std::vector<double> worker_multiplier;

    double r(const TaskSpec& t, WorkerId w) const {
        if (worker_multiplier.empty()) return t.mean_runtime_s;
        return t.mean_runtime_s * worker_multiplier.at(static_cast<std::size_t>(w));
    }
    double r_avg(const TaskSpec& t) const {
        if (worker_multiplier.empty()) return t.mean_runtime_s;
        double s = 0;
        for (double m : worker_multiplier) s += m;
        return t.mean_runtime_s * s / static_cast<double>(worker_multiplier.size());
    }
};

// Upward rank per task: R(t) + max over successors of (TD_output(t) + rank(t')).
std::vector<double> compute_ranks(const Dfg& dfg, const RuntimeModel& rt,
                                  const LinkParams& link);

// Critical-path runtime sum, zero transfer and fetch delay.
double compute_lower_bound(const Dfg& dfg);

struct WorkflowSet {
    ModelCatalog catalog;
    std::vector<Dfg> dfgs;

    int dfg_index(const std::string& dfg_id) const;
};

// The four shipped pipelines plus their model catalog.
WorkflowSet builtin_workflows();

// Text of the shipped profile file the builtins are parsed from.
const std::string& builtin_workflow_text();

// Parses the workflow definition format: [model] and [dfg] sections,
// `task <id> ...` lines and `a -> b` edge lines. Grammar in the README.
WorkflowSet parse_workflows(const std::string& text);
WorkflowSet load_workflow_file(const std::string& path);

}  // namespace compass
