#include "compass/model.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <sstream>

namespace compass {

void ModelCatalog::add(ModelSpec m) {
    if (m.id < 0 || m.id >= kMaxModels)
        throw DfgError("model id " + std::to_string(m.id) + " outside 0..63");
    if (m.size_bytes == 0)
        throw DfgError("model " + m.name + " has zero size");
    if (by_id_.count(m.id))
        throw DfgError("duplicate model id " + std::to_string(m.id));
    if (find_by_name(m.name))
        throw DfgError("duplicate model name " + m.name);
    by_id_[m.id] = models_.size();
    models_.push_back(std::move(m));
}

const ModelSpec& ModelCatalog::by_id(ModelId id) const {
    auto it = by_id_.find(id);
    if (it == by_id_.end())
        throw DfgError("unknown model id " + std::to_string(id));
    return models_[it->second];
}

const ModelSpec* ModelCatalog::find_by_name(const std::string& name) const {
    for (const auto& m : models_)
        if (m.name == name) return &m;
    return nullptr;
}

std::uint64_t ModelCatalog::total_bytes() const {
    std::uint64_t s = 0;
    for (const auto& m : models_) s += m.size_bytes;
    return s;
}

Dfg::Dfg(std::string id, std::vector<TaskSpec> tasks,
         std::vector<std::pair<std::string, std::string>> edges)
    : id_(std::move(id)), tasks_(std::move(tasks)) {
    succs_.resize(tasks_.size());
    preds_.resize(tasks_.size());
    for (const auto& [a, b] : edges) {
        int ia = index_of(a);
        int ib = index_of(b);
        succs_[ia].push_back(ib);
        preds_[ib].push_back(ia);
    }
    validate();
}

int Dfg::index_of(const std::string& task_id) const {
    for (std::size_t i = 0; i < tasks_.size(); ++i)
        if (tasks_[i].id == task_id) return static_cast<int>(i);
    throw DfgError("dfg " + id_ + ": unknown task '" + task_id + "'");
}

void Dfg::validate() {
    if (tasks_.empty()) throw DfgError("dfg " + id_ + " has no tasks");
    for (std::size_t i = 0; i < tasks_.size(); ++i) {
        for (std::size_t j = i + 1; j < tasks_.size(); ++j)
            if (tasks_[i].id == tasks_[j].id)
                throw DfgError("dfg " + id_ + ": duplicate task id " + tasks_[i].id);
        if (tasks_[i].mean_runtime_s <= 0)
            throw DfgError("dfg " + id_ + ": task " + tasks_[i].id +
                           " runtime must be > 0");
    }

    // Kahn topological sort; leftover nodes mean a cycle.
    std::vector<int> indeg(tasks_.size());
    for (std::size_t i = 0; i < tasks_.size(); ++i)
        indeg[i] = static_cast<int>(preds_[i].size());
    std::deque<int> ready;
    for (std::size_t i = 0; i < tasks_.size(); ++i)
        if (indeg[i] == 0) ready.push_back(static_cast<int>(i));
    topo_order_.clear();
    while (!ready.empty()) {
        int t = ready.front();
        ready.pop_front();
        topo_order_.push_back(t);
        for (int s : succs_[t])
            if (--indeg[s] == 0) ready.push_back(s);
    }
    if (topo_order_.size() != tasks_.size())
        throw DfgError("dfg " + id_ + " contains a cycle");

    int entries = 0, exits = 0;
    for (std::size_t i = 0; i < tasks_.size(); ++i) {
        if (preds_[i].empty()) {
            entry_ = static_cast<int>(i);
            ++entries;
        }
        if (succs_[i].empty()) {
            exit_ = static_cast<int>(i);
            ++exits;
        }
    }
    if (entries != 1)
        throw DfgError("dfg " + id_ + " must have exactly one entry task, has " +
                       std::to_string(entries));
    if (exits != 1)
        throw DfgError("dfg " + id_ + " must have exactly one exit task, has " +
                       std::to_string(exits));
}

std::vector<double> compute_ranks(const Dfg& dfg, const RuntimeModel& rt,
                                  const LinkParams& link) {
    std::vector<double> rank(dfg.task_count(), 0);
    const auto& order = dfg.topo_order();
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        int t = *it;
        const TaskSpec& ts = dfg.task(t);
        double best = 0;
        if (!dfg.successors(t).empty()) {
            double td_out = td_transfer(ts.output_bytes, link);
            for (int s : dfg.successors(t))
                best = std::max(best, td_out + rank[s]);
        }
        rank[t] = rt.r_avg(ts) + best;
    }
    return rank;
}

double compute_lower_bound(const Dfg& dfg) {
    std::vector<double> path(dfg.task_count(), 0);
    const auto& order = dfg.topo_order();
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        int t = *it;
        double best = 0;
        for (int s : dfg.successors(t)) best = std::max(best, path[s]);
        path[t] = dfg.task(t).mean_runtime_s + best;
    }
    return path[dfg.entry()];
}

int WorkflowSet::dfg_index(const std::string& dfg_id) const {
    for (std::size_t i = 0; i < dfgs.size(); ++i)
        if (dfgs[i].id() == dfg_id) return static_cast<int>(i);
    return -1;
}

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::unordered_map<std::string, std::string> split_kv(const std::string& line,
                                                      int line_no) {
    std::unordered_map<std::string, std::string> kv;
    std::istringstream iss(line);
    std::string tok;
    while (iss >> tok) {
        auto eq = tok.find('=');
        if (eq == std::string::npos)
            throw DfgError("line " + std::to_string(line_no) +
                           ": expected key=value, got '" + tok + "'");
        kv[tok.substr(0, eq)] = tok.substr(eq + 1);
    }
    return kv;
}

}  // namespace

WorkflowSet parse_workflows(const std::string& text) {
    WorkflowSet out;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;

    enum class Sect { none, model, dfg };
    Sect sect = Sect::none;

    ModelSpec cur_model;
    bool have_model = false;

    std::string dfg_id;
    std::vector<TaskSpec> tasks;
    std::vector<std::pair<std::string, std::string>> edges;

    auto flush_model = [&] {
        if (have_model) {
            out.catalog.add(cur_model);
            cur_model = {};
            have_model = false;
        }
    };
    auto flush_dfg = [&] {
        if (!dfg_id.empty()) {
            out.dfgs.emplace_back(dfg_id, tasks, edges);
            dfg_id.clear();
            tasks.clear();
            edges.clear();
        }
    };

    while (std::getline(in, line)) {
        ++line_no;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        if (line == "[model]") {
            flush_model();
            flush_dfg();
            sect = Sect::model;
            have_model = true;
            continue;
        }
        if (line == "[dfg]") {
            flush_model();
            flush_dfg();
            sect = Sect::dfg;
            continue;
        }

        if (sect == Sect::model) {
            auto kv = split_kv(line, line_no);
            for (const auto& [k, v] : kv) {
                if (k == "id") cur_model.id = std::stoi(v);
                else if (k == "name") cur_model.name = v;
                else if (k == "size_bytes") cur_model.size_bytes = std::stoull(v);
                else throw DfgError("line " + std::to_string(line_no) +
                                    ": unknown model key '" + k + "'");
            }
        } else if (sect == Sect::dfg) {
            auto arrow = line.find("->");
            if (line.rfind("id=", 0) == 0) {
                dfg_id = trim(line.substr(3));
            } else if (line.rfind("task ", 0) == 0) {
                std::istringstream ls(line.substr(5));
                TaskSpec t;
                ls >> t.id;
                std::string rest;
                std::getline(ls, rest);
                auto kv = split_kv(rest, line_no);
                for (const auto& [k, v] : kv) {
                    if (k == "model") {
                        if (v != "none") {
                            const ModelSpec* m = out.catalog.find_by_name(v);
                            if (!m)
                                throw DfgError("line " + std::to_string(line_no) +
                                               ": unknown model '" + v + "'");
                            t.model = m->id;
                        }
                    } else if (k == "runtime_s") t.mean_runtime_s = std::stod(v);
                    else if (k == "input_bytes") t.input_bytes = std::stoull(v);
                    else if (k == "output_bytes") t.output_bytes = std::stoull(v);
                    else throw DfgError("line " + std::to_string(line_no) +
                                        ": unknown task key '" + k + "'");
                }
                tasks.push_back(std::move(t));
            } else if (arrow != std::string::npos) {
                edges.emplace_back(trim(line.substr(0, arrow)),
                                   trim(line.substr(arrow + 2)));
            } else {
                throw DfgError("line " + std::to_string(line_no) +
                               ": unrecognized dfg line '" + line + "'");
            }
        } else {
            throw DfgError("line " + std::to_string(line_no) +
                           ": content outside any section");
        }
    }
    flush_model();
    flush_dfg();
    return out;
}

WorkflowSet load_workflow_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw DfgError("cannot open workflow file: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_workflows(ss.str());
}

// Model sizes are calibrated to the aggregate constraints of the target
// deployment (each several GB, ~35 GB total), not per-model ground truth.
// Runtimes give idle end-to-end completions between 1 and 3 seconds.
const std::string& builtin_workflow_text() {
    static const std::string text = R"(# Built-in workflow profiles.
# Model catalog: 8 models, 36 GB aggregate.
[model]
id=0 name=opt size_bytes=7000000000
[model]
id=1 name=marian size_bytes=3000000000
[model]
id=2 name=mt5 size_bytes=5000000000
[model]
id=3 name=vit_gpt2 size_bytes=7000000000
[model]
id=4 name=espnet size_bytes=3000000000
[model]
id=5 name=bart size_bytes=5000000000
[model]
id=6 name=detr size_bytes=4000000000
[model]
id=7 name=glpn size_bytes=2000000000

[dfg]
id=translation
task t_encode model=opt runtime_s=0.45 input_bytes=10000 output_bytes=250000000
task t_french model=marian runtime_s=0.4 input_bytes=250000000 output_bytes=60000000
task t_chinese model=mt5 runtime_s=0.5 input_bytes=250000000 output_bytes=60000000
task t_japanese model=mt5 runtime_s=0.5 input_bytes=250000000 output_bytes=60000000
task t_aggregate model=none runtime_s=0.15 input_bytes=180000000 output_bytes=300000
t_encode -> t_french
t_encode -> t_chinese
t_encode -> t_japanese
t_french -> t_aggregate
t_chinese -> t_aggregate
t_japanese -> t_aggregate

[dfg]
id=image_reading
task t_caption model=vit_gpt2 runtime_s=0.5 input_bytes=5000000 output_bytes=200000000
task t_vocalize model=espnet runtime_s=0.4 input_bytes=200000000 output_bytes=150000000
task t_safety model=bart runtime_s=0.35 input_bytes=200000000 output_bytes=10000000
task t_aggregate model=none runtime_s=0.15 input_bytes=160000000 output_bytes=2000000
t_caption -> t_vocalize
t_caption -> t_safety
t_vocalize -> t_aggregate
t_safety -> t_aggregate

[dfg]
id=dialogue
task t_answer model=opt runtime_s=0.65 input_bytes=10000 output_bytes=100000000
task t_moderate model=bart runtime_s=0.45 input_bytes=100000000 output_bytes=100000000
task t_emit model=none runtime_s=0.1 input_bytes=100000000 output_bytes=500000
t_answer -> t_moderate
t_moderate -> t_emit

[dfg]
id=perception_3d
task t_preprocess model=none runtime_s=0.1 input_bytes=5000000 output_bytes=300000000
task t_detect model=detr runtime_s=0.55 input_bytes=300000000 output_bytes=120000000
task t_depth model=glpn runtime_s=0.6 input_bytes=300000000 output_bytes=120000000
task t_fuse model=none runtime_s=0.35 input_bytes=240000000 output_bytes=600000
t_preprocess -> t_detect
t_preprocess -> t_depth
t_detect -> t_fuse
t_depth -> t_fuse
)";
    return text;
}

WorkflowSet builtin_workflows() { return parse_workflows(builtin_workflow_text()); }

}  // namespace compass
