#pragma once

#include <set>
#include <string>
#include <vector>

#include "compass/config.hpp"

namespace compass {

struct PresetRun {
    std::string name;  // result directory suffix
    SimConfig config;
};

// Expands a named experiment preset into concrete run configs, starting from
// `base`. Keys listed in `fixed` were set explicitly by the caller and are
// not swept over (e.g. a fixed worker count prunes the scalability grid).
std::vector<PresetRun> expand_preset(const std::string& preset, const SimConfig& base,
                                     const std::set<std::string>& fixed = {});

std::vector<std::string> preset_names();

}  // namespace compass
