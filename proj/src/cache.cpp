#include "compass/cache.hpp"

#include <algorithm>

namespace compass {

std::uint64_t bitmap_encode(const std::set<ModelId>& models) {
    std::uint64_t bits = 0;
    for (ModelId m : models) {
        if (m < 0 || m >= kMaxModels)
            throw std::out_of_range("model id outside bitmap range");
        bits |= std::uint64_t{1} << m;
    }
    return bits;
}

std::set<ModelId> bitmap_decode(std::uint64_t bits) {
    std::set<ModelId> out;
    for (int i = 0; i < kMaxModels; ++i)
        if (bits & (std::uint64_t{1} << i)) out.insert(i);
    return out;
}

bool GpuCache::resident(ModelId m) const {
    for (const auto& e : entries_)
        if (e.model == m && e.committed) return true;
    return false;
}

bool GpuCache::reserved(ModelId m) const {
    for (const auto& e : entries_)
        if (e.model == m && !e.committed) return true;
    return false;
}

std::uint64_t GpuCache::bitmap() const {
    std::uint64_t bits = 0;
    for (const auto& e : entries_)
        if (e.committed) bits |= std::uint64_t{1} << e.model;
    return bits;
}

std::vector<ModelId> GpuCache::eviction_order(const std::vector<ModelId>& upcoming,
                                              std::size_t window,
                                              const std::set<ModelId>& pinned,
                                              EvictionPolicy policy) const {
    struct Cand {
        ModelId model;
        std::size_t fifo_pos;
        std::size_t first_use;  // position of earliest use in the window
    };
    std::vector<Cand> cands;
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        const auto& e = entries_[i];
        if (!e.committed || pinned.count(e.model)) continue;
        std::size_t first_use = upcoming.size();  // sentinel: not needed
        if (policy == EvictionPolicy::lookahead) {
            std::size_t limit = std::min(window, upcoming.size());
            for (std::size_t k = 0; k < limit; ++k) {
                if (upcoming[k] == e.model) {
                    first_use = k;
                    break;
                }
            }
        }
        cands.push_back({e.model, i, first_use});
    }
    // Unreferenced models go first (FIFO among themselves); referenced ones
    // are evicted latest-needed first, so soonest-needed survives longest.
    std::stable_sort(cands.begin(), cands.end(), [&](const Cand& a, const Cand& b) {
        bool a_needed = a.first_use < upcoming.size();
        bool b_needed = b.first_use < upcoming.size();
        if (a_needed != b_needed) return !a_needed;
        if (a_needed) return a.first_use > b.first_use;
        return a.fifo_pos < b.fifo_pos;
    });
    std::vector<ModelId> out;
    out.reserve(cands.size());
    for (const auto& c : cands) out.push_back(c.model);
    return out;
}

std::optional<std::vector<ModelId>> GpuCache::reserve(
    ModelId m, std::uint64_t size, const std::vector<ModelId>& upcoming,
    std::size_t window, const std::set<ModelId>& pinned, EvictionPolicy policy) {
    if (size > capacity_)
        throw std::runtime_error("model " + std::to_string(m) +
                                 " larger than GPU cache capacity");
    std::vector<ModelId> evicted;
    if (available() < size) {
        auto order = eviction_order(upcoming, window, pinned, policy);
        std::uint64_t freed = 0;
        for (ModelId victim : order) {
            if (available() + freed >= size) break;
            for (const auto& e : entries_)
                if (e.model == victim && e.committed) freed += e.size;
            evicted.push_back(victim);
        }
        if (available() + freed < size) return std::nullopt;
        for (ModelId victim : evicted) {
            erase(victim);
            ++evictions_;
        }
    }
    entries_.push_back({m, size, 0, false});
    used_ += size;
    return evicted;
}

void GpuCache::commit(ModelId m, double now_s) {
    for (auto& e : entries_) {
        if (e.model == m && !e.committed) {
            e.committed = true;
            e.admit_time_s = now_s;
            return;
        }
    }
    throw std::logic_error("commit without matching reservation");
}

void GpuCache::erase(ModelId m) {
    for (auto it = entries_.begin(); it != entries_.end(); ++it) {
        if (it->model == m && it->committed) {
            used_ -= it->size;
            entries_.erase(it);
            return;
        }
    }
}

}  // namespace compass
