#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <vector>

#include "compass/model.hpp"

namespace compass {

enum class EvictionPolicy { fifo, lookahead };

std::uint64_t bitmap_encode(const std::set<ModelId>& models);
std::set<ModelId> bitmap_decode(std::uint64_t bits);

// GPU-resident model cache. Space for an in-flight fetch is reserved up
// front; the model joins the bitmap only once the transfer commits.
class GpuCache {
public:
    struct Entry {
        ModelId model = 0;
        std::uint64_t size = 0;
        double admit_time_s = 0;
        bool committed = false;
    };

    explicit GpuCache(std::uint64_t capacity_bytes) : capacity_(capacity_bytes) {}

    std::uint64_t capacity() const { return capacity_; }
    std::uint64_t used() const { return used_; }
    std::uint64_t available() const { return capacity_ - used_; }
    bool resident(ModelId m) const;
    bool reserved(ModelId m) const;  // fetch in flight
    std::uint64_t bitmap() const;    // committed entries only
    const std::vector<Entry>& entries() const { return entries_; }

    // Ordered list of eviction candidates, lowest priority (evict first)
    // to highest. `upcoming` is the queue-order list of models the next
    // `window` tasks need; `pinned` models are excluded entirely.
    std::vector<ModelId> eviction_order(const std::vector<ModelId>& upcoming,
                                        std::size_t window,
                                        const std::set<ModelId>& pinned,
                                        EvictionPolicy policy) const;

    // Evicts candidates in policy order until `size` bytes fit, then reserves
    // the space. Returns evicted ids, or nullopt if the pinned set makes it
    // impossible right now. Throws if the model exceeds total capacity.
    std::optional<std::vector<ModelId>> reserve(ModelId m, std::uint64_t size,
                                                const std::vector<ModelId>& upcoming,
                                                std::size_t window,
                                                const std::set<ModelId>& pinned,
                                                EvictionPolicy policy);

    void commit(ModelId m, double now_s);

    std::uint64_t eviction_count() const { return evictions_; }

private:
    void erase(ModelId m);

    std::uint64_t capacity_;
    std::uint64_t used_ = 0;
    std::uint64_t evictions_ = 0;
    std::vector<Entry> entries_;  // admit order == FIFO order
};

}  // namespace compass
