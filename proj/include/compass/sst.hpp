#pragma once

#include <array>
#include <cstdint>
#include <cstring>
#include <vector>

#include "compass/worker.hpp"

namespace compass {

// One worker's disseminated metadata row. The wire encoding must fit a
// 64-byte cache line.
struct SstRow {
    WorkerId worker = 0;
    double queue_finish_time_s = 0;  // published FT(w)
    std::uint64_t cache_bitmap = 0;
    std::uint64_t available_cache = 0;  // AVC(w)
    double publish_time_s = 0;
};

constexpr std::size_t kSstRowBytes = 40;
static_assert(kSstRowBytes <= 64, "SST row must fit one cache line");

std::array<std::uint8_t, kSstRowBytes> sst_encode(const SstRow& row);
SstRow sst_decode(const std::array<std::uint8_t, kSstRowBytes>& bytes);

// Staleness-bounded cluster snapshot: one merged row per worker.
struct SstView {
    std::vector<SstRow> rows;  // indexed by worker id
};

// Row histories for every worker. Load fields (FT) and cache fields (bitmap,
// AVC) are published on independent grids so staleness sweeps can vary them
// separately; with equal intervals the grids coincide.
class StateMonitor {
public:
    explicit StateMonitor(int worker_count);

    void publish_load(WorkerId w, double now_s, double ft_s);
    void publish_cache(WorkerId w, double now_s, std::uint64_t bitmap,
                       std::uint64_t avc);
    void publish_row(const WorkerState& worker, double now_s);

    // Latest rows published at or before `now`.
    SstView view_at(double now_s) const;

    std::uint64_t load_publish_count() const { return load_publishes_; }
    std::uint64_t cache_publish_count() const { return cache_publishes_; }

private:
    struct LoadSample {
        double t, ft;
    };
    struct CacheSample {
        double t;
        std::uint64_t bitmap, avc;
    };
    std::vector<std::vector<LoadSample>> load_hist_;
    std::vector<std::vector<CacheSample>> cache_hist_;
    std::uint64_t load_publishes_ = 0;
    std::uint64_t cache_publishes_ = 0;
};

}  // namespace compass
