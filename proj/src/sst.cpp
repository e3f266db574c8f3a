#include "compass/sst.hpp"

#include <stdexcept>

namespace compass {

namespace {
template <typename T>
void put(std::uint8_t* dst, std::size_t& off, T v) {
    std::memcpy(dst + off, &v, sizeof(T));
    off += sizeof(T);
}
template <typename T>
T get(const std::uint8_t* src, std::size_t& off) {
    T v;
    std::memcpy(&v, src + off, sizeof(T));
    off += sizeof(T);
    return v;
}
}  // namespace

std::array<std::uint8_t, kSstRowBytes> sst_encode(const SstRow& row) {
    std::array<std::uint8_t, kSstRowBytes> out{};
    std::size_t off = 0;
    put(out.data(), off, static_cast<std::int32_t>(row.worker));
    put(out.data(), off, row.queue_finish_time_s);
    put(out.data(), off, row.cache_bitmap);
    put(out.data(), off, row.available_cache);
    put(out.data(), off, row.publish_time_s);
    return out;
}

SstRow sst_decode(const std::array<std::uint8_t, kSstRowBytes>& bytes) {
    SstRow row;
    std::size_t off = 0;
    row.worker = get<std::int32_t>(bytes.data(), off);
    row.queue_finish_time_s = get<double>(bytes.data(), off);
    row.cache_bitmap = get<std::uint64_t>(bytes.data(), off);
    row.available_cache = get<std::uint64_t>(bytes.data(), off);
    row.publish_time_s = get<double>(bytes.data(), off);
    return row;
}

StateMonitor::StateMonitor(int worker_count)
    : load_hist_(worker_count), cache_hist_(worker_count) {}

void StateMonitor::publish_load(WorkerId w, double now_s, double ft_s) {
    auto& h = load_hist_.at(w);
    if (!h.empty() && now_s < h.back().t)
        throw std::logic_error("load publish times must be monotone");
    h.push_back({now_s, ft_s});
    ++load_publishes_;
}

void StateMonitor::publish_cache(WorkerId w, double now_s, std::uint64_t bitmap,
                                 std::uint64_t avc) {
    auto& h = cache_hist_.at(w);
    if (!h.empty() && now_s < h.back().t)
        throw std::logic_error("cache publish times must be monotone");
    h.push_back({now_s, bitmap, avc});
    ++cache_publishes_;
}

void StateMonitor::publish_row(const WorkerState& worker, double now_s) {
    publish_load(worker.id, now_s, worker.estimate_ft(now_s));
    publish_cache(worker.id, now_s, worker.cache.bitmap(),
                  worker.cache.available());
}

SstView StateMonitor::view_at(double now_s) const {
    SstView view;
    view.rows.resize(load_hist_.size());
    for (std::size_t w = 0; w < load_hist_.size(); ++w) {
        SstRow& row = view.rows[w];
        row.worker = static_cast<WorkerId>(w);
        const auto& lh = load_hist_[w];
        for (auto it = lh.rbegin(); it != lh.rend(); ++it) {
            if (it->t <= now_s + 1e-12) {
                row.queue_finish_time_s = it->ft;
                row.publish_time_s = it->t;
                break;
            }
        }
        const auto& ch = cache_hist_[w];
        for (auto it = ch.rbegin(); it != ch.rend(); ++it) {
            if (it->t <= now_s + 1e-12) {
                row.cache_bitmap = it->bitmap;
                row.available_cache = it->avc;
                break;
            }
        }
    }
    return view;
}

}  // namespace compass
