#pragma once

#include <cstdint>
#include <stdexcept>

namespace compass {

// Cluster-wide link parameters. One network capacity for worker-to-worker
// transfers, one PCIe capacity for host-to-GPU model fetches.
struct LinkParams {
    double network_bandwidth_Bps = 1.25e9;  // 10 Gbps
    double delta_network_s = 1e-3;
    // effective host-to-GPU copy bandwidth (PCIe 3.0 x16, measured rate
    // rather than the 16 GB/s line rate)
    double pcie_bandwidth_Bps = 12e9;
    // per-fetch constant: PCIe setup plus on-GPU decompression of the
    // compressed model image
    double delta_pcie_s = 0.75;

    void validate() const {
        if (network_bandwidth_Bps <= 0 || pcie_bandwidth_Bps <= 0)
            throw std::invalid_argument("link bandwidths must be > 0");
        if (delta_network_s < 0 || delta_pcie_s < 0)
            throw std::invalid_argument("link deltas must be >= 0");
    }
};

// size / capacity + delta. Callers pass 0 bytes only when they still want the
// constant term; co-location (zero cost) is decided by the caller.
inline double td_transfer(std::uint64_t bytes, const LinkParams& p) {
    return static_cast<double>(bytes) / p.network_bandwidth_Bps + p.delta_network_s;
}

inline double td_model_fetch(std::uint64_t model_bytes, const LinkParams& p) {
    return static_cast<double>(model_bytes) / p.pcie_bandwidth_Bps + p.delta_pcie_s;
}

}  // namespace compass
