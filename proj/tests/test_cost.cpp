#include <doctest.h>

#include "compass/cost.hpp"

using namespace compass;

TEST_CASE("transfer duration arithmetic") {
    LinkParams p;
    p.network_bandwidth_Bps = 10e9;
    p.delta_network_s = 1e-3;

    CHECK(td_transfer(10'000'000, p) == doctest::Approx(2e-3));
    CHECK(td_transfer(0, p) == doctest::Approx(1e-3));

    p.network_bandwidth_Bps = 1e9;
    p.delta_network_s = 0;
    CHECK(td_transfer(1'000'000'000, p) == doctest::Approx(1.0));
}

TEST_CASE("model fetch duration arithmetic") {
    LinkParams p;
    p.pcie_bandwidth_Bps = 8e9;
    p.delta_pcie_s = 0.05;
    CHECK(td_model_fetch(4'000'000'000ull, p) == doctest::Approx(0.55));
    CHECK(td_model_fetch(0, p) == doctest::Approx(0.05));

    p.pcie_bandwidth_Bps = 16e9;
    p.delta_pcie_s = 0;
    CHECK(td_model_fetch(16'000'000'000ull, p) == doctest::Approx(1.0));
}

TEST_CASE("durations are monotone in size") {
    LinkParams p;
    for (std::uint64_t a = 0; a < 1'000'000'000ull; a += 100'000'000ull)
        CHECK(td_transfer(a, p) <= td_transfer(a + 100'000'000ull, p));
}

TEST_CASE("invalid link params rejected") {
    LinkParams p;
    p.network_bandwidth_Bps = 0;
    CHECK_THROWS(p.validate());
    p = LinkParams{};
    p.delta_pcie_s = -1;
    CHECK_THROWS(p.validate());
}
