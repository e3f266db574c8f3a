#include <doctest.h>

#include <set>

#include "compass/cache.hpp"
#include "compass/workload.hpp"

using namespace compass;

TEST_CASE("bitmap encode and decode") {
    CHECK(bitmap_encode({}) == 0);
    CHECK(bitmap_encode({0, 3}) == 9);
    CHECK(bitmap_decode(9) == std::set<ModelId>{0, 3});

    Rng rng(5);
    for (int i = 0; i < 50; ++i) {
        std::set<ModelId> s;
        for (int m = 0; m < kMaxModels; ++m)
            if (rng.next_unit() < 0.2) s.insert(m);
        CHECK(bitmap_decode(bitmap_encode(s)) == s);
    }
}

TEST_CASE("fifo eviction removes the oldest admitted model") {
    GpuCache cache(3);
    cache.reserve(0, 1, {}, 0, {}, EvictionPolicy::fifo);
    cache.commit(0, 1.0);
    cache.reserve(1, 1, {}, 0, {}, EvictionPolicy::fifo);
    cache.commit(1, 2.0);
    cache.reserve(2, 1, {}, 0, {}, EvictionPolicy::fifo);
    cache.commit(2, 3.0);

    auto evicted = cache.reserve(3, 1, {}, 0, {}, EvictionPolicy::fifo);
    REQUIRE(evicted.has_value());
    CHECK(*evicted == std::vector<ModelId>{0});
    CHECK_FALSE(cache.resident(0));
    CHECK(cache.resident(1));
    CHECK(cache.resident(2));
    CHECK(cache.eviction_count() == 1);
}

TEST_CASE("lookahead eviction prefers unreferenced models, then latest-needed") {
    GpuCache cache(3);
    for (ModelId m : {0, 1, 2}) {
        cache.reserve(m, 1, {}, 0, {}, EvictionPolicy::fifo);
        cache.commit(m, static_cast<double>(m));
    }
    // queue needs m2 then m0; m1 is unreferenced -> evicted first, then m0
    // (needed later than m2), then m2.
    auto order = cache.eviction_order({2, 0}, 10, {}, EvictionPolicy::lookahead);
    CHECK(order == std::vector<ModelId>{1, 0, 2});
}

TEST_CASE("lookahead with empty window degrades to fifo") {
    GpuCache cache(3);
    for (ModelId m : {0, 1, 2}) {
        cache.reserve(m, 1, {}, 0, {}, EvictionPolicy::fifo);
        cache.commit(m, static_cast<double>(m));
    }
    auto fifo = cache.eviction_order({}, 10, {}, EvictionPolicy::fifo);
    auto look = cache.eviction_order({}, 10, {}, EvictionPolicy::lookahead);
    CHECK(fifo == look);
    CHECK(fifo == std::vector<ModelId>{0, 1, 2});
}

TEST_CASE("window truncates the upcoming list") {
    GpuCache cache(2);
    for (ModelId m : {0, 1}) {
        cache.reserve(m, 1, {}, 0, {}, EvictionPolicy::fifo);
        cache.commit(m, static_cast<double>(m));
    }
    // m1's only reference is past the window, so it counts as unreferenced.
    auto order = cache.eviction_order({0, 1}, 1, {}, EvictionPolicy::lookahead);
    CHECK(order.front() == 1);
}

TEST_CASE("pinned models are never evicted") {
    GpuCache cache(3);
    cache.reserve(0, 1, {}, 0, {}, EvictionPolicy::fifo);
    cache.commit(0, 0.0);
    cache.reserve(1, 1, {}, 0, {}, EvictionPolicy::fifo);
    cache.commit(1, 1.0);

    auto got = cache.reserve(2, 3, {}, 0, {0, 1}, EvictionPolicy::fifo);
    CHECK_FALSE(got.has_value());
    CHECK(cache.resident(0));
    CHECK(cache.resident(1));

    got = cache.reserve(2, 2, {}, 0, {1}, EvictionPolicy::fifo);
    REQUIRE(got.has_value());
    CHECK(*got == std::vector<ModelId>{0});
    CHECK(cache.resident(1));
}

TEST_CASE("an in-flight fetch blocks space it reserved") {
    GpuCache cache(2);
    cache.reserve(0, 2, {}, 0, {}, EvictionPolicy::fifo);
    // not committed yet, so it cannot be evicted either
    auto got = cache.reserve(1, 1, {}, 0, {}, EvictionPolicy::fifo);
    CHECK_FALSE(got.has_value());
}

TEST_CASE("reserve rejects models larger than the cache") {
    GpuCache cache(4);
    CHECK_THROWS(cache.reserve(0, 5, {}, 0, {}, EvictionPolicy::fifo));
}

TEST_CASE("reserved space counts against capacity before commit") {
    GpuCache cache(4);
    cache.reserve(0, 3, {}, 0, {}, EvictionPolicy::fifo);
    CHECK(cache.used() == 3);
    CHECK_FALSE(cache.resident(0));
    CHECK(cache.reserved(0));
    CHECK(cache.bitmap() == 0);

    cache.commit(0, 1.0);
    CHECK(cache.resident(0));
    CHECK(cache.bitmap() == 1);
    CHECK(cache.used() == 3);
}

TEST_CASE("occupancy never exceeds capacity under random churn") {
    Rng rng(99);
    GpuCache cache(10);
    std::vector<ModelId> upcoming;
    for (int step = 0; step < 2000; ++step) {
        ModelId m = static_cast<ModelId>(rng.next_u64() % 12);
        std::uint64_t size = 1 + rng.next_u64() % 5;
        if (cache.resident(m) || cache.reserved(m)) continue;
        upcoming.clear();
        for (int k = 0; k < 4; ++k)
            upcoming.push_back(static_cast<ModelId>(rng.next_u64() % 12));
        auto policy = (step % 2) ? EvictionPolicy::fifo : EvictionPolicy::lookahead;
        auto got = cache.reserve(m, size, upcoming, 10, {}, policy);
        REQUIRE(got.has_value());
        CHECK(cache.used() <= cache.capacity());
        cache.commit(m, step * 0.1);
        CHECK(cache.used() <= cache.capacity());
    }
}
