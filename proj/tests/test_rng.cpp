#include "doctest.h"

#include <cmath>
#include <initializer_list>

#include "fightdet/rng.hpp"

using fightdet::SeededRng;

// Reference splitmix64 written out independently of the library header.
static std::uint64_t ref_splitmix64(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

TEST_CASE("splitmix64 matches the reference stream") {
    for (std::uint64_t seed : {0ull, 1ull, 42ull, 0xDEADBEEFull}) {
        SeededRng rng(seed);
        std::uint64_t ref_state = seed;
        for (int i = 0; i < 64; ++i) CHECK(rng.next_u64() == ref_splitmix64(ref_state));
    }
}

TEST_CASE("identical seed gives identical stream") {
    SeededRng a(123), b(123);
    for (int i = 0; i < 256; ++i) REQUIRE(a.next_u64() == b.next_u64());
}

TEST_CASE("unit draws stay in [0,1)") {
    SeededRng rng(7);
    for (int i = 0; i < 10000; ++i) {
        double u = rng.next_unit();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
}

TEST_CASE("split streams differ from the parent and from each other") {
    SeededRng parent(99);
    SeededRng c0 = parent.split(0);
    SeededRng c1 = parent.split(1);
    CHECK(c0.next_u64() != c1.next_u64());

    // split is a pure function of (state, stream)
    SeededRng again = parent.split(0);
    SeededRng c0b = parent.split(0);
    CHECK(again.next_u64() == c0b.next_u64());
}

TEST_CASE("normal draws have roughly standard moments") {
    SeededRng rng(2024);
    const int n = 100000;
    double sum = 0.0, sum2 = 0.0;
    for (int i = 0; i < n; ++i) {
        double z = rng.normal();
        sum += z;
        sum2 += z * z;
    }
    const double mean = sum / n;
    const double var = sum2 / n - mean * mean;
    CHECK(std::fabs(mean) < 0.02);
    CHECK(std::fabs(var - 1.0) < 0.03);
}
