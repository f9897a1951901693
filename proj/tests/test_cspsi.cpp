#include "doctest.h"

#include <algorithm>
#include <random>
#include <stdexcept>

#include "dynseq/cspsi.hpp"
#include "dynseq/detail/testing.hpp"
#include "dynseq/oracle.hpp"

using dynseq::Cspsi;
using dynseq::CspsiConfig;
using dynseq::oracle::NaiveCspsi;

namespace {

// d = 2, Q1 = [1,2,3], Q2 = [0,5,0].
Cspsi example() {
    Cspsi c(CspsiConfig{.d = 2, .k = 8});
    for (int i = 0; i < 3; ++i) c.insert(1);
    c.update(1, 1, 1);
    c.update(1, 2, 2);
    c.update(1, 3, 3);
    c.update(2, 2, 5);
    return c;
}

std::vector<std::uint64_t> seq(const Cspsi& c, unsigned j) {
    std::vector<std::uint64_t> v;
    for (std::size_t i = 1; i <= c.size(); ++i) v.push_back(c.get(j, i));
    return v;
}

// Small superblocks so a few thousand positions give a multi-level tree.
CspsiConfig tiny(unsigned d, unsigned k) {
    CspsiConfig cfg{.d = d, .k = k, .superblock_bits = 256, .block_bits = 64, .b_min = 2};
    while (cfg.superblock_bits < 2ull * d * k) cfg.superblock_bits *= 2;
    return cfg;
}

void replay(CspsiConfig cfg, int ops, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    Cspsi c(cfg);
    NaiveCspsi ref(cfg.d, cfg.k);
    const std::uint64_t vmax = cfg.k >= 64 ? ~0ull : (1ull << cfg.k) - 1;
    for (int t = 0; t < ops; ++t) {
        const unsigned j = 1 + static_cast<unsigned>(rng() % cfg.d);
        const int op = static_cast<int>(rng() % 10);
        const std::size_t n = ref.size();
        if (op < 3 || n == 0) {
            const std::size_t i = 1 + rng() % (n + 1);
            c.insert(i);
            ref.insert0(i);
        } else if (op < 5) {
            const std::size_t i = 1 + rng() % n;
            for (unsigned q = 1; q <= cfg.d; ++q) {
                const auto v = static_cast<std::int64_t>(ref.get(q, i));
                if (v) {
                    c.update(q, i, -v);
                    ref.update(q, i, -v);
                }
            }
            c.erase(i);
            ref.delete0(i);
        } else if (op < 7) {
            const std::size_t i = 1 + rng() % n;
            const std::uint64_t v = ref.get(j, i);
            const std::uint64_t target = std::min<std::uint64_t>(vmax, rng() % 50);
            const auto delta = static_cast<std::int64_t>(target) - static_cast<std::int64_t>(v);
            c.update(j, i, delta);
            ref.update(j, i, delta);
        } else if (op < 8) {
            const std::size_t i = rng() % (n + 1);
            REQUIRE(c.sum(j, i) == ref.sum(j, i));
        } else if (op < 9) {
            const std::uint64_t x = 1 + rng() % (ref.sum(j, n) + 2);
            REQUIRE(c.search(j, x) == ref.search(j, x));
        } else {
            const std::size_t i = 1 + rng() % n;
            REQUIRE(c.get(j, i) == ref.get(j, i));
        }
        REQUIRE(c.size() == ref.size());
        if (t % 64 == 0) {
            const auto problems = c.validate();
            REQUIRE_MESSAGE(problems.empty(), problems.front());
        }
    }
    for (unsigned j = 1; j <= cfg.d; ++j) REQUIRE(seq(c, j) == ref.sequence(j));
    REQUIRE(c.validate().empty());
}

}  // namespace

TEST_CASE("sum examples") {
    const Cspsi c = example();
    CHECK(c.sum(1, 2) == 3);
    CHECK(c.sum(2, 0) == 0);
    CHECK(c.sum(2, 3) == 5);
    CHECK_THROWS_AS(c.sum(3, 1), std::out_of_range);
    CHECK_THROWS_AS(c.sum(1, 4), std::out_of_range);
}

TEST_CASE("search examples") {
    const Cspsi c = example();
    CHECK(c.search(2, 5) == 2u);
    CHECK(c.search(1, 4) == 3u);
    CHECK_FALSE(c.search(1, 7).has_value());
    CHECK_THROWS_AS(c.search(1, 0), std::invalid_argument);
}

TEST_CASE("update examples") {
    Cspsi c = example();
    c.update(1, 2, 4);
    CHECK(c.sum(1, 3) == 10);
    c.update(1, 2, 0);
    CHECK(c.sum(1, 3) == 10);
    CHECK_THROWS_AS(c.update(2, 1, -1), std::out_of_range);
    CHECK_THROWS_AS(c.update(2, 2, 251), std::out_of_range);
    CHECK(c.sum(2, 3) == 5);
}

TEST_CASE("insert and delete examples") {
    Cspsi c = example();
    c.insert(2);
    CHECK(c.size() == 4);
    CHECK(seq(c, 1) == std::vector<std::uint64_t>{1, 0, 2, 3});
    CHECK(seq(c, 2) == std::vector<std::uint64_t>{0, 0, 5, 0});
    c.erase(2);
    CHECK(seq(c, 1) == std::vector<std::uint64_t>{1, 2, 3});
    CHECK(seq(c, 2) == std::vector<std::uint64_t>{0, 5, 0});
    CHECK_THROWS_AS(c.erase(1), std::invalid_argument);
    CHECK(c.size() == 3);
    CHECK_THROWS_AS(c.insert(5), std::out_of_range);
}

TEST_CASE("configuration is checked") {
    CHECK_THROWS_AS(Cspsi(CspsiConfig{.d = 0}), std::invalid_argument);
    CHECK_THROWS_AS(Cspsi(CspsiConfig{.d = 65}), std::invalid_argument);
    CHECK_THROWS_AS(Cspsi(CspsiConfig{.k = 0}), std::invalid_argument);
    CHECK_THROWS_AS(Cspsi(CspsiConfig{.d = 64, .k = 64, .superblock_bits = 4096}),
                    std::invalid_argument);
    CHECK_THROWS_AS(Cspsi(CspsiConfig{.block_bits = 100}), std::invalid_argument);
    CHECK_THROWS_AS(Cspsi(CspsiConfig{.b_min = 1}), std::invalid_argument);
}

TEST_CASE("space report") {
    Cspsi c(CspsiConfig{.d = 2, .k = 8});
    CHECK(c.space().payload_bits == 0);
    for (int i = 0; i < 1000; ++i) c.insert(1 + static_cast<std::size_t>(i) / 2);
    CHECK(c.space().payload_bits == 16000);
    CHECK(c.space().overhead_bits > 0);
}

TEST_CASE("many inserts keep the validator clean") {
    std::mt19937_64 rng(1);
    Cspsi c(tiny(3, 5));
    for (int t = 0; t < 10000; ++t) {
        c.insert(1 + rng() % (c.size() + 1));
        if (t % 250 == 0) REQUIRE(c.validate().empty());
    }
    CHECK(c.height() >= 3);
    CHECK(c.validate().empty());
}

TEST_CASE("random replays match the reference") {
    for (unsigned d : {1u, 2u, 7u})
        for (unsigned k : {1u, 6u, 32u, 64u}) {
            CAPTURE(d);
            CAPTURE(k);
            replay(tiny(d, k), 4000, 17 * d + k);
        }
    replay(CspsiConfig{.d = 4, .k = 10}, 6000, 5);
}

TEST_CASE("delete everything then refill") {
    Cspsi c(tiny(2, 4));
    for (int i = 0; i < 3000; ++i) c.insert(1);
    while (c.size() > 0) {
        c.erase(1 + c.size() / 3);
        if (c.size() % 300 == 0) REQUIRE(c.validate().empty());
    }
    CHECK(c.height() == 1);
    for (int i = 0; i < 1000; ++i) {
        c.insert(c.size() + 1);
        c.update(1 + i % 2, c.size(), 3);
    }
    CHECK(c.total(1) + c.total(2) == 3000);
    CHECK(c.validate().empty());
}

TEST_CASE("insert then delete is the identity") {
    std::mt19937_64 rng(8);
    Cspsi c(tiny(2, 8));
    NaiveCspsi ref(2, 8);
    for (int i = 0; i < 500; ++i) {
        const std::size_t p = 1 + rng() % (ref.size() + 1);
        c.insert(p);
        ref.insert0(p);
        c.update(1, p, static_cast<std::int64_t>(rng() % 200));
        ref.update(1, p, static_cast<std::int64_t>(c.get(1, p)));
    }
    for (int t = 0; t < 2000; ++t) {
        const std::size_t p = 1 + rng() % (c.size() + 1);
        c.insert(p);
        c.erase(p);
    }
    CHECK(seq(c, 1) == ref.sequence(1));
    CHECK(seq(c, 2) == ref.sequence(2));
}

TEST_CASE("validator reports a corrupted aggregate") {
    Cspsi c = example();
    REQUIRE(c.validate().empty());
    dynseq::CspsiAccess::corrupt_root_sum(c);
    CHECK_FALSE(c.validate().empty());
}
