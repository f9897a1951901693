#include "doctest.h"

#include <random>
#include <stdexcept>

#include "dynseq/oracle.hpp"
#include "dynseq/rebuild.hpp"

using dynseq::Code;
using dynseq::RebuildController;
using dynseq::SmallStringConfig;
using dynseq::oracle::NaiveString;

namespace {
const SmallStringConfig kTiny{.sigma = 4, .superblock_bits = 64, .block_bits = 64, .b = 2};
}

TEST_CASE("below the threshold nothing migrates") {
    const std::vector<Code> ten{0, 1, 2, 3, 0, 1, 2, 3, 0, 1};
    RebuildController r = RebuildController::build(kTiny, ten);
    r.insert(2, 4);
    CHECK_FALSE(r.migrating());
    CHECK(r.boundary() == 0);
    CHECK(r.size() == 11);
}

TEST_CASE("migration starts past half the epoch length and finishes in n0/3 updates") {
    std::vector<Code> codes(300);
    for (std::size_t i = 0; i < codes.size(); ++i) codes[i] = static_cast<Code>(i % 4);
    RebuildController r = RebuildController::build(kTiny, codes);
    NaiveString ref(codes);
    std::mt19937_64 rng(3);
    std::size_t updates = 0;
    while (!r.migrating()) {
        const std::size_t i = 1 + rng() % (ref.size() + 1);
        r.insert(1, i);
        ref.insert(1, i);
        ++updates;
    }
    CHECK(updates == 151);
    const std::size_t n0 = ref.size();
    std::size_t more = 1;
    while (r.migrating()) {
        REQUIRE(r.boundary() + r.suffix_size() == ref.size());
        const std::size_t i = 1 + rng() % ref.size();
        if (rng() & 1) {
            REQUIRE(r.erase(i) == ref.erase(i));
        } else {
            r.insert(3, i);
            ref.insert(3, i);
        }
        ++more;
        for (int q = 0; q < 5; ++q) {
            const Code c = static_cast<Code>(rng() % 4);
            const std::size_t p = rng() % (ref.size() + 1);
            REQUIRE(r.rank(c, p) == ref.rank(c, p));
            const std::size_t j = 1 + rng() % (ref.rank(c, ref.size()) + 1);
            REQUIRE(r.select(c, j) == ref.select(c, j));
        }
    }
    REQUIRE(r.epochs().size() == 1);
    const auto& e = r.epochs().front();
    CHECK(e.n0 == n0);
    CHECK(e.updates == more);
    CHECK(e.updates <= (n0 + 2) / 3);
    CHECK(3 * e.final_length >= 2 * n0);
    CHECK(3 * e.final_length <= 4 * n0);
    for (std::size_t i = 1; i <= ref.size(); ++i) REQUIRE(r.access(i) == ref.access(i));
    CHECK(r.validate().empty());
}

TEST_CASE("routing by boundary") {
    std::vector<Code> codes(90, 0);
    for (std::size_t i = 0; i < 90; i += 3) codes[i] = 2;
    RebuildController r = RebuildController::build(kTiny, codes);
    NaiveString ref(codes);
    while (!r.migrating()) {
        r.insert(1, r.size() + 1);
        ref.insert(1, ref.size() + 1);
    }
    // Migration moved its first three characters.
    CHECK(r.boundary() == 3);
    const std::size_t p = r.boundary();
    CHECK(r.access(p + 1) == r.current().access(1));
    CHECK(r.rank(2, p) == ref.rank(2, p));
    REQUIRE(r.erase(2) == ref.erase(2));
    CHECK(r.boundary() == p - 1 + 3);
    const std::size_t q = r.boundary() + 2;  // first routed into S_s
    r.insert(3, q);
    ref.insert(3, q);
    CHECK(r.boundary() == q - 2 + 4);
    for (std::size_t i = 1; i <= ref.size(); ++i) REQUIRE(r.access(i) == ref.access(i));
    const std::size_t twos = ref.rank(2, ref.size());
    for (std::size_t j = 1; j <= twos; ++j) REQUIRE(r.select(2, j) == ref.select(2, j));
    CHECK_THROWS_AS(r.select(2, 0), std::invalid_argument);
    CHECK_THROWS_AS(r.access(0), std::out_of_range);
}

TEST_CASE("many epochs stay consistent") {
    std::mt19937_64 rng(9);
    RebuildController r(kTiny);
    NaiveString ref;
    for (int t = 0; t < 20000; ++t) {
        const bool ins = ref.size() < 10 || rng() % 100 < 60;
        if (ins) {
            const Code c = static_cast<Code>(rng() % 4);
            const std::size_t i = 1 + rng() % (ref.size() + 1);
            r.insert(c, i);
            ref.insert(c, i);
        } else {
            const std::size_t i = 1 + rng() % ref.size();
            REQUIRE(r.erase(i) == ref.erase(i));
        }
        REQUIRE(r.boundary() + r.suffix_size() == ref.size());
        if (t % 97 == 0) {
            const Code c = static_cast<Code>(rng() % 4);
            const std::size_t p = rng() % (ref.size() + 1);
            REQUIRE(r.rank(c, p) == ref.rank(c, p));
            REQUIRE(r.validate().empty());
        }
    }
    CHECK(r.epochs().size() >= 3);
    for (const auto& e : r.epochs()) {
        CHECK(e.updates <= std::max<std::size_t>(1, (e.n0 + 2) / 3));
        CHECK(3 * e.final_length >= 2 * e.n0);
        CHECK(3 * e.final_length <= 4 * e.n0 + 3 * (e.n0 == 0));
    }
}
