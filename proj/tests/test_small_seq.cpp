#include "doctest.h"

#include <algorithm>
#include <random>
#include <stdexcept>
#include <vector>

#include "dynseq/small_seq.hpp"

using dynseq::SmallSeq;

namespace {
SmallSeq of(std::initializer_list<std::uint64_t> v, unsigned width = 64) {
    std::vector<std::uint64_t> x(v);
    return SmallSeq::rebuild(x, width);
}
}  // namespace

TEST_CASE("sum examples") {
    const SmallSeq q = of({3, 0, 7, 2});
    CHECK(q.sum(0) == 0);
    CHECK(q.sum(2) == 3);
    CHECK(q.sum(4) == 12);
    CHECK_THROWS_AS(q.sum(5), std::out_of_range);
}

TEST_CASE("search examples") {
    const SmallSeq q = of({3, 0, 7, 2});
    CHECK(q.search(10) == 3u);
    CHECK(q.search(3) == 1u);
    CHECK(q.search(4) == 3u);
    CHECK_FALSE(q.search(13).has_value());
    CHECK_THROWS_AS(q.search(0), std::invalid_argument);
}

TEST_CASE("update examples") {
    SmallSeq q = of({3, 0, 7, 2});
    q.update(4, -2);
    CHECK(std::vector<std::uint64_t>(q.values().begin(), q.values().end()) ==
          std::vector<std::uint64_t>{3, 0, 7, 0});
    q.update(2, 0);
    CHECK(q.sum(2) == 3);
    q.update(2, 5);
    CHECK(q.sum(2) == 8);
    CHECK_THROWS_AS(q.update(1, -4), std::out_of_range);

    SmallSeq narrow = of({250}, 8);
    CHECK_THROWS_AS(narrow.update(1, 6), std::out_of_range);
    narrow.update(1, 5);
    CHECK(narrow.total() == 255);
}

TEST_CASE("insert, erase, rebuild") {
    SmallSeq q = of({1, 2});
    q.insert(1, 9);
    CHECK(q.sum(3) == 12);
    CHECK(q[1] == 9);
    q.erase(1);
    q.insert(1, 9);
    CHECK(q[1] == 9);
    CHECK(q[2] == 1);
    CHECK(of({4, 4, 4}).sum(3) == 12);

    SmallSeq small(16, 2);
    small.push_back(1);
    small.push_back(2);
    CHECK_THROWS_AS(small.push_back(3), std::out_of_range);
    CHECK_THROWS_AS(SmallSeq(0), std::invalid_argument);
    CHECK_THROWS_AS(SmallSeq(8, SmallSeq::kMaxCapacity + 1), std::invalid_argument);
}

TEST_CASE("random operations agree with a plain array") {
    std::mt19937_64 rng(99);
    SmallSeq q(20, 512);
    std::vector<std::uint64_t> ref;
    auto ref_sum = [&](std::size_t i) {
        std::uint64_t s = 0;
        for (std::size_t p = 0; p < i; ++p) s += ref[p];
        return s;
    };
    for (int t = 0; t < 10000; ++t) {
        const int op = static_cast<int>(rng() % 5);
        if ((op == 0 || ref.empty()) && ref.size() < 512) {
            const std::size_t i = 1 + rng() % (ref.size() + 1);
            const std::uint64_t v = rng() % 1000;
            q.insert(i, v);
            ref.insert(ref.begin() + static_cast<std::ptrdiff_t>(i - 1), v);
        } else if (op == 1 && !ref.empty()) {
            const std::size_t i = 1 + rng() % ref.size();
            q.erase(i);
            ref.erase(ref.begin() + static_cast<std::ptrdiff_t>(i - 1));
        } else if (op == 2 && !ref.empty()) {
            const std::size_t i = 1 + rng() % ref.size();
            const std::int64_t delta = static_cast<std::int64_t>(rng() % 200) - 100;
            if (static_cast<std::int64_t>(ref[i - 1]) + delta >= 0) {
                q.update(i, delta);
                ref[i - 1] = static_cast<std::uint64_t>(static_cast<std::int64_t>(ref[i - 1]) + delta);
            } else {
                CHECK_THROWS_AS(q.update(i, delta), std::out_of_range);
            }
        } else {
            const std::size_t i = rng() % (ref.size() + 1);
            REQUIRE(q.sum(i) == ref_sum(i));
            const std::uint64_t x = 1 + rng() % (ref_sum(ref.size()) + 2);
            std::optional<std::size_t> expect;
            for (std::size_t p = 1; p <= ref.size(); ++p)
                if (ref_sum(p) >= x) {
                    expect = p;
                    break;
                }
            REQUIRE(q.search(x) == expect);
        }
        REQUIRE(q.size() == ref.size());
        if (t % 500 == 0) REQUIRE(q.validate().empty());
    }
    for (std::size_t i = 1; i <= ref.size(); ++i)
        if (q.sum(i) >= 1) REQUIRE(*q.search(q.sum(i)) <= i);
}
