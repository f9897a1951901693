#include "doctest.h"

#include <algorithm>
#include <random>
#include <stdexcept>
#include <vector>

#include "dynseq/bitstore.hpp"

using dynseq::BitBuffer;
namespace bits = dynseq::bits;

namespace {

// Reference bit list: element i is bit i of the buffer.
std::vector<bool> to_bits(const BitBuffer& b) {
    std::vector<bool> v(b.size());
    for (std::size_t i = 0; i < b.size(); ++i) v[i] = b.read(i, 1) != 0;
    return v;
}

BitBuffer from_bits(const std::vector<bool>& v) {
    BitBuffer b;
    for (bool x : v) b.push_back(1, x ? 1 : 0);
    return b;
}

std::uint64_t field(std::uint64_t word, unsigned w, unsigned f) {
    return (word >> (f * w)) & bits::low_mask(w);
}

std::uint64_t pack(std::initializer_list<std::uint64_t> fields, unsigned w) {
    std::uint64_t r = 0;
    unsigned f = 0;
    for (auto v : fields) r |= v << (w * f++);
    return r;
}

}  // namespace

TEST_CASE("field values are little-endian in buffer order") {
    // 13 = 0b1101; buffer bit 0 is the value's low bit.
    BitBuffer b;
    b.push_back(4, 13);
    CHECK(b.read(0, 4) == 13);
    CHECK(b.read(0, 1) == 1);
    CHECK(b.read(1, 1) == 0);
    CHECK(b.read(2, 1) == 1);
    CHECK(b.read(3, 1) == 1);
    CHECK(b.read(2, 2) == 3);
}

TEST_CASE("read and write basics") {
    BitBuffer b;
    b.resize(8);
    CHECK(b.read(2, 3) == 0);
    b.write(0, 3, 5);
    CHECK(b.read(0, 3) == 5);

    BitBuffer c;
    c.resize(3);
    c.write(0, 3, 6);
    CHECK(c.read(0, 3) == 6);

    BitBuffer d;
    d.resize(16);
    d.write(0, 8, 0xAB);
    d.write(8, 8, 0xCD);
    CHECK(d.read(0, 8) == 0xAB);
    CHECK(d.read(8, 8) == 0xCD);

    CHECK_THROWS_AS(c.read(1, 3), std::out_of_range);
    CHECK_THROWS_AS(c.write(0, 2, 4), std::out_of_range);
    CHECK_THROWS_AS(c.read(0, 0), std::out_of_range);
}

TEST_CASE("word-straddling round trip matches a bit-by-bit reference") {
    for (unsigned w = 1; w <= 64; ++w) {
        for (std::size_t off = 50; off < 72; ++off) {
            BitBuffer b;
            b.resize(200);
            const std::uint64_t v = 0x9E3779B97F4A7C15ull & bits::low_mask(w);
            b.write(off, w, v);
            REQUIRE(b.read(off, w) == v);
            for (std::size_t i = 0; i < 200; ++i) {
                const bool expect = i >= off && i < off + w && ((v >> (i - off)) & 1);
                REQUIRE((b.read(i, 1) != 0) == expect);
            }
        }
    }
    BitBuffer b;
    b.resize(128);
    b.write(61, 8, 0xA5);
    CHECK(b.read(61, 8) == 0xA5);
}

TEST_CASE("random round trips") {
    std::mt19937_64 rng(7);
    BitBuffer b;
    b.resize(4096);
    for (int t = 0; t < 20000; ++t) {
        const unsigned w = 1 + rng() % 64;
        const std::size_t off = rng() % (4096 - w + 1);
        const std::uint64_t v = rng() & bits::low_mask(w);
        b.write(off, w, v);
        REQUIRE(b.read(off, w) == v);
    }
}

TEST_CASE("shift_insert and shift_delete against a rebuilt reference") {
    BitBuffer b = from_bits({1, 1, 0, 1});
    b.insert(0, 1, 0);
    CHECK(b.size() == 5);
    CHECK(to_bits(b) == std::vector<bool>{0, 1, 1, 0, 1});
    b.insert(5, 2, 3);
    CHECK(to_bits(b) == std::vector<bool>{0, 1, 1, 0, 1, 1, 1});
    b.erase(5, 2);
    b.erase(0, 1);
    CHECK(to_bits(b) == std::vector<bool>{1, 1, 0, 1});

    std::mt19937_64 rng(11);
    std::vector<bool> ref;
    BitBuffer buf(256);
    for (int t = 0; t < 3000; ++t) {
        const unsigned w = 1 + rng() % 64;
        if (ref.size() >= w && rng() % 3 == 0) {
            const std::size_t off = rng() % (ref.size() - w + 1);
            buf.erase(off, w);
            ref.erase(ref.begin() + static_cast<std::ptrdiff_t>(off),
                      ref.begin() + static_cast<std::ptrdiff_t>(off + w));
        } else {
            const std::size_t off = rng() % (ref.size() + 1);
            const std::uint64_t v = rng() & bits::low_mask(w);
            buf.insert(off, w, v);
            std::vector<bool> f(w);
            for (unsigned i = 0; i < w; ++i) f[i] = (v >> i) & 1;
            ref.insert(ref.begin() + static_cast<std::ptrdiff_t>(off), f.begin(), f.end());
        }
        REQUIRE(buf.size() == ref.size());
        if (t % 97 == 0) REQUIRE(to_bits(buf) == ref);
        REQUIRE(buf.capacity_bits() >= buf.size());
        REQUIRE(buf.capacity_bits() - buf.size() < 256 + 64);
    }
    REQUIRE(buf == from_bits(ref));
}

TEST_CASE("insert then delete restores exact content") {
    std::mt19937_64 rng(3);
    for (int t = 0; t < 500; ++t) {
        BitBuffer b;
        const std::size_t n = rng() % 300;
        for (std::size_t i = 0; i < n; ++i) b.push_back(1, rng() & 1);
        const BitBuffer before = b;
        const unsigned w = 1 + rng() % 64;
        const std::size_t off = rng() % (n + 1);
        b.insert(off, w, rng() & bits::low_mask(w));
        b.erase(off, w);
        REQUIRE(b == before);
    }
}

TEST_CASE("bits past the end stay zero") {
    BitBuffer b;
    b.push_back(64, ~0ull);
    b.push_back(64, ~0ull);
    b.resize(70);
    CHECK(b.words()[1] == 0x3F);
    b.resize(128);
    CHECK(b.read(70, 58) == 0);
}

TEST_CASE("released buffer holds no storage") {
    BitBuffer b(1024);
    b.resize(5000);
    CHECK(b.capacity_bits() == 5120);
    b.release();
    CHECK(b.size() == 0);
    CHECK(b.capacity_bits() == 0);
}

TEST_CASE("word_count_code examples") {
    const std::uint64_t w = pack({2, 0, 1, 2}, 2);
    CHECK(bits::word_count_code(w, 2, 2, 4) == 2);
    CHECK(bits::word_count_code(w, 2, 2, 0) == 0);
    CHECK(bits::word_count_code(0, 3, 0, 21) == 21);
    CHECK(bits::word_count_code(0, 8, 0, 5) == 5);
}

TEST_CASE("word_select_code examples") {
    const std::uint64_t w = pack({2, 0, 1, 2}, 2);
    CHECK(bits::word_select_code(w, 2, 2, 2) == 4u);
    CHECK(bits::word_select_code(w, 2, 2, 1) == 1u);
    CHECK_FALSE(bits::word_select_code(w, 2, 1, 2).has_value());
    CHECK(bits::word_select_code(0, 4, 0, 3) == 3u);
}

TEST_CASE("broadword routines agree with a field loop on random words") {
    std::mt19937_64 rng(2024);
    for (unsigned w = 1; w <= 8; ++w) {
        const unsigned f = bits::fields_per_word(w);
        for (int t = 0; t < 125000; ++t) {
            std::uint64_t word = rng();
            if (t & 1) word &= rng();  // skew towards code 0
            const std::uint64_t code = rng() & bits::low_mask(w);
            const unsigned upto = static_cast<unsigned>(rng() % (f + 1));
            unsigned expect = 0;
            for (unsigned i = 0; i < upto; ++i) expect += field(word, w, i) == code;
            REQUIRE(bits::word_count_code(word, w, code, upto) == expect);

            const unsigned j = 1 + static_cast<unsigned>(rng() % (f + 1));
            std::optional<unsigned> sel;
            for (unsigned i = 0, seen = 0; i < f; ++i)
                if (field(word, w, i) == code && ++seen == j) {
                    sel = i + 1;
                    break;
                }
            REQUIRE(bits::word_select_code(word, w, code, j) == sel);

            std::uint64_t s = 0;
            for (unsigned i = 0; i < upto; ++i) s += field(word, w, i);
            REQUIRE(bits::word_sum_fields(word, w, upto) == s);
        }
    }
}

TEST_CASE("word_sum_fields for wide fields") {
    std::mt19937_64 rng(5);
    for (unsigned w = 9; w <= 64; ++w) {
        const std::uint64_t word = rng();
        const unsigned f = bits::fields_per_word(w);
        std::uint64_t s = 0;
        for (unsigned i = 0; i < f; ++i) s += field(word, w, i);
        CHECK(bits::word_sum_fields(word, w, f) == s);
    }
}
