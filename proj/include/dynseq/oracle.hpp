#pragma once

// Brute-force reference structures. They define the expected behaviour of
// every succinct structure in the library by linear scans and are used by
// the tests, the acceptance suite, and `dynseq bench --verify`.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace dynseq::oracle {

using Code = std::uint32_t;

class NaiveString {
public:
    NaiveString() = default;
    explicit NaiveString(std::vector<Code> codes) : s_(std::move(codes)) {}

    std::size_t size() const noexcept { return s_.size(); }
    const std::vector<Code>& codes() const noexcept { return s_; }

    Code access(std::size_t i) const;                             // 1-based
    std::size_t rank(Code c, std::size_t i) const;                // occurrences in S[1..i]
    std::optional<std::size_t> select(Code c, std::size_t j) const;
    void insert(Code c, std::size_t i);                           // becomes S[i]
    Code erase(std::size_t i);

private:
    std::vector<Code> s_;
};

class NaiveCspsi {
public:
    explicit NaiveCspsi(unsigned d, unsigned k);

    unsigned d() const noexcept { return static_cast<unsigned>(q_.size()); }
    std::size_t size() const noexcept { return q_.empty() ? 0 : q_[0].size(); }
    std::uint64_t get(unsigned j, std::size_t i) const { return q_.at(j - 1).at(i - 1); }
    const std::vector<std::uint64_t>& sequence(unsigned j) const { return q_.at(j - 1); }

    std::uint64_t sum(unsigned j, std::size_t i) const;
    std::optional<std::size_t> search(unsigned j, std::uint64_t x) const;
    void update(unsigned j, std::size_t i, std::int64_t delta);
    void insert0(std::size_t i);
    void delete0(std::size_t i);

private:
    std::vector<std::vector<std::uint64_t>> q_;
    unsigned k_;
};

/// Collection BWT by explicit suffix sorting. Document characters are codes
/// >= 1; each document ends in its own terminator (code 0 in the output).
/// Terminators sort below every character and among themselves by document
/// order; suffixes never run past their own document.
std::vector<Code> nv_bwt(std::span<const std::vector<Code>> docs);

/// Occurrences of `pattern` summed over all documents, by sliding window.
std::size_t nv_count(std::span<const std::vector<Code>> docs, std::span<const Code> pattern);

}  // namespace dynseq::oracle
