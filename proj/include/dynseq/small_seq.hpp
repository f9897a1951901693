#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dynseq/space.hpp"

namespace dynseq {

/// Short sequence of nonnegative integers with prefix-sum search.
///
/// Every B-tree node keeps its per-child aggregates in one of these, and the
/// text index keeps its symbol counts in one. Entries are `width`-bit
/// (width <= 64); indices are 1-based. Running sums use 64-bit arithmetic, so
/// the total must stay below 2^64.
///
/// Entries live in a flat array; every complete group of 64 entries also has
/// a cached group sum, so queries touch at most size/64 group sums plus 64
/// entries.
class SmallSeq {
public:
    static constexpr std::size_t kMaxCapacity = std::size_t{1} << 16;

    explicit SmallSeq(unsigned width = 64, std::size_t capacity = kMaxCapacity);

    static SmallSeq rebuild(std::span<const std::uint64_t> values, unsigned width = 64,
                            std::size_t capacity = kMaxCapacity);

    std::size_t size() const noexcept { return values_.size(); }
    bool empty() const noexcept { return values_.empty(); }
    std::size_t capacity() const noexcept { return capacity_; }
    unsigned width() const noexcept { return width_; }

    /// Entry i, 1-based.
    std::uint64_t at(std::size_t i) const;
    std::uint64_t operator[](std::size_t i) const noexcept { return values_[i - 1]; }

    /// Sum of the first i entries, i in 0..size().
    std::uint64_t sum(std::size_t i) const;
    std::uint64_t total() const noexcept { return total_; }
    /// Smallest i with sum(i) >= x, for x >= 1; nullopt when x > total().
    std::optional<std::size_t> search(std::uint64_t x) const;

    void update(std::size_t i, std::int64_t delta);
    void assign(std::size_t i, std::uint64_t value);
    void insert(std::size_t i, std::uint64_t value);
    void erase(std::size_t i);
    void push_back(std::uint64_t value) { insert(size() + 1, value); }

    std::span<const std::uint64_t> values() const noexcept { return values_; }

    /// Heap storage in bits, excluding the object itself.
    std::size_t allocated_bits() const noexcept;
    /// Checks cached sums against the entries; empty when consistent.
    std::vector<std::string> validate() const;

private:
    static constexpr std::size_t kGroup = 64;

    void check_value(std::uint64_t v) const;
    void regroup(std::size_t from_group);

    std::vector<std::uint64_t> values_;
    std::vector<std::uint64_t> group_sums_;  // complete groups only
    std::uint64_t total_ = 0;
    std::size_t capacity_;
    unsigned width_;
};

}  // namespace dynseq
