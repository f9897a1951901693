#include "dynseq/small_seq.hpp"

#include <numeric>
#include <stdexcept>

namespace dynseq {

SmallSeq::SmallSeq(unsigned width, std::size_t capacity) : capacity_(capacity), width_(width) {
    if (width == 0 || width > 64) throw std::invalid_argument("SmallSeq: width must be in 1..64");
    if (capacity == 0 || capacity > kMaxCapacity)
        throw std::invalid_argument("SmallSeq: capacity must be in 1..65536");
}

SmallSeq SmallSeq::rebuild(std::span<const std::uint64_t> values, unsigned width,
                           std::size_t capacity) {
    SmallSeq q(width, capacity);
    if (values.size() > capacity) throw std::out_of_range("SmallSeq::rebuild: too many entries");
    q.values_.reserve(values.size());
    for (std::uint64_t v : values) {
        q.check_value(v);
        q.values_.push_back(v);
        q.total_ += v;
    }
    q.regroup(0);
    return q;
}

void SmallSeq::check_value(std::uint64_t v) const {
    if (width_ < 64 && (v >> width_) != 0)
        throw std::out_of_range("SmallSeq: entry does not fit in " + std::to_string(width_) +
                                " bits");
}

std::uint64_t SmallSeq::at(std::size_t i) const {
    if (i == 0 || i > size()) throw std::out_of_range("SmallSeq::at: index out of range");
    return values_[i - 1];
}

std::uint64_t SmallSeq::sum(std::size_t i) const {
    if (i > size()) throw std::out_of_range("SmallSeq::sum: index out of range");
    if (i == size()) return total_;
    const std::size_t groups = i / kGroup;
    std::uint64_t s = 0;
    for (std::size_t g = 0; g < groups; ++g) s += group_sums_[g];
    for (std::size_t p = groups * kGroup; p < i; ++p) s += values_[p];
    return s;
}

std::optional<std::size_t> SmallSeq::search(std::uint64_t x) const {
    if (x == 0) throw std::invalid_argument("SmallSeq::search: target must be positive");
    if (x > total_) return std::nullopt;
    std::uint64_t acc = 0;
    std::size_t g = 0;
    while (g < group_sums_.size() && acc + group_sums_[g] < x) acc += group_sums_[g++];
    for (std::size_t p = g * kGroup; p < values_.size(); ++p) {
        acc += values_[p];
        if (acc >= x) return p + 1;
    }
    return std::nullopt;  // unreachable while total_ is consistent
}

void SmallSeq::update(std::size_t i, std::int64_t delta) {
    if (i == 0 || i > size()) throw std::out_of_range("SmallSeq::update: index out of range");
    std::uint64_t& v = values_[i - 1];
    std::uint64_t nv;
    if (delta < 0) {
        const std::uint64_t mag = static_cast<std::uint64_t>(-(delta + 1)) + 1;
        if (mag > v) throw std::out_of_range("SmallSeq::update: entry would become negative");
        nv = v - mag;
    } else {
        nv = v + static_cast<std::uint64_t>(delta);
        if (nv < v) throw std::out_of_range("SmallSeq::update: entry overflow");
    }
    check_value(nv);
    const std::size_t g = (i - 1) / kGroup;
    if (g < group_sums_.size()) group_sums_[g] = group_sums_[g] - v + nv;
    total_ = total_ - v + nv;
    v = nv;
}

void SmallSeq::assign(std::size_t i, std::uint64_t value) {
    if (i == 0 || i > size()) throw std::out_of_range("SmallSeq::assign: index out of range");
    check_value(value);
    std::uint64_t& v = values_[i - 1];
    const std::size_t g = (i - 1) / kGroup;
    if (g < group_sums_.size()) group_sums_[g] = group_sums_[g] - v + value;
    total_ = total_ - v + value;
    v = value;
}

void SmallSeq::insert(std::size_t i, std::uint64_t value) {
    if (i == 0 || i > size() + 1) throw std::out_of_range("SmallSeq::insert: index out of range");
    if (size() >= capacity_) throw std::out_of_range("SmallSeq::insert: capacity exceeded");
    check_value(value);
    values_.insert(values_.begin() + static_cast<std::ptrdiff_t>(i - 1), value);
    total_ += value;
    regroup((i - 1) / kGroup);
}

void SmallSeq::erase(std::size_t i) {
    if (i == 0 || i > size()) throw std::out_of_range("SmallSeq::erase: index out of range");
    total_ -= values_[i - 1];
    values_.erase(values_.begin() + static_cast<std::ptrdiff_t>(i - 1));
    regroup((i - 1) / kGroup);
}

void SmallSeq::regroup(std::size_t from_group) {
    const std::size_t groups = values_.size() / kGroup;
    group_sums_.resize(groups);
    for (std::size_t g = from_group; g < groups; ++g) {
        const auto first = values_.begin() + static_cast<std::ptrdiff_t>(g * kGroup);
        group_sums_[g] = std::accumulate(first, first + kGroup, std::uint64_t{0});
    }
}

std::size_t SmallSeq::allocated_bits() const noexcept {
    return (values_.capacity() + group_sums_.capacity()) * 64;
}

std::vector<std::string> SmallSeq::validate() const {
    std::vector<std::string> out;
    if (values_.size() > capacity_) out.push_back("SmallSeq: size exceeds capacity");
    std::uint64_t t = 0;
    for (std::uint64_t v : values_) {
        if (width_ < 64 && (v >> width_) != 0) out.push_back("SmallSeq: entry too wide");
        t += v;
    }
    if (t != total_) out.push_back("SmallSeq: cached total disagrees with entries");
    if (group_sums_.size() != values_.size() / kGroup)
        out.push_back("SmallSeq: group count mismatch");
    for (std::size_t g = 0; g < group_sums_.size(); ++g) {
        const auto first = values_.begin() + static_cast<std::ptrdiff_t>(g * kGroup);
        if (std::accumulate(first, first + kGroup, std::uint64_t{0}) != group_sums_[g])
            out.push_back("SmallSeq: group sum " + std::to_string(g) + " stale");
    }
    return out;
}

}  // namespace dynseq
