#include "dynseq/oracle.hpp"

#include <algorithm>
#include <stdexcept>

namespace dynseq::oracle {

Code NaiveString::access(std::size_t i) const {
    if (i == 0 || i > s_.size()) throw std::out_of_range("NaiveString::access: index out of range");
    return s_[i - 1];
}

std::size_t NaiveString::rank(Code c, std::size_t i) const {
    if (i > s_.size()) throw std::out_of_range("NaiveString::rank: index out of range");
    return static_cast<std::size_t>(std::count(s_.begin(), s_.begin() + static_cast<std::ptrdiff_t>(i), c));
}

std::optional<std::size_t> NaiveString::select(Code c, std::size_t j) const {
    if (j == 0) throw std::invalid_argument("NaiveString::select: j must be positive");
    for (std::size_t p = 0; p < s_.size(); ++p)
        if (s_[p] == c && --j == 0) return p + 1;
    return std::nullopt;
}

void NaiveString::insert(Code c, std::size_t i) {
    if (i == 0 || i > s_.size() + 1) throw std::out_of_range("NaiveString::insert: index out of range");
    s_.insert(s_.begin() + static_cast<std::ptrdiff_t>(i - 1), c);
}

Code NaiveString::erase(std::size_t i) {
    const Code c = access(i);
    s_.erase(s_.begin() + static_cast<std::ptrdiff_t>(i - 1));
    return c;
}

NaiveCspsi::NaiveCspsi(unsigned d, unsigned k) : q_(d), k_(k) {
    if (d == 0) throw std::invalid_argument("NaiveCspsi: need at least one sequence");
}

std::uint64_t NaiveCspsi::sum(unsigned j, std::size_t i) const {
    const auto& q = q_.at(j - 1);
    if (i > q.size()) throw std::out_of_range("NaiveCspsi::sum: index out of range");
    std::uint64_t s = 0;
    for (std::size_t p = 0; p < i; ++p) s += q[p];
    return s;
}

std::optional<std::size_t> NaiveCspsi::search(unsigned j, std::uint64_t x) const {
    if (x == 0) throw std::invalid_argument("NaiveCspsi::search: target must be positive");
    const auto& q = q_.at(j - 1);
    std::uint64_t s = 0;
    for (std::size_t p = 0; p < q.size(); ++p) {
        s += q[p];
        if (s >= x) return p + 1;
    }
    return std::nullopt;
}

void NaiveCspsi::update(unsigned j, std::size_t i, std::int64_t delta) {
    auto& v = q_.at(j - 1).at(i - 1);
    const std::int64_t nv = static_cast<std::int64_t>(v) + delta;
    if (nv < 0 || (k_ < 63 && nv >= (std::int64_t{1} << k_)))
        throw std::out_of_range("NaiveCspsi::update: value out of range");
    v = static_cast<std::uint64_t>(nv);
}

void NaiveCspsi::insert0(std::size_t i) {
    if (i == 0 || i > size() + 1) throw std::out_of_range("NaiveCspsi::insert0: index out of range");
    for (auto& q : q_) q.insert(q.begin() + static_cast<std::ptrdiff_t>(i - 1), 0);
}

void NaiveCspsi::delete0(std::size_t i) {
    if (i == 0 || i > size()) throw std::out_of_range("NaiveCspsi::delete0: index out of range");
    for (const auto& q : q_)
        if (q[i - 1] != 0) throw std::invalid_argument("NaiveCspsi::delete0: entry is nonzero");
    for (auto& q : q_) q.erase(q.begin() + static_cast<std::ptrdiff_t>(i - 1));
}

std::vector<Code> nv_bwt(std::span<const std::vector<Code>> docs) {
    struct Suffix {
        std::size_t doc;
        std::size_t start;
    };
    std::vector<Suffix> rows;
    for (std::size_t d = 0; d < docs.size(); ++d)
        for (std::size_t s = 0; s <= docs[d].size(); ++s) rows.push_back({d, s});

    auto less = [&](const Suffix& a, const Suffix& b) {
        const auto& ta = docs[a.doc];
        const auto& tb = docs[b.doc];
        std::size_t i = a.start, j = b.start;
        for (;; ++i, ++j) {
            const bool ea = i == ta.size(), eb = j == tb.size();
            if (ea || eb) {
                if (ea && eb) return a.doc < b.doc;
                return ea;
            }
            if (ta[i] != tb[j]) return ta[i] < tb[j];
        }
    };
    std::sort(rows.begin(), rows.end(), less);

    std::vector<Code> bwt;
    bwt.reserve(rows.size());
    for (const Suffix& r : rows) bwt.push_back(r.start == 0 ? 0 : docs[r.doc][r.start - 1]);
    return bwt;
}

std::size_t nv_count(std::span<const std::vector<Code>> docs, std::span<const Code> pattern) {
    if (pattern.empty()) throw std::invalid_argument("nv_count: empty pattern");
    std::size_t total = 0;
    for (const auto& t : docs) {
        if (t.size() < pattern.size()) continue;
        for (std::size_t s = 0; s + pattern.size() <= t.size(); ++s)
            if (std::equal(pattern.begin(), pattern.end(), t.begin() + static_cast<std::ptrdiff_t>(s)))
                ++total;
    }
    return total;
}

}  // namespace dynseq::oracle
