#include "dynseq/text_index.hpp"

#include <algorithm>
#include <array>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace dynseq {

/// Symbol counts over codes 0..sigma, in groups of SmallSeq::kMaxCapacity
/// entries allocated on first use.
class TextCollection::Counts {
public:
    explicit Counts(std::uint64_t symbols)
        : symbols_(symbols),
          groups_((symbols + kGroup - 1) / kGroup),
          totals_(SmallSeq::rebuild(std::vector<std::uint64_t>(groups_.size(), 0), 64,
                                    std::max<std::size_t>(1, groups_.size()))) {}

    std::uint64_t get(std::uint64_t c) const {
        const auto& g = groups_[c / kGroup];
        return g ? (*g)[c % kGroup + 1] : 0;
    }
    std::uint64_t below(std::uint64_t c) const {
        const std::size_t gi = static_cast<std::size_t>(c / kGroup);
        std::uint64_t s = totals_.sum(gi);
        if (gi < groups_.size() && groups_[gi]) s += groups_[gi]->sum(c % kGroup);
        return s;
    }
    std::uint64_t total() const noexcept { return totals_.total(); }
    void add(std::uint64_t c, std::int64_t delta) {
        auto& g = groups_[c / kGroup];
        if (!g) {
            const std::size_t len = static_cast<std::size_t>(
                std::min<std::uint64_t>(kGroup, symbols_ - c / kGroup * kGroup));
            g = std::make_unique<SmallSeq>(SmallSeq::rebuild(std::vector<std::uint64_t>(len, 0)));
        }
        g->update(c % kGroup + 1, delta);
        totals_.update(c / kGroup + 1, delta);
    }
    std::uint64_t allocated_bits() const {
        std::uint64_t b = totals_.allocated_bits() + groups_.capacity() * sizeof(void*) * 8;
        for (const auto& g : groups_)
            if (g) b += g->allocated_bits() + sizeof(SmallSeq) * 8;
        return b;
    }
    std::vector<std::string> validate() const {
        std::vector<std::string> out = totals_.validate();
        for (std::size_t g = 0; g < groups_.size(); ++g) {
            const std::uint64_t have = groups_[g] ? groups_[g]->total() : 0;
            if (have != totals_[g + 1]) out.push_back("symbol count group total stale");
            if (groups_[g])
                for (auto& m : groups_[g]->validate()) out.push_back(m);
        }
        return out;
    }

private:
    static constexpr std::uint64_t kGroup = SmallSeq::kMaxCapacity;
    std::uint64_t symbols_;
    std::vector<std::unique_ptr<SmallSeq>> groups_;
    SmallSeq totals_;
};

namespace {
DynStringConfig with_sigma(DynStringConfig cfg, std::uint32_t sigma) {
    if (sigma == 0) throw std::invalid_argument("TextCollection: sigma must be positive");
    cfg.sigma = std::uint64_t{sigma} + 1;
    return cfg;
}
}  // namespace

TextCollection::TextCollection(std::uint32_t sigma, DynStringConfig bwt_config)
    : sigma_(sigma),
      bwt_(with_sigma(bwt_config, sigma)),
      counts_(std::make_unique<Counts>(std::uint64_t{sigma} + 1)) {}

TextCollection::~TextCollection() = default;
TextCollection::TextCollection(TextCollection&&) noexcept = default;
TextCollection& TextCollection::operator=(TextCollection&&) noexcept = default;

std::size_t TextCollection::rank_of(DocId id) const {
    const auto it = std::find(docs_.begin(), docs_.end(), id);
    if (it == docs_.end())
        throw std::runtime_error("TextCollection: unknown document " + std::to_string(id));
    return static_cast<std::size_t>(it - docs_.begin()) + 1;
}

std::uint64_t TextCollection::C(Code c) const { return counts_->below(c); }

void TextCollection::check_text(std::span<const Code> text) const {
    if (text.empty()) throw std::invalid_argument("TextCollection: empty document");
    for (Code c : text)
        if (c == 0 || c > sigma_)
            throw std::invalid_argument("TextCollection: code " + std::to_string(c) +
                                        " outside 1.." + std::to_string(sigma_));
}

DocId TextCollection::insert(std::span<const Code> text) {
    check_text(text);
    // The new terminator suffix is row m+1; its BWT symbol is the last
    // character. Each step maps the row of T[k+1..] to the row of T[k..].
    std::size_t p = docs_.size() + 1;
    bwt_.insert(text.back(), p);
    counts_->add(0, 1);
    for (std::size_t k = text.size(); k-- > 0;) {
        const Code c = text[k];
        p = C(c) + bwt_.rank(c, p);
        bwt_.insert(k == 0 ? 0 : text[k - 1], p);
        counts_->add(c, 1);
    }
    docs_.push_back(next_id_);
    return next_id_++;
}

void TextCollection::erase(DocId id) {
    // Remove rows from the terminator suffix outwards. After row p goes, the
    // longest remaining suffix cX of the document has lost the row of X, so
    // its row is C(c) + rank_c(p - 1) + 1.
    std::size_t p = rank_of(id);
    Code first = 0;
    for (;;) {
        const Code c = bwt_.erase(p);
        counts_->add(first, -1);
        if (c == 0) break;
        p = C(c) + bwt_.rank(c, p - 1) + 1;
        first = c;
    }
    docs_.erase(docs_.begin() + static_cast<std::ptrdiff_t>(rank_of(id) - 1));
}

std::vector<Code> TextCollection::extract(DocId id) const {
    std::vector<Code> out;
    std::size_t p = rank_of(id);
    for (Code c = bwt_.access(p); c != 0; c = bwt_.access(p)) {
        out.push_back(c);
        p = C(c) + bwt_.rank(c, p);
    }
    std::reverse(out.begin(), out.end());
    return out;
}

SearchRange TextCollection::search(std::span<const Code> pattern) const {
    SearchRange r{1, total_length()};
    for (std::size_t k = pattern.size(); k-- > 0 && !r.empty();) {
        const Code c = pattern[k];
        if (c == 0 || c > sigma_) return {1, 0};
        r.sp = C(c) + bwt_.rank(c, r.sp - 1) + 1;
        r.ep = C(c) + bwt_.rank(c, r.ep);
    }
    return r.empty() ? SearchRange{1, 0} : r;
}

std::vector<Code> TextCollection::bwt() const {
    std::vector<Code> v;
    v.reserve(bwt_.size());
    for (std::size_t i = 1; i <= bwt_.size(); ++i) v.push_back(bwt_.access(i));
    return v;
}

SpaceReport TextCollection::space() const {
    SpaceReport r = bwt_.space();
    r.overhead_bits += counts_->allocated_bits() + docs_.capacity() * sizeof(DocId) * 8 +
                       sizeof(TextCollection) * 8;
    return r;
}

std::vector<std::string> TextCollection::validate() const {
    std::vector<std::string> out;
    for (auto& m : bwt_.validate()) out.push_back("bwt: " + m);
    for (auto& m : counts_->validate()) out.push_back("counts: " + m);
    const std::size_t n = bwt_.size();
    if (counts_->total() != n) out.push_back("TextCollection: counts do not add up to the BWT length");
    if (bwt_.rank(0, n) != docs_.size())
        out.push_back("TextCollection: terminator count differs from the document count");
    // Exhaustive per-code check only for byte-sized alphabets.
    if (sigma_ <= 255)
        for (Code c = 0; c <= sigma_; ++c)
            if (counts_->get(c) != bwt_.rank(c, n))
                out.push_back("TextCollection: count of code " + std::to_string(c) + " stale");
    return out;
}

namespace {

constexpr std::array<char, 7> kMagic{'S', 'U', 'C', 'I', 'D', 'X', '1'};

template <class T>
void put_le(std::ostream& out, T v) {
    char b[sizeof(T)];
    for (std::size_t i = 0; i < sizeof(T); ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
    out.write(b, sizeof(T));
}

template <class T>
T get_le(std::istream& in) {
    unsigned char b[sizeof(T)];
    if (!in.read(reinterpret_cast<char*>(b), sizeof(T)))
        throw std::runtime_error("index file truncated");
    T v = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) v |= static_cast<T>(b[i]) << (8 * i);
    return v;
}

}  // namespace

void save_index(const TextCollection& t, std::ostream& out) {
    if (t.sigma() > 255) throw std::invalid_argument("save_index: alphabet does not fit bytes");
    out.write(kMagic.data(), kMagic.size());
    put_le<std::uint32_t>(out, static_cast<std::uint32_t>(t.document_count()));
    for (DocId id : t.documents()) {
        const auto doc = t.extract(id);
        put_le<std::uint64_t>(out, doc.size());
        std::string bytes(doc.begin(), doc.end());
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    }
    if (!out) throw std::runtime_error("save_index: write failed");
}

TextCollection load_index(std::istream& in) {
    std::array<char, 7> magic{};
    if (!in.read(magic.data(), magic.size()) || magic != kMagic)
        throw std::runtime_error("not an index file (bad magic)");
    const auto docs = get_le<std::uint32_t>(in);
    TextCollection t(255);
    for (std::uint32_t d = 0; d < docs; ++d) {
        const auto len = get_le<std::uint64_t>(in);
        std::string bytes(static_cast<std::size_t>(len), '\0');
        if (!in.read(bytes.data(), static_cast<std::streamsize>(len)))
            throw std::runtime_error("index file truncated");
        std::vector<Code> codes;
        codes.reserve(bytes.size());
        for (unsigned char ch : bytes) codes.push_back(ch);
        t.insert(codes);
    }
    if (in.peek() != std::char_traits<char>::eof())
        throw std::runtime_error("index file has trailing bytes");
    return t;
}

}  // namespace dynseq
