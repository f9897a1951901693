#include "dynseq/wavelet.hpp"

#include <bit>
#include <stdexcept>

namespace dynseq {

struct DynString::Node {
    explicit Node(SmallStringConfig cfg, unsigned fanout) : seq(cfg), kids(fanout) {}
    RebuildController seq;
    std::vector<std::unique_ptr<Node>> kids;  // empty at the bottom level
};

namespace {

DynStringConfig checked(DynStringConfig cfg) {
    if (cfg.sigma < 2 || cfg.sigma > (std::uint64_t{1} << 32))
        throw std::invalid_argument("DynString: sigma must be in 2..2^32");
    if (cfg.q < 2 || cfg.q > 64 || !std::has_single_bit(cfg.q))
        throw std::invalid_argument("DynString: q must be a power of two in 2..64");
    return cfg;
}

}  // namespace

DynString::DynString(DynStringConfig config) : cfg_(checked(config)) {
    digit_bits_ = static_cast<unsigned>(std::countr_zero(cfg_.q));
    const unsigned code_bits = static_cast<unsigned>(std::bit_width(cfg_.sigma - 1));
    levels_ = (code_bits + digit_bits_ - 1) / digit_bits_;
    root_ = make_node(0);
}

DynString DynString::build(DynStringConfig config, std::span<const Code> codes) {
    DynString s(config);
    for (Code c : codes) s.push_back(c);
    return s;
}

DynString::~DynString() = default;
DynString::DynString(DynString&&) noexcept = default;
DynString& DynString::operator=(DynString&&) noexcept = default;

unsigned DynString::alphabet(unsigned level) const noexcept {
    if (level > 0) return cfg_.q;
    const unsigned shift = digit_bits_ * (levels_ - 1);
    return static_cast<unsigned>((cfg_.sigma + (std::uint64_t{1} << shift) - 1) >> shift);
}

unsigned DynString::digit(Code c, unsigned level) const noexcept {
    const unsigned shift = digit_bits_ * (levels_ - 1 - level);
    return static_cast<unsigned>((std::uint64_t{c} >> shift) & (level == 0 ? ~0ull : cfg_.q - 1));
}

std::unique_ptr<DynString::Node> DynString::make_node(unsigned level) const {
    SmallStringConfig nc = cfg_.node;
    nc.sigma = alphabet(level);
    return std::make_unique<Node>(nc, level + 1 < levels_ ? nc.sigma : 0);
}

void DynString::check_code(Code c) const {
    if (c >= cfg_.sigma)
        throw std::out_of_range("DynString: code " + std::to_string(c) + " outside alphabet");
}

std::size_t DynString::size() const noexcept { return root_->seq.size(); }

Code DynString::access(std::size_t i) const {
    if (i == 0 || i > size()) throw std::out_of_range("DynString::access: position out of range");
    const Node* node = root_.get();
    std::uint64_t code = 0;
    for (unsigned l = 0;; ++l) {
        const Code d = node->seq.access(i);
        code = (code << digit_bits_) | d;
        if (l + 1 == levels_) return static_cast<Code>(code);
        i = node->seq.rank(d, i);
        node = node->kids[d].get();
    }
}

std::size_t DynString::rank(Code c, std::size_t i) const {
    check_code(c);
    if (i > size()) throw std::out_of_range("DynString::rank: position out of range");
    const Node* node = root_.get();
    for (unsigned l = 0; l < levels_; ++l) {
        if (i == 0) return 0;
        const unsigned d = digit(c, l);
        i = node->seq.rank(d, i);
        if (l + 1 < levels_) {
            node = node->kids[d].get();
            if (!node) return 0;
        }
    }
    return i;
}

std::optional<std::size_t> DynString::select(Code c, std::size_t j) const {
    check_code(c);
    if (j == 0) throw std::invalid_argument("DynString::select: j must be positive");
    std::vector<const Node*> path;
    const Node* node = root_.get();
    for (unsigned l = 0; l < levels_; ++l) {
        path.push_back(node);
        if (l + 1 < levels_) {
            node = node->kids[digit(c, l)].get();
            if (!node) return std::nullopt;
        }
    }
    std::size_t pos = j;
    for (unsigned l = levels_; l-- > 0;) {
        const auto p = path[l]->seq.select(digit(c, l), pos);
        if (!p) return std::nullopt;
        pos = *p;
    }
    return pos;
}

void DynString::insert(Code c, std::size_t i) {
    check_code(c);
    if (i == 0 || i > size() + 1) throw std::out_of_range("DynString::insert: position out of range");
    Node* node = root_.get();
    for (unsigned l = 0; l < levels_; ++l) {
        const unsigned d = digit(c, l);
        node->seq.insert(d, i);
        if (l + 1 == levels_) return;
        i = node->seq.rank(d, i);
        auto& kid = node->kids[d];
        if (!kid) kid = make_node(l + 1);
        node = kid.get();
    }
}

Code DynString::erase(std::size_t i) {
    if (i == 0 || i > size()) throw std::out_of_range("DynString::erase: position out of range");
    Node* node = root_.get();
    std::uint64_t code = 0;
    for (unsigned l = 0;; ++l) {
        const Code d = node->seq.access(i);
        code = (code << digit_bits_) | d;
        if (l + 1 == levels_) {
            node->seq.erase(i);
            return static_cast<Code>(code);
        }
        const std::size_t next = node->seq.rank(d, i);
        node->seq.erase(i);
        i = next;
        node = node->kids[d].get();
    }
}

void DynString::push_back(Code c) {
    check_code(c);
    Node* node = root_.get();
    for (unsigned l = 0; l < levels_; ++l) {
        const unsigned d = digit(c, l);
        node->seq.push_back(d);
        if (l + 1 == levels_) return;
        auto& kid = node->kids[d];
        if (!kid) kid = make_node(l + 1);
        node = kid.get();
    }
}

void DynString::space_node(const Node& node, unsigned level, std::vector<SpaceReport>& per) const {
    per[level] += node.seq.space();
    per[level].overhead_bits += sizeof(Node) * 8 + node.kids.capacity() * sizeof(void*) * 8;
    for (const auto& k : node.kids)
        if (k) space_node(*k, level + 1, per);
}

std::vector<SpaceReport> DynString::level_space() const {
    std::vector<SpaceReport> per(levels_);
    space_node(*root_, 0, per);
    return per;
}

SpaceReport DynString::space() const {
    SpaceReport total;
    total.overhead_bits = sizeof(DynString) * 8;
    for (const auto& r : level_space()) total += r;
    return total;
}

void DynString::validate_node(const Node& node, unsigned level, std::vector<std::string>& out) const {
    const std::string where = "DynString level " + std::to_string(level) + ": ";
    for (auto& m : node.seq.validate()) out.push_back(where + m);
    const std::size_t n = node.seq.size();
    for (unsigned d = 0; d < node.kids.size(); ++d) {
        const std::size_t routed = node.seq.rank(d, n);
        const std::size_t have = node.kids[d] ? node.kids[d]->seq.size() : 0;
        if (routed != have)
            out.push_back(where + "child " + std::to_string(d) + " holds " + std::to_string(have) +
                          " characters, parent routes " + std::to_string(routed));
        if (node.kids[d]) validate_node(*node.kids[d], level + 1, out);
    }
}

std::vector<std::string> DynString::validate() const {
    std::vector<std::string> out;
    validate_node(*root_, 0, out);
    return out;
}

BitVector::BitVector(SmallStringConfig node)
    : s_(DynStringConfig{.sigma = 2, .q = 2, .node = node}) {}

BitVector BitVector::build(const std::vector<bool>& bits, SmallStringConfig node) {
    DynString s(DynStringConfig{.sigma = 2, .q = 2, .node = node});
    for (bool b : bits) s.push_back(b);
    return BitVector(std::move(s));
}

}  // namespace dynseq
