#include "dynseq/small_string.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include "dynseq/detail/testing.hpp"

namespace dynseq {

struct SmallString::Leaf {
    explicit Leaf(std::size_t block_bits) : bits(block_bits) {}
    BitBuffer bits;
    std::size_t chars = 0;
    bool full = false;
    std::size_t level = 1;     // cursor: ancestor `level` steps up (1 = parent)
    std::size_t inserted = 0;  // insertions since the cursor last moved
};

struct SmallString::Node {
    Node(bool is_bottom, std::size_t cap) : bottom(is_bottom), U(64, cap), I(64, cap) {}
    std::size_t degree() const noexcept { return bottom ? leaves.size() : kids.size(); }

    bool bottom;
    std::vector<std::unique_ptr<Node>> kids;
    std::vector<std::unique_ptr<Leaf>> leaves;
    SmallSeq U;  // leaves under each child
    SmallSeq I;  // characters under each child
    std::vector<std::uint8_t> pair_start;  // edge c is paired with edge c+1
};

namespace {

unsigned code_width_for(unsigned sigma) {
    return std::max(1u, static_cast<unsigned>(std::bit_width(sigma - 1u)));
}

SmallStringConfig checked(SmallStringConfig cfg) {
    if (cfg.sigma < 2 || cfg.sigma > 64)
        throw std::invalid_argument("SmallString: sigma must be in 2..64");
    if (cfg.block_bits == 0 || cfg.block_bits % 64 != 0)
        throw std::invalid_argument("SmallString: block size must be a positive multiple of 64");
    if (cfg.superblock_bits < 64)
        throw std::invalid_argument("SmallString: superblock size must be at least 64 bits");
    if (cfg.b < 2) throw std::invalid_argument("SmallString: b must be at least 2");
    return cfg;
}

CspsiConfig counts_config(const SmallStringConfig& cfg) {
    const std::size_t m = 2 * cfg.superblock_bits / code_width_for(cfg.sigma);
    CspsiConfig e;
    e.d = cfg.sigma;
    e.k = static_cast<unsigned>(std::bit_width(m + 1));
    e.superblock_bits = std::max<std::size_t>(cfg.superblock_bits, 4ull * e.d * e.k);
    e.block_bits = cfg.block_bits;
    return e;
}

}  // namespace

SmallString::SmallString(SmallStringConfig config)
    : cfg_(checked(config)),
      width_(code_width_for(cfg_.sigma)),
      m_(2 * cfg_.superblock_bits / width_),
      root_(make_node(true)),
      E_(counts_config(cfg_)) {
    root_->leaves.push_back(make_leaf());
    recompute(*root_);
    E_.insert(1);
}

SmallString SmallString::build(SmallStringConfig config, std::span<const Code> codes) {
    SmallString s(config);
    for (Code c : codes) s.push_back(c);
    return s;
}

SmallString::~SmallString() = default;
SmallString::SmallString(SmallString&&) noexcept = default;
SmallString& SmallString::operator=(SmallString&&) noexcept = default;

std::unique_ptr<SmallString::Node> SmallString::make_node(bool bottom) const {
    return std::make_unique<Node>(bottom, 4 * cfg_.b + 2);
}

std::unique_ptr<SmallString::Leaf> SmallString::make_leaf() const {
    return std::make_unique<Leaf>(cfg_.block_bits);
}

std::size_t SmallString::leaf_count() const noexcept { return root_->U.total(); }

std::size_t SmallString::height_bound() const noexcept {
    // A non-root node has at least b children and the root at least two,
    // so height h needs at least 2 * b^(h-1) leaves.
    const std::size_t leaves = leaf_count();
    std::size_t h = 1;
    for (double need = 2.0 * cfg_.b; need <= static_cast<double>(leaves); need *= cfg_.b) ++h;
    return h;
}

std::size_t SmallString::quota() const noexcept {
    return std::max<std::size_t>(1, (m_ + 2 * height_ - 1) / (2 * height_));
}

void SmallString::check_code(Code c) const {
    if (c >= cfg_.sigma)
        throw std::out_of_range("SmallString: code " + std::to_string(c) + " outside alphabet of " +
                                std::to_string(cfg_.sigma));
}

void SmallString::recompute(Node& node) const {
    std::vector<std::uint64_t> u, in;
    u.reserve(node.degree());
    in.reserve(node.degree());
    if (node.bottom) {
        for (const auto& l : node.leaves) {
            u.push_back(1);
            in.push_back(l->chars);
        }
    } else {
        for (const auto& k : node.kids) {
            u.push_back(k->U.total());
            in.push_back(k->I.total());
        }
    }
    node.U = SmallSeq::rebuild(u, 64, 4 * cfg_.b + 2);
    node.I = SmallSeq::rebuild(in, 64, 4 * cfg_.b + 2);
    node.pair_start.assign(node.degree(), 0);
}

// ---- navigation -------------------------------------------------------------

SmallString::Loc SmallString::locate_char(std::size_t i) const {
    Loc loc;
    Node* node = root_.get();
    std::size_t s = i;
    for (;;) {
        const std::size_t c = *node->I.search(s) - 1;
        loc.index += node->U.sum(c);
        s -= node->I.sum(c);
        loc.path.push_back({node, c});
        if (node->bottom) {
            loc.leaf = node->leaves[c].get();
            loc.index += 1;
            loc.offset = s - 1;
            return loc;
        }
        node = node->kids[c].get();
    }
}

SmallString::Loc SmallString::locate_leaf(std::size_t j) const {
    Loc loc;
    Node* node = root_.get();
    std::size_t s = j;
    for (;;) {
        const std::size_t c = *node->U.search(s) - 1;
        s -= node->U.sum(c);
        loc.path.push_back({node, c});
        if (node->bottom) {
            loc.leaf = node->leaves[c].get();
            loc.index = j;
            return loc;
        }
        node = node->kids[c].get();
    }
}

SmallString::Node* SmallString::ancestor(const Loc& loc, std::size_t level) const {
    return loc.path[height_ - level].node;
}

void SmallString::add_chars(const Loc& loc, std::int64_t delta) {
    for (const Step& st : loc.path) st.node->I.update(st.child + 1, delta);
}

// ---- leaf payload -----------------------------------------------------------

std::size_t SmallString::leaf_rank(const Leaf& leaf, Code c, std::size_t upto) const {
    const unsigned per = bits::fields_per_word(width_);
    std::size_t r = 0, p = 0;
    for (; p + per <= upto; p += per)
        r += bits::word_count_code(leaf.bits.get(p * width_, per * width_), width_, c, per);
    if (p < upto) {
        const unsigned rest = static_cast<unsigned>(upto - p);
        r += bits::word_count_code(leaf.bits.get(p * width_, rest * width_), width_, c, rest);
    }
    return r;
}

std::size_t SmallString::leaf_select(const Leaf& leaf, Code c, std::size_t j) const {
    const unsigned per = bits::fields_per_word(width_);
    for (std::size_t p = 0; p < leaf.chars; p += per) {
        const unsigned take = static_cast<unsigned>(std::min<std::size_t>(per, leaf.chars - p));
        const std::uint64_t word = leaf.bits.get(p * width_, take * width_);
        const unsigned here = bits::word_count_code(word, width_, c, take);
        if (here >= j) return p + *bits::word_select_code(word, width_, c, static_cast<unsigned>(j));
        j -= here;
    }
    throw std::logic_error("SmallString: leaf select ran past the superblock");
}

void SmallString::leaf_insert(Leaf& leaf, std::size_t offset, Code c) const {
    leaf.bits.insert(offset * width_, width_, c);
    ++leaf.chars;
}

Code SmallString::leaf_erase(Leaf& leaf, std::size_t offset) const {
    const Code c = static_cast<Code>(leaf.bits.get(offset * width_, width_));
    leaf.bits.erase(offset * width_, width_);
    --leaf.chars;
    return c;
}

// ---- queries ----------------------------------------------------------------

Code SmallString::access(std::size_t i) const {
    if (i == 0 || i > n_) throw std::out_of_range("SmallString::access: position out of range");
    const Loc loc = locate_char(i);
    return static_cast<Code>(loc.leaf->bits.get(loc.offset * width_, width_));
}

std::size_t SmallString::rank(Code c, std::size_t i) const {
    check_code(c);
    if (i > n_) throw std::out_of_range("SmallString::rank: position out of range");
    if (i == 0) return 0;
    const Loc loc = locate_char(i);
    return E_.sum(c + 1, loc.index - 1) + leaf_rank(*loc.leaf, c, loc.offset + 1);
}

std::optional<std::size_t> SmallString::select(Code c, std::size_t j) const {
    check_code(c);
    if (j == 0) throw std::invalid_argument("SmallString::select: j must be positive");
    const auto sb = E_.search(c + 1, j);
    if (!sb) return std::nullopt;
    const std::size_t within = j - E_.sum(c + 1, *sb - 1);
    const Node* node = root_.get();
    std::size_t s = *sb, before = 0;
    for (;;) {
        const std::size_t k = *node->U.search(s) - 1;
        s -= node->U.sum(k);
        before += node->I.sum(k);
        if (node->bottom) return before + leaf_select(*node->leaves[k], c, within);
        node = node->kids[k].get();
    }
}

// ---- updates ----------------------------------------------------------------

void SmallString::insert(Code c, std::size_t i) {
    check_code(c);
    if (i == 0 || i > n_ + 1) throw std::out_of_range("SmallString::insert: position out of range");
    // Target: the leaf holding S[i-1]; the new character lands right after it.
    Loc loc = i == 1 ? locate_leaf(1) : locate_char(i - 1);
    const std::size_t z = i == 1 ? 0 : loc.offset + 1;
    const std::size_t j = loc.index;
    Leaf& target = *loc.leaf;
    std::size_t grown = j;

    if (target.full && j > 1 && !locate_leaf(j - 1).leaf->full) {
        // Hand the first character to the overflow leaf on the left.
        Loc left = locate_leaf(j - 1);
        const Code beta = leaf_erase(target, 0);
        leaf_insert(target, z - 1, c);
        leaf_insert(*left.leaf, left.leaf->chars, beta);
        add_chars(left, 1);
        E_.update(beta + 1, j - 1, 1);
        E_.update(beta + 1, j, -1);
        E_.update(c + 1, j, 1);
        grown = j - 1;
    } else {
        leaf_insert(target, z, c);
        add_chars(loc, 1);
        E_.update(c + 1, j, 1);
    }
    ++n_;
    ++locate_leaf(grown).leaf->inserted;
    after_insert(grown);
}

void SmallString::after_insert(std::size_t j) {
    Leaf* B = locate_leaf(j).leaf;
    const bool overflow = !B->full && j < leaf_count() && locate_leaf(j + 1).leaf->full;

    split_if_big(j, B->level);
    if (overflow) {
        Leaf* B2 = locate_leaf(j + 1).leaf;
        Node* v = ancestor(locate_leaf(j), B->level);
        Node* u = ancestor(locate_leaf(j + 1), B2->level);
        if (u != v) split_if_big(j + 1, B2->level);
    }

    const bool at_root = B->level >= height_;
    if (B->chars >= 2 && ((at_root && (B->full || B->inserted >= quota())) || B->chars > m_)) {
        split_leaf(j);
    } else if (B->inserted >= quota() && !at_root) {
        ++B->level;
        B->inserted = 0;
        if (overflow) {
            Leaf* B2 = locate_leaf(j + 1).leaf;
            B2->level = std::min(B2->level + 1, height_);
            B2->inserted = 0;
        }
    }
}

void SmallString::split_if_big(std::size_t j, std::size_t level) {
    const Loc loc = locate_leaf(j);
    if (ancestor(loc, level)->degree() >= 2 * cfg_.b) split_node(loc, height_ - level, true);
}

void SmallString::split_leaf(std::size_t j) {
    // B becomes [first character] + [rest, marked full].
    Loc loc = locate_leaf(j);
    Leaf& B = *loc.leaf;
    Node& parent = *loc.path.back().node;
    const std::size_t c = loc.path.back().child;

    auto left = make_leaf();
    const Code beta = leaf_erase(B, 0);
    leaf_insert(*left, 0, beta);
    if (!B.full) ++full_count_;
    B.full = true;
    B.level = left->level = 1;
    B.inserted = left->inserted = 0;

    parent.leaves.insert(parent.leaves.begin() + static_cast<std::ptrdiff_t>(c), std::move(left));
    parent.U.insert(c + 1, 1);
    parent.I.insert(c + 1, 1);
    parent.I.update(c + 2, -1);
    parent.pair_start.insert(parent.pair_start.begin() + static_cast<std::ptrdiff_t>(c), 0);
    for (std::size_t d = 0; d + 1 < loc.path.size(); ++d)
        loc.path[d].node->U.update(loc.path[d].child + 1, 1);

    E_.insert(j);
    E_.update(beta + 1, j, 1);
    E_.update(beta + 1, j + 1, -1);
    fix_overfull(j);
}

void SmallString::fix_overfull(std::size_t j) {
    // Safety net: the cursor discipline normally keeps degrees below 4b.
    for (std::size_t level = 1; level <= height_; ++level) {
        const Loc loc = locate_leaf(j);
        if (ancestor(loc, level)->degree() <= 4 * cfg_.b) break;
        split_node(loc, height_ - level, false);
        ++forced_splits_;
    }
}

void SmallString::split_node(const Loc& loc, std::size_t depth, bool pair_aware) {
    Node& v = *loc.path[depth].node;
    const std::size_t deg = v.degree();
    std::size_t k = deg / 2;
    if (pair_aware && v.pair_start[k - 1]) {
        if (deg - (k + 1) >= cfg_.b)
            ++k;
        else if (k - 1 >= cfg_.b)
            --k;
    }

    auto right = make_node(v.bottom);
    auto move_from = [k](auto& from, auto& to) {
        to.insert(to.end(), std::make_move_iterator(from.begin() + static_cast<std::ptrdiff_t>(k)),
                  std::make_move_iterator(from.end()));
        from.erase(from.begin() + static_cast<std::ptrdiff_t>(k), from.end());
    };
    if (v.bottom)
        move_from(v.leaves, right->leaves);
    else
        move_from(v.kids, right->kids);
    recompute(v);
    recompute(*right);

    if (depth == 0) {
        auto top = make_node(false);
        top->kids.push_back(std::move(root_));
        top->kids.push_back(std::move(right));
        recompute(*top);
        root_ = std::move(top);
        ++height_;
        return;
    }
    Node& w = *loc.path[depth - 1].node;
    const std::size_t c = loc.path[depth - 1].child;
    w.kids.insert(w.kids.begin() + static_cast<std::ptrdiff_t>(c + 1), std::move(right));
    const Node& l = *w.kids[c];
    const Node& r = *w.kids[c + 1];
    w.U.assign(c + 1, l.U.total());
    w.I.assign(c + 1, l.I.total());
    w.U.insert(c + 2, r.U.total());
    w.I.insert(c + 2, r.I.total());
    const std::uint8_t was = w.pair_start[c];
    w.pair_start.insert(w.pair_start.begin() + static_cast<std::ptrdiff_t>(c + 1), was);
    if (pair_aware && w.degree() >= 2 * cfg_.b) {
        w.pair_start[c] = 1;
        w.pair_start[c + 1] = 0;
    }
}

Code SmallString::erase(std::size_t i) {
    if (i == 0 || i > n_) throw std::out_of_range("SmallString::erase: position out of range");
    Loc loc = locate_char(i);
    const Code c = leaf_erase(*loc.leaf, loc.offset);
    add_chars(loc, -1);
    E_.update(c + 1, loc.index, -1);
    --n_;
    return c;
}

void SmallString::push_back(Code c) {
    check_code(c);
    const std::size_t j = leaf_count();
    Loc loc = locate_leaf(j);
    Leaf& tail = *loc.leaf;
    if (!tail.full) {
        leaf_insert(tail, tail.chars, c);
        add_chars(loc, 1);
        E_.update(c + 1, j, 1);
        ++n_;
        if (tail.chars > m_) split_leaf(j);
        return;
    }
    // Open a new non-full leaf after a full tail.
    Node& parent = *loc.path.back().node;
    auto leaf = make_leaf();
    leaf_insert(*leaf, 0, c);
    parent.leaves.push_back(std::move(leaf));
    parent.U.push_back(1);
    parent.I.push_back(1);
    parent.pair_start.push_back(0);
    for (std::size_t d = 0; d + 1 < loc.path.size(); ++d) {
        loc.path[d].node->U.update(loc.path[d].child + 1, 1);
        loc.path[d].node->I.update(loc.path[d].child + 1, 1);
    }
    E_.insert(j + 1);
    E_.update(c + 1, j + 1, 1);
    ++n_;
    // Keep the right spine below 2b children, splitting into halves of b.
    for (std::size_t level = 1; level <= height_; ++level) {
        const Loc spine = locate_leaf(j + 1);
        if (ancestor(spine, level)->degree() < 2 * cfg_.b) break;
        split_node(spine, height_ - level, false);
    }
}

// ---- reporting --------------------------------------------------------------

SmallString::Stats SmallString::stats() const {
    Stats st;
    st.leaves = leaf_count();
    st.full_leaves = full_count_;
    st.forced_splits = forced_splits_;
    st.min_full_fill = 1.0;
    std::size_t nonempty_full = 0;
    double fill = 0;
    for (std::size_t j = 1; j <= st.leaves; ++j) {
        const Leaf& l = *locate_leaf(j).leaf;
        if (l.chars == 0) ++st.empty_leaves;
        if (l.full && l.chars > 0) {
            const double f = static_cast<double>(l.chars) / static_cast<double>(m_);
            fill += f;
            st.min_full_fill = std::min(st.min_full_fill, f);
            ++nonempty_full;
        }
    }
    st.mean_full_fill = nonempty_full ? fill / static_cast<double>(nonempty_full) : 0;
    if (!nonempty_full) st.min_full_fill = 0;
    return st;
}

void SmallString::space_node(const Node& node, SpaceReport& r) const {
    r.overhead_bits += sizeof(Node) * 8 + node.U.allocated_bits() + node.I.allocated_bits() +
                       (node.kids.capacity() + node.leaves.capacity()) * sizeof(void*) * 8 +
                       node.pair_start.capacity() * 8;
    if (node.bottom) {
        for (const auto& l : node.leaves) {
            r.payload_bits += l->bits.size();
            r.overhead_bits += l->bits.capacity_bits() - l->bits.size() + sizeof(Leaf) * 8;
        }
    } else {
        for (const auto& k : node.kids) space_node(*k, r);
    }
}

SpaceReport SmallString::space() const {
    SpaceReport r;
    r.overhead_bits = sizeof(SmallString) * 8 - sizeof(Cspsi) * 8;
    space_node(*root_, r);
    r.overhead_bits += E_.space().total_bits();
    return r;
}

void SmallString::validate_node(const Node& node, std::size_t depth, std::vector<std::string>& out,
                                std::vector<const Leaf*>& leaves, std::size_t& chars,
                                std::size_t& count) const {
    const std::string where = "SmallString node at depth " + std::to_string(depth) + ": ";
    const std::size_t deg = node.degree();
    const std::size_t lo = depth == 0 ? 1 : cfg_.b;
    if (deg < lo || deg > 4 * cfg_.b)
        out.push_back(where + "degree " + std::to_string(deg) + " outside [" + std::to_string(lo) +
                      ", " + std::to_string(4 * cfg_.b) + "]");
    if (node.bottom != (depth + 1 == height_)) out.push_back(where + "leaf depth mismatch");
    if (node.U.size() != deg || node.I.size() != deg || node.pair_start.size() != deg)
        out.push_back(where + "aggregate length mismatch");
    for (auto& m : node.U.validate()) out.push_back(where + m);
    for (auto& m : node.I.validate()) out.push_back(where + m);
    chars = count = 0;
    for (std::size_t c = 0; c < deg; ++c) {
        std::size_t cc = 0, cn = 0;
        if (node.bottom) {
            const Leaf& l = *node.leaves[c];
            cc = l.chars;
            cn = 1;
            leaves.push_back(&l);
        } else {
            validate_node(*node.kids[c], depth + 1, out, leaves, cc, cn);
        }
        if (c < node.I.size() && node.I[c + 1] != cc)
            out.push_back(where + "I entry " + std::to_string(c + 1) + " stale");
        if (c < node.U.size() && node.U[c + 1] != cn)
            out.push_back(where + "U entry " + std::to_string(c + 1) + " stale");
        chars += cc;
        count += cn;
    }
}

std::vector<std::string> SmallString::validate() const {
    std::vector<std::string> out;
    std::vector<const Leaf*> leaves;
    std::size_t chars = 0, count = 0;
    validate_node(*root_, 0, out, leaves, chars, count);
    if (!root_->bottom && root_->degree() < 2) out.push_back("SmallString: root has one child");
    if (chars != n_) out.push_back("SmallString: character count disagrees with n");
    if (height_ > height_bound())
        out.push_back("SmallString: height " + std::to_string(height_) + " exceeds bound " +
                      std::to_string(height_bound()));

    std::size_t full = 0;
    for (std::size_t j = 0; j < leaves.size(); ++j) {
        const Leaf& l = *leaves[j];
        const std::string where = "SmallString leaf " + std::to_string(j + 1) + ": ";
        if (l.bits.size() != l.chars * width_) out.push_back(where + "payload length mismatch");
        if (l.bits.size() > 2 * cfg_.superblock_bits) out.push_back(where + "exceeds 2L bits");
        if (l.bits.capacity_bits() - l.bits.size() >= cfg_.block_bits)
            out.push_back(where + "free space outside the last block");
        if (l.chars == 0 && l.bits.capacity_bits() != 0)
            out.push_back(where + "empty leaf still holds storage");
        if (l.level == 0 || l.level > height_) out.push_back(where + "cursor outside the tree");
        if (j > 0 && !l.full && !leaves[j - 1]->full)
            out.push_back(where + "follows another non-full leaf");
        full += l.full;
    }
    if (full != full_count_) out.push_back("SmallString: a full leaf lost its mark");

    if (E_.size() != leaves.size()) {
        out.push_back("SmallString: E has " + std::to_string(E_.size()) + " positions for " +
                      std::to_string(leaves.size()) + " leaves");
    } else {
        for (std::size_t j = 0; j < leaves.size(); ++j)
            for (Code c = 0; c < cfg_.sigma; ++c)
                if (E_.get(c + 1, j + 1) != leaf_rank(*leaves[j], c, leaves[j]->chars)) {
                    out.push_back("SmallString: E count of code " + std::to_string(c) +
                                  " in leaf " + std::to_string(j + 1) + " stale");
                    break;
                }
    }
    for (auto& m : E_.validate()) out.push_back("SmallString E: " + m);
    return out;
}

void SmallStringAccess::corrupt_char_count(SmallString& s) {
    s.root_->I.update(1, 1);
}

void SmallStringAccess::clear_full_flags(SmallString& s) {
    for (std::size_t j = 1; j <= s.leaf_count(); ++j) s.locate_leaf(j).leaf->full = false;
}

void SmallStringAccess::corrupt_counts(SmallString& s) {
    s.E_.update(1, 1, 1);
}

}  // namespace dynseq
