#include "dynseq/cspsi.hpp"

#include "dynseq/detail/testing.hpp"

#include <algorithm>
#include <stdexcept>

namespace dynseq {

struct Cspsi::Leaf {
    explicit Leaf(std::size_t block_bits) : bits(block_bits) {}
    BitBuffer bits;         // Q_1 run, Q_2 run, ..., Q_d run
    std::size_t count = 0;  // positions per sequence
};

struct Cspsi::Node {
    Node(bool is_bottom, unsigned d, unsigned cap) : bottom(is_bottom), P(64, cap) {
        R.reserve(d);
        for (unsigned j = 0; j < d; ++j) R.emplace_back(64, cap);
    }
    std::size_t degree() const noexcept { return bottom ? leaves.size() : kids.size(); }

    bool bottom;
    std::vector<std::unique_ptr<Node>> kids;
    std::vector<std::unique_ptr<Leaf>> leaves;
    SmallSeq P;               // positions under each child
    std::vector<SmallSeq> R;  // R[j]: sum of Q_{j+1} under each child
};

Cspsi::Cspsi(CspsiConfig config) : cfg_(config) {
    if (cfg_.d == 0 || cfg_.d > 64) throw std::invalid_argument("Cspsi: d must be in 1..64");
    if (cfg_.k == 0 || cfg_.k > 64) throw std::invalid_argument("Cspsi: k must be in 1..64");
    if (cfg_.block_bits == 0 || cfg_.block_bits % 64 != 0)
        throw std::invalid_argument("Cspsi: block size must be a positive multiple of 64");
    if (std::size_t{cfg_.d} * cfg_.k * 2 > cfg_.superblock_bits)
        throw std::invalid_argument("Cspsi: d*k must not exceed half the superblock size");
    if (cfg_.b_min < 2) throw std::invalid_argument("Cspsi: b_min must be at least 2");
    root_ = make_node(true);
    root_->leaves.push_back(std::make_unique<Leaf>(cfg_.block_bits));
    insert_entry(*root_, 0);
}

Cspsi::~Cspsi() = default;
Cspsi::Cspsi(Cspsi&&) noexcept = default;
Cspsi& Cspsi::operator=(Cspsi&&) noexcept = default;

std::size_t Cspsi::min_leaf_positions() const noexcept {
    const std::size_t dk = std::size_t{cfg_.d} * cfg_.k;
    return (cfg_.superblock_bits / 2 + dk - 1) / dk;
}

std::size_t Cspsi::max_leaf_positions() const noexcept {
    return 2 * cfg_.superblock_bits / (std::size_t{cfg_.d} * cfg_.k);
}

std::unique_ptr<Cspsi::Node> Cspsi::make_node(bool bottom) const {
    return std::make_unique<Node>(bottom, cfg_.d, cfg_.b_max() + 1);
}

void Cspsi::check_seq(unsigned j) const {
    if (j == 0 || j > cfg_.d) throw std::out_of_range("Cspsi: sequence index out of range");
}

// ---- leaf payload -----------------------------------------------------------

std::uint64_t Cspsi::leaf_get(const Leaf& leaf, unsigned j, std::size_t p) const {
    return leaf.bits.get(((j - 1) * leaf.count + p) * cfg_.k, cfg_.k);
}

void Cspsi::leaf_set(Leaf& leaf, unsigned j, std::size_t p, std::uint64_t v) const {
    leaf.bits.set(((j - 1) * leaf.count + p) * cfg_.k, cfg_.k, v);
}

std::uint64_t Cspsi::leaf_sum(const Leaf& leaf, unsigned j, std::size_t upto) const {
    const unsigned k = cfg_.k;
    const unsigned chunk = bits::fields_per_word(k);
    std::size_t off = (j - 1) * leaf.count * k;
    std::uint64_t s = 0;
    std::size_t p = 0;
    for (; p + chunk <= upto; p += chunk, off += std::size_t{chunk} * k)
        s += bits::word_sum_fields(leaf.bits.get(off, chunk * k), k, chunk);
    if (p < upto) {
        const unsigned rest = static_cast<unsigned>(upto - p);
        s += bits::word_sum_fields(leaf.bits.get(off, rest * k), k, rest);
    }
    return s;
}

std::size_t Cspsi::leaf_search(const Leaf& leaf, unsigned j, std::uint64_t x) const {
    const unsigned k = cfg_.k;
    const unsigned chunk = bits::fields_per_word(k);
    const std::size_t base = (j - 1) * leaf.count * k;
    std::uint64_t acc = 0;
    std::size_t p = 0;
    while (p < leaf.count) {
        const unsigned take = static_cast<unsigned>(std::min<std::size_t>(chunk, leaf.count - p));
        const std::uint64_t word = leaf.bits.get(base + p * k, take * k);
        const std::uint64_t s = bits::word_sum_fields(word, k, take);
        if (acc + s >= x) {
            for (unsigned f = 0;; ++f) {
                acc += (word >> (f * k)) & bits::low_mask(k);
                if (acc >= x) return p + f + 1;
            }
        }
        acc += s;
        p += take;
    }
    throw std::logic_error("Cspsi: leaf search ran past the superblock");
}

void Cspsi::leaf_insert_zero(Leaf& leaf, std::size_t p) const {
    const std::size_t k = cfg_.k, run = leaf.count * k;
    BitBuffer nb(cfg_.block_bits);
    nb.reserve(leaf.bits.size() + cfg_.d * k);
    for (unsigned j = 0; j < cfg_.d; ++j) {
        nb.append(leaf.bits, j * run, p * k);
        nb.push_back(cfg_.k, 0);
        nb.append(leaf.bits, j * run + p * k, run - p * k);
    }
    leaf.bits = std::move(nb);
    ++leaf.count;
}

void Cspsi::leaf_erase(Leaf& leaf, std::size_t p) const {
    const std::size_t k = cfg_.k, run = leaf.count * k;
    BitBuffer nb(cfg_.block_bits);
    nb.reserve(leaf.bits.size() - cfg_.d * k);
    for (unsigned j = 0; j < cfg_.d; ++j) {
        nb.append(leaf.bits, j * run, p * k);
        nb.append(leaf.bits, j * run + (p + 1) * k, run - (p + 1) * k);
    }
    leaf.bits = std::move(nb);
    --leaf.count;
}

std::unique_ptr<Cspsi::Leaf> Cspsi::leaf_split(Leaf& leaf, std::size_t keep) const {
    const std::size_t k = cfg_.k, run = leaf.count * k;
    auto right = std::make_unique<Leaf>(cfg_.block_bits);
    BitBuffer left(cfg_.block_bits);
    left.reserve(keep * cfg_.d * k);
    right->bits.reserve((leaf.count - keep) * cfg_.d * k);
    for (unsigned j = 0; j < cfg_.d; ++j) {
        left.append(leaf.bits, j * run, keep * k);
        right->bits.append(leaf.bits, j * run + keep * k, run - keep * k);
    }
    right->count = leaf.count - keep;
    leaf.bits = std::move(left);
    leaf.count = keep;
    return right;
}

void Cspsi::leaf_concat(Leaf& left, const Leaf& right) const {
    const std::size_t k = cfg_.k;
    BitBuffer nb(cfg_.block_bits);
    nb.reserve(left.bits.size() + right.bits.size());
    for (unsigned j = 0; j < cfg_.d; ++j) {
        nb.append(left.bits, j * left.count * k, left.count * k);
        nb.append(right.bits, j * right.count * k, right.count * k);
    }
    left.bits = std::move(nb);
    left.count += right.count;
}

// ---- node aggregates --------------------------------------------------------

void Cspsi::insert_entry(Node& node, std::size_t c) const {
    if (node.bottom) {
        const Leaf& leaf = *node.leaves[c];
        node.P.insert(c + 1, leaf.count);
        for (unsigned j = 0; j < cfg_.d; ++j)
            node.R[j].insert(c + 1, leaf_sum(leaf, j + 1, leaf.count));
    } else {
        const Node& kid = *node.kids[c];
        node.P.insert(c + 1, kid.P.total());
        for (unsigned j = 0; j < cfg_.d; ++j) node.R[j].insert(c + 1, kid.R[j].total());
    }
}

void Cspsi::refresh_entry(Node& node, std::size_t c) const {
    if (node.bottom) {
        const Leaf& leaf = *node.leaves[c];
        node.P.assign(c + 1, leaf.count);
        for (unsigned j = 0; j < cfg_.d; ++j)
            node.R[j].assign(c + 1, leaf_sum(leaf, j + 1, leaf.count));
    } else {
        const Node& kid = *node.kids[c];
        node.P.assign(c + 1, kid.P.total());
        for (unsigned j = 0; j < cfg_.d; ++j) node.R[j].assign(c + 1, kid.R[j].total());
    }
}

namespace {
template <class T>
void move_tail(std::vector<T>& from, std::vector<T>& to, std::size_t keep) {
    to.insert(to.end(), std::make_move_iterator(from.begin() + static_cast<std::ptrdiff_t>(keep)),
              std::make_move_iterator(from.end()));
    from.erase(from.begin() + static_cast<std::ptrdiff_t>(keep), from.end());
}
}  // namespace

void Cspsi::split_child(Node& parent, std::size_t c) {
    if (parent.bottom) {
        Leaf& leaf = *parent.leaves[c];
        auto right = leaf_split(leaf, (leaf.count + 1) / 2);
        parent.leaves.insert(parent.leaves.begin() + static_cast<std::ptrdiff_t>(c + 1),
                             std::move(right));
    } else {
        Node& left = *parent.kids[c];
        auto right = make_node(left.bottom);
        const std::size_t keep = (left.degree() + 1) / 2;
        if (left.bottom)
            move_tail(left.leaves, right->leaves, keep);
        else
            move_tail(left.kids, right->kids, keep);
        // Rebuild both halves' aggregates from their children.
        Node fresh_left(left.bottom, cfg_.d, cfg_.b_max() + 1);
        fresh_left.kids = std::move(left.kids);
        fresh_left.leaves = std::move(left.leaves);
        for (std::size_t i = 0; i < fresh_left.degree(); ++i) insert_entry(fresh_left, i);
        left = std::move(fresh_left);
        for (std::size_t i = 0; i < right->degree(); ++i) insert_entry(*right, i);
        parent.kids.insert(parent.kids.begin() + static_cast<std::ptrdiff_t>(c + 1),
                           std::move(right));
    }
    refresh_entry(parent, c);
    insert_entry(parent, c + 1);
}

// ---- navigation -------------------------------------------------------------

Cspsi::Leaf& Cspsi::leaf_at(std::size_t i, std::vector<Step>& path, std::size_t& offset) const {
    path.clear();
    Node* node = root_.get();
    std::size_t s = i;
    for (;;) {
        std::size_t c;
        if (s > node->P.total())
            c = node->degree() - 1;
        else
            c = *node->P.search(s) - 1;
        s -= node->P.sum(c);
        path.push_back({node, c});
        if (node->bottom) {
            offset = s - 1;
            return *node->leaves[c];
        }
        node = node->kids[c].get();
    }
}

std::uint64_t Cspsi::sum(unsigned j, std::size_t i) const {
    check_seq(j);
    if (i > n_) throw std::out_of_range("Cspsi::sum: position out of range");
    if (i == 0) return 0;
    const Node* node = root_.get();
    std::uint64_t r = 0;
    std::size_t s = i;
    for (;;) {
        const std::size_t c = *node->P.search(s) - 1;
        r += node->R[j - 1].sum(c);
        s -= node->P.sum(c);
        if (node->bottom) return r + leaf_sum(*node->leaves[c], j, s);
        node = node->kids[c].get();
    }
}

std::uint64_t Cspsi::total(unsigned j) const {
    check_seq(j);
    return root_->R[j - 1].total();
}

std::optional<std::size_t> Cspsi::search(unsigned j, std::uint64_t x) const {
    check_seq(j);
    if (x == 0) throw std::invalid_argument("Cspsi::search: target must be positive");
    if (x > total(j)) return std::nullopt;
    const Node* node = root_.get();
    std::size_t pos = 0;
    for (;;) {
        const SmallSeq& rj = node->R[j - 1];
        const std::size_t c = *rj.search(x) - 1;
        pos += node->P.sum(c);
        x -= rj.sum(c);
        if (node->bottom) return pos + leaf_search(*node->leaves[c], j, x);
        node = node->kids[c].get();
    }
}

std::uint64_t Cspsi::get(unsigned j, std::size_t i) const {
    check_seq(j);
    if (i == 0 || i > n_) throw std::out_of_range("Cspsi::get: position out of range");
    std::vector<Step> path;
    std::size_t off = 0;
    const Leaf& leaf = leaf_at(i, path, off);
    return leaf_get(leaf, j, off);
}

void Cspsi::update(unsigned j, std::size_t i, std::int64_t delta) {
    check_seq(j);
    if (i == 0 || i > n_) throw std::out_of_range("Cspsi::update: position out of range");
    std::vector<Step> path;
    std::size_t off = 0;
    Leaf& leaf = leaf_at(i, path, off);
    const std::uint64_t v = leaf_get(leaf, j, off);
    const std::uint64_t mag = delta < 0 ? static_cast<std::uint64_t>(-(delta + 1)) + 1
                                        : static_cast<std::uint64_t>(delta);
    if (delta < 0 && mag > v) throw std::out_of_range("Cspsi::update: value would become negative");
    const std::uint64_t nv = delta < 0 ? v - mag : v + mag;
    if ((delta > 0 && nv < v) || (nv & ~bits::low_mask(cfg_.k)) != 0)
        throw std::out_of_range("Cspsi::update: value does not fit in k bits");
    if (delta == 0) return;
    for (const Step& st : path) st.node->R[j - 1].update(st.child + 1, delta);
    leaf_set(leaf, j, off, nv);
}

void Cspsi::insert(std::size_t i) {
    if (i == 0 || i > n_ + 1) throw std::out_of_range("Cspsi::insert: position out of range");
    std::vector<Step> path;
    std::size_t off = 0;
    Leaf& leaf = leaf_at(i, path, off);
    for (const Step& st : path) st.node->P.update(st.child + 1, 1);
    leaf_insert_zero(leaf, off);
    ++n_;
    if (leaf.count <= max_leaf_positions()) return;

    split_child(*path.back().node, path.back().child);
    for (std::size_t lvl = path.size(); lvl-- > 0;) {
        Node& node = *path[lvl].node;
        if (node.degree() <= cfg_.b_max()) break;
        if (lvl == 0) {
            auto top = make_node(false);
            top->kids.push_back(std::move(root_));
            insert_entry(*top, 0);
            root_ = std::move(top);
            ++height_;
            split_child(*root_, 0);
        } else {
            split_child(*path[lvl - 1].node, path[lvl - 1].child);
        }
    }
}

void Cspsi::erase(std::size_t i) {
    if (i == 0 || i > n_) throw std::out_of_range("Cspsi::erase: position out of range");
    std::vector<Step> path;
    std::size_t off = 0;
    Leaf& leaf = leaf_at(i, path, off);
    for (unsigned j = 1; j <= cfg_.d; ++j)
        if (leaf_get(leaf, j, off) != 0)
            throw std::invalid_argument("Cspsi::erase: position " + std::to_string(i) +
                                        " is nonzero in sequence " + std::to_string(j));
    for (const Step& st : path) st.node->P.update(st.child + 1, -1);
    leaf_erase(leaf, off);
    --n_;
    fix_underflow(path);
}

bool Cspsi::rebalance_child(Node& parent, std::size_t c) {
    if (parent.degree() < 2) return false;
    const std::size_t s = c > 0 ? c - 1 : c + 1;
    const std::size_t lo = std::min(c, s), hi = std::max(c, s);
    if (parent.bottom) {
        Leaf& child = *parent.leaves[c];
        Leaf& sib = *parent.leaves[s];
        if (sib.count > min_leaf_positions()) {
            // Move one position across, keeping the left-to-right order.
            const std::size_t from = s < c ? sib.count - 1 : 0;
            const std::size_t to = s < c ? 0 : child.count;
            std::vector<std::uint64_t> vals(cfg_.d);
            for (unsigned j = 1; j <= cfg_.d; ++j) vals[j - 1] = leaf_get(sib, j, from);
            leaf_erase(sib, from);
            leaf_insert_zero(child, to);
            for (unsigned j = 1; j <= cfg_.d; ++j) leaf_set(child, j, to, vals[j - 1]);
            refresh_entry(parent, c);
            refresh_entry(parent, s);
            return false;
        }
        leaf_concat(*parent.leaves[lo], *parent.leaves[hi]);
        parent.leaves.erase(parent.leaves.begin() + static_cast<std::ptrdiff_t>(hi));
    } else {
        Node& child = *parent.kids[c];
        Node& sib = *parent.kids[s];
        auto rebuild = [&](Node& nd) {
            Node fresh(nd.bottom, cfg_.d, cfg_.b_max() + 1);
            fresh.kids = std::move(nd.kids);
            fresh.leaves = std::move(nd.leaves);
            for (std::size_t x = 0; x < fresh.degree(); ++x) insert_entry(fresh, x);
            nd = std::move(fresh);
        };
        if (sib.degree() > cfg_.b_min) {
            if (child.bottom) {
                if (s < c) {
                    child.leaves.insert(child.leaves.begin(), std::move(sib.leaves.back()));
                    sib.leaves.pop_back();
                } else {
                    child.leaves.push_back(std::move(sib.leaves.front()));
                    sib.leaves.erase(sib.leaves.begin());
                }
            } else {
                if (s < c) {
                    child.kids.insert(child.kids.begin(), std::move(sib.kids.back()));
                    sib.kids.pop_back();
                } else {
                    child.kids.push_back(std::move(sib.kids.front()));
                    sib.kids.erase(sib.kids.begin());
                }
            }
            rebuild(child);
            rebuild(sib);
            refresh_entry(parent, c);
            refresh_entry(parent, s);
            return false;
        }
        Node& left = *parent.kids[lo];
        Node& right = *parent.kids[hi];
        if (left.bottom)
            move_tail(right.leaves, left.leaves, 0);
        else
            move_tail(right.kids, left.kids, 0);
        rebuild(left);
        parent.kids.erase(parent.kids.begin() + static_cast<std::ptrdiff_t>(hi));
    }
    parent.P.erase(hi + 1);
    for (auto& r : parent.R) r.erase(hi + 1);
    refresh_entry(parent, lo);
    return true;
}

void Cspsi::fix_underflow(std::vector<Step>& path) {
    for (std::size_t lvl = path.size(); lvl-- > 0;) {
        Node& parent = *path[lvl].node;
        const std::size_t c = path[lvl].child;
        const bool under = parent.bottom ? parent.leaves[c]->count < min_leaf_positions()
                                         : parent.kids[c]->degree() < cfg_.b_min;
        if (!under || !rebalance_child(parent, c)) break;
    }
    while (!root_->bottom && root_->degree() == 1) {
        auto only = std::move(root_->kids.front());
        root_ = std::move(only);
        --height_;
    }
}

// ---- reporting --------------------------------------------------------------

std::size_t Cspsi::count_leaves(const Node& node) const {
    if (node.bottom) return node.leaves.size();
    std::size_t t = 0;
    for (const auto& k : node.kids) t += count_leaves(*k);
    return t;
}

void Cspsi::space_node(const Node& node, SpaceReport& r) const {
    std::uint64_t bits = sizeof(Node) * 8 + node.P.allocated_bits() +
                         node.R.capacity() * sizeof(SmallSeq) * 8 +
                         (node.kids.capacity() + node.leaves.capacity()) * sizeof(void*) * 8;
    for (const auto& q : node.R) bits += q.allocated_bits();
    r.overhead_bits += bits;
    if (node.bottom) {
        for (const auto& leaf : node.leaves) {
            const std::uint64_t payload = leaf->bits.size();
            r.payload_bits += payload;
            r.overhead_bits += leaf->bits.capacity_bits() - payload + sizeof(Leaf) * 8;
        }
    } else {
        for (const auto& k : node.kids) space_node(*k, r);
    }
}

SpaceReport Cspsi::space() const {
    SpaceReport r;
    r.overhead_bits = sizeof(Cspsi) * 8;
    space_node(*root_, r);
    return r;
}

void Cspsi::validate_node(const Node& node, bool is_root, std::size_t leaves, std::size_t depth,
                          std::vector<std::string>& out, std::size_t& positions,
                          std::vector<std::uint64_t>& sums) const {
    const std::string where = "Cspsi node at depth " + std::to_string(depth) + ": ";
    const std::size_t deg = node.degree();
    if (is_root ? (deg < 1 || deg > cfg_.b_max()) : (deg < cfg_.b_min || deg > cfg_.b_max()))
        out.push_back(where + "degree " + std::to_string(deg) + " outside window");
    if (node.bottom != (depth + 1 == height_)) out.push_back(where + "leaf depth mismatch");
    if ((node.bottom ? node.kids.size() : node.leaves.size()) != 0)
        out.push_back(where + "mixed child kinds");
    if (node.P.size() != deg || node.R.size() != cfg_.d)
        out.push_back(where + "aggregate sequence length mismatch");
    for (auto& m : node.P.validate()) out.push_back(where + m);
    for (const auto& r : node.R) {
        if (r.size() != deg) out.push_back(where + "R length mismatch");
        for (auto& m : r.validate()) out.push_back(where + m);
    }
    positions = 0;
    sums.assign(cfg_.d, 0);
    for (std::size_t c = 0; c < deg && c < node.P.size(); ++c) {
        std::size_t cp = 0;
        std::vector<std::uint64_t> cs(cfg_.d, 0);
        if (node.bottom) {
            const Leaf& leaf = *node.leaves[c];
            cp = leaf.count;
            if (leaf.bits.size() != leaf.count * cfg_.d * cfg_.k)
                out.push_back(where + "leaf payload length does not match interleaved layout");
            if (leaves > 1 && (leaf.count < min_leaf_positions() || leaf.count > max_leaf_positions()))
                out.push_back(where + "leaf holds " + std::to_string(leaf.bits.size()) +
                              " bits, outside [L/2, 2L]");
            if (leaves == 1 && leaf.count > max_leaf_positions())
                out.push_back(where + "single leaf exceeds 2L bits");
            if (leaf.bits.capacity_bits() - leaf.bits.size() >= cfg_.block_bits &&
                leaf.bits.capacity_bits() != 0)
                out.push_back(where + "free space outside the last block");
            for (unsigned j = 1; j <= cfg_.d; ++j) cs[j - 1] = leaf_sum(leaf, j, leaf.count);
        } else {
            validate_node(*node.kids[c], false, leaves, depth + 1, out, cp, cs);
        }
        if (node.P[c + 1] != cp) out.push_back(where + "P entry " + std::to_string(c + 1) + " stale");
        for (unsigned j = 0; j < cfg_.d; ++j)
            if (node.R[j].size() > c && node.R[j][c + 1] != cs[j])
                out.push_back(where + "R_" + std::to_string(j + 1) + " entry " +
                              std::to_string(c + 1) + " stale");
        positions += cp;
        for (unsigned j = 0; j < cfg_.d; ++j) sums[j] += cs[j];
    }
}

std::vector<std::string> Cspsi::validate() const {
    std::vector<std::string> out;
    std::size_t positions = 0;
    std::vector<std::uint64_t> sums;
    validate_node(*root_, true, count_leaves(*root_), 0, out, positions, sums);
    if (positions != n_) out.push_back("Cspsi: position count disagrees with n");
    return out;
}

void CspsiAccess::corrupt_root_sum(Cspsi& c) {
    auto& r = c.root_->R[0];
    r.assign(1, r[1] + 1);
}

}  // namespace dynseq
