#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dynseq/bitstore.hpp"
#include "dynseq/cspsi.hpp"
#include "dynseq/small_seq.hpp"
#include "dynseq/space.hpp"

namespace dynseq {

using Code = std::uint32_t;

struct SmallStringConfig {
    unsigned sigma = 2;                      ///< 2..64; codes are 0..sigma-1
    std::size_t superblock_bits = 1u << 14;  ///< L; a leaf never exceeds 2L bits
    std::size_t block_bits = 1u << 10;
    unsigned b = 8;                          ///< internal degrees stay in [b, 4b]
};

/// Dynamic string over a small alphabet with access, rank, select, insert
/// and delete. Positions are 1-based.
///
/// Characters are packed into leaf superblocks addressed by a B-tree whose
/// nodes record, per child, the number of leaves (U) and of characters (I).
/// A CSPSI structure E with one position per leaf and one sequence per code
/// holds per-leaf character counts, so rank and select reduce to a prefix
/// sum or search on E plus one leaf scan.
///
/// Insertion follows a worst-case discipline: leaves are either marked full
/// (permanently) or not, no two adjacent leaves are non-full, and each leaf
/// carries a cursor to one of its ancestors that climbs one level per quota
/// of insertions. Leaves split only when their cursor reaches the root, and
/// each insertion splits at most one big internal node. Deletion is lazy; a
/// leaf emptied by deletions is kept with its storage released.
class SmallString {
public:
    explicit SmallString(SmallStringConfig config);
    /// Bulk construction in the starting layout: alternating one-character
    /// leaves and full leaves of leaf_capacity() characters.
    static SmallString build(SmallStringConfig config, std::span<const Code> codes);

    ~SmallString();
    SmallString(SmallString&&) noexcept;
    SmallString& operator=(SmallString&&) noexcept;

    const SmallStringConfig& config() const noexcept { return cfg_; }
    unsigned sigma() const noexcept { return cfg_.sigma; }
    unsigned code_width() const noexcept { return width_; }
    std::size_t size() const noexcept { return n_; }
    bool empty() const noexcept { return n_ == 0; }
    /// Characters a full leaf is laid out with (2L bits).
    std::size_t leaf_capacity() const noexcept { return m_; }
    std::size_t leaf_count() const noexcept;
    /// Internal levels; every query visits this many nodes plus one leaf.
    std::size_t height() const noexcept { return height_; }
    /// Largest height a (b, 4b)-tree over leaf_count() leaves can have.
    std::size_t height_bound() const noexcept;

    Code access(std::size_t i) const;
    std::size_t rank(Code c, std::size_t i) const;
    std::optional<std::size_t> select(Code c, std::size_t j) const;

    void insert(Code c, std::size_t i);
    Code erase(std::size_t i);
    /// Appends in the bulk layout rather than through the insert discipline.
    void push_back(Code c);

    struct Stats {
        std::size_t leaves = 0;
        std::size_t full_leaves = 0;
        std::size_t empty_leaves = 0;
        double mean_full_fill = 0;  // mean chars / leaf_capacity() over nonempty full leaves
        double min_full_fill = 0;
        std::size_t forced_splits = 0;
    };
    Stats stats() const;

    SpaceReport space() const;
    std::vector<std::string> validate() const;

private:
    friend struct SmallStringAccess;
    struct Leaf;
    struct Node;
    struct Step {
        Node* node;
        std::size_t child;  // 0-based
    };
    struct Loc {
        std::vector<Step> path;  // root first
        Leaf* leaf = nullptr;
        std::size_t index = 0;   // 1-based leaf number
        std::size_t offset = 0;  // 0-based character offset inside the leaf
    };

    void check_code(Code c) const;
    Loc locate_char(std::size_t i) const;
    Loc locate_leaf(std::size_t j) const;
    Node* ancestor(const Loc& loc, std::size_t level) const;

    std::size_t leaf_rank(const Leaf& leaf, Code c, std::size_t upto) const;
    std::size_t leaf_select(const Leaf& leaf, Code c, std::size_t j) const;
    void leaf_insert(Leaf& leaf, std::size_t offset, Code c) const;
    Code leaf_erase(Leaf& leaf, std::size_t offset) const;

    void add_chars(const Loc& loc, std::int64_t delta);
    void after_insert(std::size_t j);
    void split_leaf(std::size_t j);
    void split_node(const Loc& loc, std::size_t depth, bool pair_aware);
    void split_if_big(std::size_t j, std::size_t level);
    void fix_overfull(std::size_t j);
    void recompute(Node& node) const;
    std::size_t quota() const noexcept;
    std::unique_ptr<Node> make_node(bool bottom) const;
    std::unique_ptr<Leaf> make_leaf() const;

    void validate_node(const Node& node, std::size_t depth, std::vector<std::string>& out,
                       std::vector<const Leaf*>& leaves, std::size_t& chars,
                       std::size_t& count) const;
    void space_node(const Node& node, SpaceReport& r) const;

    SmallStringConfig cfg_;
    unsigned width_;
    std::size_t m_;
    std::unique_ptr<Node> root_;
    Cspsi E_;
    std::size_t n_ = 0;
    std::size_t height_ = 1;
    std::size_t full_count_ = 0;
    std::size_t forced_splits_ = 0;
};

}  // namespace dynseq
