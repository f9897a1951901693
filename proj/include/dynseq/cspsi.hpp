#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dynseq/bitstore.hpp"
#include "dynseq/small_seq.hpp"
#include "dynseq/space.hpp"

namespace dynseq {

struct CspsiConfig {
    unsigned d = 1;                           ///< number of sequences, 1..64
    unsigned k = 8;                           ///< bits per integer, 1..64
    std::size_t superblock_bits = 1u << 14;   ///< L; leaves hold L/2..2L bits
    std::size_t block_bits = 1u << 10;        ///< allocation unit of a superblock
    unsigned b_min = 8;                       ///< internal degree window [b_min, 2*b_min]

    unsigned b_max() const noexcept { return 2 * b_min; }
};

/// A collection of `d` integer sequences of equal length `n` supporting prefix
/// sums and searches on any one sequence, point updates, and insertion or
/// deletion of an all-zero position across every sequence at once.
///
/// The sequences are cut into superblocks stored in the leaves of a B-tree.
/// A leaf holding positions [s, e) stores Q_1[s..e) Q_2[s..e) ... Q_d[s..e)
/// back to back in one bit buffer. Internal nodes keep, per child, the number
/// of positions (P) and the per-sequence sums (R_1..R_d).
///
/// Positions and sequence numbers are 1-based. Rebalancing is amortized:
/// leaves split past 2L bits and borrow or merge below L/2 bits.
class Cspsi {
public:
    explicit Cspsi(CspsiConfig config);
    ~Cspsi();
    Cspsi(Cspsi&&) noexcept;
    Cspsi& operator=(Cspsi&&) noexcept;

    const CspsiConfig& config() const noexcept { return cfg_; }
    std::size_t size() const noexcept { return n_; }
    std::size_t height() const noexcept { return height_; }

    /// Sum of Q_j[1..i].
    std::uint64_t sum(unsigned j, std::size_t i) const;
    /// Sum of the whole of Q_j.
    std::uint64_t total(unsigned j) const;
    /// Smallest i with sum(j, i) >= x (x >= 1); nullopt when x exceeds total(j).
    std::optional<std::size_t> search(unsigned j, std::uint64_t x) const;
    std::uint64_t get(unsigned j, std::size_t i) const;

    void update(unsigned j, std::size_t i, std::int64_t delta);
    /// Inserts a 0 before position i in every sequence, i in 1..n+1.
    void insert(std::size_t i);
    /// Removes position i from every sequence; every Q_j[i] must be 0.
    void erase(std::size_t i);

    SpaceReport space() const;
    std::vector<std::string> validate() const;

private:
    friend struct CspsiAccess;
    struct Leaf;
    struct Node;
    struct Step {
        Node* node;
        std::size_t child;  // 0-based
    };

    Leaf& leaf_at(std::size_t i, std::vector<Step>& path, std::size_t& offset) const;
    void check_seq(unsigned j) const;

    std::uint64_t leaf_sum(const Leaf& leaf, unsigned j, std::size_t upto) const;
    std::size_t leaf_search(const Leaf& leaf, unsigned j, std::uint64_t x) const;
    std::uint64_t leaf_get(const Leaf& leaf, unsigned j, std::size_t p) const;
    void leaf_set(Leaf& leaf, unsigned j, std::size_t p, std::uint64_t v) const;
    void leaf_insert_zero(Leaf& leaf, std::size_t p) const;
    void leaf_erase(Leaf& leaf, std::size_t p) const;
    std::unique_ptr<Leaf> leaf_split(Leaf& leaf, std::size_t keep) const;
    void leaf_concat(Leaf& left, const Leaf& right) const;

    std::unique_ptr<Node> make_node(bool bottom) const;
    void refresh_entry(Node& node, std::size_t c) const;
    void insert_entry(Node& node, std::size_t c) const;
    void split_child(Node& parent, std::size_t c);
    void fix_underflow(std::vector<Step>& path);
    bool rebalance_child(Node& parent, std::size_t c);

    std::size_t min_leaf_positions() const noexcept;
    std::size_t max_leaf_positions() const noexcept;

    void validate_node(const Node& node, bool is_root, std::size_t leaves, std::size_t depth,
                       std::vector<std::string>& out, std::size_t& positions,
                       std::vector<std::uint64_t>& sums) const;
    void space_node(const Node& node, SpaceReport& r) const;
    std::size_t count_leaves(const Node& node) const;

    CspsiConfig cfg_;
    std::unique_ptr<Node> root_;
    std::size_t n_ = 0;
    std::size_t height_ = 1;  // internal levels; the root is always internal
};

}  // namespace dynseq
