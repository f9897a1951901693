#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dynseq/rebuild.hpp"
#include "dynseq/space.hpp"

namespace dynseq {

struct DynStringConfig {
    std::uint64_t sigma = 2;  ///< 2..2^32; codes are 0..sigma-1
    unsigned q = 16;          ///< branching factor, a power of two in 2..64
    /// Parameters of every node; its alphabet is filled in per node.
    SmallStringConfig node{};
};

/// Dynamic string over a general alphabet as a q-ary wavelet tree.
///
/// A code is split into `levels()` digits of lg q bits, most significant
/// first; the top digit ranges over ceil(sigma / q^(levels-1)) values and
/// the others over q. Each tree node is a small-alphabet string (behind its
/// own rebuild controller) of the digits of the characters routed to it.
/// Children are created on the first character routed to them. With
/// sigma <= q the tree is a single node.
class DynString {
public:
    explicit DynString(DynStringConfig config);
    static DynString build(DynStringConfig config, std::span<const Code> codes);

    ~DynString();
    DynString(DynString&&) noexcept;
    DynString& operator=(DynString&&) noexcept;

    std::uint64_t sigma() const noexcept { return cfg_.sigma; }
    unsigned levels() const noexcept { return levels_; }
    std::size_t size() const noexcept;
    bool empty() const noexcept { return size() == 0; }

    Code access(std::size_t i) const;
    std::size_t rank(Code c, std::size_t i) const;
    std::optional<std::size_t> select(Code c, std::size_t j) const;
    void insert(Code c, std::size_t i);
    Code erase(std::size_t i);
    void push_back(Code c);

    /// Element l is the space of level l, root first.
    std::vector<SpaceReport> level_space() const;
    SpaceReport space() const;
    std::vector<std::string> validate() const;

private:
    struct Node;

    void check_code(Code c) const;
    unsigned digit(Code c, unsigned level) const noexcept;
    unsigned alphabet(unsigned level) const noexcept;
    std::unique_ptr<Node> make_node(unsigned level) const;
    void validate_node(const Node& node, unsigned level, std::vector<std::string>& out) const;
    void space_node(const Node& node, unsigned level, std::vector<SpaceReport>& per) const;

    DynStringConfig cfg_;
    unsigned levels_;
    unsigned digit_bits_;
    std::unique_ptr<Node> root_;
};

/// Dynamic bit vector: a DynString with sigma = 2, hence one node.
class BitVector {
public:
    explicit BitVector(SmallStringConfig node = {});
    static BitVector build(const std::vector<bool>& bits, SmallStringConfig node = {});

    std::size_t size() const noexcept { return s_.size(); }
    bool access(std::size_t i) const { return s_.access(i) != 0; }
    std::size_t rank(bool b, std::size_t i) const { return s_.rank(b, i); }
    std::optional<std::size_t> select(bool b, std::size_t j) const { return s_.select(b, j); }
    void insert(bool b, std::size_t i) { s_.insert(b, i); }
    bool erase(std::size_t i) { return s_.erase(i) != 0; }

    SpaceReport space() const { return s_.space(); }
    std::vector<std::string> validate() const { return s_.validate(); }
    const DynString& string() const noexcept { return s_; }

private:
    explicit BitVector(DynString s) : s_(std::move(s)) {}
    DynString s_;
};

}  // namespace dynseq
