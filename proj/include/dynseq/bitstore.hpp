#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace dynseq {

/// Growable bit sequence backed by 64-bit words.
///
/// Bit `i` of the buffer lives in word `i / 64` at bit position `i % 64`, so
/// a field written at offset `o` with width `w` occupies the low-order end
/// first: field values read back little-endian, and the first field of a
/// word is its lowest-order field. Every packed structure in the library
/// shares this layout.
///
/// Storage is allocated in whole blocks of `block_bits` bits. Only the last
/// block has free space, and bits past `size()` are always zero.
class BitBuffer {
public:
    explicit BitBuffer(std::size_t block_bits = 64);

    std::size_t size() const noexcept { return len_; }
    bool empty() const noexcept { return len_ == 0; }
    std::size_t block_bits() const noexcept { return block_bits_; }
    std::size_t capacity_bits() const noexcept { return words_.capacity() * 64; }
    std::span<const std::uint64_t> words() const noexcept { return words_; }

    /// Range-checked field read, width in 1..64.
    std::uint64_t read(std::size_t offset, unsigned width) const;
    /// Range-checked field write; `value` must fit in `width` bits.
    void write(std::size_t offset, unsigned width, std::uint64_t value);

    /// Makes room for `width` bits at `offset`, moving the tail right, and
    /// stores `value` there. `offset == size()` appends.
    void insert(std::size_t offset, unsigned width, std::uint64_t value);
    /// Removes `width` bits at `offset`, moving the tail left.
    void erase(std::size_t offset, unsigned width);

    void push_back(unsigned width, std::uint64_t value) { insert(len_, width, value); }
    /// Appends `count` bits of `src` starting at `offset`.
    void append(const BitBuffer& src, std::size_t offset, std::size_t count);
    /// Grows with zero bits or truncates.
    void resize(std::size_t bits);
    /// Allocates whole blocks for at least `bits` bits without changing size().
    void reserve(std::size_t bits) { reserve_bits(bits); }
    /// Drops content and returns every block to the allocator.
    void release();

    // Unchecked accessors for inner loops; callers guarantee the range.
    std::uint64_t get(std::size_t offset, unsigned width) const noexcept {
        const std::size_t idx = offset >> 6;
        const unsigned shift = offset & 63;
        std::uint64_t v = words_[idx] >> shift;
        if (shift + width > 64) v |= words_[idx + 1] << (64 - shift);
        return width == 64 ? v : v & ((std::uint64_t{1} << width) - 1);
    }
    void set(std::size_t offset, unsigned width, std::uint64_t value) noexcept;

    friend bool operator==(const BitBuffer& a, const BitBuffer& b) noexcept;

private:
    void reserve_bits(std::size_t bits);
    void shrink_to_fit_blocks();
    void move_bits(std::size_t dst, std::size_t src, std::size_t count) noexcept;

    std::vector<std::uint64_t> words_;
    std::size_t len_ = 0;
    std::size_t block_bits_;
};

namespace bits {

constexpr std::uint64_t low_mask(unsigned width) noexcept {
    return width >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << width) - 1;
}

/// Number of whole `width`-bit fields in a word.
constexpr unsigned fields_per_word(unsigned width) noexcept { return 64 / width; }

/// Value with 1 in the lowest bit of each of the first `fields` fields.
constexpr std::uint64_t field_ones(unsigned width, unsigned fields) noexcept {
    std::uint64_t r = 0;
    for (unsigned f = 0; f < fields; ++f) r |= std::uint64_t{1} << (f * width);
    return r;
}

namespace detail {
struct FieldMasks {
    std::uint64_t ones;  // lowest bit of every field
    std::uint64_t high;  // highest bit of every field
    std::uint64_t low;   // all but the highest bit of every field
};

constexpr FieldMasks make_masks(unsigned width) noexcept {
    const unsigned f = fields_per_word(width);
    const std::uint64_t ones = field_ones(width, f);
    const std::uint64_t high = ones << (width - 1);
    const std::uint64_t all = f * width >= 64 ? ~std::uint64_t{0} : low_mask(f * width);
    return {ones, high, all & ~high};
}

inline constexpr FieldMasks kMasks[9] = {
    {0, 0, 0},         make_masks(1), make_masks(2), make_masks(3), make_masks(4),
    make_masks(5),     make_masks(6), make_masks(7), make_masks(8),
};

/// Per-field flag (in the field's highest bit) set iff the field equals `code`.
inline std::uint64_t equal_fields(std::uint64_t word, unsigned width, std::uint64_t code) noexcept {
    const FieldMasks& m = kMasks[width];
    const std::uint64_t x = word ^ (code * m.ones);
    const std::uint64_t nonzero = (((x & m.low) + m.low) | x) & m.high;
    return ~nonzero & m.high;
}
}  // namespace detail

/// Count of the first `upto` fields of `word` equal to `code`, for
/// code_width in 1..8. Replaces a per-chunk lookup table.
inline unsigned word_count_code(std::uint64_t word, unsigned code_width, std::uint64_t code,
                                unsigned upto) noexcept {
    const std::uint64_t hits = detail::equal_fields(word, code_width, code);
    return static_cast<unsigned>(std::popcount(hits & low_mask(upto * code_width)));
}

/// Position (0-based) of the set bit of rank `j` (0-based) in `x`; x must have
/// more than `j` set bits.
inline unsigned select_in_word(std::uint64_t x, unsigned j) noexcept {
    for (; j; --j) x &= x - 1;
    return static_cast<unsigned>(std::countr_zero(x));
}

/// 1-based index of the j-th field (j >= 1) equal to `code`, if any.
inline std::optional<unsigned> word_select_code(std::uint64_t word, unsigned code_width,
                                                std::uint64_t code, unsigned j) noexcept {
    const std::uint64_t hits = detail::equal_fields(word, code_width, code);
    if (j == 0 || static_cast<unsigned>(std::popcount(hits)) < j) return std::nullopt;
    return select_in_word(hits, j - 1) / code_width + 1;
}

/// Sum of the first `upto` fields of `word`, any width in 1..64.
inline std::uint64_t word_sum_fields(std::uint64_t word, unsigned width, unsigned upto) noexcept {
    if (upto == 0) return 0;
    word &= low_mask(upto * width);
    if (width == 1) return static_cast<unsigned>(std::popcount(word));
    if (width <= 8) {
        const std::uint64_t ones = detail::kMasks[width].ones;
        std::uint64_t s = 0;
        for (unsigned b = 0; b < width; ++b)
            s += static_cast<std::uint64_t>(std::popcount(word & (ones << b))) << b;
        return s;
    }
    std::uint64_t s = 0;
    const std::uint64_t m = low_mask(width);
    for (unsigned f = 0; f < upto; ++f) s += (word >> (f * width)) & m;
    return s;
}

}  // namespace bits
}  // namespace dynseq
