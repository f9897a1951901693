#include "dynseq/bitstore.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace dynseq {

namespace {
std::size_t round_up(std::size_t v, std::size_t m) { return (v + m - 1) / m * m; }
}  // namespace

BitBuffer::BitBuffer(std::size_t block_bits) : block_bits_(block_bits) {
    if (block_bits == 0 || block_bits % 64 != 0)
        throw std::invalid_argument("BitBuffer: block size must be a positive multiple of 64 bits");
}

std::uint64_t BitBuffer::read(std::size_t offset, unsigned width) const {
    if (width == 0 || width > 64 || offset > len_ || width > len_ - offset)
        throw std::out_of_range("BitBuffer::read: range [" + std::to_string(offset) + ", +" +
                                std::to_string(width) + ") outside " + std::to_string(len_) +
                                " bits");
    return get(offset, width);
}

void BitBuffer::write(std::size_t offset, unsigned width, std::uint64_t value) {
    if (width == 0 || width > 64 || offset > len_ || width > len_ - offset)
        throw std::out_of_range("BitBuffer::write: range outside buffer");
    if ((value & ~bits::low_mask(width)) != 0)
        throw std::out_of_range("BitBuffer::write: value wider than field");
    set(offset, width, value);
}

void BitBuffer::set(std::size_t offset, unsigned width, std::uint64_t value) noexcept {
    const std::size_t idx = offset >> 6;
    const unsigned shift = offset & 63;
    const std::uint64_t mask = bits::low_mask(width);
    words_[idx] = (words_[idx] & ~(mask << shift)) | (value << shift);
    if (shift + width > 64) {
        const unsigned spill = 64 - shift;
        words_[idx + 1] = (words_[idx + 1] & ~(mask >> spill)) | (value >> spill);
    }
}

void BitBuffer::insert(std::size_t offset, unsigned width, std::uint64_t value) {
    if (width == 0 || width > 64 || offset > len_)
        throw std::out_of_range("BitBuffer::insert: offset past end");
    if ((value & ~bits::low_mask(width)) != 0)
        throw std::out_of_range("BitBuffer::insert: value wider than field");
    const std::size_t tail = len_ - offset;
    reserve_bits(len_ + width);
    len_ += width;
    move_bits(offset + width, offset, tail);
    set(offset, width, value);
}

void BitBuffer::erase(std::size_t offset, unsigned width) {
    if (width == 0 || width > 64 || offset > len_ || width > len_ - offset)
        throw std::out_of_range("BitBuffer::erase: range outside buffer");
    move_bits(offset, offset + width, len_ - offset - width);
    resize(len_ - width);
}

void BitBuffer::append(const BitBuffer& src, std::size_t offset, std::size_t count) {
    if (offset > src.len_ || count > src.len_ - offset)
        throw std::out_of_range("BitBuffer::append: source range outside buffer");
    std::size_t pos = len_;
    reserve_bits(len_ + count);
    len_ += count;
    while (count > 0) {
        const unsigned c = static_cast<unsigned>(std::min<std::size_t>(64, count));
        set(pos, c, src.get(offset, c));
        pos += c;
        offset += c;
        count -= c;
    }
}

void BitBuffer::resize(std::size_t bits) {
    if (bits > len_) {
        reserve_bits(bits);
        len_ = bits;
        return;
    }
    // Clear the dropped range so the zero-tail invariant holds.
    const std::size_t first_word = (bits + 63) / 64;
    if (bits % 64 != 0) words_[bits / 64] &= bits::low_mask(bits % 64);
    std::fill(words_.begin() + static_cast<std::ptrdiff_t>(first_word), words_.end(), 0);
    len_ = bits;
    shrink_to_fit_blocks();
}

void BitBuffer::release() {
    std::vector<std::uint64_t>().swap(words_);
    len_ = 0;
}

void BitBuffer::reserve_bits(std::size_t bits) {
    const std::size_t want = round_up(bits, block_bits_) / 64;
    if (want <= words_.size()) return;
    std::vector<std::uint64_t> grown(want, 0);
    std::copy(words_.begin(), words_.end(), grown.begin());
    words_.swap(grown);
}

void BitBuffer::shrink_to_fit_blocks() {
    const std::size_t want = round_up(len_, block_bits_) / 64;
    if (want >= words_.size()) return;
    words_.resize(want);
    words_.shrink_to_fit();
}

void BitBuffer::move_bits(std::size_t dst, std::size_t src, std::size_t count) noexcept {
    if (count == 0 || dst == src) return;
    if (dst > src) {
        std::size_t rem = count;
        while (rem > 0) {
            const unsigned c = static_cast<unsigned>(std::min<std::size_t>(64, rem));
            rem -= c;
            set(dst + rem, c, get(src + rem, c));
        }
    } else {
        std::size_t done = 0;
        while (done < count) {
            const unsigned c = static_cast<unsigned>(std::min<std::size_t>(64, count - done));
            set(dst + done, c, get(src + done, c));
            done += c;
        }
    }
}

bool operator==(const BitBuffer& a, const BitBuffer& b) noexcept {
    if (a.len_ != b.len_) return false;
    const std::size_t n = (a.len_ + 63) / 64;
    return std::equal(a.words_.begin(), a.words_.begin() + static_cast<std::ptrdiff_t>(n),
                      b.words_.begin());
}

}  // namespace dynseq
