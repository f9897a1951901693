#pragma once

#include <cstdint>

namespace dynseq {

/// Measured memory split: bits that encode the logical content versus
/// everything else the structure has allocated.
struct SpaceReport {
    std::uint64_t payload_bits = 0;
    std::uint64_t overhead_bits = 0;

    std::uint64_t total_bits() const noexcept { return payload_bits + overhead_bits; }
    double ratio() const noexcept {
        return payload_bits == 0 ? 0.0 : static_cast<double>(total_bits()) / payload_bits;
    }
    SpaceReport& operator+=(const SpaceReport& o) noexcept {
        payload_bits += o.payload_bits;
        overhead_bits += o.overhead_bits;
        return *this;
    }
};

}  // namespace dynseq
