#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace dynseq {

inline constexpr std::uint64_t kDefaultBenchSeed = 12345;

struct BenchOptions {
    std::string structure = "bitvec";  ///< bitvec | string | cspsi
    std::vector<std::size_t> sizes{std::size_t{1} << 16};
    /// Alphabet size for bitvec/string, sequence count d for cspsi (k = 16);
    /// 0 picks 2, 256 and 4 respectively.
    std::uint64_t sigma = 0;
    std::uint64_t seed = kDefaultBenchSeed;
    std::size_t ops = 10000;  ///< operations timed per (op, n) cell
    bool verify = false;      ///< replay every op on the oracle afterwards
    bool inject_fault = false;  ///< corrupt one recorded result; for testing verify
};

struct BenchRecord {
    std::string structure;
    std::string op;
    std::size_t n = 0;
    std::uint64_t sigma = 0;
    std::size_t ops = 0;
    double ops_per_sec = 0;
    std::uint64_t payload_bits = 0;
    std::uint64_t overhead_bits = 0;
    std::string validator;  ///< "ok" or the first message
    std::string verify;     ///< "pass", "fail" or "off"
};

/// Throws std::invalid_argument on an inconsistent combination.
BenchOptions normalized(BenchOptions opt);

/// One record per (op, n) in the order produced; each is also passed to
/// `sink` as soon as it is measured. Deterministic apart from timings.
std::vector<BenchRecord> run_bench(const BenchOptions& opt,
                                   const std::function<void(const BenchRecord&)>& sink = {});

/// Single-line JSON object.
std::string to_json(const BenchRecord& r);

}  // namespace dynseq
