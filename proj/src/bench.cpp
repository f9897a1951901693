#include "dynseq/bench.hpp"

#include <chrono>
#include <random>
#include <stdexcept>

#include <json.hpp>

#include "dynseq/cspsi.hpp"
#include "dynseq/oracle.hpp"
#include "dynseq/wavelet.hpp"

namespace dynseq {

namespace {

using Clock = std::chrono::steady_clock;

// A workload is a stream of raw random words; each op maps them onto the
// current size of whatever it runs on, so the structure and the oracle see
// identical operations as long as they agree.
struct Phase {
    std::string op;
    std::vector<std::uint64_t> raw;  // two words per op
    std::vector<std::uint64_t> out;  // one result per op
    double seconds = 0;
};

std::size_t pick(std::uint64_t r, std::size_t n) { return n == 0 ? 1 : 1 + r % n; }

// Adapters give bitvec, string and cspsi the same five-op surface.
struct StringOps {
    static constexpr const char* names[] = {"access", "rank", "select", "insert", "erase"};

    template <class S>
    static std::uint64_t run(S& s, std::size_t op, std::uint64_t a, std::uint64_t b,
                             std::uint64_t sigma) {
        const std::size_t n = s.size();
        const Code c = static_cast<Code>(b % sigma);
        switch (op) {
            case 0: return s.access(pick(a, n));
            case 1: return s.rank(c, pick(a, n));
            case 2: return s.select(c, pick(a, n / sigma + 1)).value_or(0);
            case 3: s.insert(c, pick(a, n + 1)); return 0;
            default: return s.erase(pick(a, n));
        }
    }
};

struct BitAdapter {
    BitVector& v;
    std::size_t size() const { return v.size(); }
    Code access(std::size_t i) const { return v.access(i); }
    std::size_t rank(Code c, std::size_t i) const { return v.rank(c != 0, i); }
    std::optional<std::size_t> select(Code c, std::size_t j) const { return v.select(c != 0, j); }
    void insert(Code c, std::size_t i) { v.insert(c != 0, i); }
    Code erase(std::size_t i) { return v.erase(i); }
};

struct CspsiOps {
    static constexpr const char* names[] = {"sum", "search", "update", "insert", "erase"};
    static constexpr std::uint64_t kValues = 1u << 16;

    template <class C>
    static std::uint64_t run(C& s, std::size_t op, std::uint64_t a, std::uint64_t b, unsigned d) {
        const std::size_t n = s.size();
        const unsigned j = static_cast<unsigned>(1 + b % d);
        switch (op) {
            case 0: return s.sum(j, pick(a, n));
            case 1: {
                const std::uint64_t tot = s.sum(j, n);
                return s.search(j, 1 + a % (tot + 1)).value_or(0);
            }
            case 2: {
                const std::size_t i = pick(a, n);
                const std::uint64_t v = (b >> 8) % kValues;
                s.update(j, i, static_cast<std::int64_t>(v) - static_cast<std::int64_t>(s.get(j, i)));
                return v;
            }
            case 3: insert0(s, pick(a, n + 1)); return 0;
            default: {
                const std::size_t i = pick(a, n);
                std::uint64_t gone = 0;
                for (unsigned q = 1; q <= d; ++q) {
                    const std::uint64_t v = s.get(q, i);
                    gone += v;
                    if (v) s.update(q, i, -static_cast<std::int64_t>(v));
                }
                erase0(s, i);
                return gone;
            }
        }
    }
    static void insert0(Cspsi& s, std::size_t i) { s.insert(i); }
    static void insert0(oracle::NaiveCspsi& s, std::size_t i) { s.insert0(i); }
    static void erase0(Cspsi& s, std::size_t i) { s.erase(i); }
    static void erase0(oracle::NaiveCspsi& s, std::size_t i) { s.delete0(i); }
};

std::string first_or_ok(const std::vector<std::string>& msgs) {
    return msgs.empty() ? "ok" : msgs.front();
}

std::vector<Phase> make_phases(const char* const (&names)[5], std::size_t ops, std::mt19937_64& rng) {
    std::vector<Phase> phases;
    for (const char* name : names) {
        Phase p{name, std::vector<std::uint64_t>(2 * ops), {}, 0};
        for (auto& r : p.raw) r = rng();
        phases.push_back(std::move(p));
    }
    return phases;
}

template <class Run>
void time_phase(Phase& p, std::size_t index, Run&& run) {
    p.out.assign(p.raw.size() / 2, 0);
    const auto t0 = Clock::now();
    for (std::size_t k = 0; k < p.out.size(); ++k) p.out[k] = run(index, p.raw[2 * k], p.raw[2 * k + 1]);
    p.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
}

template <class Run>
bool replay_phase(const Phase& p, std::size_t index, Run&& run) {
    bool same = true;
    for (std::size_t k = 0; k < p.out.size(); ++k)
        same &= run(index, p.raw[2 * k], p.raw[2 * k + 1]) == p.out[k];
    return same;
}

}  // namespace

BenchOptions normalized(BenchOptions opt) {
    if (opt.sizes.empty()) throw std::invalid_argument("bench: no sizes given");
    if (opt.ops == 0) throw std::invalid_argument("bench: --ops must be positive");
    if (opt.structure == "bitvec") {
        if (opt.sigma == 0) opt.sigma = 2;
        if (opt.sigma != 2) throw std::invalid_argument("bench: bitvec requires sigma 2");
    } else if (opt.structure == "string") {
        if (opt.sigma == 0) opt.sigma = 256;
        if (opt.sigma < 2 || opt.sigma > (std::uint64_t{1} << 32))
            throw std::invalid_argument("bench: string sigma must be in 2..2^32");
    } else if (opt.structure == "cspsi") {
        if (opt.sigma == 0) opt.sigma = 4;
        if (opt.sigma > 64) throw std::invalid_argument("bench: cspsi sigma (d) must be in 1..64");
    } else {
        throw std::invalid_argument("bench: unknown structure '" + opt.structure + "'");
    }
    if (opt.inject_fault && !opt.verify)
        throw std::invalid_argument("bench: fault injection needs --verify");
    return opt;
}

std::vector<BenchRecord> run_bench(const BenchOptions& raw_opt,
                                   const std::function<void(const BenchRecord&)>& sink) {
    const BenchOptions opt = normalized(raw_opt);
    std::vector<BenchRecord> records;
    for (std::size_t n : opt.sizes) {
        std::mt19937_64 rng(opt.seed ^ (0x9E3779B97F4A7C15ull * (n + 1)));

        std::vector<Phase> phases;
        std::vector<SpaceReport> spaces;
        std::vector<std::string> checks;
        bool verified = true;

        auto measure = [&](auto& s, auto&& run) {
            for (std::size_t k = 0; k < phases.size(); ++k) {
                time_phase(phases[k], k, run);
                spaces.push_back(s.space());
                checks.push_back(first_or_ok(s.validate()));
            }
        };

        if (opt.structure == "cspsi") {
            const unsigned d = static_cast<unsigned>(opt.sigma);
            Cspsi s(CspsiConfig{d, 16});
            oracle::NaiveCspsi o(d, 16);
            std::vector<std::uint64_t> init(n * d);
            for (auto& v : init) v = rng() % CspsiOps::kValues;
            for (std::size_t i = 1; i <= n; ++i) {
                s.insert(i);
                if (opt.verify) o.insert0(i);
                for (unsigned j = 1; j <= d; ++j) {
                    const auto v = static_cast<std::int64_t>(init[(i - 1) * d + j - 1]);
                    s.update(j, i, v);
                    if (opt.verify) o.update(j, i, v);
                }
            }
            phases = make_phases(CspsiOps::names, opt.ops, rng);
            measure(s, [&](std::size_t op, std::uint64_t a, std::uint64_t b) {
                return CspsiOps::run(s, op, a, b, d);
            });
            if (opt.verify) {
                if (opt.inject_fault) phases[0].out[0] ^= 1;
                for (std::size_t k = 0; k < phases.size(); ++k)
                    verified &= replay_phase(phases[k], k, [&](std::size_t op, std::uint64_t a, std::uint64_t b) {
                        return CspsiOps::run(o, op, a, b, d);
                    });
            }
        } else {
            std::vector<Code> init(n);
            for (auto& c : init) c = static_cast<Code>(rng() % opt.sigma);
            oracle::NaiveString o;
            if (opt.verify) o = oracle::NaiveString(init);
            phases = make_phases(StringOps::names, opt.ops, rng);
            auto oracle_run = [&](std::size_t op, std::uint64_t a, std::uint64_t b) {
                return StringOps::run(o, op, a, b, opt.sigma);
            };
            if (opt.structure == "bitvec") {
                std::vector<bool> bits(init.begin(), init.end());
                BitVector v = BitVector::build(bits);
                BitAdapter s{v};
                measure(v, [&](std::size_t op, std::uint64_t a, std::uint64_t b) {
                    return StringOps::run(s, op, a, b, 2);
                });
            } else {
                DynStringConfig cfg;
                cfg.sigma = opt.sigma;
                DynString s = DynString::build(cfg, init);
                measure(s, [&](std::size_t op, std::uint64_t a, std::uint64_t b) {
                    return StringOps::run(s, op, a, b, opt.sigma);
                });
            }
            if (opt.verify) {
                if (opt.inject_fault) phases[0].out[0] ^= 1;
                for (std::size_t k = 0; k < phases.size(); ++k)
                    verified &= replay_phase(phases[k], k, oracle_run);
            }
        }

        for (std::size_t k = 0; k < phases.size(); ++k) {
            BenchRecord r;
            r.structure = opt.structure;
            r.op = phases[k].op;
            r.n = n;
            r.sigma = opt.sigma;
            r.ops = phases[k].out.size();
            r.ops_per_sec = phases[k].seconds > 0 ? r.ops / phases[k].seconds : 0;
            r.payload_bits = spaces[k].payload_bits;
            r.overhead_bits = spaces[k].overhead_bits;
            r.validator = checks[k];
            r.verify = !opt.verify ? "off" : verified ? "pass" : "fail";
            if (sink) sink(r);
            records.push_back(std::move(r));
        }
    }
    return records;
}

std::string to_json(const BenchRecord& r) {
    return nlohmann::json{{"structure", r.structure},
                          {"op", r.op},
                          {"n", r.n},
                          {"sigma", r.sigma},
                          {"ops", r.ops},
                          {"ops_per_sec", r.ops_per_sec},
                          {"payload_bits", r.payload_bits},
                          {"overhead_bits", r.overhead_bits},
                          {"validator", r.validator},
                          {"verify", r.verify}}
        .dump();
}

}  // namespace dynseq
