#ifndef QAMOD_CIRCUIT_LAWS_HPP
#define QAMOD_CIRCUIT_LAWS_HPP

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace qamod {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Harmonic sum x (+) y = (1/x + 1/y)^-1 extended associatively. Infinite
/// entries are identity elements; the result never exceeds the minimum.
inline double harmonic_sum(const std::vector<double>& values) {
    if (values.empty()) throw std::invalid_argument("harmonic_sum: empty list");
    double inv = 0.0;
    for (double v : values) {
        if (!(v > 0.0)) throw std::invalid_argument("harmonic_sum: entries must be positive");
        inv += 1.0 / v; // 1/inf == 0
    }
    return inv == 0.0 ? kInf : 1.0 / inv;
}

inline double harmonic_sum(double x, double y) {
    return harmonic_sum(std::vector<double>{x, y});
}

/// Two equal-length sequences of positive widths with a_1 = b_1 and the
/// series-inequality chain a_{i+1} <= a_i (+) b_{i+1}.
struct ChainPair {
    std::vector<double> a;
    std::vector<double> b;
};

struct ChainCheck {
    bool ok = true;
    int first_violation = -1; // 0-based index into a, -1 when ok
    std::string reason;
};

/// Chain tolerance: absolute slack so generator arithmetic cannot
/// self-reject.
constexpr double kChainSlack = 1e-12;

inline ChainCheck validate_chain(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) throw std::invalid_argument("validate_chain: length mismatch");
    if (a.empty()) throw std::invalid_argument("validate_chain: empty chain");
    ChainCheck c;
    for (size_t i = 0; i < a.size(); ++i) {
        if (!(a[i] > 0.0) || !(b[i] > 0.0)) {
            c.ok = false;
            c.first_violation = int(i);
            c.reason = "nonpositive entry at index " + std::to_string(i);
            return c;
        }
    }
    if (std::abs(a[0] - b[0]) > 1e-9 * std::max(a[0], b[0])) {
        c.ok = false;
        c.first_violation = 0;
        c.reason = "a[0] != b[0]";
        return c;
    }
    for (size_t i = 0; i + 1 < a.size(); ++i) {
        const double cap = harmonic_sum(a[i], b[i + 1]);
        if (a[i + 1] > cap + kChainSlack) {
            c.ok = false;
            c.first_violation = int(i + 1);
            c.reason = "a[" + std::to_string(i + 1) + "] exceeds a[" + std::to_string(i) + "] (+) b[" +
                       std::to_string(i + 1) + "]";
            return c;
        }
    }
    return c;
}

struct BoundResult {
    double ratio = 0.0;  // (sum a)^2 / (b_1 * sum b)
    bool verdict = false; // ratio <= 4/3
};

/// The quadratic bound (sum a)^2 <= (4/3) b_1 sum b for valid chains. A
/// false verdict on a valid chain is a genuine failure.
inline BoundResult arithmetic_bound(const std::vector<double>& a, const std::vector<double>& b) {
    const ChainCheck c = validate_chain(a, b);
    if (!c.ok) throw std::invalid_argument("arithmetic_bound: invalid chain (" + c.reason + ")");
    double sa = 0.0, sb = 0.0;
    for (double v : a) sa += v;
    for (double v : b) sb += v;
    BoundResult r;
    r.ratio = (sa * sa) / (b[0] * sb);
    r.verdict = r.ratio <= 4.0 / 3.0 + kChainSlack;
    return r;
}

namespace detail {

inline double uniform01(std::mt19937_64& rng) {
    return double(rng() >> 11) * 0x1.0p-53; // [0, 1)
}

} // namespace detail

/// Deterministic generator of valid chains: b log-uniform in
/// [decay_lo, decay_hi], a_1 = b_1, a_{i+1} = theta_i * (a_i (+) b_{i+1})
/// with theta_i uniform in (0, 1].
inline ChainPair random_chain(uint64_t seed, int n, double decay_lo = 1e-3, double decay_hi = 1e3) {
    if (n < 1) throw std::invalid_argument("random_chain: n must be >= 1");
    if (!(decay_lo > 0.0) || !(decay_hi >= decay_lo))
        throw std::invalid_argument("random_chain: bad decay range");
    std::mt19937_64 rng(seed);
    const double llo = std::log(decay_lo), lhi = std::log(decay_hi);
    ChainPair ch;
    ch.a.resize(size_t(n));
    ch.b.resize(size_t(n));
    for (int i = 0; i < n; ++i) ch.b[i] = std::exp(llo + detail::uniform01(rng) * (lhi - llo));
    ch.a[0] = ch.b[0];
    for (int i = 0; i + 1 < n; ++i) {
        const double theta = 1.0 - detail::uniform01(rng); // (0, 1]
        ch.a[i + 1] = theta * harmonic_sum(ch.a[i], ch.b[i + 1]);
    }
    return ch;
}

struct FuzzResult {
    int samples = 0;
    int n_max = 0;
    double max_ratio = 0.0;
    uint64_t max_seed = 0;
    int violations = 0;
};

/// Run `samples` random chains with n in [1, n_max]; every verdict must be
/// true (the bound is a theorem). Reports the empirical ratio supremum.
inline FuzzResult fuzz_chains(int samples, uint64_t seed, int n_max = 64) {
    FuzzResult out;
    out.samples = samples;
    out.n_max = n_max;
    for (int s = 0; s < samples; ++s) {
        const uint64_t chain_seed = seed * 0x9e3779b97f4a7c15ull + uint64_t(s);
        std::mt19937_64 pick(chain_seed ^ 0xd1b54a32d192ed03ull);
        const int n = 1 + int(pick() % uint64_t(n_max));
        const ChainPair ch = random_chain(chain_seed, n);
        const BoundResult r = arithmetic_bound(ch.a, ch.b);
        if (!r.verdict) ++out.violations;
        if (r.ratio > out.max_ratio) {
            out.max_ratio = r.ratio;
            out.max_seed = chain_seed;
        }
    }
    return out;
}

} // namespace qamod

#endif
