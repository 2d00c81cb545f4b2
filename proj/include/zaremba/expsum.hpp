#pragma once

/// Exact exponential-sum computations over matrix sets: norm histograms,
/// S(theta), the Parseval L^2 value, the positive-proportion lower bound,
/// rational+small-shift decomposition of frequencies, and the
/// partial-quotient-sum average check.

#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <numbers>
#include <vector>

#include "zaremba/cf.hpp"
#include "zaremba/ensemble.hpp"

namespace zaremba {

// Multiplicity table n -> #{gamma : ||gamma|| = n}.  The total is capped at
// 2^53 so S(0) stays exactly representable in double.
struct NormHistogram {
    std::map<uint64_t, uint64_t> entries;
    uint64_t total = 0;

    void add(uint64_t norm, uint64_t multiplicity = 1) {
        if (norm < 1) throw std::domain_error("histogram norms must be >= 1");
        if (total + multiplicity > (uint64_t(1) << 53))
            throw overflow_error("histogram total exceeds 2^53");
        entries[norm] += multiplicity;
        total += multiplicity;
    }
    size_t distinct() const { return entries.size(); }
};

inline NormHistogram norm_histogram(const std::vector<ContinuantMatrix>& matrices) {
    NormHistogram h;
    for (const auto& m : matrices) h.add(uint64_t(m.norm()));
    return h;
}

// Histogram of all product norms of a (materializable) ensemble.
inline NormHistogram ensemble_histogram(const Ensemble& e, double cap = 2e7) {
    if (e.product_cardinality() > cap)
        throw std::domain_error("ensemble too large to materialize a histogram");
    NormHistogram h;
    const size_t total = e.factors.size();
    std::vector<size_t> idx(total, 0);
    if (e.product_cardinality() == 0) return h;
    for (;;) {
        ContinuantMatrix prod = ContinuantMatrix::identity();
        for (size_t j = 0; j < total; ++j) prod = prod * e.factors[j].matrix(idx[j]);
        h.add(uint64_t(prod.norm()));
        size_t j = total;
        while (j > 0) {
            --j;
            if (++idx[j] < e.factors[j].size()) break;
            idx[j] = 0;
            if (j == 0) return h;
        }
    }
}

// S(theta) = sum_n multiplicity(n) e(n theta), summed in ascending n.
inline std::complex<double> s_theta(const NormHistogram& h, double theta) {
    if (theta < 0 || theta > 1) throw std::domain_error("theta must lie in [0,1]");
    std::complex<double> acc = 0;
    for (const auto& [n, mult] : h.entries) {
        double arg = 2 * std::numbers::pi * theta * double(n);
        acc += double(mult) * std::complex<double>(std::cos(arg), std::sin(arg));
    }
    return acc;
}

// Parseval: the L^2 integral of |S|^2 over [0,1] equals the exact integer
// sum of squared multiplicities.
inline u128 l2_integral(const NormHistogram& h) {
    u128 acc = 0;
    for (const auto& [n, mult] : h.entries)
        acc = checked_add(acc, checked_mul(u128(mult), u128(mult)));
    return acc;
}

// Cauchy-Schwarz lower bound on the number of distinct attained norms:
// S(0)^2 / integral |S|^2.
inline double proportion_lower_bound(const NormHistogram& h) {
    if (h.total == 0) throw std::domain_error("empty histogram");
    return double(h.total) * double(h.total) / to_double(l2_integral(h));
}

// The normalized target ratio: integral |S|^2 * N / S(0)^2.
inline double l2_ratio(const NormHistogram& h, double n) {
    if (h.total == 0) throw std::domain_error("empty histogram");
    return to_double(l2_integral(h)) * n / (double(h.total) * double(h.total));
}

// ---------------------------------------------------------------------------
// theta = a/q + K/N with (a,q)=1, 0 <= a <= q <= sqrt(N)/(10A),
// |K| <= 10 A sqrt(N) / q, and a in {0,q} only when q = 1.  The convergents
// of theta supply the best approximant with admissible denominator.

struct ThetaDecomposition {
    uint64_t a = 0, q = 1;
    double big_k = 0;
    uint64_t n = 0;

    double reconstruct() const { return double(a) / double(q) + big_k / double(n); }
};

inline ThetaDecomposition dirichlet_decompose(double theta, uint64_t n, int a_max) {
    if (theta < 0 || theta > 1) throw std::domain_error("theta must lie in [0,1]");
    if (double(n) < 100.0 * a_max * a_max)
        throw std::domain_error("decomposition needs N >= 100 A^2");
    const double q_cap = std::sqrt(double(n)) / (10.0 * a_max);

    // Walk the continued fraction convergents of theta, keeping the last
    // denominator within the cap.
    uint64_t p_prev = 1, q_prev = 0;  // p_{-1}/q_{-1}
    uint64_t p_cur = 0, q_cur = 1;    // p_0/q_0 = floor(theta)/1
    uint64_t best_p = theta >= 1 ? 1 : 0, best_q = 1;
    double x = theta - std::floor(theta);
    if (theta >= 1) x = 0;
    for (int iter = 0; iter < 64 && x > 1e-15; ++iter) {
        double inv = 1 / x;
        double digit_f = std::floor(inv);
        if (digit_f > 1e18) break;
        uint64_t digit = uint64_t(digit_f);
        uint64_t q_next = digit * q_cur + q_prev;
        uint64_t p_next = digit * p_cur + p_prev;
        if (double(q_next) > q_cap) break;
        p_prev = p_cur;
        q_prev = q_cur;
        p_cur = p_next;
        q_cur = q_next;
        best_p = p_cur;
        best_q = q_cur;
        x = inv - digit_f;
    }
    ThetaDecomposition d;
    d.a = best_p;
    d.q = best_q;
    d.n = n;
    d.big_k = (double(theta) - double(d.a) / double(d.q)) * double(n);
    return d;
}

// ---------------------------------------------------------------------------
// Average size of the partial-quotient sum: sum over 1 <= a < b of s(a/b)
// with non-reduced fractions reduced first, reported against b log^2 b.

struct KnuthYaoReport {
    uint64_t b = 0;
    u128 sum = 0;
    double ratio = 0;  // sum / (b log^2 b)
};

inline KnuthYaoReport knuth_yao_check(uint64_t b) {
    if (b < 2) throw std::domain_error("partial-quotient average needs b >= 2");
    u128 sum = 0;
    for (uint64_t a = 1; a < b; ++a) {
        // inline Euclid; equivalent to sum_partial_quotients(Fraction(a, b))
        uint64_t x = b, y = a;
        while (y != 0) {
            sum += x / y;
            uint64_t r = x % y;
            x = y;
            y = r;
        }
    }
    KnuthYaoReport r;
    r.b = b;
    r.sum = sum;
    double lg = std::log(double(b));
    r.ratio = to_double(sum) / (double(b) * lg * lg);
    return r;
}

}  // namespace zaremba
