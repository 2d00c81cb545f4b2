#pragma once

/// The two-level set construction: a four-step sieve turning the semigroup
/// ball of norm ~M into a "pre-ensemble" (1-padded words, pinched norm
/// window, fixed length), and the chained product of 2J+1 pre-ensembles
/// whose factor scales follow a geometric parameter ladder.  Verifiers for
/// every structural property used downstream are included.

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "zaremba/census.hpp"

namespace zaremba {

struct infeasible_parameters : std::runtime_error {
    explicit infeasible_parameters(const std::string& what) : std::runtime_error(what) {}
};

struct construction_empty : std::runtime_error {
    explicit construction_empty(const std::string& what) : std::runtime_error(what) {}
};

inline constexpr double kGoldenRatio = 1.6180339887498948482;

enum class BuildMode { strict, relaxed };

// ---------------------------------------------------------------------------
// Parameter ladder N_{-J-1} .. N_{J+1} with N_{J+1} = N and
//   N_j = N^{(1-e)^{1-j}/(2-e)}   for j <= 1,
//   N_j = N^{1-(1-e)^j/(2-e)}     for 0 <= j <= J.

struct EnsembleParams {
    double n = 0;  // the target scale N
    double eps0 = 0;
    int J = 0;
    BuildMode mode = BuildMode::relaxed;
    double scale = 1.0;  // relaxed replacement for the 10^4 A^4 proof constant

    double log_n_of(int j) const {
        if (j < -J - 1 || j > J + 1) throw std::domain_error("ladder index out of range");
        if (j == J + 1) return std::log(n);
        double e = eps0;
        double expo = j <= 1 ? std::pow(1 - e, 1 - j) / (2 - e)
                             : 1 - std::pow(1 - e, j) / (2 - e);
        return expo * std::log(n);
    }
    double n_of(int j) const { return j == J + 1 ? n : std::exp(log_n_of(j)); }
};

// The depth formula reads the ladder length off log log N; with the proof
// constant in place it is negative for every representable N, so strict mode
// can only report infeasibility.  Relaxed mode clamps to J >= 1 and caps J so
// the first factor scale M_1 = N_{1-J} stays above the sieve floor 64 A^2.
inline EnsembleParams compute_params(double n, double eps0, const Alphabet& alphabet,
                                     BuildMode mode, double scale = 1.0) {
    if (!(n > std::exp(1.0))) throw std::domain_error("ensemble scale N too small");
    const double A = alphabet.max_letter();
    const double logN = std::log(n);

    if (mode == BuildMode::strict) {
        if (!(eps0 > 0 && eps0 < 1.0 / 2500))
            throw std::domain_error("strict mode needs eps0 in (0, 1/2500)");
        const double c = 1e4 * A * A * A * A;
        int J = int(std::floor((std::log(logN) - std::log(c) + 2 * std::log(eps0)) /
                               (-std::log1p(-eps0))));
        // Required: c / log N <= eps0^2 (1-eps0)^J <= 10 c / log N.  The left
        // inequality caps eps0^2 from below by c/log N > 1, which no eps0 in
        // (0, 1/2500) can meet for any N below 2^63.
        double lhs = c / logN;
        double mid = eps0 * eps0 * std::pow(1 - eps0, double(std::max(J, 0)));
        if (lhs > mid)
            throw infeasible_parameters(
                "strict parameter ladder infeasible: lower scale bound violated: "
                "need 1e4*A^4/log(N) <= eps0^2*(1-eps0)^J, got " +
                std::to_string(lhs) + " > " + std::to_string(mid));
        if (J < 10)
            throw infeasible_parameters("strict parameter ladder infeasible: depth J < 10");
        EnsembleParams p{n, eps0, J, mode, 1.0};
        return p;
    }

    if (!(eps0 > 0 && eps0 < 1)) throw std::domain_error("relaxed mode needs eps0 in (0,1)");
    if (!(scale > 0)) throw std::domain_error("relaxed scale must be positive");
    int J = int(std::floor((std::log(logN) - std::log(scale) + 2 * std::log(eps0)) /
                           (-std::log1p(-eps0))));
    if (J < 1) J = 1;  // the analog formula goes negative at desk scale
    EnsembleParams p{n, eps0, J, mode, scale};
    const double floor1 = 64.0 * A * A;
    while (p.J > 1 && p.n_of(1 - p.J) < floor1) --p.J;
    if (!(p.n_of(1 - p.J) > 1.5))
        throw infeasible_parameters("relaxed parameter ladder infeasible: first factor scale " +
                                    std::to_string(p.n_of(1 - p.J)) + " too small");
    return p;
}

// ---------------------------------------------------------------------------
// Pre-ensemble: output of the four-step sieve at scale M.

inline const std::vector<uint64_t>& fibonacci_table() {
    static const std::vector<uint64_t> fib = [] {
        std::vector<uint64_t> f{0, 1};
        while (f.back() < (uint64_t(1) << 62)) f.push_back(f.back() + f[f.size() - 2]);
        return f;
    }();
    return fib;
}

// Smallest p >= 1 with F_{p-1} <= sqrt(log M) <= F_p.
inline int padding_length(double m) {
    double s = std::sqrt(std::max(std::log(m), 0.0));
    const auto& fib = fibonacci_table();
    for (int p = 1; p + 1 < int(fib.size()); ++p)
        if (double(fib[p]) >= s) return p;
    throw std::domain_error("padding length out of table range");
}

struct PreEnsemble {
    double M = 0;  // input scale
    double L = 0;  // selected norm-window top
    int p = 0;     // 1-padding length
    size_t k = 0;  // common word length
    Alphabet alphabet{1, 2};
    std::vector<Word> members;

    size_t size() const { return members.size(); }
    ContinuantMatrix matrix(size_t i) const { return word_to_matrix(members[i]); }
    double alpha() const { return L / M; }
    // Window floor used by the sieve: max(M/(64 A^2), L (1 - 1/log L)).
    double window_lo() const {
        double a = alphabet.max_letter();
        double lo = M / (64.0 * a * a);
        if (std::log(L) > 0) lo = std::max(lo, L * (1 - 1 / std::log(L)));
        return lo;
    }
};

// Steps:
//   1. enumerate norms in [M/(64 A^2), M];
//   2. keep words whose first p and last p digits are 1;
//   3. pigeonhole a norm window [L(1-1/log L), L], taking the maximal
//      qualifying L from the geometric candidate grid;
//   4. pigeonhole a fixed word length (smallest among maximizers).
inline PreEnsemble build_pre_ensemble(double m, const Alphabet& alphabet, BuildMode mode) {
    const double A = alphabet.max_letter();
    if (mode == BuildMode::strict) {
        double lg = std::max(std::log(m), 1e-9);
        if (!(m >= 512.0 * A * A * A * lg * lg * lg))
            throw infeasible_parameters("strict pre-ensemble scale bound violated: need M >= 2^9 A^3 log^3 M");
    } else if (!(m > 1)) {
        throw infeasible_parameters("pre-ensemble scale must exceed 1, got " + std::to_string(m));
    }
    if (!alphabet.contains(1))
        throw construction_empty("padding stage empty: alphabet lacks the letter 1");

    const int p = padding_length(m);
    const uint64_t bound = uint64_t(m);
    const double lower1 = m / (64.0 * A * A);

    // Step 1+2 fused: root the search at the p-fold 1-prefix, accept words
    // whose last p digits are 1 (overlap with the prefix allowed).
    std::vector<int> prefix(size_t(p), 1);
    Word root(prefix);
    ContinuantMatrix root_m = word_to_matrix(root);
    if (root_m.norm() > bound)
        throw construction_empty("padding stage empty: 1-prefix already exceeds scale M=" +
                                 std::to_string(m));

    std::vector<Word> s2;
    std::vector<uint64_t> s2_norms;
    auto accept = [&](const Word& w, const ContinuantMatrix& mat) {
        uint64_t norm = uint64_t(mat.norm());
        if (double(norm) < lower1) return;
        size_t k = w.size();
        for (size_t i = k - size_t(p); i < k; ++i)
            if (w[i] != 1) return;
        s2.push_back(w);
        s2_norms.push_back(norm);
    };

    Word word = root;
    std::vector<ContinuantMatrix> stack{root_m};
    accept(word, root_m);
    std::function<void()> dfs = [&]() {
        for (int g : alphabet.letters()) {
            ContinuantMatrix next = stack.back().appended(g);
            if (next.norm() > bound) break;
            word.push_back(g);
            stack.push_back(next);
            accept(word, next);
            dfs();
            stack.pop_back();
            word.pop_back();
        }
    };
    dfs();

    if (s2.empty())
        throw construction_empty("padding stage empty at M=" + std::to_string(m) +
                                 " (p=" + std::to_string(p) + ")");

    // Step 3: geometric candidate grid M (1 - 1/log M)^{i-1} down to the
    // window floor; a covering argument guarantees some candidate holds at
    // least |S2|/t members.
    std::vector<uint64_t> sorted = s2_norms;
    std::sort(sorted.begin(), sorted.end());
    int t = 1;
    double shrink = 1.0;
    if (std::log(m) > 1) {
        shrink = 1 - 1 / std::log(m);
        double acc = 1;
        while (acc > 1 / (64.0 * A * A) && t < 1000000) {
            acc *= shrink;
            ++t;
        }
    }
    auto window_count = [&](double candidate) {
        double lo = lower1;
        if (std::log(candidate) > 0)
            lo = std::max(lo, candidate * (1 - 1 / std::log(candidate)));
        auto first = std::lower_bound(sorted.begin(), sorted.end(), uint64_t(std::ceil(lo - 1e-9)));
        auto last = std::upper_bound(sorted.begin(), sorted.end(), uint64_t(candidate));
        return size_t(last - first);
    };
    double chosen_l = 0;
    size_t best_count = 0;
    double best_l = 0;
    const double threshold = double(s2.size()) / double(t);
    double cand = m;
    for (int i = 1; i <= t; ++i, cand *= shrink) {
        size_t cnt = window_count(cand);
        if (cnt > best_count) {
            best_count = cnt;
            best_l = cand;
        }
        if (double(cnt) >= threshold) {
            chosen_l = cand;  // maximal qualifying candidate: first hit wins
            break;
        }
    }
    if (chosen_l == 0) chosen_l = best_l;  // numerical fallback; covering argument
    if (window_count(chosen_l) == 0)
        throw construction_empty("norm-window stage empty at M=" + std::to_string(m));

    double lo = lower1;
    if (std::log(chosen_l) > 0) lo = std::max(lo, chosen_l * (1 - 1 / std::log(chosen_l)));
    std::vector<Word> s3;
    for (size_t i = 0; i < s2.size(); ++i)
        if (double(s2_norms[i]) >= lo - 1e-9 && double(s2_norms[i]) <= chosen_l)
            s3.push_back(std::move(s2[i]));

    // Step 4: fix the word length, smallest length among the maximizers.
    std::unordered_map<size_t, size_t> by_len;
    for (const Word& w : s3) ++by_len[w.size()];
    size_t best_k = 0, best_n = 0;
    for (auto [k, cnt] : by_len)
        if (cnt > best_n || (cnt == best_n && k < best_k)) {
            best_n = cnt;
            best_k = k;
        }
    PreEnsemble out;
    out.M = m;
    out.L = chosen_l;
    out.p = p;
    out.k = best_k;
    out.alphabet = alphabet;
    for (Word& w : s3)
        if (w.size() == best_k) out.members.push_back(std::move(w));
    return out;
}

// ---------------------------------------------------------------------------
// Ensemble: the chained product of 2J+1 pre-ensembles.

struct Ensemble {
    EnsembleParams params;
    Alphabet alphabet{1, 2};
    std::vector<PreEnsemble> factors;  // size 2J+1
    std::vector<double> alphas;        // alpha_j = L_j / M_j in [1/(64A^2), 1]
    std::vector<double> ms;            // factor input scales M_j

    size_t factor_count() const { return factors.size(); }
    double product_cardinality() const {
        double c = 1;
        for (const auto& f : factors) c *= double(f.size());
        return c;
    }
};

inline Ensemble build_ensemble(double n, double eps0, const Alphabet& alphabet, BuildMode mode,
                               double scale = 1.0) {
    EnsembleParams params = compute_params(n, eps0, alphabet, mode, scale);
    Ensemble e;
    e.params = params;
    e.alphabet = alphabet;
    const int J = params.J;
    const double phi_term = 1 + 1 / (kGoldenRatio * kGoldenRatio);
    double m = params.n_of(1 - J);
    for (int j = 1; j <= 2 * J + 1; ++j) {
        PreEnsemble pre = build_pre_ensemble(m, alphabet, mode);
        double alpha = pre.alpha();
        e.ms.push_back(m);
        e.alphas.push_back(alpha);
        e.factors.push_back(std::move(pre));
        if (j <= 2 * J)
            m = params.n_of(j + 1 - J) / (phi_term * alpha * params.n_of(j - J));
    }
    return e;
}

// ---------------------------------------------------------------------------
// Verifiers.

struct PreEnsembleCheck {
    size_t members = 0;
    size_t padding_violations = 0;
    size_t window_violations = 0;
    size_t length_violations = 0;
    bool alpha_ok = false;   // L/M in [1/(64A^2), 1]
    bool fib_ok = false;     // F_{p-1} <= sqrt(log M) <= F_p
    bool ok() const {
        return padding_violations == 0 && window_violations == 0 && length_violations == 0 &&
               alpha_ok && fib_ok;
    }
};

inline PreEnsembleCheck verify_pre_ensemble(const PreEnsemble& pre) {
    PreEnsembleCheck c;
    c.members = pre.members.size();
    const double A = pre.alphabet.max_letter();
    double lo = pre.window_lo();
    for (const Word& w : pre.members) {
        if (w.size() != pre.k) ++c.length_violations;
        bool pad = w.size() >= size_t(pre.p);
        for (int i = 0; pad && i < pre.p; ++i)
            pad = w[size_t(i)] == 1 && w[w.size() - 1 - size_t(i)] == 1;
        if (!pad) ++c.padding_violations;
        double norm = to_double(continuant(w));
        if (norm < lo - 1e-9 || norm > pre.L * (1 + 1e-12)) ++c.window_violations;
    }
    double alpha = pre.alpha();
    c.alpha_ok = alpha >= 1 / (64.0 * A * A) - 1e-12 && alpha <= 1 + 1e-12;
    double s = std::sqrt(std::max(std::log(pre.M), 0.0));
    const auto& fib = fibonacci_table();
    c.fib_ok = pre.p >= 1 && double(fib[size_t(pre.p) - 1]) <= s && s <= double(fib[size_t(pre.p)]);
    return c;
}

struct GoldenRatioReport {
    double bound = 0;  // 2 / log L (infinite when log L <= 0)
    double max_dev_b = 0;
    double max_dev_c = 0;
    size_t violations = 0;
    bool ok() const { return violations == 0; }
};

// Every member matrix has b/d and c/d within 2/log L of 1/phi: both ratios
// share the p-fold all-ones convergent.
inline GoldenRatioReport verify_golden_ratio(const PreEnsemble& pre) {
    GoldenRatioReport r;
    double logl = std::log(pre.L);
    r.bound = logl > 0 ? 2 / logl : std::numeric_limits<double>::infinity();
    const double inv_phi = 1 / kGoldenRatio;
    for (size_t i = 0; i < pre.members.size(); ++i) {
        ContinuantMatrix m = pre.matrix(i);
        double db = std::abs(to_double(m.b) / to_double(m.d) - inv_phi);
        double dc = std::abs(to_double(m.c) / to_double(m.d) - inv_phi);
        r.max_dev_b = std::max(r.max_dev_b, db);
        r.max_dev_c = std::max(r.max_dev_c, dc);
        if (db > r.bound || dc > r.bound) ++r.violations;
    }
    return r;
}

// Admissible interval for the cumulative norm correction of the j-prefix
// product: the chain rule multiplies (1 +- 2/log L_n) factors, squared for
// n = j and cubed for n < j.  Lower edge clamped at zero when a window is
// too loose to constrain anything.
inline std::pair<double, double> pi_window(const Ensemble& e, int j) {
    double lo = 1, hi = 1;
    for (int n = 1; n <= j; ++n) {
        double logl = std::log(e.factors[size_t(n - 1)].L);
        double dev = logl > 0 ? 2 / logl : std::numeric_limits<double>::infinity();
        int pw = n == j ? 2 : 3;
        for (int q = 0; q < pw; ++q) {
            lo *= std::max(0.0, 1 - dev);
            hi *= 1 + dev;
        }
    }
    if (e.params.mode == BuildMode::strict) {
        lo = std::max(lo, std::exp(-1e-3));
        hi = std::min(hi, std::exp(1e-3));
    }
    return {lo, hi};
}

struct NormCheckReport {
    size_t samples = 0;
    size_t violations = 0;
    double max_pi = 0;
    double min_pi = std::numeric_limits<double>::infinity();
    bool ok() const { return violations == 0; }
};

// Sampled check that every prefix product norm equals alpha_j N_{j-J} times a
// correction inside its admissible window.
inline NormCheckReport verify_ensemble_norms(const Ensemble& e, size_t samples = 256,
                                             uint64_t seed = 1) {
    NormCheckReport rep;
    const int total = int(e.factors.size());
    std::vector<std::pair<double, double>> windows;
    for (int j = 1; j <= total; ++j) windows.push_back(pi_window(e, j));
    std::mt19937_64 rng(seed);
    for (size_t s = 0; s < samples; ++s) {
        ContinuantMatrix prod = ContinuantMatrix::identity();
        for (int j = 1; j <= total; ++j) {
            const PreEnsemble& f = e.factors[size_t(j - 1)];
            std::uniform_int_distribution<size_t> pick(0, f.size() - 1);
            prod = prod * f.matrix(pick(rng));
            double pi = to_double(prod.norm()) /
                        (e.alphas[size_t(j - 1)] * e.params.n_of(j - e.params.J));
            rep.max_pi = std::max(rep.max_pi, pi);
            rep.min_pi = std::min(rep.min_pi, pi);
            auto [lo, hi] = windows[size_t(j - 1)];
            if (pi < lo - 1e-9 || pi > hi * (1 + 1e-9)) ++rep.violations;
        }
        ++rep.samples;
    }
    return rep;
}

struct UniqueExpansionReport {
    double product_cardinality = 0;
    bool materialized = false;
    uint64_t distinct_products = 0;  // when materialized
    size_t samples = 0;
    size_t collisions = 0;
    bool ok() const {
        return collisions == 0 &&
               (!materialized || double(distinct_products) == product_cardinality);
    }
};

namespace detail {
struct MatrixKey {
    uint64_t h[4];
    bool operator==(const MatrixKey& o) const {
        return h[0] == o.h[0] && h[1] == o.h[1] && h[2] == o.h[2] && h[3] == o.h[3];
    }
};
struct MatrixKeyHash {
    size_t operator()(const MatrixKey& k) const {
        uint64_t x = 0x9e3779b97f4a7c15ull;
        for (uint64_t v : k.h) {
            x ^= v + 0x9e3779b97f4a7c15ull + (x << 6) + (x >> 2);
            x *= 0xff51afd7ed558ccdull;
        }
        return size_t(x);
    }
};
inline MatrixKey key_of(const ContinuantMatrix& m) {
    auto fold = [](u128 v) { return uint64_t(v) ^ (uint64_t(v >> 64) * 0x100000001b3ull); };
    return {{fold(m.a), fold(m.b), fold(m.c), fold(m.d)}};
}
}  // namespace detail

inline UniqueExpansionReport verify_unique_expansion(const Ensemble& e, size_t samples = 100000,
                                                     uint64_t seed = 1,
                                                     double materialize_cap = 2e6) {
    UniqueExpansionReport rep;
    rep.product_cardinality = e.product_cardinality();
    const size_t total = e.factors.size();

    if (rep.product_cardinality <= materialize_cap && rep.product_cardinality > 0) {
        std::unordered_set<detail::MatrixKey, detail::MatrixKeyHash> seen;
        std::vector<size_t> idx(total, 0);
        for (;;) {
            ContinuantMatrix prod = ContinuantMatrix::identity();
            for (size_t j = 0; j < total; ++j) prod = prod * e.factors[j].matrix(idx[j]);
            seen.insert(detail::key_of(prod));
            size_t j = total;
            while (j > 0) {
                --j;
                if (++idx[j] < e.factors[j].size()) break;
                idx[j] = 0;
                if (j == 0) {
                    j = total + 1;
                    break;
                }
            }
            if (j == total + 1) break;
        }
        rep.materialized = true;
        rep.distinct_products = seen.size();
    }

    std::mt19937_64 rng(seed);
    std::unordered_map<detail::MatrixKey, std::vector<size_t>, detail::MatrixKeyHash> first_tuple;
    std::vector<size_t> tuple(total);
    for (size_t s = 0; s < samples; ++s) {
        ContinuantMatrix prod = ContinuantMatrix::identity();
        for (size_t j = 0; j < total; ++j) {
            std::uniform_int_distribution<size_t> pick(0, e.factors[j].size() - 1);
            tuple[j] = pick(rng);
            prod = prod * e.factors[j].matrix(tuple[j]);
        }
        auto [it, inserted] = first_tuple.try_emplace(detail::key_of(prod), tuple);
        if (!inserted && it->second != tuple) ++rep.collisions;
        ++rep.samples;
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Bilateral split: index pair (j, h = 2J-j+1) with the prefix range [1..j]
// and the suffix range [j+1..2J+1] bracketing a requested scale M.

struct EnsembleSplit {
    int j_hat = 0;
    int h_hat = 0;
    int prefix_first = 1, prefix_last = 0;  // factor indexes, 1-based inclusive
    int suffix_first = 0, suffix_last = 0;
};

inline EnsembleSplit split_at(const Ensemble& e, double m) {
    const EnsembleParams& p = e.params;
    const int J = p.J;
    if (p.mode == BuildMode::strict) {
        const double A = e.alphabet.max_letter();
        double gate = 1e5 * A * A * A * A / (p.eps0 * p.eps0);
        if (!(std::log(m) >= gate && std::log(m) <= std::log(p.n) - gate))
            throw std::domain_error("split scale outside the strict admissible interval");
    }
    if (!(m >= p.n_of(1 - J) * (1 - 1e-12) && m <= p.n_of(J) * (1 + 1e-12)))
        throw std::domain_error("split scale outside [N_{1-J}, N_J]");
    int j_hat = 2;
    while (j_hat < 2 * J && p.n_of(j_hat - J) < m) ++j_hat;
    EnsembleSplit s;
    s.j_hat = j_hat;
    s.h_hat = 2 * J - j_hat + 1;
    s.prefix_last = j_hat;
    s.suffix_first = j_hat + 1;
    s.suffix_last = 2 * J + 1;
    return s;
}

}  // namespace zaremba
