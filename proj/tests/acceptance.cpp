// End-to-end acceptance run: twelve numbered checks, one pass/fail line
// each, nonzero exit if any fails.  Heavier than the unit suite; give it a
// generous ctest timeout.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <random>
#include <thread>
#include <vector>

#include "zaremba/census.hpp"
#include "zaremba/dimension.hpp"
#include "zaremba/ensemble.hpp"
#include "zaremba/expsum.hpp"

using namespace zaremba;

namespace {

int failures = 0;

void report(int idx, const char* name, bool ok, const std::string& detail = "") {
    std::printf("[%2d] %-34s %s%s%s\n", idx, name, ok ? "PASS" : "FAIL",
                detail.empty() ? "" : "  ", detail.c_str());
    if (!ok) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Word random_word(std::mt19937_64& rng, int max_letter, size_t max_len, bool nonempty = false) {
    std::uniform_int_distribution<size_t> len(nonempty ? 1 : 0, max_len);
    std::uniform_int_distribution<int> digit(1, max_letter);
    std::vector<int> d(len(rng));
    for (int& x : d) x = digit(rng);
    return Word(std::move(d));
}

unsigned pool_threads() {
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1;
}

// 1. concatenation identity and sandwich inequality, exact, 1e5 pairs
void criterion_1() {
    auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(101);
    size_t bad = 0;
    for (int i = 0; i < 100000; ++i) {
        Word d = random_word(rng, 10, 20, true);
        Word b = random_word(rng, 10, 20, true);
        u128 joint = continuant(concat(d, b));
        u128 split = checked_add(
            checked_mul(continuant(d), continuant(b)),
            checked_mul(continuant(d.drop_last()), continuant(b.drop_first())));
        u128 prod = checked_mul(continuant(d), continuant(b));
        if (joint != split || prod > joint || joint > 2 * prod) ++bad;
    }
    double dt = seconds_since(t0);
    report(1, "concatenation + sandwich", bad == 0 && dt < 5.0,
           "violations=" + std::to_string(bad) + " time=" + std::to_string(dt) + "s");
}

// 2. mirror symmetry, matrix entries, determinant sign, exact
void criterion_2() {
    std::mt19937_64 rng(102);
    size_t bad = 0;
    for (int i = 0; i < 100000; ++i) {
        Word w = random_word(rng, 10, 20);
        if (continuant(w) != continuant(reverse(w))) ++bad;
        ContinuantMatrix m = word_to_matrix(w);
        if (m.d != continuant(w)) ++bad;
        if (w.size() >= 2 &&
            (m.a != continuant(w.drop_first().drop_last()) ||
             m.b != continuant(w.drop_first()) || m.c != continuant(w.drop_last())))
            ++bad;
        u128 ad = checked_mul(m.a, m.d);
        u128 bc = checked_mul(m.b, m.c);
        bool det_ok = w.size() % 2 == 0 ? ad == bc + 1 : bc == ad + 1;
        if (!det_ok || m.det_sign() != (w.size() % 2 == 0 ? 1 : -1)) ++bad;
    }
    report(2, "mirror + matrix correspondence", bad == 0, "violations=" + std::to_string(bad));
}

// 3. no missing denominator below 1e5 for {1..5}
void criterion_3() {
    auto t0 = std::chrono::steady_clock::now();
    auto missing = zaremba_verify(Alphabet{1, 2, 3, 4, 5}, 100000, pool_threads());
    double dt = seconds_since(t0);
    report(3, "denominator cover {1..5} to 1e5", !missing.has_value() && dt < 60.0,
           (missing ? "first_missing=" + std::to_string(*missing) : std::string("complete")) +
               " time=" + std::to_string(dt) + "s");
}

// 4. counting bounds at three scales, ratio F(x)/x^{2 delta} in [1e-3, 8]
void criterion_4() {
    bool ok = true;
    std::string detail;
    for (uint64_t x : {uint64_t(10000), uint64_t(100000), uint64_t(1000000)}) {
        KanHenVerdict v = check_kan_hen(Alphabet{1, 2, 3, 4, 5}, x, 0.8368, pool_threads());
        bool here = v.all_ok() && v.ratio >= 1e-3 && v.ratio <= 8;
        ok = ok && here;
        char buf[64];
        std::snprintf(buf, sizeof buf, " ratio(%llu)=%.4f", (unsigned long long)x, v.ratio);
        detail += buf;
    }
    report(4, "counting bounds, three scales", ok, detail);
}

// 5. dimension fit: {1..5} near 0.8368, {1,2} in (0.50, 0.56)
void criterion_5() {
    auto t0 = std::chrono::steady_clock::now();
    DimensionEstimate big =
        fit_dimension(Alphabet{1, 2, 3, 4, 5}, {1000, 10000, 100000, 1000000}, pool_threads());
    DimensionEstimate small =
        fit_dimension(Alphabet{1, 2}, {1000, 10000, 100000, 1000000}, pool_threads());
    double dt = seconds_since(t0);
    bool ok = std::abs(big.value - 0.8368) <= 0.04 && small.value > 0.50 && small.value < 0.56 &&
              dt < 300.0;
    char buf[128];
    std::snprintf(buf, sizeof buf, "delta5=%.4f delta2=%.4f time=%.1fs", big.value, small.value,
                  dt);
    report(5, "dimension fits", ok, buf);
}

// 6. full ensemble build at N=1e12: structure, golden ratio, ladder identities
void criterion_6() {
    auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    std::string detail;
    try {
        Ensemble e = build_ensemble(1e12, 0.05, Alphabet{1, 2}, BuildMode::relaxed, 1.0);
        const EnsembleParams& p = e.params;
        ok = e.factor_count() == size_t(2 * p.J + 1);
        for (const PreEnsemble& f : e.factors) {
            if (f.size() == 0) ok = false;
            if (!verify_pre_ensemble(f).ok()) ok = false;
            if (!verify_golden_ratio(f).ok()) ok = false;
        }
        double logn = std::log(p.n);
        for (int m = 0; ok && m <= p.J - 1; ++m) {
            double r1 = std::abs(p.log_n_of(-m) + p.log_n_of(m + 1) - logn) / logn;
            double r2 = std::abs(p.log_n_of(m + 1) - p.log_n_of(m) -
                                 p.log_n_of(-m) * p.eps0 / (1 - p.eps0)) /
                        logn;
            double r3 = std::abs(p.log_n_of(-(m + 1)) - p.log_n_of(-m) * (1 - p.eps0)) / logn;
            if (r1 > 1e-9 || r2 > 1e-9 || r3 > 1e-9) ok = false;
        }
        if (2 * p.log_n_of(0) + p.eps0 * p.log_n_of(1) < p.log_n_of(1) * (1 - 1e-9)) ok = false;
        detail = "J=" + std::to_string(p.J) + " factors=" + std::to_string(e.factor_count());
        for (const PreEnsemble& f : e.factors) detail += " |" + std::to_string(f.size()) + "|";
    } catch (const std::exception& ex) {
        ok = false;
        detail = ex.what();
    }
    double dt = seconds_since(t0);
    report(6, "ensemble build N=1e12", ok && dt < 120.0, detail + " time=" + std::to_string(dt) + "s");
}

// 7. strict mode must refuse every representable scale
void criterion_7() {
    bool ok = true;
    std::string detail = "clean refusal";
    for (double n : {1e3, 1e6, 1e9, 1e12, 1e15, 9.2e18}) {
        try {
            compute_params(n, 2e-4, Alphabet{1, 2}, BuildMode::strict);
            ok = false;
            detail = "accepted N=" + std::to_string(n);
        } catch (const infeasible_parameters&) {
            // expected: the scale bound cannot hold below 2^63
        } catch (const std::exception& ex) {
            ok = false;
            detail = ex.what();
        }
    }
    report(7, "strict-mode infeasibility", ok, detail);
}

// 8. unique expansion on a materializable ensemble, 1e6 sampled tuples
void criterion_8() {
    Ensemble e = build_ensemble(1e6, 0.1, Alphabet{1, 2}, BuildMode::relaxed, 1.0);
    UniqueExpansionReport u = verify_unique_expansion(e, 1000000, 108);
    bool ok = u.materialized && double(u.distinct_products) == u.product_cardinality &&
              u.collisions == 0;
    report(8, "unique expansion", ok,
           "cardinality=" + std::to_string(uint64_t(u.product_cardinality)) +
               " distinct=" + std::to_string(u.distinct_products) +
               " collisions=" + std::to_string(u.collisions));
}

// 9. Parseval vs 1e5-node quadrature on 100 random histograms
void criterion_9() {
    std::mt19937_64 rng(109);
    std::uniform_int_distribution<uint64_t> norm(1, 40000);
    std::uniform_int_distribution<uint64_t> mult(1, 6);
    std::uniform_int_distribution<size_t> entries(5, 60);
    size_t bad = 0;
    double worst = 0;
    const size_t nodes = 100000;
    for (int trial = 0; trial < 100; ++trial) {
        NormHistogram h;
        size_t m = entries(rng);
        for (size_t i = 0; i < m; ++i) h.add(norm(rng), mult(rng));
        double exact = to_double(l2_integral(h));
        // incremental rotation per distinct norm keeps this O(nodes * entries)
        double quad = 0;
        std::vector<std::complex<double>> rot, cur;
        for (const auto& [n, mu] : h.entries) {
            double arg = 2 * std::numbers::pi * double(n) / double(nodes);
            rot.push_back({std::cos(arg), std::sin(arg)});
            cur.push_back({double(mu), 0.0});
        }
        for (size_t i = 0; i < nodes; ++i) {
            std::complex<double> s = 0;
            for (size_t j = 0; j < cur.size(); ++j) {
                s += cur[j];
                cur[j] *= rot[j];
            }
            quad += std::norm(s);
        }
        quad /= double(nodes);
        double rel = std::abs(quad - exact) / exact;
        worst = std::max(worst, rel);
        if (rel > 1e-6) ++bad;
        if (proportion_lower_bound(h) > double(h.distinct()) * (1 + 1e-12)) ++bad;
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "worst_rel=%.2e", worst);
    report(9, "Parseval vs quadrature", bad == 0, buf);
}

// 10. census histogram of {1..5} at 1e4: bound <= independent distinct count
void criterion_10() {
    Alphabet a{1, 2, 3, 4, 5};
    NormHistogram h;
    enumerate_words(a, 10000, [&](const Word&, const ContinuantMatrix& m) {
        h.add(uint64_t(m.norm()));
    });
    CensusReport census = run_census({a, 10000, pool_threads()});
    bool ok = proportion_lower_bound(h) <= double(census.distinct_denominators) &&
              h.total == census.word_count;
    char buf[96];
    std::snprintf(buf, sizeof buf, "bound=%.1f distinct=%llu", proportion_lower_bound(h),
                  (unsigned long long)census.distinct_denominators);
    report(10, "census vs proportion bound", ok, buf);
}

// 11. frequency decomposition constraints and reconstruction, 1e6 draws
void criterion_11() {
    std::mt19937_64 rng(111);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const uint64_t n = 1000000;
    const int A = 2;
    const double q_cap = std::sqrt(double(n)) / (10.0 * A);
    size_t bad = 0;
    for (int trial = 0; trial < 1000000; ++trial) {
        double theta = unit(rng);
        ThetaDecomposition d = dirichlet_decompose(theta, n, A);
        bool here = d.q >= 1 && double(d.q) <= q_cap && d.a <= d.q &&
                    (d.a == 0 ? d.q == 1 : std::gcd(d.a, d.q) == 1) &&
                    std::abs(d.big_k) <=
                        10.0 * A * std::sqrt(double(n)) / double(d.q) * (1 + 1e-12);
        double back = d.reconstruct();
        here = here && std::abs(back - theta) <= 2 * std::abs(theta) *
                                                     std::numeric_limits<double>::epsilon() +
                                                     1e-300;
        if (!here) ++bad;
    }
    report(11, "frequency decomposition", bad == 0, "violations=" + std::to_string(bad));
}

// 12. partial-quotient averages stay under 3 * b log^2 b
void criterion_12() {
    auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    std::string detail;
    for (uint64_t b : {uint64_t(1000), uint64_t(10000), uint64_t(100000)}) {
        KnuthYaoReport r = knuth_yao_check(b);
        if (!(r.ratio < 3.0)) ok = false;
        char buf[48];
        std::snprintf(buf, sizeof buf, " ratio(%llu)=%.3f", (unsigned long long)b, r.ratio);
        detail += buf;
    }
    double dt = seconds_since(t0);
    report(12, "partial-quotient averages", ok && dt < 60.0, detail);
}

}  // namespace

int main() {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    criterion_11();
    criterion_12();
    if (failures) std::printf("%d criteria FAILED\n", failures);
    else std::printf("all criteria passed\n");
    return failures == 0 ? 0 : 1;
}
