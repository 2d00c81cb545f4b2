#pragma once

/// Exact enumeration of the semigroup generated by the letter matrices:
/// word counts F(x), attained denominator sets, Zaremba verification and
/// the empirical counting-bound checks.

#include <atomic>
#include <cmath>
#include <cstdint>
#include <deque>
#include <functional>
#include <optional>
#include <thread>
#include <vector>

#include "zaremba/cf.hpp"

namespace zaremba {

// Norms in the census are capped well below 2^63 so the hot loop can stay in
// plain uint64 without per-step overflow checks.
inline constexpr uint64_t kMaxCensusBound = uint64_t(1) << 57;

struct CensusConfig {
    Alphabet alphabet;
    uint64_t limit = 1;
    unsigned threads = 1;
};

struct CensusReport {
    uint64_t limit = 0;
    uint64_t word_count = 0;            // words with <D> <= limit, multiplicity
    uint64_t distinct_denominators = 0; // distinct attained d <= limit
    std::vector<uint64_t> missing;      // d <= limit not attained, sorted
};

// ---------------------------------------------------------------------------
// Full enumeration with materialized words, for callers that need the digit
// sequences (tests, pre-ensemble construction).  Depth-first, pruned by the
// strict growth of continuants under appended digits.

template <class Visit>
void enumerate_words(const Alphabet& alphabet, uint64_t bound, Visit&& visit) {
    if (bound < 1) throw std::domain_error("enumeration bound must be >= 1");
    if (bound > kMaxCensusBound) throw std::domain_error("enumeration bound too large");
    Word word;
    ContinuantMatrix m = ContinuantMatrix::identity();
    std::vector<ContinuantMatrix> stack{m};
    std::function<void()> dfs = [&]() {
        for (int g : alphabet.letters()) {
            ContinuantMatrix next = stack.back().appended(g);
            if (next.norm() > bound) break;  // letters sorted: all later ones worse
            word.push_back(g);
            stack.push_back(next);
            visit(static_cast<const Word&>(word), static_cast<const ContinuantMatrix&>(next));
            dfs();
            stack.pop_back();
            word.pop_back();
        }
    };
    dfs();
}

// ---------------------------------------------------------------------------
// Lean parallel kernel.  Only the (c,d) column is tracked: appending digit g
// maps (c,d) -> (d, c + d*g), and the new d is the norm.  Work is split into
// DFS subtrees rooted at fixed prefixes, merged by commutative reductions, so
// reports are identical for any worker count.

namespace detail {

struct ScanCell {
    uint64_t c, d;
};

// Sequential subtree scan: bumps the bucket of the smallest grid bound >= norm
// and optionally sets the attained-denominator bit.
inline void scan_subtree(const std::vector<int>& letters, uint64_t c, uint64_t d,
                         const std::vector<uint64_t>& grid, std::vector<uint64_t>& buckets,
                         std::vector<std::atomic<uint64_t>>* bits) {
    const uint64_t bound = grid.back();
    const size_t nl = letters.size();
    // Explicit stack of (c,d) frames to keep the hot loop tight.
    struct Frame {
        uint64_t c, d;
        size_t next;
    };
    std::vector<Frame> stack;
    stack.push_back({c, d, 0});
    while (!stack.empty()) {
        Frame& f = stack.back();
        if (f.next >= nl) {
            stack.pop_back();
            continue;
        }
        uint64_t nd = f.c + f.d * uint64_t(letters[f.next]);
        ++f.next;
        if (nd > bound) {
            f.next = nl;  // sorted letters: nothing further fits
            continue;
        }
        // Most norms land in the top bucket; scan from the high end.
        size_t bi = grid.size() - 1;
        while (bi > 0 && grid[bi - 1] >= nd) --bi;
        ++buckets[bi];
        if (bits)
            (*bits)[nd >> 6].fetch_or(uint64_t(1) << (nd & 63), std::memory_order_relaxed);
        stack.push_back({f.d, nd, 0});
    }
}

}  // namespace detail

struct CensusScan {
    std::vector<uint64_t> grid;    // sorted increasing bounds
    std::vector<uint64_t> counts;  // counts[i] = #words with norm <= grid[i]
    std::vector<uint64_t> bit_words;  // attained bitset over 0..grid.back(), optional

    bool attained(uint64_t n) const {
        return (bit_words[n >> 6] >> (n & 63)) & 1;
    }
};

// One pass over the word tree, producing counts at every grid point and (when
// requested) the bitset of attained norms up to the largest grid point.
inline CensusScan census_scan(const Alphabet& alphabet, std::vector<uint64_t> grid,
                              unsigned threads = 1, bool want_bitset = false) {
    if (grid.empty()) throw std::domain_error("census grid must be nonempty");
    std::sort(grid.begin(), grid.end());
    if (grid.front() < 1) throw std::domain_error("census bounds must be >= 1");
    if (grid.back() > kMaxCensusBound) throw std::domain_error("census bound too large");
    if (threads < 1) threads = 1;

    const auto& letters = alphabet.letters();
    const uint64_t bound = grid.back();
    std::vector<uint64_t> root_buckets(grid.size(), 0);
    std::vector<std::atomic<uint64_t>> bits(want_bitset ? (bound >> 6) + 1 : 0);

    auto account = [&](uint64_t norm, std::vector<uint64_t>& buckets) {
        size_t bi = grid.size() - 1;
        while (bi > 0 && grid[bi - 1] >= norm) --bi;
        ++buckets[bi];
        if (want_bitset)
            bits[norm >> 6].fetch_or(uint64_t(1) << (norm & 63), std::memory_order_relaxed);
    };

    // Breadth-first expansion until there are enough subtree roots to share.
    const size_t target = threads == 1 ? 1 : size_t(threads) * 64;
    std::deque<detail::ScanCell> frontier{{0, 1}};
    while (frontier.size() < target) {
        bool grew = false;
        size_t level = frontier.size();
        for (size_t i = 0; i < level; ++i) {
            detail::ScanCell cell = frontier.front();
            frontier.pop_front();
            for (int g : letters) {
                uint64_t nd = cell.c + cell.d * uint64_t(g);
                if (nd > bound) break;
                account(nd, root_buckets);
                frontier.push_back({cell.d, nd});
                grew = true;
            }
        }
        if (!grew) break;
    }

    std::vector<std::vector<uint64_t>> worker_buckets(threads,
                                                      std::vector<uint64_t>(grid.size(), 0));
    std::vector<std::thread> pool;
    std::atomic<size_t> next_root{0};
    std::vector<detail::ScanCell> roots(frontier.begin(), frontier.end());
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&, t]() {
            for (;;) {
                size_t i = next_root.fetch_add(1, std::memory_order_relaxed);
                if (i >= roots.size()) break;
                detail::scan_subtree(letters, roots[i].c, roots[i].d, grid, worker_buckets[t],
                                     want_bitset ? &bits : nullptr);
            }
        });
    }
    for (auto& th : pool) th.join();

    CensusScan out;
    out.grid = grid;
    out.counts.assign(grid.size(), 0);
    uint64_t acc = 0;
    for (size_t i = 0; i < grid.size(); ++i) {
        acc += root_buckets[i];
        for (unsigned t = 0; t < threads; ++t) acc += worker_buckets[t][i];
        out.counts[i] = acc;
    }
    if (want_bitset) {
        out.bit_words.resize(bits.size());
        for (size_t i = 0; i < bits.size(); ++i)
            out.bit_words[i] = bits[i].load(std::memory_order_relaxed);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Spec-level operations.

inline uint64_t word_count_F(const Alphabet& alphabet, uint64_t x, unsigned threads = 1) {
    if (x < 1) throw std::domain_error("word count bound must be >= 1");
    return census_scan(alphabet, {x}, threads, false).counts[0];
}

inline std::vector<uint64_t> denominator_bitset(const Alphabet& alphabet, uint64_t n,
                                                unsigned threads = 1) {
    return census_scan(alphabet, {n}, threads, true).bit_words;
}

inline CensusReport run_census(const CensusConfig& cfg) {
    CensusScan scan = census_scan(cfg.alphabet, {cfg.limit}, cfg.threads, true);
    CensusReport r;
    r.limit = cfg.limit;
    r.word_count = scan.counts[0];
    for (uint64_t d = 1; d <= cfg.limit; ++d) {
        if (scan.attained(d))
            ++r.distinct_denominators;
        else
            r.missing.push_back(d);
    }
    return r;
}

// First denominator <= n not attained over the alphabet, or nullopt.
inline std::optional<uint64_t> zaremba_verify(const Alphabet& alphabet, uint64_t n,
                                              unsigned threads = 1) {
    CensusScan scan = census_scan(alphabet, {n}, threads, true);
    for (uint64_t d = 1; d <= n; ++d)
        if (!scan.attained(d)) return d;
    return std::nullopt;
}

// Empirical check of the three counting inequalities
//   (1/(32 A^4)) x^{2 delta} <= F(x) - F(x/(4 A^2)) <= F(x) <= 8 x^{2 delta}
// valid for x >= 4 A^2 when the dimension exceeds 1/2.
struct KanHenVerdict {
    double x = 0;
    double delta = 0;
    uint64_t count_x = 0;       // F(x)
    uint64_t count_reduced = 0; // F(x / (4 A^2))
    bool upper_ok = false;      // F(x) <= 8 x^{2 delta}
    bool diff_ok = false;       // F(x) - F(x/(4A^2)) <= F(x)
    bool lower_ok = false;      // x^{2 delta} / (32 A^4) <= F(x) - F(x/(4A^2))
    double ratio = 0;           // F(x) / x^{2 delta}

    bool all_ok() const { return upper_ok && diff_ok && lower_ok; }
};

inline KanHenVerdict check_kan_hen(const Alphabet& alphabet, uint64_t x, double delta,
                                   unsigned threads = 1) {
    const double A = alphabet.max_letter();
    if (double(x) < 4 * A * A)
        throw std::domain_error("counting-bound check needs x >= 4 A^2");
    if (!(delta > 0.5 && delta < 1.0))
        throw std::domain_error("counting-bound check needs delta in (1/2, 1)");
    uint64_t x_red = uint64_t(double(x) / (4 * A * A));
    CensusScan scan = census_scan(alphabet, {std::max<uint64_t>(x_red, 1), x}, threads, false);
    KanHenVerdict v;
    v.x = double(x);
    v.delta = delta;
    v.count_reduced = x_red >= 1 ? scan.counts[0] : 0;
    v.count_x = scan.counts.back();
    double pw = std::pow(double(x), 2 * delta);
    double diff = double(v.count_x) - double(v.count_reduced);
    v.upper_ok = double(v.count_x) <= 8 * pw;
    v.diff_ok = diff <= double(v.count_x);
    v.lower_ok = pw / (32 * A * A * A * A) <= diff;
    v.ratio = double(v.count_x) / pw;
    return v;
}

}  // namespace zaremba
