#pragma once

/// Exact arithmetic for words of partial quotients, continuants, continued
/// fraction values and the word <-> 2x2 matrix correspondence.

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "zaremba/checked.hpp"

namespace zaremba {

// ---------------------------------------------------------------------------
// Alphabet: the allowed partial quotients, at least two of them, all >= 1.

class Alphabet {
  public:
    explicit Alphabet(std::vector<int> letters) : letters_(std::move(letters)) {
        std::sort(letters_.begin(), letters_.end());
        letters_.erase(std::unique(letters_.begin(), letters_.end()), letters_.end());
        if (letters_.size() < 2)
            throw std::domain_error("alphabet needs at least 2 distinct letters");
        if (letters_.front() < 1)
            throw std::domain_error("alphabet letters must be positive");
    }

    Alphabet(std::initializer_list<int> letters) : Alphabet(std::vector<int>(letters)) {}

    // "lo-hi" for contiguous ranges, "a,b,c" for explicit lists.
    static Alphabet parse(const std::string& spec) {
        std::vector<int> letters;
        auto dash = spec.find('-');
        if (dash != std::string::npos && spec.find(',') == std::string::npos) {
            int lo = std::stoi(spec.substr(0, dash));
            int hi = std::stoi(spec.substr(dash + 1));
            if (lo < 1 || hi < lo) throw std::domain_error("bad alphabet range: " + spec);
            for (int a = lo; a <= hi; ++a) letters.push_back(a);
        } else {
            size_t pos = 0;
            while (pos < spec.size()) {
                size_t next = spec.find(',', pos);
                if (next == std::string::npos) next = spec.size();
                letters.push_back(std::stoi(spec.substr(pos, next - pos)));
                pos = next + 1;
            }
        }
        return Alphabet(std::move(letters));
    }

    const std::vector<int>& letters() const { return letters_; }
    int max_letter() const { return letters_.back(); }
    int min_letter() const { return letters_.front(); }
    bool contains(int d) const {
        return std::binary_search(letters_.begin(), letters_.end(), d);
    }
    bool operator==(const Alphabet&) const = default;

  private:
    std::vector<int> letters_;
};

// ---------------------------------------------------------------------------
// Word: a finite sequence of partial quotients.  Empty word allowed.

class Word {
  public:
    Word() = default;
    Word(std::initializer_list<int> digits) : Word(std::vector<int>(digits)) {}
    explicit Word(std::vector<int> digits) : digits_(std::move(digits)) {
        for (int d : digits_)
            if (d < 1) throw std::domain_error("word digits must be >= 1");
    }

    size_t size() const { return digits_.size(); }
    bool empty() const { return digits_.empty(); }
    int operator[](size_t i) const { return digits_[i]; }
    const std::vector<int>& digits() const { return digits_; }
    void push_back(int d) {
        if (d < 1) throw std::domain_error("word digits must be >= 1");
        digits_.push_back(d);
    }
    void pop_back() { digits_.pop_back(); }
    auto begin() const { return digits_.begin(); }
    auto end() const { return digits_.end(); }
    bool operator==(const Word&) const = default;

    // D_{-}: drop the first digit.
    Word drop_first() const {
        return empty() ? Word{} : Word(std::vector<int>(digits_.begin() + 1, digits_.end()));
    }
    // D^{-}: drop the last digit.
    Word drop_last() const {
        return empty() ? Word{} : Word(std::vector<int>(digits_.begin(), digits_.end() - 1));
    }

  private:
    std::vector<int> digits_;
};

inline Word reverse(const Word& w) {
    std::vector<int> d(w.digits().rbegin(), w.digits().rend());
    return Word(std::move(d));
}

inline Word concat(const Word& a, const Word& b) {
    std::vector<int> d = a.digits();
    d.insert(d.end(), b.begin(), b.end());
    return Word(std::move(d));
}

// ---------------------------------------------------------------------------
// Continuant <D>: <> = 1, <d1> = d1, <d1..dk> = <d1..d_{k-1}> dk + <d1..d_{k-2}>.

inline u128 continuant(const Word& w) {
    u128 prev = 0, cur = 1;  // <d1..d_{k-2}>, <d1..d_{k-1}> with seeds <>=1
    for (int d : w) {
        u128 next = checked_add(checked_mul(cur, static_cast<u128>(d)), prev);
        prev = cur;
        cur = next;
    }
    return cur;
}

// ---------------------------------------------------------------------------
// ContinuantMatrix: the product of letter matrices [[0,1],[1,d]].  Entries are
// continuants of sub-words, determinant is (-1)^k, the norm is the d entry.

struct ContinuantMatrix {
    u128 a = 1, b = 0, c = 0, d = 1;
    unsigned parity = 0;  // word length mod 2

    static ContinuantMatrix identity() { return {}; }

    static ContinuantMatrix letter(int digit) {
        if (digit < 1) throw std::domain_error("letter must be >= 1");
        return {0, 1, 1, static_cast<u128>(digit), 1};
    }

    u128 norm() const { return d; }
    int det_sign() const { return parity % 2 == 0 ? 1 : -1; }

    ContinuantMatrix operator*(const ContinuantMatrix& o) const {
        return {checked_add(checked_mul(a, o.a), checked_mul(b, o.c)),
                checked_add(checked_mul(a, o.b), checked_mul(b, o.d)),
                checked_add(checked_mul(c, o.a), checked_mul(d, o.c)),
                checked_add(checked_mul(c, o.b), checked_mul(d, o.d)),
                (parity + o.parity) % 2};
    }

    // Append one digit on the right: two mul-adds, cheaper than full multiply.
    ContinuantMatrix appended(int digit) const {
        u128 g = static_cast<u128>(digit);
        return {b, checked_add(a, checked_mul(b, g)),
                d, checked_add(c, checked_mul(d, g)),
                (parity + 1) % 2};
    }

    bool operator==(const ContinuantMatrix& o) const {
        return a == o.a && b == o.b && c == o.c && d == o.d;
    }
};

inline ContinuantMatrix word_to_matrix(const Word& w) {
    ContinuantMatrix m = ContinuantMatrix::identity();
    for (int d : w) m = m.appended(d);
    return m;
}

// ---------------------------------------------------------------------------
// Fraction: reduced nonnegative rational.  Continued fraction values live in
// [0,1]; coprimality of <D_-> and <D> makes reduction a no-op there.

struct Fraction {
    u128 num = 0, den = 1;

    Fraction() = default;
    Fraction(u128 n, u128 d) : num(n), den(d) {
        if (den == 0) throw std::domain_error("zero denominator");
        u128 g = gcd128(num == 0 ? den : num, den);
        num /= g;
        den /= g;
    }

    bool operator==(const Fraction&) const = default;
    double value() const { return to_double(num) / to_double(den); }
};

// [D] = <D_->/<D>, via the matrix correspondence (b/d).
inline Fraction cf_value(const Word& w) {
    if (w.empty()) throw std::domain_error("cf_value of empty word");
    ContinuantMatrix m = word_to_matrix(w);
    return Fraction(m.b, m.d);
}

// Canonical expansion of a reduced fraction in (0,1]: Euclid's algorithm.
// The last digit is >= 2 automatically except for the single word (1).
inline Word cf_expand(const Fraction& f) {
    if (f.num == 0) throw std::domain_error("cf_expand needs a nonzero fraction");
    if (f.num > f.den) throw std::domain_error("cf_expand needs a value in (0,1]");
    std::vector<int> digits;
    u128 a = f.den, b = f.num;
    while (b != 0) {
        u128 q = a / b;
        u128 r = a % b;
        digits.push_back(static_cast<int>(q));
        a = b;
        b = r;
    }
    return Word(std::move(digits));
}

// s(alpha): sum of partial quotients of the canonical expansion.
inline u128 sum_partial_quotients(const Fraction& f) {
    u128 s = 0;
    for (int d : cf_expand(f)) s += static_cast<u128>(d);
    return s;
}

}  // namespace zaremba
