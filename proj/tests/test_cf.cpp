#include <doctest.h>

#include <random>

#include "zaremba/cf.hpp"

using namespace zaremba;

namespace {

Word random_word(std::mt19937_64& rng, int max_letter, size_t max_len, bool allow_empty = true) {
    std::uniform_int_distribution<size_t> len(allow_empty ? 0 : 1, max_len);
    std::uniform_int_distribution<int> digit(1, max_letter);
    std::vector<int> d(len(rng));
    for (int& x : d) x = digit(rng);
    return Word(std::move(d));
}

}  // namespace

TEST_CASE("alphabet parsing and validation") {
    Alphabet r = Alphabet::parse("1-5");
    CHECK(r.letters() == std::vector<int>{1, 2, 3, 4, 5});
    Alphabet l = Alphabet::parse("1,2,4");
    CHECK(l.letters() == std::vector<int>{1, 2, 4});
    CHECK(l.contains(4));
    CHECK(!l.contains(3));
    CHECK(l.max_letter() == 4);
    CHECK(Alphabet({3, 2, 2, 5}).letters() == std::vector<int>{2, 3, 5});
    CHECK_THROWS_AS(Alphabet({2}), std::domain_error);
    CHECK_THROWS_AS(Alphabet({0, 1}), std::domain_error);
    CHECK_THROWS_AS(Alphabet::parse("5-1"), std::domain_error);
}

TEST_CASE("continuant base cases and recurrence") {
    CHECK(continuant(Word{}) == 1);
    CHECK(continuant(Word{7}) == 7);
    CHECK(continuant(Word{2, 1, 3}) == 11);
    CHECK(continuant(Word{1, 1, 1, 1, 1}) == 8);  // Fibonacci
    // recurrence directly
    Word w{3, 1, 4, 1, 5, 9, 2};
    u128 direct = continuant(w);
    u128 rec = checked_add(checked_mul(continuant(w.drop_last()), u128(w[w.size() - 1])),
                           continuant(w.drop_last().drop_last()));
    CHECK(direct == rec);
}

TEST_CASE("mirror symmetry") {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 2000; ++i) {
        Word w = random_word(rng, 10, 20);
        CHECK(continuant(w) == continuant(reverse(w)));
    }
}

TEST_CASE("concatenation identity and sandwich inequality") {
    std::mt19937_64 rng(11);
    // both parts nonempty: the identity needs a well-defined dropped digit
    for (int i = 0; i < 2000; ++i) {
        Word d = random_word(rng, 10, 15, false);
        Word b = random_word(rng, 10, 15, false);
        u128 lhs = continuant(concat(d, b));
        u128 rhs = checked_add(checked_mul(continuant(d), continuant(b)),
                               checked_mul(continuant(d.drop_last()), continuant(b.drop_first())));
        CHECK(lhs == rhs);
        u128 prod = checked_mul(continuant(d), continuant(b));
        CHECK(prod <= lhs);
        CHECK(lhs <= 2 * prod);
    }
}

TEST_CASE("matrix correspondence: entries, norm, determinant") {
    std::mt19937_64 rng(13);
    for (int i = 0; i < 2000; ++i) {
        Word w = random_word(rng, 10, 18);
        ContinuantMatrix m = word_to_matrix(w);
        // entry = continuant of a sub-word; the interior entry needs k >= 2
        if (w.size() >= 2) {
            CHECK(m.a == continuant(w.drop_first().drop_last()));
            CHECK(m.b == continuant(w.drop_first()));
            CHECK(m.c == continuant(w.drop_last()));
        }
        CHECK(m.d == continuant(w));
        CHECK(m.norm() == continuant(w));
        // det = ad - bc = (-1)^k, checked without signed 128-bit arithmetic
        u128 ad = checked_mul(m.a, m.d);
        u128 bc = checked_mul(m.b, m.c);
        if (w.size() % 2 == 0) {
            CHECK(ad == bc + 1);
            CHECK(m.det_sign() == 1);
        } else {
            CHECK(bc == ad + 1);
            CHECK(m.det_sign() == -1);
        }
    }
}

TEST_CASE("matrix product matches word concatenation") {
    std::mt19937_64 rng(17);
    for (int i = 0; i < 500; ++i) {
        Word d = random_word(rng, 10, 12);
        Word b = random_word(rng, 10, 12);
        CHECK(word_to_matrix(d) * word_to_matrix(b) == word_to_matrix(concat(d, b)));
    }
    CHECK(ContinuantMatrix::identity() * ContinuantMatrix::letter(3) ==
          ContinuantMatrix::letter(3));
}

TEST_CASE("continued fraction values and canonical expansion") {
    CHECK(cf_value(Word{1, 2}) == Fraction(2, 3));
    CHECK(cf_value(Word{2, 1, 3}) == Fraction(4, 11));
    CHECK(cf_expand(Fraction(5, 7)).digits() == std::vector<int>{1, 2, 2});
    CHECK(cf_expand(Fraction(1, 1)).digits() == std::vector<int>{1});
    CHECK(cf_value(cf_expand(Fraction(355, 452))) == Fraction(355, 452));
    CHECK_THROWS_AS(cf_expand(Fraction(0, 5)), std::domain_error);
    CHECK_THROWS_AS(Fraction(1, 0), std::domain_error);
    // round trip both ways on random reduced fractions
    std::mt19937_64 rng(19);
    std::uniform_int_distribution<uint64_t> pick(2, 1000000);
    for (int i = 0; i < 500; ++i) {
        uint64_t den = pick(rng);
        uint64_t num = 1 + pick(rng) % (den - 1);
        Fraction f(num, den);
        Word w = cf_expand(f);
        CHECK(cf_value(w) == f);
        CHECK(w[w.size() - 1] >= (w.size() == 1 && f == Fraction(1, 1) ? 1 : 2));
    }
}

TEST_CASE("partial quotient sums") {
    CHECK(sum_partial_quotients(Fraction(1, 2)) == 2);
    CHECK(sum_partial_quotients(Fraction(5, 7)) == 5);
    CHECK(sum_partial_quotients(Fraction(1, 1)) == 1);
}

TEST_CASE("overflow detection") {
    Word w;
    for (int i = 0; i < 200; ++i) w.push_back(1000000000);
    CHECK_THROWS_AS(continuant(w), overflow_error);
}
