#include <map>
#include <set>

#include "doctest.h"
#include "ribbon/arith.hpp"

using namespace ribbon;

namespace {

// Evaluates [a1,...,an]^- from the tail as num/den without going through Fraction.
std::pair<Int, Int> evaluate_by_hand(const std::vector<Int>& terms) {
    Int num = terms.back(), den = 1;
    for (std::size_t i = terms.size() - 1; i-- > 0;) {
        const Int next_num = terms[i] * num - den;
        den = num;
        num = next_num;
    }
    return {num, den};
}

bool cf_equal_up_to_reversal(const CFString& a, const CFString& b) { return a == b || a == b.reversed(); }

}  // namespace

TEST_CASE("continued fraction examples") {
    CHECK(cf_expand(Fraction(7, 4)).str() == "[2,4]");
    CHECK(cf_expand(Fraction(3, 1)).terms() == std::vector<Int>{3});
    CHECK(cf_expand(Fraction(8, 5)).terms() == std::vector<Int>{2, 3, 2});
    CHECK(cf_expand(Fraction(4, 3)).terms() == std::vector<Int>{2, 2, 2});
    CHECK(cf_expand(Fraction(12, 11)).rank() == 11);
    CHECK_THROWS_AS(cf_expand(Fraction(1, 1)), std::invalid_argument);
    CHECK_THROWS_AS(cf_expand(Fraction(2, 3)), std::invalid_argument);
    CHECK_THROWS_AS(CFString({3, 1}), std::invalid_argument);
}

TEST_CASE("empty string is the rank-0 value") {
    CHECK_FALSE(cf_evaluate(CFString()).has_value());
    CHECK(CFString().rank() == 0);
}

TEST_CASE("round trip against a hand evaluator") {
    for (Int p = 2; p <= 150; ++p)
        for (Int q = 1; q < p; ++q) {
            if (gcd(p, q) != 1) continue;
            const CFString s = cf_expand(Fraction(p, q));
            for (Int a : s.terms()) REQUIRE(a >= 2);
            const auto [num, den] = evaluate_by_hand(s.terms());
            REQUIRE(num == p);
            REQUIRE(den == q);
            REQUIRE(cf_evaluate(s) == Fraction(p, q));
        }
}

TEST_CASE("canonical string is the smaller of string and reversal") {
    CHECK(CFString({4, 2}).canonical() == CFString({2, 4}));
    CHECK(CFString({2, 4}).canonical() == CFString({2, 4}));
    CHECK(CFString({2, 3, 2}).canonical() == CFString({2, 3, 2}));
}

TEST_CASE("fractions reduce and order exactly") {
    CHECK(Fraction(6, 4) == Fraction(3, 2));
    CHECK(Fraction(-3, -2) == Fraction(3, 2));
    CHECK(Fraction(7, 4) > Fraction(5, 3));
    CHECK(Fraction(7, 4).str() == "7/4");
    CHECK_THROWS_AS(Fraction(1, 0), std::invalid_argument);
}

TEST_CASE("lens normalization") {
    CHECK(lens_normalize(5, 7).q() == 2);
    CHECK(lens_normalize(5, -1).q() == 4);
    CHECK(lens_normalize(1, 0).is_sphere());
    CHECK(lens_normalize(1, 0).str() == "S3");
    CHECK(lens_normalize(7, 3).str() == "L(7,3)");
    CHECK_THROWS_AS(lens_normalize(4, 2), std::invalid_argument);
    CHECK_THROWS_AS(lens_normalize(0, 1), std::invalid_argument);
    CHECK(lens_reverse(lens_normalize(7, 3)) == lens_normalize(7, 4));
    CHECK(lens_reverse(sphere()) == sphere());
}

TEST_CASE("homeomorphism: mod-p test agrees with strings up to reversal") {
    for (Int p = 2; p <= 40; ++p)
        for (Int q1 = 1; q1 < p; ++q1) {
            if (gcd(p, q1) != 1) continue;
            for (Int q2 = 1; q2 < p; ++q2) {
                if (gcd(p, q2) != 1) continue;
                const auto a = lens_normalize(p, q1), b = lens_normalize(p, q2);
                const CFString sa = cf_expand(a.fraction()), sb = cf_expand(b.fraction());
                const CFString sb_rev = cf_expand(lens_reverse(b).fraction());
                const bool oriented = cf_equal_up_to_reversal(sa, sb);
                REQUIRE(lens_homeomorphic(a, b, true) == oriented);
                REQUIRE(lens_homeomorphic(a, b, false) == (oriented || cf_equal_up_to_reversal(sa, sb_rev)));
            }
        }
    CHECK_FALSE(lens_homeomorphic(lens_normalize(5, 1), lens_normalize(7, 1), false));
}

TEST_CASE("F_n membership matches direct enumeration") {
    const Int bound = 400;
    std::map<Fraction, std::set<FnWitness>> expected;
    for (Int n = 2; n <= bound; ++n)
        for (Int m = 2; n * m * m <= bound; ++m)
            for (Int k = 1; k < m; ++k)
                if (gcd(m, k) == 1) expected[Fraction(n * m * m, n * m * k + 1)].insert({n, m, k});
    for (Int p = 2; p <= bound; ++p)
        for (Int q = 1; q < p; ++q) {
            if (gcd(p, q) != 1) continue;
            const Fraction f(p, q);
            const auto got = fn_membership(f);
            const std::set<FnWitness> got_set(got.begin(), got.end());
            REQUIRE(got.size() == got_set.size());
            const auto it = expected.find(f);
            REQUIRE(got_set == (it == expected.end() ? std::set<FnWitness>{} : it->second));
            for (const auto& w : got) {
                REQUIRE(w.n * w.m * w.m == p);
                REQUIRE(w.n * w.m * w.k + 1 == q);
                REQUIRE(fn_witness(f, w.n) == w);
            }
        }
}

TEST_CASE("F_n examples") {
    const auto w = fn_membership(Fraction(8, 5));
    REQUIRE(w.size() == 1);
    CHECK(w[0] == FnWitness{2, 2, 1});
    for (Int n = 2; n <= 60; ++n) CHECK(fn_membership(Fraction(n, 1)).empty());
    CHECK_FALSE(fn_witness(Fraction(8, 5), 3).has_value());
}

TEST_CASE("F_n is closed under inversion mod p") {
    for (Int p = 2; p <= 300; ++p)
        for (Int q = 1; q < p; ++q) {
            if (gcd(p, q) != 1) continue;
            Int inv = 1;
            while ((inv * q) % p != 1) ++inv;
            const auto a = fn_membership(Fraction(p, q));
            const auto b = fn_membership(Fraction(p, inv));
            REQUIRE(a.size() == b.size());
            for (std::size_t i = 0; i < a.size(); ++i) REQUIRE(a[i].n == b[i].n);
        }
}

TEST_CASE("homology orders and the square-ratio obstruction") {
    const auto l85 = lens_normalize(8, 5), l21 = lens_normalize(2, 1);
    CHECK(h1_order({}) == 1);
    CHECK(h1_order({l85, l21}) == 16);
    CHECK(square_ratio_check({l21}, {l85}));
    CHECK_FALSE(square_ratio_check({l85}, {l21}));
    CHECK_FALSE(square_ratio_check({}, {l21}));
    CHECK(square_ratio_check({}, {lens_normalize(9, 2)}));
    for (Int p = 1; p <= 30; ++p) CHECK(square_ratio_check({lens_normalize(p, 1)}, {lens_normalize(p, 1)}));
}

TEST_CASE("checked arithmetic") {
    CHECK(checked_mul(3, -4) == -12);
    CHECK_THROWS_AS(checked_mul(INT64_MAX, 2), std::overflow_error);
    CHECK_THROWS_AS(checked_add(INT64_MAX, 1), std::overflow_error);
    CHECK(isqrt(99) == 9);
    CHECK(is_perfect_square(144));
    CHECK_FALSE(is_perfect_square(2));
    CHECK(gcd(-12, 18) == 6);
}
