#include <catch2/catch_amalgamated.hpp>

#include "quasiperm/fuzzy.hpp"

using namespace qp;

TEST_CASE("f_poly values and range checks") {
    // C(x-1,j-1) C(n-x,k-j) with k=4, j=1, n=6, x=1: C(0,0) C(5,3) = 10.
    REQUIRE(f_poly(4, 1, 6, 1) == Rational(10));
    REQUIRE(f_poly(4, 3, 6, 2) == Rational(0));  // x below j kills the first factor
    REQUIRE(f_poly(3, 3, 5, 5) == Rational(6));  // C(4,2) C(0,0)
    REQUIRE(f_poly(2, 1, 2, 1) == Rational(1));

    // Vandermonde: summing over j gives C(n-1, k-1) independent of x.
    for (int n = 2; n <= 8; ++n)
        for (int k = 1; k <= n; ++k)
            for (int x = 1; x <= n; ++x) {
                Rational s(0);
                for (int j = 1; j <= k; ++j) s += f_poly(k, j, n, x);
                REQUIRE(s == Rational(binomial(n - 1, k - 1)));
            }

    REQUIRE_THROWS_AS(f_poly(3, 0, 5, 1), std::invalid_argument);
    REQUIRE_THROWS_AS(f_poly(3, 4, 5, 1), std::invalid_argument);
    REQUIRE_THROWS_AS(f_poly(6, 2, 5, 1), std::invalid_argument);
    REQUIRE_THROWS_AS(f_poly(3, 2, 5, 0), std::invalid_argument);
    REQUIRE_THROWS_AS(f_poly(3, 2, 5, 6), std::invalid_argument);
}

TEST_CASE("fuzzy matrix reduces to the permutation matrix at full order") {
    for (int k = 2; k <= 5; ++k)
        for (const Permutation& s : enumerate_sn(k)) {
            Mat f = fuzzy_matrix(s, k);
            for (int x = 1; x <= k; ++x)
                for (int y = 1; y <= k; ++y)
                    REQUIRE(f.at(x - 1, y - 1) == Rational(y == s(x) ? 1 : 0));
        }
}

TEST_CASE("fuzzy matrix row and column sums") {
    for (int k = 2; k <= 4; ++k)
        for (int n = k; n <= 7; ++n)
            for (const Permutation& s : enumerate_sn(k)) {
                Mat f = fuzzy_matrix(s, n);
                Rational expect = Rational(factorial(n - 1)) / Rational(factorial(k - 1));
                for (int i = 0; i < n; ++i) {
                    Rational row(0), col(0);
                    for (int j = 0; j < n; ++j) {
                        row += f.at(i, j);
                        col += f.at(j, i);
                    }
                    REQUIRE(row == expect);
                    REQUIRE(col == expect);
                }
            }
}

TEST_CASE("fuzzy matrix first row support and value multiplicity") {
    // Row 1 keeps n-k+1 nonzero entries, and no nonzero value appears in it
    // more than twice.
    for (int k = 2; k <= 6; ++k)
        for (int n = k; n <= 8; ++n)
            for (const Permutation& s : enumerate_sn(k)) {
                Mat f = fuzzy_matrix(s, n);
                std::map<Rational, int> row_values;
                int nonzeros = 0;
                for (int y = 0; y < n; ++y) {
                    if (f.at(0, y) == 0) continue;
                    ++nonzeros;
                    ++row_values[f.at(0, y)];
                }
                REQUIRE(nonzeros == n - k + 1);
                for (const auto& [value, count] : row_values) REQUIRE(count <= 2);
            }
}

TEST_CASE("fuzzy matrix of a formal sum is the coefficient combination") {
    FormalSum rho;
    rho.add(parse_permutation("12"), Rational(2));
    rho.add(parse_permutation("231"), Rational(-1, 3));
    Mat m = fuzzy_matrix_sum(rho, 5);
    Mat a = fuzzy_matrix(parse_permutation("12"), 5);
    Mat b = fuzzy_matrix(parse_permutation("231"), 5);
    for (int e = 0; e < 25; ++e)
        REQUIRE(m.a[e] == Rational(2) * a.a[e] + Rational(-1, 3) * b.a[e]);
}

TEST_CASE("pattern averaged matrix examples") {
    Mat a = cover_matrix(parse_permutation("12"), 3);
    REQUIRE(a.at(0, 0) == Rational(5, 3));

    // At n = k the average collapses to the single permutation matrix.
    for (const Permutation& s : enumerate_sn(3)) {
        Mat m = cover_matrix(s, 3);
        for (int x = 1; x <= 3; ++x)
            for (int y = 1; y <= 3; ++y)
                REQUIRE(m.at(x - 1, y - 1) == Rational(y == s(x) ? 1 : 0));
    }

    // Row sums count all pattern occurrences: n!/k!.
    Mat m = cover_matrix(parse_permutation("231"), 5);
    for (int i = 0; i < 5; ++i) {
        Rational row(0);
        for (int j = 0; j < 5; ++j) row += m.at(i, j);
        REQUIRE(row == Rational(factorial(5)) / Rational(factorial(3)));
    }
}

TEST_CASE("averaged matrix splits into fuzzy part plus constant") {
    REQUIRE(decompose_fto_a(parse_permutation("12"), 3) == Rational(1, 3));
    REQUIRE(decompose_fto_a(parse_permutation("321"), 3) == Rational(0));
    REQUIRE(decompose_fto_a(parse_permutation("1234"), 4) == Rational(0));

    for (int k = 2; k <= 4; ++k)
        for (const Permutation& s : enumerate_sn(k))
            for (int n = k; n <= 6; ++n) {
                Rational expect = Rational(factorial(n - 1)) / Rational(factorial(k - 1)) *
                                  (Rational(1, k) - Rational(1, n));
                REQUIRE(decompose_fto_a(s, n) == expect);
            }
}

TEST_CASE("zero and repeat counts") {
    Mat j(3, 3);
    for (Rational& x : j.a) x = Rational(7);
    REQUIRE(zero_count(j) == 0);
    REQUIRE(repeat_count(j) == 9);

    Mat z(3, 3);
    REQUIRE(zero_count(z) == 9);
    REQUIRE(repeat_count(z) == 0);

    Mat m(2, 2);
    m.at(0, 0) = Rational(1);
    m.at(0, 1) = Rational(1);
    m.at(1, 0) = Rational(2);
    REQUIRE(zero_count(m) == 1);
    REQUIRE(repeat_count(m) == 2);
}

TEST_CASE("largest repeat count of a single fuzzy matrix") {
    // max over patterns of order k of the repeat count at ambient size n.
    auto table_value = [](int k, int n) {
        int best = 0;
        for (const Permutation& s : enumerate_sn(k))
            best = std::max(best, repeat_count(fuzzy_matrix(s, n)));
        return best;
    };
    SECTION("ambient size 4") {
        REQUIRE(table_value(2, 4) == 4);
        REQUIRE(table_value(3, 4) == 4);
        REQUIRE(table_value(4, 4) == 4);
    }
    SECTION("ambient size 5") {
        REQUIRE(table_value(2, 5) == 9);
        REQUIRE(table_value(3, 5) == 7);
        REQUIRE(table_value(4, 5) == 4);
        REQUIRE(table_value(5, 5) == 5);
    }
    SECTION("ambient size 6") {
        REQUIRE(table_value(2, 6) == 4);
        REQUIRE(table_value(3, 6) == 8);
        REQUIRE(table_value(4, 6) == 8);
        REQUIRE(table_value(5, 6) == 5);
        REQUIRE(table_value(6, 6) == 6);
    }
}

TEST_CASE("largest repeat count over pairs of averaged matrices") {
    REQUIRE(pair_repeat_max(4, 2, 6) == 12);
    REQUIRE(pair_repeat_max(4, 3, 6) == 20);
    REQUIRE(pair_repeat_max(4, 4, 6) == 12);
    REQUIRE_THROWS_AS(pair_repeat_max(4, 2, 5), std::invalid_argument);
}

TEST_CASE("largest repeat count over pairs involving order five", "[slow]") {
    REQUIRE(pair_repeat_max(5, 2, 6) == 12);
    REQUIRE(pair_repeat_max(5, 3, 6) == 12);
    REQUIRE(pair_repeat_max(5, 4, 6) == 16);
    REQUIRE(pair_repeat_max(5, 5, 6) == 9);
}

TEST_CASE("repeat count dominates zero count across constant splits") {
    // If A + B is a nonzero constant matrix, every zero of B sits where A
    // equals that constant, so the repeat count of A is at least the zero
    // count of B.
    std::uint64_t state = 12345;
    auto next = [&state]() {
        state = state * 6364136223846793005ULL + 1442695040888963407ULL;
        return static_cast<int>((state >> 33) % 5);
    };
    for (int trial = 0; trial < 50; ++trial) {
        Mat a(4, 4);
        for (Rational& x : a.a) x = Rational(next());
        Rational c(3);
        Mat b(4, 4);
        for (int e = 0; e < 16; ++e) b.a[e] = c - a.a[e];
        REQUIRE(repeat_count(a) >= zero_count(b));
    }
}

TEST_CASE("profile admissibility bounds") {
    REQUIRE(profile_bounds({4, 4, 3, 2}, 4));
    REQUIRE(profile_bounds({5, 5, 5, 4}, 5));
    REQUIRE(profile_bounds({5, 5, 5, 3}, 5));
    REQUIRE(profile_bounds({6, 6, 6, 5, 4}, 6));
    REQUIRE(profile_bounds({7, 7, 6, 5, 4}, 7));
    REQUIRE(profile_bounds({4, 4, 4, 4, 2}, 4));
    REQUIRE(profile_bounds({5, 5, 5, 5, 5}, 5));

    // Largest order must match the ambient size.
    REQUIRE_FALSE(profile_bounds({4, 4, 3, 2}, 5));
    // Second order is forced up to the ambient size.
    REQUIRE_FALSE(profile_bounds({5, 4, 4, 3}, 5));
    // Degree bound at the fourth slot: 5+1-3 = 3.
    REQUIRE_FALSE(profile_bounds({5, 5, 5, 2}, 5));
    // Five-term profiles at ambient size 11 never pass the first-row bound.
    for (int k5 = 2; k5 <= 8; ++k5)
        REQUIRE_FALSE(profile_bounds({11, 11, 10, 8, k5}, 11));

    // Ill-formed profiles fail rather than throw.
    REQUIRE_FALSE(profile_bounds({4}, 4));
    REQUIRE_FALSE(profile_bounds({4, 4, 5}, 4));
    REQUIRE_FALSE(profile_bounds({4, 4, 1}, 4));
    REQUIRE_FALSE(profile_bounds({4, 4, 3, 3, 2, 2}, 4));
}
