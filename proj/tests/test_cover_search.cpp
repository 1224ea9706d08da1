#include <catch2/catch_amalgamated.hpp>

#include "known_covers.hpp"
#include "quasiperm/cover_search.hpp"

#include <set>

using namespace qp;
using testdata::canonical_keys;
using testdata::kFourTerm;
using testdata::make_cover;

namespace {

// The defining property, checked entrywise: the weighted sum of fuzzy
// matrices is the constant matrix c J, with c nonzero.
void require_exact_cover(const ConstantCover& cc) {
    FormalSum fs;
    for (const auto& [coeff, p] : cc.terms) fs.add(p, coeff);
    Mat m = fuzzy_matrix_sum(fs, cc.n);
    REQUIRE(cc.c != 0);
    for (const Rational& e : m.a) REQUIRE(e == cc.c);
    // Row-sum identity relating coefficients, orders, and the constant.
    Rational lhs(0);
    for (const auto& [coeff, p] : cc.terms)
        lhs += coeff * Rational(factorial(cc.n - 1)) / Rational(factorial(p.order() - 1));
    REQUIRE(lhs == cc.c * cc.n);
}

int ambient_of(size_t item) { return testdata::four_term_ambient(item); }

}  // namespace

TEST_CASE("two and three term cover solving") {
    auto nu = solve_cover({parse_permutation("12"), parse_permutation("21")}, 2);
    REQUIRE(nu.size() == 1);
    REQUIRE(nu[0].terms[0].first == Rational(1));
    REQUIRE(nu[0].terms[1].first == Rational(1));
    REQUIRE(nu[0].c == Rational(1));
    REQUIRE(nu[0].latin);
    require_exact_cover(nu[0]);

    auto xi = solve_cover(
        {parse_permutation("123"), parse_permutation("321"), parse_permutation("12")}, 3);
    REQUIRE(xi.size() == 1);
    ConstantCover expect_xi = make_cover({{2, "123"}, {-2, "321"}, {-3, "12"}}, 3);
    REQUIRE(xi[0].terms == expect_xi.terms);
    REQUIRE(xi[0].c == Rational(-2));
    REQUIRE_FALSE(xi[0].latin);
    require_exact_cover(xi[0]);

    // No cover on an unsuitable support.
    REQUIRE(solve_cover({parse_permutation("12"), parse_permutation("321")}, 3).empty());
}

TEST_CASE("four term cover solving") {
    auto sols = solve_cover({parse_permutation("1234"), parse_permutation("4321"),
                             parse_permutation("123"), parse_permutation("12")},
                            4);
    REQUIRE(sols.size() == 1);
    ConstantCover expect = make_cover({{3, "1234"}, {3, "4321"}, {-4, "123"}, {3, "12"}}, 4);
    REQUIRE(sols[0].terms == expect.terms);
    REQUIRE(sols[0].c == Rational(3));
    require_exact_cover(sols[0]);
}

TEST_CASE("solution spaces of dimension two") {
    // The support {123, 321, 12, 21} carries both a three-term cover and the
    // lift of 12+21, so the solution space is a plane.
    auto sols = solve_cover({parse_permutation("123"), parse_permutation("321"),
                             parse_permutation("12"), parse_permutation("21")},
                            3);
    REQUIRE(sols.size() == 2);
}

TEST_CASE("cover canonicalization") {
    ConstantCover nu = make_cover({{1, "12"}, {1, "21"}}, 2);
    detail::mark_latin(nu);
    REQUIRE(canonicalize_cover(nu) == nu);

    ConstantCover base = make_cover({{3, "1234"}, {3, "4321"}, {-4, "123"}, {3, "12"}}, 4);
    ConstantCover mirrored = make_cover({{3, "1234"}, {3, "4321"}, {-4, "321"}, {3, "21"}}, 4);
    REQUIRE(canonicalize_cover(mirrored) == canonicalize_cover(base));

    // Scaling and global negation collapse to one representative.
    ConstantCover doubled = make_cover({{6, "1234"}, {6, "4321"}, {-8, "123"}, {6, "12"}}, 4);
    ConstantCover negated = make_cover({{-3, "1234"}, {-3, "4321"}, {4, "123"}, {-3, "12"}}, 4);
    REQUIRE(canonicalize_cover(doubled) == canonicalize_cover(base));
    REQUIRE(canonicalize_cover(negated) == canonicalize_cover(base));

    ConstantCover canon = canonicalize_cover(base);
    REQUIRE(canonicalize_cover(canon) == canon);
}

TEST_CASE("catalogue expressions are exact covers") {
    for (size_t i = 0; i < kFourTerm.size(); ++i) {
        ConstantCover cc = make_cover(kFourTerm[i], ambient_of(i));
        require_exact_cover(cc);
    }
    // All fourteen are pairwise inequivalent.
    std::vector<ConstantCover> all;
    for (size_t i = 0; i < kFourTerm.size(); ++i) all.push_back(make_cover(kFourTerm[i], ambient_of(i)));
    REQUIRE(canonical_keys(all).size() == 14);
}

TEST_CASE("search profile 4432") {
    CoverSearchResult r = search_covers({4, 4, 3, 2});
    REQUIRE(r.complete);
    REQUIRE(r.covers.size() == 6);
    for (const ConstantCover& cc : r.covers) require_exact_cover(cc);

    std::vector<ConstantCover> expect;
    for (size_t i = 0; i < 6; ++i) expect.push_back(make_cover(kFourTerm[i], 4));
    REQUIRE(canonical_keys(r.covers) == canonical_keys(expect));
}

TEST_CASE("search profile 4433") {
    CoverSearchResult r = search_covers({4, 4, 3, 3});
    REQUIRE(r.complete);
    REQUIRE(r.covers.size() == 4);
    for (const ConstantCover& cc : r.covers) require_exact_cover(cc);

    std::vector<ConstantCover> expect;
    for (size_t i = 6; i < 10; ++i) expect.push_back(make_cover(kFourTerm[i], 4));
    REQUIRE(canonical_keys(r.covers) == canonical_keys(expect));
}

TEST_CASE("search profile 4444 finds latin square covers") {
    CoverSearchResult r = search_covers({4, 4, 4, 4});
    REQUIRE(r.complete);
    REQUIRE(r.covers.size() == 12);
    for (const ConstantCover& cc : r.covers) {
        REQUIRE(cc.latin);
        REQUIRE(cc.c == Rational(1));
        require_exact_cover(cc);
    }
}

TEST_CASE("search profile 5543", "[slow]") {
    CoverSearchResult r = search_covers({5, 5, 4, 3});
    REQUIRE(r.complete);
    REQUIRE(r.covers.size() == 4);
    for (const ConstantCover& cc : r.covers) require_exact_cover(cc);

    std::vector<ConstantCover> expect;
    for (size_t i = 10; i < 14; ++i) expect.push_back(make_cover(kFourTerm[i], 5));
    REQUIRE(canonical_keys(r.covers) == canonical_keys(expect));
}

TEST_CASE("three term classification") {
    // Bound survivors with three terms: search each and match the known
    // outcome. Only the latin profile (3,3,3) and the mixed profile (3,3,2)
    // produce covers.
    std::vector<LengthProfile> survivors;
    for (int n = 2; n <= 6; ++n)
        for (int k2 = 2; k2 <= n; ++k2)
            for (int k3 = 2; k3 <= k2; ++k3)
                if (profile_bounds({n, k2, k3}, n)) survivors.push_back({n, k2, k3});
    REQUIRE(survivors == std::vector<LengthProfile>{
                             {2, 2, 2}, {3, 3, 2}, {3, 3, 3}, {4, 4, 3}, {4, 4, 4}});

    REQUIRE(search_covers({2, 2, 2}).covers.empty());
    REQUIRE(search_covers({4, 4, 4}).covers.empty());
    REQUIRE(search_covers({4, 4, 3}).covers.empty());

    CoverSearchResult latin3 = search_covers({3, 3, 3});
    REQUIRE(latin3.covers.size() == 1);
    REQUIRE(latin3.covers[0].latin);

    CoverSearchResult xi = search_covers({3, 3, 2});
    REQUIRE(xi.covers.size() == 1);
    ConstantCover expect_xi = make_cover({{2, "123"}, {-2, "321"}, {-3, "12"}}, 3);
    REQUIRE(canonical_keys(xi.covers) == canonical_keys({expect_xi}));
}

TEST_CASE("reducible family reporting") {
    // {123, 321} with both order-2 permutations only yields a plane of
    // solutions, reported as a reducible family rather than a cover.
    CoverSearchResult r = search_covers({3, 3, 2, 2});
    REQUIRE(r.complete);
    REQUIRE(r.covers.empty());
    REQUIRE(r.reducible.size() == 1);
    REQUIRE(r.reducible[0].reducible);
}

TEST_CASE("search budget is enforced") {
    REQUIRE_THROWS_AS(search_covers({4, 4, 4, 4}, 10), std::runtime_error);
}

TEST_CASE("refutation of large five term profiles", "[slow]") {
    CoverSearchResult a = search_covers({6, 6, 6, 5, 4}, 100000000ULL, 3);
    REQUIRE(a.complete);
    REQUIRE(a.covers.empty());
    REQUIRE(a.reducible.empty());
    REQUIRE(a.depth_reached <= 2);

    CoverSearchResult b = search_covers({7, 7, 6, 5, 4}, 100000000ULL, 3);
    REQUIRE(b.complete);
    REQUIRE(b.covers.empty());
    REQUIRE(b.reducible.empty());
    REQUIRE(b.depth_reached <= 2);
}

TEST_CASE("five term profiles at ambient size four", "[slow]") {
    auto count = [](const LengthProfile& p) {
        CoverSearchResult r = search_covers(p);
        REQUIRE(r.complete);
        for (const ConstantCover& cc : r.covers) require_exact_cover(cc);
        return static_cast<int>(r.covers.size());
    };
    REQUIRE(count({4, 4, 3, 3, 2}) == 6);
    REQUIRE(count({4, 4, 3, 3, 3}) == 2);
    REQUIRE(count({4, 4, 4, 3, 2}) == 13);
    REQUIRE(count({4, 4, 4, 3, 3}) == 4);
    REQUIRE(count({4, 4, 4, 4, 2}) == 11);
    REQUIRE(count({4, 4, 4, 4, 3}) == 9);
}

TEST_CASE("five term profiles at ambient size five", "[slow][deep]") {
    auto count = [](const LengthProfile& p) {
        CoverSearchResult r = search_covers(p);
        REQUIRE(r.complete);
        for (const ConstantCover& cc : r.covers) require_exact_cover(cc);
        return static_cast<int>(r.covers.size());
    };
    REQUIRE(count({5, 5, 4, 3, 2}) == 13);
    REQUIRE(count({5, 5, 4, 3, 3}) == 6);
    REQUIRE(count({5, 5, 4, 4, 2}) == 7);
    REQUIRE(count({5, 5, 4, 4, 3}) == 1);
    REQUIRE(count({5, 5, 4, 4, 4}) == 2);
}

TEST_CASE("latin covers of order five", "[slow][deep]") {
    CoverSearchResult r = search_covers({5, 5, 5, 5, 5});
    REQUIRE(r.complete);
    REQUIRE(r.covers.size() == 192);
    for (const ConstantCover& cc : r.covers) {
        REQUIRE(cc.latin);
        REQUIRE(cc.c == Rational(1));
    }
    require_exact_cover(r.covers.front());
    require_exact_cover(r.covers.back());
}
