#include <catch2/catch_amalgamated.hpp>

#include "quasiperm/counting.hpp"
#include "quasiperm/permuton.hpp"

#include <map>

using namespace qp;

namespace {

// Deterministic pseudo-random perturbation with coordinates in
// {-2,-1,0,1,2}/(8n), all within the allowed 1/(4n) bound.
StepPermuton random_perturbed(int n, std::uint64_t seed) {
    SplitMix64 rng(seed);
    PerturbationVector x{n, Mat(n - 1, n - 1)};
    for (Rational& v : x.values.a)
        v = Rational(static_cast<std::int64_t>(rng.below(5)) - 2, 8 * n);
    return make_perturbed(x);
}

}  // namespace

TEST_CASE("step permuton validation") {
    REQUIRE_NOTHROW(validate_step_permuton(uniform_permuton(4)));

    Mat bad_row(2, 2);
    bad_row.at(0, 0) = Rational(3, 4);
    bad_row.at(0, 1) = Rational(3, 4);
    bad_row.at(1, 0) = Rational(1, 4);
    bad_row.at(1, 1) = Rational(1, 4);
    REQUIRE_THROWS_AS(make_step_permuton(bad_row), std::invalid_argument);

    Mat negative(2, 2);
    negative.at(0, 0) = Rational(3, 2);
    negative.at(0, 1) = Rational(-1, 2);
    negative.at(1, 0) = Rational(-1, 2);
    negative.at(1, 1) = Rational(3, 2);
    REQUIRE_THROWS_AS(make_step_permuton(negative), std::invalid_argument);

    StepPermuton diag = permutation_permuton(parse_permutation("312"));
    REQUIRE(diag.grid == 3);
    REQUIRE(diag.weights.at(0, 2) == 1);  // column 1 carries value 3
    REQUIRE(diag.weights.at(0, 0) == 0);
    REQUIRE_NOTHROW(validate_step_permuton(diag));
}

TEST_CASE("perturbed uniform permutons") {
    REQUIRE(make_perturbed(zero_perturbation(3)) == uniform_permuton(3));

    PerturbationVector x{2, Mat(1, 1)};
    x.values.at(0, 0) = Rational(1, 8);
    StepPermuton mu = make_perturbed(x);
    REQUIRE(mu.weights.at(0, 0) == Rational(5, 8));
    REQUIRE(mu.weights.at(0, 1) == Rational(3, 8));
    REQUIRE(mu.weights.at(1, 0) == Rational(3, 8));
    REQUIRE(mu.weights.at(1, 1) == Rational(5, 8));

    PerturbationVector big{2, Mat(1, 1)};
    big.values.at(0, 0) = Rational(1, 7);
    REQUIRE_THROWS_AS(make_perturbed(big), std::invalid_argument);
    big.values.at(0, 0) = Rational(-1, 7);
    REQUIRE_THROWS_AS(make_perturbed(big), std::invalid_argument);

    // All coordinates at the extreme still give a valid measure.
    PerturbationVector extreme{3, Mat(2, 2)};
    for (Rational& v : extreme.values.a) v = Rational(1, 12);
    StepPermuton edge = make_perturbed(extreme);
    REQUIRE(edge.weights.at(0, 0) == Rational(5, 12));
    REQUIRE(edge.weights.at(1, 0) == Rational(1, 3));
    REQUIRE_NOTHROW(validate_step_permuton(edge));
}

TEST_CASE("exact pattern densities of step permutons") {
    for (int k = 1; k <= 4; ++k)
        for (const Permutation& s : enumerate_sn(k))
            REQUIRE(step_density(s, uniform_permuton(3)) == Rational(1, factorial(k)));
    REQUIRE(step_density(parse_permutation("25314"), uniform_permuton(2)) ==
            Rational(1, 120));

    StepPermuton diag = permutation_permuton(parse_permutation("12"));
    REQUIRE(step_density(parse_permutation("12"), diag) == Rational(3, 4));
    REQUIRE(step_density(parse_permutation("21"), diag) == Rational(1, 4));

    SECTION("densities over a full order sum to one") {
        StepPermuton mu = random_perturbed(3, 11);
        for (int k = 2; k <= 4; ++k) {
            Rational total(0);
            for (const Permutation& s : enumerate_sn(k)) total += step_density(s, mu);
            REQUIRE(total == 1);
        }
        Rational total5(0);
        for (const Permutation& s : enumerate_sn(5))
            total5 += step_density(s, random_perturbed(2, 12));
        REQUIRE(total5 == 1);
    }

    SECTION("budget guard") {
        REQUIRE_THROWS_AS(step_density(parse_permutation("123456"), uniform_permuton(2)),
                          std::invalid_argument);
        REQUIRE_THROWS_AS(step_density(parse_permutation("12"), uniform_permuton(9)),
                          std::invalid_argument);
        REQUIRE_THROWS_AS(step_density(parse_permutation("12345"), uniform_permuton(7)),
                          std::invalid_argument);
        REQUIRE(step_density(parse_permutation("1234"), uniform_permuton(8)) == Rational(1, 24));
        REQUIRE(step_density(parse_permutation("12345"), uniform_permuton(6)) == Rational(1, 120));
    }
}

TEST_CASE("formal densities of step permutons") {
    FormalSum nu{{"12", 1}, {"21", 1}};
    REQUIRE(step_density_formal(nu, uniform_permuton(3)) == 1);
    REQUIRE(step_density_formal(nu, random_perturbed(4, 5)) == 1);

    REQUIRE(uniform_density(rho_star()) == Rational(11, 24));
    REQUIRE(step_density_formal(rho_star(), uniform_permuton(4)) == Rational(11, 24));

    // A strongly non-uniform measure pushes the statistic above its
    // quasirandom value.
    StepPermuton staircase = permutation_permuton(parse_permutation("1234"));
    REQUIRE(step_density_formal(rho_star(), staircase) > Rational(11, 24));
}

TEST_CASE("step densities are consistent with pattern projection") {
    StepPermuton mu = random_perturbed(3, 21);
    for (int k = 2; k <= 3; ++k)
        for (const Permutation& s : enumerate_sn(k))
            for (int n = k; n <= 4; ++n) {
                Rational direct = step_density(s, mu);
                Rational projected(0);
                for (const Permutation& pi : enumerate_sn(n))
                    projected += density(s, pi) * step_density(pi, mu);
                REQUIRE(direct == projected);
            }
}

TEST_CASE("symmetries act compatibly on patterns and measures") {
    StepPermuton mu = random_perturbed(3, 33);

    StepPermuton transposed = apply_symmetry(Symmetry::inverse, mu);
    REQUIRE(transposed.weights == mu.weights.transpose());
    StepPermuton mirrored = apply_symmetry(Symmetry::reverse, mu);
    REQUIRE(mirrored.weights.at(0, 1) == mu.weights.at(2, 1));

    Permutation sigma = parse_permutation("2413");
    for (Symmetry s : all_symmetries) {
        StepPermuton image = apply_symmetry(s, mu);
        REQUIRE_NOTHROW(validate_step_permuton(image));
        REQUIRE(step_density(apply_symmetry(s, sigma), image) == step_density(sigma, mu));
    }
}

TEST_CASE("sampled patterns match exact densities") {
    SplitMix64 rng(2026);
    StepPermuton mu = random_perturbed(3, 77);
    Permutation sigma = enumerate_sn(3)[rng.below(6)];
    Rational exact = step_density(sigma, mu);

    const int trials = 1'000'000;
    int hits = 0;
    for (int t = 0; t < trials; ++t)
        if (sample_pattern(mu, 3, rng) == sigma) ++hits;

    double p = to_double(exact);
    double se = std::sqrt(p * (1 - p) / trials);
    REQUIRE(std::abs(static_cast<double>(hits) / trials - p) <= 4 * se);
}

TEST_CASE("corner interpolation of step permutons") {
    StepPermuton point = uniform_permuton(1);

    SECTION("half and half of two point masses is a two-step staircase") {
        StepPermuton half = interpolate(point, point, Rational(1, 2));
        REQUIRE(half == permutation_permuton(parse_permutation("12")));
    }

    SECTION("endpoints return the inputs unchanged") {
        StepPermuton mu0 = random_perturbed(2, 1), mu1 = uniform_permuton(3);
        REQUIRE(interpolate(mu0, mu1, Rational(0)) == mu0);
        REQUIRE(interpolate(mu0, mu1, Rational(1)) == mu1);
    }

    SECTION("off-diagonal blocks carry no mass") {
        StepPermuton mix = interpolate(uniform_permuton(2), uniform_permuton(3), Rational(1, 3));
        REQUIRE(mix.grid == 18);
        const int offset = 12;  // fine cells covered by the first block
        for (int i = offset; i < 18; ++i)
            for (int j = 0; j < offset; ++j) {
                REQUIRE(mix.weights.at(i, j) == 0);
                REQUIRE(mix.weights.at(j, i) == 0);
            }
        REQUIRE_NOTHROW(validate_step_permuton(mix));
    }

    SECTION("densities split over the two blocks") {
        // With point masses in both corners the inversion density is the
        // chance both samples land in the same block, halved.
        StepPermuton quarter = interpolate(point, point, Rational(1, 4));
        REQUIRE(step_density(parse_permutation("21"), quarter) == Rational(5, 16));
        REQUIRE(step_density(parse_permutation("12"), quarter) == Rational(11, 16));
    }

    SECTION("parameter range and refinement guard") {
        REQUIRE_THROWS_AS(interpolate(point, point, Rational(-1, 2)), std::invalid_argument);
        REQUIRE_THROWS_AS(interpolate(point, point, Rational(3, 2)), std::invalid_argument);
        REQUIRE_THROWS_AS(interpolate(uniform_permuton(2), uniform_permuton(2), Rational(1, 200)),
                          std::invalid_argument);
    }
}
