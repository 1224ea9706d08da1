#pragma once

// Step permutons: probability measures on the unit square that are uniform
// on the cells of an n-by-n grid, encoded by a doubly stochastic weight
// matrix. Cell (i, j) sits at x in [(i-1)/n, i/n], y in [(j-1)/n, j/n]
// (first index = column) and carries mass weights(i,j)/n. Pattern densities
// are computed exactly.

#include "quasiperm/matrix.hpp"
#include "quasiperm/permutation.hpp"
#include "quasiperm/rng.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>

namespace qp {

struct StepPermuton {
    int grid = 1;
    Mat weights{1, 1};
    bool operator==(const StepPermuton&) const = default;
};

inline void validate_step_permuton(const StepPermuton& mu) {
    const int n = mu.grid;
    if (n < 1 || mu.weights.r != n || mu.weights.c != n)
        throw std::invalid_argument("step permuton: weight matrix must match the grid");
    for (const Rational& w : mu.weights.a)
        if (w < 0) throw std::invalid_argument("step permuton: negative weight");
    for (int i = 0; i < n; ++i) {
        Rational row(0), col(0);
        for (int j = 0; j < n; ++j) {
            row += mu.weights.at(i, j);
            col += mu.weights.at(j, i);
        }
        if (row != 1 || col != 1)
            throw std::invalid_argument("step permuton: weights must be doubly stochastic");
    }
}

inline StepPermuton make_step_permuton(Mat weights) {
    StepPermuton mu{weights.r, std::move(weights)};
    validate_step_permuton(mu);
    return mu;
}

inline StepPermuton uniform_permuton(int n) {
    Mat w(n, n);
    for (Rational& e : w.a) e = Rational(1, n);
    return {n, std::move(w)};
}

// The permuton whose mass sits on the cells (i, p(i)) of a permutation
// matrix: a blown-up, staircase version of p.
inline StepPermuton permutation_permuton(const Permutation& p) {
    const int n = p.order();
    Mat w(n, n);
    for (int i = 1; i <= n; ++i) w.at(i - 1, p(i) - 1) = Rational(1);
    return {n, std::move(w)};
}

// Perturbation coordinates x_{i,j}, 1 <= i,j <= n-1, each within
// [-1/(4n), 1/(4n)] so that the perturbed matrix stays nonnegative.
struct PerturbationVector {
    int n = 2;
    Mat values{1, 1};  // (n-1) x (n-1)
};

inline PerturbationVector zero_perturbation(int n) { return {n, Mat(n - 1, n - 1)}; }

// (1/n) J + sum x_{i,j} B_{i,j} where B_{i,j} adds mass at cells (i,j) and
// (i+1,j+1) and removes it at (i+1,j) and (i,j+1); positive coordinates
// favor ascents.
inline StepPermuton make_perturbed(const PerturbationVector& x) {
    const int n = x.n;
    if (n < 2 || x.values.r != n - 1 || x.values.c != n - 1)
        throw std::invalid_argument("perturbation: values must be (n-1) x (n-1)");
    const Rational bound(1, 4 * n);
    Mat w(n, n);
    for (Rational& e : w.a) e = Rational(1, n);
    for (int i = 1; i <= n - 1; ++i)
        for (int j = 1; j <= n - 1; ++j) {
            const Rational& v = x.values.at(i - 1, j - 1);
            if (v > bound || v < -bound)
                throw std::invalid_argument("perturbation: coordinate exceeds 1/(4n)");
            w.at(i - 1, j - 1) += v;
            w.at(i, j) += v;
            w.at(i, j - 1) -= v;
            w.at(i - 1, j) -= v;
        }
    StepPermuton mu{n, std::move(w)};
    validate_step_permuton(mu);
    return mu;
}

// Symmetry action matching the one on permutations: reversing a pattern
// mirrors columns, complementing mirrors rows, inverting transposes.
inline StepPermuton apply_symmetry(Symmetry s, const StepPermuton& mu) {
    const int n = mu.grid;
    Mat w(n, n);
    for (int x = 1; x <= n; ++x)
        for (int y = 1; y <= n; ++y) {
            Rational v;
            switch (s) {
                case Symmetry::identity: v = mu.weights.at(x - 1, y - 1); break;
                case Symmetry::reverse: v = mu.weights.at(n - x, y - 1); break;
                case Symmetry::complement: v = mu.weights.at(x - 1, n - y); break;
                case Symmetry::rot180: v = mu.weights.at(n - x, n - y); break;
                case Symmetry::inverse: v = mu.weights.at(y - 1, x - 1); break;
                case Symmetry::rot90: v = mu.weights.at(y - 1, n - x); break;
                case Symmetry::rot270: v = mu.weights.at(n - y, x - 1); break;
                case Symmetry::antitranspose: v = mu.weights.at(n - y, n - x); break;
            }
            w.at(x - 1, y - 1) = v;
        }
    return {n, std::move(w)};
}

namespace detail {

// Weakly increasing sequences over 1..n of length k, each with the count of
// orderings it represents: k! divided by the factorials of its run lengths.
struct WeakSeq {
    std::array<int, 5> v;
    std::int64_t orderings;
};

inline std::vector<WeakSeq> weakly_increasing(int n, int k) {
    std::vector<WeakSeq> out;
    std::array<int, 5> cur{};
    std::int64_t kfac = 1;
    for (int i = 2; i <= k; ++i) kfac *= i;
    auto rec = [&](auto&& self, int pos, int low, std::int64_t runs) -> void {
        if (pos == k) {
            out.push_back({cur, kfac / runs});
            return;
        }
        for (int v = low; v <= n; ++v) {
            cur[pos] = v;
            // Extend the current run or start a new one.
            std::int64_t run = 1;
            for (int t = pos - 1; t >= 0 && cur[t] == v; --t) ++run;
            self(self, pos + 1, v, runs * run);
        }
    };
    rec(rec, 0, 1, 1);
    return out;
}

}  // namespace detail

// Exact probability that |sigma| independent points drawn from mu induce
// the pattern sigma. Points are listed by x-rank; cell columns must then be
// weakly increasing, and so must the cell rows when points are listed by
// y-rank. Each (column sequence, row sequence) pair contributes the product
// of its cell weights, corrected by the number of orderings that collapse
// onto it.
// Largest grid the exact evaluator accepts for a pattern of the given order.
// The work grows as C(n+k-1, k)^2 sequence pairs; these caps keep the worst
// case near one hundred thousand pairs while still covering every grid the
// witness search needs.
inline int step_density_grid_budget(int order) { return order <= 4 ? 8 : 6; }

inline Rational step_density(const Permutation& sigma, const StepPermuton& mu) {
    const int k = sigma.order();
    const int n = mu.grid;
    if (k > 5 || n > step_density_grid_budget(k))
        throw std::invalid_argument("step_density: exact budget is order <= 5, grid <= 8 (6 for order 5)");

    std::vector<detail::WeakSeq> seqs = detail::weakly_increasing(n, k);

    // Common denominator of the weights; products of numerators then fit a
    // 128-bit accumulator for every weight matrix the toolkit produces.
    BigInt den(1);
    for (const Rational& w : mu.weights.a)
        den = boost::multiprecision::lcm(den, denominator(w));
    BigInt nmax(0);
    Mat num(n, n);
    for (int e = 0; e < n * n; ++e) {
        num.a[e] = mu.weights.a[e] * Rational(den);
        if (numerator(num.a[e]) > nmax) nmax = numerator(num.a[e]);
    }

    BigInt kfac = factorial(k);
    BigInt scale = kfac * pow(BigInt(n), k) * pow(den, k);

    double bits = k * std::log2(std::max(1.0, nmax.convert_to<double>() + 1)) +
                  2 * std::log2(kfac.convert_to<double>()) +
                  2 * std::log2(static_cast<double>(seqs.size())) + 4;
    if (bits < 120) {
        std::array<std::array<std::int64_t, 8>, 8> w{};
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                w[i][j] = numerator(num.at(i, j)).convert_to<std::int64_t>();
        unsigned __int128 acc = 0;
        for (const detail::WeakSeq& col : seqs)
            for (const detail::WeakSeq& row : seqs) {
                unsigned __int128 prod = 1;
                for (int t = 0; t < k && prod; ++t)
                    prod *= static_cast<std::uint64_t>(w[col.v[t] - 1][row.v[sigma(t + 1) - 1] - 1]);
                if (prod) acc += prod * static_cast<std::uint64_t>(col.orderings * row.orderings);
            }
        BigInt total = BigInt(static_cast<std::uint64_t>(acc >> 64));
        total <<= 64;
        total += BigInt(static_cast<std::uint64_t>(acc));
        return Rational(total, scale);
    }

    Rational acc(0);
    for (const detail::WeakSeq& col : seqs)
        for (const detail::WeakSeq& row : seqs) {
            Rational prod(col.orderings * row.orderings);
            for (int t = 0; t < k && prod != 0; ++t)
                prod *= mu.weights.at(col.v[t] - 1, row.v[sigma(t + 1) - 1] - 1);
            acc += prod;
        }
    return acc / Rational(kfac * pow(BigInt(n), k));
}

inline Rational step_density_formal(const FormalSum& rho, const StepPermuton& mu) {
    Rational total(0);
    for (const auto& [p, coeff] : rho.terms) total += coeff * step_density(p, mu);
    return total;
}

// The density a quasirandom-forcing expression must attain: its value on
// the uniform measure.
inline Rational uniform_density(const FormalSum& rho) {
    Rational total(0);
    for (const auto& [p, coeff] : rho.terms) total += coeff / Rational(factorial(p.order()));
    return total;
}

// Draw k independent points from mu and report their induced pattern.
// Floating point is fine here: this is the Monte Carlo oracle, never the
// exact path.
inline Permutation sample_pattern(const StepPermuton& mu, int k, SplitMix64& rng) {
    const int n = mu.grid;
    std::vector<double> cumulative;
    cumulative.reserve(n * n);
    double running = 0;
    for (const Rational& w : mu.weights.a) {
        running += w.convert_to<double>() / n;
        cumulative.push_back(running);
    }
    std::vector<std::pair<double, double>> pts(k);
    for (auto& [x, y] : pts) {
        double r = rng.unit() * running;
        std::size_t cell = std::lower_bound(cumulative.begin(), cumulative.end(), r) -
                           cumulative.begin();
        if (cell >= cumulative.size()) cell = cumulative.size() - 1;
        int i = static_cast<int>(cell) / n, j = static_cast<int>(cell) % n;
        x = (i + rng.unit()) / n;
        y = (j + rng.unit()) / n;
    }
    std::sort(pts.begin(), pts.end());
    std::vector<int> word(k);
    for (int a = 0; a < k; ++a) {
        int rank = 1;
        for (int b = 0; b < k; ++b)
            if (pts[b].second < pts[a].second) ++rank;
        word[a] = rank;
    }
    return Permutation(word);
}

// Corner-to-corner combination: mu0 scaled onto [0,1-z]^2 and mu1 onto
// [1-z,1]^2, realized exactly on the common refinement grid.
inline StepPermuton interpolate(const StepPermuton& mu0, const StepPermuton& mu1,
                                const Rational& z) {
    if (z < 0 || z > 1) throw std::invalid_argument("interpolate: z must lie in [0,1]");
    if (z == 0) return mu0;
    if (z == 1) return mu1;
    const std::int64_t p = numerator(z).convert_to<std::int64_t>();
    const std::int64_t q = denominator(z).convert_to<std::int64_t>();
    const int n0 = mu0.grid, n1 = mu1.grid;
    const std::int64_t fine = q * n0 * n1;
    if (fine > 512) throw std::invalid_argument("interpolate: refinement grid too fine");
    const int L = static_cast<int>(fine);

    Mat w(L, L);
    const int c0 = static_cast<int>(q - p) * n1;  // fine cells per mu0 cell side
    const int c1 = static_cast<int>(p) * n0;      // fine cells per mu1 cell side
    const int offset = c0 * n0;                   // fine cells covered by block 0
    for (int i = 0; i < n0; ++i)
        for (int j = 0; j < n0; ++j) {
            Rational v = mu0.weights.at(i, j) / c0;
            for (int a = 0; a < c0; ++a)
                for (int b = 0; b < c0; ++b) w.at(i * c0 + a, j * c0 + b) = v;
        }
    for (int i = 0; i < n1; ++i)
        for (int j = 0; j < n1; ++j) {
            Rational v = mu1.weights.at(i, j) / c1;
            for (int a = 0; a < c1; ++a)
                for (int b = 0; b < c1; ++b)
                    w.at(offset + i * c1 + a, offset + j * c1 + b) = v;
        }
    StepPermuton out{L, std::move(w)};
    validate_step_permuton(out);
    return out;
}

}  // namespace qp
