#pragma once

// Corner interpolation turns pattern densities into polynomials in the
// mixing parameter: a pattern splits over the two blocks only as a direct
// sum, so the density along interpolate(mu0, mu1, z) is an explicit
// polynomial with exact rational coefficients. That gives a bisection that
// can place a non-uniform measure arbitrarily close to any straddled
// density value, plus a deterministic search for measures strictly on a
// requested side of an expression's uniform value.

#include "quasiperm/permuton.hpp"

#include <array>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

namespace qp {

struct StraddleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

// If the first `head` values of sigma occupy the bottom `head` slots, the
// pattern is the direct sum of its head and tail; only such splits survive
// corner mixing.
inline bool splits_at(const Permutation& sigma, int head) {
    for (int t = 1; t <= head; ++t)
        if (sigma(t) > head) return false;
    return true;
}

inline Permutation head_pattern(const Permutation& sigma, int head) {
    std::vector<int> w(head);
    for (int t = 1; t <= head; ++t) w[t - 1] = sigma(t);
    return Permutation(w);
}

inline Permutation tail_pattern(const Permutation& sigma, int head) {
    const int k = sigma.order();
    std::vector<int> w(k - head);
    for (int t = head + 1; t <= k; ++t) w[t - head - 1] = sigma(t) - head;
    return Permutation(w);
}

}  // namespace detail

// Coefficients (index = power of z) of z -> density(rho, interpolate(mu0, mu1, z)).
// Each point lands in the upper block independently with probability z, so
// a pattern of order k contributes sum over splits of
// C(k, j) z^j (1-z)^(k-j) * density(head, mu0) * density(tail, mu1).
inline std::vector<Rational> crossing_polynomial(const FormalSum& rho,
                                                 const StepPermuton& mu0,
                                                 const StepPermuton& mu1) {
    int degree = 0;
    for (const auto& [p, c] : rho.terms) degree = std::max(degree, p.order());
    std::vector<Rational> coeffs(degree + 1, Rational(0));
    for (const auto& [sigma, c] : rho.terms) {
        const int k = sigma.order();
        for (int j = 0; j <= k; ++j) {
            const int head = k - j;
            if (head > 0 && j > 0 && !detail::splits_at(sigma, head)) continue;
            Rational d0 = head == 0 ? Rational(1)
                                    : step_density(detail::head_pattern(sigma, head), mu0);
            if (d0 == 0) continue;
            Rational d1 =
                j == 0 ? Rational(1) : step_density(detail::tail_pattern(sigma, head), mu1);
            if (d1 == 0) continue;
            const Rational base = c * Rational(binomial(k, j)) * d0 * d1;
            for (int m = 0; m <= head; ++m) {
                Rational term = base * Rational(binomial(head, m));
                if (m % 2) term = -term;
                coeffs[j + m] += term;
            }
        }
    }
    return coeffs;
}

inline Rational evaluate_polynomial(const std::vector<Rational>& coeffs, const Rational& z) {
    Rational value(0);
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) value = value * z + *it;
    return value;
}

// Bisects for a mixing parameter z where the interpolated measure's value of
// rho comes within 1e-9 of the uniform value. Requires the value at z = 0
// strictly below the target and at z = 1 strictly above.
inline Rational find_crossing(const FormalSum& rho, const StepPermuton& mu0,
                              const StepPermuton& mu1) {
    const Rational target = uniform_density(rho);
    const std::vector<Rational> poly = crossing_polynomial(rho, mu0, mu1);
    if (evaluate_polynomial(poly, Rational(0)) >= target ||
        evaluate_polynomial(poly, Rational(1)) <= target)
        throw StraddleError("find_crossing: endpoint values must straddle the uniform value");

    const Rational tolerance(1, 1000000000);
    Rational lo(0), hi(1), mid, value;
    for (int iter = 0; iter < 60; ++iter) {
        mid = (lo + hi) / 2;
        value = evaluate_polynomial(poly, mid);
        if (value == target) break;
        if (value < target) lo = mid;
        else hi = mid;
        Rational gap = value - target;
        if (iter >= 39 && (gap < 0 ? -gap : gap) <= tolerance) break;
    }
    return mid;
}

enum class Direction { below, above };

namespace detail {

// Double precision density engine used only to steer the lattice ascent in
// witness_search; every candidate it produces is re-checked exactly before
// being returned.
struct FloatTerm {
    int n = 0;
    int k = 0;
    double coeff = 0;
    double scale = 0;
    std::vector<WeakSeq> seqs;
    std::vector<int> lookup;  // sigma as 0-based positions

    FloatTerm(const Permutation& sigma, double c, int grid) : n(grid), k(sigma.order()), coeff(c) {
        seqs = weakly_increasing(n, k);
        lookup.resize(k);
        for (int t = 0; t < k; ++t) lookup[t] = sigma(t + 1) - 1;
        scale = coeff;
        for (int i = 2; i <= k; ++i) scale /= i;
        for (int i = 0; i < k; ++i) scale /= n;
    }

    double value(const double* w) const {
        double acc = 0;
        for (const auto& col : seqs)
            for (const auto& row : seqs) {
                double prod = static_cast<double>(col.orderings * row.orderings);
                for (int t = 0; t < k && prod != 0; ++t)
                    prod *= w[(col.v[t] - 1) * n + row.v[lookup[t]] - 1];
                acc += prod;
            }
        return acc * scale;
    }

    void add_gradient(const double* w, double* g) const {
        double pre[6], suf[6];
        for (const auto& col : seqs)
            for (const auto& row : seqs) {
                pre[0] = 1;
                for (int t = 0; t < k; ++t)
                    pre[t + 1] = pre[t] * w[(col.v[t] - 1) * n + row.v[lookup[t]] - 1];
                suf[k] = 1;
                for (int t = k - 1; t >= 0; --t)
                    suf[t] = suf[t + 1] * w[(col.v[t] - 1) * n + row.v[lookup[t]] - 1];
                const double base = scale * static_cast<double>(col.orderings * row.orderings);
                for (int t = 0; t < k; ++t) {
                    const double others = pre[t] * suf[t + 1];
                    if (others != 0) g[(col.v[t] - 1) * n + row.v[lookup[t]] - 1] += base * others;
                }
            }
    }
};

struct FloatObjective {
    int n;
    std::vector<FloatTerm> parts;

    FloatObjective(const FormalSum& rho, int grid) : n(grid) {
        for (const auto& [p, c] : rho.terms) parts.emplace_back(p, to_double(c), grid);
    }

    double value(const double* w) const {
        double v = 0;
        for (const FloatTerm& t : parts) v += t.value(w);
        return v;
    }

    void gradient(const double* w, double* g) const {
        std::fill(g, g + n * n, 0.0);
        for (const FloatTerm& t : parts) t.add_gradient(w, g);
    }
};

// Hill-climbs the expression value over doubly stochastic weight matrices
// whose entries are multiples of 1/4096, moving mass around 2x2 rotations
// chosen by the gradient. Starts from a seeded random mixture of
// permutation matrices; the returned measure is a candidate only.
inline StepPermuton lattice_ascend(const FloatObjective& obj, double direction_sign, int grid,
                                   SplitMix64& rng) {
    const int n = grid;
    const int cells = n * n;
    const std::int64_t kDenom = 4096;

    std::vector<std::int64_t> iw(cells, 0);
    std::vector<std::int64_t> cuts{0, kDenom};
    const int parts = 2 + static_cast<int>(rng.below(8));
    for (int t = 1; t < parts; ++t) cuts.push_back(static_cast<std::int64_t>(rng.below(kDenom + 1)));
    std::sort(cuts.begin(), cuts.end());
    std::vector<int> image(n);
    for (std::size_t t = 0; t + 1 < cuts.size(); ++t) {
        const std::int64_t mass = cuts[t + 1] - cuts[t];
        if (mass == 0) continue;
        std::iota(image.begin(), image.end(), 0);
        rng.shuffle(image);
        for (int i = 0; i < n; ++i) iw[i * n + image[i]] += mass;
    }

    std::vector<double> w(cells), g(cells);
    auto sync = [&] {
        for (int e = 0; e < cells; ++e) w[e] = static_cast<double>(iw[e]) / kDenom;
    };
    sync();
    double current = direction_sign * obj.value(w.data());

    for (int iter = 0; iter < 600; ++iter) {
        obj.gradient(w.data(), g.data());
        double best_gain = 1e-15;
        int bi = -1, bi2 = -1, bj = -1, bj2 = -1;
        for (int i = 0; i < n; ++i)
            for (int i2 = 0; i2 < n; ++i2) {
                if (i2 == i) continue;
                for (int j = 0; j < n; ++j) {
                    if (iw[i2 * n + j] == 0) continue;
                    for (int j2 = 0; j2 < n; ++j2) {
                        if (j2 == j || iw[i * n + j2] == 0) continue;
                        const double gain = direction_sign * (g[i * n + j] + g[i2 * n + j2] -
                                                              g[i * n + j2] - g[i2 * n + j]);
                        if (gain > best_gain) {
                            best_gain = gain;
                            bi = i;
                            bi2 = i2;
                            bj = j;
                            bj2 = j2;
                        }
                    }
                }
            }
        if (bi < 0) break;
        const std::int64_t cap = std::min(iw[bi * n + bj2], iw[bi2 * n + bj]);
        bool moved = false;
        for (std::int64_t d = cap; d >= 1; d /= 2) {
            iw[bi * n + bj] += d;
            iw[bi2 * n + bj2] += d;
            iw[bi * n + bj2] -= d;
            iw[bi2 * n + bj] -= d;
            sync();
            const double value = direction_sign * obj.value(w.data());
            if (value > current + 1e-15) {
                current = value;
                moved = true;
                break;
            }
            iw[bi * n + bj] -= d;
            iw[bi2 * n + bj2] -= d;
            iw[bi * n + bj2] += d;
            iw[bi2 * n + bj] += d;
        }
        if (!moved) break;
    }

    Mat weights(n, n);
    for (int e = 0; e < cells; ++e) weights.a[e] = Rational(iw[e], kDenom);
    return make_step_permuton(std::move(weights));
}

// The measure that spreads column i uniformly over the `slope` rows starting
// at slope*(i-1)+offset, cyclically; transposed = true spreads rows over
// columns instead. Discretized expanding torus maps of this shape produce
// pattern statistics far from uniform while staying doubly stochastic.
inline StepPermuton spread_line(int grid, int slope, int offset, bool transposed) {
    Mat w(grid, grid);
    for (int i = 0; i < grid; ++i)
        for (int r = 0; r < slope; ++r) {
            const int j = (slope * i + offset + r) % grid;
            if (transposed) w.at(j, i) += Rational(1, slope);
            else w.at(i, j) += Rational(1, slope);
        }
    return make_step_permuton(std::move(w));
}

}  // namespace detail

// Deterministic hunt for a step permuton whose exact value of rho lies
// strictly on the requested side of the uniform value. The phases, in
// order: staircase measures of all permutations of order <= 5, discretized
// expanding torus lines, then a seeded stream of random mixtures and random
// perturbations of uniform interleaved with gradient-guided lattice climbs
// on the largest grids the exact evaluator accepts. Every candidate is
// checked with exact arithmetic; the doubles only steer the climb, so a
// returned witness is exact regardless of floating point behavior. Returns
// nothing when the candidate budget runs out.
inline std::optional<StepPermuton> witness_search(const FormalSum& rho, Direction dir,
                                                  std::uint64_t seed = 1, int budget = 600) {
    const Rational target = uniform_density(rho);
    int max_order = 1;
    for (const auto& [p, c] : rho.terms) max_order = std::max(max_order, p.order());
    const int max_grid = step_density_grid_budget(max_order);

    int tried = 0;
    auto accept = [&](const StepPermuton& mu) {
        ++tried;
        const Rational v = step_density_formal(rho, mu);
        return dir == Direction::below ? v < target : v > target;
    };

    for (int n = 2; n <= 5 && tried < budget; ++n)
        for (const Permutation& p : enumerate_sn(n)) {
            StepPermuton mu = permutation_permuton(p);
            if (accept(mu)) return mu;
            if (tried >= budget) break;
        }

    for (int n = 4; n <= max_grid && tried < budget; ++n)
        for (int slope = 2; slope <= 3 && tried < budget; ++slope)
            for (int offset = 0; offset < n && tried < budget; ++offset)
                for (bool transposed : {false, true}) {
                    StepPermuton mu = detail::spread_line(n, slope, offset, transposed);
                    if (accept(mu)) return mu;
                    if (tried >= budget) break;
                }

    // Grids the climbing phase cycles through: the two largest affordable
    // grids probe structure invisible at low resolution, the small ones
    // keep coarse minima reachable.
    const std::array<int, 4> climb_grids{max_grid - 1, max_grid, 5, 4};
    const double sign = dir == Direction::below ? -1.0 : 1.0;
    SplitMix64 rng(seed);
    int round = 0;
    while (tried < budget) {
        if (++round % 8 == 0) {
            const int n = climb_grids[(round / 8 - 1) % climb_grids.size()];
            detail::FloatObjective obj(rho, n);
            StepPermuton mu = detail::lattice_ascend(obj, sign, n, rng);
            if (accept(mu)) return mu;
            continue;
        }
        const int n = 2 + static_cast<int>(rng.below(4));
        StepPermuton mu = uniform_permuton(n);
        if (rng.below(4) == 0) {
            // Random small perturbation of the uniform measure.
            PerturbationVector x{n, Mat(n - 1, n - 1)};
            for (Rational& v : x.values.a)
                v = Rational(static_cast<std::int64_t>(rng.below(5)) - 2, 8 * n);
            mu = make_perturbed(x);
        } else {
            // Random mixture of permutation matrices with small weights.
            const auto sn = enumerate_sn(n);
            const int parts = 2 + static_cast<int>(rng.below(3));
            Mat w(n, n);
            std::int64_t total = 0;
            for (int t = 0; t < parts; ++t) {
                const Permutation& p = sn[rng.below(sn.size())];
                const std::int64_t weight = 1 + static_cast<std::int64_t>(rng.below(9));
                total += weight;
                for (int i = 1; i <= n; ++i) w.at(i - 1, p(i) - 1) += Rational(weight);
            }
            for (Rational& e : w.a) e /= total;
            mu = make_step_permuton(std::move(w));
        }
        if (accept(mu)) return mu;
    }
    return std::nullopt;
}

}  // namespace qp
