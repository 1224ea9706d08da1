#pragma once

// Second-order behavior of pattern densities at the uniform measure, over
// the perturbation family make_perturbed: exact gradient and Hessian of
// x -> density(rho, make_perturbed(x)) at x = 0, with the definiteness
// flags that drive cover screening. Signs come from exact arithmetic;
// floating-point eigenvalues ride along for orientation only.

#include "quasiperm/matrix.hpp"
#include "quasiperm/permutation.hpp"
#include "quasiperm/permuton.hpp"

#include <cstdint>
#include <map>
#include <utility>

namespace qp {

namespace detail {

// Taylor data of density(sigma, .) in the substituted variables
// z_v = n * x_v, where the weight of cell (a, b) is
// (1/n)(1 + sum_v s_v(a,b) z_v). All three pieces are integers over the
// common scale k! * n^(2k); derivatives in x pick up factors of n.
struct TaylorData {
    int dim = 0;
    BigInt scale = 1;
    std::int64_t constant = 0;
    std::vector<std::int64_t> grad;
    std::vector<std::vector<std::int64_t>> hess;
};

// Coordinate x_{i,j} (1 <= i,j <= n-1) lives at index (i-1)*(n-1)+(j-1).
// Cell (a, b) is touched by at most four coordinates with signs +1 at
// (a,b) and (a-1,b-1), -1 at (a-1,b) and (a,b-1).
inline std::vector<std::vector<std::pair<int, int>>> cell_coordinates(int n) {
    std::vector<std::vector<std::pair<int, int>>> cells(static_cast<size_t>(n) * n);
    auto idx = [n](int i, int j) { return (i - 1) * (n - 1) + (j - 1); };
    for (int a = 1; a <= n; ++a)
        for (int b = 1; b <= n; ++b) {
            auto& list = cells[static_cast<size_t>(a - 1) * n + (b - 1)];
            if (a < n && b < n) list.emplace_back(idx(a, b), 1);
            if (a > 1 && b > 1) list.emplace_back(idx(a - 1, b - 1), 1);
            if (a > 1 && b < n) list.emplace_back(idx(a - 1, b), -1);
            if (a < n && b > 1) list.emplace_back(idx(a, b - 1), -1);
        }
    return cells;
}

// Expands the product over sampled points of (1 + L_t(z)) to total degree
// two, where L_t collects the signed coordinates of the point's cell. Each
// (column sequence, row sequence) pair contributes with the weight counting
// the orderings it represents; see step_density for the underlying sum.
inline TaylorData compute_taylor(const Permutation& sigma, int n) {
    const int k = sigma.order();
    const int d = (n - 1) * (n - 1);
    TaylorData out;
    out.dim = d;
    out.scale = factorial(k) * pow(BigInt(n), 2 * k);
    out.grad.assign(d, 0);
    out.hess.assign(d, std::vector<std::int64_t>(d, 0));

    const auto cells = cell_coordinates(n);
    const auto seqs = weakly_increasing(n, k);

    std::vector<std::int64_t> total(d);
    std::vector<std::vector<std::int64_t>> pointwise(d, std::vector<std::int64_t>(d));
    for (const WeakSeq& col : seqs)
        for (const WeakSeq& row : seqs) {
            std::fill(total.begin(), total.end(), 0);
            for (auto& r : pointwise) std::fill(r.begin(), r.end(), 0);
            for (int t = 0; t < k; ++t) {
                const auto& coords =
                    cells[static_cast<size_t>(col.v[t] - 1) * n + (row.v[sigma(t + 1) - 1] - 1)];
                for (const auto& [v1, s1] : coords) {
                    total[v1] += s1;
                    for (const auto& [v2, s2] : coords) pointwise[v1][v2] += s1 * s2;
                }
            }
            const std::int64_t w = col.orderings * row.orderings;
            out.constant += w;
            for (int v = 0; v < d; ++v)
                if (total[v]) out.grad[v] += w * total[v];
            for (int v = 0; v < d; ++v)
                for (int u = 0; u < d; ++u) {
                    std::int64_t q = total[v] * total[u] - pointwise[v][u];
                    if (q) out.hess[v][u] += w * q;
                }
        }
    return out;
}

inline const TaylorData& taylor_data(const Permutation& sigma, int n) {
    static std::map<std::pair<std::vector<int>, int>, TaylorData> cache;
    auto key = std::make_pair(sigma.word, n);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, compute_taylor(sigma, n)).first;
    return it->second;
}

inline void check_perturbation_budget(const FormalSum& rho, int n) {
    if (n < 2 || n > 5)
        throw std::invalid_argument("perturbation analysis: grid must be between 2 and 5");
    for (const auto& [p, c] : rho.terms)
        if (p.order() > 5)
            throw std::invalid_argument("perturbation analysis: pattern order above 5");
}

}  // namespace detail

// Gradient of x -> density(rho, make_perturbed(x)) at the uniform measure.
inline std::vector<Rational> h_gradient(const FormalSum& rho, int n) {
    detail::check_perturbation_budget(rho, n);
    const int d = (n - 1) * (n - 1);
    std::vector<Rational> g(d, Rational(0));
    for (const auto& [p, c] : rho.terms) {
        const detail::TaylorData& td = detail::taylor_data(p, n);
        for (int v = 0; v < d; ++v)
            if (td.grad[v]) g[v] += c * Rational(BigInt(td.grad[v]) * n, td.scale);
    }
    return g;
}

struct HessianReport {
    int dimension = 0;
    std::vector<Rational> gradient;
    Mat hessian;
    std::vector<double> eigenvalues;  // advisory; flags below are exact
    bool has_positive = false;
    bool has_negative = false;
};

inline HessianReport h_hessian(const FormalSum& rho, int n) {
    detail::check_perturbation_budget(rho, n);
    const int d = (n - 1) * (n - 1);
    HessianReport rep;
    rep.dimension = d;
    rep.gradient = h_gradient(rho, n);
    rep.hessian = Mat(d, d);
    for (const auto& [p, c] : rho.terms) {
        const detail::TaylorData& td = detail::taylor_data(p, n);
        const Rational factor = c * Rational(BigInt(n) * n, td.scale);
        for (int v = 0; v < d; ++v)
            for (int u = 0; u < d; ++u)
                if (td.hess[v][u]) rep.hessian.at(v, u) += factor * td.hess[v][u];
    }
    Inertia sig = signature_inertia(rep.hessian);
    rep.has_positive = sig.positive > 0;
    rep.has_negative = sig.negative > 0;
    rep.eigenvalues = float_eigenvalues(rep.hessian);
    return rep;
}

// Screening verdict for a candidate expression: a critical point whose
// Hessian already moves in both directions needs no further work, anything
// else needs an ad hoc argument to settle which side of its uniform value
// the expression can reach.
struct CoverScreen {
    bool gradient_zero = false;
    bool has_positive = false;
    bool has_negative = false;
    bool adhoc_needed = false;
};

inline CoverScreen screen_cover(const FormalSum& rho, int n) {
    HessianReport rep = h_hessian(rho, n);
    CoverScreen s;
    s.gradient_zero = true;
    for (const Rational& g : rep.gradient)
        if (g != 0) s.gradient_zero = false;
    s.has_positive = rep.has_positive;
    s.has_negative = rep.has_negative;
    s.adhoc_needed = s.gradient_zero && !(s.has_positive && s.has_negative);
    return s;
}

}  // namespace qp
