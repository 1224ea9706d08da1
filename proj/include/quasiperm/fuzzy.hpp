#pragma once

// Fuzzy permutation matrices and the repeated-entry statistics used to
// bound which length profiles can support a non-vanishing constant cover.
//
// The fuzzy matrix of a permutation sigma of order k inside ambient size n
// has entries built from products of the polynomials
//   f_{k,j}(x) = C(x-1, j-1) * C(n-x, k-j),
// and differs from the averaged cover matrix A_sigma by an explicit
// constant multiple of the all-ones matrix, which is what makes "constant
// cover" questions about either family equivalent.

#include "quasiperm/counting.hpp"
#include "quasiperm/matrix.hpp"

#include <map>
#include <set>

namespace qp {

inline Rational f_poly(int k, int j, int n, int x) {
    if (!(1 <= j && j <= k && k <= n && 1 <= x && x <= n))
        throw std::invalid_argument("f_poly: argument out of range");
    return Rational(binomial(x - 1, j - 1) * binomial(n - x, k - j));
}

inline Mat fuzzy_matrix(const Permutation& sigma, int n) {
    const int k = sigma.order();
    if (k > n) throw std::invalid_argument("fuzzy_matrix: ambient size below order");
    if (n > 12) throw std::invalid_argument("fuzzy_matrix: ambient size above 12");
    Rational scale = Rational(factorial(n - k) * factorial(k) * factorial(n - k)) /
                     Rational(factorial(n));
    Mat m(n, n);
    for (int x = 1; x <= n; ++x)
        for (int y = 1; y <= n; ++y) {
            Rational s(0);
            for (int j = 1; j <= k; ++j) s += f_poly(k, j, n, x) * f_poly(k, sigma(j), n, y);
            m.at(x - 1, y - 1) = scale * s;
        }
    return m;
}

inline Mat fuzzy_matrix_sum(const FormalSum& rho, int n) {
    Mat total(n, n);
    for (const auto& [p, c] : rho.terms) {
        Mat m = fuzzy_matrix(p, n);
        m *= c;
        total += m;
    }
    return total;
}

// Averaged 0/1 matrices: the density-weighted sum of the permutation
// matrices of all order-n permutations.
inline Mat cover_matrix(const Permutation& sigma, int n) {
    const int k = sigma.order();
    if (k > n) throw std::invalid_argument("cover_matrix: ambient size below order");
    if (n > 7) throw std::invalid_argument("cover_matrix: ambient size above 7");
    Mat m(n, n);
    for (const Permutation& pi : enumerate_sn(n)) {
        Rational d = density(sigma, pi);
        if (d == 0) continue;
        for (int x = 1; x <= n; ++x) m.at(x - 1, pi(x) - 1) += d;
    }
    return m;
}

// Confirms that the averaged and fuzzy matrices differ by the predicted
// constant and returns it. A violation means an implementation bug, so it
// throws rather than reporting.
inline Rational decompose_fto_a(const Permutation& sigma, int n) {
    const int k = sigma.order();
    Rational expected = Rational(factorial(n - 1)) / Rational(factorial(k - 1)) *
                        (Rational(1, k) - Rational(1, n));
    Mat diff = cover_matrix(sigma, n) - fuzzy_matrix(sigma, n);
    for (const Rational& e : diff.a)
        if (e != expected)
            throw std::logic_error("cover and fuzzy matrices do not differ by the constant");
    return expected;
}

inline int zero_count(const Mat& m) {
    int z = 0;
    for (const Rational& e : m.a)
        if (e == 0) ++z;
    return z;
}

// Maximum number of times a nonzero value appears.
inline int repeat_count(const Mat& m) {
    std::map<Rational, int> mult;
    for (const Rational& e : m.a)
        if (e != 0) ++mult[e];
    int best = 0;
    for (const auto& [v, cnt] : mult) best = std::max(best, cnt);
    return best;
}

namespace detail {

// Representatives of the dihedral orbits on S_k, as the lexicographic
// minimum of each orbit.
inline std::vector<Permutation> dihedral_orbit_reps(int k) {
    std::set<Permutation, PermOrderLex> seen;
    std::vector<Permutation> reps;
    for (const Permutation& p : enumerate_sn(k)) {
        if (seen.count(p)) continue;
        reps.push_back(p);
        for (Symmetry s : all_symmetries) seen.insert(apply_symmetry(s, p));
    }
    return reps;
}

}  // namespace detail

// Largest repeat count achievable by a real linear combination of two fuzzy
// matrices with the given orders. Entries coincide at two positions only
// for finitely many coefficient ratios, so it suffices to scan candidate
// ratios derived from entry pairs plus one generic value.
inline int pair_repeat_max(int k, int l, int n) {
    if (n != 6) throw std::invalid_argument("pair_repeat_max: only ambient size 6 supported");
    if (k > n || l > n || k < 2 || l < 2)
        throw std::invalid_argument("pair_repeat_max: orders out of range");

    int best = 0;
    // The diagonal symmetry action preserves repeat counts, so the first
    // factor only needs orbit representatives.
    for (const Permutation& sigma : detail::dihedral_orbit_reps(k)) {
        Mat A = fuzzy_matrix(sigma, n);
        best = std::max(best, repeat_count(A));
        for (const Permutation& tau : enumerate_sn(l)) {
            Mat B = fuzzy_matrix(tau, n);
            best = std::max(best, repeat_count(B));

            // Candidate ratios c with A + cB repeating an entry: solutions
            // of A_ij + c B_ij = A_uv + c B_uv, plus ratios where an entry
            // vanishes (needed only to pick a safely generic value).
            std::set<Rational> candidates;
            Rational fence(0);
            const int nn = n * n;
            for (int s = 0; s < nn; ++s)
                for (int t = s + 1; t < nn; ++t) {
                    if (B.a[s] == B.a[t]) continue;
                    candidates.insert((A.a[t] - A.a[s]) / (B.a[s] - B.a[t]));
                }
            for (int s = 0; s < nn; ++s)
                if (B.a[s] != 0) fence = std::max(fence, Rational(abs(A.a[s] / B.a[s])));
            for (const Rational& c : candidates) fence = std::max(fence, Rational(abs(c)));
            candidates.insert(fence + 1);  // generic: only ever-equal pairs coincide

            for (const Rational& c : candidates) {
                if (c == 0) continue;
                Mat comb = A;
                Mat scaled = B;
                scaled *= c;
                comb += scaled;
                best = std::max(best, repeat_count(comb));
            }
        }
    }
    return best;
}

using LengthProfile = std::vector<int>;

inline void validate_profile(const LengthProfile& p) {
    if (p.size() < 2 || p.size() > 5)
        throw std::invalid_argument("length profile needs 2 to 5 entries");
    for (size_t i = 0; i < p.size(); ++i) {
        if (p[i] < 2) throw std::invalid_argument("profile orders must be at least 2");
        if (i > 0 && p[i] > p[i - 1])
            throw std::invalid_argument("profile must be sorted descending");
    }
}

// Necessary conditions for a non-vanishing constant cover with the given
// length profile in ambient size n: the first-row sparsity inequality
//   n - 2 <= sum_{j<r} (n - k_j + 1)
// and the polynomial-degree bounds
//   k_i >= n + 1 - sum_{j<i} (n - k_j + 1).
// Total on any input; ill-formed profiles simply fail.
inline bool profile_bounds(const LengthProfile& p, int n) {
    if (p.size() < 2 || p.size() > 5) return false;
    for (size_t i = 0; i < p.size(); ++i) {
        if (p[i] < 2) return false;
        if (i > 0 && p[i] > p[i - 1]) return false;
    }
    if (p[0] != n) return false;
    const int r = static_cast<int>(p.size());
    int partial = 0;  // sum of n - k_j + 1 over j < i
    for (int i = 1; i < r; ++i) {
        partial += n - p[i - 1] + 1;
        if (p[i] < n + 1 - partial) return false;
    }
    int first_row = 0;
    for (int j = 0; j + 1 < r; ++j) first_row += n - p[j] + 1;
    return n - 2 <= first_row;
}

}  // namespace qp
