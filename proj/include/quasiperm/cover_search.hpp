#pragma once

// Classification machinery for constant covers: linear combinations of
// fuzzy permutation matrices that add up to a constant matrix. The search
// walks prefixes of the permutations row by row, exploiting that the first
// m rows of a fuzzy matrix depend only on the first m values of the
// permutation, and prunes any prefix family whose linear system cannot
// extend to a cover with all coefficients and the constant nonzero.

#include "quasiperm/fuzzy.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <string>

namespace qp {

struct ConstantCover {
    std::vector<std::pair<Rational, Permutation>> terms;  // coefficient, permutation
    int n = 0;       // ambient size = largest order
    Rational c;      // the cover constant
    bool latin = false;      // disjoint order-n permutation matrices
    bool reducible = false;  // member of a higher-dimensional solution family
    bool operator==(const ConstantCover&) const = default;
};

inline std::string to_string(const ConstantCover& cc) {
    std::string out;
    for (size_t i = 0; i < cc.terms.size(); ++i) {
        if (i) out += " + ";
        out += to_string(cc.terms[i].first) + "*(" + to_string(cc.terms[i].second) + ")";
    }
    return out;
}

namespace detail {

// Scale a rational vector to coprime integers with the first nonzero entry
// positive.
inline std::vector<Rational> normalize_coefficients(std::vector<Rational> v) {
    BigInt l = 1;
    for (const Rational& x : v) l = boost::multiprecision::lcm(l, denominator(x));
    BigInt g = 0;
    for (Rational& x : v) {
        x *= Rational(l);
        g = boost::multiprecision::gcd(g, numerator(x));
    }
    if (g != 0)
        for (Rational& x : v) x /= Rational(g);
    for (const Rational& x : v) {
        if (x == 0) continue;
        if (x < 0)
            for (Rational& y : v) y = -y;
        break;
    }
    return v;
}

inline void sort_cover_terms(ConstantCover& cc) {
    std::sort(cc.terms.begin(), cc.terms.end(), [](const auto& a, const auto& b) {
        if (a.second.order() != b.second.order()) return a.second.order() > b.second.order();
        return PermOrderLex{}(a.second, b.second);
    });
}

// The cover constant is pinned by the row sums: sum of c_i (n-1)!/(k_i-1)!
// equals c*n.
inline Rational cover_constant(const ConstantCover& cc) {
    Rational total(0);
    for (const auto& [coeff, p] : cc.terms)
        total += coeff * Rational(factorial(cc.n - 1)) / Rational(factorial(p.order() - 1));
    return total / cc.n;
}

inline std::string cover_key(const ConstantCover& cc) {
    std::string key;
    for (const auto& [coeff, p] : cc.terms) key += to_string(p) + ":" + to_string(coeff) + ";";
    return key;
}

inline void mark_latin(ConstantCover& cc) {
    cc.latin = false;
    if (cc.terms.empty()) return;
    std::vector<std::vector<bool>> used(cc.n, std::vector<bool>(cc.n, false));
    for (const auto& [coeff, p] : cc.terms) {
        if (p.order() != cc.n || coeff != cc.terms[0].first) return;
        for (int i = 1; i <= cc.n; ++i) {
            if (used[i - 1][p(i) - 1]) return;
            used[i - 1][p(i) - 1] = true;
        }
    }
    for (const auto& row : used)
        for (bool b : row)
            if (!b) return;
    cc.latin = true;
}

}  // namespace detail

// Least representative of the cover under the eight dihedral symmetries
// applied to all terms at once, with coefficients scaled to coprime
// integers and leading sign positive (so a cover and its negation agree).
inline ConstantCover canonicalize_cover(const ConstantCover& cc) {
    ConstantCover best;
    std::string best_key;
    for (Symmetry s : all_symmetries) {
        ConstantCover img = cc;
        for (auto& [coeff, p] : img.terms) p = apply_symmetry(s, p);
        detail::sort_cover_terms(img);
        std::vector<Rational> coeffs;
        for (const auto& [coeff, p] : img.terms) coeffs.push_back(coeff);
        coeffs = detail::normalize_coefficients(coeffs);
        for (size_t i = 0; i < coeffs.size(); ++i) img.terms[i].first = coeffs[i];
        img.c = detail::cover_constant(img);
        detail::mark_latin(img);
        std::string key = detail::cover_key(img);
        if (best_key.empty() || key < best_key) {
            best_key = key;
            best = img;
        }
    }
    return best;
}

// All ways to write a constant matrix as a combination of the given fuzzy
// matrices: one ConstantCover per basis vector of the solution space. Each
// is normalized; callers inspect c to separate vanishing from non-vanishing
// solutions.
inline std::vector<ConstantCover> solve_cover(const std::vector<Permutation>& sigmas, int n) {
    const int r = static_cast<int>(sigmas.size());
    if (r < 1 || r > 5) throw std::invalid_argument("solve_cover: 1 to 5 permutations");
    for (const Permutation& s : sigmas)
        if (s.order() > n) throw std::invalid_argument("solve_cover: ambient size below order");

    Mat sys(n * n, r + 1);
    for (int i = 0; i < r; ++i) {
        Mat f = fuzzy_matrix(sigmas[i], n);
        for (int e = 0; e < n * n; ++e) sys.at(e, i) = f.a[e];
    }
    for (int e = 0; e < n * n; ++e) sys.at(e, r) = Rational(-1);

    std::vector<ConstantCover> out;
    for (const std::vector<Rational>& v : nullspace(sys)) {
        std::vector<Rational> w = detail::normalize_coefficients(v);
        ConstantCover cc;
        cc.n = n;
        for (int i = 0; i < r; ++i) cc.terms.push_back({w[i], sigmas[i]});
        cc.c = w[r];
        detail::sort_cover_terms(cc);
        detail::mark_latin(cc);
        out.push_back(std::move(cc));
    }
    return out;
}

struct CoverSearchResult {
    std::vector<ConstantCover> covers;     // genuine: unique solution, all nonzero
    std::vector<ConstantCover> reducible;  // representatives of solution families
    int depth_reached = 0;                 // last level with surviving prefixes
    std::uint64_t nodes = 0;               // candidate states examined
    bool complete = false;  // search refuted the profile or ran to full depth
};

namespace detail {

// One permutation prefix per term; values are 1-based, prefix i grows until
// it reaches the profile order.
using PrefixState = std::vector<std::vector<int>>;

inline std::string state_key(const PrefixState& st) {
    std::string key;
    for (const auto& p : st) {
        for (int v : p) key += static_cast<char>('0' + v);
        key += '|';
    }
    return key;
}

// Sort prefixes within blocks of equal profile order so that permuted
// copies of the same family collapse to one state.
inline void sort_state(PrefixState& st, const LengthProfile& profile) {
    size_t b = 0;
    while (b < st.size()) {
        size_t e = b + 1;
        while (e < st.size() && profile[e] == profile[b]) ++e;
        std::sort(st.begin() + b, st.begin() + e);
        b = e;
    }
}

// Rows 1..m of the cover system for the current prefixes: does some
// coefficient vector with all coordinates usable survive? Kernel dimension
// 0, or any coordinate forced to zero across the kernel, kills the branch.
inline bool prefix_feasible(const PrefixState& st, const LengthProfile& profile, int n, int m,
                            std::vector<std::vector<Rational>>* kernel_out = nullptr) {
    const int r = static_cast<int>(profile.size());
    Mat sys(m * n, r + 1);
    for (int i = 0; i < r; ++i) {
        const int k = profile[i];
        Rational scale = Rational(factorial(n - k) * factorial(k) * factorial(n - k)) /
                         Rational(factorial(n));
        for (int x = 1; x <= m; ++x) {
            for (int y = 1; y <= n; ++y) {
                Rational s(0);
                for (int j = 1; j <= std::min(x, static_cast<int>(st[i].size())); ++j) {
                    Rational fx = f_poly(k, j, n, x);
                    if (fx == 0) continue;
                    s += fx * f_poly(k, st[i][j - 1], n, y);
                }
                sys.at((x - 1) * n + (y - 1), i) = scale * s;
            }
        }
    }
    for (int e = 0; e < m * n; ++e) sys.at(e, r) = Rational(-1);

    std::vector<std::vector<Rational>> kernel = nullspace(sys);
    if (kernel.empty()) return false;
    for (int coord = 0; coord <= r; ++coord) {
        bool somewhere_nonzero = false;
        for (const auto& v : kernel)
            if (v[coord] != 0) {
                somewhere_nonzero = true;
                break;
            }
        if (!somewhere_nonzero) return false;
    }
    if (kernel_out) *kernel_out = std::move(kernel);
    return true;
}

}  // namespace detail

// Classify the non-vanishing constant covers with the given length profile.
// For each level m, only families of prefixes that still admit a constant
// cover on the first m rows survive; completed families are solved exactly.
// A unique all-nonzero solution is a genuine cover; a solution space of
// dimension two or more means the family contains smaller covers (adding
// multiples of expressions like 12+21), reported separately as reducible.
// max_depth = 0 runs all levels; a positive value stops the level loop
// early, which can only certify emptiness (complete stays false if any
// prefix family survives the truncated search). Orders above 6 are too
// large for a full run and accept max_depth 1..3 only.
inline CoverSearchResult search_covers(const LengthProfile& profile,
                                       std::uint64_t node_budget = 100000000ULL,
                                       int max_depth = 0) {
    validate_profile(profile);
    const int n = profile[0];
    const int r = static_cast<int>(profile.size());
    if (n > 6 && (max_depth < 1 || max_depth > 3))
        throw std::invalid_argument("search_covers: orders above 6 allow refutation depth 1..3");
    const int levels = max_depth > 0 ? std::min(max_depth, n) : n;

    CoverSearchResult result;
    if (!profile_bounds(profile, n)) {
        result.complete = true;
        return result;
    }
    std::vector<detail::PrefixState> frontier{detail::PrefixState(r)};
    std::map<std::string, ConstantCover> genuine, families;

    for (int m = 1; m <= levels; ++m) {
        std::vector<detail::PrefixState> next;
        std::set<std::string> seen;
        for (const detail::PrefixState& st : frontier) {
            // Extend every prefix that has not reached its full order by
            // each unused value; the cartesian product is walked by a
            // manual odometer over the extendable indices.
            std::vector<int> grow;
            std::vector<std::vector<int>> options;
            for (int i = 0; i < r; ++i) {
                if (static_cast<int>(st[i].size()) >= profile[i]) continue;
                grow.push_back(i);
                std::vector<int> opts;
                for (int v = 1; v <= profile[i]; ++v)
                    if (std::find(st[i].begin(), st[i].end(), v) == st[i].end())
                        opts.push_back(v);
                options.push_back(std::move(opts));
            }
            std::vector<size_t> odo(grow.size(), 0);
            while (true) {
                detail::PrefixState cand = st;
                for (size_t g = 0; g < grow.size(); ++g)
                    cand[grow[g]].push_back(options[g][odo[g]]);
                detail::sort_state(cand, profile);
                if (++result.nodes > node_budget)
                    throw std::runtime_error("cover search exceeded its node budget");
                if (seen.insert(detail::state_key(cand)).second &&
                    detail::prefix_feasible(cand, profile, n, m))
                    next.push_back(std::move(cand));
                // With nothing left to grow the odometer is empty and the
                // single pass above rechecked st itself at the deeper level.
                size_t g = 0;
                while (g < odo.size() && ++odo[g] == options[g].size()) odo[g++] = 0;
                if (g == odo.size()) break;
            }
        }
        frontier = std::move(next);
        if (frontier.empty()) {
            result.complete = true;
            return result;
        }
        result.depth_reached = m;
    }
    if (levels < n) return result;  // truncated run, nothing certified
    result.complete = true;

    // Completed families: distinct permutations required inside equal-order
    // blocks, then exact classification of the full solution space.
    for (const detail::PrefixState& st : frontier) {
        bool distinct = true;
        for (int i = 0; i + 1 < r && distinct; ++i)
            if (profile[i] == profile[i + 1] && st[i] == st[i + 1]) distinct = false;
        if (!distinct) continue;

        std::vector<Permutation> sigmas;
        for (int i = 0; i < r; ++i) sigmas.push_back(make_permutation(st[i]));
        std::vector<ConstantCover> solutions = solve_cover(sigmas, n);
        if (solutions.empty()) continue;

        if (solutions.size() == 1) {
            ConstantCover& cc = solutions[0];
            if (cc.c == 0) continue;
            bool all_nonzero = true;
            for (const auto& [coeff, p] : cc.terms)
                if (coeff == 0) all_nonzero = false;
            if (!all_nonzero) continue;
            ConstantCover canon = canonicalize_cover(cc);
            genuine.emplace(detail::cover_key(canon), std::move(canon));
        } else {
            // Pick the family member with nonzero constant when one exists,
            // purely as a display representative.
            ConstantCover rep = solutions[0];
            for (const ConstantCover& s : solutions)
                if (s.c != 0) {
                    rep = s;
                    break;
                }
            rep.reducible = true;
            ConstantCover canon = canonicalize_cover(rep);
            canon.reducible = true;
            families.emplace(detail::cover_key(canon), std::move(canon));
        }
    }

    for (auto& [key, cc] : genuine) result.covers.push_back(std::move(cc));
    for (auto& [key, cc] : families) result.reducible.push_back(std::move(cc));
    return result;
}

}  // namespace qp
