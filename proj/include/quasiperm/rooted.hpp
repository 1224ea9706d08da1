#pragma once

// Rooted permutations and the flag product. A rooted permutation is a pair
// (pi, R) where the positions R induce the root type tau; rooted sums are
// rational combinations with a common root type. The product of two rooted
// permutations of orders n_a, n_b over a shared type of order t expands over
// S_m with m = n_a + n_b - t: the coefficient of (sigma, Q) is the fraction
// of the C(m-t, n_a-t) partitions of the non-root positions whose two parts,
// together with Q, induce the factors. Coefficients are computed by full
// partition enumeration, never sampling, and whole product tables are cached
// per (type, n_a, n_b) because certificate verification reuses them heavily.
// The cache is not synchronized; keep flag products on one thread.

#include "quasiperm/counting.hpp"
#include "quasiperm/permutation.hpp"

#include <map>
#include <sstream>

namespace qp {

struct RootedPerm {
    Permutation base;
    std::vector<int> roots;  // sorted 1-based positions within base

    RootedPerm() = default;
    RootedPerm(Permutation b, std::vector<int> r) : base(std::move(b)), roots(std::move(r)) {
        std::sort(roots.begin(), roots.end());
        for (size_t i = 0; i < roots.size(); ++i) {
            if (roots[i] < 1 || roots[i] > base.order())
                throw ParseError("root position out of range: " + std::to_string(roots[i]));
            if (i > 0 && roots[i] == roots[i - 1])
                throw ParseError("duplicate root position: " + std::to_string(roots[i]));
        }
        if (roots.empty()) throw ParseError("empty root set");
    }

    int order() const { return base.order(); }
    bool operator==(const RootedPerm&) const = default;
};

struct RootedOrder {
    bool operator()(const RootedPerm& a, const RootedPerm& b) const {
        if (a.order() != b.order()) return a.order() < b.order();
        if (a.base.word != b.base.word) return a.base.word < b.base.word;
        return a.roots < b.roots;
    }
};

inline RootedPerm parse_rooted(const std::string& word, const std::vector<int>& roots) {
    return RootedPerm(parse_permutation(word), roots);
}

// Text form "word:r=p1,p2".
inline RootedPerm parse_rooted(const std::string& text) {
    auto sep = text.find(":r=");
    if (sep == std::string::npos) throw ParseError("missing :r= root marker");
    std::vector<int> roots;
    std::istringstream in(text.substr(sep + 3));
    std::string tok;
    while (std::getline(in, tok, ',')) roots.push_back(std::stoi(tok));
    return RootedPerm(parse_permutation(text.substr(0, sep)), roots);
}

inline std::string to_string(const RootedPerm& rp) {
    std::string s = to_string(rp.base) + ":r=";
    for (size_t i = 0; i < rp.roots.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(rp.roots[i]);
    }
    return s;
}

inline Permutation root_type(const RootedPerm& rp) { return pattern_of(rp.base, rp.roots); }

// All (pi, R) with pi in S_n and R a copy of tau, lexicographic in (pi, R).
inline std::vector<RootedPerm> enumerate_rooted(const Permutation& tau, int n) {
    const int t = tau.order();
    if (n < t || n > 7) throw std::invalid_argument("enumerate_rooted: need |tau| <= n <= 7");
    std::vector<RootedPerm> out;
    std::vector<int> subset(t);
    for (const auto& pi : enumerate_sn(n)) {
        // iterate t-subsets of [n] in lexicographic order
        for (int i = 0; i < t; ++i) subset[i] = i + 1;
        while (true) {
            if (pattern_of(pi, subset) == tau) out.push_back(RootedPerm(pi, subset));
            int i = t - 1;
            while (i >= 0 && subset[i] == n - (t - 1 - i)) --i;
            if (i < 0) break;
            ++subset[i];
            for (int j = i + 1; j < t; ++j) subset[j] = subset[j - 1] + 1;
        }
    }
    return out;
}

struct RootedSum {
    std::map<RootedPerm, Rational, RootedOrder> terms;

    RootedSum() = default;
    static RootedSum single(const RootedPerm& rp, const Rational& c = 1) {
        RootedSum s;
        s.add(rp, c);
        return s;
    }

    bool empty() const { return terms.empty(); }
    int size() const { return static_cast<int>(terms.size()); }

    Rational coeff(const RootedPerm& rp) const {
        auto it = terms.find(rp);
        return it == terms.end() ? Rational(0) : it->second;
    }

    void add(const RootedPerm& rp, const Rational& c) {
        if (c == 0) return;
        auto [it, inserted] = terms.emplace(rp, c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0) terms.erase(it);
        }
    }

    RootedSum& operator+=(const RootedSum& o) {
        for (const auto& [rp, c] : o.terms) add(rp, c);
        return *this;
    }
    RootedSum& operator-=(const RootedSum& o) {
        for (const auto& [rp, c] : o.terms) add(rp, -c);
        return *this;
    }
    RootedSum& operator*=(const Rational& c) {
        if (c == 0) {
            terms.clear();
            return *this;
        }
        for (auto& [rp, x] : terms) x *= c;
        return *this;
    }
    friend RootedSum operator+(RootedSum a, const RootedSum& b) { return a += b; }
    friend RootedSum operator-(RootedSum a, const RootedSum& b) { return a -= b; }
    friend RootedSum operator*(const Rational& c, RootedSum a) { return a *= c; }
    bool operator==(const RootedSum&) const = default;
};

// (pi, R) of order n contributes pi / C(n, |R|).
inline FormalSum unroot(const RootedSum& rs) {
    FormalSum out;
    for (const auto& [rp, c] : rs.terms)
        out.add(rp.base, c / Rational(binomial(rp.order(), static_cast<int>(rp.roots.size()))));
    return out;
}

namespace detail {

// Rooted pattern induced on a position subset S (which must contain the
// roots Q): base = pattern at S, roots = ranks of Q inside S.
inline RootedPerm induced_rooted(const Permutation& sigma, std::vector<int> S,
                                 const std::vector<int>& Q) {
    std::sort(S.begin(), S.end());
    std::vector<int> ranks;
    for (int q : Q) {
        auto it = std::lower_bound(S.begin(), S.end(), q);
        ranks.push_back(static_cast<int>(it - S.begin()) + 1);
    }
    return RootedPerm(pattern_of(sigma, S), ranks);
}

struct ProductTableKey {
    std::vector<int> tau;
    int na, nb;
    auto operator<=>(const ProductTableKey&) const = default;
};

using ProductTable = std::map<std::pair<RootedPerm, RootedPerm>,
                              std::map<RootedPerm, Rational, RootedOrder>,
                              bool (*)(const std::pair<RootedPerm, RootedPerm>&,
                                       const std::pair<RootedPerm, RootedPerm>&)>;

inline bool rooted_pair_less(const std::pair<RootedPerm, RootedPerm>& x,
                             const std::pair<RootedPerm, RootedPerm>& y) {
    RootedOrder lt;
    if (lt(x.first, y.first)) return true;
    if (lt(y.first, x.first)) return false;
    return lt(x.second, y.second);
}

// Builds every product with factor orders (na, nb) over root type tau in one
// sweep of S_m^tau: each (sigma, Q) and each partition of the free positions
// contributes 1/#partitions to the product of the induced factor pair.
inline const ProductTable& product_table(const Permutation& tau, int na, int nb) {
    static std::map<ProductTableKey, ProductTable> cache;
    ProductTableKey key{tau.word, na, nb};
    auto hit = cache.find(key);
    if (hit != cache.end()) return hit->second;

    const int t = tau.order();
    const int m = na + nb - t;
    if (m > 7) throw std::invalid_argument("flag_product: combined order above 7");
    ProductTable table(rooted_pair_less);
    const Rational weight = Rational(1) / Rational(binomial(m - t, na - t));

    std::vector<int> free_pos, part_a(na - t), part_b(nb - t), mask(m - t);
    std::fill(mask.begin(), mask.end(), 0);
    for (const auto& rooted : enumerate_rooted(tau, m)) {
        const Permutation& sigma = rooted.base;
        const std::vector<int>& Q = rooted.roots;
        free_pos.clear();
        {
            size_t qi = 0;
            for (int p = 1; p <= m; ++p) {
                if (qi < Q.size() && Q[qi] == p) {
                    ++qi;
                } else {
                    free_pos.push_back(p);
                }
            }
        }
        // enumerate subsets of free_pos of size na - t as part_a
        std::fill(mask.begin(), mask.end(), 0);
        std::fill(mask.begin(), mask.begin() + (na - t), 1);
        // iterate over all permutations of the 0/1 mask = all subsets
        std::sort(mask.begin(), mask.end(), std::greater<int>());
        do {
            int ia = 0, ib = 0;
            for (size_t i = 0; i < mask.size(); ++i) {
                if (mask[i]) {
                    part_a[ia++] = free_pos[i];
                } else {
                    part_b[ib++] = free_pos[i];
                }
            }
            std::vector<int> Sa = part_a, Sb = part_b;
            Sa.insert(Sa.end(), Q.begin(), Q.end());
            Sb.insert(Sb.end(), Q.begin(), Q.end());
            RootedPerm a = induced_rooted(sigma, Sa, Q);
            RootedPerm b = induced_rooted(sigma, Sb, Q);
            table[{a, b}][rooted] += weight;
        } while (std::prev_permutation(mask.begin(), mask.end()));
    }
    auto [it, ok] = cache.emplace(std::move(key), std::move(table));
    (void)ok;
    return it->second;
}

}  // namespace detail

inline RootedSum flag_product(const RootedPerm& a, const RootedPerm& b) {
    Permutation tau = root_type(a);
    if (!(root_type(b) == tau))
        throw std::invalid_argument("flag_product: mismatched root types");
    const auto& table = detail::product_table(tau, a.order(), b.order());
    auto it = table.find({a, b});
    RootedSum out;
    if (it != table.end())
        for (const auto& [rp, c] : it->second) out.add(rp, c);
    return out;
}

inline RootedSum flag_product(const RootedSum& a, const RootedSum& b) {
    RootedSum out;
    for (const auto& [rpa, ca] : a.terms)
        for (const auto& [rpb, cb] : b.terms) {
            RootedSum p = flag_product(rpa, rpb);
            p *= ca * cb;
            out += p;
        }
    return out;
}

// Quarter-turn rotation of the permutation matrix, tracking roots: the point
// (i, pi(i)) moves to (n+1-pi(i), i), so a root at position p lands at
// position n+1-pi(p). Sends 12-rooted sums to 21-rooted sums.
inline RootedPerm quarter_turn(const RootedPerm& rp) {
    const int n = rp.order();
    std::vector<int> roots;
    for (int p : rp.roots) roots.push_back(n + 1 - rp.base(p));
    return RootedPerm(apply_symmetry(Symmetry::rot90, rp.base), roots);
}

inline RootedSum quarter_turn(const RootedSum& rs) {
    RootedSum out;
    for (const auto& [rp, c] : rs.terms) out.add(quarter_turn(rp), c);
    return out;
}

}  // namespace qp
