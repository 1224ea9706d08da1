#pragma once

// Exact pattern counting. Three layers:
//   - Fenwick-tree sweeps give every 3-pattern count in O(n log n).
//   - 2143 and 3412 reduce to a 2D dominance sum over inversion pairs,
//     O(n^2 log n).
//   - 2413 and 3142 are the two patterns that do not split into a pair of
//     independent 2-point blocks: an occurrence imposes three constraints
//     between its two ascents, so we count with an offline 3D dominance
//     pass (divide and conquer over positions, merge by value, Fenwick over
//     the third coordinate), O(n^2 log^2 n).
// Everything is validated against the subset-enumeration oracle in tests.
// The quadratic kernels materialize one record per ascent/inversion, so
// memory is O(n^2); fine for the target sizes (n ~ 2000).

#include "quasiperm/permutation.hpp"

#include <cstdint>
#include <numeric>

namespace qp {

struct Fenwick {
    std::vector<std::int64_t> tree;
    int n;

    explicit Fenwick(int n) : tree(n + 1, 0), n(n) {}
    void add(int i, std::int64_t v) {
        for (; i <= n; i += i & -i) tree[i] += v;
    }
    std::int64_t prefix(int i) const {  // sum over 1..i
        std::int64_t s = 0;
        for (; i > 0; i -= i & -i) s += tree[i];
        return s;
    }
};

struct SixCounts {
    std::int64_t c123 = 0, c321 = 0, c2143 = 0, c3412 = 0, c2413 = 0, c3142 = 0;
    bool operator==(const SixCounts&) const = default;
};

namespace detail {

// Per-position dominance profile: before/after x smaller/greater counts.
struct Quadrants {
    std::vector<std::int64_t> bs, bg, as, ag;
};

inline Quadrants quadrants(const Permutation& pi) {
    const int n = pi.order();
    Quadrants q{std::vector<std::int64_t>(n), std::vector<std::int64_t>(n),
                std::vector<std::int64_t>(n), std::vector<std::int64_t>(n)};
    Fenwick fw(n);
    for (int m = 1; m <= n; ++m) {
        int v = pi(m);
        q.bs[m - 1] = fw.prefix(v - 1);
        q.bg[m - 1] = (m - 1) - q.bs[m - 1];
        q.as[m - 1] = (v - 1) - q.bs[m - 1];
        q.ag[m - 1] = (n - v) - q.bg[m - 1];
        fw.add(v, 1);
    }
    return q;
}

inline std::int64_t choose2(std::int64_t m) { return m * (m - 1) / 2; }

// Counts of all six 3-patterns, keyed 123,132,213,231,312,321.
inline std::array<std::int64_t, 6> count3_all(const Permutation& pi) {
    Quadrants q = quadrants(pi);
    std::int64_t c123 = 0, c321 = 0, last_sm = 0, last_gr = 0, first_sm = 0, first_gr = 0;
    for (size_t m = 0; m < q.bs.size(); ++m) {
        c123 += q.bs[m] * q.ag[m];  // m is the middle point
        c321 += q.bg[m] * q.as[m];
        last_sm += choose2(q.bs[m]);   // m last, both before smaller: 123 or 213
        last_gr += choose2(q.bg[m]);   // m last, both before greater: 231 or 321
        first_gr += choose2(q.ag[m]);  // m first, both after greater: 123 or 132
        first_sm += choose2(q.as[m]);  // m first, both after smaller: 312 or 321
    }
    return {c123, first_gr - c123, last_sm - c123, last_gr - c321, first_sm - c321, c321};
}

// #2143: choose two inversions (a,b), (c,d) with b < c and pi(a) < pi(d);
// the chain pi(b) < pi(a) < pi(d) < pi(c) is then forced. One sweep over
// positions: at position p, first answer the queries of inversions starting
// at p, then insert the inversions ending at p.
inline std::int64_t count_2143(const Permutation& pi) {
    const int n = pi.order();
    Fenwick fw(n);
    std::int64_t total = 0;
    for (int p = 1; p <= n; ++p) {
        int vp = pi(p);
        for (int d = p + 1; d <= n; ++d)
            if (pi(d) < vp) total += fw.prefix(pi(d) - 1);
        for (int a = 1; a < p; ++a)
            if (pi(a) > vp) fw.add(pi(a), 1);
    }
    return total;
}

// Offline 3D dominance machinery for 2413. Points are ascents (a,b)
// recorded at position b as (va, vb) = (pi(a), pi(b)); a query at position c
// asks for points with b < c, va <= x, vb > y, weighted by sign.
struct Dominance3D {
    struct Point {
        std::int32_t va, vb;
    };
    struct Query {
        std::int32_t x, y, sign;
    };

    int n;
    std::vector<Point> pts;
    std::vector<Query> qs;
    std::vector<std::int64_t> pstart, qstart;  // bucket offsets by position

    // Fenwick with epoch-tagged cells so each divide-and-conquer node gets a
    // logically fresh tree without O(n) clears.
    std::vector<std::int64_t> tree;
    std::vector<std::int32_t> stamp;
    std::int32_t epoch = 0;

    explicit Dominance3D(int n)
        : n(n), pstart(n + 2, 0), qstart(n + 2, 0), tree(n + 1, 0), stamp(n + 1, -1) {}

    void fw_add(int i) {
        for (; i <= n; i += i & -i) {
            if (stamp[i] != epoch) {
                stamp[i] = epoch;
                tree[i] = 0;
            }
            ++tree[i];
        }
    }
    std::int64_t fw_prefix(int i) const {
        std::int64_t s = 0;
        for (; i > 0; i -= i & -i)
            if (stamp[i] == epoch) s += tree[i];
        return s;
    }

    // Cross step: points in the left half of the position range against
    // queries in the right half, merged in increasing va / x order.
    std::int64_t cross(std::int64_t pl, std::int64_t pm, std::int64_t ql, std::int64_t qm,
                       std::int64_t qr) {
        std::int64_t total = 0;
        ++epoch;
        std::int64_t inserted = 0, ip = pl;
        for (std::int64_t iq = qm; iq < qr; ++iq) {
            while (ip < pm && pts[ip].va <= qs[iq].x) {
                fw_add(pts[ip].vb);
                ++inserted;
                ++ip;
            }
            total += qs[iq].sign * (inserted - fw_prefix(qs[iq].y));
        }
        (void)ql;
        return total;
    }

    std::int64_t solve(int lo, int hi) {  // position buckets [lo, hi]
        if (lo >= hi) return 0;
        int mid = (lo + hi) / 2;
        std::int64_t total = solve(lo, mid) + solve(mid + 1, hi);
        total += cross(pstart[lo], pstart[mid + 1], qstart[lo], qstart[mid + 1],
                       qstart[hi + 1]);
        // Restore "sorted by value" for the parent's merge.
        std::inplace_merge(pts.begin() + pstart[lo], pts.begin() + pstart[mid + 1],
                           pts.begin() + pstart[hi + 1],
                           [](const Point& a, const Point& b) { return a.va < b.va; });
        std::inplace_merge(qs.begin() + qstart[lo], qs.begin() + qstart[mid + 1],
                           qs.begin() + qstart[hi + 1],
                           [](const Query& a, const Query& b) { return a.x < b.x; });
        return total;
    }
};

// #2413: for ascents (a,b), (c,d) an occurrence needs b < c together with
// pi(c) < pi(a) < pi(d) and pi(b) > pi(d). The value-interval condition on
// pi(a) is split into two signed dominance queries.
inline std::int64_t count_2413(const Permutation& pi) {
    const int n = pi.order();
    if (n < 4) return 0;
    Dominance3D d(n);

    std::vector<std::int64_t> pcount(n + 2, 0), qcount(n + 2, 0);
    for (int p = 1; p <= n; ++p) {
        for (int q = p + 1; q <= n; ++q) {
            if (pi(p) < pi(q)) {
                ++pcount[q];      // point recorded at the ascent's right end
                qcount[p] += 2;   // two signed queries at the ascent's left end
            }
        }
    }
    for (int p = 1; p <= n + 1; ++p) {
        d.pstart[p] = d.pstart[p - 1] + pcount[p - 1];
        d.qstart[p] = d.qstart[p - 1] + qcount[p - 1];
    }
    d.pts.resize(d.pstart[n + 1]);
    d.qs.resize(d.qstart[n + 1]);

    std::vector<std::int64_t> pfill(d.pstart.begin(), d.pstart.end());
    std::vector<std::int64_t> qfill(d.qstart.begin(), d.qstart.end());
    for (int a = 1; a <= n; ++a) {
        for (int b = a + 1; b <= n; ++b) {
            if (pi(a) >= pi(b)) continue;
            d.pts[pfill[b]++] = {pi(a), pi(b)};
            // ascent (a,b) doubles as a query pair (c,d) = (a,b):
            d.qs[qfill[a]++] = {pi(b) - 1, pi(b), +1};
            d.qs[qfill[a]++] = {pi(a), pi(b), -1};
        }
    }
    // Within each position bucket, sort by the merge coordinate.
    for (int p = 1; p <= n; ++p) {
        std::sort(d.pts.begin() + d.pstart[p], d.pts.begin() + d.pstart[p + 1],
                  [](const auto& a, const auto& b) { return a.va < b.va; });
        std::sort(d.qs.begin() + d.qstart[p], d.qs.begin() + d.qstart[p + 1],
                  [](const auto& a, const auto& b) { return a.x < b.x; });
    }
    return d.solve(1, n);
}

}  // namespace detail

inline SixCounts count_six_fast(const Permutation& pi) {
    SixCounts c;
    auto three = detail::count3_all(pi);
    c.c123 = three[0];
    c.c321 = three[5];
    c.c2143 = detail::count_2143(pi);
    // complement turns an occurrence of 3412 into one of 2143 and vice versa
    c.c3412 = detail::count_2143(apply_symmetry(Symmetry::complement, pi));
    c.c2413 = detail::count_2413(pi);
    // reversing positions maps 3142 occurrences onto 2413 occurrences
    c.c3142 = detail::count_2413(apply_symmetry(Symmetry::reverse, pi));
    return c;
}

// Exact #(sigma, pi). Dispatches to the optimized counters once subset
// enumeration would start to hurt; otherwise enumerates (and for n <= 20 the
// enumeration *is* the reference implementation).
inline BigInt count_pattern(const Permutation& sigma, const Permutation& pi) {
    const int k = sigma.order(), n = pi.order();
    if (k > n) return 0;
    if (n <= 20 || k > 4) return count_pattern_enum(sigma, pi);
    if (k == 1) return n;
    if (k == 2) {
        Fenwick fw(n);
        std::int64_t inv = 0;
        for (int p = 1; p <= n; ++p) {
            inv += (p - 1) - fw.prefix(pi(p));
            fw.add(pi(p), 1);
        }
        std::int64_t asc = static_cast<std::int64_t>(n) * (n - 1) / 2 - inv;
        return sigma.word[0] == 1 ? asc : inv;
    }
    if (k == 3) {
        static const std::vector<std::vector<int>> order3 = {{1, 2, 3}, {1, 3, 2}, {2, 1, 3},
                                                             {2, 3, 1}, {3, 1, 2}, {3, 2, 1}};
        auto all = detail::count3_all(pi);
        for (size_t i = 0; i < order3.size(); ++i)
            if (sigma.word == order3[i]) return all[i];
    }
    if (sigma.word == std::vector<int>{2, 1, 4, 3}) return detail::count_2143(pi);
    if (sigma.word == std::vector<int>{3, 4, 1, 2})
        return detail::count_2143(apply_symmetry(Symmetry::complement, pi));
    if (sigma.word == std::vector<int>{2, 4, 1, 3}) return detail::count_2413(pi);
    if (sigma.word == std::vector<int>{3, 1, 4, 2})
        return detail::count_2413(apply_symmetry(Symmetry::reverse, pi));
    return count_pattern_enum(sigma, pi);
}

// d(sigma, pi) = #(sigma,pi) / C(|pi|,|sigma|); zero when sigma is too long.
inline Rational density(const Permutation& sigma, const Permutation& pi) {
    if (sigma.order() > pi.order()) return 0;
    return Rational(count_pattern(sigma, pi), binomial(pi.order(), sigma.order()));
}

inline Rational formal_density(const FormalSum& rho, const Permutation& pi) {
    Rational total = 0;
    for (const auto& [sigma, c] : rho.terms) total += c * density(sigma, pi);
    return total;
}

// Degree-n representative: sum of d(rho, pi) * pi over all pi in S_n. By the
// two-step sampling identity it evaluates like rho against any longer
// permutation.
inline FormalSum project_up(const FormalSum& rho, int n) {
    int maxorder = 0;
    for (const auto& [sigma, c] : rho.terms) maxorder = std::max(maxorder, sigma.order());
    if (n < maxorder) throw std::invalid_argument("project_up: n below the largest term");
    if (n > 8) throw std::invalid_argument("project_up: n capped at 8");
    FormalSum out;
    for (const auto& pi : enumerate_sn(n)) out.add(pi, formal_density(rho, pi));
    return out;
}

// The statistic d(rho*, pi), computed through the fast counters.
inline Rational rho_star_statistic(const Permutation& pi) {
    if (pi.order() < 4) throw std::invalid_argument("rho_star_statistic: order must be >= 4");
    SixCounts c = count_six_fast(pi);
    const int n = pi.order();
    Rational d3 = Rational(c.c123 + c.c321, 1) / binomial(n, 3);
    Rational d4 = (Rational(c.c2143 + c.c3412, 1) +
                   Rational(c.c2413 + c.c3142, 2)) / binomial(n, 4);
    return d3 + d4;
}

}  // namespace qp
