#pragma once

// Sampling-side plumbing: turn bivariate observations into a permutation,
// evaluate the exact pattern statistic on it, and calibrate an independence
// test by comparing against seeded uniform shuffles of the y-ranks. The
// statistic's population minimum over permutons is 11/24, attained exactly
// when the coordinates are independent, so the test rejects on large
// two-sided deviation from that value.

#include "quasiperm/counting.hpp"
#include "quasiperm/rng.hpp"

#include <algorithm>
#include <cstdint>
#include <istream>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qp {

struct SampleSeries {
    std::vector<std::pair<double, double>> pairs;
    int size() const { return static_cast<int>(pairs.size()); }
};

struct TiesPresent : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline bool has_ties(const SampleSeries& s) {
    std::vector<double> v(s.pairs.size());
    for (int axis = 0; axis < 2; ++axis) {
        for (std::size_t i = 0; i < s.pairs.size(); ++i)
            v[i] = axis == 0 ? s.pairs[i].first : s.pairs[i].second;
        std::sort(v.begin(), v.end());
        if (std::adjacent_find(v.begin(), v.end()) != v.end()) return true;
    }
    return false;
}

// Sorting the points by x, position i receives the y-rank of its point.
// Ties are an error by default because the underlying model assumes
// continuous marginals; with break_ties they are resolved by seeded uniform
// random priorities, deterministically per seed.
inline Permutation ranks_to_permutation(const SampleSeries& s, bool break_ties = false,
                                        std::uint64_t seed = 0) {
    const int n = s.size();
    if (n < 1) throw std::invalid_argument("ranks_to_permutation: empty series");
    if (has_ties(s)) {
        if (!break_ties) throw TiesPresent("ranks_to_permutation: tied coordinates");
    }
    std::vector<std::uint64_t> prio(2 * n, 0);
    if (break_ties) {
        SplitMix64 rng(seed);
        for (std::uint64_t& p : prio) p = rng.next();
    }

    std::vector<int> by_x(n), by_y(n);
    std::iota(by_x.begin(), by_x.end(), 0);
    std::iota(by_y.begin(), by_y.end(), 0);
    std::sort(by_x.begin(), by_x.end(), [&](int a, int b) {
        if (s.pairs[a].first != s.pairs[b].first) return s.pairs[a].first < s.pairs[b].first;
        return prio[a] < prio[b];
    });
    std::sort(by_y.begin(), by_y.end(), [&](int a, int b) {
        if (s.pairs[a].second != s.pairs[b].second) return s.pairs[a].second < s.pairs[b].second;
        return prio[n + a] < prio[n + b];
    });

    std::vector<int> y_rank(n);
    for (int r = 0; r < n; ++r) y_rank[by_y[r]] = r + 1;
    std::vector<int> word(n);
    for (int pos = 0; pos < n; ++pos) word[pos] = y_rank[by_x[pos]];
    return Permutation(word);
}

struct TestReport {
    int n = 0;
    Rational statistic;       // d(rho*, pi_n)
    Rational deviation;       // statistic - 11/24
    Rational p_value;         // (1 + #{null >= observed}) / (shuffles + 1)
    int shuffles = 0;
    std::uint64_t seed = 0;
    bool ties_broken = false;

    bool operator==(const TestReport&) const = default;
};

// Two-sided Monte Carlo permutation test: the null resamples the y-ranks
// uniformly, which is exactly the distribution of the rank permutation under
// independent continuous coordinates. Replicates draw their seeds from one
// master stream up front, so evaluation order cannot change the outcome.
inline TestReport independence_test(const SampleSeries& s, int shuffles, std::uint64_t seed,
                                    bool break_ties = false) {
    if (s.size() < 4) throw std::invalid_argument("independence_test: need at least 4 samples");
    if (shuffles < 100) throw std::invalid_argument("independence_test: need at least 100 shuffles");

    SplitMix64 master(seed);
    const std::uint64_t tie_seed = master.next();
    const bool ties = has_ties(s);
    const Permutation pi = ranks_to_permutation(s, break_ties, tie_seed);

    const int n = s.size();
    const Rational center(11, 24);
    auto absolute = [](Rational r) { return r < 0 ? Rational(-r) : r; };

    TestReport report;
    report.n = n;
    report.statistic = rho_star_statistic(pi);
    report.deviation = report.statistic - center;
    report.shuffles = shuffles;
    report.seed = seed;
    report.ties_broken = ties && break_ties;

    const Rational observed = absolute(report.deviation);
    std::vector<std::uint64_t> replicate_seeds(shuffles);
    for (std::uint64_t& r : replicate_seeds) r = master.next();

    int at_least = 0;
    std::vector<int> word(n);
    for (int r = 0; r < shuffles; ++r) {
        SplitMix64 rng(replicate_seeds[r]);
        std::iota(word.begin(), word.end(), 1);
        rng.shuffle(word);
        const Rational null_dev = absolute(rho_star_statistic(Permutation(word)) - center);
        if (null_dev >= observed) ++at_least;
    }
    report.p_value = Rational(1 + at_least, shuffles + 1);
    return report;
}

// Reads `x,y` lines; one optional header line is skipped when its fields do
// not parse as numbers. Blank lines are ignored.
inline SampleSeries read_sample_series(std::istream& in) {
    SampleSeries s;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        const std::size_t comma = line.find(',');
        if (comma == std::string::npos)
            throw std::invalid_argument("read_sample_series: expected `x,y` on line: " + line);
        const std::string xs = line.substr(0, comma);
        const std::string ys = line.substr(comma + 1);
        try {
            std::size_t used_x = 0, used_y = 0;
            const double x = std::stod(xs, &used_x);
            const double y = std::stod(ys, &used_y);
            if (xs.find_first_not_of(" \t", used_x) != std::string::npos ||
                ys.find_first_not_of(" \t", used_y) != std::string::npos)
                throw std::invalid_argument("trailing characters");
            s.pairs.emplace_back(x, y);
        } catch (const std::exception&) {
            if (first) {
                first = false;
                continue;  // header row
            }
            throw std::invalid_argument("read_sample_series: bad numeric line: " + line);
        }
        first = false;
    }
    return s;
}

}  // namespace qp
