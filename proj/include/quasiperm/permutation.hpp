#pragma once

// Permutations in one-line notation, the dihedral symmetries of their
// permutation matrices, pattern extraction, and formal rational linear
// combinations. Pattern *counting* lives in counting.hpp; this header keeps
// only the subset-enumeration oracle so the fast counters can be checked
// against it.

#include "quasiperm/rational.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <initializer_list>
#include <map>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

namespace qp {

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Permutation {
    // word[i] = value at position i+1; a rearrangement of 1..n.
    std::vector<int> word;

    Permutation() = default;
    explicit Permutation(std::vector<int> w) : word(std::move(w)) {}

    int order() const { return static_cast<int>(word.size()); }
    int operator()(int pos) const { return word[pos - 1]; }  // 1-based
    bool operator==(const Permutation&) const = default;

    Permutation inverse() const {
        std::vector<int> w(word.size());
        for (int i = 0; i < order(); ++i) w[word[i] - 1] = i + 1;
        return Permutation(w);
    }
};

// Order first, then lexicographic on the word. Fixes every enumeration and
// serialization order in the library.
struct PermOrderLex {
    bool operator()(const Permutation& a, const Permutation& b) const {
        if (a.order() != b.order()) return a.order() < b.order();
        return a.word < b.word;
    }
};

inline void validate_word(const std::vector<int>& w) {
    const int n = static_cast<int>(w.size());
    std::vector<char> seen(n + 1, 0);
    for (int v : w) {
        if (v < 1 || v > n) throw ParseError("value out of range: " + std::to_string(v));
        if (seen[v]) throw ParseError("duplicate value: " + std::to_string(v));
        seen[v] = 1;
    }
}

inline Permutation make_permutation(std::vector<int> w) {
    if (w.empty()) throw ParseError("empty input");
    validate_word(w);
    return Permutation(std::move(w));
}

// Digit string for n <= 9 ("2143") or comma-separated integers ("10,2,...").
inline Permutation parse_permutation(const std::string& text) {
    if (text.empty()) throw ParseError("empty input");
    std::vector<int> w;
    if (text.find(',') == std::string::npos) {
        for (char c : text) {
            if (!std::isdigit(static_cast<unsigned char>(c)))
                throw ParseError(std::string("unexpected character: ") + c);
            w.push_back(c - '0');
        }
    } else {
        size_t start = 0;
        while (start <= text.size()) {
            size_t comma = text.find(',', start);
            std::string tok = text.substr(start, comma == std::string::npos
                                                     ? std::string::npos
                                                     : comma - start);
            if (tok.empty()) throw ParseError("empty entry in word");
            size_t pos = 0;
            int v;
            try {
                v = std::stoi(tok, &pos);
            } catch (const std::exception&) {
                throw ParseError("bad entry in word: " + tok);
            }
            if (pos != tok.size()) throw ParseError("bad entry in word: " + tok);
            w.push_back(v);
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
    }
    return make_permutation(std::move(w));
}

inline std::string to_string(const Permutation& p) {
    std::string s;
    if (p.order() <= 9) {
        for (int v : p.word) s += static_cast<char>('0' + v);
    } else {
        for (int i = 0; i < p.order(); ++i) {
            if (i) s += ',';
            s += std::to_string(p.word[i]);
        }
    }
    return s;
}

inline Permutation identity_permutation(int n) {
    std::vector<int> w(n);
    std::iota(w.begin(), w.end(), 1);
    return Permutation(w);
}

// All of S_n in lexicographic order. Guarded: 10! is the largest list we ever
// materialize.
inline std::vector<Permutation> enumerate_sn(int n) {
    if (n < 1 || n > 10) throw std::invalid_argument("enumerate_sn: n must be in 1..10");
    std::vector<int> w(n);
    std::iota(w.begin(), w.end(), 1);
    std::vector<Permutation> out;
    do {
        out.push_back(Permutation(w));
    } while (std::next_permutation(w.begin(), w.end()));
    return out;
}

// The eight symmetries of the square acting on permutation matrices
// (points (i, pi(i))): generated by reverse = flip positions, complement =
// flip values, inverse = transpose.
enum class Symmetry {
    identity,
    reverse,
    complement,
    rot180,        // reverse then complement
    inverse,
    rot90,         // inverse then reverse: i -> pi^{-1}(n+1-i)
    rot270,        // reverse then inverse: i -> n+1-pi^{-1}(i)
    antitranspose  // all three combined
};

inline constexpr std::array<Symmetry, 8> all_symmetries = {
    Symmetry::identity,  Symmetry::reverse, Symmetry::complement,
    Symmetry::rot180,    Symmetry::inverse, Symmetry::rot90,
    Symmetry::rot270,    Symmetry::antitranspose};

inline Permutation apply_symmetry(Symmetry s, const Permutation& p) {
    const int n = p.order();
    std::vector<int> w(n);
    switch (s) {
        case Symmetry::identity:
            return p;
        case Symmetry::reverse:
            for (int i = 1; i <= n; ++i) w[i - 1] = p(n + 1 - i);
            break;
        case Symmetry::complement:
            for (int i = 1; i <= n; ++i) w[i - 1] = n + 1 - p(i);
            break;
        case Symmetry::rot180:
            for (int i = 1; i <= n; ++i) w[i - 1] = n + 1 - p(n + 1 - i);
            break;
        case Symmetry::inverse:
            return p.inverse();
        case Symmetry::rot90: {
            Permutation q = p.inverse();
            for (int i = 1; i <= n; ++i) w[i - 1] = q(n + 1 - i);
            break;
        }
        case Symmetry::rot270: {
            Permutation q = p.inverse();
            for (int i = 1; i <= n; ++i) w[i - 1] = n + 1 - q(i);
            break;
        }
        case Symmetry::antitranspose: {
            Permutation q = p.inverse();
            for (int i = 1; i <= n; ++i) w[i - 1] = n + 1 - q(n + 1 - i);
            break;
        }
    }
    return Permutation(w);
}

// Pattern induced at a set of positions (1-based, strictly increasing).
inline Permutation pattern_of(const Permutation& p, const std::vector<int>& positions) {
    const int k = static_cast<int>(positions.size());
    std::vector<std::pair<int, int>> by_value(k);
    for (int t = 0; t < k; ++t) by_value[t] = {p(positions[t]), t};
    std::sort(by_value.begin(), by_value.end());
    std::vector<int> w(k);
    for (int r = 0; r < k; ++r) w[by_value[r].second] = r + 1;
    return Permutation(w);
}

// Subset-enumeration pattern count. This is the oracle every optimized
// counter is validated against; counts are bounded by C(n,k) so an unsigned
// 64-bit accumulator is safe for every size this library can enumerate.
inline BigInt count_pattern_enum(const Permutation& sigma, const Permutation& pi) {
    const int k = sigma.order(), n = pi.order();
    if (k == 0) return 1;
    if (k > n) return 0;
    // For placement step t, the tightest already-placed neighbours of
    // sigma(t) in value give the only comparisons that must be checked.
    std::vector<int> lo(k, -1), hi(k, -1);
    for (int t = 1; t < k; ++t) {
        for (int s = 0; s < t; ++s) {
            if (sigma.word[s] < sigma.word[t]) {
                if (lo[t] == -1 || sigma.word[s] > sigma.word[lo[t]]) lo[t] = s;
            } else {
                if (hi[t] == -1 || sigma.word[s] < sigma.word[hi[t]]) hi[t] = s;
            }
        }
    }
    unsigned long long total = 0;
    std::vector<int> val(k);
    auto rec = [&](auto&& self, int t, int from) -> void {
        if (t == k) {
            ++total;
            return;
        }
        for (int pos = from; pos <= n - (k - 1 - t); ++pos) {
            int v = pi.word[pos - 1];
            if (lo[t] >= 0 && val[lo[t]] >= v) continue;
            if (hi[t] >= 0 && val[hi[t]] <= v) continue;
            val[t] = v;
            self(self, t + 1, pos + 1);
        }
    };
    rec(rec, 0, 1);
    return BigInt(total);
}

// Formal rational combination of permutations. Zero coefficients are never
// stored, so equality of maps is equality of sums.
struct FormalSum {
    std::map<Permutation, Rational, PermOrderLex> terms;

    FormalSum() = default;
    FormalSum(std::initializer_list<std::pair<std::string, Rational>> init) {
        for (const auto& [word, c] : init) add(parse_permutation(word), c);
    }

    static FormalSum single(const Permutation& p, const Rational& c = 1) {
        FormalSum s;
        s.add(p, c);
        return s;
    }

    bool empty() const { return terms.empty(); }
    int size() const { return static_cast<int>(terms.size()); }

    Rational coeff(const Permutation& p) const {
        auto it = terms.find(p);
        return it == terms.end() ? Rational(0) : it->second;
    }

    void add(const Permutation& p, const Rational& c) {
        if (c == 0) return;
        auto [it, inserted] = terms.emplace(p, c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0) terms.erase(it);
        }
    }

    FormalSum& operator+=(const FormalSum& o) {
        for (const auto& [p, c] : o.terms) add(p, c);
        return *this;
    }
    FormalSum& operator-=(const FormalSum& o) {
        for (const auto& [p, c] : o.terms) add(p, -c);
        return *this;
    }
    FormalSum& operator*=(const Rational& c) {
        if (c == 0) {
            terms.clear();
            return *this;
        }
        for (auto& [p, x] : terms) x *= c;
        return *this;
    }

    friend FormalSum operator+(FormalSum a, const FormalSum& b) { return a += b; }
    friend FormalSum operator-(FormalSum a, const FormalSum& b) { return a -= b; }
    friend FormalSum operator*(const Rational& c, FormalSum a) { return a *= c; }
    friend FormalSum operator-(FormalSum a) { return a *= Rational(-1); }
    bool operator==(const FormalSum&) const = default;
};

inline FormalSum apply_symmetry(Symmetry s, const FormalSum& rho) {
    FormalSum out;
    for (const auto& [p, c] : rho.terms) out.add(apply_symmetry(s, p), c);
    return out;
}

inline std::string to_string(const FormalSum& rho) {
    if (rho.empty()) return "0";
    std::string s;
    bool first = true;
    for (const auto& [p, c] : rho.terms) {
        if (!first) s += c > 0 ? " + " : " - ";
        else if (c < 0) s += "-";
        Rational a = c > 0 ? c : Rational(-c);
        if (a != 1) s += to_string(a) + "*";
        s += "(" + to_string(p) + ")";
        first = false;
    }
    return s;
}

// The six-term quasirandomness statistic this library is built around.
inline FormalSum rho_star() {
    return FormalSum{{"123", 1},  {"321", 1},          {"2143", 1},
                     {"3412", 1}, {"2413", {1, 2}},    {"3142", {1, 2}}};
}

}  // namespace qp
