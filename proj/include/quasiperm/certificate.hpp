#pragma once

// The sum-of-squares certificate behind the forcing identity: five sums of
// rooted order-4 differences per root orientation and one shared positive
// definite matrix. The data lives twice, as compiled-in constants guarded
// by a checksum and as a bundled text file parsed at run time; the two
// copies must agree before any verification result is trusted.

#include "quasiperm/counting.hpp"
#include "quasiperm/matrix.hpp"
#include "quasiperm/rooted.hpp"

#include <array>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>

namespace qp {

struct Certificate {
    std::array<RootedSum, 5> x;  // ascending root pairs (type 12)
    std::array<RootedSum, 5> y;  // descending root pairs (type 21)
    Mat M;                       // 5x5 symmetric, shared by both blocks
    FormalSum rho;
    Rational target;
    bool operator==(const Certificate&) const = default;
};

namespace detail {

inline constexpr const char* kCertTarget = "11/24";

inline constexpr const char* kCertRho =
    "1*(123) + 1*(321) + 1*(2143) + 1*(3412) + 1/2*(2413) + 1/2*(3142)";

inline constexpr const char* kCertX[5] = {
    "(1234:r=1,2 - 1243:r=1,2) + (1234:r=1,4 - 1324:r=1,4) + "
    "(1234:r=2,3 - 4231:r=2,3) + (1234:r=3,4 - 2134:r=3,4) + "
    "(1342:r=1,4 - 1432:r=1,4) + (1423:r=1,2 - 1432:r=1,2) + "
    "(2314:r=3,4 - 3214:r=3,4) + (2341:r=1,2 - 2314:r=1,2) + "
    "(2341:r=2,3 - 1342:r=2,3) + (2413:r=1,4 - 2143:r=1,4) + "
    "(3124:r=1,4 - 3214:r=1,4) + (3142:r=2,3 - 2143:r=2,3) + "
    "(3412:r=1,2 - 3421:r=1,2) + (3412:r=3,4 - 4312:r=3,4) + "
    "(4123:r=2,3 - 3124:r=2,3) + (4123:r=3,4 - 1423:r=3,4)",

    "(1234:r=1,3 - 1432:r=1,3) + (1234:r=2,4 - 3214:r=2,4) + "
    "(2341:r=1,3 - 2143:r=1,3) + (4123:r=2,4 - 2143:r=2,4)",

    "(1243:r=1,4 - 1423:r=1,4) + (1243:r=2,3 - 3241:r=2,3) + "
    "(1324:r=1,2 - 1342:r=1,2) + (1324:r=2,4 - 2314:r=2,4) + "
    "(1342:r=2,3 - 2341:r=2,3) + (1423:r=3,4 - 4123:r=3,4) + "
    "(2134:r=1,3 - 2431:r=1,3) + (2134:r=2,4 - 3124:r=2,4) + "
    "(2143:r=1,3 - 2341:r=1,3) + (2143:r=1,4 - 2413:r=1,4) + "
    "(2143:r=2,3 - 3142:r=2,3) + (2143:r=2,4 - 4123:r=2,4) + "
    "(2314:r=1,2 - 2341:r=1,2) + (2413:r=3,4 - 4213:r=3,4) + "
    "(3124:r=2,3 - 4123:r=2,3) + (3142:r=2,4 - 4132:r=2,4)",

    "(1324:r=2,4 - 2314:r=2,4) + (1324:r=3,4 - 3124:r=3,4) + "
    "(1342:r=2,3 - 2341:r=2,3) + (1423:r=3,4 - 4123:r=3,4) + "
    "(2134:r=1,3 - 2431:r=1,3) + (2134:r=1,4 - 2314:r=1,4) + "
    "(2134:r=2,3 - 4132:r=2,3) + (2134:r=2,4 - 3124:r=2,4) + "
    "(2143:r=1,3 - 2341:r=1,3) + (2143:r=1,4 - 2413:r=1,4) + "
    "(2143:r=2,3 - 3142:r=2,3) + (2143:r=2,4 - 4123:r=2,4) + "
    "(2314:r=1,2 - 2341:r=1,2) + (2413:r=1,2 - 2431:r=1,2) + "
    "(3124:r=2,3 - 4123:r=2,3) + (3142:r=2,4 - 4132:r=2,4)",

    "(1324:r=2,4 - 2314:r=2,4) + (1342:r=1,3 - 1243:r=1,3) + "
    "(1423:r=1,3 - 1324:r=1,3) + (2134:r=1,3 - 2431:r=1,3) + "
    "(2134:r=2,4 - 3124:r=2,4) + (3142:r=2,4 - 4132:r=2,4) + "
    "(3241:r=1,3 - 3142:r=1,3) + (4213:r=2,4 - 1243:r=2,4)",
};

inline constexpr const char* kCertY[5] = {
    "(4321:r=3,4 - 3421:r=3,4) + (4321:r=1,4 - 4231:r=1,4) + "
    "(4321:r=2,3 - 1324:r=2,3) + (4321:r=1,2 - 4312:r=1,2) + "
    "(3241:r=3,4 - 2341:r=3,4) + (2431:r=1,4 - 2341:r=1,4) + "
    "(4213:r=1,4 - 4123:r=1,4) + (3214:r=2,3 - 4213:r=2,3) + "
    "(3214:r=1,2 - 3241:r=1,2) + (2413:r=2,3 - 3412:r=2,3) + "
    "(4132:r=1,2 - 4123:r=1,2) + (3142:r=1,4 - 3412:r=1,4) + "
    "(2143:r=1,2 - 2134:r=1,2) + (2143:r=3,4 - 1243:r=3,4) + "
    "(1432:r=3,4 - 4132:r=3,4) + (1432:r=2,3 - 2431:r=2,3)",

    "(4321:r=2,4 - 2341:r=2,4) + (4321:r=1,3 - 4123:r=1,3) + "
    "(3214:r=1,3 - 3412:r=1,3) + (1432:r=2,4 - 3412:r=2,4)",

    "(3421:r=2,4 - 2431:r=2,4) + (3421:r=1,3 - 3124:r=1,3) + "
    "(4231:r=2,4 - 3241:r=2,4) + (4231:r=1,2 - 4213:r=1,2) + "
    "(3241:r=1,2 - 3214:r=1,2) + (2431:r=2,3 - 1432:r=2,3) + "
    "(4312:r=2,3 - 2314:r=2,3) + (4312:r=1,4 - 4132:r=1,4) + "
    "(3412:r=1,3 - 3214:r=1,3) + (3412:r=2,3 - 2413:r=2,3) + "
    "(3412:r=1,4 - 3142:r=1,4) + (3412:r=2,4 - 1432:r=2,4) + "
    "(4213:r=2,3 - 3214:r=2,3) + (2413:r=2,4 - 1423:r=2,4) + "
    "(4132:r=3,4 - 1432:r=3,4) + (3142:r=3,4 - 1342:r=3,4)",

    "(4231:r=1,2 - 4213:r=1,2) + (4231:r=1,3 - 4132:r=1,3) + "
    "(3241:r=1,2 - 3214:r=1,2) + (2431:r=2,3 - 1432:r=2,3) + "
    "(4312:r=2,3 - 2314:r=2,3) + (4312:r=1,3 - 4213:r=1,3) + "
    "(4312:r=2,4 - 1342:r=2,4) + (4312:r=1,4 - 4132:r=1,4) + "
    "(3412:r=1,3 - 3214:r=1,3) + (3412:r=2,3 - 2413:r=2,3) + "
    "(3412:r=1,4 - 3142:r=1,4) + (3412:r=2,4 - 1432:r=2,4) + "
    "(4213:r=2,3 - 3214:r=2,3) + (2413:r=1,3 - 2314:r=1,3) + "
    "(4132:r=3,4 - 1432:r=3,4) + (3142:r=3,4 - 1342:r=3,4)",

    "(4231:r=1,2 - 4213:r=1,2) + (3241:r=1,4 - 3421:r=1,4) + "
    "(2431:r=3,4 - 4231:r=3,4) + (4312:r=2,3 - 2314:r=2,3) + "
    "(4312:r=1,4 - 4132:r=1,4) + (3142:r=3,4 - 1342:r=3,4) + "
    "(3124:r=1,2 - 3142:r=1,2) + (1423:r=2,3 - 3421:r=2,3)",
};

inline constexpr const char* kCertM =
    "1/112 [86 6 40 40 -40; 6 136 46 46 -46; 40 46 101 -17 -38; "
    "40 46 -17 101 -46; -40 -46 -38 -46 101]";

// FNV-1a checksum of the canonical encoding of the embedded data. Frozen so
// that accidental edits to the tables above are caught at startup.
inline constexpr std::uint64_t kCertChecksum = 0xb292e9430c511095ULL;

inline std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

// Sum of parenthesized difference pairs: "(A - B) + (C - D) + ...", where A
// and B use the word:r=positions syntax.
inline RootedSum parse_pair_sum(const std::string& text) {
    RootedSum sum;
    size_t pos = 0;
    int groups = 0;
    while (true) {
        size_t open = text.find('(', pos);
        if (open == std::string::npos) break;
        size_t close = text.find(')', open);
        if (close == std::string::npos)
            throw ParseError("unbalanced parenthesis in certificate term");
        std::string group = text.substr(open + 1, close - open - 1);
        size_t dash = group.find(" - ");
        if (dash == std::string::npos)
            throw ParseError("certificate group is not a difference: " + group);
        auto trim = [](std::string s) {
            size_t b = s.find_first_not_of(" \t");
            size_t e = s.find_last_not_of(" \t");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        sum.add(parse_rooted(trim(group.substr(0, dash))), Rational(1));
        sum.add(parse_rooted(trim(group.substr(dash + 3))), Rational(-1));
        ++groups;
        pos = close + 1;
    }
    if (groups == 0) throw ParseError("empty certificate sum");
    return sum;
}

// Sum of weighted bare permutations: "c*(word) + c*(word) + ...".
inline FormalSum parse_density_sum(const std::string& text) {
    FormalSum sum;
    size_t pos = 0;
    while (pos < text.size()) {
        size_t star = text.find("*(", pos);
        if (star == std::string::npos) break;
        size_t start = text.rfind(' ', star);
        start = (start == std::string::npos || start < pos) ? pos : start + 1;
        size_t close = text.find(')', star);
        if (close == std::string::npos) throw ParseError("unbalanced parenthesis");
        sum.add(parse_permutation(text.substr(star + 2, close - star - 2)),
                parse_rational(text.substr(start, star - start)));
        pos = close + 1;
    }
    if (sum.terms.empty()) throw ParseError("empty density sum");
    return sum;
}

// "p/q [a b c; d e f; ...]" with integer or rational entries.
inline Mat parse_scaled_matrix(const std::string& text) {
    size_t open = text.find('[');
    size_t close = text.find(']');
    if (open == std::string::npos || close == std::string::npos)
        throw ParseError("matrix block missing brackets");
    Rational scale = parse_rational([&] {
        std::string s = text.substr(0, open);
        size_t b = s.find_first_not_of(" \t");
        size_t e = s.find_last_not_of(" \t");
        return s.substr(b, e - b + 1);
    }());
    std::vector<std::vector<Rational>> rows;
    std::string body = text.substr(open + 1, close - open - 1);
    std::stringstream rowstream(body);
    std::string row;
    while (std::getline(rowstream, row, ';')) {
        std::vector<Rational> entries;
        std::stringstream es(row);
        std::string tok;
        while (es >> tok) entries.push_back(parse_rational(tok));
        if (!entries.empty()) rows.push_back(std::move(entries));
    }
    if (rows.empty()) throw ParseError("matrix block has no rows");
    Mat m(static_cast<int>(rows.size()), static_cast<int>(rows[0].size()));
    for (int i = 0; i < m.r; ++i) {
        if (static_cast<int>(rows[i].size()) != m.c)
            throw ParseError("ragged matrix rows");
        for (int j = 0; j < m.c; ++j) m.at(i, j) = scale * rows[i][j];
    }
    return m;
}

inline std::string encode(const RootedSum& s) {
    std::string out;
    for (const auto& [rp, c] : s.terms) {
        out += to_string(c);
        out += '*';
        out += to_string(rp);
        out += ';';
    }
    return out;
}

inline std::string canonical_encoding(const Certificate& cert) {
    std::string out = "target=" + to_string(cert.target) + "\n";
    out += "rho=" + to_string(cert.rho) + "\n";
    for (int i = 0; i < 5; ++i) out += "x" + std::to_string(i + 1) + "=" + encode(cert.x[i]) + "\n";
    for (int i = 0; i < 5; ++i) out += "y" + std::to_string(i + 1) + "=" + encode(cert.y[i]) + "\n";
    out += "M=";
    for (const Rational& e : cert.M.a) out += to_string(e) + ";";
    out += "\n";
    return out;
}

inline void validate_certificate(const Certificate& cert) {
    const Permutation asc = parse_permutation("12");
    const Permutation desc = parse_permutation("21");
    for (int i = 0; i < 5; ++i) {
        for (const auto& [rp, c] : cert.x[i].terms) {
            if (root_type(rp) != asc)
                throw ParseError("x block term has wrong root type: " + to_string(rp));
            (void)c;
        }
        for (const auto& [rp, c] : cert.y[i].terms) {
            if (root_type(rp) != desc)
                throw ParseError("y block term has wrong root type: " + to_string(rp));
            (void)c;
        }
    }
    if (cert.M.r != 5 || cert.M.c != 5 || !cert.M.is_symmetric())
        throw ParseError("certificate matrix must be symmetric 5x5");
}

}  // namespace detail

inline Certificate builtin_certificate() {
    Certificate cert;
    cert.target = parse_rational(detail::kCertTarget);
    cert.rho = detail::parse_density_sum(detail::kCertRho);
    for (int i = 0; i < 5; ++i) {
        cert.x[i] = detail::parse_pair_sum(detail::kCertX[i]);
        cert.y[i] = detail::parse_pair_sum(detail::kCertY[i]);
    }
    cert.M = detail::parse_scaled_matrix(detail::kCertM);
    detail::validate_certificate(cert);
    if (detail::fnv1a(detail::canonical_encoding(cert)) != detail::kCertChecksum)
        throw std::logic_error("builtin certificate data failed its checksum");
    return cert;
}

inline Certificate parse_certificate(std::istream& in) {
    Certificate cert;
    std::array<bool, 13> seen{};  // target, rho, x1..x5, y1..y5, M
    std::string line;
    while (std::getline(in, line)) {
        size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        size_t colon = line.find(':');
        if (colon == std::string::npos) continue;
        std::string key = line.substr(0, colon);
        size_t kb = key.find_first_not_of(" \t");
        if (kb == std::string::npos) continue;
        key = key.substr(kb, key.find_last_not_of(" \t") - kb + 1);
        std::string value = line.substr(colon + 1);

        if (key == "target") {
            size_t b = value.find_first_not_of(" \t");
            cert.target = parse_rational(value.substr(b, value.find_last_not_of(" \t") - b + 1));
            seen[0] = true;
        } else if (key == "rho") {
            cert.rho = detail::parse_density_sum(value);
            seen[1] = true;
        } else if (key.size() == 2 && key[0] == 'x' && key[1] >= '1' && key[1] <= '5') {
            cert.x[key[1] - '1'] = detail::parse_pair_sum(value);
            seen[2 + (key[1] - '1')] = true;
        } else if (key.size() == 2 && key[0] == 'y' && key[1] >= '1' && key[1] <= '5') {
            cert.y[key[1] - '1'] = detail::parse_pair_sum(value);
            seen[7 + (key[1] - '1')] = true;
        } else if (key == "M") {
            cert.M = detail::parse_scaled_matrix(value);
            seen[12] = true;
        } else {
            throw ParseError("unknown certificate key: " + key);
        }
    }
    for (bool s : seen)
        if (!s) throw ParseError("certificate file is missing a required block");
    detail::validate_certificate(cert);
    return cert;
}

inline Certificate load_certificate_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open certificate file: " + path);
    return parse_certificate(in);
}

// The quadratic form sum over i <= j of M(i,j) * v_i * v_j, doubled off the
// diagonal since M is symmetric.
inline RootedSum matrix_quadratic_form(const std::array<RootedSum, 5>& v, const Mat& M) {
    RootedSum total;
    for (int i = 0; i < 5; ++i) {
        for (int j = i; j < 5; ++j) {
            if (M.at(i, j) == 0) continue;
            Rational w = (i == j ? Rational(1) : Rational(2)) * M.at(i, j);
            RootedSum prod = flag_product(v[i], v[j]);
            prod *= w;
            total += prod;
        }
    }
    return total;
}

struct VerificationReport {
    FormalSum lhs;  // coefficient of each order-6 permutation on the left side
    Rational target;
    std::vector<Permutation> failures;  // permutations off the target value
    DefinitenessReport definiteness;
    std::vector<double> eigenvalues;  // of the integer-rescaled matrix
    bool identity_holds = false;
    bool pass = false;
};

// Checks that rho's order-6 projection minus both unrooted quadratic forms
// is constant at the target on every order-6 permutation, and that M is
// positive definite in exact arithmetic.
inline VerificationReport verify_identity(const Certificate& cert) {
    VerificationReport rep;
    rep.target = cert.target;

    FormalSum lhs = project_up(cert.rho, 6);
    lhs -= unroot(matrix_quadratic_form(cert.x, cert.M));
    lhs -= unroot(matrix_quadratic_form(cert.y, cert.M));
    rep.lhs = lhs;

    rep.identity_holds = true;
    for (const Permutation& p : enumerate_sn(6)) {
        if (lhs.coeff(p) != cert.target) {
            rep.identity_holds = false;
            rep.failures.push_back(p);
        }
    }

    rep.definiteness = check_positive_definite(cert.M);

    // Advisory floats on the integer rescaling of M (scale chosen as the
    // common denominator of the entries).
    BigInt denom = 1;
    for (const Rational& e : cert.M.a) denom = boost::multiprecision::lcm(denom, denominator(e));
    rep.eigenvalues = float_eigenvalues(Rational(denom) * cert.M);

    rep.pass = rep.identity_holds && rep.definiteness.positive_definite;
    return rep;
}

}  // namespace qp
