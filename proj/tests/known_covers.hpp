#pragma once

// Reference data shared by the test binaries: the classification of
// nonvanishing constant covers with at most five parts, as expression
// lists, plus the handful of expressions whose screening needs ad hoc
// follow-up. Everything here is independently re-derived by the search
// routines; these literals are the frozen expected values.

#include "quasiperm/cover_search.hpp"

#include <set>
#include <string>
#include <utility>
#include <vector>

namespace qp::testdata {

using ExprSpec = std::vector<std::pair<int, std::string>>;

// The fourteen four-term cover classes: first ten ambient order 4, last
// four ambient order 5.
inline const std::vector<ExprSpec> kFourTerm = {
    {{3, "1234"}, {3, "4321"}, {-4, "123"}, {3, "12"}},
    {{3, "1234"}, {3, "4321"}, {-4, "123"}, {-3, "21"}},
    {{3, "1324"}, {3, "4231"}, {-4, "123"}, {3, "12"}},
    {{3, "1324"}, {3, "4231"}, {-4, "123"}, {-3, "21"}},
    {{3, "2143"}, {3, "3412"}, {4, "123"}, {3, "21"}},
    {{3, "2413"}, {3, "3142"}, {4, "123"}, {3, "21"}},
    {{3, "1234"}, {3, "4321"}, {-2, "123"}, {-2, "321"}},
    {{3, "1324"}, {3, "4231"}, {-2, "123"}, {-2, "321"}},
    {{3, "2143"}, {3, "3412"}, {2, "123"}, {2, "321"}},
    {{3, "2413"}, {3, "3142"}, {2, "123"}, {2, "321"}},
    {{36, "12345"}, {-36, "52341"}, {15, "2143"}, {10, "321"}},
    {{36, "12345"}, {-36, "52341"}, {-15, "3412"}, {-10, "123"}},
    {{36, "12435"}, {-36, "52431"}, {15, "2143"}, {10, "321"}},
    {{36, "12435"}, {-36, "52431"}, {-15, "3412"}, {-10, "123"}},
};

inline int four_term_ambient(size_t item) { return item < 10 ? 4 : 5; }

// Five-term search profiles with the number of genuine cover classes each
// one carries. The order-5 latin profile is listed last.
inline const std::vector<std::pair<std::vector<int>, int>> kFiveTermProfiles = {
    {{4, 4, 3, 3, 2}, 6}, {{4, 4, 3, 3, 3}, 2},  {{4, 4, 4, 3, 2}, 13},
    {{4, 4, 4, 3, 3}, 4}, {{4, 4, 4, 4, 2}, 11}, {{4, 4, 4, 4, 3}, 9},
    {{5, 5, 4, 3, 2}, 13}, {{5, 5, 4, 3, 3}, 6}, {{5, 5, 4, 4, 2}, 7},
    {{5, 5, 4, 4, 3}, 1}, {{5, 5, 4, 4, 4}, 2},  {{5, 5, 5, 5, 5}, 192},
};

// Expressions whose Hessian at the uniform measure is one-sided, so the
// screening pass must flag them: the first three lack a negative direction
// and are settled by measures pushing the value below its uniform level,
// the last two lack a positive direction and need the opposite side.
inline const std::vector<ExprSpec> kAdhocBelow = {
    {{3, "2143"}, {3, "3412"}, {2, "123"}, {2, "321"}},
    {{2, "123"}, {2, "321"}, {-3, "1324"}, {-3, "4231"}},
    {{1, "1234"}, {6, "4321"}, {3, "3412"}, {-4, "1324"}, {3, "12"}},
};
inline const std::vector<ExprSpec> kAdhocAbove = {
    {{-1, "1234"}, {-6, "4321"}, {-3, "3412"}, {4, "1324"}, {3, "21"}},
    {{1, "14253"}, {1, "25314"}, {1, "31425"}, {1, "42531"}, {1, "53142"}},
};

inline ConstantCover make_cover(const ExprSpec& terms, int n) {
    ConstantCover cc;
    cc.n = n;
    for (const auto& [coeff, word] : terms)
        cc.terms.push_back({Rational(coeff), parse_permutation(word)});
    cc.c = detail::cover_constant(cc);
    return cc;
}

inline FormalSum make_expression(const ExprSpec& terms) {
    FormalSum fs;
    for (const auto& [coeff, word] : terms) fs.add(parse_permutation(word), Rational(coeff));
    return fs;
}

inline std::set<std::string> canonical_keys(const std::vector<ConstantCover>& list) {
    std::set<std::string> keys;
    for (const ConstantCover& cc : list) keys.insert(detail::cover_key(canonicalize_cover(cc)));
    return keys;
}

}  // namespace qp::testdata
