#pragma once

// JSON forms for the exchange types. A formal sum serializes as a list of
// {"coeff": "p/q", "perm": "word"} records in the library's canonical term
// order.

#include "quasiperm/permutation.hpp"
#include "quasiperm/rooted.hpp"

#include <json.hpp>

namespace qp {

inline nlohmann::json to_json(const FormalSum& rho) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& [p, c] : rho.terms)
        arr.push_back({{"coeff", to_string(c)}, {"perm", to_string(p)}});
    return arr;
}

inline FormalSum formal_sum_from_json(const nlohmann::json& arr) {
    FormalSum rho;
    for (const auto& item : arr)
        rho.add(parse_permutation(item.at("perm").get<std::string>()),
                parse_rational(item.at("coeff").get<std::string>()));
    return rho;
}

// Rooted sums additionally carry the root positions, as a list of ints.
inline nlohmann::json to_json(const RootedSum& s) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& [rp, c] : s.terms)
        arr.push_back({{"coeff", to_string(c)},
                       {"perm", to_string(rp.base)},
                       {"roots", rp.roots}});
    return arr;
}

inline RootedSum rooted_sum_from_json(const nlohmann::json& arr) {
    RootedSum s;
    for (const auto& item : arr)
        s.add(RootedPerm(parse_permutation(item.at("perm").get<std::string>()),
                         item.at("roots").get<std::vector<int>>()),
              parse_rational(item.at("coeff").get<std::string>()));
    return s;
}

}  // namespace qp
