// Umbrella command line tool over the toolkit: certificate verification,
// cover classification, Hessian screening, witness search, the sample
// independence test, and small exact-arithmetic utilities.

#include "quasiperm/certificate.hpp"
#include "quasiperm/counting.hpp"
#include "quasiperm/cover_search.hpp"
#include "quasiperm/crossing.hpp"
#include "quasiperm/fuzzy.hpp"
#include "quasiperm/hessian.hpp"
#include "quasiperm/json_io.hpp"
#include "quasiperm/stats.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using nlohmann::json;
using namespace qp;

json rational_json(const Rational& r) { return to_string(r); }

json matrix_json(const Mat& m) {
    json rows = json::array();
    for (int i = 0; i < m.r; ++i) {
        json row = json::array();
        for (int j = 0; j < m.c; ++j) row.push_back(rational_json(m.at(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

json cover_json(const ConstantCover& cc) {
    json terms = json::array();
    for (const auto& [coeff, perm] : cc.terms)
        terms.push_back({{"coeff", to_string(coeff)}, {"perm", to_string(perm)}});
    return {{"terms", std::move(terms)},
            {"n", cc.n},
            {"c", rational_json(cc.c)},
            {"latin", cc.latin},
            {"reducible", cc.reducible},
            {"canonical", detail::cover_key(canonicalize_cover(cc))}};
}

// Accepts a formal sum as inline JSON ([{"coeff":"3","perm":"2143"},...]),
// as @path-to-json-file, or in the compact form "3*2143+3*3412-1/2*123".
FormalSum parse_rho_argument(const std::string& text) {
    std::string body = text;
    if (!body.empty() && body[0] == '@') {
        std::ifstream in(body.substr(1));
        if (!in) throw std::invalid_argument("cannot open " + body.substr(1));
        std::stringstream buf;
        buf << in.rdbuf();
        body = buf.str();
    }
    const std::size_t start = body.find_first_not_of(" \t\n");
    if (start == std::string::npos) throw std::invalid_argument("empty expression");
    if (body[start] == '[') return formal_sum_from_json(json::parse(body));

    FormalSum rho;
    std::size_t pos = start;
    while (pos < body.size()) {
        int sign = 1;
        while (pos < body.size() && (body[pos] == '+' || body[pos] == '-' || body[pos] == ' ')) {
            if (body[pos] == '-') sign = -sign;
            ++pos;
        }
        if (pos >= body.size()) break;
        const std::size_t end = body.find_first_of("+-", pos);
        std::string term = body.substr(pos, end == std::string::npos ? end : end - pos);
        pos = end == std::string::npos ? body.size() : end;
        Rational coeff(sign);
        std::string word = term;
        const std::size_t star = term.find('*');
        if (star != std::string::npos) {
            coeff = coeff * parse_rational(term.substr(0, star));
            word = term.substr(star + 1);
        }
        const std::size_t wend = word.find_last_not_of(" \t");
        if (wend == std::string::npos) throw std::invalid_argument("bad term: " + term);
        word = word.substr(0, wend + 1);
        rho += FormalSum{{word, coeff}};
    }
    if (rho.terms.empty()) throw std::invalid_argument("empty expression");
    return rho;
}

int run_verify_certificate(const std::string& file, bool use_builtin) {
    const Certificate cert = use_builtin ? builtin_certificate() : load_certificate_file(file);
    const VerificationReport rep = verify_identity(cert);

    json residuals = json::array();
    for (const Permutation& p : rep.failures)
        residuals.push_back(
            {{"perm", to_string(p)}, {"value", rational_json(rep.lhs.coeff(p))}});
    json minors = json::array();
    for (const Rational& m : rep.definiteness.minors) minors.push_back(rational_json(m));

    json out{{"pass", rep.pass},
             {"identity_holds", rep.identity_holds},
             {"positive_definite", rep.definiteness.positive_definite},
             {"target", rational_json(rep.target)},
             {"residuals", std::move(residuals)},
             {"minors", std::move(minors)},
             {"eigenvalues", rep.eigenvalues}};
    std::cout << out.dump(2) << "\n";
    return rep.pass ? 0 : 1;
}

int run_density(const std::string& sigma, const std::string& pi, bool as_json) {
    const Rational d = density(parse_permutation(sigma), parse_permutation(pi));
    if (as_json)
        std::cout << json{{"sigma", sigma}, {"pi", pi}, {"density", rational_json(d)}}.dump(2)
                  << "\n";
    else
        std::cout << to_string(d) << "\n";
    return 0;
}

int run_covers(const std::string& profile_text, std::uint64_t budget, int depth,
               const std::string& json_target) {
    LengthProfile profile;
    std::stringstream ss(profile_text);
    std::string part;
    while (std::getline(ss, part, ',')) profile.push_back(std::stoi(part));

    const CoverSearchResult result = search_covers(profile, budget, depth);
    json catalogue = json::array();
    for (const ConstantCover& cc : result.covers) catalogue.push_back(cover_json(cc));
    for (const ConstantCover& cc : result.reducible) catalogue.push_back(cover_json(cc));
    json out{{"profile", profile},
             {"covers", result.covers.size()},
             {"reducible", result.reducible.size()},
             {"complete", result.complete},
             {"nodes", result.nodes},
             {"catalogue", std::move(catalogue)}};

    if (json_target == "-") {
        std::cout << out.dump(2) << "\n";
    } else if (!json_target.empty()) {
        std::ofstream file(json_target);
        if (!file) throw std::invalid_argument("cannot write " + json_target);
        file << out.dump(2) << "\n";
        std::cout << result.covers.size() << " covers (" << result.reducible.size()
                  << " reducible) -> " << json_target << "\n";
    } else {
        for (const ConstantCover& cc : result.covers) std::cout << to_string(cc) << "\n";
        for (const ConstantCover& cc : result.reducible)
            std::cout << to_string(cc) << "  [reducible]\n";
        std::cout << result.covers.size() << " covers, " << result.reducible.size()
                  << " reducible, complete=" << (result.complete ? "yes" : "no") << "\n";
    }
    return 0;
}

int run_hessian_screen(const std::string& file, int n) {
    std::ifstream in(file);
    if (!in) throw std::invalid_argument("cannot open " + file);
    json doc = json::parse(in);
    if (doc.is_object() && doc.contains("catalogue")) doc = doc["catalogue"];
    if (!doc.is_array()) throw std::invalid_argument("expected a JSON array of covers");

    json out = json::array();
    for (const json& entry : doc) {
        const json& terms = entry.is_object() && entry.contains("terms") ? entry["terms"] : entry;
        const FormalSum rho = formal_sum_from_json(terms);
        const CoverScreen screen = screen_cover(rho, n);
        out.push_back({{"terms", terms},
                       {"gradient_zero", screen.gradient_zero},
                       {"has_positive", screen.has_positive},
                       {"has_negative", screen.has_negative},
                       {"adhoc_needed", screen.adhoc_needed}});
    }
    std::cout << out.dump(2) << "\n";
    return 0;
}

int run_witness(const std::string& rho_text, const std::string& dir_text, std::uint64_t seed,
                int budget) {
    const FormalSum rho = parse_rho_argument(rho_text);
    const Direction dir = dir_text == "lt" ? Direction::below : Direction::above;
    const Rational target = uniform_density(rho);
    const auto mu = witness_search(rho, dir, seed, budget);

    json out{{"rho", to_json(rho)},
             {"direction", dir_text},
             {"seed", seed},
             {"target", rational_json(target)},
             {"found", mu.has_value()}};
    if (mu) {
        const Rational value = step_density_formal(rho, *mu);
        out["grid"] = mu->grid;
        out["weights"] = matrix_json(mu->weights);
        out["value"] = rational_json(value);
        out["margin"] = rational_json(value - target);
    }
    std::cout << out.dump(2) << "\n";
    return mu ? 0 : 1;
}

int run_independence_test(const std::string& input, int shuffles, std::uint64_t seed,
                          bool break_ties) {
    SampleSeries series;
    if (input == "-") {
        series = read_sample_series(std::cin);
    } else {
        std::ifstream in(input);
        if (!in) throw std::invalid_argument("cannot open " + input);
        series = read_sample_series(in);
    }
    const TestReport rep = independence_test(series, shuffles, seed, break_ties);
    json out{{"n", rep.n},
             {"statistic", rational_json(rep.statistic)},
             {"statistic_float", to_double(rep.statistic)},
             {"deviation", rational_json(rep.deviation)},
             {"p_value", rational_json(rep.p_value)},
             {"p_value_float", to_double(rep.p_value)},
             {"shuffles", rep.shuffles},
             {"seed", rep.seed},
             {"ties_broken", rep.ties_broken}};
    std::cout << out.dump(2) << "\n";
    return 0;
}

int run_fuzzy(const std::string& sigma_text, int n, bool cover, bool as_json) {
    const Permutation sigma = parse_permutation(sigma_text);
    const Mat m = cover ? cover_matrix(sigma, n) : fuzzy_matrix(sigma, n);
    if (as_json) {
        std::cout << json{{"sigma", sigma_text},
                          {"n", n},
                          {"kind", cover ? "cover" : "fuzzy"},
                          {"matrix", matrix_json(m)}}
                         .dump(2)
                  << "\n";
        return 0;
    }
    for (int i = 0; i < m.r; ++i) {
        for (int j = 0; j < m.c; ++j) std::cout << (j ? " " : "") << to_string(m.at(i, j));
        std::cout << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact toolkit for pattern-density quasirandomness checks"};
    app.require_subcommand(1);

    std::string cert_file = std::string(QP_DATA_DIR) + "/certificate.txt";
    bool cert_builtin = false;
    auto* verify = app.add_subcommand("verify-certificate",
                                      "Check the sum-of-squares identity and definiteness");
    verify->add_option("--file", cert_file, "Certificate file");
    verify->add_flag("--builtin", cert_builtin, "Use the compiled-in certificate");

    std::string sigma, pi;
    bool density_json = false;
    auto* dens = app.add_subcommand("density", "Exact pattern density d(sigma, pi)");
    dens->add_option("--sigma", sigma, "Pattern word")->required();
    dens->add_option("--pi", pi, "Host permutation word")->required();
    dens->add_flag("--json", density_json, "JSON output");

    std::string profile;
    std::uint64_t cover_budget = 100000000ULL;
    int cover_depth = 0;
    std::string covers_json;
    auto* covers = app.add_subcommand("covers", "Classify constant covers for a length profile");
    covers->add_option("--profile", profile, "Comma-separated orders, e.g. 4,4,3,2")->required();
    covers->add_option("--budget", cover_budget, "Node budget for the prefix search");
    covers->add_option("--depth", cover_depth, "Refutation depth for orders above 6 (1..3)");
    covers->add_option("--json", covers_json,
                       "Write the JSON catalogue to this file ('-' for stdout)")
        ->expected(0, 1);

    std::string screen_file;
    int screen_n = 5;
    auto* screen = app.add_subcommand("hessian-screen",
                                      "Screen covers for one-sided second-order behavior");
    screen->add_option("--covers", screen_file, "JSON file with covers or formal sums")
        ->required();
    screen->add_option("--n", screen_n, "Perturbation grid (2..5)");

    std::string rho_text, dir_text;
    std::uint64_t witness_seed = 1;
    int witness_budget = 600;
    auto* witness = app.add_subcommand("witness",
                                       "Search for a measure strictly off an expression's "
                                       "uniform value");
    witness->add_option("--rho", rho_text, "Expression: JSON, @file, or 3*2143+2*123 form")
        ->required();
    witness->add_option("--dir", dir_text, "lt (below) or gt (above)")
        ->required()
        ->check(CLI::IsMember({"lt", "gt"}));
    witness->add_option("--seed", witness_seed, "Search seed");
    witness->add_option("--budget", witness_budget, "Candidate budget");

    std::string test_input;
    int shuffles = 2000;
    std::uint64_t test_seed = 42;
    bool break_ties = false;
    auto* test = app.add_subcommand("independence-test",
                                    "Monte Carlo rank test of bivariate independence");
    test->add_option("--input", test_input, "CSV file of x,y pairs ('-' for stdin)")->required();
    test->add_option("--shuffles", shuffles, "Null replicates (>= 100)");
    test->add_option("--seed", test_seed, "Replicate seed");
    test->add_flag("--break-ties", break_ties, "Break tied coordinates with seeded noise");

    std::string fuzzy_sigma;
    int fuzzy_n = 5;
    bool fuzzy_cover = false, fuzzy_json = false;
    auto* fuzzy = app.add_subcommand("fuzzy", "Print the density polynomial matrix of a pattern");
    fuzzy->add_option("--sigma", fuzzy_sigma, "Pattern word")->required();
    fuzzy->add_option("--n", fuzzy_n, "Ambient order");
    fuzzy->add_flag("--cover", fuzzy_cover, "Scaled integer cover matrix instead");
    fuzzy->add_flag("--json", fuzzy_json, "JSON output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (verify->parsed()) return run_verify_certificate(cert_file, cert_builtin);
        if (dens->parsed()) return run_density(sigma, pi, density_json);
        if (covers->parsed()) {
            std::string target;  // empty: human-readable lines
            if (covers->count("--json") > 0) target = covers_json.empty() ? "-" : covers_json;
            return run_covers(profile, cover_budget, cover_depth, target);
        }
        if (screen->parsed()) return run_hessian_screen(screen_file, screen_n);
        if (witness->parsed()) return run_witness(rho_text, dir_text, witness_seed, witness_budget);
        if (test->parsed()) return run_independence_test(test_input, shuffles, test_seed, break_ties);
        if (fuzzy->parsed()) return run_fuzzy(fuzzy_sigma, fuzzy_n, fuzzy_cover, fuzzy_json);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
