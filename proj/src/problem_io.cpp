#include "shishkin/problem_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "shishkin/error.hpp"

namespace shishkin {

namespace {

using nlohmann::json;

double as_number(const json& j, const std::string& where) {
    if (!j.is_number()) throw ParseError(where + ": expected a number");
    return j.get<double>();
}

std::vector<double> as_numbers(const json& j, const std::string& where) {
    if (!j.is_array()) throw ParseError(where + ": expected an array of numbers");
    std::vector<double> out;
    out.reserve(j.size());
    for (std::size_t k = 0; k < j.size(); ++k)
        out.push_back(as_number(j[k], where + "[" + std::to_string(k) + "]"));
    return out;
}

TimePolynomial as_polynomial(const json& j, const std::string& where) {
    auto coeffs = as_numbers(j, where);
    if (coeffs.empty()) throw ParseError(where + ": empty coefficient list");
    try {
        return TimePolynomial(std::move(coeffs));
    } catch (const ParseError& e) {
        throw ParseError(where + ": " + e.what());
    }
}

}  // namespace

ProblemSpec parse_problem_json(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ParseError("problem file must be a JSON object");

    static const std::set<std::string> known{"n", "T", "eps", "u0", "A", "f"};
    for (const auto& [key, value] : doc.items())
        if (!known.contains(key)) throw ParseError("unknown key \"" + key + "\"");
    for (const auto& key : known)
        if (!doc.contains(key)) throw ParseError("missing key \"" + key + "\"");

    if (!doc["n"].is_number_integer() || doc["n"].get<long long>() < 1)
        throw ParseError("n: expected a positive integer");
    const auto n = static_cast<std::size_t>(doc["n"].get<long long>());
    const double horizon = as_number(doc["T"], "T");
    auto eps = as_numbers(doc["eps"], "eps");
    auto u0 = as_numbers(doc["u0"], "u0");
    if (eps.size() != n) throw ParseError("eps: expected " + std::to_string(n) + " entries");
    if (u0.size() != n) throw ParseError("u0: expected " + std::to_string(n) + " entries");

    const json& ja = doc["A"];
    if (!ja.is_array() || ja.size() != n)
        throw ParseError("A: expected " + std::to_string(n) + " rows");
    std::vector<std::vector<TimePolynomial>> a(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::string row = "A[" + std::to_string(i) + "]";
        if (!ja[i].is_array() || ja[i].size() != n)
            throw ParseError(row + ": expected " + std::to_string(n) + " entries");
        for (std::size_t j = 0; j < n; ++j)
            a[i].push_back(as_polynomial(ja[i][j], row + "[" + std::to_string(j) + "]"));
    }

    const json& jf = doc["f"];
    if (!jf.is_array() || jf.size() != n)
        throw ParseError("f: expected " + std::to_string(n) + " entries");
    std::vector<TimePolynomial> f;
    for (std::size_t i = 0; i < n; ++i)
        f.push_back(as_polynomial(jf[i], "f[" + std::to_string(i) + "]"));

    return ProblemSpec(std::move(a), std::move(f), std::move(u0), horizon,
                       PerturbationVector(std::move(eps)));
}

ProblemSpec load_problem(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open problem file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_problem_json(buf.str());
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

std::string problem_to_json(const ProblemSpec& spec) {
    const std::size_t n = spec.size();
    json doc;
    doc["n"] = n;
    doc["T"] = spec.horizon();
    doc["eps"] = std::vector<double>(spec.eps().values().begin(), spec.eps().values().end());
    doc["u0"] = std::vector<double>(spec.u0().begin(), spec.u0().end());
    json a = json::array();
    for (std::size_t i = 0; i < n; ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < n; ++j) {
            const auto c = spec.a_entry(i, j).coeffs();
            row.push_back(std::vector<double>(c.begin(), c.end()));
        }
        a.push_back(std::move(row));
    }
    doc["A"] = std::move(a);
    json f = json::array();
    for (std::size_t i = 0; i < n; ++i) {
        const auto c = spec.f_entry(i).coeffs();
        f.push_back(std::vector<double>(c.begin(), c.end()));
    }
    doc["f"] = std::move(f);
    return doc.dump(2);
}

}  // namespace shishkin
