#pragma once

#include <cstdio>
#include <fstream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "liespec/errors.hpp"
#include "liespec/homology.hpp"
#include "liespec/lie_structure.hpp"
#include "liespec/matrix.hpp"
#include "liespec/scalar.hpp"

namespace liespec {

using json = nlohmann::ordered_json;

/// Parsed operator-family input; the scalar mode picks the backend.
struct FloatInput {
    OperatorFamily<Complexd> family;
};
struct ExactInput {
    OperatorFamily<GaussianRational> family;
};
using ParsedInput = std::variant<FloatInput, ExactInput>;

/// Rounds to 12 significant digits; canonical float formatting for output
/// documents.
inline double round12(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return std::strtod(buf, nullptr);
}

inline json complex_to_json(const Complexd& z) {
    return json::array({round12(z.real()), round12(z.imag())});
}

template <ScalarBackend S>
json scalar_to_json(const S& v) {
    if constexpr (scalar_traits<S>::is_exact)
        return json(format_scalar(v));
    else
        return complex_to_json(v);
}

template <ScalarBackend S>
json coords_to_json(const std::vector<S>& coords) {
    json out = json::array();
    for (const auto& v : coords) out.push_back(scalar_to_json(v));
    return out;
}

// ---------------------------------------------------------------------------
// InputDocument
// ---------------------------------------------------------------------------

namespace detail {

inline Complexd parse_float_entry(const json& e, const std::string& where) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
        throw ParseError(where + ": float mode entries must be [re, im] number pairs");
    return {e[0].get<double>(), e[1].get<double>()};
}

inline GaussianRational parse_exact_entry(const json& e, const std::string& where) {
    if (!e.is_string())
        throw ParseError(where + ": exact mode entries must be strings like \"p/q\" or "
                                 "\"p/q+r/s i\"");
    return parse_gaussian_rational(e.get<std::string>());
}

template <ScalarBackend S>
OperatorFamily<S> parse_family(const json& doc, std::size_t dim_e) {
    std::vector<Matrix<S>> mats;
    std::vector<std::string> names;
    for (const auto& gen : doc.at("generators")) {
        if (!gen.contains("name") || !gen.contains("matrix"))
            throw ParseError("generator entries need \"name\" and \"matrix\"");
        std::string name = gen.at("name").get<std::string>();
        for (const auto& seen : names)
            if (seen == name) throw ParseError("duplicate generator name '" + name + "'");
        const json& rows = gen.at("matrix");
        if (!rows.is_array() || rows.size() != dim_e)
            throw ParseError("matrix of '" + name + "' must have dim_E = " +
                             std::to_string(dim_e) + " rows");
        Matrix<S> m(dim_e, dim_e);
        for (std::size_t i = 0; i < dim_e; ++i) {
            const json& row = rows[i];
            if (!row.is_array() || row.size() != dim_e)
                throw ParseError("matrix of '" + name + "' must be square of size " +
                                 std::to_string(dim_e));
            for (std::size_t j = 0; j < dim_e; ++j) {
                if constexpr (scalar_traits<S>::is_exact)
                    m(i, j) = parse_exact_entry(row[j], "matrix of '" + name + "'");
                else
                    m(i, j) = parse_float_entry(row[j], "matrix of '" + name + "'");
            }
        }
        names.push_back(std::move(name));
        mats.push_back(std::move(m));
    }
    if (mats.empty()) throw ParseError("generators list is empty");
    return OperatorFamily<S>(dim_e, std::move(mats), std::move(names));
}

}  // namespace detail

inline ParsedInput parse_input_document(const json& doc) {
    if (!doc.is_object()) throw ParseError("input document must be a JSON object");
    if (!doc.contains("dim_E") || !doc.at("dim_E").is_number_unsigned())
        throw ParseError("missing or invalid \"dim_E\"");
    std::size_t dim_e = doc.at("dim_E").get<std::size_t>();
    if (dim_e < 1) throw ParseError("dim_E must be at least 1");
    if (!doc.contains("scalar_mode") || !doc.at("scalar_mode").is_string())
        throw ParseError("missing \"scalar_mode\" (\"float\" or \"exact\")");
    std::string mode = doc.at("scalar_mode").get<std::string>();
    if (!doc.contains("generators") || !doc.at("generators").is_array())
        throw ParseError("missing \"generators\" array");
    if (mode == "float") return FloatInput{detail::parse_family<Complexd>(doc, dim_e)};
    if (mode == "exact") return ExactInput{detail::parse_family<GaussianRational>(doc, dim_e)};
    throw ParseError("scalar_mode must be \"float\" or \"exact\"");
}

inline ParsedInput load_input_document(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open input file '" + path + "'");
    json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("invalid JSON in '" + path + "': " + e.what());
    }
    return parse_input_document(doc);
}

template <ScalarBackend S>
json family_to_input_document(const OperatorFamily<S>& family) {
    json doc;
    doc["dim_E"] = family.dim_E;
    doc["scalar_mode"] = scalar_traits<S>::is_exact ? "exact" : "float";
    json gens = json::array();
    for (std::size_t k = 0; k < family.dim(); ++k) {
        json g;
        g["name"] = family.names[k];
        json rows = json::array();
        for (std::size_t i = 0; i < family.dim_E; ++i) {
            json row = json::array();
            for (std::size_t j = 0; j < family.dim_E; ++j) {
                if constexpr (scalar_traits<S>::is_exact)
                    row.push_back(format_scalar(family.ops[k](i, j)));
                else
                    row.push_back(json::array(
                        {family.ops[k](i, j).real(), family.ops[k](i, j).imag()}));
            }
            rows.push_back(std::move(row));
        }
        g["matrix"] = std::move(rows);
        gens.push_back(std::move(g));
    }
    doc["generators"] = std::move(gens);
    return doc;
}

// ---------------------------------------------------------------------------
// OutputDocument pieces
// ---------------------------------------------------------------------------

inline json betti_to_json(const BettiVector& b) {
    json out = json::array();
    for (auto v : b.beta) out.push_back(v);
    return out;
}

template <ScalarBackend S>
json algebra_summary(const LieAlgebraRep<S>& rep, const RankPolicy& policy) {
    json out;
    out["n"] = rep.n();
    out["dim_E"] = rep.m();
    out["solvable"] = is_solvable(rep, policy);
    out["nilpotent"] = is_nilpotent(rep, policy);
    out["dim_derived"] = derived_subalgebra(rep, policy).dim();
    out["bracket_sign"] = rep.bracket_sign;
    out["closure_residual"] = round12(rep.closure_residual);
    return out;
}

}  // namespace liespec
