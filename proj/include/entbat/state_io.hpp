#pragma once

// JSON state files.
//
//   {"kind": "matrix", "dims": [dA, dB], "matrix": [[[re, im], ...], ...]}
//   {"kind": "pure-schmidt", "dims": [d, d], "schmidt": [p0, p1, ...]}
//   {"kind": "named", "named": "pure-alpha", "alpha": 0.3927}
//
// Matrices are row-major. Matrix files may carry an optional
// "factors": {"a": [...], "b": [...]} entry describing a composite layout.

#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

#include "entbat/states.hpp"

namespace entbat {

using Json = nlohmann::json;

namespace detail {

inline std::vector<std::size_t> read_dims(const Json& j, const std::string& field) {
    if (!j.is_array()) throw ParseError("field '" + field + "': expected an array of positive integers");
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const Json& v = j[i];
        if (!v.is_number_integer() || v.get<long long>() <= 0)
            throw ParseError("field '" + field + "[" + std::to_string(i) + "]': expected a positive integer");
        out.push_back(v.get<std::size_t>());
    }
    return out;
}

inline double read_number(const Json& j, const std::string& field) {
    if (!j.is_number()) throw ParseError("field '" + field + "': expected a number");
    return j.get<double>();
}

inline const Json& require(const Json& j, const char* key, const std::string& ctx = {}) {
    if (!j.is_object() || !j.contains(key))
        throw ParseError("missing field '" + (ctx.empty() ? std::string{} : ctx + ".") + key + "'");
    return j.at(key);
}

inline ComplexMatrix read_complex_matrix(const Json& j, const std::string& field) {
    if (!j.is_array() || j.empty()) throw ParseError("field '" + field + "': expected a non-empty array of rows");
    const std::size_t n = j.size();
    ComplexMatrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t r = 0; r < n; ++r) {
        const Json& row = j[r];
        const std::string rf = field + "[" + std::to_string(r) + "]";
        if (!row.is_array() || row.size() != n)
            throw ParseError("field '" + rf + "': expected " + std::to_string(n) + " entries");
        for (std::size_t c = 0; c < n; ++c) {
            const Json& e = row[c];
            const std::string ef = rf + "[" + std::to_string(c) + "]";
            if (e.is_number()) {
                m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = Complex(e.get<double>(), 0.0);
            } else if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
                m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                    Complex(e[0].get<double>(), e[1].get<double>());
            } else {
                throw ParseError("field '" + ef + "': expected [re, im]");
            }
        }
    }
    return m;
}

inline Json write_complex_matrix(const ComplexMatrix& m) {
    Json rows = Json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        Json row = Json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
        rows.push_back(std::move(row));
    }
    return rows;
}

inline void check_dims(const std::vector<std::size_t>& dims, const std::string& field) {
    if (dims.size() != 2) throw ParseError("field '" + field + "': expected [dA, dB]");
}

inline BipartiteState named_state(const Json& j) {
    const Json& name_j = require(j, "named");
    if (!name_j.is_string()) throw ParseError("field 'named': expected a string");
    const auto name = name_j.get<std::string>();
    if (name == "bell") return bell();
    if (name == "pure-alpha") return pure_alpha(read_number(require(j, "alpha"), "alpha")).to_state();
    if (name == "embezzler") {
        const Json& d = require(j, "d");
        if (!d.is_number_integer()) throw ParseError("field 'd': expected an integer");
        const auto dv = d.get<long long>();
        if (dv < 2) throw DomainError("embezzler dimension must be >= 2, got " + std::to_string(dv));
        return embezzler_psi(static_cast<std::size_t>(dv)).to_state();
    }
    if (name == "lami" || name == "maximally-correlated-lami") return maximally_correlated_lami();
    if (name == "werner") return werner(read_number(require(j, "p"), "p"));
    if (name == "maximally-mixed") {
        const auto dims = read_dims(require(j, "dims"), "dims");
        check_dims(dims, "dims");
        return maximally_mixed(dims[0], dims[1]);
    }
    throw ParseError("field 'named': unknown state '" + name + "'");
}

} // namespace detail

/// Builds a validated state from a parsed state-file document.
inline BipartiteState state_from_json(const Json& j) {
    if (!j.is_object()) throw ParseError("state file must be a JSON object");
    std::string kind;
    if (j.contains("kind")) {
        if (!j["kind"].is_string()) throw ParseError("field 'kind': expected a string");
        kind = j["kind"].get<std::string>();
    } else if (j.contains("named")) {
        kind = "named";
    } else {
        throw ParseError("missing field 'kind'");
    }

    if (kind == "named") {
        BipartiteState s = detail::named_state(j);
        if (j.contains("dims")) {
            const auto dims = detail::read_dims(j["dims"], "dims");
            detail::check_dims(dims, "dims");
            if (dims[0] != s.dim_a() || dims[1] != s.dim_b())
                throw ValidationError("dims [" + std::to_string(dims[0]) + ", " + std::to_string(dims[1]) +
                                      "] do not match named state dims [" + std::to_string(s.dim_a()) + ", " +
                                      std::to_string(s.dim_b()) + "]");
        }
        return s;
    }
    if (kind == "pure-schmidt") {
        const Json& p = detail::require(j, "schmidt");
        if (!p.is_array() || p.empty()) throw ParseError("field 'schmidt': expected a non-empty array");
        std::vector<double> v;
        for (std::size_t i = 0; i < p.size(); ++i)
            v.push_back(detail::read_number(p[i], "schmidt[" + std::to_string(i) + "]"));
        if (j.contains("dims")) {
            const auto dims = detail::read_dims(j["dims"], "dims");
            detail::check_dims(dims, "dims");
            if (dims[0] != v.size() || dims[1] != v.size())
                throw ValidationError("dims do not match Schmidt vector length " + std::to_string(v.size()));
        }
        return PureSchmidtState(std::move(v)).to_state();
    }
    if (kind == "matrix") {
        const auto dims = detail::read_dims(detail::require(j, "dims"), "dims");
        detail::check_dims(dims, "dims");
        ComplexMatrix m = detail::read_complex_matrix(detail::require(j, "matrix"), "matrix");
        if (static_cast<std::size_t>(m.rows()) != dims[0] * dims[1])
            throw ValidationError("matrix is " + std::to_string(m.rows()) + "x" + std::to_string(m.rows()) +
                                  " but dims imply " + std::to_string(dims[0] * dims[1]));
        Layout layout = Layout::single(dims[0], dims[1]);
        if (j.contains("factors")) {
            const Json& f = j["factors"];
            layout.a = detail::read_dims(detail::require(f, "a", "factors"), "factors.a");
            layout.b = detail::read_dims(detail::require(f, "b", "factors"), "factors.b");
            if (layout.dim_a() != dims[0] || layout.dim_b() != dims[1])
                throw ValidationError("factors do not multiply to dims");
        }
        return {std::move(m), std::move(layout)};
    }
    throw ParseError("field 'kind': unknown kind '" + kind + "'");
}

inline Json state_to_json(const BipartiteState& s) {
    Json j;
    j["kind"] = "matrix";
    j["dims"] = {s.dim_a(), s.dim_b()};
    if (s.components() > 1) j["factors"] = {{"a", s.layout().a}, {"b", s.layout().b}};
    j["matrix"] = detail::write_complex_matrix(s.matrix());
    return j;
}

inline Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(path + ": " + e.what());
    }
}

inline BipartiteState load_state(const std::string& path) {
    const Json j = read_json_file(path);
    try {
        return state_from_json(j);
    } catch (const ParseError& e) {
        throw ParseError(path + ": " + e.what());
    }
}

inline void save_state(const BipartiteState& s, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write '" + path + "'");
    out << state_to_json(s).dump(1) << '\n';
}

} // namespace entbat
