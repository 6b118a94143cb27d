#pragma once

#include <string>

#include <json.hpp>

#include "dagas/algebra/matrix.hpp"

namespace dagas {

using json = nlohmann::json;

inline json to_json_value(const Rational& r) { return to_string(r); }
inline json to_json_value(const Gaussian& g) { return json::array({to_string(g.re), to_string(g.im)}); }
inline json to_json_value(const ComplexFloat& c) { return json::array({c.real(), c.imag()}); }
inline json to_json_value(const TruncPoly& p) {
    json out = json::array();
    for (auto& [i, j, c] : p.terms()) out.push_back(json::array({i, j, to_string(c)}));
    return out;
}

template <class S>
S from_json_value(const json& j);

template <>
inline Rational from_json_value<Rational>(const json& j) {
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number_integer()) return Rational(j.get<long>());
    throw DomainError("expected rational string, got " + j.dump());
}

template <>
inline Gaussian from_json_value<Gaussian>(const json& j) {
    if (j.is_array() && j.size() == 2 && j[0].is_string() && j[1].is_string())
        return Gaussian(parse_rational(j[0].get<std::string>()), parse_rational(j[1].get<std::string>()));
    if (j.is_string()) return Gaussian(parse_rational(j.get<std::string>()));
    throw DomainError("expected gaussian [\"re\",\"im\"], got " + j.dump());
}

template <>
inline ComplexFloat from_json_value<ComplexFloat>(const json& j) {
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
        return {j[0].get<double>(), j[1].get<double>()};
    if (j.is_number()) return {j.get<double>(), 0.0};
    throw DomainError("expected complex [re, im], got " + j.dump());
}

template <class S>
json to_json_value(const Matrix<S>& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(to_json_value(m(i, j)));
        rows.push_back(row);
    }
    return json{{"mode", scalar_traits<S>::mode}, {"rows", m.rows()}, {"cols", m.cols()}, {"entries", rows}};
}

template <class S>
Matrix<S> matrix_from_json(const json& j) {
    std::string mode = j.at("mode").get<std::string>();
    if (mode != scalar_traits<S>::mode)
        throw DomainError(std::string("mixed scalar modes: expected ") + scalar_traits<S>::mode + ", got " + mode);
    std::size_t r = j.at("rows").get<std::size_t>(), c = j.at("cols").get<std::size_t>();
    const json& e = j.at("entries");
    if (e.size() != r) throw DimensionError("row count mismatch");
    Matrix<S> m(r, c);
    for (std::size_t i = 0; i < r; ++i) {
        if (e[i].size() != c) throw DimensionError("column count mismatch");
        for (std::size_t k = 0; k < c; ++k) m(i, k) = from_json_value<S>(e[i][k]);
    }
    return m;
}

} // namespace dagas
