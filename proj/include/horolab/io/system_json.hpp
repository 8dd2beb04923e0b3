#pragma once

#include <fstream>
#include <string>

#include "horolab/connection/system.hpp"
#include "horolab/io/expression.hpp"
#include "json.hpp"

namespace horolab {

using json = nlohmann::json;

/// {"rank": m, "matrix": [[expr,...],...], "poles": [{"point": "0"|"inf", "multiplicity": k}],
///  "parameters": {"a": "1/2"}}. "poles" is optional; when present it must
/// dominate the poles of the matrix.
inline DifferentialSystem system_from_json(const json& doc) {
  try {
    std::map<std::string, Rational> params;
    if (doc.contains("parameters"))
      for (const auto& [k, v] : doc.at("parameters").items()) params[k] = Rational::parse(v.get<std::string>());
    const auto& rows = doc.at("matrix");
    const std::size_t m = rows.size();
    if (doc.contains("rank") && doc.at("rank").get<std::size_t>() != m)
      fail(ErrorKind::DataError, "rank does not match the matrix size");
    RationalMatrix a(m, m);
    for (std::size_t i = 0; i < m; ++i) {
      if (rows[i].size() != m) fail(ErrorKind::DataError, "matrix is not square");
      for (std::size_t j = 0; j < m; ++j) {
        const auto& cell = rows[i][j];
        a(i, j) = cell.is_number_integer() ? RationalFunction(Rational(cell.get<long>()))
                                           : parse_rational_function(cell.get<std::string>(), params);
      }
    }
    if (!doc.contains("poles")) return DifferentialSystem(std::move(a));
    PoleDivisor d;
    d.irrational_part = DifferentialSystem::compute_divisor(a).irrational_part;
    for (const auto& p : doc.at("poles")) {
      std::string pt = p.at("point").get<std::string>();
      int mult = p.at("multiplicity").get<int>();
      if (mult < 1) fail(ErrorKind::DataError, "pole multiplicity must be positive");
      if (pt == "inf" || pt == "infinity") d.at_infinity = mult;
      else d.finite.emplace_back(Rational::parse(pt), mult);
    }
    return DifferentialSystem(std::move(a), std::move(d));
  } catch (const json::exception& e) {
    fail(ErrorKind::DataError, std::string("malformed system document: ") + e.what());
  }
}

inline DifferentialSystem load_system(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::DataError, "cannot open " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    fail(ErrorKind::DataError, path + ": " + e.what());
  }
  return system_from_json(doc);
}

inline json rational_function_json(const RationalFunction& f) {
  auto arr = [](const QPoly& p) {
    json a = json::array();
    for (const auto& c : p.coefficients()) a.push_back(c.str());
    return a;
  };
  return {{"num", arr(f.num())}, {"den", arr(f.den())}};
}

inline json poly_json(const QPoly& p) {
  json a = json::array();
  for (const auto& c : p.coefficients()) a.push_back(c.str());
  return a;
}

inline json system_to_json(const DifferentialSystem& sys) {
  json mat = json::array();
  for (std::size_t i = 0; i < sys.rank(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < sys.rank(); ++j) row.push_back(rational_function_json(sys(i, j)));
    mat.push_back(row);
  }
  json poles = json::array();
  for (const auto& [p, m] : sys.pole_divisor().finite) poles.push_back({{"point", p.str()}, {"multiplicity", m}});
  if (sys.pole_divisor().at_infinity > 0)
    poles.push_back({{"point", "inf"}, {"multiplicity", sys.pole_divisor().at_infinity}});
  return {{"rank", sys.rank()}, {"matrix", mat}, {"poles", poles}};
}

}  // namespace horolab
