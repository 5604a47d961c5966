#pragma once

// JSON documents for the library types. Polynomials serialize ascending by
// half-exponent with decimal-string coefficients.

#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "qcluster/cluster.hpp"
#include "qcluster/dyck.hpp"
#include "qcluster/error.hpp"
#include "qcluster/families.hpp"
#include "qcluster/ffield.hpp"
#include "qcluster/laurent.hpp"
#include "qcluster/strata.hpp"
#include "qcluster/torus.hpp"

namespace qcluster::io {

using json = nlohmann::ordered_json;

inline json to_json(const QHalfLaurent& p) {
  json coeffs = json::array();
  for (const auto& [k, c] : p.terms()) coeffs.push_back({{"q2", k}, {"c", c.get_str()}});
  return {{"coeffs", std::move(coeffs)}};
}

inline json to_json(const QPolynomial& p) { return to_json(p.laurent()); }

inline QHalfLaurent laurent_from_json(const json& doc) {
  try {
    std::vector<QHalfLaurent::Term> terms;
    for (const auto& t : doc.at("coeffs")) {
      BigInt c;
      if (c.set_str(t.at("c").get<std::string>(), 10) != 0)
        fail(ErrorCode::InvalidParameter, "bad decimal coefficient");
      terms.emplace_back(t.at("q2").get<std::int64_t>(), std::move(c));
    }
    return QHalfLaurent::from_terms(std::move(terms));
  } catch (const json::exception& e) {
    fail(ErrorCode::InvalidParameter, std::string("malformed polynomial document: ") + e.what());
  }
}

inline json to_json(const TorusElement& t) {
  json terms = json::array();
  for (const auto& [e, c] : t.terms()) terms.push_back({{"x1", e.x1}, {"x2", e.x2}, {"coeff", to_json(c)}});
  return {{"terms", std::move(terms)}};
}

inline TorusElement torus_from_json(const json& doc) {
  try {
    TorusElement::TermMap terms;
    for (const auto& t : doc.at("terms")) {
      const Exponent e{t.at("x1").get<std::int64_t>(), t.at("x2").get<std::int64_t>()};
      QHalfLaurent c = laurent_from_json(t.at("coeff"));
      if (!c.is_zero()) terms[e] += c;
    }
    return TorusElement::from_terms(std::move(terms));
  } catch (const json::exception& e) {
    fail(ErrorCode::InvalidParameter, std::string("malformed torus document: ") + e.what());
  }
}

inline json to_json(const DyckPath& path) {
  return {{"r", path.r()}, {"n", path.n()}, {"word", path.word()}, {"v_index", path.v_indices()}};
}

inline json to_json(const Family& family) {
  json subpaths = json::array();
  for (const Subpath& s : family.subpaths)
    subpaths.push_back({{"i", s.i}, {"k", s.k}, {"color", to_string(s.color)}});
  return {{"edges", family.edges}, {"subpaths", std::move(subpaths)}};
}

inline json to_json(const GrTable& table) {
  json entries = json::array();
  for (const auto& [e, poly] : table.entries)
    entries.push_back({{"e1", e.first}, {"e2", e.second}, {"poly", to_json(poly)}});
  return {{"r", table.r}, {"n", table.n}, {"d1", table.d1}, {"d2", table.d2}, {"entries", std::move(entries)}};
}

inline json to_json(const StrataTable& strata) {
  auto side = [](const std::map<std::int64_t, QHalfLaurent>& m) {
    json out = json::array();
    for (const auto& [p, poly] : m) out.push_back({{"p", p}, {"poly", to_json(poly)}});
    return out;
  };
  return {{"e2", strata.e2}, {"d1", strata.d1}, {"d2", strata.d2}, {"s", strata.s()},
          {"open", side(strata.open)}, {"closed", side(strata.closed)}};
}

inline json to_json(const ff::FFModule& m) {
  json phis = json::array();
  for (const auto& f : m.phis) {
    json rows = json::array();
    for (int i = 0; i < f.rows(); ++i) rows.push_back(std::vector<int>(f.row(i), f.row(i) + f.cols()));
    phis.push_back(std::move(rows));
  }
  return {{"p", m.p}, {"r", m.r}, {"d1", m.d1}, {"d2", m.d2}, {"phis", std::move(phis)}};
}

/// Reads {"p","r","phis"}; "d1"/"d2" are optional and only needed when d2 = 0.
inline ff::FFModule module_from_json(const json& doc) {
  try {
    ff::FFModule m;
    m.p = doc.at("p").get<int>();
    m.r = doc.at("r").get<int>();
    require(ff::is_prime(m.p), ErrorCode::InvalidParameter, "module prime is not prime");
    const json& phis = doc.at("phis");
    require(static_cast<int>(phis.size()) == m.r, ErrorCode::InvalidParameter, "expected r matrices");
    m.d2 = doc.contains("d2") ? doc["d2"].get<int>() : static_cast<int>(phis.at(0).size());
    m.d1 = doc.contains("d1") ? doc["d1"].get<int>() : (m.d2 > 0 ? static_cast<int>(phis.at(0).at(0).size()) : 0);
    for (const auto& rows : phis) {
      require(static_cast<int>(rows.size()) == m.d2, ErrorCode::InvalidParameter, "matrix row count mismatch");
      ff::FpMatrix f(m.d2, m.d1);
      for (int i = 0; i < m.d2; ++i) {
        require(static_cast<int>(rows[static_cast<std::size_t>(i)].size()) == m.d1, ErrorCode::InvalidParameter,
                "matrix column count mismatch");
        for (int j = 0; j < m.d1; ++j) {
          const int v = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].get<int>();
          f.at(i, j) = ((v % m.p) + m.p) % m.p;
        }
      }
      m.phis.push_back(std::move(f));
    }
    return m;
  } catch (const json::exception& e) {
    fail(ErrorCode::InvalidParameter, std::string("malformed module document: ") + e.what());
  }
}

inline json error_document(const Error& e) {
  return {{"error", error_name(e.code())}, {"code", static_cast<int>(e.code())}, {"message", e.what()}};
}

}  // namespace qcluster::io
