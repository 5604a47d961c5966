#pragma once

// Quantum cluster variables X_n of the rank-2 algebra A(r,r) via
// X_{n-1} X_{n+1} = q^{r/2} X_n^r + 1, and the per-dimension-vector
// virtual Poincare polynomials read off their coefficients.

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "qcluster/error.hpp"
#include "qcluster/laurent.hpp"
#include "qcluster/qcombinatorics.hpp"
#include "qcluster/torus.hpp"

namespace qcluster {

/// Dimension vector (c_{n-1}, c_{n-2}) of M(n).
struct DimVector {
  std::int64_t d1 = 0;
  std::int64_t d2 = 0;
  int r = 2;

  /// d1^2 + d2^2 - r d1 d2; equals 1 for every M(n).
  std::int64_t euler_form() const { return d1 * d1 + d2 * d2 - r * d1 * d2; }
};

inline DimVector dim_vector(int r, int n) {
  require(n >= 3, ErrorCode::InvalidParameter, "M(n) needs n >= 3");
  return {c_small(r, n - 1), c_small(r, n - 2), r};
}

/// Feasibility guard for the recursion.
struct ComputeLimits {
  std::size_t max_terms = 4'000'000;
  std::size_t max_coeff_bits = 4096;
};

namespace detail {

inline void check_limits(const TorusElement& t, const ComputeLimits& limits, int index) {
  std::size_t total = 0;
  for (const auto& [e, c] : t.terms()) total += c.size();
  if (total > limits.max_terms)
    fail(ErrorCode::BudgetExceeded, "X_" + std::to_string(index) + " exceeds the term budget");
  if (t.max_coeff_bits() > limits.max_coeff_bits)
    fail(ErrorCode::BudgetExceeded, "X_" + std::to_string(index) + " exceeds the coefficient-size budget");
}

}  // namespace detail

/// X_1 .. X_n (element j-1 is X_j).
inline std::vector<TorusElement> xvar_sequence(int r, int n, const ComputeLimits& limits = {}) {
  require(r >= 2, ErrorCode::InvalidParameter, "r must be at least 2");
  require(n >= 1, ErrorCode::InvalidParameter, "cluster variables are indexed from 1");
  std::vector<TorusElement> xs{TorusElement::x1(), TorusElement::x2()};
  for (int j = 3; j <= n; ++j) {
    const TorusElement& prev2 = xs[static_cast<std::size_t>(j - 3)];
    const TorusElement& prev1 = xs[static_cast<std::size_t>(j - 2)];
    TorusElement numerator = t_pow(prev1, r).shifted(r) + TorusElement::one();
    detail::check_limits(numerator, limits, j);
    xs.push_back(left_divide(prev2, numerator));
    detail::check_limits(xs.back(), limits, j);
  }
  xs.resize(static_cast<std::size_t>(n));
  return xs;
}

inline TorusElement xvar_recursive(int r, int n, const ComputeLimits& limits = {}) {
  return xvar_sequence(r, n, limits).back();
}

/// Virtual Poincare polynomials P_{Gr_e M(n)} for all e = (e1, e2) with a
/// nonvanishing quiver Grassmannian.
struct GrTable {
  int r = 2;
  int n = 3;
  std::int64_t d1 = 0;
  std::int64_t d2 = 0;
  std::map<std::pair<std::int64_t, std::int64_t>, QPolynomial> entries;

  QPolynomial entry(std::int64_t e1, std::int64_t e2) const {
    auto it = entries.find({e1, e2});
    return it == entries.end() ? QPolynomial() : it->second;
  }

  friend bool operator==(const GrTable&, const GrTable&) = default;
};

/// Torus exponent carrying dimension vector e: X1^{-d1 + r(d2-e2)} X2^{r e1 - d2}.
inline Exponent gr_exponent(const DimVector& d, std::int64_t e1, std::int64_t e2) {
  return {-d.d1 + d.r * (d.d2 - e2), d.r * e1 - d.d2};
}

/// Half-exponent of the prefactor q^{(r(e1^2 + (d2-e2)^2) - d1 d2)/2}.
inline std::int64_t gr_prefactor_q2(const DimVector& d, std::int64_t e1, std::int64_t e2) {
  return d.r * (e1 * e1 + (d.d2 - e2) * (d.d2 - e2)) - d.d1 * d.d2;
}

/// Splits X_n into its quiver Grassmannian polynomials.
inline GrTable gr_table_from(const TorusElement& x, int r, int n) {
  const DimVector d = dim_vector(r, n);
  GrTable table{r, n, d.d1, d.d2, {}};
  for (const auto& [e, c] : x.terms()) {
    const std::int64_t num2 = e.x1 + d.d1;
    const std::int64_t num1 = e.x2 + d.d2;
    if (num2 % r != 0 || num1 % r != 0)
      fail(ErrorCode::ExtractionFailed, "monomial X1^" + std::to_string(e.x1) + " X2^" + std::to_string(e.x2) +
                                            " does not correspond to an integral dimension vector");
    const std::int64_t e2 = d.d2 - num2 / r;
    const std::int64_t e1 = num1 / r;
    if (e1 < 0 || e1 > d.d1 || e2 < 0 || e2 > d.d2)
      fail(ErrorCode::ExtractionFailed, "recovered dimension vector out of range");
    QPolynomial poly;
    try {
      poly = compress_power(c.shifted(-gr_prefactor_q2(d, e1, e2)), r);
    } catch (const Error& err) {
      fail(ErrorCode::ExtractionFailed, std::string("coefficient is not a polynomial in q^r: ") + err.what());
    }
    if (!poly.laurent().has_nonnegative_coefficients())
      fail(ErrorCode::ExtractionFailed, "negative coefficient in a Grassmannian polynomial");
    table.entries.emplace(std::make_pair(e1, e2), std::move(poly));
  }
  return table;
}

inline GrTable gr_table(int r, int n, const ComputeLimits& limits = {}) {
  require(n >= 3, ErrorCode::InvalidParameter, "gr_table needs n >= 3");
  return gr_table_from(xvar_recursive(r, n, limits), r, n);
}

/// Rebuilds X_n from its Grassmannian polynomials.
inline TorusElement assemble_xvar(const GrTable& table) {
  const DimVector d{table.d1, table.d2, table.r};
  TorusElement::TermMap terms;
  for (const auto& [e, poly] : table.entries) {
    std::vector<QHalfLaurent::Term> raised;
    for (const auto& [k, c] : poly.laurent().terms()) raised.emplace_back(k * table.r, c);
    QHalfLaurent coeff = QHalfLaurent::from_terms(std::move(raised)).shifted(gr_prefactor_q2(d, e.first, e.second));
    terms.emplace(gr_exponent(d, e.first, e.second), std::move(coeff));
  }
  return TorusElement::from_terms(std::move(terms));
}

}  // namespace qcluster
