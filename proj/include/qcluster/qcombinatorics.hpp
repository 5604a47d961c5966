#pragma once

#include <cstdint>
#include <limits>
#include <mutex>
#include <string>
#include <vector>

#include "qcluster/error.hpp"
#include "qcluster/laurent.hpp"

namespace qcluster {

/// c_1 = 0, c_2 = 1, c_n = r*c_{n-1} - c_{n-2}.
inline BigInt c_sequence(int r, int n) {
  require(r >= 2, ErrorCode::InvalidParameter, "r must be at least 2, got " + std::to_string(r));
  require(n >= 1, ErrorCode::InvalidParameter, "n must be at least 1, got " + std::to_string(n));
  BigInt prev = 0, cur = 1;
  if (n == 1) return prev;
  for (int i = 3; i <= n; ++i) {
    BigInt next = r * cur - prev;
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur;
}

/// c_sequence narrowed to a machine integer; used where the value sizes a
/// combinatorial object.
inline std::int64_t c_small(int r, int n) {
  BigInt c = c_sequence(r, n);
  require(c.fits_slong_p(), ErrorCode::BudgetExceeded, "c_" + std::to_string(n) + " does not fit a machine word");
  return c.get_si();
}

/// [m]_q = 1 + q + ... + q^{m-1}
inline QPolynomial q_integer(std::int64_t m) {
  require(m >= 0, ErrorCode::NotSupported, "q-integer of a negative argument");
  std::vector<BigInt> coeffs(static_cast<std::size_t>(m), BigInt(1));
  return QPolynomial::from_coefficients(coeffs);
}

namespace detail {

// Rows of Gaussian binomials built by q-Pascal: binom(m,n) = binom(m-1,n-1) + q^n binom(m-1,n).
class QBinomialTable {
 public:
  QPolynomial get(std::int64_t m, std::int64_t n) {
    std::lock_guard<std::mutex> lock(mutex_);
    while (static_cast<std::int64_t>(rows_.size()) <= m) extend();
    return rows_[static_cast<std::size_t>(m)][static_cast<std::size_t>(n)];
  }

 private:
  void extend() {
    const auto m = rows_.size();
    std::vector<QPolynomial> row(m + 1);
    row[0] = QPolynomial(1);
    row[m] = QPolynomial(1);
    for (std::size_t n = 1; n < m; ++n) {
      row[n] = rows_[m - 1][n - 1] + rows_[m - 1][n].times_q_power(static_cast<std::int64_t>(n));
    }
    rows_.push_back(std::move(row));
  }

  std::mutex mutex_;
  std::vector<std::vector<QPolynomial>> rows_;
};

inline QBinomialTable& q_binomial_table() {
  static QBinomialTable table;
  return table;
}

}  // namespace detail

/// Gaussian binomial coefficient binom(m, n)_q.
///
/// Conventions: n = 0 gives 1 for every m, negative m included (the closed
/// strata formula evaluates binom(-1, 0)_q at e1 = p = 0); n < 0 gives 0;
/// n > m >= 0 gives 0. Negative m with positive n has no polynomial meaning
/// here and is rejected.
inline QPolynomial q_binomial(std::int64_t m, std::int64_t n) {
  if (n == 0) return QPolynomial(1);
  if (n < 0) return QPolynomial();
  if (m < 0) fail(ErrorCode::NotSupported, "q-binomial with negative top " + std::to_string(m) + " and positive bottom");
  if (n > m) return QPolynomial();
  return detail::q_binomial_table().get(m, n);
}

/// binom(m, 2) as an integer, for any integer m.
inline std::int64_t binom2(std::int64_t m) { return m * (m - 1) / 2; }

}  // namespace qcluster
