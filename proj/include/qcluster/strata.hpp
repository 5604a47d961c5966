#pragma once

// Stratifications of quiver Grassmannians by the open strata Z' and the
// closed strata Zbar', the triangular transforms relating them, and the
// closed forms for M(6).

#include <cstdint>
#include <map>
#include <vector>

#include "qcluster/cluster.hpp"
#include "qcluster/error.hpp"
#include "qcluster/laurent.hpp"
#include "qcluster/qcombinatorics.hpp"

namespace qcluster {

/// Dense square matrix over Z[q^{+-1/2}], 1-based access.
class QMatrix {
 public:
  explicit QMatrix(std::size_t size) : size_(size), data_(size * size) {}

  std::size_t size() const noexcept { return size_; }
  QHalfLaurent& at(std::size_t i, std::size_t j) { return data_[(i - 1) * size_ + (j - 1)]; }
  const QHalfLaurent& at(std::size_t i, std::size_t j) const { return data_[(i - 1) * size_ + (j - 1)]; }

  static QMatrix identity(std::size_t size) {
    QMatrix m(size);
    for (std::size_t i = 1; i <= size; ++i) m.at(i, i) = QHalfLaurent(1);
    return m;
  }

  friend QMatrix operator*(const QMatrix& a, const QMatrix& b) {
    require(a.size_ == b.size_, ErrorCode::InvalidParameter, "matrix size mismatch");
    QMatrix out(a.size_);
    for (std::size_t i = 1; i <= a.size_; ++i)
      for (std::size_t l = 1; l <= a.size_; ++l) {
        if (a.at(i, l).is_zero()) continue;
        for (std::size_t j = 1; j <= a.size_; ++j)
          if (!b.at(l, j).is_zero()) out.at(i, j) += a.at(i, l) * b.at(l, j);
      }
    return out;
  }

  friend bool operator==(const QMatrix&, const QMatrix&) = default;

 private:
  std::size_t size_;
  std::vector<QHalfLaurent> data_;
};

/// (-1)^{j-i} q^{binom(j-i,2)} binom(j-1,i-1)_q on and above the diagonal.
inline QMatrix transform_matrix(std::size_t size) {
  QMatrix m(size);
  for (std::size_t j = 1; j <= size; ++j)
    for (std::size_t i = 1; i <= j; ++i) {
      const auto gap = static_cast<std::int64_t>(j - i);
      QHalfLaurent entry = QHalfLaurent(q_binomial(static_cast<std::int64_t>(j) - 1, static_cast<std::int64_t>(i) - 1))
                               .shifted(2 * binom2(gap));
      m.at(i, j) = gap % 2 == 0 ? entry : -entry;
    }
  return m;
}

/// Upper-triangular binom(j-1, i-1)_q; the inverse of transform_matrix.
inline QMatrix binomial_matrix(std::size_t size) {
  QMatrix m(size);
  for (std::size_t j = 1; j <= size; ++j)
    for (std::size_t i = 1; i <= j; ++i)
      m.at(i, j) = q_binomial(static_cast<std::int64_t>(j) - 1, static_cast<std::int64_t>(i) - 1);
  return m;
}

/// (-1)^{e1-p} q^{binom(e1-p+1,2)} binom(e1-1, e1-p)_q: the weight of P_{Gr_{e1,e2}}
/// in the closed stratum Zbar'_p. At e1 = p = 0 this is binom(-1,0)_q = 1.
inline QHalfLaurent closed_strata_weight(std::int64_t e1, std::int64_t p) {
  const std::int64_t gap = e1 - p;
  QHalfLaurent w = QHalfLaurent(q_binomial(e1 - 1, gap)).shifted(2 * binom2(gap + 1));
  return gap % 2 == 0 ? w : -w;
}

/// (-1)^{e1-p} q^{binom(e1-p,2)} binom(e1,p)_q: the weight of P_{Gr_{e1,e2}} in Z'_p.
inline QHalfLaurent open_strata_weight(std::int64_t e1, std::int64_t p) {
  const std::int64_t gap = e1 - p;
  QHalfLaurent w = QHalfLaurent(q_binomial(e1, p)).shifted(2 * binom2(gap));
  return gap % 2 == 0 ? w : -w;
}

/// Virtual Poincare polynomials of Z'_{p,d2-e2} and Zbar'_{p,d2-e2}, for p = 0..d1.
struct StrataTable {
  std::int64_t e2 = 0;
  std::int64_t d1 = 0;
  std::int64_t d2 = 0;
  std::map<std::int64_t, QHalfLaurent> open;
  std::map<std::int64_t, QHalfLaurent> closed;

  /// The stratum parameter s = d2 - e2 (dimension of the annihilated quotient).
  std::int64_t s() const { return d2 - e2; }
};

inline StrataTable strata_from_gr(const GrTable& table, std::int64_t e2) {
  require(0 <= e2 && e2 <= table.d2, ErrorCode::InvalidParameter, "e2 must lie in [0, d2]");
  StrataTable out{e2, table.d1, table.d2, {}, {}};
  for (std::int64_t p = 0; p <= table.d1; ++p) {
    QHalfLaurent open, closed;
    for (std::int64_t e1 = p; e1 <= table.d1; ++e1) {
      const QPolynomial gr = table.entry(e1, e2);
      if (gr.is_zero()) continue;
      open += open_strata_weight(e1, p) * gr.laurent();
      closed += closed_strata_weight(e1, p) * gr.laurent();
    }
    out.open.emplace(p, std::move(open));
    out.closed.emplace(p, std::move(closed));
  }
  return out;
}

/// sum_p binom(p, e1)_q Z'(p) = P_{Gr_{e1,e2}}.
inline QHalfLaurent gr_from_strata(const StrataTable& strata, std::int64_t e1) {
  QHalfLaurent total;
  for (const auto& [p, z] : strata.open) {
    if (z.is_zero() || p < e1) continue;
    total += QHalfLaurent(q_binomial(p, e1)) * z;
  }
  return total;
}

/// P_{Gr_{e1,1} M(6)} in closed form; zero once e1 > r - 1.
inline QPolynomial closed_gr_M6(int r, std::int64_t e1) {
  require(r >= 2, ErrorCode::InvalidParameter, "r must be at least 2");
  require(e1 >= 0, ErrorCode::InvalidParameter, "e1 must be nonnegative");
  if (e1 > r - 1) return QPolynomial();
  const QPolynomial base = q_binomial(r - 1, e1);
  QPolynomial total = q_binomial(r - 1, 1) * base;
  const QPolynomial top = q_binomial(r, 1) * base;
  for (std::int64_t j = 1; j <= r - 1; ++j) {
    const std::int64_t shift = (r - e1) * j - 1;
    total = total + (top - q_binomial(r - j - 1, e1 - j)).times_q_power(shift);
  }
  return total;
}

/// P_{Zbar'_{p, r^2-2} M(6)} in closed form.
inline QHalfLaurent closed_zbar_M6(int r, std::int64_t p) {
  require(r >= 2, ErrorCode::InvalidParameter, "r must be at least 2");
  require(p >= 0, ErrorCode::InvalidParameter, "p must be nonnegative");
  const std::int64_t d1 = c_small(r, 5);
  QHalfLaurent total;
  for (std::int64_t e1 = p; e1 <= d1 && e1 <= r - 1; ++e1) {
    total += closed_strata_weight(e1, p) * closed_gr_M6(r, e1).laurent();
  }
  return total;
}

/// Euler characteristic: the value at q = 1.
inline BigInt euler_char(const QHalfLaurent& p) {
  Rational v = evaluate(p, Rational(1));
  return v.get_num();
}

}  // namespace qcluster
