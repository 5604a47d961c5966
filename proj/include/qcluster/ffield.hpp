#pragma once

// Brute-force point counts over F_p: the rigid modules M(n) of the r-arrow
// Kronecker quiver, their quiver Grassmannians and the Z/Z' strata.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <functional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "qcluster/error.hpp"
#include "qcluster/laurent.hpp"
#include "qcluster/qcombinatorics.hpp"

namespace qcluster::ff {

inline bool is_prime(int p) {
  if (p < 2) return false;
  for (int d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

/// Row-major matrix with entries in [0, p).
class FpMatrix {
 public:
  FpMatrix() = default;
  FpMatrix(int rows, int cols) : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols, 0) {}

  int rows() const noexcept { return rows_; }
  int cols() const noexcept { return cols_; }
  int& at(int i, int j) { return data_[static_cast<std::size_t>(i) * cols_ + j]; }
  int at(int i, int j) const { return data_[static_cast<std::size_t>(i) * cols_ + j]; }
  int* row(int i) { return data_.data() + static_cast<std::size_t>(i) * cols_; }
  const int* row(int i) const { return data_.data() + static_cast<std::size_t>(i) * cols_; }

  friend bool operator==(const FpMatrix&, const FpMatrix&) = default;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<int> data_;
};

inline int inverse_mod(int a, int p) {
  int result = 1, base = a % p, e = p - 2;
  while (e > 0) {
    if (e & 1) result = result * base % p;
    base = base * base % p;
    e >>= 1;
  }
  return result;
}

/// Reduces m in place to reduced row echelon form; returns the pivot columns.
inline std::vector<int> row_reduce(FpMatrix& m, int p) {
  std::vector<int> pivots;
  int row = 0;
  for (int col = 0; col < m.cols() && row < m.rows(); ++col) {
    int pivot = -1;
    for (int i = row; i < m.rows(); ++i)
      if (m.at(i, col) != 0) {
        pivot = i;
        break;
      }
    if (pivot < 0) continue;
    if (pivot != row)
      for (int j = 0; j < m.cols(); ++j) std::swap(m.at(pivot, j), m.at(row, j));
    const int inv = inverse_mod(m.at(row, col), p);
    for (int j = col; j < m.cols(); ++j) m.at(row, j) = m.at(row, j) * inv % p;
    for (int i = 0; i < m.rows(); ++i) {
      if (i == row || m.at(i, col) == 0) continue;
      const int f = m.at(i, col);
      for (int j = col; j < m.cols(); ++j) m.at(i, j) = ((m.at(i, j) - f * m.at(row, j)) % p + p) % p;
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

inline int rank(FpMatrix m, int p) { return static_cast<int>(row_reduce(m, p).size()); }

/// Rows form a basis for {v : m v = 0}.
inline FpMatrix kernel_basis(FpMatrix m, int p) {
  const std::vector<int> pivots = row_reduce(m, p);
  std::vector<bool> is_pivot(static_cast<std::size_t>(m.cols()), false);
  for (int c : pivots) is_pivot[static_cast<std::size_t>(c)] = true;
  FpMatrix basis(m.cols() - static_cast<int>(pivots.size()), m.cols());
  int out = 0;
  for (int free = 0; free < m.cols(); ++free) {
    if (is_pivot[static_cast<std::size_t>(free)]) continue;
    basis.at(out, free) = 1;
    for (std::size_t i = 0; i < pivots.size(); ++i)
      basis.at(out, pivots[i]) = (p - m.at(static_cast<int>(i), free)) % p;
    ++out;
  }
  return basis;
}

/// A representation (F_p^{d1}, F_p^{d2}; phi_1..phi_r), phi_k of shape d2 x d1.
struct FFModule {
  int p = 2;
  int r = 2;
  int d1 = 0;
  int d2 = 0;
  std::vector<FpMatrix> phis;
};

/// dim End(M) = dim {(A, B) : B phi_k = phi_k A for all k}.
inline int endomorphism_dimension(const FFModule& m) {
  const int unknowns = m.d1 * m.d1 + m.d2 * m.d2;
  FpMatrix system(m.r * m.d2 * m.d1, unknowns);
  const int p = m.p;
  int eq = 0;
  for (int k = 0; k < m.r; ++k) {
    const FpMatrix& f = m.phis[static_cast<std::size_t>(k)];
    for (int i = 0; i < m.d2; ++i)
      for (int j = 0; j < m.d1; ++j, ++eq) {
        for (int l = 0; l < m.d2; ++l) {  // (B f)_{ij}, B_{il} at d1^2 + i d2 + l
          int& cell = system.at(eq, m.d1 * m.d1 + i * m.d2 + l);
          cell = (cell + f.at(l, j)) % p;
        }
        for (int l = 0; l < m.d1; ++l) {  // -(f A)_{ij}, A_{lj} at l d1 + j
          int& cell = system.at(eq, l * m.d1 + j);
          cell = ((cell - f.at(i, l)) % p + p) % p;
        }
      }
  }
  return unknowns - rank(system, p);
}

/// BGP reflection at the sink followed by relabeling the vertices:
/// (d1, d2) -> (r d1 - d2, d1). The new source space is the kernel of
/// (u_1..u_r) -> sum_k phi_k u_k, and the new maps are the coordinate projections.
inline FFModule reflect(const FFModule& m) {
  FpMatrix total(m.d2, m.r * m.d1);
  for (int k = 0; k < m.r; ++k)
    for (int i = 0; i < m.d2; ++i)
      for (int j = 0; j < m.d1; ++j) total.at(i, k * m.d1 + j) = m.phis[static_cast<std::size_t>(k)].at(i, j);
  const FpMatrix kernel = kernel_basis(total, m.p);
  FFModule out;
  out.p = m.p;
  out.r = m.r;
  out.d1 = kernel.rows();
  out.d2 = m.d1;
  for (int k = 0; k < m.r; ++k) {
    FpMatrix psi(out.d2, out.d1);
    for (int a = 0; a < out.d2; ++a)
      for (int j = 0; j < out.d1; ++j) psi.at(a, j) = kernel.at(j, k * m.d1 + a);
    out.phis.push_back(std::move(psi));
  }
  return out;
}

enum class BuildMethod { Reflection, RandomSearch };

inline void check_module_parameters(int p, int r, int n) {
  require(is_prime(p), ErrorCode::InvalidParameter, std::to_string(p) + " is not prime");
  require(p <= 31, ErrorCode::InvalidParameter, "prime too large for brute-force counting");
  require(r >= 2, ErrorCode::InvalidParameter, "r must be at least 2");
  require(n >= 3 && n <= 7, ErrorCode::InvalidParameter, "modules M(n) are built for 3 <= n <= 7");
}

/// A certified rigid M(n) over F_p (dim End = 1 with dimension vector
/// (c_{n-1}, c_{n-2})).
inline FFModule build_module(int p, int r, int n, BuildMethod method = BuildMethod::Reflection,
                             std::uint64_t seed = 1, int attempts = 5000) {
  check_module_parameters(p, r, n);
  const std::int64_t d1 = c_small(r, n - 1);
  const std::int64_t d2 = c_small(r, n - 2);
  require(d1 * d2 * r <= 20000, ErrorCode::BudgetExceeded, "module too large for the certificate");

  auto certified = [&](const FFModule& m) {
    return m.d1 == d1 && m.d2 == d2 && endomorphism_dimension(m) == 1;
  };

  if (method == BuildMethod::Reflection) {
    FFModule m;  // simple S1: (F_p, 0)
    m.p = p;
    m.r = r;
    m.d1 = 1;
    m.d2 = 0;
    m.phis.assign(static_cast<std::size_t>(r), FpMatrix(0, 1));
    for (int j = 4; j <= n; ++j) m = reflect(m);
    if (!certified(m)) fail(ErrorCode::ConstructionFailed, "reflected module failed the rigidity certificate");
    return m;
  }

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> entry(0, p - 1);
  for (int attempt = 0; attempt < attempts; ++attempt) {
    FFModule m;
    m.p = p;
    m.r = r;
    m.d1 = static_cast<int>(d1);
    m.d2 = static_cast<int>(d2);
    for (int k = 0; k < r; ++k) {
      FpMatrix f(m.d2, m.d1);
      for (int i = 0; i < m.d2; ++i)
        for (int j = 0; j < m.d1; ++j) f.at(i, j) = entry(rng);
      m.phis.push_back(std::move(f));
    }
    if (certified(m)) return m;
  }
  fail(ErrorCode::ConstructionFailed, "no certified module found in " + std::to_string(attempts) + " attempts");
}

/// #Gr_e(F_p^dim) as an integer.
inline BigInt grassmannian_size(int p, int dim, int e) {
  if (e < 0 || e > dim) return 0;
  return evaluate(q_binomial(dim, e), Rational(p)).get_num();
}

struct CountOptions {
  std::uint64_t budget = 50'000'000;
  unsigned workers = 1;
};

/// Streams every e-dimensional subspace of F_p^dim as its reduced echelon
/// basis (e x dim). Pivot patterns are distributed across workers; `visit`
/// receives the worker index.
inline void for_each_subspace(int p, int dim, int e, const CountOptions& options,
                              const std::function<void(unsigned, const FpMatrix&)>& visit) {
  require(0 <= e && e <= dim, ErrorCode::InvalidParameter, "subspace dimension out of range");
  const BigInt size = grassmannian_size(p, dim, e);
  if (size > BigInt(std::to_string(options.budget)))
    fail(ErrorCode::BudgetExceeded, "Gr_" + std::to_string(e) + "(F_" + std::to_string(p) + "^" +
                                        std::to_string(dim) + ") has " + size.get_str() + " points");
  std::vector<std::vector<int>> patterns;
  std::vector<int> pivots(static_cast<std::size_t>(e));
  std::function<void(int, int)> choose = [&](int slot, int start) {
    if (slot == e) {
      patterns.push_back(pivots);
      return;
    }
    for (int c = start; c <= dim - (e - slot); ++c) {
      pivots[static_cast<std::size_t>(slot)] = c;
      choose(slot + 1, c + 1);
    }
  };
  choose(0, 0);

  auto run_pattern = [&](unsigned worker, const std::vector<int>& piv) {
    std::vector<bool> is_pivot(static_cast<std::size_t>(dim), false);
    for (int c : piv) is_pivot[static_cast<std::size_t>(c)] = true;
    std::vector<std::pair<int, int>> free;
    for (int i = 0; i < e; ++i)
      for (int c = piv[static_cast<std::size_t>(i)] + 1; c < dim; ++c)
        if (!is_pivot[static_cast<std::size_t>(c)]) free.emplace_back(i, c);
    FpMatrix basis(e, dim);
    for (int i = 0; i < e; ++i) basis.at(i, piv[static_cast<std::size_t>(i)]) = 1;
    while (true) {
      visit(worker, basis);
      std::size_t slot = 0;
      for (; slot < free.size(); ++slot) {
        int& cell = basis.at(free[slot].first, free[slot].second);
        if (++cell < p) break;
        cell = 0;
      }
      if (slot == free.size()) break;
    }
  };

  const unsigned workers = std::max(1U, options.workers);
  if (workers == 1) {
    for (const auto& piv : patterns) run_pattern(0, piv);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t t = next++; t < patterns.size(); t = next++) run_pattern(w, patterns[t]);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& err : errors)
    if (err) std::rethrow_exception(err);
}

namespace detail {

// Rank of the span of phi_k(b) over the rows b of `basis`.
inline int image_rank(const FFModule& m, const FpMatrix& basis) {
  FpMatrix images(m.r * basis.rows(), m.d2);
  int row = 0;
  for (int k = 0; k < m.r; ++k) {
    const FpMatrix& f = m.phis[static_cast<std::size_t>(k)];
    for (int b = 0; b < basis.rows(); ++b, ++row)
      for (int i = 0; i < m.d2; ++i) {
        int acc = 0;
        for (int j = 0; j < m.d1; ++j) acc += f.at(i, j) * basis.at(b, j);
        images.at(row, i) = acc % m.p;
      }
  }
  return rank(std::move(images), m.p);
}

// dim of the intersection of phi_k^{-1}(U) where U is the annihilator of the
// rows of `annihilator` (a basis of U^perp in the dual of M2).
inline int preimage_dimension(const FFModule& m, const FpMatrix& annihilator) {
  FpMatrix stacked(m.r * annihilator.rows(), m.d1);
  int row = 0;
  for (int k = 0; k < m.r; ++k) {
    const FpMatrix& f = m.phis[static_cast<std::size_t>(k)];
    for (int a = 0; a < annihilator.rows(); ++a, ++row)
      for (int j = 0; j < m.d1; ++j) {
        int acc = 0;
        for (int i = 0; i < m.d2; ++i) acc += annihilator.at(a, i) * f.at(i, j);
        stacked.at(row, j) = acc % m.p;
      }
  }
  return m.d1 - rank(std::move(stacked), m.p);
}

}  // namespace detail

/// h[w] = #{U in Gr_s(M1) : dim sum_k phi_k(U) = w}, w = 0..d2.
inline std::vector<BigInt> image_histogram(const FFModule& m, int s, const CountOptions& options = {}) {
  require(0 <= s && s <= m.d1, ErrorCode::InvalidParameter, "s must lie in [0, d1]");
  const unsigned workers = std::max(1U, options.workers);
  std::vector<std::vector<std::uint64_t>> tallies(workers, std::vector<std::uint64_t>(static_cast<std::size_t>(m.d2) + 1));
  for_each_subspace(m.p, m.d1, s, options, [&](unsigned worker, const FpMatrix& basis) {
    ++tallies[worker][static_cast<std::size_t>(detail::image_rank(m, basis))];
  });
  std::vector<BigInt> out(static_cast<std::size_t>(m.d2) + 1, 0);
  for (const auto& t : tallies)
    for (std::size_t w = 0; w < t.size(); ++w) out[w] += BigInt(static_cast<unsigned long>(t[w]));
  return out;
}

/// h[j] = #{U in Gr_{d2-s}(M2) : dim cap_k phi_k^{-1}(U) = j}, j = 0..d1.
/// U is enumerated through its s-dimensional annihilator in the dual of M2.
inline std::vector<BigInt> preimage_histogram(const FFModule& m, int s, const CountOptions& options = {}) {
  require(0 <= s && s <= m.d2, ErrorCode::InvalidParameter, "s must lie in [0, d2]");
  const unsigned workers = std::max(1U, options.workers);
  std::vector<std::vector<std::uint64_t>> tallies(workers, std::vector<std::uint64_t>(static_cast<std::size_t>(m.d1) + 1));
  for_each_subspace(m.p, m.d2, s, options, [&](unsigned worker, const FpMatrix& annihilator) {
    ++tallies[worker][static_cast<std::size_t>(detail::preimage_dimension(m, annihilator))];
  });
  std::vector<BigInt> out(static_cast<std::size_t>(m.d1) + 1, 0);
  for (const auto& t : tallies)
    for (std::size_t j = 0; j < t.size(); ++j) out[j] += BigInt(static_cast<unsigned long>(t[j]));
  return out;
}

/// #Gr_{(e1,e2)}(M) over F_p. N1 is enumerated; the e2-subspaces containing
/// W = sum_k phi_k(N1) are counted as a Gaussian binomial at q = p.
inline BigInt count_gr(const FFModule& m, int e1, int e2, const CountOptions& options = {}) {
  require(0 <= e1 && e1 <= m.d1 && 0 <= e2 && e2 <= m.d2, ErrorCode::InvalidParameter,
          "dimension vector outside [0,d1] x [0,d2]");
  const std::vector<BigInt> hist = image_histogram(m, e1, options);
  BigInt total = 0;
  for (int w = 0; w <= m.d2; ++w) {
    if (hist[static_cast<std::size_t>(w)] == 0) continue;
    total += hist[static_cast<std::size_t>(w)] * grassmannian_size(m.p, m.d2 - w, e2 - w);
  }
  return total;
}

enum class StratumSide { Z, ZPrime, ZBar, ZBarPrime };

/// Points of Z_{p,s}, Z'_{p,s} and their closed versions over F_p.
///   Z:     U in Gr_s(M1) with dim sum_k phi_k(U) = d2 - p      (ZBar: <= d2 - p)
///   Z':    U in Gr_{d2-s}(M2) with dim cap_k phi_k^{-1}(U) = p (ZBar': >= p)
inline BigInt count_strata(const FFModule& m, StratumSide side, int p_param, int s, const CountOptions& options = {}) {
  require(p_param >= 0 && s >= 0, ErrorCode::InvalidParameter, "stratum parameters must be nonnegative");
  BigInt total = 0;
  switch (side) {
    case StratumSide::Z:
    case StratumSide::ZBar: {
      const std::vector<BigInt> hist = image_histogram(m, s, options);
      for (int w = 0; w <= m.d2; ++w) {
        const bool hit = side == StratumSide::ZBar ? w <= m.d2 - p_param : w == m.d2 - p_param;
        if (hit) total += hist[static_cast<std::size_t>(w)];
      }
      break;
    }
    case StratumSide::ZPrime:
    case StratumSide::ZBarPrime: {
      const std::vector<BigInt> hist = preimage_histogram(m, s, options);
      for (int j = 0; j <= m.d1; ++j) {
        const bool hit = side == StratumSide::ZBarPrime ? j >= p_param : j == p_param;
        if (hit) total += hist[static_cast<std::size_t>(j)];
      }
      break;
    }
  }
  return total;
}

}  // namespace qcluster::ff
