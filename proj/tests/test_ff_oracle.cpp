#include <catch_amalgamated.hpp>

#include <set>
#include <vector>

#include "qcluster/cluster.hpp"
#include "qcluster/ffield.hpp"
#include "qcluster/strata.hpp"

using namespace qcluster;
using namespace qcluster::ff;

namespace {

// Vectors of F_p^d are encoded as integers in base p, coordinate 0 lowest.
std::vector<int> decode(int code, int p, int d) {
  std::vector<int> v(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i, code /= p) v[static_cast<std::size_t>(i)] = code % p;
  return v;
}

int encode(const std::vector<int>& v, int p) {
  int code = 0;
  for (auto it = v.rbegin(); it != v.rend(); ++it) code = code * p + *it;
  return code;
}

int ipow(int b, int e) {
  int out = 1;
  while (e-- > 0) out *= b;
  return out;
}

using Subspace = std::vector<bool>;  // membership over all p^d vectors

// Every e-dimensional subspace of F_p^d, grown one vector at a time.
std::vector<Subspace> all_subspaces(int p, int d, int e) {
  const int total = ipow(p, d);
  std::set<Subspace> layer;
  Subspace zero(static_cast<std::size_t>(total), false);
  zero[0] = true;
  layer.insert(zero);
  for (int k = 0; k < e; ++k) {
    std::set<Subspace> next;
    for (const Subspace& s : layer)
      for (int v = 1; v < total; ++v) {
        if (s[static_cast<std::size_t>(v)]) continue;
        Subspace grown = s;
        const std::vector<int> vv = decode(v, p, d);
        for (int u = 0; u < total; ++u) {
          if (!s[static_cast<std::size_t>(u)]) continue;
          std::vector<int> uu = decode(u, p, d);
          for (int c = 1; c < p; ++c) {
            std::vector<int> w(uu);
            for (int i = 0; i < d; ++i) w[static_cast<std::size_t>(i)] = (w[static_cast<std::size_t>(i)] + c * vv[static_cast<std::size_t>(i)]) % p;
            grown[static_cast<std::size_t>(encode(w, p))] = true;
          }
        }
        next.insert(std::move(grown));
      }
    layer = std::move(next);
  }
  return {layer.begin(), layer.end()};
}

std::vector<int> apply(const FpMatrix& f, const std::vector<int>& v, int p) {
  std::vector<int> out(static_cast<std::size_t>(f.rows()), 0);
  for (int i = 0; i < f.rows(); ++i) {
    int acc = 0;
    for (int j = 0; j < f.cols(); ++j) acc += f.at(i, j) * v[static_cast<std::size_t>(j)];
    out[static_cast<std::size_t>(i)] = acc % p;
  }
  return out;
}

// Pairs (N1, N2) of subspaces with phi_k(N1) inside N2 for all k.
long brute_force_gr(const FFModule& m, int e1, int e2) {
  const auto n1s = all_subspaces(m.p, m.d1, e1);
  const auto n2s = all_subspaces(m.p, m.d2, e2);
  long count = 0;
  for (const Subspace& n1 : n1s) {
    std::vector<int> needed;
    for (int v = 0; v < static_cast<int>(n1.size()); ++v) {
      if (!n1[static_cast<std::size_t>(v)]) continue;
      const std::vector<int> vv = decode(v, m.p, m.d1);
      for (const FpMatrix& f : m.phis) needed.push_back(encode(apply(f, vv, m.p), m.p));
    }
    for (const Subspace& n2 : n2s) {
      bool ok = true;
      for (int w : needed) ok = ok && n2[static_cast<std::size_t>(w)];
      count += ok;
    }
  }
  return count;
}

// Counts pairs (A, B) with B phi_k = phi_k A by running over every pair.
long brute_force_endomorphisms(const FFModule& m) {
  const int na = m.d1 * m.d1, nb = m.d2 * m.d2;
  const long total = ipow(m.p, na + nb);
  long count = 0;
  for (long code = 0; code < total; ++code) {
    long c = code;
    FpMatrix a(m.d1, m.d1), b(m.d2, m.d2);
    for (int i = 0; i < na; ++i, c /= m.p) a.at(i / m.d1, i % m.d1) = static_cast<int>(c % m.p);
    for (int i = 0; i < nb; ++i, c /= m.p) b.at(i / m.d2, i % m.d2) = static_cast<int>(c % m.p);
    bool ok = true;
    for (const FpMatrix& f : m.phis)
      for (int i = 0; i < m.d2 && ok; ++i)
        for (int j = 0; j < m.d1 && ok; ++j) {
          int lhs = 0, rhs = 0;
          for (int l = 0; l < m.d2; ++l) lhs += b.at(i, l) * f.at(l, j);
          for (int l = 0; l < m.d1; ++l) rhs += f.at(i, l) * a.at(l, j);
          ok = (lhs - rhs) % m.p == 0;
        }
    count += ok;
  }
  return count;
}

FpMatrix matrix(int rows, int cols, std::initializer_list<int> entries) {
  FpMatrix m(rows, cols);
  int k = 0;
  for (int e : entries) {
    m.at(k / cols, k % cols) = e;
    ++k;
  }
  return m;
}

BigInt at_p(const QHalfLaurent& poly, int p) {
  const Rational v = evaluate(poly, Rational(p));
  REQUIRE(v.get_den() == 1);
  return v.get_num();
}

}  // namespace

TEST_CASE("rank and kernel over F_p") {
  CHECK(rank(matrix(2, 2, {1, 1, 1, 1}), 2) == 1);
  CHECK(rank(matrix(2, 2, {1, 2, 2, 1}), 3) == 1);
  CHECK(rank(matrix(2, 2, {1, 2, 2, 1}), 5) == 2);
  CHECK(rank(FpMatrix(0, 3), 7) == 0);
  const FpMatrix m = matrix(2, 4, {1, 2, 0, 1, 0, 1, 1, 2});
  const FpMatrix k = kernel_basis(m, 3);
  CHECK(k.rows() == 2);
  for (int b = 0; b < k.rows(); ++b)
    for (int i = 0; i < m.rows(); ++i) {
      int acc = 0;
      for (int j = 0; j < m.cols(); ++j) acc += m.at(i, j) * k.at(b, j);
      CHECK(acc % 3 == 0);
    }
  CHECK(rank(k, 3) == 2);
  CHECK(inverse_mod(3, 7) == 5);
  CHECK(is_prime(31));
  CHECK_FALSE(is_prime(1));
  CHECK_FALSE(is_prime(9));
}

TEST_CASE("reflected modules") {
  const FFModule m4 = build_module(2, 2, 4);
  CHECK(m4.d1 == 2);
  CHECK(m4.d2 == 1);
  CHECK(m4.phis[0] == matrix(1, 2, {1, 0}));
  CHECK(m4.phis[1] == matrix(1, 2, {0, 1}));
  const FFModule m34 = build_module(3, 3, 4);
  for (int k = 0; k < 3; ++k)
    for (int j = 0; j < 3; ++j) CHECK(m34.phis[static_cast<std::size_t>(k)].at(0, j) == (j == k ? 1 : 0));
  const FFModule m6 = build_module(2, 2, 6);
  CHECK(m6.d1 == 4);
  CHECK(m6.d2 == 3);
  const FFModule m3 = build_module(5, 4, 3);
  CHECK(m3.d1 == 1);
  CHECK(m3.d2 == 0);
}

TEST_CASE("rigidity certificate against brute force") {
  for (auto [p, r, n] : std::vector<std::tuple<int, int, int>>{{2, 2, 4}, {3, 2, 4}, {2, 2, 5}, {2, 3, 4}}) {
    const FFModule m = build_module(p, r, n);
    CAPTURE(p, r, n);
    CHECK(endomorphism_dimension(m) == 1);
    CHECK(brute_force_endomorphisms(m) == p);
  }
  FFModule zero = build_module(2, 2, 5);
  for (auto& f : zero.phis) f = FpMatrix(f.rows(), f.cols());
  CHECK(endomorphism_dimension(zero) == 13);
  CHECK(brute_force_endomorphisms(zero) == 1L << 13);
}

TEST_CASE("subspace enumeration") {
  for (auto [p, d] : std::vector<std::pair<int, int>>{{2, 5}, {3, 4}, {5, 3}}) {
    for (int e = 0; e <= d; ++e) {
      std::set<std::vector<int>> seen;
      long visits = 0;
      for_each_subspace(p, d, e, {}, [&](unsigned, const FpMatrix& basis) {
        ++visits;
        FpMatrix copy = basis;
        CHECK(static_cast<int>(row_reduce(copy, p).size()) == e);
        CHECK(copy == basis);  // already reduced
        std::vector<int> flat;
        for (int i = 0; i < e; ++i)
          for (int j = 0; j < d; ++j) flat.push_back(basis.at(i, j));
        seen.insert(flat);
      });
      CHECK(static_cast<long>(seen.size()) == visits);
      CHECK(BigInt(visits) == grassmannian_size(p, d, e));
      CHECK(static_cast<long>(all_subspaces(p, d, e).size()) == visits);
    }
  }
  CHECK(grassmannian_size(2, 4, 2) == 35);
  CHECK(grassmannian_size(2, 4, 5) == 0);
}

TEST_CASE("subrepresentation counts against brute force") {
  for (auto [p, r, n] : std::vector<std::tuple<int, int, int>>{{2, 2, 4}, {2, 2, 5}, {2, 2, 6}, {3, 2, 4}, {2, 3, 4}, {3, 2, 5}}) {
    const FFModule m = build_module(p, r, n);
    for (int e1 = 0; e1 <= m.d1; ++e1)
      for (int e2 = 0; e2 <= m.d2; ++e2) {
        CAPTURE(p, r, n, e1, e2);
        CHECK(count_gr(m, e1, e2) == brute_force_gr(m, e1, e2));
      }
  }
}

TEST_CASE("point counts of small Grassmannians") {
  const FFModule m4 = build_module(2, 2, 4);
  CHECK(count_gr(m4, 1, 1) == 3);
  CHECK(count_gr(m4, 1, 0) == 0);
  CHECK(count_gr(m4, 2, 1) == 1);
  CHECK(count_gr(build_module(7, 2, 4), 1, 1) == 8);
  const FFModule m6 = build_module(2, 2, 6);
  CHECK(count_gr(m6, 0, 1) == 7);
  CHECK_THROWS_AS(count_gr(m6, 5, 0), Error);
}

TEST_CASE("counts equal the Grassmannian polynomials at q = p") {
  for (auto [r, n, p] : std::vector<std::tuple<int, int, int>>{{2, 4, 2}, {2, 4, 5}, {2, 5, 3}, {2, 6, 2}, {3, 4, 3}, {3, 5, 2}, {4, 4, 2}}) {
    const FFModule m = build_module(p, r, n);
    const GrTable t = gr_table(r, n);
    for (int e1 = 0; e1 <= m.d1; ++e1)
      for (int e2 = 0; e2 <= m.d2; ++e2) {
        CAPTURE(r, n, p, e1, e2);
        CHECK(count_gr(m, e1, e2) == at_p(t.entry(e1, e2).laurent(), p));
      }
  }
}

TEST_CASE("stratum counts") {
  const FFModule m4 = build_module(2, 2, 4);
  CHECK(count_strata(m4, StratumSide::ZPrime, 2, 0) == 1);
  CHECK(count_strata(m4, StratumSide::ZPrime, 1, 0) == 0);
  const FFModule m6 = build_module(3, 2, 6);
  for (int s = 0; s <= m6.d2; ++s) CHECK(count_strata(m6, StratumSide::ZBarPrime, 0, s) == grassmannian_size(3, m6.d2, m6.d2 - s));
  for (int s = 0; s <= m6.d1; ++s) CHECK(count_strata(m6, StratumSide::ZBar, 0, s) == grassmannian_size(3, m6.d1, s));
  // Zbar'_{1,2} of M(6) for r = 2 against the strata polynomial
  const StrataTable st = strata_from_gr(gr_table(2, 6), 1);
  REQUIRE(st.s() == 2);
  CHECK(count_strata(m6, StratumSide::ZBarPrime, 1, 2) == at_p(st.closed.at(1), 3));
  CHECK(count_strata(m6, StratumSide::ZPrime, 1, 2) == at_p(st.open.at(1), 3));
  CHECK_THROWS_AS(count_strata(m6, StratumSide::Z, -1, 0), Error);
}

TEST_CASE("forward identities and cumulativity at q = p") {
  for (auto [r, n, p] : std::vector<std::tuple<int, int, int>>{{2, 5, 3}, {2, 6, 2}, {3, 5, 2}}) {
    const FFModule m = build_module(p, r, n);
    for (int e2 = 0; e2 <= m.d2; ++e2) {
      const int s = m.d2 - e2;
      std::vector<BigInt> zp;
      for (int pp = 0; pp <= m.d1; ++pp) zp.push_back(count_strata(m, StratumSide::ZPrime, pp, s));
      for (int pp = 0; pp <= m.d1; ++pp) {
        BigInt tail = 0;
        for (int j = pp; j <= m.d1; ++j) tail += zp[static_cast<std::size_t>(j)];
        CHECK(count_strata(m, StratumSide::ZBarPrime, pp, s) == tail);
      }
      for (int e1 = 0; e1 <= m.d1; ++e1) {
        CAPTURE(r, n, p, e1, e2);
        const BigInt gr = count_gr(m, e1, e2);
        BigInt via_preimage = 0, via_image = 0;
        for (int pp = 0; pp <= m.d1; ++pp)
          via_preimage += at_p(QHalfLaurent(q_binomial(pp, e1)), p) * zp[static_cast<std::size_t>(pp)];
        for (int pp = 0; pp <= m.d2; ++pp)
          via_image += grassmannian_size(p, pp, e2 - m.d2 + pp) * count_strata(m, StratumSide::Z, pp, e1);
        CHECK(via_preimage == gr);
        CHECK(via_image == gr);
      }
    }
  }
}

TEST_CASE("random search and reflection give the same counts") {
  for (auto [p, r, n] : std::vector<std::tuple<int, int, int>>{{2, 2, 5}, {3, 2, 5}, {2, 3, 4}}) {
    const FFModule a = build_module(p, r, n);
    const FFModule b = build_module(p, r, n, BuildMethod::RandomSearch, 7);
    CHECK(endomorphism_dimension(b) == 1);
    for (int e1 = 0; e1 <= a.d1; ++e1)
      for (int e2 = 0; e2 <= a.d2; ++e2) CHECK(count_gr(a, e1, e2) == count_gr(b, e1, e2));
  }
}

TEST_CASE("worker count does not change counts") {
  const FFModule m = build_module(2, 3, 5);
  for (int e1 = 0; e1 <= m.d1; ++e1) CHECK(image_histogram(m, e1, {50'000'000, 4}) == image_histogram(m, e1, {}));
  for (int s = 0; s <= m.d2; ++s) CHECK(preimage_histogram(m, s, {50'000'000, 3}) == preimage_histogram(m, s, {}));
}

TEST_CASE("finite-field error paths") {
  auto code_of = [](auto&& f) {
    try {
      f();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode{};
  };
  CHECK(code_of([] { build_module(4, 2, 5); }) == ErrorCode::InvalidParameter);
  CHECK(code_of([] { build_module(37, 2, 5); }) == ErrorCode::InvalidParameter);
  CHECK(code_of([] { build_module(2, 2, 8); }) == ErrorCode::InvalidParameter);
  CHECK(code_of([] { build_module(2, 2, 5, BuildMethod::RandomSearch, 1, 0); }) == ErrorCode::ConstructionFailed);
  CHECK(code_of([] { build_module(2, 10, 6); }) == ErrorCode::BudgetExceeded);
  const FFModule m = build_module(2, 3, 5);
  CHECK(code_of([&] { image_histogram(m, 4, {100, 1}); }) == ErrorCode::BudgetExceeded);
}
