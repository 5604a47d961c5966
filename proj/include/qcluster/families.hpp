#pragma once

// Compatible families of single edges and colored subpaths on D_n, their
// per-edge weights, and the expansion of the cluster variable as a sum over
// families evaluated in the quantum torus.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <functional>
#include <string>
#include <thread>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

#include "qcluster/dyck.hpp"
#include "qcluster/error.hpp"
#include "qcluster/torus.hpp"

namespace qcluster {

struct SingleEdge {
  int index = 0;
  friend bool operator==(const SingleEdge&, const SingleEdge&) = default;
};

struct Subpath {
  int i = 0;
  int k = 0;
  Color color;
  EdgeRange range;
  friend bool operator==(const Subpath&, const Subpath&) = default;
};

using ColoredElement = std::variant<SingleEdge, Subpath>;

struct Family {
  std::vector<int> edges;         // chosen single edges, ascending
  std::vector<Subpath> subpaths;  // ascending by range

  std::vector<ColoredElement> elements() const {
    std::vector<ColoredElement> out;
    for (const auto& s : subpaths) out.emplace_back(s);
    for (int e : edges) out.emplace_back(SingleEdge{e});
    return out;
  }

  /// Union of the single edges and all subpath ranges, ascending.
  std::vector<int> support() const {
    std::vector<int> out(edges.begin(), edges.end());
    for (const auto& s : subpaths)
      for (int e = s.range.first; e <= s.range.last; ++e) out.push_back(e);
    std::sort(out.begin(), out.end());
    return out;
  }

  friend bool operator==(const Family&, const Family&) = default;
};

/// Strict weak order used to materialize families into sets.
inline bool family_less(const Family& a, const Family& b) {
  if (a.edges != b.edges) return a.edges < b.edges;
  auto key = [](const Family& f) {
    std::vector<std::pair<int, int>> ks;
    for (const auto& s : f.subpaths) ks.emplace_back(s.i, s.k);
    return ks;
  };
  return key(a) < key(b);
}

inline constexpr std::uint64_t kDefaultFamilyBudget = 100'000'000;

struct EnumerationOptions {
  std::uint64_t budget = kDefaultFamilyBudget;
  unsigned workers = 1;
};

/// Weight of an edge lying inside a chosen subpath; depends only on the subpath.
inline WordMonomial subpath_edge_weight(const DyckPath& path, const Subpath& sub, int i) {
  require(sub.range.contains(i), ErrorCode::IndexOutOfRange, "edge outside subpath");
  if (sub.color.is_red() && i == sub.range.first) return {-1, -1};
  if (!path.is_vertical(i)) return {0, 0};
  const int back = i - path.r() + 1;
  if (back < 1 || !sub.range.contains(back))
    fail(ErrorCode::ExhaustivenessViolation,
         "vertical edge " + std::to_string(i) + " of alpha(" + std::to_string(sub.i) + "," + std::to_string(sub.k) +
             ") has no edge alpha_{i-r+1} in the same subpath");
  return path.is_vertical(back) ? WordMonomial{1, -1} : WordMonomial{0, -1};
}

inline WordMonomial single_edge_weight(const DyckPath& path, int i) {
  return path.is_vertical(i) ? WordMonomial{-1, -1} : WordMonomial{-1, 0};
}

inline WordMonomial unsupported_edge_weight(const DyckPath& path, int i) {
  return path.is_vertical(i) ? WordMonomial{-1, path.r() - 1} : WordMonomial{-1, path.r()};
}

/// beta_[i] for family beta.
inline WordMonomial edge_weight(const DyckPath& path, const Family& family, int i) {
  require(i >= 1 && i <= path.edge_count(), ErrorCode::IndexOutOfRange, "edge index " + std::to_string(i));
  if (std::binary_search(family.edges.begin(), family.edges.end(), i)) return single_edge_weight(path, i);
  for (const auto& s : family.subpaths)
    if (s.range.contains(i)) return subpath_edge_weight(path, s, i);
  return unsupported_edge_weight(path, i);
}

/// (|beta|_1, |beta|_2): sum of k-i over subpaths, and the total edge count.
inline std::pair<std::int64_t, std::int64_t> family_degrees(const Family& family) {
  std::int64_t deg1 = 0;
  auto deg2 = static_cast<std::int64_t>(family.edges.size());
  for (const auto& s : family.subpaths) {
    deg1 += s.k - s.i;
    deg2 += s.range.length();
  }
  return {deg1, deg2};
}

/// Checks the defining conditions of a compatible family. Returns an empty
/// string when valid, otherwise the violated condition.
inline std::string validate_family(const DyckPath& path, const Family& family) {
  std::vector<int> owner(static_cast<std::size_t>(path.edge_count()) + 1, -1);
  int id = 0;
  auto claim = [&](int e) {
    if (e < 1 || e > path.edge_count()) return false;
    if (owner[static_cast<std::size_t>(e)] != -1) return false;
    owner[static_cast<std::size_t>(e)] = id;
    return true;
  };
  for (int e : family.edges) {
    if (!claim(e)) return "single edge " + std::to_string(e) + " overlaps or is out of range";
    ++id;
  }
  for (const auto& s : family.subpaths) {
    const Classification expected = classify(path, s.i, s.k);
    if (expected.color != s.color || expected.range != s.range)
      return "alpha(" + std::to_string(s.i) + "," + std::to_string(s.k) + ") has the wrong color or range";
    for (int e = s.range.first; e <= s.range.last; ++e)
      if (!claim(e)) return "subpath edges overlap";
    ++id;
  }
  for (const auto& a : family.subpaths)
    for (const auto& b : family.subpaths)
      if (!(a == b) && a.i == b.k) return "subpath starts where another ends";
  for (const auto& s : family.subpaths) {
    if (!s.color.is_green()) continue;
    const int vi = path.v_index(s.i);
    const auto lo = std::max<std::int64_t>(1, vi - green_window(path, s.color) + 1);
    bool admissible = false;
    for (std::int64_t e = lo; e <= vi; ++e)
      if (owner[static_cast<std::size_t>(e)] != -1) admissible = true;
    if (!admissible) return "green subpath has no supported edge in its window";
  }
  return {};
}

namespace detail {

// A torus monomial q^{q2/2} X1^a X2^b.
struct Mono {
  std::int64_t q2 = 0;
  std::int64_t a = 0;
  std::int64_t b = 0;
  friend bool operator==(const Mono&, const Mono&) = default;
};

inline Mono times(const Mono& m, const Mono& o) {
  return {m.q2 + o.q2 - 2 * m.b * o.a, m.a + o.a, m.b + o.b};
}

inline Mono phi_mono(WordMonomial w) { return {w.a - w.b, w.a, w.b}; }

struct MonoHash {
  std::size_t operator()(const Mono& m) const noexcept {
    std::uint64_t h = static_cast<std::uint64_t>(m.q2) * 0x9E3779B97F4A7C15ULL;
    h ^= static_cast<std::uint64_t>(m.a) + 0x517cc1b727220a95ULL + (h << 6) + (h >> 2);
    h ^= static_cast<std::uint64_t>(m.b) + 0x2545F4914F6CDD1DULL + (h << 6) + (h >> 2);
    return static_cast<std::size_t>(h);
  }
};

// Left-to-right backtracker over edge positions. At position p the next
// undecided edge is alpha_p and may be left unsupported, chosen as a single
// edge, or covered by a subpath whose range starts at p.
class FamilyScanner {
 public:
  struct Candidate {
    Subpath sub;
    Mono weight;
    std::int64_t window_lo = 0;  // green: lowest edge of the admissibility window
    std::string defect;          // non-empty if the weight table has no row for some edge
  };

  // Resumable recursion state; used to split work across threads.
  struct State {
    int pos = 1;
    Mono mono;
    int last_supported = 0;
    int ended_vertex = -1;
  };

  explicit FamilyScanner(const DyckPath& path) : path_(path) {
    const int N = path.edge_count();
    unsupported_.resize(static_cast<std::size_t>(N) + 1);
    single_.resize(static_cast<std::size_t>(N) + 1);
    starts_.resize(static_cast<std::size_t>(N) + 2);
    for (int p = 1; p <= N; ++p) {
      unsupported_[static_cast<std::size_t>(p)] = phi_mono(unsupported_edge_weight(path, p));
      single_[static_cast<std::size_t>(p)] = phi_mono(single_edge_weight(path, p));
    }
    const int K = path.marked_count();
    for (int i = 0; i <= K; ++i) {
      for (int k = i + 1; k <= K; ++k) {
        Classification cl = classify(path, i, k);
        Candidate cand;
        cand.sub = Subpath{i, k, cl.color, cl.range};
        try {
          Mono m;
          for (int e = cl.range.first; e <= cl.range.last; ++e)
            m = times(m, phi_mono(subpath_edge_weight(path, cand.sub, e)));
          cand.weight = m;
        } catch (const Error& err) {
          cand.defect = err.what();
        }
        if (cl.color.is_green())
          cand.window_lo = std::max<std::int64_t>(1, path.v_index(i) - green_window(path, cl.color) + 1);
        starts_[static_cast<std::size_t>(cl.range.first)].push_back(candidates_.size());
        candidates_.push_back(std::move(cand));
      }
    }
  }

  const DyckPath& path() const { return path_; }

  // Sink interface: leaf(const Mono&), push_single(int), push_subpath(const Subpath&), pop_single(), pop_subpath().
  template <class Sink>
  void run(const State& s, Sink& sink) const {
    scan(s.pos, s.mono, s.last_supported, s.ended_vertex, sink);
  }

  // All recursion states reached when the position first exceeds `split_pos`.
  std::vector<State> frontier(int split_pos) const {
    std::vector<State> out;
    collect(1, Mono{}, 0, -1, split_pos, out);
    return out;
  }

 private:
  template <class F>
  void for_each_choice(int p, const Mono& m, int last_supported, int ended_vertex, F&& f) const {
    const auto up = static_cast<std::size_t>(p);
    f(p + 1, times(m, unsupported_[up]), last_supported, -1, nullptr, false);
    f(p + 1, times(m, single_[up]), p, -1, nullptr, true);
    for (std::size_t idx : starts_[up]) {
      const Candidate& c = candidates_[idx];
      if (!c.sub.color.is_red() && ended_vertex == c.sub.i) continue;
      if (c.sub.color.is_green() && last_supported < c.window_lo) continue;
      if (!c.defect.empty()) fail(ErrorCode::ExhaustivenessViolation, c.defect);
      f(c.sub.range.last + 1, times(m, c.weight), c.sub.range.last, c.sub.k, &c.sub, false);
    }
  }

  template <class Sink>
  void scan(int p, const Mono& m, int last_supported, int ended_vertex, Sink& sink) const {
    if (p > path_.edge_count()) {
      sink.leaf(m);
      return;
    }
    for_each_choice(p, m, last_supported, ended_vertex,
                    [&](int np, const Mono& nm, int ls, int ev, const Subpath* sub, bool single) {
                      if (sub) {
                        sink.push_subpath(*sub);
                      } else if (single) {
                        sink.push_single(p);
                      }
                      scan(np, nm, ls, ev, sink);
                      if (sub) {
                        sink.pop_subpath();
                      } else if (single) {
                        sink.pop_single();
                      }
                    });
  }

  void collect(int p, const Mono& m, int last_supported, int ended_vertex, int split_pos,
               std::vector<State>& out) const {
    if (p > split_pos || p > path_.edge_count()) {
      out.push_back(State{p, m, last_supported, ended_vertex});
      return;
    }
    for_each_choice(p, m, last_supported, ended_vertex,
                    [&](int np, const Mono& nm, int ls, int ev, const Subpath*, bool) {
                      collect(np, nm, ls, ev, split_pos, out);
                    });
  }

  const DyckPath& path_;
  std::vector<Mono> unsupported_;
  std::vector<Mono> single_;
  std::vector<Candidate> candidates_;
  std::vector<std::vector<std::size_t>> starts_;
};

struct FamilyBuilder {
  Family family;
  std::uint64_t count = 0;
  std::uint64_t budget = kDefaultFamilyBudget;
  const std::function<void(const Family&)>* callback = nullptr;

  void leaf(const Mono&) {
    if (++count > budget) fail(ErrorCode::BudgetExceeded, "family count exceeds budget " + std::to_string(budget));
    (*callback)(family);
  }
  void push_single(int p) { family.edges.push_back(p); }
  void pop_single() { family.edges.pop_back(); }
  void push_subpath(const Subpath& s) { family.subpaths.push_back(s); }
  void pop_subpath() { family.subpaths.pop_back(); }
};

struct MonoAccumulator {
  std::unordered_map<Mono, std::uint64_t, MonoHash> counts;
  std::uint64_t leaves = 0;
  std::uint64_t budget = kDefaultFamilyBudget;

  void leaf(const Mono& m) {
    ++counts[m];
    if (++leaves > budget) fail(ErrorCode::BudgetExceeded, "family count exceeds budget " + std::to_string(budget));
  }
  void push_single(int) {}
  void pop_single() {}
  void push_subpath(const Subpath&) {}
  void pop_subpath() {}
};

struct LeafCounter {
  std::uint64_t leaves = 0;
  std::uint64_t budget = kDefaultFamilyBudget;

  void leaf(const Mono&) {
    if (++leaves > budget) fail(ErrorCode::BudgetExceeded, "family count exceeds budget " + std::to_string(budget));
  }
  void push_single(int) {}
  void pop_single() {}
  void push_subpath(const Subpath&) {}
  void pop_subpath() {}
};

}  // namespace detail

/// Streams every compatible family exactly once, in a fixed order: edges are
/// decided left to right, and at each edge the options are tried as
/// unsupported, single edge, then subpaths starting there by (i, k).
inline void for_each_family(const DyckPath& path, const std::function<void(const Family&)>& callback,
                            std::uint64_t budget = kDefaultFamilyBudget) {
  detail::FamilyScanner scanner(path);
  detail::FamilyBuilder builder;
  builder.budget = budget;
  builder.callback = &callback;
  scanner.run({}, builder);
}

inline std::vector<Family> enumerate_families(const DyckPath& path, std::uint64_t budget = kDefaultFamilyBudget) {
  std::vector<Family> out;
  for_each_family(path, [&](const Family& f) { out.push_back(f); }, budget);
  return out;
}

struct FamilySum {
  TorusElement value;
  std::uint64_t family_count = 0;
};

/// phi(x_{n-1}) = sum over families of q * X1 * prod_i phi(beta_[i]) * X1^{-1}.
/// Equals q^{1/2} X_n.
inline FamilySum enum_xvar_with_count(int r, int n, const EnumerationOptions& options = {}) {
  const DyckPath path = build_dyck(r, n);
  detail::FamilyScanner scanner(path);

  std::vector<detail::MonoAccumulator> parts;
  const unsigned workers = std::max(1U, options.workers);
  if (workers == 1) {
    parts.resize(1);
    parts[0].budget = options.budget;
    scanner.run({}, parts[0]);
  } else {
    int split = 1;
    std::vector<detail::FamilyScanner::State> tasks = scanner.frontier(split);
    while (tasks.size() < 16 * workers && split < path.edge_count()) tasks = scanner.frontier(++split);
    parts.resize(workers);
    for (auto& p : parts) p.budget = options.budget;
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t t = next++; t < tasks.size(); t = next++) scanner.run(tasks[t], parts[w]);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }

  FamilySum result;
  TorusElement::TermMap terms;
  for (auto& part : parts) {
    result.family_count += part.leaves;
    for (const auto& [m, count] : part.counts) {
      // q * X1 * (q^{q2/2} X1^a X2^b) * X1^{-1} = q^{q2/2 + 1 + b} X1^a X2^b
      QHalfLaurent c = QHalfLaurent::monomial(m.q2 + 2 + 2 * m.b, BigInt(static_cast<unsigned long>(count)));
      auto [it, inserted] = terms.try_emplace(Exponent{m.a, m.b}, c);
      if (!inserted) it->second += c;
    }
  }
  require(result.family_count <= options.budget, ErrorCode::BudgetExceeded,
          "family count exceeds budget " + std::to_string(options.budget));
  result.value = TorusElement::from_terms(std::move(terms));
  return result;
}

inline TorusElement enum_xvar(int r, int n, const EnumerationOptions& options = {}) {
  return enum_xvar_with_count(r, n, options).value;
}

inline std::uint64_t count_families(const DyckPath& path, std::uint64_t budget = kDefaultFamilyBudget) {
  detail::FamilyScanner scanner(path);
  detail::LeafCounter counter;
  counter.budget = budget;
  scanner.run({}, counter);
  return counter.leaves;
}

}  // namespace qcluster
