#pragma once

// The maximal Dyck path D_n of type (c_{n-1}-c_{n-2}) x c_{n-2}, its marked
// vertices v_j (upper ends of vertical edges) and the blue/green/red
// classification of the subpaths alpha(i,k). All slope tests are exact
// integer cross-multiplications.

#include <cstdint>
#include <string>
#include <vector>

#include "qcluster/error.hpp"
#include "qcluster/qcombinatorics.hpp"

namespace qcluster {

enum class Step : char { Horizontal = 'h', Vertical = 'v' };

struct Point {
  std::int64_t x = 0;
  std::int64_t y = 0;
  friend bool operator==(const Point&, const Point&) = default;
};

struct Color {
  enum class Kind { Blue, Green, Red };
  Kind kind = Kind::Blue;
  int m = 0;  // Green only
  int w = 0;  // Green only

  static Color blue() { return {Kind::Blue, 0, 0}; }
  static Color red() { return {Kind::Red, 0, 0}; }
  static Color green(int m, int w) { return {Kind::Green, m, w}; }

  bool is_blue() const { return kind == Kind::Blue; }
  bool is_green() const { return kind == Kind::Green; }
  bool is_red() const { return kind == Kind::Red; }

  friend bool operator==(const Color&, const Color&) = default;
};

inline std::string to_string(const Color& c) {
  switch (c.kind) {
    case Color::Kind::Blue: return "blue";
    case Color::Kind::Red: return "red";
    case Color::Kind::Green: return "green(" + std::to_string(c.m) + "," + std::to_string(c.w) + ")";
  }
  return "?";
}

/// Inclusive range of 1-based edge indices.
struct EdgeRange {
  int first = 1;
  int last = 0;
  int length() const { return last - first + 1; }
  bool contains(int i) const { return first <= i && i <= last; }
  friend bool operator==(const EdgeRange&, const EdgeRange&) = default;
};

class DyckPath {
 public:
  DyckPath(int r, int n, std::vector<Step> edges, std::vector<std::int64_t> c)
      : r_(r), n_(n), edges_(std::move(edges)), c_(std::move(c)) {
    vertices_.reserve(edges_.size() + 1);
    vertices_.push_back({0, 0});
    v_index_.push_back(0);
    for (std::size_t t = 0; t < edges_.size(); ++t) {
      Point p = vertices_.back();
      if (edges_[t] == Step::Horizontal) {
        ++p.x;
      } else {
        ++p.y;
        v_index_.push_back(static_cast<int>(t + 1));
      }
      vertices_.push_back(p);
    }
  }

  int r() const noexcept { return r_; }
  int n() const noexcept { return n_; }
  /// c_{n-1}
  int edge_count() const noexcept { return static_cast<int>(edges_.size()); }
  /// c_{n-2}; marked vertices are v_0 .. v_{marked_count()}.
  int marked_count() const noexcept { return static_cast<int>(v_index_.size()) - 1; }
  std::int64_t width() const { return vertices_.back().x; }
  std::int64_t height() const { return vertices_.back().y; }

  /// c_m for 1 <= m <= n.
  std::int64_t c(int m) const {
    require(m >= 1 && m < static_cast<int>(c_.size()), ErrorCode::IndexOutOfRange, "c index out of range");
    return c_[static_cast<std::size_t>(m)];
  }

  /// alpha_i, 1-based.
  Step edge(int i) const {
    require(i >= 1 && i <= edge_count(), ErrorCode::IndexOutOfRange, "edge index " + std::to_string(i));
    return edges_[static_cast<std::size_t>(i - 1)];
  }
  bool is_vertical(int i) const { return edge(i) == Step::Vertical; }

  /// w_t, 0 <= t <= c_{n-1}.
  const Point& vertex(int t) const {
    require(t >= 0 && t <= edge_count(), ErrorCode::IndexOutOfRange, "vertex index " + std::to_string(t));
    return vertices_[static_cast<std::size_t>(t)];
  }

  /// Edge index whose upper endpoint is v_j (0 for v_0).
  int v_index(int j) const {
    require(j >= 0 && j <= marked_count(), ErrorCode::IndexOutOfRange, "marked vertex " + std::to_string(j));
    return v_index_[static_cast<std::size_t>(j)];
  }
  const Point& v(int j) const { return vertex(v_index(j)); }
  const std::vector<int>& v_indices() const noexcept { return v_index_; }

  std::string word() const {
    std::string s;
    s.reserve(edges_.size());
    for (Step e : edges_) s.push_back(static_cast<char>(e));
    return s;
  }

 private:
  int r_;
  int n_;
  std::vector<Step> edges_;
  std::vector<std::int64_t> c_;  // c_[m] = c_m, index 0 unused
  std::vector<Point> vertices_;
  std::vector<int> v_index_;
};

inline constexpr std::int64_t kMaxDyckEdges = 50'000'000;

/// Builds D_n: after t edges the path sits at the highest lattice point
/// weakly below the diagonal, height floor(t * c_{n-2} / c_{n-1}).
inline DyckPath build_dyck(int r, int n) {
  require(r >= 2, ErrorCode::InvalidParameter, "r must be at least 2");
  require(n >= 4, ErrorCode::InvalidParameter, "Dyck paths are defined for n >= 4");
  std::vector<std::int64_t> c(static_cast<std::size_t>(n) + 1, 0);
  for (int m = 1; m <= n; ++m) c[static_cast<std::size_t>(m)] = c_small(r, m);
  const std::int64_t total = c[static_cast<std::size_t>(n - 1)];
  const std::int64_t rise = c[static_cast<std::size_t>(n - 2)];
  require(total <= kMaxDyckEdges, ErrorCode::BudgetExceeded, "Dyck path too long");

  std::vector<Step> edges;
  edges.reserve(static_cast<std::size_t>(total));
  for (std::int64_t t = 1; t <= total; ++t) {
    const bool up = (t * rise) / total > ((t - 1) * rise) / total;
    edges.push_back(up ? Step::Vertical : Step::Horizontal);
  }
  DyckPath path(r, n, std::move(edges), std::move(c));

  // Validate: below the diagonal, correct endpoint, and no h-v pair can be
  // flipped to v-h without crossing the diagonal (maximality).
  const std::int64_t a1 = total - rise;
  const std::int64_t a2 = rise;
  require(path.width() == a1 && path.height() == a2, ErrorCode::InvalidParameter, "Dyck endpoint mismatch");
  for (int t = 0; t <= path.edge_count(); ++t) {
    const Point& p = path.vertex(t);
    require(p.y * a1 <= a2 * p.x, ErrorCode::InvalidParameter, "Dyck path crosses the diagonal");
  }
  for (int t = 1; t < path.edge_count(); ++t) {
    if (path.edge(t) == Step::Horizontal && path.edge(t + 1) == Step::Vertical) {
      const Point& before = path.vertex(t - 1);
      const Point raised{before.x, before.y + 1};
      require(raised.y * a1 > a2 * raised.x, ErrorCode::InvalidParameter, "Dyck path is not maximal");
    }
  }
  return path;
}

/// s_{i,t} > s, where s is the slope of the diagonal. A vertical segment
/// counts as slope +infinity.
inline bool slope_exceeds(const DyckPath& path, int i, int t) {
  require(0 <= i && i < t && t <= path.marked_count(), ErrorCode::IndexOutOfRange,
          "slope_exceeds needs 0 <= i < t <= c_{n-2}");
  const Point& a = path.v(i);
  const Point& b = path.v(t);
  const std::int64_t dx = b.x - a.x;
  const std::int64_t dy = b.y - a.y;
  return dy * path.width() > path.height() * dx;
}

struct Classification {
  Color color;
  EdgeRange range;
  friend bool operator==(const Classification&, const Classification&) = default;
};

/// Colors alpha(i,k) and returns its edge range. Blue and green subpaths run
/// from v_i to v_k; red ones start one edge earlier, at the vertical edge
/// whose upper endpoint is v_i.
inline Classification classify(const DyckPath& path, int i, int k) {
  require(0 <= i && i < k && k <= path.marked_count(), ErrorCode::IndexOutOfRange,
          "classify needs 0 <= i < k <= c_{n-2}");
  const EdgeRange regular{path.v_index(i) + 1, path.v_index(k)};
  int t0 = -1;
  for (int t = i + 1; t <= k; ++t) {
    if (slope_exceeds(path, i, t)) {
      t0 = t;
      break;
    }
  }
  if (t0 < 0) return {Color::blue(), regular};

  const std::int64_t gap = t0 - i;
  const int r = path.r();
  const int n = path.n();
  Color found = Color::red();
  std::int64_t window = -1;
  for (int m = 3; m <= n - 1; ++m) {
    for (int w = 1; w < r - 1; ++w) {
      if (path.c(m) - w * path.c(m - 1) != gap) continue;
      const std::int64_t len = path.c(m - 1) - w * path.c(m - 2);
      if (found.is_green() && len != window)
        fail(ErrorCode::AmbiguousGreenLabel, "gap " + std::to_string(gap) + " has two green labels with different windows");
      if (!found.is_green()) {
        found = Color::green(m, w);
        window = len;
      }
    }
  }
  if (found.is_green()) return {found, regular};
  require(i >= 1, ErrorCode::InvalidParameter, "red subpath cannot start at v_0");
  return {Color::red(), EdgeRange{path.v_index(i), path.v_index(k)}};
}

/// Number of edges before v_i that green admissibility inspects:
/// c_{m-1} - w c_{m-2}.
inline std::int64_t green_window(const DyckPath& path, const Color& color) {
  require(color.is_green(), ErrorCode::InvalidParameter, "window requested for a non-green color");
  return path.c(color.m - 1) - color.w * path.c(color.m - 2);
}

/// ASCII staircase, top row first; '*' marks v_j, 'o' the other vertices.
inline std::string render_staircase(const DyckPath& path) {
  const auto W = static_cast<std::size_t>(path.width());
  const auto H = static_cast<std::size_t>(path.height());
  // Character grid with vertices at even coordinates.
  std::vector<std::string> grid(2 * H + 1, std::string(2 * W + 1, ' '));
  auto at = [&](std::int64_t x, std::int64_t y) -> char& {
    return grid[2 * H - static_cast<std::size_t>(y)][static_cast<std::size_t>(x)];
  };
  for (int t = 1; t <= path.edge_count(); ++t) {
    const Point& a = path.vertex(t - 1);
    if (path.edge(t) == Step::Horizontal) {
      at(2 * a.x + 1, 2 * a.y) = '-';
    } else {
      at(2 * a.x, 2 * a.y + 1) = '|';
    }
  }
  for (int t = 0; t <= path.edge_count(); ++t) {
    const Point& p = path.vertex(t);
    at(2 * p.x, 2 * p.y) = 'o';
  }
  for (int j = 0; j <= path.marked_count(); ++j) {
    const Point& p = path.v(j);
    at(2 * p.x, 2 * p.y) = '*';
  }
  std::string out;
  for (auto& row : grid) {
    while (!row.empty() && row.back() == ' ') row.pop_back();
    out += row;
    out += '\n';
  }
  return out;
}

}  // namespace qcluster
