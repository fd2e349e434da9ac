#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <optional>
#include <queue>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "logschro/error.hpp"

namespace logschro {

/// Real-valued function on the vertex set.
using Field = Eigen::VectorXd;

enum class GraphKind { lattice_torus, lattice_dirichlet, general };

enum class Boundary { torus, dirichlet };

/// Finite truncation of Z^N: a box of the given side lengths, either
/// periodically identified (torus) or embedded in Z^N with zero exterior
/// values (dirichlet).
struct LatticeSpec
{
  int dimension = 1;
  std::vector<int> sides;
  Boundary boundary = Boundary::torus;
};

/// Row-major bijection between box coordinates and vertex indices; the last
/// coordinate varies fastest.
class LatticeIndexer
{
public:
  LatticeIndexer() = default;

  explicit LatticeIndexer(std::vector<int> sides) : sides_(std::move(sides))
  {
    strides_.assign(sides_.size(), 1);
    for (std::size_t i = sides_.size(); i-- > 1;)
      strides_[i - 1] = strides_[i] * sides_[i];
  }

  int dimension() const noexcept { return static_cast<int>(sides_.size()); }
  const std::vector<int>& sides() const noexcept { return sides_; }

  int size() const
  {
    return std::accumulate(sides_.begin(), sides_.end(), 1, std::multiplies<>());
  }

  int index_of(std::span<const int> coords) const
  {
    if (coords.size() != sides_.size())
      throw ValidationError("coordinate tuple has " + std::to_string(coords.size()) +
                            " entries, lattice dimension is " + std::to_string(sides_.size()));
    int index = 0;
    for (std::size_t i = 0; i < sides_.size(); ++i) {
      if (coords[i] < 0 || coords[i] >= sides_[i])
        throw ValidationError("coordinate " + std::to_string(coords[i]) + " out of range on axis " +
                              std::to_string(i));
      index += coords[i] * strides_[i];
    }
    return index;
  }

  std::vector<int> coords_of(int index) const
  {
    std::vector<int> coords(sides_.size());
    for (std::size_t i = 0; i < sides_.size(); ++i) {
      coords[i] = index / strides_[i];
      index %= strides_[i];
    }
    return coords;
  }

private:
  std::vector<int> sides_;
  std::vector<int> strides_;
};

/// Immutable finite graph with unit weights and counting measure.
///
/// Neighbor lists are sorted, which fixes the summation order of every
/// stencil.  For Dirichlet lattices only in-box neighbors are stored; the
/// remaining `ambient_degree(x) - degree(x)` exterior neighbors carry the
/// value 0 in every operator.
class GraphTopology
{
public:
  int vertex_count() const noexcept { return static_cast<int>(ambient_.size()); }

  std::span<const int> neighbors(int x) const
  {
    return {adjacency_.data() + offsets_[x], adjacency_.data() + offsets_[x + 1]};
  }

  int degree(int x) const { return offsets_[x + 1] - offsets_[x]; }
  int ambient_degree(int x) const { return ambient_[x]; }
  int exterior_count(int x) const { return ambient_[x] - degree(x); }

  /// Uniform degree bound C (2N on lattices).
  int max_degree() const noexcept { return max_degree_; }

  GraphKind kind() const noexcept { return kind_; }
  bool is_lattice() const noexcept { return lattice_.has_value(); }
  const std::optional<LatticeIndexer>& lattice() const noexcept { return lattice_; }

  /// Number of stored undirected edges.
  std::size_t edge_count() const noexcept { return adjacency_.size() / 2; }

  friend GraphTopology build_lattice(const LatticeSpec& spec);
  friend GraphTopology build_general_graph(std::span<const std::pair<int, int>> edges,
                                           int vertex_count);

private:
  GraphTopology() = default;

  static GraphTopology from_lists(std::vector<std::vector<int>> lists, std::vector<int> ambient,
                                  GraphKind kind)
  {
    GraphTopology g;
    g.kind_ = kind;
    g.ambient_ = std::move(ambient);
    g.offsets_.assign(lists.size() + 1, 0);
    for (std::size_t x = 0; x < lists.size(); ++x) {
      std::sort(lists[x].begin(), lists[x].end());
      g.offsets_[x + 1] = g.offsets_[x] + static_cast<int>(lists[x].size());
    }
    g.adjacency_.reserve(g.offsets_.back());
    for (const auto& l : lists)
      g.adjacency_.insert(g.adjacency_.end(), l.begin(), l.end());
    g.max_degree_ = g.ambient_.empty() ? 0 : *std::max_element(g.ambient_.begin(), g.ambient_.end());
    return g;
  }

  bool connected() const
  {
    const int n = vertex_count();
    if (n == 0)
      return false;
    std::vector<char> seen(n, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int reached = 1;
    while (!stack.empty()) {
      const int x = stack.back();
      stack.pop_back();
      for (int y : neighbors(x))
        if (!seen[y]) {
          seen[y] = 1;
          ++reached;
          stack.push_back(y);
        }
    }
    return reached == n;
  }

  GraphKind kind_ = GraphKind::general;
  std::vector<int> offsets_;
  std::vector<int> adjacency_;
  std::vector<int> ambient_;
  int max_degree_ = 0;
  std::optional<LatticeIndexer> lattice_;
};

inline GraphTopology build_lattice(const LatticeSpec& spec)
{
  if (spec.dimension < 1)
    throw ValidationError("lattice dimension must be positive");
  if (static_cast<int>(spec.sides.size()) != spec.dimension)
    throw ValidationError("lattice needs " + std::to_string(spec.dimension) + " side lengths, got " +
                          std::to_string(spec.sides.size()));
  const bool torus = spec.boundary == Boundary::torus;
  for (int i = 0; i < spec.dimension; ++i) {
    const int side = spec.sides[i];
    if (torus && side < 3)
      throw ValidationError("torus side on axis " + std::to_string(i) + " is " +
                            std::to_string(side) + "; must be >= 3");
    if (!torus && side < 1)
      throw ValidationError("box side on axis " + std::to_string(i) + " is " +
                            std::to_string(side) + "; must be >= 1");
  }

  LatticeIndexer indexer(spec.sides);
  const int n = indexer.size();
  std::vector<std::vector<int>> lists(n);
  std::vector<int> coords;
  for (int x = 0; x < n; ++x) {
    coords = indexer.coords_of(x);
    for (int axis = 0; axis < spec.dimension; ++axis) {
      const int side = spec.sides[axis];
      for (int step : {-1, 1}) {
        auto c = coords;
        c[axis] += step;
        if (torus)
          c[axis] = (c[axis] + side) % side;
        else if (c[axis] < 0 || c[axis] >= side)
          continue;
        lists[x].push_back(indexer.index_of(c));
      }
    }
  }

  auto g = GraphTopology::from_lists(std::move(lists), std::vector<int>(n, 2 * spec.dimension),
                                     torus ? GraphKind::lattice_torus : GraphKind::lattice_dirichlet);
  g.lattice_ = std::move(indexer);
  return g;
}

inline GraphTopology build_general_graph(std::span<const std::pair<int, int>> edges, int vertex_count)
{
  if (vertex_count < 1)
    throw ValidationError("graph needs at least one vertex");
  std::vector<std::vector<int>> lists(vertex_count);
  for (auto [a, b] : edges) {
    if (a < 0 || b < 0 || a >= vertex_count || b >= vertex_count)
      throw ValidationError("edge (" + std::to_string(a) + ", " + std::to_string(b) +
                            ") references a vertex outside [0, " + std::to_string(vertex_count) + ")");
    if (a == b)
      throw ValidationError("self-loop at vertex " + std::to_string(a));
    if (std::find(lists[a].begin(), lists[a].end(), b) != lists[a].end())
      throw ValidationError("duplicate edge (" + std::to_string(a) + ", " + std::to_string(b) + ")");
    lists[a].push_back(b);
    lists[b].push_back(a);
  }
  std::vector<int> ambient(vertex_count);
  for (int x = 0; x < vertex_count; ++x)
    ambient[x] = static_cast<int>(lists[x].size());

  auto g = GraphTopology::from_lists(std::move(lists), std::move(ambient), GraphKind::general);
  if (!g.connected())
    throw ValidationError("graph is not connected");
  return g;
}

/// Graph distance from `source` to every vertex (stored edges only).
inline std::vector<int> bfs_distance(const GraphTopology& g, int source)
{
  if (source < 0 || source >= g.vertex_count())
    throw ValidationError("BFS source " + std::to_string(source) + " out of range");
  std::vector<int> dist(g.vertex_count(), -1);
  std::queue<int> queue;
  dist[source] = 0;
  queue.push(source);
  while (!queue.empty()) {
    const int x = queue.front();
    queue.pop();
    for (int y : g.neighbors(x))
      if (dist[y] < 0) {
        dist[y] = dist[x] + 1;
        queue.push(y);
      }
  }
  return dist;
}

namespace detail {

inline void require_exponent(double p, const char* what)
{
  if (!(p > 1.0) || !std::isfinite(p))
    throw ValidationError(std::string(what) + ": exponent p must satisfy p > 1, got " +
                          std::to_string(p));
}

inline void require_field(const GraphTopology& g, const Field& u, const char* name)
{
  if (u.size() != g.vertex_count())
    throw ValidationError(std::string(name) + " has " + std::to_string(u.size()) +
                          " entries, graph has " + std::to_string(g.vertex_count()) + " vertices");
  if (!u.allFinite())
    throw ValidationError(std::string(name) + " contains non-finite entries");
}

/// |t|^p.
inline double abs_pow(double t, double p)
{
  return p == 2.0 ? t * t : std::pow(std::abs(t), p);
}

/// |t|^{p-2} t, with the value 0 at t = 0 for every p > 1.
inline double signed_pow(double t, double p)
{
  if (p == 2.0)
    return t;
  const double m = std::pow(std::abs(t), p - 1.0);
  return t < 0.0 ? -m : m;
}

}  // namespace detail

/// Graph Laplacian  Δu(x) = Σ_{y~x} (u(y) - u(x)); exterior neighbors of a
/// Dirichlet box contribute (0 - u(x)).
inline Field apply_laplacian(const GraphTopology& g, const Field& u)
{
  detail::require_field(g, u, "u");
  Field out(g.vertex_count());
  for (int x = 0; x < g.vertex_count(); ++x) {
    double acc = 0.0;
    for (int y : g.neighbors(x))
      acc += u[y] - u[x];
    acc += g.exterior_count(x) * (-u[x]);
    out[x] = acc;
  }
  return out;
}

/// Graph p-Laplacian  Δ_p u(x) = Σ_{y~x} |u(y)-u(x)|^{p-2} (u(y)-u(x)).
inline Field apply_p_laplacian(const GraphTopology& g, const Field& u, double p)
{
  detail::require_exponent(p, "apply_p_laplacian");
  detail::require_field(g, u, "u");
  Field out(g.vertex_count());
  for (int x = 0; x < g.vertex_count(); ++x) {
    double acc = 0.0;
    for (int y : g.neighbors(x))
      acc += detail::signed_pow(u[y] - u[x], p);
    acc += g.exterior_count(x) * detail::signed_pow(-u[x], p);
    out[x] = acc;
  }
  return out;
}

/// Pointwise gradient form Γ(u,v)(x) = ½ Σ_{y~x} (u(y)-u(x))(v(y)-v(x)).
///
/// On a Dirichlet box each exterior edge is attributed wholly to its in-box
/// endpoint (weight 1 rather than ½), so that Σ_x Γ(u,v) = -Σ_x Δu·v holds on
/// every topology.
inline Field gradient_form(const GraphTopology& g, const Field& u, const Field& v)
{
  detail::require_field(g, u, "u");
  detail::require_field(g, v, "v");
  Field out(g.vertex_count());
  for (int x = 0; x < g.vertex_count(); ++x) {
    double acc = 0.0;
    for (int y : g.neighbors(x))
      acc += (u[y] - u[x]) * (v[y] - v[x]);
    out[x] = 0.5 * acc + g.exterior_count(x) * (u[x] * v[x]);
  }
  return out;
}

/// |∇u|_p^p(x) = ½ Σ_{y~x} |u(y)-u(x)|^p, with the same exterior-edge
/// attribution as gradient_form.
inline Field gradient_density(const GraphTopology& g, const Field& u, double p)
{
  detail::require_exponent(p, "gradient_density");
  detail::require_field(g, u, "u");
  Field out(g.vertex_count());
  for (int x = 0; x < g.vertex_count(); ++x) {
    double acc = 0.0;
    for (int y : g.neighbors(x)) {
      const double d = u[y] - u[x];
      acc += detail::abs_pow(d, p);
    }
    out[x] = 0.5 * acc + g.exterior_count(x) * detail::abs_pow(u[x], p);
  }
  return out;
}

struct Norm
{
  enum class Kind { lp, sup, sobolev, dirichlet_energy };

  Kind kind = Kind::lp;
  double p = 2.0;

  static Norm lp(double p) { return {Kind::lp, p}; }
  static Norm sup() { return {Kind::sup, std::numeric_limits<double>::infinity()}; }
  /// W^{1,p} norm (H^1 at p = 2).
  static Norm sobolev(double p) { return {Kind::sobolev, p}; }
  /// Σ_x |∇u|_p^p(x).
  static Norm dirichlet_energy(double p) { return {Kind::dirichlet_energy, p}; }
};

namespace detail {

inline double sum_abs_pow(const Field& u, double p)
{
  double acc = 0.0;
  for (Eigen::Index i = 0; i < u.size(); ++i)
    acc += abs_pow(u[i], p);
  return acc;
}

inline double root(double s, double p)
{
  return p == 2.0 ? std::sqrt(s) : std::pow(s, 1.0 / p);
}

}  // namespace detail

inline double norm(const GraphTopology& g, const Field& u, Norm kind)
{
  detail::require_field(g, u, "u");
  switch (kind.kind) {
    case Norm::Kind::sup:
      return u.size() == 0 ? 0.0 : u.cwiseAbs().maxCoeff();
    case Norm::Kind::lp:
      if (!(kind.p >= 1.0) || !std::isfinite(kind.p))
        throw ValidationError("lp norm requires 1 <= p < inf, got " + std::to_string(kind.p));
      return detail::root(detail::sum_abs_pow(u, kind.p), kind.p);
    case Norm::Kind::sobolev: {
      detail::require_exponent(kind.p, "sobolev norm");
      const Field grad = gradient_density(g, u, kind.p);
      double acc = 0.0;
      for (int x = 0; x < g.vertex_count(); ++x)
        acc += grad[x] + detail::abs_pow(u[x], kind.p);
      return detail::root(acc, kind.p);
    }
    case Norm::Kind::dirichlet_energy: {
      detail::require_exponent(kind.p, "dirichlet energy");
      const Field grad = gradient_density(g, u, kind.p);
      double acc = 0.0;
      for (int x = 0; x < g.vertex_count(); ++x)
        acc += grad[x];
      return acc;
    }
  }
  return 0.0;
}

}  // namespace logschro
