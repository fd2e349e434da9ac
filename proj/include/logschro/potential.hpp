#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "logschro/check_report.hpp"
#include "logschro/error.hpp"
#include "logschro/graph.hpp"

namespace logschro {

enum class PotentialClass { periodic, coercive, well, asymptotically_periodic, explicit_values };

inline const char* to_string(PotentialClass c)
{
  switch (c) {
    case PotentialClass::periodic: return "periodic";
    case PotentialClass::coercive: return "coercive";
    case PotentialClass::well: return "well";
    case PotentialClass::asymptotically_periodic: return "asymptotically_periodic";
    case PotentialClass::explicit_values: return "explicit";
  }
  return "unknown";
}

/// T-periodic potential given by one T^N tile, indexed row-major by
/// (x_1 mod T, ..., x_N mod T).
struct PeriodicSpec
{
  int period = 1;
  std::vector<double> tile;
};

/// V(x) = scale * d(x, center)^exponent + offset, d the graph distance.
struct CoerciveSpec
{
  int center = 0;
  double exponent = 2.0;
  double scale = 1.0;
  double offset = 0.0;
};

/// Gaussian dip below the level at infinity:
/// V(x) = v_inf - depth * exp(-d(x, center)^2 / width^2).
struct WellSpec
{
  int center = 0;
  double v_inf = 0.0;
  double depth = 0.0;
  double width = 1.0;
};

/// V = V_p - decay with V_p periodic and decay >= 0.
struct AsymptoticallyPeriodicSpec
{
  PeriodicSpec base;
  Field decay;
};

struct ExplicitSpec
{
  Field values;
};

using PotentialSpec =
    std::variant<PeriodicSpec, CoerciveSpec, WellSpec, AsymptoticallyPeriodicSpec, ExplicitSpec>;

/// Class-specific facts measured when the potential is built.
struct AdmissibilityFacts
{
  /// max |V(x + T e_i) - V(x)| over in-range translates (periodic classes).
  std::optional<double> periodicity_residual;
  /// max (V - V_p)_+ (asymptotically periodic).
  std::optional<double> domination_residual;
  /// max |V - V_p| on the outer shell of the box, a finite stand-in for the
  /// decay |V - V_p| -> 0 at infinity (asymptotically periodic).
  std::optional<double> boundary_shell_deviation;
  /// max (V - V_inf)_+ (well).
  std::optional<double> well_bound_residual;
};

/// Vertex values of V together with their class and cached infimum.
class Potential
{
public:
  const Field& values() const noexcept { return values_; }
  double operator[](Eigen::Index x) const { return values_[x]; }
  Eigen::Index size() const noexcept { return values_.size(); }

  PotentialClass potential_class() const noexcept { return class_; }
  double infimum() const noexcept { return infimum_; }
  std::optional<int> period() const noexcept { return period_; }
  /// V_p for the asymptotically periodic class.
  const std::optional<Field>& dominating() const noexcept { return dominating_; }
  std::optional<double> v_inf() const noexcept { return v_inf_; }
  const AdmissibilityFacts& facts() const noexcept { return facts_; }

  /// Explicit potential with no admissibility check.  Intended for purely
  /// algebraic identities (e.g. the λ-shift transport) where the shifted
  /// potential may leave the admissible range.
  static Potential explicit_unchecked(Field values)
  {
    Potential pot;
    pot.values_ = std::move(values);
    pot.class_ = PotentialClass::explicit_values;
    pot.infimum_ = pot.values_.size() ? pot.values_.minCoeff() : 0.0;
    return pot;
  }

  friend Potential make_potential(const GraphTopology& g, const PotentialSpec& spec);
  friend Potential shift_potential(const Potential& pot, double lambda);

private:
  Potential() = default;

  Field values_;
  PotentialClass class_ = PotentialClass::explicit_values;
  double infimum_ = 0.0;
  std::optional<int> period_;
  std::optional<Field> dominating_;
  std::optional<double> v_inf_;
  AdmissibilityFacts facts_;
};

namespace detail {

inline Field tile_periodic(const GraphTopology& g, const PeriodicSpec& spec)
{
  if (!g.is_lattice())
    throw ValidationError("periodic potentials require a lattice graph");
  const auto& lat = *g.lattice();
  const int T = spec.period;
  if (T < 1)
    throw ValidationError("period must be positive, got " + std::to_string(T));
  int tile_size = 1;
  for (int i = 0; i < lat.dimension(); ++i)
    tile_size *= T;
  if (static_cast<int>(spec.tile.size()) != tile_size)
    throw ValidationError("periodic tile needs T^N = " + std::to_string(tile_size) +
                          " entries, got " + std::to_string(spec.tile.size()));
  if (g.kind() == GraphKind::lattice_torus)
    for (int i = 0; i < lat.dimension(); ++i)
      if (lat.sides()[i] % T != 0)
        throw ValidationError("torus side " + std::to_string(lat.sides()[i]) + " on axis " +
                              std::to_string(i) + " is not divisible by period " +
                              std::to_string(T));

  LatticeIndexer tile_index(std::vector<int>(lat.dimension(), T));
  Field values(g.vertex_count());
  for (int x = 0; x < g.vertex_count(); ++x) {
    auto c = lat.coords_of(x);
    for (int& ci : c)
      ci %= T;
    values[x] = spec.tile[tile_index.index_of(c)];
  }
  return values;
}

inline double periodicity_residual(const GraphTopology& g, const Field& v, int T)
{
  const auto& lat = *g.lattice();
  const bool torus = g.kind() == GraphKind::lattice_torus;
  double worst = 0.0;
  for (int x = 0; x < g.vertex_count(); ++x) {
    const auto c = lat.coords_of(x);
    for (int axis = 0; axis < lat.dimension(); ++axis) {
      auto t = c;
      t[axis] += T;
      const int side = lat.sides()[axis];
      if (torus)
        t[axis] %= side;
      else if (t[axis] >= side)
        continue;
      worst = std::max(worst, std::abs(v[lat.index_of(t)] - v[x]));
    }
  }
  return worst;
}

/// Box faces on lattices; the BFS-farthest layer from vertex 0 otherwise.
inline std::vector<int> outer_shell(const GraphTopology& g)
{
  std::vector<int> shell;
  if (g.is_lattice()) {
    const auto& lat = *g.lattice();
    for (int x = 0; x < g.vertex_count(); ++x) {
      const auto c = lat.coords_of(x);
      for (int axis = 0; axis < lat.dimension(); ++axis)
        if (c[axis] == 0 || c[axis] == lat.sides()[axis] - 1) {
          shell.push_back(x);
          break;
        }
    }
  } else {
    const auto d = bfs_distance(g, 0);
    const int far = *std::max_element(d.begin(), d.end());
    for (int x = 0; x < g.vertex_count(); ++x)
      if (d[x] == far)
        shell.push_back(x);
  }
  return shell;
}

inline void require_center(const GraphTopology& g, int center)
{
  if (center < 0 || center >= g.vertex_count())
    throw ValidationError("potential center " + std::to_string(center) + " out of range");
}

inline void require_admissible(double infimum, const std::string& what)
{
  if (!(infimum > -1.0))
    throw AdmissibilityError(what + ": inf V = " + std::to_string(infimum) + " is not > -1",
                             infimum);
}

}  // namespace detail

inline Potential make_potential(const GraphTopology& g, const PotentialSpec& spec)
{
  Potential pot;
  std::visit(
      [&](const auto& s) {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, PeriodicSpec>) {
          pot.values_ = detail::tile_periodic(g, s);
          pot.class_ = PotentialClass::periodic;
          pot.period_ = s.period;
          pot.facts_.periodicity_residual = detail::periodicity_residual(g, pot.values_, s.period);
        } else if constexpr (std::is_same_v<S, CoerciveSpec>) {
          detail::require_center(g, s.center);
          if (!(s.exponent > 0.0) || !(s.scale > 0.0))
            throw ValidationError("coercive potential needs exponent > 0 and scale > 0");
          const auto d = bfs_distance(g, s.center);
          pot.values_.resize(g.vertex_count());
          for (int x = 0; x < g.vertex_count(); ++x)
            pot.values_[x] = s.scale * std::pow(static_cast<double>(d[x]), s.exponent) + s.offset;
          pot.class_ = PotentialClass::coercive;
        } else if constexpr (std::is_same_v<S, WellSpec>) {
          detail::require_center(g, s.center);
          if (!(s.depth >= 0.0) || !(s.width > 0.0))
            throw ValidationError("well potential needs depth >= 0 and width > 0");
          const auto d = bfs_distance(g, s.center);
          pot.values_.resize(g.vertex_count());
          for (int x = 0; x < g.vertex_count(); ++x) {
            const double r = d[x] / s.width;
            pot.values_[x] = s.v_inf - s.depth * std::exp(-r * r);
          }
          pot.class_ = PotentialClass::well;
          pot.v_inf_ = s.v_inf;
          pot.facts_.well_bound_residual = std::max(0.0, (pot.values_.array() - s.v_inf).maxCoeff());
        } else if constexpr (std::is_same_v<S, AsymptoticallyPeriodicSpec>) {
          Field base = detail::tile_periodic(g, s.base);
          if (s.decay.size() != g.vertex_count())
            throw ValidationError("decay field has " + std::to_string(s.decay.size()) +
                                  " entries, graph has " + std::to_string(g.vertex_count()));
          if (!s.decay.allFinite() || s.decay.minCoeff() < 0.0)
            throw ValidationError("decay field must be finite and nonnegative");
          pot.values_ = base - s.decay;
          pot.class_ = PotentialClass::asymptotically_periodic;
          pot.period_ = s.base.period;
          pot.facts_.periodicity_residual = detail::periodicity_residual(g, base, s.base.period);
          pot.facts_.domination_residual =
              std::max(0.0, (pot.values_ - base).maxCoeff());
          double shell = 0.0;
          for (int x : detail::outer_shell(g))
            shell = std::max(shell, std::abs(pot.values_[x] - base[x]));
          pot.facts_.boundary_shell_deviation = shell;
          pot.dominating_ = std::move(base);
        } else {
          if (s.values.size() != g.vertex_count())
            throw ValidationError("explicit potential has " + std::to_string(s.values.size()) +
                                  " entries, graph has " + std::to_string(g.vertex_count()));
          pot.values_ = s.values;
          pot.class_ = PotentialClass::explicit_values;
        }
      },
      spec);

  if (!pot.values_.allFinite())
    throw ValidationError("potential has non-finite values");
  pot.infimum_ = pot.values_.minCoeff();
  detail::require_admissible(pot.infimum_, std::string(to_string(pot.class_)) + " potential");
  return pot;
}

/// V - log λ², the potential seen by v = u/λ.
inline Potential shift_potential(const Potential& pot, double lambda)
{
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw ValidationError("shift requires lambda > 0, got " + std::to_string(lambda));
  Potential out = Potential::explicit_unchecked(
      (pot.values().array() - std::log(lambda * lambda)).matrix());
  detail::require_admissible(out.infimum_, "shifted potential");
  return out;
}

inline CheckReport check_admissible(const Potential& pot)
{
  CheckReport r;
  r.name = "admissible";
  r.lhs = pot.infimum();
  r.rhs = -1.0;
  r.tolerance = 0.0;
  r.details["infimum"] = pot.infimum();
  bool ok = pot.infimum() > -1.0;
  const auto& f = pot.facts();
  if (f.periodicity_residual) {
    r.details["periodicity_residual"] = *f.periodicity_residual;
    ok = ok && *f.periodicity_residual == 0.0;
  }
  if (f.domination_residual) {
    r.details["domination_residual"] = *f.domination_residual;
    ok = ok && *f.domination_residual == 0.0;
  }
  if (f.boundary_shell_deviation)
    r.details["boundary_shell_deviation"] = *f.boundary_shell_deviation;
  if (f.well_bound_residual) {
    r.details["well_bound_residual"] = *f.well_bound_residual;
    ok = ok && *f.well_bound_residual == 0.0;
  }
  r.satisfied = ok;
  return r;
}

}  // namespace logschro
