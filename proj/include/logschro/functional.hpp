#pragma once

#include <cmath>
#include <string>

#include "logschro/error.hpp"
#include "logschro/graph.hpp"
#include "logschro/potential.hpp"

namespace logschro {

namespace detail {

inline void require_problem(const GraphTopology& g, const Potential& pot, const Field& u, double p,
                            const char* what)
{
  require_exponent(p, what);
  require_field(g, u, "u");
  if (pot.size() != g.vertex_count())
    throw ValidationError(std::string(what) + ": potential has " + std::to_string(pot.size()) +
                          " entries, graph has " + std::to_string(g.vertex_count()) + " vertices");
}

/// (1/p)|s|^p log|s|^p = |s|^p log|s|, with 0 log 0 = 0.
inline double log_integrand(double s, double p)
{
  return s == 0.0 ? 0.0 : abs_pow(s, p) * std::log(std::abs(s));
}

}  // namespace detail

/// J(u) = (1/p) Σ (|∇u|_p^p + (V+1)|u|^p) - (1/p) Σ |u|^p log|u|^p.
inline double energy(const GraphTopology& g, const Potential& pot, const Field& u, double p)
{
  detail::require_problem(g, pot, u, p, "energy");
  const Field grad = gradient_density(g, u, p);
  double quadratic = 0.0;
  double logarithmic = 0.0;
  for (int x = 0; x < g.vertex_count(); ++x) {
    quadratic += grad[x] + (pot[x] + 1.0) * detail::abs_pow(u[x], p);
    logarithmic += detail::log_integrand(u[x], p);
  }
  return quadratic / p - logarithmic;
}

/// Derivative of `energy`, assembled term by term: each undirected edge
/// pushes its contribution to both endpoints, then the on-site terms.
inline Field energy_gradient(const GraphTopology& g, const Potential& pot, const Field& u, double p)
{
  detail::require_problem(g, pot, u, p, "energy_gradient");
  Field out = Field::Zero(g.vertex_count());
  for (int x = 0; x < g.vertex_count(); ++x) {
    for (int y : g.neighbors(x)) {
      if (y < x)
        continue;
      const double w = detail::signed_pow(u[x] - u[y], p);
      out[x] += w;
      out[y] -= w;
    }
    out[x] += g.exterior_count(x) * detail::signed_pow(u[x], p);
  }
  for (int x = 0; x < g.vertex_count(); ++x) {
    if (u[x] == 0.0)
      continue;
    const double phi = detail::signed_pow(u[x], p);
    // d/ds [(1/p)|s|^p log|s|^p] = phi (log|s|^p + 1)
    out[x] += (pot[x] + 1.0) * phi - phi * (p * std::log(std::abs(u[x])) + 1.0);
  }
  return out;
}

/// Pointwise equation residual
///   -Δ_p u + V |u|^{p-2} u - |u|^{p-2} u log|u|^p
/// evaluated from the stencil.
inline Field residual(const GraphTopology& g, const Potential& pot, const Field& u, double p)
{
  detail::require_problem(g, pot, u, p, "residual");
  Field out = -apply_p_laplacian(g, u, p);
  for (int x = 0; x < g.vertex_count(); ++x) {
    if (u[x] == 0.0)
      continue;
    const double phi = detail::signed_pow(u[x], p);
    out[x] += pot[x] * phi - phi * (p * std::log(std::abs(u[x])));
  }
  return out;
}

/// ⟨J'(u), u⟩.
inline double nehari_residual(const GraphTopology& g, const Potential& pot, const Field& u, double p)
{
  return energy_gradient(g, pot, u, p).dot(u);
}

/// Scale t > 0 with t·u on the Nehari manifold:  log t = J(u)/‖u‖_p^p - 1/p,
/// from J(su) = s^p J(u) - s^p log s ‖u‖_p^p.
inline double nehari_scale(const GraphTopology& g, const Potential& pot, const Field& u, double p)
{
  detail::require_problem(g, pot, u, p, "nehari_scale");
  const double mass = detail::sum_abs_pow(u, p);
  if (!(mass > 0.0))
    throw PreconditionError("nehari_scale: the zero field has no Nehari projection");
  return std::exp(energy(g, pot, u, p) / mass - 1.0 / p);
}

struct NehariReport
{
  double t = 1.0;
  double residual_before = 0.0;
  double residual_after = 0.0;
  double energy_after = 0.0;
};

struct NehariProjection
{
  Field u;
  NehariReport report;
};

inline NehariProjection nehari_project(const GraphTopology& g, const Potential& pot, const Field& u,
                                       double p)
{
  NehariProjection out;
  out.report.t = nehari_scale(g, pot, u, p);
  out.report.residual_before = nehari_residual(g, pot, u, p);
  out.u = out.report.t * u;
  out.report.residual_after = nehari_residual(g, pot, out.u, p);
  out.report.energy_after = energy(g, pot, out.u, p);
  return out;
}

/// ⟨u, v⟩_X = Σ Γ(u,v) + Σ (V+1) u v  (Hilbert case p = 2).
inline double inner_product(const GraphTopology& g, const Potential& pot, const Field& u,
                            const Field& v)
{
  detail::require_problem(g, pot, u, 2.0, "inner_product");
  detail::require_field(g, v, "v");
  return gradient_form(g, u, v).sum() + ((pot.values().array() + 1.0) * u.array() * v.array()).sum();
}

// ---------------------------------------------------------------------------
// F1 / F2 splitting of the logarithmic term.

/// Largest δ keeping F1 convex on (0, δ]:  δ = exp(-(2p-1)/(p(p-1))),
/// i.e. e^{-3/2} at p = 2.
inline double max_split_threshold(double p = 2.0)
{
  detail::require_exponent(p, "max_split_threshold");
  return std::exp(-(2.0 * p - 1.0) / (p * (p - 1.0)));
}

inline double default_split_threshold(double p = 2.0) { return max_split_threshold(p); }

struct SplitValues
{
  double f1 = 0.0;
  double f2 = 0.0;
  double df1 = 0.0;
  double df2 = 0.0;
};

/// F1 equals -(1/p)|s|^p log|s|^p for 0 < |s| < δ and continues for |s| >= δ
/// as its second-order Taylor polynomial in |s| about δ (at p = 2 this is
/// -½s²(log δ² + 3) + 2δ|s| - ½δ²).  F2(s) = (1/p)|s|^p log|s|^p + F1(s).
inline SplitValues f_split(double s, double delta, double p = 2.0)
{
  detail::require_exponent(p, "f_split");
  const double delta_max = max_split_threshold(p);
  if (!(delta > 0.0) || delta > delta_max)
    throw ValidationError("split threshold delta must lie in (0, " + std::to_string(delta_max) +
                          "], got " + std::to_string(delta));
  if (!std::isfinite(s))
    throw ValidationError("f_split: non-finite argument");

  SplitValues out;
  if (s == 0.0)
    return out;
  const double a = std::abs(s);
  const double sign = s < 0.0 ? -1.0 : 1.0;
  const double lg = detail::log_integrand(a, p);
  const double dlg = detail::abs_pow(a, p - 1.0) * (p * std::log(a) + 1.0);

  if (a < delta) {
    out.f1 = -lg;
    out.df1 = -sign * dlg;
  } else {
    const double ld = std::log(delta);
    const double g0 = -detail::abs_pow(delta, p) * ld;
    const double g1 = -std::pow(delta, p - 1.0) * (p * ld + 1.0);
    const double g2 = -std::pow(delta, p - 2.0) * (p * (p - 1.0) * ld + 2.0 * p - 1.0);
    const double h = a - delta;
    out.f1 = g0 + g1 * h + 0.5 * g2 * h * h;
    out.df1 = sign * (g1 + g2 * h);
  }
  out.f2 = lg + out.f1;
  out.df2 = sign * dlg + out.df1;
  return out;
}

struct EnergySplit
{
  double phi = 0.0;
  double psi = 0.0;
  double total = 0.0;
  double delta = 0.0;
};

/// Φ(u) = (1/p) Σ (|∇u|_p^p + (V+1)|u|^p) - Σ F2(u),  Ψ(u) = Σ F1(u).
inline EnergySplit energy_split(const GraphTopology& g, const Potential& pot, const Field& u,
                                double delta, double p)
{
  detail::require_problem(g, pot, u, p, "energy_split");
  const Field grad = gradient_density(g, u, p);
  double quadratic = 0.0;
  double f1 = 0.0;
  double f2 = 0.0;
  for (int x = 0; x < g.vertex_count(); ++x) {
    quadratic += grad[x] + (pot[x] + 1.0) * detail::abs_pow(u[x], p);
    const auto s = f_split(u[x], delta, p);
    f1 += s.f1;
    f2 += s.f2;
  }
  EnergySplit out;
  out.delta = delta;
  out.phi = quadratic / p - f2;
  out.psi = f1;
  out.total = out.phi + out.psi;
  return out;
}

/// Measured constant C in |F2'(s)| <= C |s|^{q-1}: the maximum of the ratio
/// over `samples` equispaced nonzero points of [-s_max, s_max].
inline double f2_growth_constant(double q, double delta, double p = 2.0, int samples = 10000,
                                 double s_max = 50.0)
{
  if (!(q > 2.0))
    throw ValidationError("growth exponent must exceed 2");
  if (samples < 2)
    throw ValidationError("need at least two samples");
  double worst = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double s = -s_max + 2.0 * s_max * i / (samples - 1);
    if (s == 0.0)
      continue;
    const auto v = f_split(s, delta, p);
    worst = std::max(worst, std::abs(v.df2) / std::pow(std::abs(s), q - 1.0));
  }
  return worst;
}

}  // namespace logschro
