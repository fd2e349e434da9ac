#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "logschro/check_report.hpp"
#include "logschro/error.hpp"
#include "logschro/functional.hpp"
#include "logschro/graph.hpp"
#include "logschro/potential.hpp"

namespace logschro {

/// Σ|u|^p log|u|^p  <=  ‖u‖_p^p log ‖u‖_p^p   (u ≠ 0).
inline CheckReport check_log_sobolev(const Field& u, double p)
{
  detail::require_exponent(p, "check_log_sobolev");
  if (!u.allFinite())
    throw ValidationError("check_log_sobolev: non-finite field");
  const double mass = detail::sum_abs_pow(u, p);
  if (!(mass > 0.0))
    throw PreconditionError("check_log_sobolev: u must be nonzero");

  CheckReport r;
  r.name = "log_sobolev";
  double lhs = 0.0;
  for (Eigen::Index i = 0; i < u.size(); ++i)
    lhs += p * detail::log_integrand(u[i], p);
  r.lhs = lhs;
  r.rhs = mass * std::log(mass);
  // relative: near-equality cases at large mass differ only by rounding
  r.tolerance = 1e-12 * std::max(1.0, std::abs(r.lhs) + std::abs(r.rhs));
  r.satisfied = r.lhs <= r.rhs + r.tolerance;
  r.details["p"] = p;
  r.details["mass"] = mass;
  return r;
}

/// ‖u‖₂ <= ‖u‖ <= sqrt(2C + 1) ‖u‖₂ with ‖·‖ the H¹ norm and C = max_degree.
/// lhs is ‖u‖, rhs the upper bound; the lower bound sits in details.
inline CheckReport check_norm_equivalence(const GraphTopology& g, const Field& u)
{
  const double l2 = norm(g, u, Norm::lp(2.0));
  if (!(l2 > 0.0))
    throw PreconditionError("check_norm_equivalence: u must be nonzero");
  const double h1 = norm(g, u, Norm::sobolev(2.0));
  const double c = g.max_degree();

  CheckReport r;
  r.name = "norm_equivalence";
  r.lhs = h1;
  r.rhs = std::sqrt(2.0 * c + 1.0) * l2;
  r.tolerance = 1e-12 * l2;
  r.satisfied = l2 <= h1 + r.tolerance && h1 <= r.rhs + r.tolerance;
  r.details["l2"] = l2;
  r.details["degree_bound"] = c;
  r.details["lower_gap"] = h1 - l2;
  r.details["upper_gap"] = r.rhs - h1;
  return r;
}

/// Residual transport under u = λv (p = 2):
///   R_{V - log λ²}(u/λ) = R_V(u)/λ.
/// The shifted potential is used as plain algebra even if inadmissible; that
/// case is flagged with details["admissibility_bypassed"] = 1.
inline CheckReport check_lambda_shift(const GraphTopology& g, const Potential& pot, const Field& u,
                                      double lambda, double p = 2.0)
{
  if (p != 2.0)
    throw ValidationError("check_lambda_shift is stated for p = 2");
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw ValidationError("check_lambda_shift requires lambda > 0");

  CheckReport r;
  r.name = "lambda_shift";
  Potential shifted = Potential::explicit_unchecked(pot.values());
  try {
    shifted = shift_potential(pot, lambda);
    r.details["admissibility_bypassed"] = 0.0;
  } catch (const AdmissibilityError& e) {
    shifted = Potential::explicit_unchecked(
        (pot.values().array() - std::log(lambda * lambda)).matrix());
    r.details["admissibility_bypassed"] = 1.0;
    r.details["shifted_infimum"] = e.infimum();
  }
  const Field base = residual(g, pot, u, p);
  const Field transported = residual(g, shifted, u / lambda, p);
  r.lhs = (transported - base / lambda).cwiseAbs().maxCoeff();
  r.rhs = 1e-10 * (1.0 + base.cwiseAbs().maxCoeff());
  r.tolerance = r.rhs;
  r.satisfied = r.lhs <= r.rhs;
  r.details["lambda"] = lambda;
  r.details["transported_residual_sup"] = transported.cwiseAbs().maxCoeff();
  return r;
}

/// J(u⁺) + J(u⁻) <= J(u), with u⁺ = max{u,0} and u⁻ = min{u,0} (p = 2).
inline CheckReport check_sign_inequality(const GraphTopology& g, const Potential& pot, const Field& u)
{
  const Field plus = u.cwiseMax(0.0);
  const Field minus = u.cwiseMin(0.0);
  CheckReport r;
  r.name = "sign_inequality";
  r.rhs = energy(g, pot, u, 2.0);
  const double jp = energy(g, pot, plus, 2.0);
  const double jm = energy(g, pot, minus, 2.0);
  r.lhs = jp + jm;
  r.tolerance = 1e-10 * (1.0 + std::abs(r.rhs));
  r.satisfied = r.lhs <= r.rhs + r.tolerance;
  r.details["energy_plus"] = jp;
  r.details["energy_minus"] = jm;
  r.details["gap"] = r.rhs - r.lhs;
  return r;
}

inline constexpr std::array<double, 5> scaling_samples{0.25, 0.5, 1.0, 2.0, 4.0};

/// max over s of |J(su) - (s^p J(u) - s^p log s ‖u‖_p^p)| / (1 + |J(su)|).
inline CheckReport check_scaling_identity(const GraphTopology& g, const Potential& pot,
                                          const Field& u, double p)
{
  const double j = energy(g, pot, u, p);
  const double mass = detail::sum_abs_pow(u, p);
  if (!(mass > 0.0))
    throw PreconditionError("check_scaling_identity: u must be nonzero");

  CheckReport r;
  r.name = "scaling_identity";
  r.tolerance = 1e-9;
  double worst = 0.0;
  for (double s : scaling_samples) {
    const double direct = energy(g, pot, s * u, p);
    const double sp = std::pow(s, p);
    const double predicted = sp * j - sp * std::log(s) * mass;
    worst = std::max(worst, std::abs(direct - predicted) / (1.0 + std::abs(direct)));
  }
  r.lhs = worst;
  r.rhs = r.tolerance;
  r.satisfied = worst <= r.tolerance;
  r.details["p"] = p;
  return r;
}

/// On the Nehari manifold s ↦ J(su) peaks at s = 1: over 200 log-spaced
/// s in [0.1, 10] the argmax must be the grid point closest to 1, and both
/// endpoint values must lie below J(u).
inline CheckReport check_max_at_one(const GraphTopology& g, const Potential& pot, const Field& u,
                                    double p)
{
  const double mass = detail::sum_abs_pow(u, p);
  const double nr = nehari_residual(g, pot, u, p);
  if (!(mass > 0.0) || std::abs(nr) > 1e-8 * (1.0 + mass))
    throw PreconditionError("check_max_at_one: u is not on the Nehari manifold (residual " +
                            std::to_string(nr) + "); apply nehari_project first");

  constexpr int points = 200;
  int argmax = 0;
  int nearest = 0;
  double best = -std::numeric_limits<double>::infinity();
  std::vector<double> values(points);
  for (int i = 0; i < points; ++i) {
    const double s = std::pow(10.0, -1.0 + 2.0 * i / (points - 1));
    values[i] = energy(g, pot, s * u, p);
    if (values[i] > best) {
      best = values[i];
      argmax = i;
    }
    const double s_near = std::pow(10.0, -1.0 + 2.0 * nearest / (points - 1));
    if (std::abs(s - 1.0) < std::abs(s_near - 1.0))
      nearest = i;
  }
  const double j = energy(g, pot, u, p);

  CheckReport r;
  r.name = "max_at_one";
  r.lhs = std::pow(10.0, -1.0 + 2.0 * argmax / (points - 1));
  r.rhs = std::pow(10.0, -1.0 + 2.0 * nearest / (points - 1));
  r.tolerance = 0.0;
  r.satisfied = argmax == nearest && values.front() < j && values.back() < j;
  r.details["energy_at_one"] = j;
  r.details["energy_at_0.1"] = values.front();
  r.details["energy_at_10"] = values.back();
  return r;
}

/// Central-difference check of energy_gradient at h = 1e-6 (1 + ‖u‖_∞).
/// The error of component x is |fd_x - grad_x| / (1 + |grad_x|).
inline CheckReport grad_check(const GraphTopology& g, const Potential& pot, const Field& u, double p)
{
  detail::require_problem(g, pot, u, p, "grad_check");
  std::string zeros;
  for (int x = 0; x < g.vertex_count(); ++x)
    if (u[x] == 0.0)
      zeros += (zeros.empty() ? "" : ", ") + std::to_string(x);
  if (!zeros.empty())
    throw PreconditionError("grad_check: u vanishes at vertices " + zeros);

  const Field grad = energy_gradient(g, pot, u, p);
  const double h = 1e-6 * (1.0 + u.cwiseAbs().maxCoeff());
  double worst = 0.0;
  Field shifted = u;
  for (int x = 0; x < g.vertex_count(); ++x) {
    shifted[x] = u[x] + h;
    const double up = energy(g, pot, shifted, p);
    shifted[x] = u[x] - h;
    const double down = energy(g, pot, shifted, p);
    shifted[x] = u[x];
    const double fd = (up - down) / (2.0 * h);
    worst = std::max(worst, std::abs(fd - grad[x]) / (1.0 + std::abs(grad[x])));
  }

  CheckReport r;
  r.name = "grad_check";
  r.lhs = worst;
  r.rhs = 1e-6;
  r.tolerance = 1e-6;
  r.satisfied = worst < r.rhs;
  r.details["step"] = h;
  return r;
}

struct SeriesCheckpoint
{
  std::int64_t n = 0;
  double mass_partial = 0.0;
  double log_partial = 0.0;
};

/// Partial sums of the slowly decaying example u(ne) = n^{-1/p} (log n)^{-2/p}:
/// |u|^p = 1/(n (log n)²) and |u|^p log|u|^p = -(1/(n log n) + 2 log log n / (n (log n)²)),
/// summed from n = 3.
struct SeriesReport
{
  double p = 2.0;
  std::int64_t n_max = 0;
  double mass_partial = 0.0;
  double log_partial = 0.0;
  std::vector<SeriesCheckpoint> checkpoints;
};

inline SeriesReport appendix_series(double p, std::int64_t n_max)
{
  detail::require_exponent(p, "appendix_series");
  if (n_max < 10)
    throw ValidationError("appendix_series needs n_max >= 10");

  SeriesReport r;
  r.p = p;
  r.n_max = n_max;
  // Neumaier-compensated running sums.
  double mass = 0.0, mass_c = 0.0, logs = 0.0, logs_c = 0.0;
  auto add = [](double& sum, double& comp, double term) {
    const double t = sum + term;
    comp += std::abs(sum) >= std::abs(term) ? (sum - t) + term : (term - t) + sum;
    sum = t;
  };
  std::int64_t next_checkpoint = 10;
  for (std::int64_t n = 3; n <= n_max; ++n) {
    const double dn = static_cast<double>(n);
    const double ln = std::log(dn);
    add(mass, mass_c, 1.0 / (dn * ln * ln));
    add(logs, logs_c, -(1.0 / (dn * ln) + 2.0 * std::log(ln) / (dn * ln * ln)));
    if (n == next_checkpoint || n == n_max) {
      r.checkpoints.push_back({n, mass + mass_c, logs + logs_c});
      if (n == next_checkpoint)
        next_checkpoint *= 10;
    }
  }
  r.mass_partial = mass + mass_c;
  r.log_partial = logs + logs_c;
  return r;
}

}  // namespace logschro
