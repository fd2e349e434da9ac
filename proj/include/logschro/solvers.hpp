#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include "logschro/error.hpp"
#include "logschro/functional.hpp"
#include "logschro/graph.hpp"
#include "logschro/potential.hpp"

namespace logschro {

enum class SignClass { positive, negative, sign_changing, zero };

inline const char* to_string(SignClass s)
{
  switch (s) {
    case SignClass::positive: return "positive";
    case SignClass::negative: return "negative";
    case SignClass::sign_changing: return "sign_changing";
    case SignClass::zero: return "zero";
  }
  return "unknown";
}

/// An exact zero next to nonzero entries counts as sign-changing: on a
/// connected graph a solution vanishing somewhere vanishes everywhere.
inline SignClass classify_sign(const Field& u)
{
  const bool any_pos = (u.array() > 0.0).any();
  const bool any_neg = (u.array() < 0.0).any();
  const bool any_zero = (u.array() == 0.0).any();
  if (!any_pos && !any_neg)
    return SignClass::zero;
  if (any_pos && !any_neg && !any_zero)
    return SignClass::positive;
  if (any_neg && !any_pos && !any_zero)
    return SignClass::negative;
  return SignClass::sign_changing;
}

namespace init {
struct RandomPositive {};
struct Random {};
struct DeltaAt { int vertex = 0; };
/// k-th eigenvector (ascending) of -Δ.
struct LaplacianEigenvector { int k = 0; };
/// k-th eigenvector (ascending) of the linear part -Δ + V.
struct LinearEigenvector { int k = 0; };
struct Explicit { Field values; };
}  // namespace init

using InitSpec = std::variant<init::RandomPositive, init::Random, init::DeltaAt,
                              init::LaplacianEigenvector, init::LinearEigenvector, init::Explicit>;

struct ArmijoParams
{
  double c1 = 1e-4;
  double backtrack = 0.5;
  double initial_step = 1.0;
};

struct NewtonParams
{
  double damping = 1.0;
  /// |u(x)| below this is replaced by the floor inside log u² in the Jacobian.
  double floor = 1e-8;
  int max_iterations = 200;
  /// converged when ‖residual‖_∞ <= tolerance · (1 + ‖u‖_∞)
  double tolerance = 1e-10;
};

struct SolverConfig
{
  int max_iterations = 100000;
  /// stop when ‖∇J‖₂ <= grad_tol · max(1, ‖u‖₂)
  double grad_tol = 1e-10;
  ArmijoParams armijo;
  NewtonParams newton;
  std::uint64_t seed = 0;
  InitSpec init = init::RandomPositive{};
  /// multi-start budget of find_multiple
  int max_starts = 64;
  /// random restarts per potential in compare_ground_levels
  int level_starts = 4;
};

inline void validate(const SolverConfig& c)
{
  if (c.max_iterations < 1)
    throw ValidationError("max_iterations must be positive");
  if (!(c.grad_tol > 0.0))
    throw ValidationError("grad_tol must be positive");
  if (!(c.armijo.c1 > 0.0 && c.armijo.c1 < 1.0))
    throw ValidationError("armijo c1 must lie in (0, 1)");
  if (!(c.armijo.backtrack > 0.0 && c.armijo.backtrack < 1.0))
    throw ValidationError("armijo backtrack factor must lie in (0, 1)");
  if (!(c.armijo.initial_step > 0.0))
    throw ValidationError("armijo initial step must be positive");
  if (!(c.newton.damping > 0.0 && c.newton.damping <= 1.0))
    throw ValidationError("newton damping must lie in (0, 1]");
  if (!(c.newton.floor > 0.0))
    throw ValidationError("newton floor must be positive");
  if (!(c.newton.tolerance > 0.0))
    throw ValidationError("newton tolerance must be positive");
  if (c.newton.max_iterations < 1)
    throw ValidationError("newton max_iterations must be positive");
  if (c.max_starts < 1 || c.level_starts < 0)
    throw ValidationError("start budgets must be positive");
}

struct TraceEntry
{
  int iteration = 0;
  double energy = 0.0;
  double gradient_norm = 0.0;
};

struct SolveResult
{
  Field u;
  double energy = 0.0;
  double residual_sup = 0.0;
  double residual_l2 = 0.0;
  double nehari_residual = 0.0;
  /// bound residual_sup is held to when converged
  double tolerance = 0.0;
  int iterations = 0;
  bool converged = false;
  SignClass sign_class = SignClass::zero;
  std::vector<TraceEntry> trace;
  std::string diagnostics;
};

struct LevelComparison
{
  double level_a = 0.0;
  double level_b = 0.0;
  double gap = 0.0;
  bool strict = false;
  SolveResult ground_a;
  SolveResult ground_b;
};

namespace detail {

inline Eigen::MatrixXd dense_linear_operator(const GraphTopology& g, const Potential* pot)
{
  const int n = g.vertex_count();
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (int x = 0; x < n; ++x) {
    a(x, x) = g.ambient_degree(x) + (pot ? (*pot)[x] : 0.0);
    for (int y : g.neighbors(x))
      a(x, y) -= 1.0;
  }
  return a;
}

/// Makes the largest-magnitude entry positive (first one on ties).
inline void canonical_sign(Field& v)
{
  Eigen::Index imax = 0;
  v.cwiseAbs().maxCoeff(&imax);
  if (v[imax] < 0.0)
    v = -v;
}

inline Eigen::MatrixXd ascending_eigenvectors(const GraphTopology& g, const Potential* pot)
{
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense_linear_operator(g, pot));
  if (es.info() != Eigen::Success)
    throw SolverError("eigen-decomposition of the linear operator failed");
  Eigen::MatrixXd v = es.eigenvectors();
  for (Eigen::Index k = 0; k < v.cols(); ++k) {
    Field col = v.col(k);
    canonical_sign(col);
    v.col(k) = col;
  }
  return v;
}

inline Field eigenvector(const GraphTopology& g, const Potential* pot, int k)
{
  if (k < 0 || k >= g.vertex_count())
    throw ValidationError("eigenvector index " + std::to_string(k) + " out of range");
  return ascending_eigenvectors(g, pot).col(k);
}

/// Positive diagonal preconditioner: the diagonal of the Hessian of J with
/// its indefinite parts dropped.  At p = 2 this is
/// ambient_degree + V + 1 + max(0, -log u²).
inline Field descent_preconditioner(const GraphTopology& g, const Potential& pot, const Field& u,
                                    double p)
{
  static constexpr double tiny = 1e-12;
  constexpr double floor = 1e-8;
  auto weight = [p](double t) {
    return p == 2.0 ? 1.0 : std::pow(std::max(std::abs(t), tiny), p - 2.0);
  };
  Field d(g.vertex_count());
  for (int x = 0; x < g.vertex_count(); ++x) {
    double stencil = 0.0;
    for (int y : g.neighbors(x))
      stencil += weight(u[y] - u[x]);
    stencil += g.exterior_count(x) * weight(u[x]);
    double onsite = (p - 1.0) * (pot[x] + 1.0);
    if (u[x] != 0.0)
      onsite += std::max(0.0, -(p - 1.0) * p * std::log(std::abs(u[x])));
    else
      onsite += -(p - 1.0) * p * std::log(tiny);
    d[x] = std::max(floor, (p - 1.0) * stencil + weight(u[x]) * onsite);
  }
  return d;
}

inline void fill_result(const GraphTopology& g, const Potential& pot, double p, SolveResult& r)
{
  r.energy = energy(g, pot, r.u, p);
  const Field res = residual(g, pot, r.u, p);
  r.residual_sup = res.cwiseAbs().maxCoeff();
  r.residual_l2 = res.norm();
  r.nehari_residual = nehari_residual(g, pot, r.u, p);
  r.sign_class = classify_sign(r.u);
}

}  // namespace detail

/// Starting field described by `config.init` (random draws use `config.seed`).
inline Field initial_field(const GraphTopology& g, const Potential& pot, const SolverConfig& config)
{
  const int n = g.vertex_count();
  return std::visit(
      [&](const auto& s) -> Field {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, init::RandomPositive>) {
          std::mt19937_64 rng(config.seed);
          std::uniform_real_distribution<double> dist(0.0, 1.0);
          Field u(n);
          for (int x = 0; x < n; ++x)
            u[x] = 1.0 - dist(rng);  // (0, 1]
          return u;
        } else if constexpr (std::is_same_v<S, init::Random>) {
          std::mt19937_64 rng(config.seed);
          std::uniform_real_distribution<double> dist(-1.0, 1.0);
          Field u(n);
          for (int x = 0; x < n; ++x)
            u[x] = dist(rng);
          return u;
        } else if constexpr (std::is_same_v<S, init::DeltaAt>) {
          if (s.vertex < 0 || s.vertex >= n)
            throw ValidationError("delta init vertex " + std::to_string(s.vertex) + " out of range");
          Field u = Field::Zero(n);
          u[s.vertex] = 1.0;
          return u;
        } else if constexpr (std::is_same_v<S, init::LaplacianEigenvector>) {
          return detail::eigenvector(g, nullptr, s.k);
        } else if constexpr (std::is_same_v<S, init::LinearEigenvector>) {
          return detail::eigenvector(g, &pot, s.k);
        } else {
          detail::require_field(g, s.values, "initial field");
          return s.values;
        }
      },
      config.init);
}

/// Ground-state search: projected, diagonally preconditioned gradient descent
/// on the Nehari manifold,
///   u <- nehari_project(u - η D^{-1} ∇J(u)),
/// with Armijo backtracking on J.  Since J(t(u)u) = max_s J(su), each
/// accepted step decreases the fibering maximum, whose infimum over u ≠ 0 is
/// the mountain-pass level.
inline SolveResult minimize_on_nehari(const GraphTopology& g, const Potential& pot, double p,
                                      const SolverConfig& config)
{
  detail::require_exponent(p, "minimize_on_nehari");
  validate(config);
  Field u0 = initial_field(g, pot, config);
  detail::require_problem(g, pot, u0, p, "minimize_on_nehari");
  if ((u0.array() == 0.0).all())
    throw PreconditionError("minimize_on_nehari: the initial field is zero");

  constexpr double eps = std::numeric_limits<double>::epsilon();
  SolveResult r;
  Field u = nehari_project(g, pot, u0, p).u;
  double j = energy(g, pot, u, p);
  Field grad = energy_gradient(g, pot, u, p);
  int it = 0;
  for (;; ++it) {
    const double gnorm = grad.norm();
    r.trace.push_back({it, j, gnorm});
    r.tolerance = config.grad_tol * std::max(1.0, u.norm());
    if (gnorm <= r.tolerance) {
      r.converged = true;
      break;
    }
    if (it >= config.max_iterations) {
      r.diagnostics = "iteration budget exhausted";
      break;
    }

    const Field dir = -grad.cwiseQuotient(detail::descent_preconditioner(g, pot, u, p));
    const double slope = grad.dot(dir);
    double step = config.armijo.initial_step;
    bool accepted = false;
    Field cand;
    double jc = 0.0;
    Field grad_c;
    while (step > 1e-20) {
      const Field trial = u + step * dir;
      if (!(trial.array() == 0.0).all()) {
        cand = nehari_project(g, pot, trial, p).u;
        jc = energy(g, pot, cand, p);
        if (std::isfinite(jc) && jc <= j + config.armijo.c1 * step * slope) {
          grad_c = energy_gradient(g, pot, cand, p);
          accepted = true;
          break;
        }
        // Predicted decrease below the rounding level of J: Armijo cannot
        // certify anything, so accept when the gradient still shrinks.  J
        // may then move by a few ulps in either direction.
        if (std::isfinite(jc) && std::abs(step * slope) <= 64.0 * eps * std::max(1.0, std::abs(j))) {
          grad_c = energy_gradient(g, pot, cand, p);
          if (grad_c.norm() < gnorm) {
            accepted = true;
            break;
          }
        }
      }
      step *= config.armijo.backtrack;
    }
    if (!accepted) {
      r.diagnostics = "line search stalled";
      break;
    }
    u = std::move(cand);
    j = jc;
    grad = std::move(grad_c);
  }
  r.iterations = it;
  r.u = std::move(u);
  detail::fill_result(g, pot, p, r);
  return r;
}

/// Damped Newton on the pointwise system residual(u) = 0 (p = 2), with
/// Jacobian -Δ + diag(V - log u² - 2).  Entries with |u| below the floor use
/// the floor inside the logarithm.
inline SolveResult newton_refine(const GraphTopology& g, const Potential& pot, double p,
                                 const Field& u0, const SolverConfig& config)
{
  if (p != 2.0)
    throw ValidationError("newton_refine is implemented for p = 2 only");
  validate(config);
  detail::require_problem(g, pot, u0, p, "newton_refine");

  const int n = g.vertex_count();
  const auto& nc = config.newton;
  SolveResult r;
  Field u = u0;
  Field res = residual(g, pot, u, p);
  int bad_steps = 0;
  int it = 0;

  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(static_cast<std::size_t>(n) + 2 * g.edge_count());
  Eigen::SparseMatrix<double> jac(n, n);
  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;

  for (;; ++it) {
    const double rnorm = res.norm();
    r.trace.push_back({it, energy(g, pot, u, p), rnorm});
    r.tolerance = nc.tolerance * (1.0 + u.cwiseAbs().maxCoeff());
    if (res.cwiseAbs().maxCoeff() <= r.tolerance) {
      r.converged = true;
      break;
    }
    if (it >= nc.max_iterations) {
      r.diagnostics = "newton iteration budget exhausted";
      break;
    }

    entries.clear();
    const double floor2 = nc.floor * nc.floor;
    for (int x = 0; x < n; ++x) {
      const double u2 = std::max(u[x] * u[x], floor2);
      entries.emplace_back(x, x, g.ambient_degree(x) + pot[x] - std::log(u2) - 2.0);
      for (int y : g.neighbors(x))
        entries.emplace_back(x, y, -1.0);
    }
    jac.setFromTriplets(entries.begin(), entries.end());
    lu.compute(jac);
    if (lu.info() != Eigen::Success) {
      r.diagnostics = "singular Jacobian at newton iteration " + std::to_string(it) + ": " +
                      lu.lastErrorMessage();
      break;
    }
    const Field du = lu.solve(-res);
    if (lu.info() != Eigen::Success || !du.allFinite()) {
      r.diagnostics = "singular Jacobian at newton iteration " + std::to_string(it);
      break;
    }

    double step = nc.damping;
    Field cand;
    Field res_c;
    bool decreased = false;
    for (int halving = 0; halving < 30; ++halving) {
      cand = u + step * du;
      res_c = residual(g, pot, cand, p);
      if (res_c.norm() < rnorm) {
        decreased = true;
        break;
      }
      step *= 0.5;
    }
    bad_steps = decreased ? 0 : bad_steps + 1;
    u = std::move(cand);
    res = std::move(res_c);
    if (bad_steps >= 5) {
      r.diagnostics = "residual grew over 5 consecutive damped steps";
      ++it;
      r.trace.push_back({it, energy(g, pot, u, p), res.norm()});
      break;
    }
  }
  r.iterations = it;
  r.u = std::move(u);
  detail::fill_result(g, pot, p, r);
  return r;
}

struct MultiSearch
{
  /// Distinct solutions, one per energy level, ascending in energy.
  std::vector<SolveResult> solutions;
  int attempts = 0;
  int converged = 0;
  /// converged starts equal (up to sign) to an accepted solution
  int duplicates = 0;
  /// converged starts distinct from, but level-degenerate with, an accepted one
  int degenerate = 0;
};

namespace detail {

inline bool same_up_to_sign(const Field& a, const Field& b)
{
  const double scale = 1e-4 * (a.norm() + b.norm());
  return std::min((a - b).norm(), (a + b).norm()) <= scale;
}

inline bool same_level(double a, double b)
{
  return std::abs(a - b) <= 1e-9 * std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

/// Flips u so that its first entry above the noise level is positive.
inline void canonical_first_sign(Field& u)
{
  const double noise = 1e-12 * u.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < u.size(); ++i)
    if (std::abs(u[i]) > noise) {
      if (u[i] < 0.0)
        u = -u;
      return;
    }
}

}  // namespace detail

/// Multi-start search for critical points (p = 2).  Starts, in order: the
/// Nehari descent from `config.init`; the low eigenvectors of -Δ + V; their
/// pairwise sums and differences; seeded random fields.  Each start is scaled
/// onto the Nehari manifold and refined by Newton.  Converged results are
/// filtered for ± duplicates and for repeated energy levels, and the K lowest
/// levels are returned.
inline MultiSearch find_multiple(const GraphTopology& g, const Potential& pot, double p,
                                 const SolverConfig& config, int count)
{
  if (p != 2.0)
    throw ValidationError("find_multiple is implemented for p = 2 only");
  if (count < 1)
    throw ValidationError("find_multiple needs K >= 1");
  validate(config);
  const int n = g.vertex_count();

  MultiSearch out;
  std::vector<SolveResult> accepted;
  auto consider = [&](SolveResult res) {
    if (!res.converged || !res.u.allFinite() || classify_sign(res.u) == SignClass::zero)
      return;
    ++out.converged;
    for (const auto& a : accepted)
      if (detail::same_up_to_sign(a.u, res.u)) {
        ++out.duplicates;
        return;
      }
    for (const auto& a : accepted)
      if (detail::same_level(a.energy, res.energy)) {
        ++out.degenerate;
        return;
      }
    accepted.push_back(std::move(res));
  };
  auto refine_from = [&](const Field& start) {
    ++out.attempts;
    if ((start.array() == 0.0).all())
      return;
    const Field scaled = nehari_project(g, pot, start, p).u;
    if (!scaled.allFinite())
      return;
    consider(newton_refine(g, pot, p, scaled, config));
  };

  {
    ++out.attempts;
    auto descent = minimize_on_nehari(g, pot, p, config);
    auto polished = newton_refine(g, pot, p, descent.u, config);
    polished.trace.insert(polished.trace.begin(), descent.trace.begin(), descent.trace.end());
    polished.iterations += descent.iterations;
    consider(std::move(polished));
  }

  const int modes = std::min(n, std::max(count + 3, 8));
  const Eigen::MatrixXd vecs = detail::ascending_eigenvectors(g, &pot);
  for (int k = 0; k < modes && out.attempts < config.max_starts; ++k)
    refine_from(vecs.col(k));
  for (int k = 1; k < modes; ++k)
    for (int j = 0; j < k; ++j)
      for (double sign : {1.0, -1.0}) {
        if (out.attempts >= config.max_starts)
          break;
        refine_from(vecs.col(k) + sign * vecs.col(j));
      }
  std::mt19937_64 rng(config.seed ^ 0x9e3779b97f4a7c15ULL);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  while (out.attempts < config.max_starts) {
    Field start(n);
    for (int x = 0; x < n; ++x)
      start[x] = dist(rng);
    refine_from(start);
  }

  for (auto& a : accepted)
    detail::canonical_first_sign(a.u);
  std::sort(accepted.begin(), accepted.end(), [](const SolveResult& a, const SolveResult& b) {
    if (a.energy != b.energy)
      return a.energy < b.energy;
    return a.u.norm() < b.u.norm();
  });
  if (static_cast<int>(accepted.size()) > count)
    accepted.resize(count);
  for (auto& a : accepted)
    a.sign_class = classify_sign(a.u);
  out.solutions = std::move(accepted);
  return out;
}

/// Best ground-state level over several descents: from the lowest
/// eigenvector of -Δ + V, from δ at argmin V, and from `level_starts`
/// seeded random positive fields.
inline SolveResult ground_state(const GraphTopology& g, const Potential& pot, double p,
                                const SolverConfig& config)
{
  std::vector<SolverConfig> starts;
  SolverConfig c = config;
  c.init = init::LinearEigenvector{0};
  starts.push_back(c);
  Eigen::Index argmin = 0;
  pot.values().minCoeff(&argmin);
  c.init = init::DeltaAt{static_cast<int>(argmin)};
  starts.push_back(c);
  for (int i = 0; i < config.level_starts; ++i) {
    c.init = init::RandomPositive{};
    c.seed = config.seed + static_cast<std::uint64_t>(i);
    starts.push_back(c);
  }

  std::optional<SolveResult> best;
  std::string failures;
  for (const auto& s : starts) {
    auto res = minimize_on_nehari(g, pot, p, s);
    if (!res.converged) {
      failures += (failures.empty() ? "" : "; ") + res.diagnostics + " after " +
                  std::to_string(res.iterations) + " iterations (final gradient norm " +
                  std::to_string(res.trace.empty() ? 0.0 : res.trace.back().gradient_norm) + ")";
      continue;
    }
    if (!best || res.energy < best->energy)
      best = std::move(res);
  }
  if (!best)
    throw SolverError("no ground-state descent converged: " + failures);
  return *best;
}

/// Ground levels of two potentials on the same graph; strict when
/// level_a < level_b - 1e-8.
inline LevelComparison compare_ground_levels(const GraphTopology& g, const Potential& pot_a,
                                             const Potential& pot_b, double p,
                                             const SolverConfig& config)
{
  LevelComparison out;
  out.ground_a = ground_state(g, pot_a, p, config);
  out.ground_b = ground_state(g, pot_b, p, config);
  out.level_a = out.ground_a.energy;
  out.level_b = out.ground_b.energy;
  out.gap = out.level_b - out.level_a;
  out.strict = out.level_a < out.level_b - 1e-8;
  return out;
}

}  // namespace logschro
