#pragma once

// Executes one RunConfig and writes its JSON record and CSV tables.

#include <algorithm>
#include <bit>
#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include "logschro/analysis.hpp"
#include "logschro/cli/config.hpp"
#include "logschro/functional.hpp"
#include "logschro/io/field_io.hpp"
#include "logschro/solvers.hpp"
#include "logschro/version.hpp"

namespace logschro::cli {

using json = nlohmann::json;

enum ExitCode : int {
  exit_ok = 0,
  exit_validation = 2,
  exit_not_converged = 3,
  exit_verification_failed = 4,
};

struct RunOutcome
{
  int exit_code = exit_ok;
  json record;
  std::vector<std::filesystem::path> written;
};

// ---------------------------------------------------------------------------
// Serialization.

inline json to_json(const Field& u) { return json(std::vector<double>(u.begin(), u.end())); }

inline json to_json(const CheckReport& r)
{
  json details = json::object();
  for (const auto& [k, v] : r.details)
    details[k] = v;
  return {{"name", r.name},         {"lhs", r.lhs},           {"rhs", r.rhs},
          {"satisfied", r.satisfied}, {"tolerance", r.tolerance}, {"details", details}};
}

inline json to_json(const SolveResult& r)
{
  std::vector<int> its;
  std::vector<double> energies, grads;
  for (const auto& t : r.trace) {
    its.push_back(t.iteration);
    energies.push_back(t.energy);
    grads.push_back(t.gradient_norm);
  }
  return {{"energy", r.energy},
          {"residual_sup", r.residual_sup},
          {"residual_l2", r.residual_l2},
          {"nehari_residual", r.nehari_residual},
          {"tolerance", r.tolerance},
          {"iterations", r.iterations},
          {"converged", r.converged},
          {"sign_class", to_string(r.sign_class)},
          {"diagnostics", r.diagnostics},
          {"u", to_json(r.u)},
          {"trace", {{"iteration", its}, {"energy", energies}, {"gradient_norm", grads}}}};
}

inline json to_json(const SeriesReport& r)
{
  json cps = json::array();
  for (const auto& c : r.checkpoints)
    cps.push_back({{"n", c.n}, {"mass_partial", c.mass_partial}, {"log_partial", c.log_partial}});
  return {{"p", r.p},
          {"n_max", r.n_max},
          {"mass_partial", r.mass_partial},
          {"log_partial", r.log_partial},
          {"checkpoints", cps}};
}

inline json to_json(const LevelComparison& c)
{
  return {{"level_a", c.level_a}, {"level_b", c.level_b},         {"gap", c.gap},
          {"strict", c.strict},   {"ground_a", to_json(c.ground_a)}, {"ground_b", to_json(c.ground_b)}};
}

namespace detail {

inline std::string utc_now()
{
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

inline json echo(const RunConfig& c)
{
  const auto& s = c.solver;
  return {{"source", c.source.string()},
          {"text", c.text},
          {"solver",
           {{"max_iterations", s.max_iterations},
            {"grad_tol", s.grad_tol},
            {"c1", s.armijo.c1},
            {"backtrack", s.armijo.backtrack},
            {"initial_step", s.armijo.initial_step},
            {"newton_damping", s.newton.damping},
            {"newton_floor", s.newton.floor},
            {"newton_max_iterations", s.newton.max_iterations},
            {"newton_tolerance", s.newton.tolerance},
            {"seed", s.seed},
            {"max_starts", s.max_starts},
            {"level_starts", s.level_starts},
            {"init", c.init.kind}}}};
}

/// Serializes u as the CSV field format, parses it back and recomputes the
/// residual from the reloaded values.
inline json reload_check(const GraphTopology& g, const Potential& pot, double p, const SolveResult& r)
{
  std::stringstream buffer;
  io::write_field(buffer, g, r.u);
  const Field back = io::read_field(buffer, g);
  const bool exact = back.size() == r.u.size() &&
                     std::equal(back.begin(), back.end(), r.u.begin(),
                                [](double a, double b) { return std::bit_cast<std::uint64_t>(a) ==
                                                                std::bit_cast<std::uint64_t>(b); });
  const double sup = residual(g, pot, back, p).cwiseAbs().maxCoeff();
  return {{"bitwise_equal", exact},
          {"residual_sup", sup},
          {"within_tolerance", !r.converged || sup <= r.tolerance}};
}

inline bool reload_ok(const json& j)
{
  return j["bitwise_equal"].get<bool>() && j["within_tolerance"].get<bool>();
}

/// Seeded sample field: entries uniform in (-1, 1), or (0, 1] if `positive`.
inline Field sample_field(std::mt19937_64& rng, int n, bool positive)
{
  std::uniform_real_distribution<double> dist(positive ? 0.0 : -1.0, 1.0);
  Field u(n);
  for (int x = 0; x < n; ++x) {
    do
      u[x] = positive ? 1.0 - dist(rng) : dist(rng);
    while (u[x] == 0.0);
  }
  return u;
}

class Writer
{
public:
  Writer(const OutputConfig& c, RunOutcome& out) : c_(c), out_(out) {}

  void csv(const std::string& suffix, const GraphTopology& g, const Field& u, const Potential& pot,
           double p)
  {
    if (!c_.csv)
      return;
    const auto path = c_.directory / (c_.name + suffix + ".csv");
    std::ofstream os(path);
    if (!os)
      throw ValidationError("cannot write " + path.string());
    io::write_solution_table(os, g, u, pot.values(), residual(g, pot, u, p));
    out_.written.push_back(path);
  }

private:
  const OutputConfig& c_;
  RunOutcome& out_;
};

inline json run_verify(const RunConfig& c, const GraphTopology& g, const Potential& pot, double p,
                       bool& all_ok)
{
  json results = json::array();
  for (const auto& name : c.action.checks) {
    if ((name == "sign_inequality" || name == "lambda_shift" || name == "norm_equivalence") &&
        p != 2.0)
      throw ValidationError("check '" + name + "' is defined for p = 2 only");
    std::mt19937_64 rng(c.solver.seed);
    json reports = json::array();
    int passed = 0;
    const int samples = name == "admissible" ? 1 : c.action.samples;
    for (int i = 0; i < samples; ++i) {
      CheckReport r;
      const int n = g.vertex_count();
      if (name == "admissible") {
        r = check_admissible(pot);
      } else if (name == "log_sobolev") {
        r = check_log_sobolev(sample_field(rng, n, false), p);
      } else if (name == "norm_equivalence") {
        r = check_norm_equivalence(g, sample_field(rng, n, false));
      } else if (name == "scaling_identity") {
        r = check_scaling_identity(g, pot, sample_field(rng, n, false), p);
      } else if (name == "max_at_one") {
        r = check_max_at_one(g, pot, nehari_project(g, pot, sample_field(rng, n, false), p).u, p);
      } else if (name == "sign_inequality") {
        r = check_sign_inequality(g, pot, sample_field(rng, n, false));
      } else if (name == "lambda_shift") {
        r = check_lambda_shift(g, pot, sample_field(rng, n, false), c.action.lambda, p);
      } else {
        r = grad_check(g, pot, sample_field(rng, n, true), p);
      }
      passed += r.satisfied;
      reports.push_back(to_json(r));
    }
    const bool ok = passed == samples;
    all_ok = all_ok && ok;
    spdlog::info("check {}: {}/{} satisfied", name, passed, samples);
    results.push_back(
        {{"check", name}, {"samples", samples}, {"passed", passed}, {"satisfied", ok}, {"reports", reports}});
  }
  return results;
}

}  // namespace detail

/// Runs the configured action.  The record is written to
/// <output.directory>/<output.name>.json when json output is enabled; CSV
/// tables go next to it.  Validation failures are reported through the exit
/// code and the record's "error" field rather than by throwing.
inline RunOutcome run(const RunConfig& c)
{
  RunOutcome out;
  json& rec = out.record;
  rec["artifact"] = {{"name", "logschro"}, {"version", version}};
  rec["config"] = detail::echo(c);
  rec["started"] = detail::utc_now();
  rec["action"] = to_string(c.action.kind);
  rec["status"] = "ok";
  detail::Writer writer(c.output, out);

  try {
    std::filesystem::create_directories(c.output.directory);
    json results;
    if (c.action.kind == ActionKind::appendix) {
      const auto series = appendix_series(c.action.series_p, c.action.n_max);
      results = to_json(series);
      json mass_inc = json::array(), log_inc = json::array();
      for (std::size_t i = 1; i < series.checkpoints.size(); ++i) {
        const auto& a = series.checkpoints[i - 1];
        const auto& b = series.checkpoints[i];
        mass_inc.push_back(b.mass_partial - a.mass_partial);
        log_inc.push_back(std::abs(b.log_partial) - std::abs(a.log_partial));
      }
      results["mass_increments"] = mass_inc;
      results["log_magnitude_increments"] = log_inc;
    } else {
      const GraphTopology g = build_graph(c.graph);
      const double p = c.graph.p;
      const Potential pot = build_potential(g, c.potential);
      SolverConfig solver = c.solver;
      solver.init = build_init(g, c.init);
      rec["problem"] = {{"vertices", g.vertex_count()},
                        {"edges", g.edge_count()},
                        {"p", p},
                        {"potential_class", to_string(pot.potential_class())},
                        {"potential_infimum", pot.infimum()}};

      switch (c.action.kind) {
        case ActionKind::solve: {
          SolveResult r = minimize_on_nehari(g, pot, p, solver);
          if (c.action.polish && r.converged) {
            if (p != 2.0)
              throw ValidationError("polish requires p = 2");
            SolveResult refined = newton_refine(g, pot, p, r.u, solver);
            if (refined.converged) {
              refined.trace.insert(refined.trace.begin(), r.trace.begin(), r.trace.end());
              refined.iterations += r.iterations;
              r = std::move(refined);
            }
          }
          results = to_json(r);
          results["reload_check"] = detail::reload_check(g, pot, p, r);
          writer.csv("_field", g, r.u, pot, p);
          spdlog::info("solve: energy {:.17g}, residual {:.3e}, converged {}", r.energy,
                       r.residual_sup, r.converged);
          if (!r.converged)
            out.exit_code = exit_not_converged;
          else if (!detail::reload_ok(results["reload_check"]))
            out.exit_code = exit_verification_failed;
          break;
        }
        case ActionKind::multi: {
          const auto m = find_multiple(g, pot, p, solver, c.action.count);
          json sols = json::array();
          bool reload = true;
          for (std::size_t k = 0; k < m.solutions.size(); ++k) {
            json s = to_json(m.solutions[k]);
            s["reload_check"] = detail::reload_check(g, pot, p, m.solutions[k]);
            reload = reload && detail::reload_ok(s["reload_check"]);
            sols.push_back(std::move(s));
            writer.csv("_solution_" + std::to_string(k), g, m.solutions[k].u, pot, p);
          }
          results = {{"requested", c.action.count},
                     {"found", m.solutions.size()},
                     {"attempts", m.attempts},
                     {"converged_starts", m.converged},
                     {"duplicates", m.duplicates},
                     {"degenerate", m.degenerate},
                     {"solutions", sols}};
          spdlog::info("multi: {} of {} requested levels after {} starts", m.solutions.size(),
                       c.action.count, m.attempts);
          if (m.solutions.empty())
            out.exit_code = exit_not_converged;
          else if (!reload)
            out.exit_code = exit_verification_failed;
          break;
        }
        case ActionKind::verify: {
          bool ok = true;
          results = {{"checks", detail::run_verify(c, g, pot, p, ok)}, {"satisfied", ok}};
          if (!ok)
            out.exit_code = exit_verification_failed;
          break;
        }
        case ActionKind::compare: {
          const Potential pot_b = build_potential(g, *c.potential_b);
          const auto cmp = compare_ground_levels(g, pot, pot_b, p, solver);
          results = to_json(cmp);
          writer.csv("_a", g, cmp.ground_a.u, pot, p);
          writer.csv("_b", g, cmp.ground_b.u, pot_b, p);
          spdlog::info("compare: levels {:.17g} vs {:.17g}, strict {}", cmp.level_a, cmp.level_b,
                       cmp.strict);
          break;
        }
        case ActionKind::appendix: break;
      }
    }
    rec["results"] = std::move(results);
  } catch (const SolverError& e) {
    out.exit_code = exit_not_converged;
    rec["status"] = "error";
    rec["error"] = e.what();
  } catch (const Error& e) {
    out.exit_code = exit_validation;
    rec["status"] = "error";
    rec["error"] = e.what();
  } catch (const std::filesystem::filesystem_error& e) {
    out.exit_code = exit_validation;
    rec["status"] = "error";
    rec["error"] = e.what();
  }
  if (out.exit_code == exit_not_converged && rec["status"] == "ok")
    rec["status"] = "not_converged";
  if (out.exit_code == exit_verification_failed)
    rec["status"] = "verification_failed";
  rec["exit_code"] = out.exit_code;
  rec["finished"] = detail::utc_now();

  if (c.output.json) {
    const auto path = c.output.directory / (c.output.name + ".json");
    std::ofstream os(path);
    if (os) {
      os << rec.dump(2) << '\n';
      out.written.push_back(path);
    } else {
      spdlog::error("cannot write {}", path.string());
      if (out.exit_code == exit_ok)
        out.exit_code = exit_validation;
    }
  }
  return out;
}

}  // namespace logschro::cli
