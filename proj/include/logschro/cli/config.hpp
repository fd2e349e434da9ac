#pragma once

// Run configuration: an INI file with sections [graph], [potential],
// [potential_b], [solver], [action] and [output].  The full key schema is
// documented in README.md.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "logschro/error.hpp"
#include "logschro/graph.hpp"
#include "logschro/io/field_io.hpp"
#include "logschro/potential.hpp"
#include "logschro/solvers.hpp"

namespace logschro::cli {

enum class ActionKind { solve, multi, verify, appendix, compare };

inline const char* to_string(ActionKind k)
{
  switch (k) {
    case ActionKind::solve: return "solve";
    case ActionKind::multi: return "multi";
    case ActionKind::verify: return "verify";
    case ActionKind::appendix: return "appendix";
    case ActionKind::compare: return "compare";
  }
  return "unknown";
}

inline const std::vector<std::string>& known_checks()
{
  static const std::vector<std::string> names{
      "admissible",     "log_sobolev", "norm_equivalence", "scaling_identity", "max_at_one",
      "sign_inequality", "lambda_shift", "grad_check"};
  return names;
}

struct GraphConfig
{
  bool general = false;
  LatticeSpec lattice;
  std::filesystem::path edge_file;
  std::optional<int> vertex_count;
  double p = 2.0;
};

/// Potential entry before it is bound to a graph.  Centers may be given as a
/// vertex index or as lattice coordinates; fields may come from files.
struct PotentialConfig
{
  std::string kind;
  int period = 1;
  std::vector<double> tile;
  std::vector<int> center{0};
  double exponent = 2.0, scale = 1.0, offset = 0.0;
  double v_inf = 0.0, depth = 0.0, width = 1.0;
  double value = 0.0;
  // decay of the asymptotically periodic class
  std::vector<double> decay_values;
  std::filesystem::path decay_file;
  double decay_amplitude = 0.0;
  std::vector<int> decay_center{0};
  double decay_width = 1.0;
  // explicit class
  std::vector<double> values;
  std::filesystem::path values_file;
};

struct InitConfig
{
  std::string kind = "random_positive";
  std::vector<int> vertex{0};
  int mode = 0;
  std::filesystem::path file;
};

struct ActionConfig
{
  ActionKind kind = ActionKind::solve;
  int count = 1;
  std::vector<std::string> checks;
  int samples = 20;
  double lambda = std::numbers::e;
  double series_p = 2.0;
  std::int64_t n_max = 1000000;
  bool polish = false;
};

struct OutputConfig
{
  std::filesystem::path directory = ".";
  bool json = true;
  bool csv = true;
  std::string name = "run";
};

struct RunConfig
{
  std::filesystem::path source;
  /// verbatim file contents, echoed into the run record
  std::string text;
  bool has_problem = false;
  GraphConfig graph;
  PotentialConfig potential;
  std::optional<PotentialConfig> potential_b;
  SolverConfig solver;
  InitConfig init;
  ActionConfig action;
  OutputConfig output;
};

namespace detail {

namespace pt = boost::property_tree;

/// Records the line of every key so errors can point into the file.
class LineIndex
{
public:
  explicit LineIndex(std::istream& is)
  {
    std::string line, section;
    int n = 0;
    while (std::getline(is, line)) {
      ++n;
      const auto t = io::detail::trim(line);
      if (t.empty() || t.front() == ';' || t.front() == '#')
        continue;
      if (t.front() == '[') {
        section = std::string(io::detail::trim(t.substr(1, t.find(']') - 1)));
        lines_[section] = n;
        continue;
      }
      const auto eq = t.find('=');
      if (eq != std::string_view::npos)
        lines_[section + "." + std::string(io::detail::trim(t.substr(0, eq)))] = n;
    }
  }

  std::string where(const std::string& key) const
  {
    const auto it = lines_.find(key);
    return it == lines_.end() ? "[" + key + "]" : "line " + std::to_string(it->second) + " (" + key + ")";
  }

private:
  std::map<std::string, int> lines_;
};

class Reader
{
public:
  Reader(const pt::ptree& tree, const LineIndex& lines, std::filesystem::path base)
      : tree_(tree), lines_(lines), base_(std::move(base))
  {}

  bool has_section(const std::string& s) const { return tree_.get_child_optional(s).has_value(); }

  bool has(const std::string& key) const { return tree_.get_optional<std::string>(key).has_value(); }

  [[noreturn]] void fail(const std::string& key, const std::string& msg) const
  {
    throw ValidationError(lines_.where(key) + ": " + msg);
  }

  std::string text(const std::string& key, const std::string& fallback) const
  {
    const auto v = tree_.get_optional<std::string>(key);
    return v ? std::string(io::detail::trim(*v)) : fallback;
  }

  std::string required(const std::string& key) const
  {
    if (!has(key))
      fail(key, "missing required key");
    return text(key, "");
  }

  template <class T>
  T number(const std::string& key, T fallback) const
  {
    if (!has(key))
      return fallback;
    return parse<T>(key, text(key, ""));
  }

  bool flag(const std::string& key, bool fallback) const
  {
    if (!has(key))
      return fallback;
    const auto v = text(key, "");
    if (v == "true" || v == "yes" || v == "1")
      return true;
    if (v == "false" || v == "no" || v == "0")
      return false;
    fail(key, "expected true or false, got '" + v + "'");
  }

  template <class T>
  std::vector<T> list(const std::string& key) const
  {
    std::vector<T> out;
    if (!has(key))
      return out;
    std::string v = text(key, "");
    std::replace(v.begin(), v.end(), ',', ' ');
    std::istringstream ss(v);
    std::string item;
    while (ss >> item)
      out.push_back(parse<T>(key, item));
    return out;
  }

  std::vector<std::string> words(const std::string& key) const
  {
    std::string v = text(key, "");
    std::replace(v.begin(), v.end(), ',', ' ');
    std::istringstream ss(v);
    std::vector<std::string> out;
    for (std::string w; ss >> w;)
      out.push_back(w);
    return out;
  }

  std::filesystem::path path(const std::string& key, bool must_exist = true) const
  {
    if (!has(key))
      return {};
    std::filesystem::path p = text(key, "");
    if (p.is_relative())
      p = base_ / p;
    if (must_exist && !std::filesystem::exists(p))
      fail(key, "file " + p.string() + " does not exist");
    return p;
  }

  void allow_only(const std::string& section, const std::set<std::string>& keys) const
  {
    const auto child = tree_.get_child_optional(section);
    if (!child)
      return;
    for (const auto& [k, v] : *child)
      if (!keys.count(k))
        fail(section + "." + k, "unknown key '" + k + "' in [" + section + "]");
  }

  std::string where(const std::string& key) const { return lines_.where(key); }

private:
  template <class T>
  T parse(const std::string& key, const std::string& v) const
  {
    std::istringstream ss(v);
    T out{};
    if (!(ss >> out) || !(ss >> std::ws).eof())
      fail(key, "cannot parse '" + v + "' as a number");
    if constexpr (std::is_floating_point_v<T>)
      if (!std::isfinite(out))
        fail(key, "value must be finite");
    return out;
  }

  const pt::ptree& tree_;
  const LineIndex& lines_;
  std::filesystem::path base_;
};

inline PotentialConfig read_potential(const Reader& r, const std::string& s)
{
  r.allow_only(s, {"class", "period", "tile", "center", "exponent", "scale", "offset", "v_inf",
                   "depth", "width", "value", "decay_values", "decay_file", "decay_amplitude",
                   "decay_center", "decay_width", "values", "values_file"});
  PotentialConfig c;
  c.kind = r.required(s + ".class");
  static const std::set<std::string> kinds{"periodic", "coercive", "well", "asymptotically_periodic",
                                           "explicit", "constant"};
  if (!kinds.count(c.kind))
    r.fail(s + ".class", "unknown potential class '" + c.kind + "'");
  c.period = r.number<int>(s + ".period", 1);
  c.tile = r.list<double>(s + ".tile");
  if (r.has(s + ".center"))
    c.center = r.list<int>(s + ".center");
  c.exponent = r.number<double>(s + ".exponent", 2.0);
  c.scale = r.number<double>(s + ".scale", 1.0);
  c.offset = r.number<double>(s + ".offset", 0.0);
  c.v_inf = r.number<double>(s + ".v_inf", 0.0);
  c.depth = r.number<double>(s + ".depth", 0.0);
  c.width = r.number<double>(s + ".width", 1.0);
  c.value = r.number<double>(s + ".value", 0.0);
  c.decay_values = r.list<double>(s + ".decay_values");
  c.decay_file = r.path(s + ".decay_file");
  c.decay_amplitude = r.number<double>(s + ".decay_amplitude", 0.0);
  if (r.has(s + ".decay_center"))
    c.decay_center = r.list<int>(s + ".decay_center");
  c.decay_width = r.number<double>(s + ".decay_width", 1.0);
  c.values = r.list<double>(s + ".values");
  c.values_file = r.path(s + ".values_file");

  if ((c.kind == "periodic" || c.kind == "asymptotically_periodic") && c.tile.empty())
    r.fail(s + ".tile", "periodic classes need a tile");
  if (c.kind == "constant" && !r.has(s + ".value"))
    r.fail(s + ".value", "constant potential needs a value");
  if (c.kind == "explicit" && c.values.empty() && c.values_file.empty())
    r.fail(s + ".values", "explicit potential needs values or values_file");
  if (c.kind == "asymptotically_periodic") {
    const int sources = !c.decay_values.empty() + !c.decay_file.empty() + r.has(s + ".decay_amplitude");
    if (sources != 1)
      r.fail(s + ".class",
             "asymptotically_periodic needs exactly one of decay_values, decay_file, decay_amplitude");
  }
  return c;
}

}  // namespace detail

/// Parses a run configuration.  Relative paths inside the file resolve
/// against the directory holding it.  Throws ValidationError naming the line
/// and key at fault.
inline RunConfig parse_config(std::istream& is, const std::filesystem::path& source = "config.ini")
{
  std::stringstream buffer;
  buffer << is.rdbuf();
  const std::string text = buffer.str();

  std::istringstream scan(text);
  const detail::LineIndex lines(scan);
  detail::pt::ptree tree;
  try {
    std::istringstream parse(text);
    detail::pt::read_ini(parse, tree);
  } catch (const detail::pt::ini_parser_error& e) {
    throw ValidationError(source.string() + ": line " + std::to_string(e.line()) + ": " + e.message());
  }

  const auto base = source.has_parent_path() ? source.parent_path() : std::filesystem::path(".");
  const detail::Reader r(tree, lines, base);
  static const std::set<std::string> sections{"graph",  "potential", "potential_b",
                                              "solver", "action",    "output"};
  for (const auto& [name, child] : tree) {
    if (!sections.count(name))
      r.fail(name, "unknown section [" + name + "]");
    if (child.empty() && !child.data().empty())
      r.fail(name, "key outside of any section");
  }

  RunConfig c;
  c.source = source;
  c.text = text;

  // [action]
  r.allow_only("action", {"kind", "count", "checks", "samples", "lambda", "series_p", "n_max", "polish"});
  const std::string kind = r.required("action.kind");
  if (kind == "solve")
    c.action.kind = ActionKind::solve;
  else if (kind == "multi")
    c.action.kind = ActionKind::multi;
  else if (kind == "verify")
    c.action.kind = ActionKind::verify;
  else if (kind == "appendix")
    c.action.kind = ActionKind::appendix;
  else if (kind == "compare")
    c.action.kind = ActionKind::compare;
  else
    r.fail("action.kind", "unknown action '" + kind + "'");
  c.action.count = r.number<int>("action.count", 1);
  if (c.action.count < 1)
    r.fail("action.count", "count must be at least 1");
  c.action.checks = r.words("action.checks");
  for (const auto& name : c.action.checks)
    if (std::find(known_checks().begin(), known_checks().end(), name) == known_checks().end())
      r.fail("action.checks", "unknown check '" + name + "'");
  if (c.action.kind == ActionKind::verify && c.action.checks.empty())
    r.fail("action.checks", "verify needs at least one check");
  c.action.samples = r.number<int>("action.samples", 20);
  if (c.action.samples < 1)
    r.fail("action.samples", "samples must be at least 1");
  c.action.lambda = r.number<double>("action.lambda", std::numbers::e);
  if (!(c.action.lambda > 0.0))
    r.fail("action.lambda", "lambda must be positive");
  c.action.series_p = r.number<double>("action.series_p", 2.0);
  if (!(c.action.series_p > 1.0))
    r.fail("action.series_p", "series_p must exceed 1");
  c.action.n_max = r.number<std::int64_t>("action.n_max", 1000000);
  if (c.action.n_max < 10)
    r.fail("action.n_max", "n_max must be at least 10");
  c.action.polish = r.flag("action.polish", false);

  // [graph] and [potential]; optional for the appendix action
  c.has_problem = r.has_section("graph") || c.action.kind != ActionKind::appendix;
  if (c.has_problem) {
    r.allow_only("graph", {"type", "dimension", "sides", "boundary", "edge_file", "vertex_count", "p"});
    const std::string type = r.text("graph.type", "lattice");
    if (type == "lattice") {
      c.graph.lattice.dimension = r.number<int>("graph.dimension", 1);
      c.graph.lattice.sides = r.list<int>("graph.sides");
      if (c.graph.lattice.sides.size() == 1 && c.graph.lattice.dimension > 1)
        c.graph.lattice.sides.assign(c.graph.lattice.dimension, c.graph.lattice.sides.front());
      if (static_cast<int>(c.graph.lattice.sides.size()) != c.graph.lattice.dimension)
        r.fail("graph.sides", "need one side length or one per axis");
      const std::string b = r.text("graph.boundary", "torus");
      if (b == "torus")
        c.graph.lattice.boundary = Boundary::torus;
      else if (b == "dirichlet")
        c.graph.lattice.boundary = Boundary::dirichlet;
      else
        r.fail("graph.boundary", "boundary must be torus or dirichlet");
    } else if (type == "general") {
      c.graph.general = true;
      c.graph.edge_file = r.path("graph.edge_file");
      if (c.graph.edge_file.empty())
        r.fail("graph.edge_file", "general graphs need an edge_file");
      if (r.has("graph.vertex_count"))
        c.graph.vertex_count = r.number<int>("graph.vertex_count", 0);
    } else {
      r.fail("graph.type", "graph type must be lattice or general");
    }
    c.graph.p = r.number<double>("graph.p", 2.0);
    if (!(c.graph.p > 1.0))
      r.fail("graph.p", "p must exceed 1");

    if (!r.has_section("potential"))
      r.fail("potential", "missing [potential] section");
    c.potential = detail::read_potential(r, "potential");
  }
  if (c.action.kind == ActionKind::compare) {
    if (!r.has_section("potential_b"))
      r.fail("potential_b", "compare needs a [potential_b] section");
    c.potential_b = detail::read_potential(r, "potential_b");
  } else if (r.has_section("potential_b")) {
    r.fail("potential_b", "[potential_b] is only used by the compare action");
  }

  // [solver]
  r.allow_only("solver", {"max_iterations", "grad_tol", "c1", "backtrack", "initial_step",
                          "newton_damping", "newton_floor", "newton_max_iterations",
                          "newton_tolerance", "seed", "max_starts", "level_starts", "init",
                          "init_vertex", "init_mode", "init_file"});
  auto& s = c.solver;
  s.max_iterations = r.number<int>("solver.max_iterations", s.max_iterations);
  s.grad_tol = r.number<double>("solver.grad_tol", s.grad_tol);
  s.armijo.c1 = r.number<double>("solver.c1", s.armijo.c1);
  s.armijo.backtrack = r.number<double>("solver.backtrack", s.armijo.backtrack);
  s.armijo.initial_step = r.number<double>("solver.initial_step", s.armijo.initial_step);
  s.newton.damping = r.number<double>("solver.newton_damping", s.newton.damping);
  s.newton.floor = r.number<double>("solver.newton_floor", s.newton.floor);
  s.newton.max_iterations = r.number<int>("solver.newton_max_iterations", s.newton.max_iterations);
  s.newton.tolerance = r.number<double>("solver.newton_tolerance", s.newton.tolerance);
  s.seed = r.number<std::uint64_t>("solver.seed", s.seed);
  s.max_starts = r.number<int>("solver.max_starts", s.max_starts);
  s.level_starts = r.number<int>("solver.level_starts", s.level_starts);
  try {
    validate(s);
  } catch (const ValidationError& e) {
    throw ValidationError(r.where("solver") + ": " + e.what());
  }
  c.init.kind = r.text("solver.init", "random_positive");
  static const std::set<std::string> inits{"random_positive",       "random",
                                           "delta_at",              "laplacian_eigenvector",
                                           "linear_eigenvector",    "explicit"};
  if (!inits.count(c.init.kind))
    r.fail("solver.init", "unknown init '" + c.init.kind + "'");
  if (r.has("solver.init_vertex"))
    c.init.vertex = r.list<int>("solver.init_vertex");
  c.init.mode = r.number<int>("solver.init_mode", 0);
  c.init.file = r.path("solver.init_file");
  if (c.init.kind == "explicit" && c.init.file.empty())
    r.fail("solver.init_file", "explicit init needs init_file");

  // [output]
  r.allow_only("output", {"directory", "formats", "name"});
  c.output.directory = r.path("output.directory", false);
  if (c.output.directory.empty())
    c.output.directory = base;
  if (r.has("output.formats")) {
    c.output.json = c.output.csv = false;
    for (const auto& f : r.words("output.formats")) {
      if (f == "json")
        c.output.json = true;
      else if (f == "csv")
        c.output.csv = true;
      else
        r.fail("output.formats", "unknown format '" + f + "' (json, csv)");
    }
  }
  c.output.name = r.text("output.name", source.stem().string());
  if (c.output.name.empty())
    r.fail("output.name", "name must not be empty");
  return c;
}

inline RunConfig load_config(const std::filesystem::path& path)
{
  std::ifstream is(path);
  if (!is)
    throw ValidationError("cannot open config file " + path.string());
  try {
    return parse_config(is, path);
  } catch (const ValidationError& e) {
    const std::string msg = e.what();
    if (msg.rfind(path.string(), 0) == 0)
      throw;
    throw ValidationError(path.string() + ": " + msg);
  }
}

// ---------------------------------------------------------------------------
// Binding the parsed configuration to concrete objects.

inline GraphTopology build_graph(const GraphConfig& c)
{
  if (!c.general)
    return build_lattice(c.lattice);
  int top = -1;
  const auto edges = io::read_edge_list(c.edge_file, &top);
  const int n = c.vertex_count.value_or(top + 1);
  return build_general_graph(edges, n);
}

namespace detail {

inline int resolve_vertex(const GraphTopology& g, const std::vector<int>& where, const char* what)
{
  if (where.size() == 1)
    return where.front();
  if (!g.is_lattice() || static_cast<int>(where.size()) != g.lattice()->dimension())
    throw ValidationError(std::string(what) + ": expected a vertex index or " +
                          (g.is_lattice() ? std::to_string(g.lattice()->dimension()) : "1") +
                          " coordinates");
  return g.lattice()->index_of(where);
}

inline Field gaussian_bump(const GraphTopology& g, int center, double amplitude, double width)
{
  if (center < 0 || center >= g.vertex_count())
    throw ValidationError("bump center " + std::to_string(center) + " out of range");
  if (!(width > 0.0) || !(amplitude >= 0.0))
    throw ValidationError("bump needs amplitude >= 0 and width > 0");
  const auto d = bfs_distance(g, center);
  Field out(g.vertex_count());
  for (int x = 0; x < g.vertex_count(); ++x) {
    const double r = d[x] / width;
    out[x] = amplitude * std::exp(-r * r);
  }
  return out;
}

inline Field field_from_list(const GraphTopology& g, const std::vector<double>& v, const char* what)
{
  if (static_cast<int>(v.size()) != g.vertex_count())
    throw ValidationError(std::string(what) + " has " + std::to_string(v.size()) +
                          " entries, graph has " + std::to_string(g.vertex_count()) + " vertices");
  return Eigen::Map<const Field>(v.data(), static_cast<Eigen::Index>(v.size()));
}

}  // namespace detail

inline Potential build_potential(const GraphTopology& g, const PotentialConfig& c)
{
  if (c.kind == "periodic")
    return make_potential(g, PeriodicSpec{c.period, c.tile});
  if (c.kind == "constant") {
    if (g.is_lattice()) {
      const int tile = 1;
      return make_potential(g, PeriodicSpec{tile, {c.value}});
    }
    return make_potential(g, ExplicitSpec{Field::Constant(g.vertex_count(), c.value)});
  }
  if (c.kind == "coercive")
    return make_potential(
        g, CoerciveSpec{detail::resolve_vertex(g, c.center, "center"), c.exponent, c.scale, c.offset});
  if (c.kind == "well")
    return make_potential(
        g, WellSpec{detail::resolve_vertex(g, c.center, "center"), c.v_inf, c.depth, c.width});
  if (c.kind == "asymptotically_periodic") {
    Field decay;
    if (!c.decay_values.empty())
      decay = detail::field_from_list(g, c.decay_values, "decay_values");
    else if (!c.decay_file.empty())
      decay = io::load_field(c.decay_file, g);
    else
      decay = detail::gaussian_bump(g, detail::resolve_vertex(g, c.decay_center, "decay_center"),
                                    c.decay_amplitude, c.decay_width);
    return make_potential(g, AsymptoticallyPeriodicSpec{PeriodicSpec{c.period, c.tile}, decay});
  }
  if (!c.values.empty())
    return make_potential(g, ExplicitSpec{detail::field_from_list(g, c.values, "values")});
  return make_potential(g, ExplicitSpec{io::load_field(c.values_file, g)});
}

inline InitSpec build_init(const GraphTopology& g, const InitConfig& c)
{
  if (c.kind == "random_positive")
    return init::RandomPositive{};
  if (c.kind == "random")
    return init::Random{};
  if (c.kind == "delta_at")
    return init::DeltaAt{detail::resolve_vertex(g, c.vertex, "init_vertex")};
  if (c.kind == "laplacian_eigenvector")
    return init::LaplacianEigenvector{c.mode};
  if (c.kind == "linear_eigenvector")
    return init::LinearEigenvector{c.mode};
  return init::Explicit{io::load_field(c.file, g)};
}

}  // namespace logschro::cli
