#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "wgqed/analytic.hpp"
#include "wgqed/continuum.hpp"
#include "wgqed/dynamics.hpp"
#include "wgqed/kernels.hpp"
#include "wgqed/montecarlo.hpp"
#include "wgqed/version.hpp"

namespace {

using nlohmann::json;

// Shortest round-trip decimal form so rerun parses bit-identical doubles and
// the CSV bytes are locale-proof.
std::string fmt(double x) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

std::vector<double> parse_phase_list(const std::string& csv) {
  std::vector<double> phases;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) throw std::invalid_argument("empty entry in phase list");
    std::size_t used = 0;
    phases.push_back(std::stod(item, &used));
    if (used != item.size()) throw std::invalid_argument("bad phase value: " + item);
  }
  if (phases.empty()) throw std::invalid_argument("phase list is empty");
  return phases;
}

std::string join_phases(const std::vector<double>& phases) {
  std::string s;
  for (std::size_t i = 0; i < phases.size(); ++i) {
    if (i) s += ',';
    s += fmt(phases[i]);
  }
  return s;
}

struct GridSpec {
  double tmax = 10.0;
  int points = 201;
  std::string grid = "linear";
  double tmin = 0.0;  // used by the log grid only; must be > 0 there
};

void add_grid_options(CLI::App* cmd, GridSpec& g) {
  cmd->add_option("--tmax", g.tmax, "largest time, in units of 1/gamma")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--points", g.points, "number of time samples")
      ->check(CLI::Range(2, 2000000));
  cmd->add_option("--grid", g.grid, "time grid shape")
      ->check(CLI::IsMember({"linear", "log"}));
  cmd->add_option("--tmin", g.tmin, "first sample (default 0; log grids need > 0)");
}

// Times in units of 1/gamma; divide by gamma for the physical grid.
std::vector<double> build_grid(const GridSpec& g) {
  std::vector<double> ts(g.points);
  if (g.grid == "linear") {
    if (!(g.tmax > g.tmin) || g.tmin < 0.0)
      throw std::invalid_argument("linear grid needs 0 <= tmin < tmax");
    for (int k = 0; k < g.points; ++k)
      ts[k] = g.tmin + (g.tmax - g.tmin) * static_cast<double>(k) / (g.points - 1);
  } else {
    if (!(g.tmin > 0.0)) throw std::invalid_argument("log grid needs --tmin > 0");
    if (!(g.tmax > g.tmin)) throw std::invalid_argument("log grid needs tmax > tmin");
    const double ratio = std::log(g.tmax / g.tmin);
    for (int k = 0; k < g.points; ++k)
      ts[k] = g.tmin * std::exp(ratio * static_cast<double>(k) / (g.points - 1));
  }
  return ts;
}

void record_grid(std::map<std::string, std::string>& opt, const GridSpec& g) {
  opt["tmax"] = fmt(g.tmax);
  opt["points"] = std::to_string(g.points);
  opt["grid"] = g.grid;
  if (g.grid == "log" || g.tmin != 0.0) opt["tmin"] = fmt(g.tmin);
}

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> cols;  // one vector per column
};

struct RunResult {
  std::string mode;
  std::map<std::string, std::string> options;  // long option name -> value
  Table table;
  json extra;  // merged into the JSON twin (e.g. per-realization curves)
};

void write_outputs(const RunResult& r, const std::string& out_path, bool twin,
                   double wall_seconds) {
  {
    std::ofstream f(out_path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open output file: " + out_path);
    f << "# wgqed " << wgqed::kVersion << "\n";
    f << "# mode: " << r.mode << "\n";
    for (const auto& [k, v] : r.options) f << "# " << k << ": " << v << "\n";
    f << "# columns: ";
    for (std::size_t i = 0; i < r.table.columns.size(); ++i)
      f << (i ? "," : "") << r.table.columns[i];
    f << "\n";
    f << "# time columns are dimensionless (gamma*t, kappa*t); populations are probabilities\n";
    const std::size_t rows = r.table.cols.empty() ? 0 : r.table.cols[0].size();
    for (std::size_t i = 0; i < rows; ++i) {
      for (std::size_t c = 0; c < r.table.cols.size(); ++c)
        f << (c ? "," : "") << fmt(r.table.cols[c][i]);
      f << "\n";
    }
    if (!f) throw std::runtime_error("failed writing " + out_path);
  }
  if (twin) {
    json j;
    j["artifact"] = "wgqed";
    j["version"] = wgqed::kVersion;
    j["mode"] = r.mode;
    j["options"] = r.options;
    j["columns"] = r.table.columns;
    json data = json::object();
    for (std::size_t c = 0; c < r.table.cols.size(); ++c)
      data[r.table.columns[c]] = r.table.cols[c];
    j["data"] = data;
    if (!r.extra.is_null())
      for (auto& [k, v] : r.extra.items()) j[k] = v;
    std::ofstream f(out_path + ".json", std::ios::binary);
    if (!f) throw std::runtime_error("cannot open JSON twin for " + out_path);
    f << j.dump(2) << "\n";
  }
  {
    json meta;
    meta["artifact"] = "wgqed";
    meta["version"] = wgqed::kVersion;
    meta["mode"] = r.mode;
    meta["options"] = r.options;
    meta["data_file"] = out_path;
    meta["wall_time_s"] = wall_seconds;
    std::ofstream f(out_path + ".meta.json", std::ios::binary);
    if (!f) throw std::runtime_error("cannot open meta sidecar for " + out_path);
    f << meta.dump(2) << "\n";
  }
}

wgqed::WaveguideKind parse_kind(const std::string& s) {
  if (s == "chiral") return wgqed::WaveguideKind::Chiral;
  if (s == "bidirectional") return wgqed::WaveguideKind::Bidirectional;
  throw std::invalid_argument("kind must be chiral or bidirectional");
}

std::vector<double> resolve_phases(const std::string& phases_csv, int n,
                                   double spacing) {
  if (!phases_csv.empty()) {
    auto phases = parse_phase_list(phases_csv);
    if (static_cast<int>(phases.size()) != n)
      throw std::invalid_argument("--phases length must equal --n");
    return phases;
  }
  std::vector<double> phases(n);
  for (int j = 0; j < n; ++j) phases[j] = j * spacing;
  return phases;
}

int run_cli(const std::vector<std::string>& args, int depth);

// ---- simulate ----------------------------------------------------------

struct SimulateArgs {
  std::string kind = "chiral";
  int n = 2;
  double gamma = 1.0;
  std::string phases;
  double spacing = 1.0;
  GridSpec grid;
  std::string out;
  bool twin = false;
};

RunResult do_simulate(const SimulateArgs& a) {
  wgqed::AtomEnsemble e;
  e.kind = parse_kind(a.kind);
  e.gamma = a.gamma;
  e.phases = resolve_phases(a.phases, a.n, a.spacing);

  const auto grid_units = build_grid(a.grid);
  std::vector<double> times(grid_units.size());
  for (std::size_t k = 0; k < times.size(); ++k) times[k] = grid_units[k] / a.gamma;

  const auto curve = wgqed::simulate_decay(e, times);
  const double kappa = a.n * a.gamma;

  RunResult r;
  r.mode = "simulate";
  r.options = {{"kind", a.kind},
               {"n", std::to_string(a.n)},
               {"gamma", fmt(a.gamma)},
               {"phases", join_phases(e.phases)}};
  record_grid(r.options, a.grid);
  r.table.columns = {"gamma_t", "kappa_t", "p_w"};
  if (a.n == 2) r.table.columns.push_back("p_d");
  r.table.columns.push_back("p_exc");
  std::vector<double> gts, kts;
  for (double t : times) {
    gts.push_back(a.gamma * t);
    kts.push_back(kappa * t);
  }
  r.table.cols = {gts, kts, curve.p_w};
  if (a.n == 2) r.table.cols.push_back(curve.p_d);
  r.table.cols.push_back(curve.p_exc);
  return r;
}

// ---- analytic ----------------------------------------------------------

struct AnalyticArgs {
  std::string formula = "laguerre";
  int n = 2;
  double gamma = 1.0;
  double kappa = 1.0;
  double separation = 1.0;
  GridSpec grid;
  std::string out;
  bool twin = false;
};

RunResult do_analytic(const AnalyticArgs& a) {
  const auto grid_units = build_grid(a.grid);
  RunResult r;
  r.mode = "analytic";
  r.options = {{"formula", a.formula}};
  record_grid(r.options, a.grid);

  std::vector<double> gts, kts, pw, pd;
  const bool two_atom = a.formula == "two-atom-chiral" || a.formula == "two-atom-bidirectional";

  if (a.formula == "laguerre") {
    r.options["n"] = std::to_string(a.n);
    r.options["gamma"] = fmt(a.gamma);
    for (double u : grid_units) {
      const double t = u / a.gamma;
      gts.push_back(a.gamma * t);
      kts.push_back(a.n * a.gamma * t);
      pw.push_back(wgqed::pw_chiral_exact(a.n, a.gamma, t));
    }
  } else if (a.formula == "asymptotic" || a.formula == "longtime" ||
             a.formula == "superradiant") {
    r.options["kappa"] = fmt(a.kappa);
    const wgqed::AsymptoticParams params{a.kappa};
    for (double t : grid_units) {
      gts.push_back(t);
      kts.push_back(a.kappa * t);
      if (a.formula == "asymptotic")
        pw.push_back(wgqed::pw_chiral_asymptotic(params, t));
      else if (a.formula == "longtime")
        pw.push_back(wgqed::pw_longtime(params, t));
      else
        pw.push_back(wgqed::pw_superradiant(params, t));
    }
  } else if (a.formula == "two-atom-chiral") {
    r.options["gamma"] = fmt(a.gamma);
    for (double u : grid_units) {
      const double t = u / a.gamma;
      gts.push_back(a.gamma * t);
      kts.push_back(2.0 * a.gamma * t);
      const auto pops = wgqed::two_atom_chiral_analytic(a.gamma, t);
      pw.push_back(pops.rho_ww);
      pd.push_back(pops.rho_dd);
    }
  } else if (a.formula == "two-atom-bidirectional") {
    r.options["gamma"] = fmt(a.gamma);
    r.options["separation"] = fmt(a.separation);
    for (double u : grid_units) {
      const double t = u / a.gamma;
      gts.push_back(a.gamma * t);
      kts.push_back(2.0 * a.gamma * t);
      const auto pops = wgqed::two_atom_bidirectional_analytic(a.separation, a.gamma, t);
      pw.push_back(pops.rho_ww);
      pd.push_back(pops.rho_dd);
    }
  } else {
    throw std::invalid_argument("unknown formula: " + a.formula);
  }

  r.table.columns = {"gamma_t", "kappa_t", "p_w"};
  r.table.cols = {gts, kts, pw};
  if (two_atom) {
    r.table.columns.push_back("p_d");
    r.table.cols.push_back(pd);
  }
  return r;
}

// ---- montecarlo --------------------------------------------------------

struct MonteCarloArgs {
  std::string kind = "bidirectional";
  int n = 2;
  double gamma = 1.0;
  std::string dist = "gaussian";
  double ksigma = 1000.0;
  double mean = 0.0;
  double lo = 0.0;
  double hi = 1.0;
  std::string phases;
  int m = 0;  // 0 = scenario default for n
  std::uint64_t seed = 12345;
  int threads = 0;
  bool store_realizations = false;
  GridSpec grid;
  std::string out;
  bool twin = false;
};

RunResult do_montecarlo(const MonteCarloArgs& a) {
  wgqed::PositionDistribution dist;
  if (a.dist == "gaussian")
    dist = wgqed::GaussianDist{a.mean, a.ksigma};
  else if (a.dist == "uniform")
    dist = wgqed::UniformDist{a.lo, a.hi};
  else if (a.dist == "fixed")
    dist = wgqed::FixedDist{parse_phase_list(a.phases)};
  else
    throw std::invalid_argument("dist must be gaussian, uniform or fixed");

  const int m = a.m > 0 ? a.m : wgqed::default_realizations(a.n);
  const auto grid_units = build_grid(a.grid);
  std::vector<double> times(grid_units.size());
  for (std::size_t k = 0; k < times.size(); ++k) times[k] = grid_units[k] / a.gamma;

  wgqed::MonteCarloOptions opts;
  opts.store_realizations = a.store_realizations;
  opts.threads = a.threads;
  const auto res = wgqed::average_decay(parse_kind(a.kind), dist, a.n, m, a.gamma,
                                        times, a.seed, opts);

  RunResult r;
  r.mode = "montecarlo";
  r.options = {{"kind", a.kind},       {"n", std::to_string(a.n)},
               {"gamma", fmt(a.gamma)}, {"dist", a.dist},
               {"m", std::to_string(m)}, {"seed", std::to_string(a.seed)}};
  if (a.dist == "gaussian") {
    r.options["ksigma"] = fmt(a.ksigma);
    r.options["mean"] = fmt(a.mean);
  } else if (a.dist == "uniform") {
    r.options["lo"] = fmt(a.lo);
    r.options["hi"] = fmt(a.hi);
  } else {
    r.options["phases"] = a.phases;
  }
  if (a.store_realizations) r.options["store-realizations"] = "true";
  record_grid(r.options, a.grid);

  const double kappa = a.n * a.gamma;
  std::vector<double> gts, kts;
  for (double t : times) {
    gts.push_back(a.gamma * t);
    kts.push_back(kappa * t);
  }
  r.table.columns = {"gamma_t", "kappa_t", "p_w", "p_w_stderr"};
  r.table.cols = {gts, kts, res.mean_curve.p_w, res.p_w_stderr};
  if (a.n == 2) {
    r.table.columns.push_back("p_d");
    r.table.cols.push_back(res.mean_curve.p_d);
  }
  r.table.columns.push_back("p_exc");
  r.table.cols.push_back(res.mean_curve.p_exc);

  if (a.store_realizations) {
    json reals = json::array();
    for (const auto& c : res.per_realization) {
      json one;
      one["p_w"] = c.p_w;
      one["p_exc"] = c.p_exc;
      if (a.n == 2) one["p_d"] = c.p_d;
      reals.push_back(std::move(one));
    }
    r.extra = json::object();
    r.extra["realizations"] = std::move(reals);
  }
  return r;
}

// ---- continuum ---------------------------------------------------------

struct ContinuumArgs {
  std::string profile = "uniform";
  std::string kind = "bidirectional";
  double ksigma = 1000.0;
  double total = 100.0;
  double gamma = 1.0;
  double dx = 0.1;
  double span = 5.0;  // gaussian grid half-width in units of ksigma
  GridSpec grid;
  std::string out;
  bool twin = false;
};

RunResult do_continuum(const ContinuumArgs& a) {
  if (!(a.dx > 0.0)) throw std::invalid_argument("--dx must be positive");
  wgqed::DensityProfile profile;
  profile.total = a.total;
  double x_lo, x_hi;
  if (a.profile == "uniform") {
    profile.shape = wgqed::UniformProfile{a.ksigma};
    x_lo = 0.0;
    x_hi = a.ksigma;
  } else if (a.profile == "gaussian") {
    profile.shape = wgqed::GaussianDensity{a.ksigma};
    x_hi = a.span * a.ksigma;
    x_lo = -x_hi;
  } else {
    throw std::invalid_argument("profile must be uniform or gaussian");
  }
  const auto z = static_cast<std::size_t>(std::ceil((x_hi - x_lo) / a.dx)) + 1;
  std::vector<double> x_grid(z);
  const double h = (x_hi - x_lo) / static_cast<double>(z - 1);
  for (std::size_t j = 0; j < z; ++j) x_grid[j] = x_lo + h * static_cast<double>(j);

  const auto grid_units = build_grid(a.grid);
  std::vector<double> t_grid(grid_units.size());
  for (std::size_t k = 0; k < t_grid.size(); ++k) t_grid[k] = grid_units[k] / a.gamma;
  if (t_grid.empty() || t_grid.front() != 0.0)
    throw std::invalid_argument("continuum runs need a linear grid starting at 0");

  const auto field = wgqed::solve_continuum(profile, a.gamma, x_grid, t_grid,
                                            parse_kind(a.kind));
  const auto curve = wgqed::pw_from_field(field, profile);
  const double kappa = a.gamma * a.total;

  RunResult r;
  r.mode = "continuum";
  r.options = {{"profile", a.profile}, {"kind", a.kind},
               {"ksigma", fmt(a.ksigma)}, {"total", fmt(a.total)},
               {"gamma", fmt(a.gamma)},   {"dx", fmt(a.dx)}};
  if (a.profile == "gaussian") r.options["span"] = fmt(a.span);
  record_grid(r.options, a.grid);

  std::vector<double> gts, kts;
  for (double t : curve.times) {
    gts.push_back(a.gamma * t);
    kts.push_back(kappa * t);
  }
  r.table.columns = {"gamma_t", "kappa_t", "p_w", "p_exc"};
  r.table.cols = {gts, kts, curve.p_w, curve.p_exc};
  return r;
}

// ---- compare -----------------------------------------------------------

struct CompareArgs {
  std::string kind = "chiral";
  int n = 2;
  double gamma = 1.0;
  std::string phases;
  double spacing = 1.0;
  GridSpec grid;
  std::string out;
  bool twin = false;
};

RunResult do_compare(const CompareArgs& a) {
  wgqed::AtomEnsemble e;
  e.kind = parse_kind(a.kind);
  e.gamma = a.gamma;
  e.phases = resolve_phases(a.phases, a.n, a.spacing);
  if (e.kind == wgqed::WaveguideKind::Bidirectional && a.n != 2)
    throw std::invalid_argument("bidirectional compare has a closed form only for n=2");

  const auto grid_units = build_grid(a.grid);
  std::vector<double> times(grid_units.size());
  for (std::size_t k = 0; k < times.size(); ++k) times[k] = grid_units[k] / a.gamma;

  const auto curve = wgqed::simulate_decay(e, times);
  std::vector<double> reference(times.size());
  if (e.kind == wgqed::WaveguideKind::Chiral) {
    for (std::size_t k = 0; k < times.size(); ++k)
      reference[k] = wgqed::pw_chiral_exact(a.n, a.gamma, times[k]);
  } else {
    const double d = std::abs(e.phases[1] - e.phases[0]);
    for (std::size_t k = 0; k < times.size(); ++k)
      reference[k] = wgqed::two_atom_bidirectional_analytic(d, a.gamma, times[k]).rho_ww;
  }

  RunResult r;
  r.mode = "compare";
  r.options = {{"kind", a.kind},
               {"n", std::to_string(a.n)},
               {"gamma", fmt(a.gamma)},
               {"phases", join_phases(e.phases)}};
  record_grid(r.options, a.grid);
  const double kappa = a.n * a.gamma;
  std::vector<double> gts, kts, err;
  for (std::size_t k = 0; k < times.size(); ++k) {
    gts.push_back(a.gamma * times[k]);
    kts.push_back(kappa * times[k]);
    err.push_back(std::abs(curve.p_w[k] - reference[k]));
  }
  r.table.columns = {"gamma_t", "kappa_t", "p_w_numeric", "p_w_analytic", "abs_err"};
  r.table.cols = {gts, kts, curve.p_w, reference, err};
  return r;
}

// ---- rerun -------------------------------------------------------------

int do_rerun(const std::string& meta_path, const std::string& out,
             bool twin, int depth) {
  if (depth > 1) throw std::invalid_argument("rerun cannot nest");
  std::ifstream f(meta_path);
  if (!f) throw std::invalid_argument("cannot read metadata file: " + meta_path);
  json meta;
  try {
    f >> meta;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("metadata is not valid JSON: ") + e.what());
  }
  if (!meta.contains("mode") || !meta.contains("options"))
    throw std::invalid_argument("metadata lacks mode/options");
  const std::string mode = meta["mode"].get<std::string>();
  if (mode != "simulate" && mode != "analytic" && mode != "montecarlo" &&
      mode != "continuum" && mode != "compare")
    throw std::invalid_argument("metadata has unknown mode: " + mode);

  std::vector<std::string> args{mode};
  for (const auto& [k, v] : meta["options"].items()) {
    const std::string val = v.get<std::string>();
    if (val == "true")
      args.push_back("--" + k);
    else
      args.push_back("--" + k + "=" + val);
  }
  args.push_back("--out=" + out);
  if (twin) args.push_back("--json");
  return run_cli(args, depth + 1);
}

int run_cli(const std::vector<std::string>& args, int depth) {
  CLI::App app{"collective decay of a single excitation in a 1D waveguide"};
  app.set_version_flag("--version", std::string(wgqed::kVersion));
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* c_sim = app.add_subcommand("simulate", "numerical decay of the bright state");
  c_sim->add_option("--kind", sim.kind)->check(CLI::IsMember({"chiral", "bidirectional"}));
  c_sim->add_option("--n", sim.n)->check(CLI::Range(1, 100000));
  c_sim->add_option("--gamma", sim.gamma)->check(CLI::PositiveNumber);
  c_sim->add_option("--phases", sim.phases, "comma-separated phases k*x_j");
  c_sim->add_option("--spacing", sim.spacing, "phase spacing when --phases is absent");
  add_grid_options(c_sim, sim.grid);
  c_sim->add_option("--out", sim.out)->required();
  c_sim->add_flag("--json", sim.twin, "also write a JSON twin");

  AnalyticArgs ana;
  auto* c_ana = app.add_subcommand("analytic", "closed-form decay curves");
  c_ana->add_option("--formula", ana.formula)
      ->check(CLI::IsMember({"laguerre", "asymptotic", "longtime", "superradiant",
                             "two-atom-chiral", "two-atom-bidirectional"}));
  c_ana->add_option("--n", ana.n)->check(CLI::Range(1, 1000001));
  c_ana->add_option("--gamma", ana.gamma)->check(CLI::PositiveNumber);
  c_ana->add_option("--kappa", ana.kappa)->check(CLI::PositiveNumber);
  c_ana->add_option("--separation", ana.separation, "two-atom phase separation");
  add_grid_options(c_ana, ana.grid);
  c_ana->add_option("--out", ana.out)->required();
  c_ana->add_flag("--json", ana.twin);

  MonteCarloArgs mc;
  auto* c_mc = app.add_subcommand("montecarlo", "disorder-averaged decay");
  c_mc->add_option("--kind", mc.kind)->check(CLI::IsMember({"chiral", "bidirectional"}));
  c_mc->add_option("--n", mc.n)->check(CLI::Range(1, 100000));
  c_mc->add_option("--gamma", mc.gamma)->check(CLI::PositiveNumber);
  c_mc->add_option("--dist", mc.dist)->check(CLI::IsMember({"gaussian", "uniform", "fixed"}));
  c_mc->add_option("--ksigma", mc.ksigma, "gaussian width k*sigma")->check(CLI::PositiveNumber);
  c_mc->add_option("--mean", mc.mean, "gaussian mean phase");
  c_mc->add_option("--lo", mc.lo, "uniform lower phase");
  c_mc->add_option("--hi", mc.hi, "uniform upper phase");
  c_mc->add_option("--phases", mc.phases, "fixed phases, comma separated");
  c_mc->add_option("--m", mc.m, "realizations (0 = scenario default for n)")
      ->check(CLI::Range(0, 10000000));
  c_mc->add_option("--seed", mc.seed);
  c_mc->add_option("--threads", mc.threads,
                   "worker threads (0 = WGQED_THREADS or hardware)")
      ->check(CLI::Range(0, 4096));
  c_mc->add_flag("--store-realizations", mc.store_realizations,
                 "keep per-realization curves in the JSON twin");
  add_grid_options(c_mc, mc.grid);
  c_mc->add_option("--out", mc.out)->required();
  c_mc->add_flag("--json", mc.twin);

  ContinuumArgs cont;
  auto* c_cont = app.add_subcommand("continuum", "large-N integral-equation solver");
  c_cont->add_option("--profile", cont.profile)->check(CLI::IsMember({"uniform", "gaussian"}));
  c_cont->add_option("--kind", cont.kind)->check(CLI::IsMember({"chiral", "bidirectional"}));
  c_cont->add_option("--ksigma", cont.ksigma)->check(CLI::PositiveNumber);
  c_cont->add_option("--total", cont.total, "atom number behind kappa = gamma*total")
      ->check(CLI::PositiveNumber);
  c_cont->add_option("--gamma", cont.gamma)->check(CLI::PositiveNumber);
  c_cont->add_option("--dx", cont.dx, "x grid spacing in phase units");
  c_cont->add_option("--span", cont.span, "gaussian grid half-width / ksigma")
      ->check(CLI::PositiveNumber);
  add_grid_options(c_cont, cont.grid);
  c_cont->add_option("--out", cont.out)->required();
  c_cont->add_flag("--json", cont.twin);

  CompareArgs cmp;
  auto* c_cmp = app.add_subcommand("compare", "numerics vs closed form with abs_err");
  c_cmp->add_option("--kind", cmp.kind)->check(CLI::IsMember({"chiral", "bidirectional"}));
  c_cmp->add_option("--n", cmp.n)->check(CLI::Range(1, 100000));
  c_cmp->add_option("--gamma", cmp.gamma)->check(CLI::PositiveNumber);
  c_cmp->add_option("--phases", cmp.phases);
  c_cmp->add_option("--spacing", cmp.spacing);
  add_grid_options(c_cmp, cmp.grid);
  c_cmp->add_option("--out", cmp.out)->required();
  c_cmp->add_flag("--json", cmp.twin);

  std::string rerun_meta, rerun_out;
  bool rerun_twin = false;
  auto* c_rerun = app.add_subcommand("rerun", "repeat a run from its metadata sidecar");
  c_rerun->add_option("meta", rerun_meta, "path to a .meta.json sidecar")->required();
  c_rerun->add_option("--out", rerun_out)->required();
  c_rerun->add_flag("--json", rerun_twin);

  // Config files carry options under a [<mode>] section. The option lives on
  // the root app (that is where file processing happens); fallthrough lets it
  // be written after the mode name. Command-line flags override file values.
  app.set_config("--config", "",
                 "INI file with options under a [<mode>] section");
  app.allow_config_extras(false);
  for (auto* sub : {c_sim, c_ana, c_mc, c_cont, c_cmp}) sub->fallthrough();

  std::vector<const char*> argv;
  argv.push_back("wgqed");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "invalid configuration: " << e.what() << "\n";
    return 1;
  }

  if (app.get_config_ptr()->count() > 0 && !app.get_subcommands().empty()) {
    // A file whose sections all belong to other modes would otherwise be
    // applied to unparsed subcommands and silently change nothing.
    const std::string mode = app.get_subcommands().front()->get_name();
    const auto items =
        app.get_config_formatter()->from_file(app.get_config_ptr()->as<std::string>());
    const bool touches_mode =
        std::any_of(items.begin(), items.end(), [&](const CLI::ConfigItem& it) {
          return !it.parents.empty() && it.parents.front() == mode;
        });
    if (!touches_mode)
      throw std::invalid_argument("config file has no [" + mode + "] entries");
  }

  if (c_rerun->parsed()) return do_rerun(rerun_meta, rerun_out, rerun_twin, depth);

  const auto t0 = std::chrono::steady_clock::now();
  RunResult result;
  std::string out;
  bool twin = false;
  if (c_sim->parsed()) {
    result = do_simulate(sim);
    out = sim.out;
    twin = sim.twin;
  } else if (c_ana->parsed()) {
    result = do_analytic(ana);
    out = ana.out;
    twin = ana.twin;
  } else if (c_mc->parsed()) {
    if (mc.store_realizations && !mc.twin)
      throw std::invalid_argument("--store-realizations needs --json");
    result = do_montecarlo(mc);
    out = mc.out;
    twin = mc.twin;
  } else if (c_cont->parsed()) {
    result = do_continuum(cont);
    out = cont.out;
    twin = cont.twin;
  } else {
    result = do_compare(cmp);
    out = cmp.out;
    twin = cmp.twin;
  }
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  write_outputs(result, out, twin, wall);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    return run_cli(args, 0);
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid configuration: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 2;
  }
}
