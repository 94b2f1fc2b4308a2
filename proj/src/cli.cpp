#include "heatnorm/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>

#include "heatnorm/heatnorm.hpp"
#include "heatnorm/report_io.hpp"

namespace heatnorm::cli
{

namespace
{

using io::Json;

struct UsageError : std::runtime_error
{
  using std::runtime_error::runtime_error;
};

enum class Format
{
  csv,
  json
};

// Result of one subcommand: a table plus any assertion failures found while building it.
struct Outcome
{
  io::Table table;
  bool single = false;
  std::vector<std::string> violations;
  Json parameters = Json::object();
};

struct GlobalOptions
{
  std::optional<std::string> format;
  std::string out_path;
  std::optional<double> tol;
};

// Parses "min:max:points" into a log-spaced grid.
std::vector<TimePoint<double>> parse_t_grid(const std::string& spec)
{
  double lo = 0, hi = 0;
  int points = 0;
  char c1 = 0, c2 = 0;
  std::istringstream in(spec);
  if (!(in >> lo >> c1 >> hi >> c2 >> points) || c1 != ':' || c2 != ':' || !in.eof())
    throw UsageError("--t-grid expects MIN:MAX:POINTS, got '" + spec + "'");
  return log_grid(lo, hi, points);
}

std::string describe_t(double t)
{
  return "t=" + io::format_number(t);
}

Outcome run_sweep(double t_min, double t_max, int points, double tol)
{
  Outcome o{io::Table({}), false, {}, {}};
  o.parameters = {{"t_min", t_min}, {"t_max", t_max}, {"points", points}, {"tol", tol}};
  const auto samples = sweep(log_grid(t_min, t_max, points));
  const double envelope_constant = 1.0 / std::sqrt(2.0 * std::numbers::pi);
  for (const auto& s : samples)
  {
    const double t = s.t.value();
    if (s.floor_lb && !(*s.floor_lb <= s.exact_m * (1 + tol)))
      o.violations.push_back(describe_t(t) + ": floor_lb exceeds exact_m");
    if (!(s.exact_m <= s.envelope_ub * (1 + tol)))
      o.violations.push_back(describe_t(t) + ": exact_m exceeds envelope_ub");
    if (!(s.exact_m <= s.dyadic_ub * (1 + tol)))
      o.violations.push_back(describe_t(t) + ": exact_m exceeds dyadic_ub");
    if (!(s.normalized_exact <= envelope_constant + tol))
      o.violations.push_back(describe_t(t) + ": normalized_exact exceeds (2 pi)^{-1/2}");
  }
  o.table = io::sweep_table(samples);
  return o;
}

Outcome run_bound(int n, double q, double s, bool critical, const std::vector<TimePoint<double>>& times,
                  double tol)
{
  EmbeddingParams<double> params{n, q, critical ? double(n) / q : s};
  params.validate();
  QuadratureConfig cfg;
  cfg.rel_tol = tol;
  Outcome o{io::Table({"n", "q", "s", "t", "kernel_norm", "critical_log_bound"}), false, {}, {}};
  o.parameters = {{"n", n}, {"q", q}, {"s", params.s}, {"critical", critical}, {"tol", tol}};
  for (const auto& tp : times)
  {
    const double t = tp.value();
    const double kn = kernel_norm(params, t, cfg);
    const double cb = critical_log_bound(n, q, t);
    if (params.critical() && !(kn <= cb))
      o.violations.push_back(describe_t(t) + ": kernel_norm exceeds critical_log_bound");
    o.table.add_row({std::int64_t(n), q, params.s, t, kn, cb});
  }
  return o;
}

Outcome run_extremizer(double t, std::optional<double> lambda, bool optimize, double tol)
{
  detail::require_positive(t, "--t");
  const bool below = t < 1.0 / std::numbers::e;
  ExtremizerReport<double> report = [&] {
    if (optimize)
      return optimize_lambda(t);
    if (lambda)
      return extremizer_report(t, *lambda);
    if (!below)
      throw UsageError("--lambda is required for t >= 1/e (the default choice needs t < 1/e)");
    return extremizer_report(t, paper_lambda(t));
  }();

  Outcome o{io::extremizer_table({report}), true, {}, {}};
  o.parameters = {{"t", t}, {"optimize", optimize}, {"tol", tol}};
  o.parameters["lambda"] = lambda ? Json(*lambda) : Json(nullptr);
  const double m = exact_m(t);
  if (!(report.ratio <= m + tol))
    o.violations.push_back(describe_t(t) + ": extremizer ratio exceeds exact_m");
  const bool paper_choice = !optimize && !lambda;
  if ((paper_choice || optimize) && report.paper_floor && !(report.ratio >= *report.paper_floor))
    o.violations.push_back(describe_t(t) + ": extremizer ratio below the floor");
  return o;
}

struct GridArgs
{
  int points = 1024;
  double length = 80.0;
  double t = 0.1;
  std::uint64_t seed = 0;
  int trials = 1;
  std::string profile = "saturating";
  std::optional<double> max_freq;
  double lambda = 8.0;
};

GridField<double> make_profile(const GridArgs& a, const SpectralGrid<double>& grid, std::uint64_t seed)
{
  if (a.profile == "random")
    return random_band_limited(seed, grid, a.max_freq.value_or(grid.nyquist() / 4));
  if (a.profile == "gaussian")
    return gaussian_field(grid);
  if (a.profile == "saturating")
    return saturating_field(grid, a.t);
  if (a.profile == "annular")
    return annular_field(grid, a.lambda);
  throw UsageError("unknown profile '" + a.profile + "'");
}

Json grid_parameters(const GridArgs& a)
{
  Json p = {{"n", a.points}, {"L", a.length}, {"t", a.t},          {"seed", a.seed},
            {"trials", a.trials}, {"profile", a.profile}, {"lambda", a.lambda}};
  p["max_freq"] = a.max_freq ? Json(*a.max_freq) : Json(nullptr);
  return p;
}

Outcome run_grid_verify(const GridArgs& a, double tol)
{
  const SpectralGrid<double> grid(a.points, a.length);
  Outcome o{io::Table({"profile", "trials", "ratio", "exact_m", "margin", "plancherel_err",
                       "semigroup_err"}),
            true, {}, grid_parameters(a)};
  o.parameters["tol"] = tol;
  const int trials = a.profile == "random" ? a.trials : 1;
  double worst_ratio = 0, plancherel = 0, semigroup = 0;
  const double m = exact_m(a.t);
  for (int k = 0; k < trials; ++k)
  {
    const auto field = make_profile(a, grid, a.seed + std::uint64_t(k));
    const auto check = ratio_check(field, a.t, tol);
    worst_ratio = std::max(worst_ratio, check.ratio);
    plancherel = std::max(plancherel, plancherel_error(field));
    semigroup = std::max(semigroup, semigroup_error(field, 0.3 * a.t, 0.7 * a.t));
    if (!check.within_bound)
      o.violations.push_back("trial " + std::to_string(k) + " (seed " +
                             std::to_string(a.seed + std::uint64_t(k)) + ", " + describe_t(a.t) +
                             "): grid ratio " + io::format_number(check.ratio) +
                             " exceeds exact_m");
  }
  if (plancherel > 1e-12)
    o.violations.push_back("Plancherel error " + io::format_number(plancherel) + " above 1e-12");
  if (semigroup > 1e-12)
    o.violations.push_back("semigroup error " + io::format_number(semigroup) + " above 1e-12");
  o.table.add_row({a.profile, std::int64_t(trials), worst_ratio, m, m - worst_ratio, plancherel, semigroup});
  return o;
}

Outcome run_bg(const GridArgs& a)
{
  const SpectralGrid<double> grid(a.points, a.length);
  const int trials = a.profile == "random" ? a.trials : 1;
  std::vector<BGReport<double>> reports;
  Outcome o{io::Table({}), false, {}, grid_parameters(a)};
  for (int k = 0; k < trials; ++k)
  {
    const auto report = bg_verify(make_profile(a, grid, a.seed + std::uint64_t(k)));
    if (!report.holds())
      o.violations.push_back("trial " + std::to_string(k) + " (seed " +
                             std::to_string(a.seed + std::uint64_t(k)) +
                             "): sup exceeds the Brezis-Gallouet chain");
    reports.push_back(report);
  }
  o.table = io::bg_table(reports);
  return o;
}

Outcome run_e1(double x)
{
  detail::require_positive(x, "--x");
  Outcome o{io::Table({"x", "e1"}), true, {}, {{"x", x}}};
  o.table.add_row({x, exp_integral_e1(x)});
  return o;
}

void emit(const Outcome& o, Format format, const io::RunManifest& manifest, const std::string& out_path,
          std::ostream& out, std::ostream& err)
{
  std::ofstream file;
  if (!out_path.empty())
  {
    file.open(out_path);
    if (!file)
      throw UsageError("cannot open --out path '" + out_path + "'");
  }
  std::ostream& dest = out_path.empty() ? out : file;

  if (format == Format::csv)
  {
    manifest.write_csv_comments(dest);
    o.table.write_csv(dest);
    return;
  }
  dest << o.table.to_json(o.single).dump(2) << '\n';
  if (out_path.empty())
  {
    err << "# manifest " << manifest.to_json().dump() << '\n';
  }
  else
  {
    std::ofstream sidecar(out_path + ".manifest.json");
    sidecar << manifest.to_json().dump(2) << '\n';
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
  CLI::App app{"Heat-semigroup H^1 -> L^inf norm curve, its explicit bounds, and grid checks",
               "heatnorm"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions global;
  app.add_option("--format", global.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--out", global.out_path, "Write results to PATH instead of standard output");
  app.add_option("--tol", global.tol, "Relative tolerance (assertion slack or quadrature target)")
      ->check(CLI::PositiveNumber);

  double t_min = 1e-9, t_max = 1e4;
  int points = 400;
  auto* sweep_cmd = app.add_subcommand("sweep", "Tabulate M(t) and its bounds on a log grid");
  sweep_cmd->add_option("--t-min", t_min, "Smallest time")->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--t-max", t_max, "Largest time")->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--points", points, "Number of log-spaced times")->check(CLI::PositiveNumber);

  int dim = 2;
  double q = 2.0, s = 1.0;
  bool critical = false;
  std::optional<double> bound_t;
  std::string t_grid;
  auto* bound_cmd = app.add_subcommand("bound", "Kernel-norm coefficient on H^{s,q}(R^n)");
  bound_cmd->add_option("--n", dim, "Spatial dimension")->check(CLI::PositiveNumber);
  bound_cmd->add_option("--q", q, "Integrability index in [1, 2]")->check(CLI::Range(1.0, 2.0));
  auto* s_opt = bound_cmd->add_option("--s", s, "Regularity index");
  bound_cmd->add_flag("--critical", critical, "Use s = n/q")->excludes(s_opt);
  auto* t_opt = bound_cmd->add_option("--t", bound_t, "Single time")->check(CLI::PositiveNumber);
  bound_cmd->add_option("--t-grid", t_grid, "Log grid MIN:MAX:POINTS")->excludes(t_opt);

  double ext_t = 0.0;
  std::optional<double> ext_lambda;
  bool optimize = false;
  auto* ext_cmd = app.add_subcommand("extremizer", "Annular lower-bound family at one time");
  ext_cmd->add_option("--t", ext_t, "Time")->required()->check(CLI::PositiveNumber);
  auto* lambda_opt = ext_cmd->add_option("--lambda", ext_lambda, "Outer radius (> 1)");
  ext_cmd->add_flag("--optimize", optimize, "Maximize the ratio over lambda")->excludes(lambda_opt);

  GridArgs grid_args;
  auto add_grid_options = [&](CLI::App* cmd, std::vector<std::string> profiles) {
    cmd->add_option("--n", grid_args.points, "Grid points per axis (power of two)");
    cmd->add_option("--L", grid_args.length, "Period of the box")->check(CLI::PositiveNumber);
    cmd->add_option("--t", grid_args.t, "Time")->check(CLI::PositiveNumber);
    cmd->add_option("--seed", grid_args.seed, "Seed of the first random field");
    cmd->add_option("--trials", grid_args.trials, "Number of random fields")->check(CLI::PositiveNumber);
    cmd->add_option("--profile", grid_args.profile, "Test field")->check(CLI::IsMember(profiles));
    cmd->add_option("--max-freq", grid_args.max_freq, "Spectral radius of random fields")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--lambda", grid_args.lambda, "Outer radius of the annular profile");
  };
  auto* grid_cmd = app.add_subcommand("grid-verify", "Discrete spectral check of the M(t) bound");
  add_grid_options(grid_cmd, {"random", "gaussian", "saturating"});
  auto* bg_cmd = app.add_subcommand("bg", "Brezis-Gallouet chain on grid fields");
  add_grid_options(bg_cmd, {"random", "gaussian", "saturating", "annular"});

  double e1_x = 0.0;
  auto* e1_cmd = app.add_subcommand("e1", "Exponential integral E1(x)");
  e1_cmd->add_option("--x", e1_x, "Argument")->required()->check(CLI::PositiveNumber);

  try
  {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  }
  catch (const CLI::CallForHelp&)
  {
    out << app.help();
    return exit_ok;
  }
  catch (const CLI::CallForAllHelp&)
  {
    out << app.help("", CLI::AppFormatMode::All);
    return exit_ok;
  }
  catch (const CLI::ParseError& e)
  {
    err << "error: " << e.what() << "\n\n" << app.help();
    return exit_usage;
  }

  const auto started = std::chrono::steady_clock::now();
  Format format = Format::json;
  Outcome outcome{io::Table({}), false, {}, {}};
  std::string name;
  try
  {
    if (sweep_cmd->parsed())
    {
      name = "sweep";
      format = Format::csv;
      if (!(t_max > t_min) && points > 1)
        throw UsageError("--t-max must exceed --t-min");
      outcome = run_sweep(t_min, t_max, points, global.tol.value_or(1e-12));
    }
    else if (bound_cmd->parsed())
    {
      name = "bound";
      format = Format::csv;
      std::vector<TimePoint<double>> times;
      if (!t_grid.empty())
        times = parse_t_grid(t_grid);
      else if (bound_t)
        times.emplace_back(*bound_t);
      else
        throw UsageError("bound needs --t or --t-grid");
      outcome = run_bound(dim, q, s, critical, times, global.tol.value_or(1e-11));
    }
    else if (ext_cmd->parsed())
    {
      name = "extremizer";
      outcome = run_extremizer(ext_t, ext_lambda, optimize, global.tol.value_or(1e-12));
    }
    else if (grid_cmd->parsed())
    {
      name = "grid-verify";
      outcome = run_grid_verify(grid_args, global.tol.value_or(1e-3));
    }
    else if (bg_cmd->parsed())
    {
      name = "bg";
      outcome = run_bg(grid_args);
    }
    else if (e1_cmd->parsed())
    {
      name = "e1";
      outcome = run_e1(e1_x);
    }
    if (global.format)
      format = *global.format == "csv" ? Format::csv : Format::json;

    io::RunManifest manifest;
    manifest.subcommand = name;
    manifest.parameters = outcome.parameters;
    manifest.parameters["format"] = format == Format::csv ? "csv" : "json";
    manifest.version = io::tool_version();
    manifest.duration_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    emit(outcome, format, manifest, global.out_path, out, err);
  }
  catch (const UsageError& e)
  {
    err << "error: " << e.what() << '\n';
    return exit_usage;
  }
  catch (const std::domain_error& e)
  {
    err << "error: " << e.what() << '\n';
    return exit_usage;
  }
  catch (const std::invalid_argument& e)
  {
    err << "error: " << e.what() << '\n';
    return exit_usage;
  }
  catch (const std::exception& e)
  {
    err << "error: " << e.what() << '\n';
    return exit_violation;
  }

  for (const auto& v : outcome.violations)
    err << "violation: " << v << '\n';
  return outcome.violations.empty() ? exit_ok : exit_violation;
}

}  // namespace heatnorm::cli
