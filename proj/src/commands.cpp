#include "ltlab/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <filesystem>
#include <numbers>
#include <ostream>
#include <thread>

#include "ltlab/acceptance.hpp"
#include "ltlab/boxsim.hpp"
#include "ltlab/config.hpp"
#include "ltlab/errors.hpp"
#include "ltlab/matoracle.hpp"
#include "ltlab/physcore.hpp"
#include "ltlab/report.hpp"
#include "ltlab/response.hpp"
#include "ltlab/rumin.hpp"

namespace ltlab::cli {

namespace {

using physcore::PhysicsParams;

std::string join_path(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

// Tables and reports go to files under --out, or to the stream otherwise.
void emit(const GlobalOptions& g, const std::string& name, const std::string& content, std::ostream& out) {
  if (g.out_dir.empty()) out << content;
  else write_text(join_path(g.out_dir, name), content);
}

// Extra artefacts (density grids, plot data) are only written with --out.
void emit_file(const GlobalOptions& g, const std::string& name, const std::string& content) {
  if (!g.out_dir.empty()) write_text(join_path(g.out_dir, name), content);
}

ExperimentConfig require_config(const GlobalOptions& g) {
  if (!g.config) throw ConfigError("this command needs --config PATH");
  return load_config(*g.config);
}

// Runs fn(i) for i in [0, n) on up to `jobs` threads. Results keep input
// order; the first failure (by index) is rethrown by rethrow_first().
template <class R>
struct LevelResults {
  std::vector<std::optional<R>> values;
  std::vector<std::exception_ptr> errors;
  std::string status(std::size_t i) const {
    if (!errors[i]) return "ok";
    try {
      std::rethrow_exception(errors[i]);
    } catch (const std::exception& e) {
      return std::string("error: ") + e.what();
    }
  }
  void rethrow_first() const {
    for (const auto& e : errors)
      if (e) std::rethrow_exception(e);
  }
};

template <class R, class F>
LevelResults<R> parallel_levels(std::size_t n, int jobs, F fn) {
  LevelResults<R> r;
  r.values.resize(n);
  r.errors.resize(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        r.values[i] = fn(i);
      } catch (...) {
        r.errors[i] = std::current_exception();
      }
    }
  };
  const int threads = std::clamp(jobs, 1, static_cast<int>(std::max<std::size_t>(n, 1)));
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return r;
}

json config_echo(const ExperimentConfig& c, std::optional<double> L) {
  json echo = c.raw;
  if (L) echo["expanded_potential"] = potential_to_json(c.potential(*L));
  return echo;
}

std::string summary_csv(const json& summary) {
  CsvTable t({"key", "value"});
  for (const auto& [k, v] : summary.items()) {
    if (v.is_number()) t.add_row({k, v.get<double>()});
    else if (v.is_boolean()) t.add_row({k, std::string(v.get<bool>() ? "true" : "false")});
    else if (v.is_string()) t.add_row({k, v.get<std::string>()});
  }
  return t.str();
}

std::vector<double> default_levels(const ExperimentConfig& c, std::vector<double> fallback) {
  return c.levels.empty() ? fallback : c.levels;
}

}  // namespace

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> out;
  if (n <= 0) return out;
  if (n == 1) return {a};
  for (int i = 0; i < n; ++i) out.push_back(a + (b - a) * i / (n - 1));
  return out;
}

int guarded(const std::function<int()>& body, std::ostream& err) {
  try {
    return body();
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const nlohmann::json::exception& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const DegeneracyError& e) {
    err << "degenerate Fermi level: " << e.what() << "\n";
    return kDegeneracy;
  } catch (const CutoffError& e) {
    err << "cutoff error: " << e.what() << "\n";
    return kResourceError;
  } catch (const ResourceError& e) {
    err << "resource error: " << e.what() << "\n";
    return kResourceError;
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kResourceError;
  }
}

// ---------------------------------------------------------------------------

int cmd_constants(const GlobalOptions& g, int d_min, int d_max, int q_min, int q_max, double mu,
                  std::ostream& out) {
  CsvTable t({"d", "q", "mu", "k_sc", "l_sc", "rho0", "kinetic_density", "duality_residual"});
  for (int d = d_min; d <= d_max; ++d)
    for (int q = q_min; q <= q_max; ++q) {
      const PhysicsParams p(d, q, mu);
      const auto c = physcore::constants(p);
      t.add_row({static_cast<long long>(d), static_cast<long long>(q), mu, c.k_sc, c.l_sc, c.rho0,
                 c.kinetic_density, physcore::duality_residual(p)});
    }
  // Reject invalid bounds even when the range is empty.
  if (d_min < 1 || q_min < 1) (void)PhysicsParams(std::max(d_min, 0), std::max(q_min, 0), mu);
  if (!(mu >= 0.0)) throw ConfigError("mu must be >= 0");
  emit(g, "constants.csv", t.str(), out);
  return kOk;
}

int cmd_response(const GlobalOptions& g, const std::string& function, int d, const std::vector<double>& ks,
                 double mu, std::ostream& out) {
  using namespace response;
  if (function != "phi" && function != "psi" && function != "weight1d")
    throw ConfigError("unknown response function '" + function + "' (phi, psi, weight1d)");
  if (d < 1) throw ConfigError("response functions need d >= 1");
  if (function == "weight1d" && d != 1) throw ConfigError("weight1d is one-dimensional");
  for (double k : ks)
    if (!(k >= 0.0)) throw ConfigError("k must be >= 0");
  CsvTable t({"k", "value", "abs_error", "flag"});
  std::vector<double> px, py;
  for (double k : ks) {
    ResponseValue v;
    if (function == "phi") v = d == 1 ? phi1(k) : ResponseValue{phi_d(k, d)};
    else if (function == "psi") v = psi(k, d);
    else {
      const double w = weight_density_1d(k, mu);
      if (std::abs(k) == 2.0 * std::sqrt(mu)) v = DivergenceFlag{k, DivergenceKind::log_divergence};
      else v = ResponseSample{k, w, 0.0, Method::closed_form};
    }
    if (const auto* s = std::get_if<ResponseSample>(&v)) {
      t.add_row({k, s->value, s->abs_error, std::string("")});
      px.push_back(k);
      py.push_back(s->value);
    } else {
      t.add_row({k, std::nan(""), std::nan(""), std::string(to_string(std::get<DivergenceFlag>(v).kind))});
    }
  }
  const std::string stem = function + "_d" + std::to_string(d);
  emit(g, stem + ".csv", t.str(), out);
  emit_file(g, stem + ".dat", plot_data(function + " d=" + std::to_string(d) + ": k value", px, py));
  return kOk;
}

int cmd_rumin(const GlobalOptions& g, int d, int grid_points, std::ostream& out) {
  rumin::KhatOptions opt;
  opt.grid_points = grid_points;
  const auto prof = rumin::khat(d, opt);
  CsvTable t({"rho", "R", "delta_T1", "ratio"});
  std::vector<double> ratio;
  for (std::size_t i = 0; i < prof.rho_grid.size(); ++i) {
    const double dt = rumin::delta_T_unit(prof.rho_grid[i], d);
    ratio.push_back(prof.r_values[i] / dt);
    t.add_row({prof.rho_grid[i], prof.r_values[i], dt, ratio.back()});
  }
  const double small = 1e-6, large = 1e8;
  const double ksc = physcore::k_sc(PhysicsParams(d, 1, 1.0));
  const json results{
      {"d", d},
      {"khat", prof.khat},
      {"rho_at_min", prof.rho_at_min},
      {"k_sc", ksc},
      {"small_rho_ratio", rumin::rumin_R(small, d) / (small * small)},
      {"small_rho_coefficient", rumin::rumin_small_coefficient(d)},
      {"large_rho_ratio", rumin::rumin_R(large, d) / std::pow(large, 1.0 + 2.0 / d)},
      {"large_rho_coefficient", rumin::rumin_large_coefficient(d)}};
  std::vector<Assertion> checks{
      {"0 < khat <= K_sc", prof.khat, ksc, prof.khat > 0.0 && prof.khat <= ksc * (1.0 + 1e-9), {}}};
  const json report = make_report(
      "rumin", g.seed, json{{"d", d}, {"grid_points", grid_points}}, results, json{{"khat_vs_ksc", 1e-9}},
      checks, json{{"layer_cake_rho0", rumin::layer_cake_rho0(d)},
                   {"rho0_note", "uses |S^{d-1}| / (d (2 pi)^d), the value consistent with f(e)"}});
  emit_file(g, "rumin_profile.csv", t.str());
  emit_file(g, "rumin_ratio.dat", plot_data("rho R_d/deltaT_1", prof.rho_grid, ratio));
  emit(g, "rumin_report.json", dump_report(report), out);
  return kOk;
}

int cmd_box_run(const GlobalOptions& g, std::ostream& out) {
  const auto cfg = require_config(g);
  if (!cfg.L) throw ConfigError("box-run needs box.L");
  const double L = *cfg.L;
  const auto V = cfg.potential(L);
  const auto params = cfg.params();
  boxsim::RunOptions opt;
  opt.n_max = cfg.n_max;
  opt.strict = g.strict;
  opt.want_density = true;
  const auto run = boxsim::relative_energy(V, params, opt);
  const auto tr = boxsim::trace_relation_check(V, params, opt);

  double integral = 0.0;
  for (double r : run.density->values) integral += r * run.density->cell_volume;
  const double expected = params.q() * static_cast<double>(run.occupied_perturbed - run.occupied_free);

  json results{{"relative_energy", run.relative_energy},
               {"relative_energy_box_density", run.relative_energy_box},
               {"sc_rhs", run.sc_rhs},
               {"lhs_over_sc_rhs", run.sc_rhs != 0.0 ? run.relative_energy / run.sc_rhs : 0.0},
               {"occupied_perturbed", run.occupied_perturbed},
               {"occupied_free", run.occupied_free},
               {"n_max", run.n_max},
               {"rho0_used", run.rho0_used},
               {"box_density", run.box_density},
               {"fermi_gap", run.fermi_gap},
               {"degenerate", run.degenerate},
               {"authoritative", !run.degenerate},
               {"outer_shell_weight", run.outer_shell_weight},
               {"trace_relation", {{"lhs", tr.lhs}, {"kinetic", tr.kinetic}, {"potential", tr.potential},
                                   {"deviation", tr.deviation}}},
               {"density_integral", integral},
               {"density_expected", expected}};
  std::vector<Assertion> checks{
      {"relative_energy <= 1e-9", run.relative_energy, 1e-9, run.relative_energy <= 1e-9, {}},
      {"trace relation deviation", tr.deviation, 1e-9, tr.deviation <= 1e-9, {}},
      {"density normalization", std::abs(integral - expected), 1e-8, std::abs(integral - expected) <= 1e-8, {}}};
  if (cfg.T) {
    const auto f = boxsim::free_energy_T(V, params, *cfg.T, opt);
    results["temperature"] = {{"T", *cfg.T}, {"direct", f.direct}, {"lambda_quadrature", f.lambda_quad}};
    checks.push_back({"free energy <= 0", f.direct, 1e-9, f.direct <= 1e-9, {}});
    checks.push_back({"free energy vs lambda quadrature", std::abs(f.direct - f.lambda_quad), 1e-6,
                      std::abs(f.direct - f.lambda_quad) <= 1e-6, {}});
  }
  const json report = make_report("box-run", cfg.seed, config_echo(cfg, L), results,
                                  json{{"sign", 1e-9}, {"trace", 1e-9}, {"density", 1e-8}}, checks,
                                  json{{"rho0_in_subtraction", "continuum rho0 (box density reported separately)"}});
  if (cfg.density_csv) {
    const auto& grid = *run.density;
    CsvTable t(params.d() == 1 ? std::vector<std::string>{"x", "rho_Q"}
                               : params.d() == 2 ? std::vector<std::string>{"x", "y", "rho_Q"}
                                                 : std::vector<std::string>{"x", "y", "z", "rho_Q"});
    const int M = grid.points_per_dim;
    for (std::size_t i = 0; i < grid.values.size(); ++i) {
      std::vector<CsvTable::Cell> row;
      std::size_t rest = i;
      std::vector<double> xs(params.d());
      for (int a = params.d() - 1; a >= 0; --a) {
        xs[a] = -0.5 * L + L * static_cast<double>(rest % M) / M;
        rest /= M;
      }
      for (double x : xs) row.emplace_back(x);
      row.emplace_back(grid.values[i]);
      t.add_row(std::move(row));
    }
    emit_file(g, "density.csv", t.str());
  }
  emit(g, "box_report.json", dump_report(report), out);
  return kOk;
}

int cmd_sweep(const GlobalOptions& g, const std::string& kind_arg, std::ostream& out) {
  const auto cfg = require_config(g);
  const std::string kind = kind_arg.empty() ? cfg.sweep_kind : kind_arg;
  const auto params = cfg.params();
  json summary = json::object();
  std::vector<Assertion> checks;
  std::string csv;
  std::optional<double> echo_L = cfg.L;

  if (kind == "thermo") {
    const auto [a, sigma] = cfg.gaussian_parameters();
    const auto levels = default_levels(cfg, {3.5, 6.5, 13.5, 26.5});
    struct Row { boxsim::ThermoLevel base, alt; };
    const auto res = parallel_levels<Row>(levels.size(), g.jobs, [&](std::size_t i) {
      const std::span<const double> one(&levels[i], 1);
      return Row{boxsim::thermo_sweep(a, sigma, params, one, cfg.margin)[0],
                 boxsim::thermo_sweep(a, sigma, params, one, cfg.margin + 8)[0]};
    });
    CsvTable t({"level", "m_plus_half", "L", "n_max", "relative_energy", "gap", "relative_energy_alt_margin", "status"});
    std::vector<double> xs, ys, gaps;
    double margin_gap = 0.0;
    for (std::size_t i = 0; i < levels.size(); ++i) {
      if (!res.values[i]) {
        t.add_row({static_cast<long long>(i), levels[i], std::nan(""), 0LL, std::nan(""), std::nan(""), std::nan(""), res.status(i)});
        continue;
      }
      const auto& r = *res.values[i];
      double gap = 0.0;
      if (i > 0 && res.values[i - 1]) {
        gap = std::abs(r.base.relative_energy - res.values[i - 1]->base.relative_energy);
        gaps.push_back(gap);
      }
      margin_gap = std::max(margin_gap, std::abs(r.base.relative_energy - r.alt.relative_energy));
      t.add_row({static_cast<long long>(i), levels[i], r.base.L, static_cast<long long>(r.base.n_max),
                 r.base.relative_energy, gap, r.alt.relative_energy, res.status(i)});
      xs.push_back(r.base.L);
      ys.push_back(r.base.relative_energy);
    }
    bool decreasing = gaps.size() >= 2;
    for (std::size_t i = 1; i < gaps.size(); ++i) decreasing = decreasing && gaps[i] < gaps[i - 1];
    summary = {{"gaps_decreasing", decreasing}, {"last_relative_energy", ys.empty() ? 0.0 : ys.back()},
               {"last_gap", gaps.empty() ? 0.0 : gaps.back()}, {"max_margin_difference", margin_gap}};
    checks.push_back({"gaps strictly decreasing", std::nullopt, std::nullopt, decreasing, {}});
    checks.push_back({"cutoff margins agree", margin_gap, 1e-8, margin_gap <= 1e-8, {}});
    csv = t.str();
    emit_file(g, "thermo_energy.dat", plot_data("L E_rel", xs, ys));
    res.rethrow_first();
  } else if (kind == "peierls") {
    const auto scan = boxsim::peierls_scan(params, cfg.count, cfg.w0, cfg.points_per_width);
    CsvTable t({"level", "width", "L", "ratio"});
    std::vector<double> xs, ys;
    double lo = 1e300, hi = 0.0;
    bool increasing = true;
    for (std::size_t i = 0; i < scan.levels.size(); ++i) {
      const auto& l = scan.levels[i];
      t.add_row({static_cast<long long>(l.level), l.width, l.L, l.ratio});
      xs.push_back(std::log(1.0 / l.width));
      ys.push_back(l.ratio);
      lo = std::min(lo, l.ratio);
      hi = std::max(hi, l.ratio);
      if (i > 0) increasing = increasing && l.ratio > scan.levels[i - 1].ratio;
    }
    const bool divergent = params.d() == 1 && increasing;
    summary = {{"slope_per_log_inverse_width", scan.slope}, {"band_max_over_min", hi / lo},
               {"verdict", divergent ? "divergent" : (hi / lo <= 1.1 ? "bounded" : "undecided")}};
    if (params.d() == 1) {
      summary["expected_slope"] = params.q() / (8.0 * std::numbers::pi);
      summary["implied_l_prime"] = scan.implied_l_prime;
      summary["l_prime_lower_bound"] = params.q() / (12.0 * std::numbers::pi);
      checks.push_back({"ratios strictly increasing", std::nullopt, std::nullopt, increasing, {}});
    } else {
      checks.push_back({"ratios within a 10% band", hi / lo, 1.1, hi / lo <= 1.1, {}});
    }
    csv = t.str();
    emit_file(g, "peierls_ratio.dat", plot_data("log(1/width) ratio", xs, ys));
  } else if (kind == "second-order") {
    const auto [a, sigma] = cfg.gaussian_parameters();
    const auto levels = default_levels(cfg, {3.5, 6.5, 13.5, 26.5});
    const double cont = boxsim::continuum_second_order_gaussian(a, sigma, params);
    const auto res = parallel_levels<double>(levels.size(), g.jobs, [&](std::size_t i) {
      const double L = boxsim::half_shell_L(levels[i], params.mu());
      return boxsim::second_order_box(boxsim::gaussian_bump(params.d(), L, a, sigma), params);
    });
    CsvTable t({"level", "m_plus_half", "L", "second_order", "continuum", "relative_error", "status"});
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < levels.size(); ++i) {
      const double L = boxsim::half_shell_L(levels[i], params.mu());
      const double v = res.values[i].value_or(std::nan(""));
      t.add_row({static_cast<long long>(i), levels[i], L, v, cont, std::abs(v - cont) / std::abs(cont), res.status(i)});
      if (res.values[i]) {
        xs.push_back(L);
        ys.push_back(v);
      }
    }
    summary = {{"continuum", cont}, {"last_relative_error", ys.empty() ? 0.0 : std::abs(ys.back() - cont) / std::abs(cont)}};
    csv = t.str();
    emit_file(g, "second_order.dat", plot_data("L second_order_box", xs, ys));
    res.rethrow_first();
  } else if (kind == "li-yau") {
    const auto levels = default_levels(cfg, {20.0, 40.0, 60.0});
    const std::vector<double> lo = cfg.omega_lo.empty() ? std::vector<double>(params.d(), 0.0) : cfg.omega_lo;
    const std::vector<double> w = cfg.omega_width.empty() ? std::vector<double>(params.d(), 1.0) : cfg.omega_width;
    const auto res = parallel_levels<boxsim::LiYau>(levels.size(), g.jobs, [&](std::size_t i) {
      const int n_max = cfg.n_max > 0 ? cfg.n_max : static_cast<int>(std::ceil(levels[i]));
      return boxsim::li_yau_check(boxsim::BoxSpec{params.d(), levels[i], n_max}, lo, w, params);
    });
    CsvTable t({"level", "L", "lhs", "hole_part", "rhs_discrete", "rhs_continuum", "identity_deviation", "status"});
    double worst_dev = 0.0, min_ratio = 1e300;
    for (std::size_t i = 0; i < levels.size(); ++i) {
      if (!res.values[i]) {
        t.add_row({static_cast<long long>(i), levels[i], std::nan(""), std::nan(""), std::nan(""), std::nan(""), std::nan(""), res.status(i)});
        continue;
      }
      const auto& r = *res.values[i];
      t.add_row({static_cast<long long>(i), levels[i], r.lhs, r.hole_part, r.rhs_discrete, r.rhs_continuum,
                 r.identity_deviation, res.status(i)});
      worst_dev = std::max(worst_dev, r.identity_deviation);
      if (r.rhs_continuum > 0.0) min_ratio = std::min(min_ratio, r.lhs / r.rhs_continuum);
    }
    summary = {{"max_identity_deviation", worst_dev}, {"min_lhs_over_rhs_continuum", min_ratio}};
    checks.push_back({"trace identity", worst_dev, 1e-10, worst_dev <= 1e-10, {}});
    csv = t.str();
    res.rethrow_first();
  } else if (kind == "rumin") {
    const auto prof = rumin::khat(params.d());
    const auto levels = default_levels(cfg, {25.0, 50.0, 100.0, 200.0});
    const auto res = parallel_levels<rumin::LatticeCount>(levels.size(), g.jobs, [&](std::size_t i) {
      return rumin::f_lattice(cfg.e, params.d(), params.mu(), levels[i]);
    });
    const double cont = rumin::shell_volume_continuum(cfg.e, params.d(), params.mu());
    CsvTable t({"level", "L", "count", "density", "continuum", "bound_shape", "fitted_C", "status"});
    double fitted = 0.0;
    for (std::size_t i = 0; i < levels.size(); ++i) {
      const double shape = rumin::f_lattice_bound_shape(cfg.e, params.d(), params.mu(), levels[i]);
      if (!res.values[i]) {
        t.add_row({static_cast<long long>(i), levels[i], 0LL, std::nan(""), cont, shape, std::nan(""), res.status(i)});
        continue;
      }
      const auto& r = *res.values[i];
      fitted = std::max(fitted, r.density / shape);
      t.add_row({static_cast<long long>(i), levels[i], static_cast<long long>(r.count), r.density, cont, shape,
                 r.density / shape, res.status(i)});
    }
    summary = {{"khat", prof.khat}, {"k_sc", physcore::k_sc(PhysicsParams(params.d(), 1, 1.0))},
               {"rho_at_min", prof.rho_at_min}, {"fitted_minimal_C", fitted},
               {"small_rho_ratio", rumin::rumin_R(1e-6, params.d()) / 1e-12},
               {"small_rho_coefficient", rumin::rumin_small_coefficient(params.d())},
               {"large_rho_ratio", rumin::rumin_R(1e8, params.d()) / std::pow(1e8, 1.0 + 2.0 / params.d())},
               {"large_rho_coefficient", rumin::rumin_large_coefficient(params.d())}};
    csv = t.str();
    res.rethrow_first();
  } else if (kind == "temperature") {
    if (!cfg.L) throw ConfigError("temperature sweep needs box.L");
    const auto V = cfg.potential(*cfg.L);
    const auto levels = default_levels(cfg, {0.01, 0.05, 0.2});
    boxsim::RunOptions opt;
    opt.n_max = cfg.n_max;
    opt.strict = g.strict;
    const double e0 = boxsim::relative_energy(V, params, opt).relative_energy;
    const auto res = parallel_levels<boxsim::TemperatureResult>(levels.size(), g.jobs, [&](std::size_t i) {
      return boxsim::free_energy_T(V, params, levels[i], opt);
    });
    CsvTable t({"level", "T", "free_energy", "lambda_quadrature", "difference", "status"});
    double worst = 0.0, highest = -1e300;
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < levels.size(); ++i) {
      if (!res.values[i]) {
        t.add_row({static_cast<long long>(i), levels[i], std::nan(""), std::nan(""), std::nan(""), res.status(i)});
        continue;
      }
      const auto& r = *res.values[i];
      worst = std::max(worst, std::abs(r.direct - r.lambda_quad));
      highest = std::max(highest, r.direct);
      t.add_row({static_cast<long long>(i), levels[i], r.direct, r.lambda_quad, r.direct - r.lambda_quad, res.status(i)});
      xs.push_back(levels[i]);
      ys.push_back(r.direct);
    }
    summary = {{"zero_temperature_energy", e0}, {"max_quadrature_difference", worst}};
    checks.push_back({"free energy vs lambda quadrature", worst, 1e-6, worst <= 1e-6, {}});
    checks.push_back({"free energy <= 0", highest, 1e-9, highest <= 1e-9, {}});
    csv = t.str();
    emit_file(g, "free_energy.dat", plot_data("T F", xs, ys));
    res.rethrow_first();
  } else {
    throw ConfigError("unknown sweep kind '" + kind + "'");
  }

  const json report = make_report("sweep " + kind, cfg.seed, config_echo(cfg, echo_L), json{{"summary", summary}},
                                   json::object(), checks, json::object());
  emit_file(g, kind + "_summary.csv", summary_csv(summary));
  emit_file(g, kind + "_sweep_report.json", dump_report(report));
  emit(g, kind + "_sweep.csv", csv, out);
  return kOk;
}

int cmd_matrix_oracle(const GlobalOptions& g, int pairs, int dim_min, int dim_max, int samples,
                      std::ostream& out) {
  if (pairs < 0 || dim_min < 1 || dim_max < dim_min || samples < 1)
    throw ConfigError("matrix-oracle needs pairs >= 0, 1 <= dim_min <= dim_max, samples >= 1");
  if (static_cast<std::size_t>(dim_max) > boxsim::basis_cap()) throw ResourceError("matrix size above the cap");
  matoracle::Rng rng(g.seed);
  CsvTable t({"index", "dim", "gap", "attain_deviation", "trace_deviation", "degenerate", "q2_equiv", "q2_iff"});
  double worst_gap = 0.0, worst_attain = 0.0, worst_dev = 0.0;
  long equiv = 0, iff = 0;
  for (int i = 0; i < pairs; ++i) {
    const int dim = dim_min + i % (dim_max - dim_min + 1);
    matoracle::MatrixPair pair{matoracle::random_hermitian(dim, rng), matoracle::random_hermitian(dim, rng)};
    const auto v = matoracle::variational_min_check(pair, samples, rng());
    const auto tr = matoracle::relative_trace_identity(pair);
    std::uniform_int_distribution<int> rank(0, dim);
    const auto pi = matoracle::random_projection(dim, rank(rng), rng);
    const auto gamma = i % 2 ? matoracle::random_projection(dim, rank(rng), rng) : matoracle::random_density_matrix(dim, rng);
    const auto c = matoracle::constraint_q2_check(gamma, pi);
    worst_gap = std::min(worst_gap, v.gap);
    worst_attain = std::max(worst_attain, v.attain_deviation);
    if (!tr.degenerate) worst_dev = std::max(worst_dev, tr.deviation);
    equiv += c.equiv_holds;
    iff += c.equality_iff_projection;
    t.add_row({static_cast<long long>(i), static_cast<long long>(dim), v.gap, v.attain_deviation, tr.deviation,
               static_cast<long long>(tr.degenerate), static_cast<long long>(c.equiv_holds),
               static_cast<long long>(c.equality_iff_projection)});
  }
  std::vector<Assertion> checks{
      {"min gap", worst_gap, -1e-10, worst_gap >= -1e-10, "lower bound"},
      {"attainment at spectral projection", worst_attain, 1e-10, worst_attain <= 1e-10, {}},
      {"relative trace identity", worst_dev, 1e-9, worst_dev <= 1e-9, {}},
      {"Q^2 constraint", static_cast<double>(equiv), static_cast<double>(pairs), equiv == pairs, "count"},
      {"equality iff projection", static_cast<double>(iff), static_cast<double>(pairs), iff == pairs, "count"}};
  const json report = make_report("matrix-oracle", g.seed,
                                  json{{"pairs", pairs}, {"dim_min", dim_min}, {"dim_max", dim_max}, {"samples", samples}},
                                  json{{"min_gap", worst_gap}, {"max_trace_deviation", worst_dev}},
                                  json{{"gap", 1e-10}, {"trace", 1e-9}}, checks, json::object());
  emit_file(g, "matrix_oracle.csv", t.str());
  emit(g, "matrix_oracle_report.json", dump_report(report), out);
  const bool ok = std::all_of(checks.begin(), checks.end(), [](const Assertion& a) { return a.pass; });
  return ok ? kOk : kAcceptanceFailure;
}

int cmd_accept(const GlobalOptions& g, const std::string& fault, std::ostream& out, std::ostream& err) {
  AcceptanceOptions opt;
  opt.seed = g.seed;
  opt.fault = fault;
  const auto res = run_acceptance(opt, &err);
  for (const auto& c : res.criteria) out << format_line(c) << "\n";
  out << (res.all_pass ? "ACCEPT PASS" : "ACCEPT FAIL") << "\n";
  emit_file(g, "accept_report.json", dump_report(res.report));
  return res.all_pass ? kOk : kAcceptanceFailure;
}

}  // namespace ltlab::cli
