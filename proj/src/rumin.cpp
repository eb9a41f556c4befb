#include "ltlab/rumin.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <string>

#include "ltlab/errors.hpp"
#include "ltlab/physcore.hpp"
#include "ltlab/quadrature.hpp"

namespace ltlab::rumin {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_dimension(int d) {
  if (d < 1) throw ConfigError("dimension d must be >= 1");
}

// Largest m >= 0 with m^2 <= r2 (or < r2 when strict); -1 if none.
long long max_abs_coordinate(double r2, bool strict) {
  if (r2 < 0.0 || (strict && r2 <= 0.0)) return -1;
  auto m = static_cast<long long>(std::floor(std::sqrt(r2)));
  auto inside = [&](long long v) {
    const double n2 = static_cast<double>(v) * static_cast<double>(v);
    return strict ? n2 < r2 : n2 <= r2;
  };
  while (inside(m + 1)) ++m;
  while (m >= 0 && !inside(m)) --m;
  return m;
}

std::uint64_t count_rec(int d, double r2, bool strict) {
  const long long m = max_abs_coordinate(r2, strict);
  if (m < 0) return 0;
  if (d == 1) return static_cast<std::uint64_t>(2 * m + 1);
  std::uint64_t total = count_rec(d - 1, r2, strict);  // x = 0 row
  for (long long x = 1; x <= m; ++x) {
    const double rest = r2 - static_cast<double>(x) * static_cast<double>(x);
    const std::uint64_t row = count_rec(d - 1, rest, strict);
    if (row == 0) break;  // rows only shrink as |x| grows
    total += 2 * row;
  }
  return total;
}

}  // namespace

double layer_cake_rho0(int d) {
  require_dimension(d);
  return physcore::sphere_area(d - 1) / (d * std::pow(kTwoPi, d));
}

double f_continuum(double e, int d) {
  require_dimension(d);
  if (!(e >= 0.0)) throw ConfigError("f_continuum requires e >= 0");
  const double hi = std::pow(1.0 + e, 0.5 * d);
  const double lo = e < 1.0 ? std::pow(1.0 - e, 0.5 * d) : 0.0;
  return layer_cake_rho0(d) * (hi - lo);
}

double delta_T_unit(double rho, int d) {
  // With q = 1 and mu = 1 the physcore free-gas density equals layer_cake_rho0.
  return physcore::delta_T(rho, physcore::PhysicsParams(d, 1, 1.0));
}

double rumin_R(double rho, int d) {
  require_dimension(d);
  if (!(rho >= 0.0)) throw ConfigError("rumin_R requires rho >= 0");
  if (rho == 0.0) return 0.0;

  // Upper end of the integrand's support: f(e*) = rho.
  double lo = 0.0, hi = 1.0;
  while (f_continuum(hi, d) < rho) {
    lo = hi;
    hi *= 2.0;
  }
  for (int it = 0; it < 200 && (hi - lo) > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (f_continuum(mid, d) < rho ? lo : hi) = mid;
  }
  const double e_star = 0.5 * (lo + hi);

  const double sqrt_rho = std::sqrt(rho);
  auto integrand = [&](double t) {
    const double gap = sqrt_rho - std::sqrt(f_continuum(e_star * t, d));
    return gap > 0.0 ? gap * gap : 0.0;
  };
  std::array<double, 1> kink{1.0 / e_star};  // (1 - e)_+ switches off at e = 1
  const auto r = quad::adaptive(integrand, 0.0, 1.0, kink, {1e-300, 1e-12, 4000});
  return e_star * r.value;
}

double rumin_small_coefficient(int d) {
  require_dimension(d);
  return std::pow(kTwoPi, d) / (6.0 * physcore::sphere_area(d - 1));
}

double rumin_large_coefficient(int d) {
  require_dimension(d);
  return d / (d + 4.0) * physcore::k_sc(physcore::PhysicsParams(d, 1, 1.0));
}

RuminProfile khat(int d, KhatOptions opt) {
  require_dimension(d);
  if (opt.grid_points < 3) throw ConfigError("khat grid needs at least 3 points");
  RuminProfile out;
  out.d = d;
  const double log_lo = std::log(opt.rho_min);
  const double log_hi = std::log(opt.rho_max);
  const int n = opt.grid_points;
  auto ratio_at_log = [&](double lr) {
    const double rho = std::exp(lr);
    return rumin_R(rho, d) / delta_T_unit(rho, d);
  };

  std::size_t best = 0;
  double best_ratio = 0.0;
  for (int i = 0; i < n; ++i) {
    const double lr = log_lo + (log_hi - log_lo) * i / (n - 1);
    const double rho = std::exp(lr);
    const double r = rumin_R(rho, d);
    out.rho_grid.push_back(rho);
    out.r_values.push_back(r);
    const double ratio = r / delta_T_unit(rho, d);
    if (i == 0 || ratio < best_ratio) {
      best_ratio = ratio;
      best = static_cast<std::size_t>(i);
    }
  }

  // Golden-section search in log(rho) over the bracketing grid cells.
  double a = std::log(out.rho_grid[best == 0 ? 0 : best - 1]);
  double b = std::log(out.rho_grid[std::min<std::size_t>(best + 1, n - 1)]);
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double e = a + inv_phi * (b - a);
  double fc = ratio_at_log(c), fe = ratio_at_log(e);
  while (b - a > opt.refine_rel_tol) {  // width in log(rho) is a relative width in rho
    if (fc < fe) {
      b = e;
      e = c;
      fe = fc;
      c = b - inv_phi * (b - a);
      fc = ratio_at_log(c);
    } else {
      a = c;
      c = e;
      fc = fe;
      e = a + inv_phi * (b - a);
      fe = ratio_at_log(e);
    }
  }
  const double lr = 0.5 * (a + b);
  const double refined = ratio_at_log(lr);
  if (refined < best_ratio) {
    out.khat = refined;
    out.rho_at_min = std::exp(lr);
  } else {
    out.khat = best_ratio;
    out.rho_at_min = out.rho_grid[best];
  }
  return out;
}

// ---------------------------------------------------------------------------

std::uint64_t enumeration_budget() {
  if (const char* env = std::getenv("LTLAB_BUDGET")) {
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end != env && v > 0.0) return static_cast<std::uint64_t>(v);
  }
  return 1'000'000'000ULL;
}

std::uint64_t count_lattice_norm(int d, double r2, bool strict) {
  require_dimension(d);
  if (!std::isfinite(r2)) throw ConfigError("lattice radius must be finite");
  if (r2 < 0.0) return 0;
  const double side = 2.0 * std::floor(std::sqrt(r2)) + 1.0;
  const double rows = std::pow(side, d - 1);
  if (rows > static_cast<double>(enumeration_budget()))
    throw ResourceError("lattice enumeration needs ~" + std::to_string(rows) +
                        " rows, above the budget");
  return count_rec(d, r2, strict);
}

std::uint64_t lattice_count_ball(double radius, int d) {
  if (!(radius >= 0.0)) throw ConfigError("ball radius must be >= 0");
  return count_lattice_norm(d, radius * radius, false);
}

LatticeCount f_lattice(double e, int d, double mu, double L) {
  require_dimension(d);
  if (!(L > 0.0)) throw ConfigError("box side L must be > 0");
  if (!(e >= 0.0) || !(mu >= 0.0)) throw ConfigError("f_lattice requires e, mu >= 0");
  const double scale = (L / kTwoPi) * (L / kTwoPi);
  const std::uint64_t outer = count_lattice_norm(d, scale * (mu + e), false);
  const std::uint64_t inner = mu > e ? count_lattice_norm(d, scale * (mu - e), true) : 0;
  LatticeCount out{L, mu, e, outer - inner, 0.0};
  out.density = static_cast<double>(out.count) / std::pow(L, d);
  return out;
}

double shell_volume_continuum(double e, int d, double mu) {
  const double hi = std::pow(mu + e, 0.5 * d);
  const double lo = mu > e ? std::pow(mu - e, 0.5 * d) : 0.0;
  return layer_cake_rho0(d) * (hi - lo);
}

double f_lattice_bound_shape(double e, int d, double mu, double L) {
  if (mu > 1.0 / (L * L)) {
    const double first = std::pow(mu, 0.5 * (d - 1)) / L;
    return first + (e <= mu ? std::pow(mu, 0.5 * d - 1.0) * e : std::pow(e, 0.5 * d));
  }
  return 1.0 / std::pow(L, d) + std::pow(e, 0.5 * d);
}

}  // namespace ltlab::rumin
