#include <cmath>
#include <numbers>
#include <variant>

#include "ltlab/boxsim.hpp"
#include "ltlab/errors.hpp"
#include "ltlab/quadrature.hpp"
#include "ltlab/response.hpp"

namespace ltlab::boxsim {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double psi_value(double k, int d) {
  switch (d) {
    case 1: {
      const auto v = response::psi1(k);
      return std::get<response::ResponseSample>(v).value;
    }
    case 2: return response::psi2(k).value;
    case 3: return response::psi3(k).value;
    default: return response::psi_d(k, d).value;
  }
}

// Least-squares slope of y against x.
double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double den = n * sxx - sx * sx;
  return den == 0.0 ? 0.0 : (n * sxy - sx * sy) / den;
}

}  // namespace

double continuum_second_order_gaussian(double a, double sigma, const physcore::PhysicsParams& params) {
  if (!(sigma > 0.0)) throw ConfigError("gaussian width must be > 0");
  if (!(params.mu() > 0.0)) throw ConfigError("continuum second order needs mu > 0");
  const int d = params.d();
  const double sqrt_mu = std::sqrt(params.mu());
  const double amp2 = a * a * std::pow(sigma, 2 * d);
  auto f = [&](double k) {
    if (k == 2.0 * sqrt_mu) return 0.0;
    return std::pow(k, d - 1) * psi_value(k / sqrt_mu, d) * amp2 * std::exp(-sigma * sigma * k * k);
  };
  const double k_max = 9.0 / sigma;
  const std::array<double, 1> cut{2.0 * sqrt_mu};
  const auto r = quad::adaptive(f, 0.0, k_max, cut, {1e-15, 1e-12, 4000});
  return -params.q() * std::pow(params.mu(), 0.5 * d - 1.0) * physcore::sphere_area(d - 1) * r.value;
}

PeierlsScan peierls_scan(const physcore::PhysicsParams& params, int levels, double w0,
                         double points_per_width) {
  const int d = params.d();
  if (d != 1 && d != 2) throw ConfigError("Peierls scan runs in d = 1 or 2");
  if (levels < 2) throw ConfigError("Peierls scan needs at least two levels");
  if (!(w0 > 0.0) || !(points_per_width > 0.0)) throw ConfigError("bad Peierls widths");
  const double sqrt_mu = std::sqrt(params.mu());
  PeierlsScan scan;
  scan.d = d;
  std::vector<double> x, y;
  for (int j = 0; j < levels; ++j) {
    const double w = w0 * std::ldexp(1.0, -j);
    // Lattice spacing 2 pi / L equal to w / points_per_width.
    const double m = std::round(points_per_width * sqrt_mu / w);
    const double L = half_shell_L(m + 0.5, params.mu());
    const auto V = peierls_packet(d, L, 1.0, 2.0 * sqrt_mu, w);
    PeierlsLevel lv{j, w, L, std::abs(second_order_box(V, params)) / V.l2_norm_squared()};
    scan.levels.push_back(lv);
    x.push_back(std::log(1.0 / w));
    y.push_back(lv.ratio);
  }
  scan.slope = fit_slope(x, y);
  if (d == 1) scan.implied_l_prime = scan.slope / 1.5;
  return scan;
}

LiYau li_yau_check(const BoxSpec& box, std::span<const double> lo, std::span<const double> width,
                   const physcore::PhysicsParams& params) {
  const int d = box.d;
  if (params.d() != d) throw ConfigError("box and physics dimensions differ");
  if (static_cast<int>(lo.size()) != d || static_cast<int>(width.size()) != d)
    throw ConfigError("Omega corner and widths need d components");
  const double L = box.L;
  double omega = 1.0;
  for (int i = 0; i < d; ++i) {
    if (!(width[i] >= 0.0) || lo[i] < -0.5 * L || lo[i] + width[i] > 0.5 * L)
      throw ConfigError("Omega must lie inside the box");
    omega *= width[i];
  }
  const Basis basis(box);
  const double mu = params.mu();
  const int q = params.q();
  const auto size = static_cast<Eigen::Index>(basis.size());

  // <p|1_Omega|p'> as a product of one-dimensional interval integrals.
  auto factor = [&](int i, int delta) -> cplx {
    if (delta == 0) return width[i] / L;
    const double k = kTwoPi * delta / L;
    const cplx e1 = std::polar(1.0, k * (lo[i] + width[i])), e0 = std::polar(1.0, k * lo[i]);
    return (e1 - e0) / (cplx(0.0, k) * L);
  };
  Eigen::MatrixXcd M(size, size);
  for (Eigen::Index r = 0; r < size; ++r)
    for (Eigen::Index c = 0; c < size; ++c) {
      cplx v = 1.0;
      for (int i = 0; i < d; ++i) v *= factor(i, basis.n[c][i] - basis.n[r][i]);
      M(r, c) = v;
    }

  LiYau out;
  double closed = 0.0, traced = 0.0;
  std::vector<Eigen::Index> occ;
  for (Eigen::Index n = 0; n < size; ++n)
    if (basis.p2[n] <= mu) {
      occ.push_back(n);
      closed += mu - basis.p2[n];
      traced += (mu - basis.p2[n]) * M(n, n).real();
    }
  out.trace_closed = q * omega / std::pow(L, d) * closed;
  out.trace_matrix = q * traced;
  out.identity_deviation = std::abs(out.trace_matrix - out.trace_closed);
  out.rhs_discrete = out.trace_closed;
  const auto sc = physcore::constants(params);
  out.rhs_continuum = (2.0 / d) * sc.k_sc * std::pow(sc.rho0, 1.0 + 2.0 / d) * omega;

  // gamma = 1_{Omega^c} Pi^- 1_{Omega^c}; columns of 1 - M on the Fermi sea.
  Eigen::MatrixXcd A(size, static_cast<Eigen::Index>(occ.size()));
  for (std::size_t j = 0; j < occ.size(); ++j) {
    A.col(static_cast<Eigen::Index>(j)) = -M.col(occ[j]);
    A(occ[j], static_cast<Eigen::Index>(j)) += 1.0;
  }
  Eigen::MatrixXcd Q = A * A.adjoint();
  for (Eigen::Index n : occ) Q(n, n) -= 1.0;
  out.lhs = q * relative_kinetic(basis, Q, mu);
  double hole = 0.0;
  for (Eigen::Index n : occ) hole -= (mu - basis.p2[n]) * Q(n, n).real();
  out.hole_part = q * hole;
  return out;
}

std::vector<ThermoLevel> thermo_sweep(double a, double sigma, const physcore::PhysicsParams& params,
                                      std::span<const double> m_plus_half, int extra_margin) {
  std::vector<ThermoLevel> out;
  for (double m : m_plus_half) {
    const double L = half_shell_L(m, params.mu());
    const auto V = gaussian_bump(params.d(), L, a, sigma);
    RunOptions opt;
    opt.n_max = auto_n_max(params.d(), L, params.mu(), V) + extra_margin;
    const auto run = relative_energy(V, params, opt);
    ThermoLevel lv{L, run.n_max, run.relative_energy, 0.0};
    if (!out.empty()) lv.gap = std::abs(lv.relative_energy - out.back().relative_energy);
    out.push_back(lv);
  }
  return out;
}

}  // namespace ltlab::boxsim
