#include "ltlab/physcore.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "ltlab/errors.hpp"

namespace ltlab::physcore {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// (1 + x)^a - 1 - a x, summed as a binomial series near x = 0 where the
// closed form cancels catastrophically.
double excess_power(double x, double a) {
  if (std::abs(x) < 0.05) {
    double term = a * (a - 1.0) / 2.0 * x * x;
    double sum = 0.0;
    for (int n = 2; n < 40 && std::abs(term) > 1e-18 * std::abs(sum); ++n) {
      sum += term;
      term *= (a - n) / (n + 1.0) * x;
    }
    return sum;
  }
  const double base = 1.0 + x;
  const double lead = base > 0.0 ? std::pow(base, a) : 0.0;
  return lead - 1.0 - a * x;
}

}  // namespace

PhysicsParams::PhysicsParams(int d, int q, double mu) : d_(d), q_(q), mu_(mu) {
  if (d < 1) throw ConfigError("dimension d must be >= 1, got " + std::to_string(d));
  if (q < 1) throw ConfigError("spin count q must be >= 1, got " + std::to_string(q));
  if (!(mu >= 0.0) || !std::isfinite(mu))
    throw ConfigError("chemical potential mu must be finite and >= 0");
}

double sphere_area(int n) {
  if (n < 0) throw ConfigError("sphere dimension must be >= 0");
  const double half = 0.5 * (n + 1);
  return 2.0 * std::pow(std::numbers::pi, half) / std::tgamma(half);
}

double k_sc(const PhysicsParams& p) {
  const int d = p.d();
  const double inner = d * std::pow(kTwoPi, d) / (p.q() * sphere_area(d - 1));
  return d / (d + 2.0) * std::pow(inner, 2.0 / d);
}

double l_sc(const PhysicsParams& p) {
  const int d = p.d();
  return 2.0 * p.q() * sphere_area(d - 1) / (d * (d + 2.0) * std::pow(kTwoPi, d));
}

double rho0(const PhysicsParams& p) {
  const int d = p.d();
  return p.q() * sphere_area(d - 1) / (d * std::pow(kTwoPi, d)) * std::pow(p.mu(), 0.5 * d);
}

double mu_from_rho0(double rho, int d, int q) {
  if (!(rho >= 0.0)) throw ConfigError("density must be >= 0");
  const PhysicsParams unit(d, q, 1.0);
  return (2.0 + d) / d * k_sc(unit) * std::pow(rho, 2.0 / d);
}

SemiclassicalConstants constants(const PhysicsParams& p) {
  const double l = l_sc(p);
  return {k_sc(p), l, rho0(p), 0.5 * p.d() * l * std::pow(p.mu(), 1.0 + 0.5 * p.d())};
}

double duality_residual(const PhysicsParams& p) {
  const double pe = 1.0 + 0.5 * p.d();
  const double pc = 1.0 + 2.0 / p.d();
  // Evaluated in log form; the direct product multiplies large powers.
  const double log_prod = pc * std::log(pe * l_sc(p)) + pe * std::log(pc * k_sc(p));
  return std::abs(std::expm1(log_prod));
}

double delta_T(double rho, const PhysicsParams& p) {
  const double r0 = rho0(p);
  const double a = 1.0 + 2.0 / p.d();
  if (r0 == 0.0) return rho > 0.0 ? std::pow(rho, a) : 0.0;
  return std::pow(r0, a) * excess_power(rho / r0, a);
}

double sc_potential_density(double v, const PhysicsParams& p) {
  const double a = 1.0 + 0.5 * p.d();
  const double mu = p.mu();
  if (mu == 0.0) return v < 0.0 ? std::pow(-v, a) : 0.0;
  // (mu - v)_+^a - mu^a + a mu^{a-1} v = mu^a [(1 - y)_+^a - 1 + a y], y = v/mu.
  return std::pow(mu, a) * excess_power(-v / mu, a);
}

double sc_potential_functional(std::span<const double> v, std::span<const double> weights,
                               const PhysicsParams& p) {
  if (v.size() != weights.size())
    throw ConfigError("potential samples and quadrature weights differ in length");
  double sum = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i]) || !std::isfinite(weights[i]))
      throw ConfigError("non-finite potential sample at index " + std::to_string(i));
    sum += weights[i] * sc_potential_density(v[i], p);
  }
  return sum;
}

double legendre_dual_constant(double k, int d) {
  if (!(k > 0.0)) throw ConfigError("kinetic constant must be > 0");
  if (d < 1) throw ConfigError("dimension d must be >= 1");
  return 2.0 / (d + 2.0) * std::pow(d / ((d + 2.0) * k), 0.5 * d);
}

}  // namespace ltlab::physcore
