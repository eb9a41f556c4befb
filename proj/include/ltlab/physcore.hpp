#pragma once

#include <span>

namespace ltlab::physcore {

/// Ambient configuration of every computation: dimension d, spin states q and
/// chemical potential mu, in units where hbar = 2m = 1.
class PhysicsParams {
 public:
  PhysicsParams(int d, int q, double mu);

  int d() const { return d_; }
  int q() const { return q_; }
  double mu() const { return mu_; }

  PhysicsParams with_mu(double mu) const { return {d_, q_, mu}; }

 private:
  int d_;
  int q_;
  double mu_;
};

struct SemiclassicalConstants {
  double k_sc;
  double l_sc;
  double rho0;
  double kinetic_density;
};

/// |S^{n}| = 2 pi^{(n+1)/2} / Gamma((n+1)/2), the area of the unit sphere in
/// R^{n+1}. Defined for n >= 0 (|S^0| = 2).
double sphere_area(int n);

double k_sc(const PhysicsParams& p);
double l_sc(const PhysicsParams& p);
double rho0(const PhysicsParams& p);
double mu_from_rho0(double rho, int d, int q);
SemiclassicalConstants constants(const PhysicsParams& p);

/// Relative residual of (p L_sc)^{p'} (p' K_sc)^p = 1, with p = 1 + d/2.
double duality_residual(const PhysicsParams& p);

/// Excess kinetic energy density of a local density deviation rho from the
/// free gas. Below -rho0 the (rho0 + rho)_+ extension keeps it convex.
double delta_T(double rho, const PhysicsParams& p);

/// Pointwise integrand (V - mu)_-^{1+d/2} - mu^{1+d/2} + (2+d)/2 mu^{d/2} V.
double sc_potential_density(double v, const PhysicsParams& p);

/// Quadrature of sc_potential_density over sampled values with weights.
/// Throws ConfigError on non-finite samples or size mismatch.
double sc_potential_functional(std::span<const double> v,
                               std::span<const double> weights,
                               const PhysicsParams& p);

/// L(K) = 2/(d+2) (d / ((d+2) K))^{d/2}; maps a kinetic constant to the
/// constant of the dual potential inequality.
double legendre_dual_constant(double k, int d);

/// Reference values announced for the optimal Lieb-Thirring ratio (metadata
/// only; never asserted).
inline constexpr double kAnnouncedR3 = 0.1279;
inline constexpr double kAnnouncedR2 = 0.04493;

}  // namespace ltlab::physcore
