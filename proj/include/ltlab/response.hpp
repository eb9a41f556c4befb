#pragma once

#include <variant>

#include "ltlab/physcore.hpp"

// Response functions of the free Fermi gas. Momenta are in rescaled units
// k = |k_phys| / sqrt(mu) unless a function takes physical arguments
// explicitly; all closed forms live at mu = 1.
namespace ltlab::response {

enum class Method { closed_form, quadrature, recursion };

struct ResponseSample {
  double k = 0.0;
  double value = 0.0;
  double abs_error = 0.0;
  Method method = Method::closed_form;
};

enum class DivergenceKind { log_divergence, infinite_derivative };

struct DivergenceFlag {
  double at_k = 2.0;
  DivergenceKind kind = DivergenceKind::log_divergence;
};

using ResponseValue = std::variant<ResponseSample, DivergenceFlag>;

inline bool is_divergent(const ResponseValue& v) {
  return std::holds_alternative<DivergenceFlag>(v);
}

const char* to_string(Method m);
const char* to_string(DivergenceKind k);

// ---- Off-diagonal weight Phi_d -------------------------------------------

/// Phi_1(x) = int dv / (sqrt(1-v^2) sqrt((v-x)^2-1)) over v in [-1, min(1, x-1)].
/// Both endpoint inverse square roots are removed by a cosine substitution.
/// Returns DivergenceFlag at x = 2.
ResponseValue phi1(double x, double abs_tol = 1e-11);

/// Same integral by the tanh-sinh rule in the original variable; an
/// independent route used to cross-check phi1.
ResponseSample phi1_tanh_sinh(double x);

/// Phi_d(k), d >= 2, via the radial reduction to Phi_1. The interior log
/// singularity (k / cos(theta) = 2) is a quadrature breakpoint.
ResponseSample phi_d(double k, int d, double abs_tol = 1e-9);

/// Closed-form reduction of Phi_3 on [0, 2] to a one-dimensional arcsin integral.
ResponseSample phi3_closed(double k);

/// Phi_d(k), d >= 4, through the recursion onto phi3 (valid where the
/// rescaled argument stays in [0, 2]; otherwise phi_d for d = 3 is used).
ResponseSample phi_d_from_phi3(double k, int d);

/// pi^2 |S^{d-4}| int_0^1 sqrt(1-r^2) r^{d-4} dr, the maximum of Phi_d, d >= 4.
double phi_d_max(int d);

// ---- Second-order response Psi_d -----------------------------------------

/// (1/(4 pi k)) log((2+k)/|2-k|); limit 1/(4 pi) at k = 0; flagged at k = 2.
ResponseValue psi1(double k);

/// 1/(8 pi) - (1/(8 pi)) sqrt((1 - 4/k^2)_+).
ResponseSample psi2(double k);

/// (1/(16 pi^2)) (1 + (1/k)(1 - k^2/4) log((2+k)/|2-k|)); limits at k = 0, 2.
ResponseSample psi3(double k);

/// Radial-integral definition for d >= 2, evaluated by adaptive quadrature.
ResponseSample psi_d(double k, int d, double abs_tol = 1e-12);

/// Psi_d(k), d >= 3, by integrating Psi_2 over the transverse radius:
/// Psi_d(k) = (2 pi)^{2-d} |S^{d-3}| int_0^1 r^{d-3} Psi_2(k / sqrt(1-r^2)) dr.
ResponseSample psi_d_recursion(double k, int d);

/// Psi_d(0) = |S^{d-2}| / (2 (2 pi)^d) int_0^1 r^{d-2} / sqrt(1-r^2) dr.
double psi_d_at_zero(int d);

/// Dispatch on dimension: closed form for d = 1 (value or flag), quadrature otherwise.
ResponseValue psi(double k, int d);

/// Second-order kernel in physical units: q mu^{d/2-1} Psi_d(|k| / sqrt(mu)).
ResponseValue second_order_kernel(double k_phys, const physcore::PhysicsParams& p);

// ---- One-dimensional weights ---------------------------------------------

/// sqrt(mu)|k| / ((sqrt(mu)+|k|) log((2 sqrt(mu)+|k|)/|2 sqrt(mu)-|k||)).
/// Even in k; limit sqrt(mu) at k = 0; zero at |k| = 2 sqrt(mu).
double weight_density_1d(double k, double mu);

/// F_1(k) = ((sqrt(mu)+|k|)/(sqrt(mu)|k|)) log(...), the reciprocal of
/// weight_density_1d. Flagged at |k| = 2 sqrt(mu).
ResponseValue weight_potential_1d(double k, double mu);

}  // namespace ltlab::response
