#pragma once

#include <cstdint>
#include <vector>

// Layer-cake lower bound machinery at mu = 1, q = 1, plus exact lattice
// counting for the periodic box.
namespace ltlab::rumin {

/// Phase-space volume (2 pi)^{-d} |{ |p^2 - 1| <= e }|.
double f_continuum(double e, int d);

/// Free-gas density used by the layer-cake bound: |S^{d-1}| / (d (2 pi)^d).
/// This is what f(e) integrates to; a (2 pi)^{+d} normalisation would not
/// match it. Reported as metadata by the CLI.
double layer_cake_rho0(int d);

/// delta T_1 evaluated with layer_cake_rho0.
double delta_T_unit(double rho, int d);

/// R_d(rho) = int_0^inf (sqrt(rho) - sqrt(f(e)))_+^2 de.
double rumin_R(double rho, int d);

/// Small- and large-density asymptotic coefficients of R_d.
double rumin_small_coefficient(int d);  // (2 pi)^d / (6 |S^{d-1}|)
double rumin_large_coefficient(int d);  // d / (d+4) K_sc(d), q = 1

struct RuminProfile {
  int d = 0;
  std::vector<double> rho_grid;
  std::vector<double> r_values;
  double khat = 0.0;
  double rho_at_min = 0.0;
};

struct KhatOptions {
  int grid_points = 400;
  double rho_min = 1e-6;
  double rho_max = 1e8;
  double refine_rel_tol = 1e-6;
};

/// Minimises R_d / delta T_1 over a log-spaced grid and refines the minimum
/// by golden-section search.
RuminProfile khat(int d, KhatOptions opt = {});

// ---- Lattice counting ----------------------------------------------------

/// Candidate-point budget for lattice enumerations (default 1e9, overridable
/// by the LTLAB_BUDGET environment variable).
std::uint64_t enumeration_budget();

/// #{n in Z^d : |n|^2 <= r2}, or |n|^2 < r2 when strict.
std::uint64_t count_lattice_norm(int d, double r2, bool strict = false);

/// #(Z^d intersected with the closed ball B(R)).
std::uint64_t lattice_count_ball(double radius, int d);

struct LatticeCount {
  double L = 0.0;
  double mu = 0.0;
  double e = 0.0;
  std::uint64_t count = 0;
  double density = 0.0;  // count / L^d
};

/// (1/L^d) #{p in (2 pi Z / L)^d : |p^2 - mu| <= e}.
LatticeCount f_lattice(double e, int d, double mu, double L);

/// (2 pi)^{-d} |{ |p^2 - mu| <= e }|, the continuum limit of f_lattice.
double shell_volume_continuum(double e, int d, double mu);

/// Comparison function of the finite-box counting bound:
/// mu^{(d-1)/2}/L + mu^{d/2-1} e 1(e<=mu) + e^{d/2} 1(e>=mu) for mu > 1/L^2,
/// 1/L^d + e^{d/2} otherwise.
double f_lattice_bound_shape(double e, int d, double mu, double L);

}  // namespace ltlab::rumin
