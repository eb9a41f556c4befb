#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "ltlab/physcore.hpp"

// Plane-wave spectral engine on the periodic box C_L = [-L/2, L/2)^d.
// Momenta are p = 2 pi n / L with integer n; potentials are finite Fourier
// series V(x) = sum_n c_n exp(i 2 pi n.x / L).
namespace ltlab::boxsim {

using Index = std::array<int, 3>;  // unused trailing components stay 0
using cplx = std::complex<double>;

/// Cap on the plane-wave basis size (default 4096; LTLAB_BUDGET overrides).
std::size_t basis_cap();

struct BoxSpec {
  int d = 1;
  double L = 1.0;
  int n_max = 1;

  std::size_t basis_size() const;
  /// Momentum cutoff energy (2 pi n_max / L)^2.
  double cutoff_energy() const;
  /// Throws ConfigError for bad d, L, n_max; ResourceError above the cap.
  void validate() const;
};

class FourierPotential {
 public:
  FourierPotential(int d, double L);

  int d() const { return d_; }
  double L() const { return L_; }

  /// Sets c_n and its Hermitian partner c_{-n} = conj(c_n). Setting n = 0
  /// requires a real value.
  void set_mode(const Index& n, cplx c);
  cplx coeff(const Index& n) const;
  double c0() const { return coeff({0, 0, 0}).real(); }
  const std::map<Index, cplx>& coeffs() const { return coeffs_; }

  /// Largest |n_i| over the support.
  int support_radius() const;
  /// True when every coefficient is real (then the Hamiltonian is real symmetric).
  bool is_real() const;
  double value_at(std::span<const double> x) const;
  /// sum_n |c_n|^2 L^d = int_{C_L} V^2.
  double l2_norm_squared() const;
  FourierPotential scaled(double t) const;

 private:
  int d_;
  double L_;
  std::map<Index, cplx> coeffs_;
};

/// Lattice momenta of a box, in lexicographic order of n.
struct Basis {
  int d = 1;
  double L = 1.0;
  int n_max = 0;
  std::vector<Index> n;
  std::vector<double> p2;  // |p|^2
  explicit Basis(const BoxSpec& box);
  std::size_t size() const { return n.size(); }
  /// Position of n in the basis or -1.
  long find(const Index& m) const;
};

Eigen::MatrixXcd build_hamiltonian(const BoxSpec& box, const FourierPotential& V);

/// sum over eigenvalues of (lambda - mu)_-.
double neg_riesz_sum(std::span<const double> eigs, double mu);

struct RunOptions {
  int n_max = 0;             // 0 selects the cutoff automatically
  bool want_density = false;
  bool want_vectors = false;
  bool strict = false;       // Fermi-level ties throw DegeneracyError
  double degeneracy_tol = 1e-10;
};

struct DensityGrid {
  int points_per_dim = 0;  // M, uniform grid x_j = -L/2 + j L / M
  std::vector<double> values;  // rho_{Q_V} on the grid, row-major
  double cell_volume = 0.0;
};

struct SpectralOutcome {
  int d = 1;
  double L = 1.0;
  int n_max = 0;
  std::vector<double> eigenvalues;
  long occupied_perturbed = 0;
  long occupied_free = 0;
  double relative_energy = 0.0;   // continuum rho0 in the subtracted term
  double relative_energy_box = 0.0;  // same with the box density N_free / L^d
  double sc_rhs = 0.0;            // -L_sc-weighted semiclassical functional
  double rho0_used = 0.0;
  double box_density = 0.0;
  bool degenerate = false;
  double fermi_gap = 0.0;          // min |lambda - mu| over both spectra
  double outer_shell_weight = 0.0; // max occupied weight on ||n||_inf = n_max
  std::optional<DensityGrid> density;
  Eigen::MatrixXcd vectors;        // filled when requested (columns ascending)
};

/// Automatic cutoff: the cutoff energy exceeds both mu / 0.8 and
/// mu + 8 sum |c_n|, plus the potential's bandwidth and two spare shells.
int auto_n_max(int d, double L, double mu, const FourierPotential& V);

/// E_rel = -tr(H_V - mu)_- + tr(H_0 - mu)_- - rho0 L^d c_0, all times spin q
/// (rho0 already carries q).
SpectralOutcome relative_energy(const FourierPotential& V,
                                const physcore::PhysicsParams& params,
                                RunOptions opt = {});

/// Occupation counts and perturbed-minus-free energy at a shifted Fermi level
/// from a finished spectrum; box density in the c_0 term.
double box_energy_at(std::span<const double> eigs, std::span<const double> free_p2,
                     double c0, int q, double lambda);

/// Real-space grid size that integrates V * rho_Q exactly.
int density_grid_points(int n_max, int n_v);

/// Real-space density of Q_V = Pi_V^- - Pi^- from occupied eigenvectors.
DensityGrid density_of(const Basis& basis, const Eigen::MatrixXcd& occupied,
                       long occupied_free, int q, int points_per_dim);

struct TraceRelation {
  double lhs = 0.0;        // tr (H_V - mu) Q_V from eigenvalues
  double kinetic = 0.0;    // tr (H_0 - mu) Q_V in momentum space
  double potential = 0.0;  // sum_x V rho_Q dx on the grid
  double deviation = 0.0;
};

TraceRelation trace_relation_check(const FourierPotential& V,
                                   const physcore::PhysicsParams& params,
                                   RunOptions opt = {});

/// Weighted diagonal trace of Q with weights |p^2 - mu|, after checking the
/// block constraint -Pi^- <= Q <= Pi^+ (ConfigError if violated by > tol).
double relative_kinetic(const Basis& basis, const Eigen::MatrixXcd& Q, double mu,
                        double tol = 1e-10);

/// Q_V = Pi_V^- - Pi^- in the momentum basis.
Eigen::MatrixXcd projection_difference(const Basis& basis, const Eigen::MatrixXcd& vectors,
                                       long occupied_perturbed, double mu);

/// Fermi-Dirac free energy per level, f(x) = -T log(1 + exp(-(x - mu)/T)).
double fd_f(double x, double mu, double T);
/// Fermi occupation f'(x).
double fd_occupation(double x, double mu, double T);
/// f''(x) <= 0.
double fd_curvature(double x, double mu, double T);

struct TemperatureResult {
  double direct = 0.0;      // level sums of f
  double lambda_quad = 0.0; // -int f''(lambda) E_box(lambda) d lambda
  double quad_error = 0.0;
};

TemperatureResult free_energy_T(const FourierPotential& V,
                                const physcore::PhysicsParams& params, double T,
                                RunOptions opt = {});

/// -q sum_{p occupied} sum_{p' empty} |c_{n'-n}|^2 / (p'^2 - p^2).
double second_order_box(const FourierPotential& V, const physcore::PhysicsParams& params);

// ---- Potential families ----------------------------------------------------

/// V = a cos(2 pi m.x / L).
FourierPotential cosine_mode(int d, double L, const Index& m, double a);

/// Periodised a exp(-|x|^2 / (2 sigma^2)); modes with relative weight below
/// rel_cut are dropped. Coefficients c_n = (2 pi)^{d/2} Vhat(k_n) / L^d with
/// the unitary Vhat(k) = a sigma^d exp(-sigma^2 k^2 / 2).
FourierPotential gaussian_bump(int d, double L, double a, double sigma,
                               double rel_cut = 1e-16);

/// Gaussian envelope of width s = 1/w times cos(k0 x_1): Fourier mass at
/// |k| = k0 with spread w.
FourierPotential peierls_packet(int d, double L, double a, double k0, double w,
                                double rel_cut = 1e-12);

/// -q mu^{d/2-1} int Psi_d(|k|/sqrt(mu)) |Vhat(k)|^2 dk for the Gaussian bump.
double continuum_second_order_gaussian(double a, double sigma,
                                       const physcore::PhysicsParams& params);

/// Box side placing mu halfway between two lattice shells in d = 1:
/// L = 2 pi (m + 1/2) / sqrt(mu).
double half_shell_L(double m_plus_half, double mu);

// ---- Experiments -----------------------------------------------------------

struct PeierlsLevel {
  int level = 0;
  double width = 0.0;
  double L = 0.0;
  double ratio = 0.0;
};

struct PeierlsScan {
  int d = 1;
  std::vector<PeierlsLevel> levels;
  double slope = 0.0;           // d ratio / d log(1/width), least squares
  double implied_l_prime = 0.0; // slope / 1.5 (d = 1 only)
};

PeierlsScan peierls_scan(const physcore::PhysicsParams& params, int levels, double w0,
                         double points_per_width);

struct LiYau {
  double trace_matrix = 0.0;
  double trace_closed = 0.0;
  double identity_deviation = 0.0;
  double lhs = 0.0;            // relative kinetic energy of gamma - Pi^-
  double hole_part = 0.0;      // its Pi^- block alone
  double rhs_discrete = 0.0;   // (|Omega| / L^d) q sum (mu - p^2)_+
  double rhs_continuum = 0.0;  // (2/d) K_sc rho0^{1+2/d} |Omega|
};

/// Omega = prod_i [lo_i, lo_i + width_i) inside C_L.
LiYau li_yau_check(const BoxSpec& box, std::span<const double> lo,
                   std::span<const double> width, const physcore::PhysicsParams& params);

struct ThermoLevel {
  double L = 0.0;
  int n_max = 0;
  double relative_energy = 0.0;
  double gap = 0.0;  // |E(L_j) - E(L_{j-1})|, 0 for the first level
};

/// Same physical Gaussian bump embedded in boxes of side L = half_shell_L(m).
std::vector<ThermoLevel> thermo_sweep(double a, double sigma,
                                      const physcore::PhysicsParams& params,
                                      std::span<const double> m_plus_half,
                                      int extra_margin = 0);

}  // namespace ltlab::boxsim
