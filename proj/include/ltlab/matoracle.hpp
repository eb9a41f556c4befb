#pragma once

#include <cstdint>
#include <random>
#include <span>

#include <Eigen/Dense>

#include "ltlab/boxsim.hpp"
#include "ltlab/physcore.hpp"

// Finite-dimensional checks of the variational principle and the constraint
// algebra behind the duality, on arbitrary Hermitian matrices.
namespace ltlab::matoracle {

using Mat = Eigen::MatrixXcd;
using Rng = std::mt19937_64;

/// max |M - M^*| <= tol * max(1, max |M|).
bool is_hermitian(const Mat& M, double tol = 1e-12);

/// tr M_- = sum of |negative eigenvalues|. ConfigError if not Hermitian.
double neg_part_trace(const Mat& M);

struct MatrixPair {
  Mat A;
  Mat B;
  /// Throws ConfigError unless both are square, Hermitian and equally sized.
  void validate() const;
  Eigen::Index dim() const { return A.rows(); }
};

/// GUE-like: complex Gaussian entries, symmetrised.
Mat random_hermitian(int dim, Rng& rng);
/// Haar unitary from the QR factorisation of a complex Gaussian matrix.
Mat random_unitary(int dim, Rng& rng);
/// U diag(u_i) U^* with u_i uniform in [0, 1].
Mat random_density_matrix(int dim, Rng& rng);
/// Rank-r orthogonal projection in a random basis.
Mat random_projection(int dim, int rank, Rng& rng);

struct VariationalCheck {
  double analytic = 0.0;         // -tr (A+B)_-
  double at_projection = 0.0;    // tr (A+B) 1(A+B < 0)
  double attain_deviation = 0.0;
  double sampled_min = 0.0;
  double gap = 0.0;              // sampled_min - analytic
};

VariationalCheck variational_min_check(const MatrixPair& pair, int n_samples, std::uint64_t seed);

struct RelativeTrace {
  double lhs = 0.0;  // tr (A+B)(Pi_B^- - Pi^-)
  double rhs = 0.0;  // -tr |A+B| (Pi_B^- - Pi^-)^2
  double deviation = 0.0;
  bool degenerate = false;  // an eigenvalue of A or A+B within 1e-10 of 0
};

RelativeTrace relative_trace_identity(const MatrixPair& pair);

struct ConstraintQ2 {
  double min_eigenvalue = 0.0;  // of Q^{++} - Q^{--} - Q^2
  double equality_norm = 0.0;   // max |Q^{++} - Q^{--} - Q^2|
  bool equiv_holds = false;
  bool is_projection = false;
  bool equality = false;
  bool equality_iff_projection = false;
};

/// Q = gamma - Pi^-: checks Q^2 <= Q^{++} - Q^{--} and that equality holds
/// exactly when gamma is a projection. ConfigError on inadmissible inputs.
ConstraintQ2 constraint_q2_check(const Mat& gamma, const Mat& pi_minus);

struct SobolevRatio {
  double numerator = 0.0;    // sum |p^2 - mu| |phi_hat|^2
  double denominator = 0.0;  // sum delta_T_mu(|phi|^2) dx
  double ratio = 0.0;
  bool flagged = false;      // zero denominator
};

/// phi_hat indexed like boxsim::Basis(box); sum |phi_hat|^2 must be <= 1.
SobolevRatio sobolev_mu_ratio(const boxsim::BoxSpec& box, std::span<const std::complex<double>> phi_hat,
                              const physcore::PhysicsParams& params);

}  // namespace ltlab::matoracle
