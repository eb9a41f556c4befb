#include "ltlab/matoracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

#include "ltlab/errors.hpp"

namespace ltlab::matoracle {

namespace {

using Solver = Eigen::SelfAdjointEigenSolver<Mat>;

constexpr double kDegenerate = 1e-10;

Mat spectral_projection_negative(const Solver& es, bool inclusive) {
  const auto& v = es.eigenvectors();
  Mat P = Mat::Zero(v.rows(), v.cols());
  for (Eigen::Index i = 0; i < v.cols(); ++i) {
    const double l = es.eigenvalues()[i];
    if (inclusive ? l <= 0.0 : l < 0.0) P += v.col(i) * v.col(i).adjoint();
  }
  return P;
}

Mat gaussian_matrix(int dim, Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Mat G(dim, dim);
  for (int c = 0; c < dim; ++c)
    for (int r = 0; r < dim; ++r) {
      const double re = n(rng);
      const double im = n(rng);
      G(r, c) = {re, im};
    }
  return G;
}

double max_abs(const Mat& M) { return M.size() == 0 ? 0.0 : M.cwiseAbs().maxCoeff(); }

}  // namespace

bool is_hermitian(const Mat& M, double tol) {
  if (M.rows() != M.cols()) return false;
  return max_abs(M - M.adjoint()) <= tol * std::max(1.0, max_abs(M));
}

double neg_part_trace(const Mat& M) {
  if (!is_hermitian(M)) throw ConfigError("neg_part_trace needs a Hermitian matrix");
  Solver es(M, Eigen::EigenvaluesOnly);
  double s = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) s += std::max(-es.eigenvalues()[i], 0.0);
  return s;
}

void MatrixPair::validate() const {
  if (A.rows() != B.rows() || A.cols() != B.cols()) throw ConfigError("matrix pair dimension mismatch");
  if (!is_hermitian(A) || !is_hermitian(B)) throw ConfigError("matrix pair must be Hermitian");
}

Mat random_hermitian(int dim, Rng& rng) {
  const Mat G = gaussian_matrix(dim, rng);
  return 0.5 * (G + G.adjoint());
}

Mat random_unitary(int dim, Rng& rng) {
  Eigen::HouseholderQR<Mat> qr(gaussian_matrix(dim, rng));
  Mat Q = qr.householderQ() * Mat::Identity(dim, dim);
  const Mat R = qr.matrixQR().triangularView<Eigen::Upper>();
  // Fix the phase ambiguity so the distribution is Haar.
  for (int i = 0; i < dim; ++i) {
    const double a = std::abs(R(i, i));
    if (a > 0.0) Q.col(i) *= R(i, i) / a;
  }
  return Q;
}

Mat random_density_matrix(int dim, Rng& rng) {
  const Mat U = random_unitary(dim, rng);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Eigen::VectorXd d(dim);
  for (int i = 0; i < dim; ++i) d[i] = u(rng);
  return U * d.cast<std::complex<double>>().asDiagonal() * U.adjoint();
}

Mat random_projection(int dim, int rank, Rng& rng) {
  if (rank < 0 || rank > dim) throw ConfigError("projection rank out of range");
  const Mat U = random_unitary(dim, rng);
  const Mat V = U.leftCols(rank);
  return V * V.adjoint();
}

VariationalCheck variational_min_check(const MatrixPair& pair, int n_samples, std::uint64_t seed) {
  pair.validate();
  if (n_samples < 1) throw ConfigError("variational check needs n_samples >= 1");
  const Mat H = pair.A + pair.B;
  Solver es(H);
  VariationalCheck out;
  out.analytic = -neg_part_trace(H);
  const Mat gamma_star = spectral_projection_negative(es, false);
  out.at_projection = (H * gamma_star).trace().real();
  out.attain_deviation = std::abs(out.at_projection - out.analytic);
  Rng rng(seed);
  out.sampled_min = std::numeric_limits<double>::infinity();
  for (int s = 0; s < n_samples; ++s) {
    const Mat g = random_density_matrix(static_cast<int>(pair.dim()), rng);
    out.sampled_min = std::min(out.sampled_min, (H * g).trace().real());
  }
  out.gap = out.sampled_min - out.analytic;
  return out;
}

RelativeTrace relative_trace_identity(const MatrixPair& pair) {
  pair.validate();
  const Mat H = pair.A + pair.B;
  Solver ea(pair.A), eh(H);
  RelativeTrace out;
  out.degenerate = ea.eigenvalues().cwiseAbs().minCoeff() < kDegenerate ||
                   eh.eigenvalues().cwiseAbs().minCoeff() < kDegenerate;
  const Mat D = spectral_projection_negative(eh, true) - spectral_projection_negative(ea, true);
  const Mat absH = eh.eigenvectors() * eh.eigenvalues().cwiseAbs().cast<std::complex<double>>().asDiagonal() *
                   eh.eigenvectors().adjoint();
  out.lhs = (H * D).trace().real();
  out.rhs = -(absH * D * D).trace().real();
  out.deviation = std::abs(out.lhs - out.rhs);
  return out;
}

ConstraintQ2 constraint_q2_check(const Mat& gamma, const Mat& pi_minus) {
  const double tol = 1e-10;
  if (gamma.rows() != pi_minus.rows() || !is_hermitian(gamma, tol) || !is_hermitian(pi_minus, tol))
    throw ConfigError("constraint check needs Hermitian inputs of equal size");
  if (max_abs(pi_minus * pi_minus - pi_minus) > tol) throw ConfigError("pi_minus is not a projection");
  Solver eg(gamma, Eigen::EigenvaluesOnly);
  if (eg.eigenvalues().minCoeff() < -tol || eg.eigenvalues().maxCoeff() > 1.0 + tol)
    throw ConfigError("gamma must satisfy 0 <= gamma <= 1");
  const Eigen::Index n = gamma.rows();
  const Mat pi_plus = Mat::Identity(n, n) - pi_minus;
  const Mat Q = gamma - pi_minus;
  const Mat D = pi_plus * Q * pi_plus - pi_minus * Q * pi_minus - Q * Q;
  Solver ed(0.5 * (D + D.adjoint()), Eigen::EigenvaluesOnly);
  ConstraintQ2 out;
  out.min_eigenvalue = ed.eigenvalues().minCoeff();
  out.equality_norm = max_abs(D);
  out.equiv_holds = out.min_eigenvalue >= -tol;
  out.is_projection = max_abs(gamma * gamma - gamma) <= 1e-9;
  out.equality = out.equality_norm <= 1e-9;
  out.equality_iff_projection = out.equality == out.is_projection;
  return out;
}

SobolevRatio sobolev_mu_ratio(const boxsim::BoxSpec& box, std::span<const std::complex<double>> phi_hat,
                              const physcore::PhysicsParams& params) {
  const boxsim::Basis basis(box);
  if (phi_hat.size() != basis.size()) throw ConfigError("phi_hat does not match the box basis");
  if (params.d() != box.d) throw ConfigError("box and physics dimensions differ");
  double mass = 0.0;
  SobolevRatio out;
  Eigen::MatrixXcd col(static_cast<Eigen::Index>(basis.size()), 1);
  for (std::size_t i = 0; i < basis.size(); ++i) {
    mass += std::norm(phi_hat[i]);
    out.numerator += std::abs(basis.p2[i] - params.mu()) * std::norm(phi_hat[i]);
    col(static_cast<Eigen::Index>(i), 0) = phi_hat[i];
  }
  if (mass > 1.0 + 1e-12) throw ConfigError("phi_hat must satisfy sum |phi_hat|^2 <= 1");
  const int M = 4 * (2 * box.n_max + 1);
  const auto grid = boxsim::density_of(basis, col, 0, 1, M);
  for (double rho : grid.values) out.denominator += physcore::delta_T(rho, params) * grid.cell_volume;
  out.flagged = !(out.denominator > 0.0);
  out.ratio = out.flagged ? 0.0 : out.numerator / out.denominator;
  return out;
}

}  // namespace ltlab::matoracle
