#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "ltlab/boxsim.hpp"
#include "ltlab/errors.hpp"
#include "ltlab/quadrature.hpp"

namespace ltlab::boxsim {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

template <class Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> assemble(const Basis& basis,
                                                               const FourierPotential& V) {
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const auto size = static_cast<Eigen::Index>(basis.size());
  Mat H = Mat::Zero(size, size);
  for (Eigen::Index j = 0; j < size; ++j) {
    H(j, j) += basis.p2[j];
    for (const auto& [m, c] : V.coeffs()) {
      const Index t{basis.n[j][0] + m[0], basis.n[j][1] + m[1], basis.n[j][2] + m[2]};
      const long i = basis.find(t);
      if (i < 0) continue;
      if constexpr (std::is_same_v<Scalar, double>) H(i, j) += c.real();
      else H(i, j) += c;
    }
  }
  return H;
}

struct Spectrum {
  std::vector<double> values;
  Eigen::MatrixXcd vectors;  // empty unless requested
};

Spectrum diagonalize(const Basis& basis, const FourierPotential& V, bool want_vectors) {
  const int mode = want_vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly;
  Spectrum s;
  if (V.is_real()) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(assemble<double>(basis, V), mode);
    if (es.info() != Eigen::Success) throw ResourceError("eigensolver did not converge");
    s.values.assign(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
    if (want_vectors) s.vectors = es.eigenvectors().cast<cplx>();
  } else {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(assemble<cplx>(basis, V), mode);
    if (es.info() != Eigen::Success) throw ResourceError("eigensolver did not converge");
    s.values.assign(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
    if (want_vectors) s.vectors = es.eigenvectors();
  }
  return s;
}

void check_compatible(const FourierPotential& V, const physcore::PhysicsParams& params) {
  if (V.d() != params.d()) throw ConfigError("potential dimension differs from physics d");
}

// Coefficients on the (2 n_max + 1)^d momentum array -> values on the uniform
// grid x_j = -L/2 + j L / M, evaluated one axis at a time.
std::vector<cplx> to_grid(std::vector<cplx> data, int d, int n_max, int M) {
  const int side = 2 * n_max + 1;
  std::vector<cplx> table(static_cast<std::size_t>(M) * side);
  for (int j = 0; j < M; ++j)
    for (int k = 0; k < side; ++k) {
      const int n = k - n_max;
      // exp(i 2 pi n (j/M - 1/2)), reduced to keep the phase argument small.
      const long r = ((static_cast<long>(n) * j) % M + M) % M;
      const double phase = kTwoPi * static_cast<double>(r) / M;
      const double sign = (n % 2 == 0) ? 1.0 : -1.0;
      table[static_cast<std::size_t>(j) * side + k] = sign * cplx(std::cos(phase), std::sin(phase));
    }
  std::array<int, 3> shape{1, 1, 1};
  for (int i = 0; i < d; ++i) shape[i] = side;
  for (int axis = 0; axis < d; ++axis) {
    std::size_t outer = 1, inner = 1;
    for (int i = 0; i < axis; ++i) outer *= shape[i];
    for (int i = axis + 1; i < d; ++i) inner *= shape[i];
    std::vector<cplx> next(outer * M * inner);
    for (std::size_t o = 0; o < outer; ++o)
      for (int j = 0; j < M; ++j)
        for (std::size_t in = 0; in < inner; ++in) {
          cplx acc{};
          for (int k = 0; k < side; ++k)
            acc += data[(o * side + k) * inner + in] * table[static_cast<std::size_t>(j) * side + k];
          next[(o * M + j) * inner + in] = acc;
        }
    data = std::move(next);
    shape[axis] = M;
  }
  return data;
}

std::vector<double> potential_on_grid(const Basis& basis, const FourierPotential& V, int M) {
  std::vector<cplx> coeffs(basis.size());
  for (const auto& [m, c] : V.coeffs()) {
    const long i = basis.find(m);
    if (i < 0) throw CutoffError("potential support exceeds the plane-wave cutoff");
    coeffs[i] = c;
  }
  const auto g = to_grid(std::move(coeffs), basis.d, basis.n_max, M);
  std::vector<double> out(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) out[i] = g[i].real();
  return out;
}

long count_le(std::span<const double> v, double mu) {
  return std::count_if(v.begin(), v.end(), [mu](double x) { return x <= mu; });
}

}  // namespace

int auto_n_max(int d, double L, double mu, const FourierPotential& V) {
  (void)d;
  // Occupied levels stay below 0.8x the cutoff, and the cutoff sits far
  // enough above mu (in units of the sup bound of V) that the neglected
  // couplings are negligible.
  double v_sup = 0.0;
  for (const auto& kv : V.coeffs()) v_sup += std::abs(kv.second);
  const double mu0 = std::max(mu, 0.0);
  const double energy = std::max(mu0 / 0.8, mu0 + 8.0 * v_sup);
  const double shell = L * std::sqrt(energy) / kTwoPi;
  return std::max(1, static_cast<int>(std::ceil(shell)) + V.support_radius() + 2);
}

int density_grid_points(int n_max, int n_v) {
  return std::max(4 * (2 * n_v + 1), 2 * n_max + n_v + 1);
}

DensityGrid density_of(const Basis& basis, const Eigen::MatrixXcd& occupied, long occupied_free,
                       int q, int M) {
  DensityGrid g;
  g.points_per_dim = M;
  const double volume = std::pow(basis.L, basis.d);
  g.cell_volume = volume / std::pow(static_cast<double>(M), basis.d);
  std::size_t total = 1;
  for (int i = 0; i < basis.d; ++i) total *= static_cast<std::size_t>(M);
  g.values.assign(total, -q * static_cast<double>(occupied_free) / volume);
  for (Eigen::Index c = 0; c < occupied.cols(); ++c) {
    std::vector<cplx> coeffs(occupied.col(c).data(), occupied.col(c).data() + occupied.rows());
    const auto psi = to_grid(std::move(coeffs), basis.d, basis.n_max, M);
    for (std::size_t i = 0; i < total; ++i) g.values[i] += q * std::norm(psi[i]) / volume;
  }
  return g;
}

SpectralOutcome relative_energy(const FourierPotential& V, const physcore::PhysicsParams& params,
                                RunOptions opt) {
  check_compatible(V, params);
  const int d = params.d();
  const double mu = params.mu();
  const double L = V.L();
  const int n_max = opt.n_max > 0 ? opt.n_max : auto_n_max(d, L, mu, V);
  const BoxSpec box{d, L, n_max};
  const Basis basis(box);
  if (V.support_radius() > n_max) throw CutoffError("potential support exceeds the plane-wave cutoff");
  if (mu >= 0.8 * box.cutoff_energy())
    throw CutoffError("Fermi level " + std::to_string(mu) + " is not below 0.8x the cutoff energy " +
                      std::to_string(box.cutoff_energy()));

  const bool need_vectors = opt.want_vectors || opt.want_density;
  Spectrum sp = diagonalize(basis, V, need_vectors);

  SpectralOutcome out;
  out.d = d;
  out.L = L;
  out.n_max = n_max;
  out.eigenvalues = sp.values;
  out.occupied_perturbed = count_le(sp.values, mu);
  out.occupied_free = count_le(basis.p2, mu);

  double gap = std::numeric_limits<double>::infinity();
  for (double l : sp.values) gap = std::min(gap, std::abs(l - mu));
  for (double p : basis.p2) gap = std::min(gap, std::abs(p - mu));
  out.fermi_gap = gap;
  out.degenerate = gap < opt.degeneracy_tol;
  if (out.degenerate && opt.strict)
    {
    char buf[128];
    std::snprintf(buf, sizeof buf, "a level sits %.3g from the Fermi level (tolerance %.3g)", gap,
                  opt.degeneracy_tol);
    throw DegeneracyError(buf);
  }

  const double volume = std::pow(L, d);
  const int q = params.q();
  const double free_sum = neg_riesz_sum(basis.p2, mu);
  const double pert_sum = neg_riesz_sum(sp.values, mu);
  out.rho0_used = physcore::rho0(params);
  out.box_density = q * static_cast<double>(out.occupied_free) / volume;
  out.relative_energy = q * (free_sum - pert_sum) - out.rho0_used * volume * V.c0();
  out.relative_energy_box = q * (free_sum - pert_sum - static_cast<double>(out.occupied_free) * V.c0());

  // Semiclassical comparison on a fine grid (reporting only).
  {
    const int n_v = V.support_radius();
    const int cap = d == 1 ? 4096 : (d == 2 ? 256 : 48);
    const int M = std::clamp(8 * (2 * n_v + 1), 32, cap);
    const BoxSpec vbox{d, L, std::max(n_v, 1)};
    const Basis vb(BoxSpec{d, L, vbox.n_max});
    const auto values = potential_on_grid(vb, V, M);
    const std::vector<double> w(values.size(), volume / static_cast<double>(values.size()));
    out.sc_rhs = 0.0 - physcore::l_sc(params) * physcore::sc_potential_functional(values, w, params);
  }

  if (need_vectors) {
    const Eigen::MatrixXcd occ = sp.vectors.leftCols(out.occupied_perturbed);
    double shell = 0.0;
    for (Eigen::Index c = 0; c < occ.cols(); ++c) {
      double w = 0.0;
      for (std::size_t i = 0; i < basis.size(); ++i) {
        bool outer = false;
        for (int a = 0; a < d; ++a) outer = outer || std::abs(basis.n[i][a]) == n_max;
        if (outer) w += std::norm(occ(static_cast<Eigen::Index>(i), c));
      }
      shell = std::max(shell, w);
    }
    out.outer_shell_weight = shell;
    if (shell > 1e-6)
      throw CutoffError("occupied states carry weight " + std::to_string(shell) +
                        " on the cutoff shell");
    if (opt.want_density) {
      const int M = density_grid_points(n_max, V.support_radius());
      out.density = density_of(basis, occ, out.occupied_free, q, M);
    }
    if (opt.want_vectors) out.vectors = std::move(sp.vectors);
  }
  return out;
}

double box_energy_at(std::span<const double> eigs, std::span<const double> free_p2, double c0,
                     int q, double lambda) {
  double free_sum = 0.0, pert_sum = 0.0;
  long n0 = 0;
  for (double p : free_p2)
    if (p <= lambda) {
      free_sum += lambda - p;
      ++n0;
    }
  for (double l : eigs)
    if (l < lambda) pert_sum += lambda - l;
  return q * (free_sum - pert_sum - static_cast<double>(n0) * c0);
}

TraceRelation trace_relation_check(const FourierPotential& V, const physcore::PhysicsParams& params,
                                   RunOptions opt) {
  opt.want_vectors = true;
  opt.want_density = true;
  const auto run = relative_energy(V, params, opt);
  const Basis basis(BoxSpec{run.d, run.L, run.n_max});
  const double mu = params.mu();
  const int q = params.q();
  const double c0 = V.c0();

  TraceRelation tr;
  double lhs = 0.0;
  for (long i = 0; i < run.occupied_perturbed; ++i) lhs += run.eigenvalues[i] - mu;
  double kin = 0.0;
  for (long i = 0; i < run.occupied_perturbed; ++i)
    for (std::size_t n = 0; n < basis.size(); ++n)
      kin += std::norm(run.vectors(static_cast<Eigen::Index>(n), i)) * (basis.p2[n] - mu);
  for (std::size_t n = 0; n < basis.size(); ++n)
    if (basis.p2[n] <= mu) {
      lhs -= basis.p2[n] - mu + c0;
      kin -= basis.p2[n] - mu;
    }
  tr.lhs = q * lhs;
  tr.kinetic = q * kin;

  const auto& g = *run.density;
  const auto v = potential_on_grid(basis, V, g.points_per_dim);
  double pot = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) pot += v[i] * g.values[i];
  tr.potential = pot * g.cell_volume;
  tr.deviation = std::abs(tr.lhs - tr.kinetic - tr.potential);
  return tr;
}

Eigen::MatrixXcd projection_difference(const Basis& basis, const Eigen::MatrixXcd& vectors,
                                       long occupied_perturbed, double mu) {
  const Eigen::MatrixXcd occ = vectors.leftCols(occupied_perturbed);
  Eigen::MatrixXcd Q = occ * occ.adjoint();
  for (std::size_t n = 0; n < basis.size(); ++n)
    if (basis.p2[n] <= mu) Q(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)) -= 1.0;
  return Q;
}

double relative_kinetic(const Basis& basis, const Eigen::MatrixXcd& Q, double mu, double tol) {
  const auto size = static_cast<Eigen::Index>(basis.size());
  if (Q.rows() != size || Q.cols() != size) throw ConfigError("Q does not match the basis");
  Eigen::MatrixXcd gamma = Q;
  for (Eigen::Index n = 0; n < size; ++n)
    if (basis.p2[n] <= mu) gamma(n, n) += 1.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gamma, Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues().minCoeff(), hi = es.eigenvalues().maxCoeff();
  if (lo < -tol || hi > 1.0 + tol)
    throw ConfigError("Q violates -Pi^- <= Q <= Pi^+ (spectrum of Q + Pi^- in [" +
                      std::to_string(lo) + ", " + std::to_string(hi) + "])");
  double out = 0.0;
  for (Eigen::Index n = 0; n < size; ++n) {
    const double w = std::abs(basis.p2[n] - mu);
    out += (basis.p2[n] > mu ? w : -w) * Q(n, n).real();
  }
  return out;
}

// ---- positive temperature ---------------------------------------------------

double fd_f(double x, double mu, double T) {
  const double y = (x - mu) / T;
  if (y > 0.0) return -T * std::log1p(std::exp(-y));
  return (x - mu) - T * std::log1p(std::exp(y));
}

double fd_occupation(double x, double mu, double T) {
  const double y = (x - mu) / T;
  if (y > 0.0) {
    const double e = std::exp(-y);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(y));
}

double fd_curvature(double x, double mu, double T) {
  const double e = std::exp(-std::abs(x - mu) / T);
  return -e / (T * (1.0 + e) * (1.0 + e));
}

TemperatureResult free_energy_T(const FourierPotential& V, const physcore::PhysicsParams& params,
                                double T, RunOptions opt) {
  if (!(T > 0.0) || !std::isfinite(T)) throw ConfigError("temperature must be > 0");
  check_compatible(V, params);
  const double mu = params.mu();
  const double window = 40.0 * T;
  if (opt.n_max == 0) opt.n_max = auto_n_max(params.d(), V.L(), mu + window, V);
  opt.want_vectors = false;
  opt.want_density = false;
  // Level sums need the whole window below the cutoff, not just mu.
  const auto run = relative_energy(V, params.with_mu(std::max(mu + window, 0.0)), opt);
  const Basis basis(BoxSpec{run.d, run.L, run.n_max});
  const int q = params.q();
  const double c0 = V.c0();

  TemperatureResult r;
  double direct = 0.0;
  for (double l : run.eigenvalues) direct += fd_f(l, mu, T);
  for (double p : basis.p2) direct -= fd_f(p, mu, T) + c0 * fd_occupation(p, mu, T);
  r.direct = q * direct;

  const double a = mu - window, b = mu + window;
  std::vector<double> cuts;
  for (double l : run.eigenvalues)
    if (l > a && l < b) cuts.push_back(l);
  for (double p : basis.p2)
    if (p > a && p < b) cuts.push_back(p);
  auto integrand = [&](double lambda) {
    return -fd_curvature(lambda, mu, T) * box_energy_at(run.eigenvalues, basis.p2, c0, q, lambda);
  };
  const auto res = quad::adaptive(integrand, a, b, cuts, {1e-14, 1e-13, 20000});
  r.lambda_quad = res.value;
  r.quad_error = res.abs_error;
  return r;
}

// ---- second order -------------------------------------------------------------

double second_order_box(const FourierPotential& V, const physcore::PhysicsParams& params) {
  check_compatible(V, params);
  const int d = params.d();
  const double mu = params.mu();
  const double L = V.L();
  const double unit = (kTwoPi / L) * (kTwoPi / L);
  const int R = static_cast<int>(std::floor(std::sqrt(std::max(mu, 0.0) / unit))) + 1;
  const int r1 = d >= 2 ? R : 0, r2 = d >= 3 ? R : 0;

  std::vector<std::pair<Index, double>> support;
  for (const auto& [m, c] : V.coeffs())
    if (m != Index{0, 0, 0}) support.emplace_back(m, std::norm(c));

  const double tie = 1e-10 * std::max(1.0, mu);
  double sum = 0.0;
  for (int a = -R; a <= R; ++a)
    for (int b = -r1; b <= r1; ++b)
      for (int c = -r2; c <= r2; ++c) {
        const double p2 = unit * static_cast<double>(long(a) * a + long(b) * b + long(c) * c);
        if (std::abs(p2 - mu) < tie)
          throw DegeneracyError("a lattice momentum lies on the Fermi sphere");
        if (p2 > mu) continue;
        for (const auto& [m, w] : support) {
          const long x = a + m[0], y = b + m[1], z = c + m[2];
          const double q2 = unit * static_cast<double>(x * x + y * y + z * z);
          if (q2 > mu) sum += w / (q2 - p2);
        }
      }
  return -params.q() * sum;
}

}  // namespace ltlab::boxsim
