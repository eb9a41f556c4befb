#include <cmath>
#include <cstdlib>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Eigenvalues>

#include "doctest.h"
#include "ltlab/boxsim.hpp"
#include "ltlab/errors.hpp"
#include "ltlab/physcore.hpp"
#include "ltlab/response.hpp"

using namespace ltlab::boxsim;
using ltlab::physcore::PhysicsParams;
using std::numbers::pi;

namespace {

// Real-space finite differences on a periodic grid: an oracle that shares
// nothing with the plane-wave code except the potential's point values.
double fd_relative_energy(const FourierPotential& V, double mu, int N) {
  const double L = V.L(), h = L / N;
  auto sum_below = [&](bool with_v) {
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(N, N);
    for (int j = 0; j < N; ++j) {
      const double x = -0.5 * L + j * h;
      H(j, j) = 2.0 / (h * h) + (with_v ? V.value_at(std::span<const double>(&x, 1)) : 0.0);
      H(j, (j + 1) % N) = H((j + 1) % N, j) = -1.0 / (h * h);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H, Eigen::EigenvaluesOnly);
    double s = 0.0;
    for (int i = 0; i < N; ++i) s += std::max(mu - es.eigenvalues()(i), 0.0);
    return s;
  };
  return sum_below(false) - sum_below(true);
}

FourierPotential random_potential(int d, double L, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-0.15, 0.15);
  FourierPotential V(d, L);
  for (int i = 0; i < 4; ++i) {
    Index n{0, 0, 0};
    for (int a = 0; a < d; ++a) n[a] = static_cast<int>(rng() % 5) - 2;
    if (n == Index{0, 0, 0}) continue;
    V.set_mode(n, {u(rng), u(rng)});
  }
  return V;
}

}  // namespace

TEST_CASE("Hermitian completion and point values") {
  FourierPotential V(2, 5.0);
  V.set_mode({1, -2, 0}, {0.3, 0.4});
  CHECK(V.coeff({-1, 2, 0}) == cplx(0.3, -0.4));
  CHECK_FALSE(V.is_real());
  CHECK(V.support_radius() == 2);
  CHECK_THROWS_AS(V.set_mode({0, 0, 0}, {0.1, 0.2}), ltlab::ConfigError);
  CHECK_THROWS_AS(V.set_mode({0, 0, 1}, {0.1, 0.0}), ltlab::ConfigError);
  const double x[2] = {0.7, -1.1};
  const double arg = 2 * pi * (0.7 - 2 * -1.1) / 5.0;
  CHECK(V.value_at(x) == doctest::Approx(2 * (0.3 * std::cos(arg) - 0.4 * std::sin(arg))));
}

TEST_CASE("Parseval: l2 norm against a real-space Riemann sum") {
  std::mt19937_64 rng(3);
  const auto V = random_potential(2, 6.0, rng);
  const int M = 32;  // exact for trigonometric polynomials of low degree
  const double h = 6.0 / M;
  double s = 0.0;
  for (int i = 0; i < M; ++i)
    for (int j = 0; j < M; ++j) {
      const double x[2] = {-3 + i * h, -3 + j * h};
      s += std::pow(V.value_at(x), 2) * h * h;
    }
  CHECK(V.l2_norm_squared() == doctest::Approx(s).epsilon(1e-12));
}

TEST_CASE("Gaussian bump coefficients against direct integration") {
  const double L = 12.0, a = 0.8, sigma = 1.1;
  const auto V = gaussian_bump(1, L, a, sigma);
  for (int n : {0, 1, 3}) {
    // (1/L) int_{C_L} V_per(x) e^{-i k_n x} dx, images summed explicitly
    const int N = 4000;
    double re = 0.0;
    for (int j = 0; j < N; ++j) {
      const double x = -0.5 * L + (j + 0.5) * L / N;
      double v = 0.0;
      for (int img = -3; img <= 3; ++img) v += a * std::exp(-std::pow(x + img * L, 2) / (2 * sigma * sigma));
      re += v * std::cos(2 * pi * n * x / L) / N;
    }
    CHECK(V.coeff({n, 0, 0}).real() == doctest::Approx(re).epsilon(1e-10));
  }
}

TEST_CASE("V = 0 gives the free spectrum and zero energy") {
  for (int d : {1, 2, 3}) {
    const FourierPotential V(d, 4.3);
    const auto r = relative_energy(V, {d, 2, 1.7});
    CHECK(r.relative_energy == 0.0);
    CHECK(r.occupied_free == r.occupied_perturbed);
    Basis b(BoxSpec{d, 4.3, r.n_max});
    auto p2 = b.p2;
    std::sort(p2.begin(), p2.end());
    for (std::size_t i = 0; i < p2.size(); ++i) CHECK(r.eigenvalues[i] == doctest::Approx(p2[i]).epsilon(1e-12));
  }
}

TEST_CASE("relative energy agrees with a finite-difference oracle") {
  const auto V = cosine_mode(1, 20.0, {3, 0, 0}, 0.3);
  const double e = relative_energy(V, {1, 1, 1.0}).relative_energy;
  const double fd = fd_relative_energy(V, 1.0, 800);
  CHECK(e < 0.0);
  CHECK(e == doctest::Approx(fd).epsilon(2e-3));
  // refining the grid moves the oracle toward the spectral value
  CHECK(std::abs(fd_relative_energy(V, 1.0, 1200) - e) < std::abs(fd - e));
}

TEST_CASE("sign, trace relation and density normalisation on random boxes") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 8; ++i) {
    const int d = 1 + i % 2;
    const double L = d == 1 ? 9.0 + i : 5.0 + 0.3 * i;
    const auto V = random_potential(d, L, rng);
    const PhysicsParams p(d, 1 + i % 2, 1.0 + 0.1 * i);
    RunOptions opt;
    opt.want_density = true;
    const auto r = relative_energy(V, p, opt);
    CHECK(r.relative_energy <= 1e-9);
    CHECK(r.relative_energy_box <= 1e-9);
    double n = 0.0;
    for (double v : r.density->values) n += v * r.density->cell_volume;
    CHECK(n == doctest::Approx(double(p.q()) * (r.occupied_perturbed - r.occupied_free)).scale(1.0).epsilon(1e-9));
    const auto tr = trace_relation_check(V, p);
    CHECK(tr.deviation <= 1e-9);
  }
}

TEST_CASE("relative kinetic energy of Q_V equals the momentum-space trace") {
  const auto V = cosine_mode(2, 6.0, {1, 1, 0}, 0.4);
  const PhysicsParams p(2, 1, 1.2);
  RunOptions opt;
  opt.want_vectors = true;
  const auto r = relative_energy(V, p, opt);
  const Basis b(BoxSpec{2, 6.0, r.n_max});
  const auto Q = projection_difference(b, r.vectors, r.occupied_perturbed, p.mu());
  const double kin = relative_kinetic(b, Q, p.mu());
  CHECK(kin >= 0.0);
  CHECK(kin == doctest::Approx(trace_relation_check(V, p).kinetic).epsilon(1e-9));
  // Q^2 <= Q^{++} - Q^{--} for a difference of projections: spectrum in [-1, 1]
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(Q, Eigen::EigenvaluesOnly);
  CHECK(es.eigenvalues().minCoeff() >= -1 - 1e-12);
  CHECK(es.eigenvalues().maxCoeff() <= 1 + 1e-12);
}

TEST_CASE("half-shell boxes reproduce the free density exactly") {
  for (double m : {2.5, 7.5, 20.5}) {
    const double L = half_shell_L(m, 1.0);
    const auto r = relative_energy(FourierPotential(1, L), {1, 1, 1.0});
    CHECK(r.box_density == doctest::Approx(ltlab::physcore::rho0({1, 1, 1.0})).epsilon(1e-14));
    CHECK(r.fermi_gap > 0.5 / m);
  }
}

TEST_CASE("second order: brute-force pair sum and small-coupling limit") {
  const double L = 15.0;
  FourierPotential V(1, L);
  V.set_mode({2, 0, 0}, {0.05, 0.0});
  V.set_mode({5, 0, 0}, {0.0, -0.03});
  const PhysicsParams p(1, 2, 1.0);
  // every occupied/empty pair connected by the potential
  double brute = 0.0;
  const int occ = static_cast<int>(std::floor(L / (2 * pi)));
  for (int n = -occ; n <= occ; ++n)
    for (int m = n - 5; m <= n + 5; ++m) {
      if (std::abs(m) <= occ) continue;
      const double pn = 2 * pi * n / L, pm = 2 * pi * m / L;
      brute -= 2 * std::norm(V.coeff({m - n, 0, 0})) / (pm * pm - pn * pn);
    }
  const double so = second_order_box(V, p);
  CHECK(so == doctest::Approx(brute).epsilon(1e-13));
  const double t = 1e-3;
  CHECK(relative_energy(V.scaled(t), p).relative_energy / (t * t) == doctest::Approx(so).epsilon(1e-3));
}

TEST_CASE("cutoff and degeneracy guards") {
  const auto V = cosine_mode(1, 20.0, {3, 0, 0}, 0.3);
  RunOptions opt;
  opt.n_max = 3;  // holds the potential but not the Fermi sea plus margin
  CHECK_THROWS_AS(relative_energy(V, {1, 1, 1.0}, opt), ltlab::CutoffError);
  opt.n_max = 2;  // below the potential's own support
  CHECK_THROWS_AS(relative_energy(V, {1, 1, 1.0}, opt), ltlab::CutoffError);

  const FourierPotential zero(1, 2 * pi);  // p^2 = 1 is a free level
  const auto r = relative_energy(zero, {1, 1, 1.0});
  CHECK(r.degenerate);
  RunOptions strict;
  strict.strict = true;
  CHECK_THROWS_AS(relative_energy(zero, {1, 1, 1.0}, strict), ltlab::DegeneracyError);
  CHECK_THROWS_AS(second_order_box(cosine_mode(1, 2 * pi, {1, 0, 0}, 0.1), {1, 1, 1.0}), ltlab::DegeneracyError);
}

TEST_CASE("basis cap honours LTLAB_BUDGET") {
  setenv("LTLAB_BUDGET", "50", 1);
  CHECK(basis_cap() == 50);
  CHECK_THROWS_AS(BoxSpec({2, 5.0, 4}).validate(), ltlab::ResourceError);
  unsetenv("LTLAB_BUDGET");
  CHECK(basis_cap() == 4096);
  CHECK_NOTHROW(BoxSpec({2, 5.0, 4}).validate());
}

TEST_CASE("cutoff doubling leaves the energy unchanged") {
  std::mt19937_64 rng(9);
  for (int d : {1, 2}) {
    const auto V = random_potential(d, d == 1 ? 13.0 : 5.5, rng);
    const PhysicsParams p(d, 1, 1.1);
    const auto a = relative_energy(V, p);
    RunOptions opt;
    opt.n_max = 2 * a.n_max;
    if (BoxSpec{d, V.L(), opt.n_max}.basis_size() > basis_cap()) continue;
    CHECK(std::abs(relative_energy(V, p, opt).relative_energy - a.relative_energy) <= 1e-8);
  }
}

TEST_CASE("Fermi-Dirac helpers") {
  const double mu = 1.0, T = 0.07;
  for (double x : {0.2, 0.95, 1.0, 1.3, 4.0}) {
    const double direct = -T * std::log1p(std::exp(-(x - mu) / T));
    CHECK(fd_f(x, mu, T) == doctest::Approx(direct).epsilon(1e-13));
    const double h = 1e-5;
    CHECK(fd_occupation(x, mu, T) == doctest::Approx((fd_f(x + h, mu, T) - fd_f(x - h, mu, T)) / (2 * h)).epsilon(1e-7));
    CHECK(fd_curvature(x, mu, T) ==
          doctest::Approx((fd_occupation(x + h, mu, T) - fd_occupation(x - h, mu, T)) / (2 * h)).epsilon(1e-6));
    CHECK(fd_curvature(x, mu, T) <= 0.0);
  }
  CHECK(std::isfinite(fd_f(-1e4, 0.0, 1e-4)));  // no overflow far below the Fermi level
}

TEST_CASE("free energy at temperature") {
  const auto V = cosine_mode(1, half_shell_L(6.5, 1.0), {4, 0, 0}, 0.25);
  const PhysicsParams p(1, 1, 1.0);
  const double e0 = relative_energy(V, p).relative_energy;
  for (double T : {1e-4, 0.03, 0.3}) {
    const auto f = free_energy_T(V, p, T);
    CHECK(f.direct == doctest::Approx(f.lambda_quad).epsilon(1e-10).scale(1.0));
    CHECK(f.direct <= 1e-12);
    if (T == 1e-4) CHECK(f.direct == doctest::Approx(e0).epsilon(1e-6).scale(1.0));
  }
}

TEST_CASE("continuum second-order integral: analytic d = 2 value") {
  // Psi_2 = 1/(8 pi) on [0, 2] and the transform's mass beyond |k| = 2 is
  // O(e^{-36}), so the integral is -(1/(8 pi)) int |Vhat|^2 = -a^2 sigma^2 / 8.
  const double a = 0.5, sigma = 3.0;
  const double val = continuum_second_order_gaussian(a, sigma, {2, 1, 1.0});
  CHECK(val == doctest::Approx(-a * a * sigma * sigma / 8).epsilon(1e-9));
}

TEST_CASE("Li-Yau trace identity and bound on a small box") {
  const double lo[1] = {0.3}, w[1] = {1.0};
  const auto r = li_yau_check(BoxSpec{1, 30.0, 30}, lo, w, {1, 1, 1.0});
  CHECK(r.identity_deviation <= 1e-10);
  CHECK(r.lhs >= r.hole_part);
  CHECK(r.lhs >= 0.95 * r.rhs_continuum);
}
