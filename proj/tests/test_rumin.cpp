#include <cmath>
#include <cstdlib>
#include <numbers>
#include <random>

#include "doctest.h"
#include "ltlab/errors.hpp"
#include "ltlab/physcore.hpp"
#include "ltlab/rumin.hpp"

using namespace ltlab::rumin;
using std::numbers::pi;

namespace {
// plain triple loop, no pruning
std::uint64_t brute_ball(double R, int d) {
  const int m = static_cast<int>(std::floor(R)) + 1;
  std::uint64_t n = 0;
  for (int a = -m; a <= m; ++a)
    for (int b = (d > 1 ? -m : 0); b <= (d > 1 ? m : 0); ++b)
      for (int c = (d > 2 ? -m : 0); c <= (d > 2 ? m : 0); ++c)
        if (double(a) * a + double(b) * b + double(c) * c <= R * R) ++n;
  return n;
}

// Simpson on e in [0, e_max] straight from the definition of R_d.
double rumin_simpson(double rho, int d, double e_max, int n) {
  auto g = [&](double e) {
    const double gap = std::sqrt(rho) - std::sqrt(f_continuum(e, d));
    return gap > 0 ? gap * gap : 0.0;
  };
  const double h = e_max / n;
  double s = g(0) + g(e_max);
  for (int i = 1; i < n; ++i) s += g(i * h) * (i % 2 ? 4 : 2);
  return s * h / 3;
}
}  // namespace

TEST_CASE("layer-cake density and f_continuum") {
  CHECK(layer_cake_rho0(1) == doctest::Approx(1 / pi));
  CHECK(layer_cake_rho0(3) == doctest::Approx(ltlab::physcore::rho0({3, 1, 1.0})));
  // d = 1: (1/pi)(sqrt(1+e) - sqrt(1-e))
  CHECK(f_continuum(0.36, 1) == doctest::Approx((std::sqrt(1.36) - 0.8) / pi).epsilon(1e-14));
  CHECK(f_continuum(3.0, 2) == doctest::Approx(4.0 / (4 * pi)).epsilon(1e-14));
  CHECK(f_continuum(0.0, 2) == 0.0);
}

TEST_CASE("R_d against a direct Simpson rule") {
  for (int d = 1; d <= 3; ++d)
    for (double rho : {0.01, 0.2, 3.0}) {
      // support ends where f(e) = rho; f grows like e^{d/2}
      double e_max = 1.0;
      while (f_continuum(e_max, d) < rho) e_max *= 2;
      CHECK(rumin_R(rho, d) == doctest::Approx(rumin_simpson(rho, d, e_max, 200000)).epsilon(1e-6));
    }
  CHECK(rumin_R(0.0, 2) == 0.0);
  CHECK_THROWS_AS(rumin_R(-1.0, 2), ltlab::ConfigError);
}

TEST_CASE("R_d asymptotic coefficients") {
  CHECK(rumin_small_coefficient(3) == doctest::Approx(std::pow(2 * pi, 3) / (24 * pi)));
  for (int d = 1; d <= 3; ++d) {
    CHECK(rumin_R(1e-6, d) / 1e-12 == doctest::Approx(rumin_small_coefficient(d)).epsilon(1e-3));
    CHECK(rumin_R(1e8, d) / std::pow(1e8, 1 + 2.0 / d) == doctest::Approx(rumin_large_coefficient(d)).epsilon(1e-3));
  }
}

TEST_CASE("khat is positive, below K_sc, and grid-stable") {
  for (int d = 1; d <= 3; ++d) {
    KhatOptions a, b;
    a.grid_points = 200;
    b.grid_points = 400;
    const auto pa = khat(d, a), pb = khat(d, b);
    CHECK(pa.khat > 0.0);
    CHECK(pa.khat <= ltlab::physcore::k_sc({d, 1, 1.0}));
    CHECK(pa.khat == doctest::Approx(pb.khat).epsilon(1e-3));
    // the minimiser really is a minimum of the sampled ratio
    for (std::size_t i = 0; i < pb.rho_grid.size(); ++i)
      CHECK(pb.r_values[i] / delta_T_unit(pb.rho_grid[i], d) >= pb.khat * (1 - 1e-9));
  }
}

TEST_CASE("lattice ball counts agree with brute force") {
  CHECK(lattice_count_ball(10.0, 2) == 317);  // Gauss circle problem, N(10)
  CHECK(lattice_count_ball(0.0, 3) == 1);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 12.0);
  for (int i = 0; i < 30; ++i) {
    const int d = 1 + i % 3;
    const double R = u(rng);
    CHECK(lattice_count_ball(R, d) == brute_ball(R, d));
  }
  // integer radii sit exactly on lattice shells
  for (int R = 1; R <= 6; ++R) CHECK(lattice_count_ball(R, 3) == brute_ball(R, 3));
  CHECK(count_lattice_norm(2, 25.0, true) == brute_ball(5.0, 2) - 12);  // 12 points with |n|^2 = 25
}

TEST_CASE("enumeration budget is enforced") {
  setenv("LTLAB_BUDGET", "10", 1);
  CHECK(enumeration_budget() == 10);
  CHECK_THROWS_AS(lattice_count_ball(20.0, 3), ltlab::ResourceError);
  CHECK(lattice_count_ball(20.0, 1) == 41);
  unsetenv("LTLAB_BUDGET");
  CHECK(enumeration_budget() == 1'000'000'000ULL);
}

TEST_CASE("f_lattice approaches the continuum shell") {
  const double cont = shell_volume_continuum(0.5, 2, 1.0);
  CHECK(cont == doctest::Approx(1.0 / (4 * pi)));
  double prev_err = 1e9;
  for (double L : {50.0, 200.0}) {
    const double err = std::abs(f_lattice(0.5, 2, 1.0, L).density / cont - 1);
    CHECK(err < prev_err);
    prev_err = err;
  }
  CHECK(prev_err < 0.02);
  // count never exceeds a constant multiple of the bound shape
  for (double L : {10.0, 40.0, 160.0})
    CHECK(f_lattice(0.5, 2, 1.0, L).density <= 5 * f_lattice_bound_shape(0.5, 2, 1.0, L));
}
