#include <array>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "ltlab/errors.hpp"
#include "ltlab/physcore.hpp"
#include "ltlab/quadrature.hpp"
#include "ltlab/response.hpp"

using namespace ltlab::response;
using std::numbers::pi;

namespace {
double value(const ResponseValue& v) {
  REQUIRE(std::holds_alternative<ResponseSample>(v));
  return std::get<ResponseSample>(v).value;
}
}  // namespace

TEST_CASE("phi1 against high-precision reference values") {
  // 30-digit quadrature of the defining integral
  const double ref[][2] = {{0.5, 1.5962422221317835}, {1.0, 1.685750354812596}, {1.5, 1.9109897807518292},
                           {3.0, 1.206444996991059},  {4.0, 0.84287517740629801}};
  for (const auto& r : ref) {
    CHECK(value(phi1(r[0])) == doctest::Approx(r[1]).epsilon(1e-9));
    CHECK(phi1_tanh_sinh(r[0]).value == doctest::Approx(r[1]).epsilon(1e-9));
  }
  CHECK(is_divergent(phi1(2.0)));
  CHECK_THROWS_AS(phi1(-0.1), ltlab::ConfigError);
}

TEST_CASE("phi_d against high-precision reference values") {
  CHECK(phi_d(0.5, 2).value == doctest::Approx(pi * pi / 2).epsilon(1e-7));
  CHECK(phi_d(1.0, 2).value == doctest::Approx(pi * pi / 2).epsilon(1e-7));
  CHECK(phi_d(3.0, 2).value == doctest::Approx(2.29250704392394).epsilon(1e-7));
  CHECK(phi_d(0.5, 3).value == doctest::Approx(9.71353591708953).epsilon(1e-7));
  CHECK(phi_d(1.0, 3).value == doctest::Approx(9.22033699256278).epsilon(1e-7));
  CHECK(phi_d(3.0, 3).value == doctest::Approx(3.51292677280108).epsilon(1e-7));
  CHECK(phi3_closed(1.0).value == doctest::Approx(9.22033699256278).epsilon(1e-9));
}

TEST_CASE("phi_3 maximum and monotonicity") {
  CHECK(std::abs(phi_d(0.0, 3).value - pi * pi) < 1e-6);
  double prev = phi_d(0.0, 3).value;
  for (int i = 1; i < 40; ++i) {
    const double v = phi_d(4.0 * i / 39, 3).value;
    CHECK(v < prev);
    prev = v;
  }
}

TEST_CASE("phi_d recursion onto phi_3 and the maximum formula, d >= 4") {
  for (int d : {4, 5}) {
    CHECK(phi_d(0.0, d).value == doctest::Approx(phi_d_max(d)).epsilon(1e-6));
    for (double k : {0.5, 1.0, 1.7})
      CHECK(phi_d_from_phi3(k, d).value == doctest::Approx(phi_d(k, d).value).epsilon(1e-6));
  }
  // |S^0| int sqrt(1-r^2) dr = pi/2
  CHECK(phi_d_max(4) == doctest::Approx(pi * pi * pi / 2).epsilon(1e-10));
}

TEST_CASE("phi_d is bounded on [0, 10]") {
  for (int d : {2, 3, 4}) {
    double mx = 0.0;
    for (int i = 0; i <= 50; ++i) mx = std::max(mx, phi_d(0.2 * i, d).value);
    CHECK(std::isfinite(mx));
    CHECK(mx <= phi_d(0.0, d).value * (1 + 1e-9));
  }
}

TEST_CASE("phi_d error estimate is honest under tolerance halving") {
  for (double k : {0.7, 2.5}) {
    const auto a = phi_d(k, 3, 1e-8), b = phi_d(k, 3, 5e-9);
    CHECK(std::abs(a.value - b.value) <= 10 * a.abs_error + 1e-12);
  }
}

TEST_CASE("psi closed forms against the radial quadrature") {
  for (double k : {0.0, 0.3, 1.0, 1.9, 2.5, 4.0}) {
    CHECK(psi_d(k, 2).value == doctest::Approx(psi2(k).value).epsilon(1e-8));
    CHECK(psi_d(k, 3).value == doctest::Approx(psi3(k).value).epsilon(1e-8));
    CHECK(psi_d_recursion(k, 3).value == doctest::Approx(psi3(k).value).epsilon(1e-8));
  }
  CHECK(psi3(0.0).value == doctest::Approx(1 / (8 * pi * pi)).epsilon(1e-14));
  CHECK(psi2(1.0).value == doctest::Approx(1 / (8 * pi)).epsilon(1e-14));
  CHECK(value(psi1(0.0)) == doctest::Approx(1 / (4 * pi)).epsilon(1e-14));
  CHECK(is_divergent(psi1(2.0)));
}

TEST_CASE("psi_d at zero matches the kinetic constant") {
  for (int d = 2; d <= 5; ++d) {
    const double l = ltlab::physcore::l_sc({d, 1, 1.0});
    CHECK(psi_d_at_zero(d) * 8.0 / (d * (d + 2)) == doctest::Approx(l).epsilon(1e-6));
    CHECK(psi_d(0.0, d).value == doctest::Approx(psi_d_at_zero(d)).epsilon(1e-6));
  }
}

TEST_CASE("psi_1 logarithmic growth at 2") {
  for (double eps : {1e-4, 1e-6}) {
    const double fit = std::log(4 / eps) / (8 * pi);
    CHECK(value(psi1(2 + eps)) / fit == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(value(psi1(2 - eps)) / fit == doctest::Approx(1.0).epsilon(1e-3));
  }
}

TEST_CASE("psi_d is decreasing and positive") {
  for (int d : {1, 2, 3}) {
    double prev = 1e300;
    // Psi_1 grows into its log singularity, so only its tail is monotone
    for (double k = d == 1 ? 2.3 : 0.05; k < 6; k += 0.25) {
      const double v = value(psi(k, d));
      CHECK(v > 0.0);
      CHECK(v <= prev * (1 + 1e-8));
      prev = v;
    }
  }
}

TEST_CASE("second-order kernel scaling") {
  const ltlab::physcore::PhysicsParams p(3, 2, 2.0);
  const double k = 1.1;
  CHECK(value(second_order_kernel(k, p)) ==
        doctest::Approx(2 * std::pow(2.0, 0.5) * value(psi(k / std::sqrt(2.0), 3))).epsilon(1e-12));
}

TEST_CASE("one-dimensional weights") {
  CHECK(weight_density_1d(0.0, 4.0) == doctest::Approx(2.0));
  CHECK(weight_density_1d(4.0, 4.0) == 0.0);
  CHECK(weight_density_1d(1.3, 2.0) == weight_density_1d(-1.3, 2.0));
  for (double k : {0.4, 1.0, 3.5, 9.0})
    CHECK(weight_density_1d(k, 1.5) * value(weight_potential_1d(k, 1.5)) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(is_divergent(weight_potential_1d(2.0, 1.0)));
}

TEST_CASE("quadrature rules on singular integrands with known values") {
  using namespace ltlab::quad;
  const std::array<double, 1> mid{0.3};
  const auto lg = adaptive([](double x) { return x > 0 ? std::log(x) : 0.0; }, 0.0, 1.0, {}, {1e-14, 1e-13, 4000});
  CHECK(lg.value == doctest::Approx(-1.0).epsilon(1e-11));
  const auto kink = adaptive([](double x) { return std::log(std::abs(x - 0.3)); }, 0.0, 1.0, mid, {1e-14, 1e-13, 4000});
  CHECK(kink.value == doctest::Approx(0.3 * std::log(0.3) + 0.7 * std::log(0.7) - 1.0).epsilon(1e-10));
  // arcsine density: the endpoint form keeps the mass within an ulp of +-1
  EndpointIntegrand arcsine = [](double, double l, double r) { return 1.0 / std::sqrt(l * r); };
  CHECK(tanh_sinh(arcsine, -1.0, 1.0, 1e-14).value == doctest::Approx(pi).epsilon(1e-13));
  CHECK(tanh_sinh([](double x) { return x * x; }, 0.0, 3.0).value == doctest::Approx(9.0).epsilon(1e-13));
}

TEST_CASE("Psi_d recursion: transverse factor") {
  // An extra 1/sqrt(1-r^2) inside the transverse integral would give
  // Psi_3(0) = (2/(2 pi)) (pi/2) / (8 pi) = 1/(16 pi), not 1/(8 pi^2).
  ltlab::quad::EndpointIntegrand g = [](double, double, double to_b) {
    return psi2(0.0).value / std::sqrt(to_b * (2.0 - to_b));  // 1 - r^2 = (1-r)(1+r)
  };
  const double with_factor = 2 / (2 * pi) * ltlab::quad::tanh_sinh(g, 0.0, 1.0, 1e-14).value;
  MESSAGE("Psi_3(0) with the extra factor: " << with_factor << ", implemented: " << psi_d_recursion(0.0, 3).value);
  CHECK(with_factor == doctest::Approx(1 / (16 * pi)).epsilon(1e-10));
  CHECK(psi_d_recursion(0.0, 3).value == doctest::Approx(1 / (8 * pi * pi)).epsilon(1e-9));
}

TEST_CASE("Phi_1 near 2: log slope one half, offset log 16") {
  // mpmath reference Phi_1(2 - 1e-4) = 5.99160...
  CHECK(value(phi1(2 - 1e-4)) == doctest::Approx(5.99160).epsilon(1e-5));
  const double s = (value(phi1(2 - 1e-6)) - value(phi1(2 - 1e-3))) / std::log(1e3);
  CHECK(s == doctest::Approx(0.5).epsilon(0.1));
  for (double eps : {1e-5, 1e-7}) {
    CHECK(value(phi1(2 - eps)) == doctest::Approx(0.5 * std::log(16 / eps)).epsilon(1e-3));
    CHECK(value(phi1(2 + eps)) == doctest::Approx(0.5 * std::log(16 / eps)).epsilon(1e-3));
  }
}
