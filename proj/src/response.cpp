#include "ltlab/response.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "ltlab/errors.hpp"
#include "ltlab/quadrature.hpp"

namespace ltlab::response {

using physcore::sphere_area;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * kPi;

// log((a + k) / |a - k|) for a, k >= 0, a != k, without cancellation near k = 0.
double log_ratio(double a, double k) {
  if (k < a) return std::log1p(2.0 * k / (a - k));
  return std::log1p(2.0 * a / (k - a));
}

void require_dimension(int d, int min_d, const char* what) {
  if (d < min_d)
    throw ConfigError(std::string(what) + " requires d >= " + std::to_string(min_d) +
                      ", got d = " + std::to_string(d));
}

void require_nonnegative(double k, const char* what) {
  if (!(k >= 0.0) || !std::isfinite(k))
    throw ConfigError(std::string(what) + " requires a finite argument >= 0");
}

// int_0^{pi/2} sin^n(theta) d theta.
double wallis(int n) {
  return 0.5 * std::sqrt(kPi) * std::tgamma(0.5 * (n + 1)) / std::tgamma(0.5 * n + 1.0);
}

}  // namespace

const char* to_string(Method m) {
  switch (m) {
    case Method::closed_form: return "closed_form";
    case Method::quadrature: return "quadrature";
    case Method::recursion: return "recursion";
  }
  return "?";
}

const char* to_string(DivergenceKind k) {
  return k == DivergenceKind::log_divergence ? "log_divergence" : "infinite_derivative";
}

// ---------------------------------------------------------------------------

ResponseValue phi1(double x, double abs_tol) {
  require_nonnegative(x, "phi1");
  if (x == 2.0) return DivergenceFlag{2.0, DivergenceKind::log_divergence};

  // v = c - h cos(theta) maps [0, pi] onto [-1, b]; dv / sqrt((v+1)(b-v)) = d theta.
  const double b = std::min(1.0, x - 1.0);
  const double h = 0.5 * (b + 1.0);
  quad::Integrand g;
  if (x < 2.0) {
    // Remaining factor 1 / sqrt((1-v)(x+1-v)), with 1 - v = (2-x) + (b-v).
    g = [=](double t) {
      const double c = std::cos(0.5 * t);
      const double one_minus_v = (2.0 - x) + 2.0 * h * c * c;
      return 1.0 / std::sqrt(one_minus_v * (one_minus_v + x));
    };
  } else {
    // Remaining factor 1 / sqrt((x-1-v)(x+1-v)), with x - 1 - v = (x-2) + (1-v).
    g = [=](double t) {
      const double c = std::cos(0.5 * t);
      const double gap = (x - 2.0) + 2.0 * h * c * c;
      return 1.0 / std::sqrt(gap * (gap + 2.0));
    };
  }
  const auto r = quad::adaptive(g, 0.0, kPi, {}, {abs_tol, 1e-14, 4000});
  return ResponseSample{x, r.value, r.abs_error, Method::quadrature};
}

ResponseSample phi1_tanh_sinh(double x) {
  require_nonnegative(x, "phi1_tanh_sinh");
  if (x == 2.0) throw ConfigError("phi1 diverges at x = 2");
  const double b = std::min(1.0, x - 1.0);
  if (b <= -1.0) return {x, kPi / 2.0, 0.0, Method::quadrature};
  // from_a = 1 + v; to_b = b - v, which is (x - 1) - v when the upper root
  // is the interior one.
  const bool inner_root = b < 1.0;
  quad::EndpointIntegrand f = [=](double v, double from_a, double to_b) {
    const double s1 = (inner_root ? 1.0 - v : to_b) * from_a;
    const double s2 = (inner_root ? to_b : x - v - 1.0) * (x - v + 1.0);
    if (s1 <= 0.0 || s2 <= 0.0) return 0.0;
    return 1.0 / std::sqrt(s1 * s2);
  };
  const auto r = quad::tanh_sinh(f, -1.0, b, 1e-13);
  return {x, r.value, r.abs_error, Method::quadrature};
}

ResponseSample phi_d(double k, int d, double abs_tol) {
  require_dimension(d, 2, "phi_d");
  require_nonnegative(k, "phi_d");
  const double area = sphere_area(d - 2);
  constexpr double kInnerTol = 1e-11;
  double inner_error = 0.0;
  auto f = [&](double t) {
    double x = k / std::cos(t);
    if (std::abs(x - 2.0) < 1e-14) x = 2.0 + 1e-14;
    const auto v = phi1(x, kInnerTol);
    const auto& s = std::get<ResponseSample>(v);
    inner_error = std::max(inner_error, s.abs_error);
    return std::pow(std::sin(t), d - 2) * s.value;
  };
  std::array<double, 1> cuts{};
  std::span<const double> bp;
  if (k > 0.0 && k < 2.0) {
    cuts[0] = std::acos(0.5 * k);
    bp = cuts;
  }
  const auto r = quad::adaptive(f, 0.0, 0.5 * kPi, bp, {abs_tol / area, 1e-13, 4000});
  return {k, area * r.value, area * (r.abs_error + 0.5 * kPi * inner_error),
          Method::quadrature};
}

ResponseSample phi3_closed(double k) {
  if (!(k >= 0.0 && k <= 2.0)) throw ConfigError("phi3_closed requires 0 <= k <= 2");
  if (k == 0.0) return {0.0, kPi * kPi, 0.0, Method::closed_form};
  auto f = [=](double u) {
    const double arg = u * (2.0 - k * u) / (2.0 + k * (1.0 - 2.0 * u));
    return std::asin(std::sqrt(std::clamp(arg, 0.0, 1.0)));
  };
  const auto r = quad::adaptive(f, 0.0, 1.0, {}, {1e-14, 1e-15, 4000});
  const double pref = 2.0 * kPi * k;
  return {k, kPi * kPi + pref * (r.value - 0.25 * kPi), pref * r.abs_error,
          Method::closed_form};
}

ResponseSample phi_d_from_phi3(double k, int d) {
  require_dimension(d, 4, "phi_d_from_phi3");
  require_nonnegative(k, "phi_d_from_phi3");
  const double area = sphere_area(d - 4);
  double inner_error = 0.0;
  // r = sin(theta): sqrt(1-r^2) dr = cos^2(theta) d theta.
  auto f = [&](double t) {
    const double c = std::cos(t);
    const double x = k / c;
    const ResponseSample s = x <= 2.0 ? phi3_closed(x) : phi_d(x, 3, 1e-10);
    inner_error = std::max(inner_error, s.abs_error);
    return c * c * std::pow(std::sin(t), d - 4) * s.value;
  };
  std::array<double, 1> cuts{};
  std::span<const double> bp;
  if (k > 0.0 && k < 2.0) {
    cuts[0] = std::acos(0.5 * k);
    bp = cuts;
  }
  const auto r = quad::adaptive(f, 0.0, 0.5 * kPi, bp, {1e-10, 1e-13, 2000});
  return {k, area * r.value, area * (r.abs_error + inner_error), Method::recursion};
}

double phi_d_max(int d) {
  require_dimension(d, 4, "phi_d_max");
  // int_0^1 sqrt(1-r^2) r^{d-4} dr = (1/2) B((d-3)/2, 3/2).
  const double beta = std::tgamma(0.5 * (d - 3)) * std::tgamma(1.5) / std::tgamma(0.5 * d);
  return kPi * kPi * sphere_area(d - 4) * 0.5 * beta;
}

// ---------------------------------------------------------------------------

ResponseValue psi1(double k) {
  require_nonnegative(k, "psi1");
  if (k == 2.0) return DivergenceFlag{2.0, DivergenceKind::log_divergence};
  if (k == 0.0) return ResponseSample{0.0, 1.0 / (4.0 * kPi), 0.0, Method::closed_form};
  return ResponseSample{k, log_ratio(2.0, k) / (4.0 * kPi * k), 0.0, Method::closed_form};
}

ResponseSample psi2(double k) {
  require_nonnegative(k, "psi2");
  constexpr double base = 1.0 / (8.0 * kPi);
  if (k <= 2.0) return {k, base, 0.0, Method::closed_form};
  const double y = 4.0 / (k * k);
  // 1 - sqrt(1 - y) = y / (1 + sqrt(1 - y)).
  return {k, base * y / (1.0 + std::sqrt(1.0 - y)), 0.0, Method::closed_form};
}

ResponseSample psi3(double k) {
  require_nonnegative(k, "psi3");
  const double base = 1.0 / (16.0 * kPi * kPi);
  if (k == 0.0) return {0.0, 2.0 * base, 0.0, Method::closed_form};
  if (k == 2.0) return {2.0, base, 0.0, Method::closed_form};
  const double tail = (1.0 - 0.25 * k * k) * log_ratio(2.0, k) / k;
  return {k, base * (1.0 + tail), 0.0, Method::closed_form};
}

double psi_d_at_zero(int d) {
  require_dimension(d, 2, "psi_d_at_zero");
  return sphere_area(d - 2) / (2.0 * std::pow(kTwoPi, d)) * wallis(d - 2);
}

ResponseSample psi_d(double k, int d, double abs_tol) {
  require_dimension(d, 2, "psi_d");
  require_nonnegative(k, "psi_d");
  if (k == 0.0) return {0.0, psi_d_at_zero(d), 0.0, Method::closed_form};
  const double pref = sphere_area(d - 2) / (2.0 * k * std::pow(kTwoPi, d));
  // r = sin(theta), sqrt(1 - r^2) = cos(theta).
  auto f = [=](double t) {
    const double c = std::cos(t);
    const double two_c = 2.0 * c;
    if (two_c == k) return 0.0;
    return log_ratio(two_c, k) * std::pow(std::sin(t), d - 2) * c;
  };
  std::array<double, 1> cuts{};
  std::span<const double> bp;
  if (k < 2.0) {
    cuts[0] = std::acos(0.5 * k);
    bp = cuts;
  }
  const auto r = quad::adaptive(f, 0.0, 0.5 * kPi, bp, {abs_tol / pref, 1e-14, 4000});
  return {k, pref * r.value, pref * r.abs_error, Method::quadrature};
}

ResponseSample psi_d_recursion(double k, int d) {
  require_dimension(d, 3, "psi_d_recursion");
  require_nonnegative(k, "psi_d_recursion");
  const double pref = std::pow(kTwoPi, 2 - d) * sphere_area(d - 3);
  auto f = [=](double r) {
    const double s = std::sqrt((1.0 - r) * (1.0 + r));
    return std::pow(r, d - 3) * psi2(k / s).value;
  };
  std::array<double, 1> cuts{};
  std::span<const double> bp;
  if (k > 0.0 && k < 2.0) {
    cuts[0] = std::sqrt(1.0 - 0.25 * k * k);
    bp = cuts;
  }
  const auto r = quad::adaptive(f, 0.0, 1.0, bp, {1e-14, 1e-14, 4000});
  return {k, pref * r.value, pref * r.abs_error, Method::recursion};
}

ResponseValue psi(double k, int d) {
  if (d == 1) return psi1(k);
  return psi_d(k, d);
}

ResponseValue second_order_kernel(double k_phys, const physcore::PhysicsParams& p) {
  if (!(p.mu() > 0.0)) throw ConfigError("second-order kernel requires mu > 0");
  const double sqrt_mu = std::sqrt(p.mu());
  const double k = std::abs(k_phys) / sqrt_mu;
  auto v = psi(k, p.d());
  if (auto* s = std::get_if<ResponseSample>(&v)) {
    const double scale = p.q() * std::pow(p.mu(), 0.5 * p.d() - 1.0);
    s->k = k_phys;
    s->value *= scale;
    s->abs_error *= scale;
  } else {
    std::get<DivergenceFlag>(v).at_k = 2.0 * sqrt_mu;
  }
  return v;
}

// ---------------------------------------------------------------------------

double weight_density_1d(double k, double mu) {
  if (!(mu > 0.0)) throw ConfigError("weight_density_1d requires mu > 0");
  const double s = std::sqrt(mu);
  const double a = std::abs(k);
  if (a == 0.0) return s;
  if (a == 2.0 * s) return 0.0;
  return s * a / ((s + a) * log_ratio(2.0 * s, a));
}

ResponseValue weight_potential_1d(double k, double mu) {
  if (!(mu > 0.0)) throw ConfigError("weight_potential_1d requires mu > 0");
  const double s = std::sqrt(mu);
  const double a = std::abs(k);
  if (a == 2.0 * s) return DivergenceFlag{2.0 * s, DivergenceKind::log_divergence};
  if (a == 0.0) return ResponseSample{k, 1.0 / s, 0.0, Method::closed_form};
  return ResponseSample{k, (s + a) / (s * a) * log_ratio(2.0 * s, a), 0.0,
                        Method::closed_form};
}

}  // namespace ltlab::response
