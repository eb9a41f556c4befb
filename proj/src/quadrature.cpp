#include "ltlab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <vector>

namespace ltlab::quad {

namespace {

constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights on the odd Kronrod nodes kXgk[1], kXgk[3], kXgk[5], kXgk[7].
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a, b, value, error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

Panel gauss_kronrod(const Integrand& f, double a, double b, int& evals) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kronrod = fc * kWgk[7];
  double gauss = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const double fsum = f(center - dx) + f(center + dx);
    kronrod += kWgk[j] * fsum;
    if (j % 2 == 1) gauss += kWg[j / 2] * fsum;
  }
  evals += 15;
  kronrod *= half;
  gauss *= half;
  double err = std::abs(kronrod - gauss);
  if (!std::isfinite(kronrod)) err = std::numeric_limits<double>::infinity();
  return {a, b, kronrod, err};
}

}  // namespace

Result adaptive(const Integrand& f, double a, double b,
                std::span<const double> breakpoints, Options opt) {
  Result out;
  if (a == b) {
    out.converged = true;
    return out;
  }
  double sign = 1.0;
  if (b < a) {
    std::swap(a, b);
    sign = -1.0;
  }

  std::vector<double> cuts{a};
  for (double x : breakpoints)
    if (x > a && x < b) cuts.push_back(x);
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  std::priority_queue<Panel> active;
  double total = 0.0, total_err = 0.0;
  double frozen = 0.0, frozen_err = 0.0;  // panels too narrow to split
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    Panel p = gauss_kronrod(f, cuts[i], cuts[i + 1], out.evaluations);
    total += p.value;
    total_err += p.error;
    active.push(p);
  }

  int splits = 0;
  while (!active.empty()) {
    const double target = std::max(opt.abs_tol, opt.rel_tol * std::abs(total));
    if (total_err <= target) {
      out.converged = true;
      break;
    }
    if (splits >= opt.max_subdivisions) break;
    Panel worst = active.top();
    active.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b) ||
        (worst.b - worst.a) < 4.0 * std::numeric_limits<double>::epsilon() *
                                  std::max(std::abs(worst.a), std::abs(worst.b))) {
      frozen += worst.value;
      frozen_err += worst.error;
      continue;
    }
    Panel left = gauss_kronrod(f, worst.a, mid, out.evaluations);
    Panel right = gauss_kronrod(f, mid, worst.b, out.evaluations);
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    active.push(left);
    active.push(right);
    ++splits;
  }
  if (active.empty()) out.converged = true;

  // Re-sum from the panel list to shed accumulated update round-off.
  double sum = frozen, err = frozen_err;
  while (!active.empty()) {
    sum += active.top().value;
    err += active.top().error;
    active.pop();
  }
  out.value = sign * sum;
  out.abs_error = err;
  return out;
}

Result tanh_sinh(const EndpointIntegrand& f, double a, double b, double tol) {
  Result out;
  if (a == b) {
    out.converged = true;
    return out;
  }
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  constexpr double kHalfPi = 0.5 * std::numbers::pi;
  constexpr double kTmax = 4.0;

  // Level 0 uses step 1; each level halves the step and adds the odd nodes.
  auto node_sum = [&](double t) {
    const double u = kHalfPi * std::sinh(t);
    const double cu = std::cosh(u);
    const double w = kHalfPi * std::cosh(t) / (cu * cu);
    // 1 - tanh(u) = exp(-u)/cosh(u), evaluated without cancellation.
    const double delta = std::exp(-u) / cu;
    double s = 0.0;
    // Nodes that round onto an endpoint still see their true distance to it.
    const double gap = half * delta;
    if (gap > 0.0) s += f(b - gap, 2.0 * half - gap, gap) + f(a + gap, gap, 2.0 * half - gap);
    out.evaluations += 2;
    return w * s;
  };

  double h = 1.0;
  double sum = kHalfPi * f(center, half, half);  // t = 0 node
  out.evaluations += 1;
  for (double t = h; t <= kTmax; t += h) sum += node_sum(t);
  double estimate = half * h * sum;
  for (int level = 1; level <= 12; ++level) {
    h *= 0.5;
    for (double t = h; t <= kTmax; t += 2.0 * h) sum += node_sum(t);
    const double next = half * h * sum;
    const double diff = std::abs(next - estimate);
    estimate = next;
    out.abs_error = diff;
    if (level >= 3 && diff <= tol * std::max(1.0, std::abs(next))) {
      out.converged = true;
      break;
    }
  }
  out.value = estimate;
  return out;
}

Result tanh_sinh(const Integrand& f, double a, double b, double tol) {
  return tanh_sinh([&](double x, double, double) { return f(x); }, a, b, tol);
}

}  // namespace ltlab::quad
