#pragma once

#include <functional>
#include <span>

namespace ltlab::quad {

struct Result {
  double value = 0.0;
  double abs_error = 0.0;
  int evaluations = 0;
  bool converged = false;
};

struct Options {
  double abs_tol = 1e-10;
  double rel_tol = 1e-12;
  int max_subdivisions = 4000;
};

using Integrand = std::function<double(double)>;

// Globally adaptive 7/15-point Gauss-Kronrod. The interval is first split at
// every breakpoint inside (a, b); singular points (endpoint inverse square
// roots after substitution, interior logarithms) should be passed here so that
// bisection refines toward them.
Result adaptive(const Integrand& f, double a, double b,
                std::span<const double> breakpoints = {}, Options opt = {});

// Double-exponential (tanh-sinh) rule. Independent of the Gauss-Kronrod path;
// used to cross-check values with endpoint singularities.
Result tanh_sinh(const Integrand& f, double a, double b, double tol = 1e-12);
// Same rule; the integrand also gets x - a and b - x, exact even where x
// itself rounds onto an endpoint. Needed for inverse-root endpoint
// singularities, whose mass within one ulp of the endpoint is otherwise lost.
using EndpointIntegrand = std::function<double(double x, double from_a, double to_b)>;
Result tanh_sinh(const EndpointIntegrand& f, double a, double b, double tol = 1e-12);

}  // namespace ltlab::quad
