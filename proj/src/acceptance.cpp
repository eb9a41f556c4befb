#include "ltlab/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

#include "ltlab/boxsim.hpp"
#include "ltlab/matoracle.hpp"
#include "ltlab/physcore.hpp"
#include "ltlab/response.hpp"
#include "ltlab/rumin.hpp"

namespace ltlab::cli {

namespace {

using physcore::PhysicsParams;
constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

using Rng = std::mt19937_64;

Rng criterion_rng(std::uint64_t seed, int id) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(id)};
  return Rng(seq);
}

double rel_err(double a, double b) { return std::abs(a - b) / std::abs(b); }

// Checks that a value stays at or below a tolerance.
Assertion at_most(std::string name, double value, double tol) {
  return {std::move(name), value, tol, value <= tol, {}};
}

Assertion holds(std::string name, bool ok, std::string detail = {}) {
  return {std::move(name), std::nullopt, std::nullopt, ok, std::move(detail)};
}

Assertion at_least(std::string name, double value, double bound) {
  return {std::move(name), value, bound, value >= bound, "lower bound"};
}

CriterionResult finish(int id, std::string title, std::vector<Assertion> checks, json data = json::object()) {
  CriterionResult r{id, std::move(title), true, std::move(checks), std::move(data)};
  for (const auto& c : r.checks) r.pass = r.pass && c.pass;
  return r;
}

double sample_value(const response::ResponseValue& v) {
  return std::get<response::ResponseSample>(v).value;
}

// ---------------------------------------------------------------------------

CriterionResult c01_duality(const AcceptanceOptions& opt) {
  double worst = 0.0;
  for (int d = 1; d <= 6; ++d)
    for (int q = 1; q <= 2; ++q) {
      const PhysicsParams p(d, q, 1.0);
      double k = physcore::k_sc(p);
      if (opt.fault == "k_sc") k *= 1.0 + 1e-6;
      const double a = 1.0 + 0.5 * d, b = 1.0 + 2.0 / d;
      // Independent of physcore::duality_residual: direct powers.
      const double direct = std::abs(std::pow(a * physcore::l_sc(p), b) * std::pow(b * k, a) - 1.0);
      worst = std::max({worst, direct, opt.fault.empty() ? physcore::duality_residual(p) : 0.0});
    }
  return finish(1, "Duality identity (pL)^p'(p'K)^p = 1, d=1..6, q=1,2",
                {at_most("max relative residual", worst, 1e-12)});
}

CriterionResult c02_free_gas() {
  double worst = 0.0;
  for (double mu : {0.5, 1.0, 2.0})
    for (int d = 1; d <= 6; ++d)
      for (int q = 1; q <= 2; ++q) {
        const PhysicsParams p(d, q, mu);
        const double lhs = 0.5 * d * physcore::l_sc(p) * std::pow(mu, 1.0 + 0.5 * d);
        const double rhs = physcore::k_sc(p) * std::pow(physcore::rho0(p), 1.0 + 2.0 / d);
        worst = std::max(worst, rel_err(lhs, rhs));
      }
  return finish(2, "Free-gas identity (d/2) L_sc mu^{1+d/2} = K_sc rho0^{1+2/d}",
                {at_most("max relative error", worst, 1e-12)});
}

CriterionResult c03_phi3() {
  const double pi2 = kPi * kPi;
  const double at0 = response::phi_d(0.0, 3).value;
  double agree = 0.0;
  for (double k : {0.5, 1.0, 1.5})
    agree = std::max(agree, std::abs(response::phi3_closed(k).value - response::phi_d(k, 3).value));
  bool decreasing = true;
  double prev = 0.0;
  json grid = json::array();
  for (int i = 0; i < 40; ++i) {
    const double k = 4.0 * i / 39.0;
    const double v = response::phi_d(k, 3).value;
    if (i > 0 && !(v < prev)) decreasing = false;
    prev = v;
    grid.push_back({k, v});
  }
  return finish(3, "Phi_3(0) = pi^2, closed form vs quadrature, Phi_3 decreasing",
                {at_most("|Phi_3(0) - pi^2|", std::abs(at0 - pi2), 1e-6),
                 at_most("max |phi3_closed - phi_d| at k=0.5,1,1.5", agree, 1e-6),
                 holds("strictly decreasing on 40 points of [0,4]", decreasing)},
                {{"phi3_at_0", at0}, {"grid", grid}});
}

CriterionResult c04_psi() {
  const double base2 = 1.0 / (8.0 * kPi);
  double worst2 = 0.0;
  std::vector<double> ks{1e-6};
  for (int i = 1; i <= 20; ++i) ks.push_back(0.1 * i);
  for (double k : ks) worst2 = std::max(worst2, std::abs(response::psi_d(k, 2).value - base2));
  const double target3 = 1.0 / (8.0 * kPi * kPi);
  const double psi3_closed = response::psi3(0.0).value;
  const double psi3_quad = response::psi_d(1e-6, 3).value;
  double worst_d = 0.0;
  json zero = json::object();
  for (int d = 2; d <= 5; ++d) {
    const double v = response::psi_d(1e-6, d).value;
    const double lsc = physcore::l_sc(PhysicsParams(d, 1, 1.0));
    worst_d = std::max(worst_d, std::abs(v * 8.0 / (d * (d + 2.0)) - lsc));
    zero[std::to_string(d)] = v;
  }
  return finish(4, "Psi_2 constant on [0,2]; Psi_3(0) = 1/(8 pi^2); Psi_d(0) = d(d+2) L_sc / (8q)",
                {at_most("max |Psi_2 quadrature - 1/(8 pi)| on [0,2]", worst2, 1e-8),
                 at_most("|Psi_3(0) closed - 1/(8 pi^2)|", std::abs(psi3_closed - target3), 1e-8),
                 at_most("|Psi_3(0+) quadrature - 1/(8 pi^2)|", std::abs(psi3_quad - target3), 1e-8),
                 at_most("max |8 Psi_d(0)/(d(d+2)) - L_sc|, d=2..5", worst_d, 1e-6)},
                {{"psi_d_near_zero", zero}});
}

CriterionResult c05_divergence() {
  const double eps = 1e-4;
  const double phi_lo = sample_value(response::phi1(2.0 - eps));
  const double phi_hi = sample_value(response::phi1(2.0 + eps));
  const double phi_ref = -0.5 * std::log(eps);
  const double psi_lo = sample_value(response::psi1(2.0 - eps));
  const double psi_hi = sample_value(response::psi1(2.0 + eps));
  const double psi_ref = std::log(4.0 / eps) / (8.0 * kPi);

  // Log-slope fits over eps in {1e-2, 1e-3, 1e-4} (reported alongside).
  auto slope = [](auto f) {
    const double e1 = 1e-2, e2 = 1e-4;
    return (f(e2) - f(e1)) / (std::log(1.0 / e2) - std::log(1.0 / e1));
  };
  const double phi_slope = slope([](double e) { return sample_value(response::phi1(2.0 - e)); });
  const double psi_slope = slope([](double e) { return sample_value(response::psi1(2.0 - e)); });

  const double phi_dev = std::max(std::abs(phi_lo / phi_ref - 1.0), std::abs(phi_hi / phi_ref - 1.0));
  const double psi_dev = std::max(std::abs(psi_lo / psi_ref - 1.0), std::abs(psi_hi / psi_ref - 1.0));
  return finish(5, "Divergence fits at 2 +- 1e-4 for Phi_1 and Psi_1",
                {at_most("max |Phi_1(2+-eps) / (-1/2 log eps) - 1|", phi_dev, 0.05),
                 at_most("max |Psi_1(2+-eps) / ((1/8pi) log(4/eps)) - 1|", psi_dev, 0.05)},
                {{"phi1_minus", phi_lo},
                 {"phi1_plus", phi_hi},
                 {"phi1_log_slope", phi_slope},
                 {"phi1_log_slope_target", 0.5},
                 {"psi1_minus", psi_lo},
                 {"psi1_plus", psi_hi},
                 {"psi1_log_slope", psi_slope},
                 {"psi1_log_slope_target", 1.0 / (8.0 * kPi)},
                 {"note", "Phi_1(2+-eps) = (1/2) log(16/eps) + o(1); the ratio to -(1/2) log eps is ~1.30 at 1e-4"}});
}

CriterionResult c06_rumin() {
  const double small = 1e-6, large = 1e8;
  const double r_small = rumin::rumin_R(small, 3) / (small * small);
  const double want_small = std::pow(kTwoPi, 3) / (24.0 * kPi);
  const double r_large = rumin::rumin_R(large, 3) / std::pow(large, 5.0 / 3.0);
  const double want_large = 3.0 / 7.0 * physcore::k_sc(PhysicsParams(3, 1, 1.0));
  std::vector<Assertion> checks{
      at_most("|R_3(1e-6)/rho^2 / ((2pi)^3/(24pi)) - 1|", rel_err(r_small, want_small), 0.01),
      at_most("|R_3(1e8)/rho^{5/3} / ((3/7)K_sc(3)) - 1|", rel_err(r_large, want_large), 0.01)};
  json khats = json::object();
  for (int d = 1; d <= 3; ++d) {
    const auto a = rumin::khat(d);
    rumin::KhatOptions fine;
    fine.grid_points = 2 * fine.grid_points - 1;
    const auto b = rumin::khat(d, fine);
    const double ksc = physcore::k_sc(PhysicsParams(d, 1, 1.0));
    const std::string tag = "d=" + std::to_string(d);
    checks.push_back(holds("0 < khat <= K_sc, " + tag, a.khat > 0.0 && a.khat <= ksc * (1.0 + 1e-9)));
    checks.push_back(at_most("khat grid-doubling change, " + tag, rel_err(b.khat, a.khat), 1e-3));
    khats[tag] = {{"khat", a.khat}, {"khat_fine", b.khat}, {"rho_at_min", a.rho_at_min}, {"k_sc", ksc}};
  }
  return finish(6, "Rumin R_d asymptotics and khat", std::move(checks),
                {{"small_ratio", r_small}, {"large_ratio", r_large}, {"khat", khats}});
}

std::uint64_t brute_ball(double R, int d) {
  const int r = static_cast<int>(std::floor(R)) + 1;
  const int r1 = d >= 2 ? r : 0, r2 = d >= 3 ? r : 0;
  std::uint64_t n = 0;
  for (long x = -r; x <= r; ++x)
    for (long y = -r1; y <= r1; ++y)
      for (long z = -r2; z <= r2; ++z)
        if (static_cast<double>(x * x + y * y + z * z) <= R * R) ++n;
  return n;
}

CriterionResult c07_lattice(std::uint64_t seed) {
  Rng rng = criterion_rng(seed, 7);
  std::uniform_real_distribution<double> u(0.0, 30.0);
  int matches = 0;
  for (int i = 0; i < 50; ++i) {
    const int d = 1 + i % 3;
    const double R = u(rng);
    if (rumin::lattice_count_ball(R, d) == brute_ball(R, d)) ++matches;
  }
  const auto f = rumin::f_lattice(0.5, 2, 1.0, 200.0);
  const double cont = rumin::shell_volume_continuum(0.5, 2, 1.0);
  return finish(7, "Lattice counting: ball counts exact, f_lattice -> continuum shell",
                {holds("ball counts match brute force (50 radii)", matches == 50, std::to_string(matches) + "/50"),
                 at_most("|f_lattice / continuum - 1| at L=200, d=2", rel_err(f.density, cont), 0.02)},
                {{"f_lattice", f.density}, {"continuum", cont}, {"count", f.count}});
}

CriterionResult c08_matrix(std::uint64_t seed) {
  Rng rng = criterion_rng(seed, 8);
  double worst_gap = 0.0, worst_attain = 0.0, worst_dev = 0.0, worst_lhs = -1e300;
  int degenerate = 0, equiv = 0, iff = 0, projections = 0;
  for (int i = 0; i < 200; ++i) {
    const int dim = 2 + i % 7;
    matoracle::MatrixPair pair{matoracle::random_hermitian(dim, rng), matoracle::random_hermitian(dim, rng)};
    const auto v = matoracle::variational_min_check(pair, 200, rng());
    worst_gap = std::min(worst_gap, v.gap);
    worst_attain = std::max(worst_attain, v.attain_deviation);
    const auto t = matoracle::relative_trace_identity(pair);
    if (t.degenerate) {
      ++degenerate;
    } else {
      worst_dev = std::max(worst_dev, t.deviation);
      worst_lhs = std::max(worst_lhs, t.lhs);
    }
    std::uniform_int_distribution<int> rank(0, dim);
    const auto pi = matoracle::random_projection(dim, rank(rng), rng);
    const bool proj = i % 2 == 1;
    const auto gamma = proj ? matoracle::random_projection(dim, rank(rng), rng)
                            : matoracle::random_density_matrix(dim, rng);
    const auto c = matoracle::constraint_q2_check(gamma, pi);
    equiv += c.equiv_holds;
    iff += c.equality_iff_projection && c.is_projection == proj;
    projections += proj;
  }
  return finish(8, "Matrix oracle: variational principle, relative trace identity, Q^2 constraint",
                {at_least("min sampled gap", worst_gap, -1e-10),
                 at_most("max |tr (A+B) gamma* + tr (A+B)_-|", worst_attain, 1e-10),
                 at_most("max relative trace identity deviation", worst_dev, 1e-9),
                 at_most("max lhs tr (A+B)(Pi_B - Pi)", worst_lhs, 1e-10),
                 holds("Q^2 <= Q++ - Q-- on all 200", equiv == 200, std::to_string(equiv) + "/200"),
                 holds("equality iff projection on all 200", iff == 200, std::to_string(iff) + "/200")},
                {{"degenerate_excluded", degenerate}, {"projection_cases", projections}});
}

CriterionResult c09_box(std::uint64_t seed) {
  using namespace boxsim;
  const PhysicsParams p1(1, 1, 1.0), p2(2, 1, 1.3);
  const double zero1 = relative_energy(FourierPotential(1, 10.0), p1).relative_energy;
  const double zero2 = relative_energy(FourierPotential(2, 6.0), p2).relative_energy;

  Rng rng = criterion_rng(seed, 9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst_trace = 0.0, worst_e = -1e300, worst_double = 0.0;
  json runs = json::array();
  for (int i = 0; i < 20; ++i) {
    const int d = 1 + i % 2;
    const double L = d == 1 ? 6.0 + 12.0 * u(rng) : 4.0 + 2.0 * u(rng);
    const double mu = 0.5 + 1.5 * u(rng);
    const PhysicsParams p(d, 1, mu);
    FourierPotential V(d, L);
    for (int k = 0; k < 3; ++k) {
      Index n{1 + static_cast<int>(u(rng) * 2.0), d == 2 ? static_cast<int>(u(rng) * 5.0) - 2 : 0, 0};
      V.set_mode(n, {u(rng) - 0.5, u(rng) - 0.5});
    }
    const auto tr = trace_relation_check(V, p);
    const auto a = relative_energy(V, p);
    RunOptions twice;
    twice.n_max = 2 * a.n_max;
    const auto b = relative_energy(V, p, twice);
    worst_trace = std::max(worst_trace, tr.deviation);
    worst_e = std::max({worst_e, a.relative_energy, b.relative_energy});
    worst_double = std::max(worst_double, std::abs(a.relative_energy - b.relative_energy));
    runs.push_back({{"d", d}, {"L", L}, {"mu", mu}, {"n_max", a.n_max}, {"E_rel", a.relative_energy},
                    {"trace_deviation", tr.deviation}, {"degenerate", a.degenerate}});
  }
  return finish(9, "Box exactness: V=0, trace relation, sign, cutoff doubling",
                {holds("E_rel(V=0) == 0 exactly (d=1,2)", zero1 == 0.0 && zero2 == 0.0),
                 at_most("max trace relation deviation (20 configs)", worst_trace, 1e-9),
                 at_most("max E_rel", worst_e, 1e-9),
                 at_most("max |E_rel(2 n_max) - E_rel(n_max)|", worst_double, 1e-8)},
                {{"runs", runs}});
}

// All (p, p') pairs of a large enough box, lexicographic in both.
double brute_second_order(const boxsim::FourierPotential& V, const PhysicsParams& p) {
  const int d = p.d();
  const double unit = (kTwoPi / V.L()) * (kTwoPi / V.L());
  const int R = static_cast<int>(std::floor(std::sqrt(p.mu() / unit))) + 1;
  const int S = R + V.support_radius();
  const int r1 = d >= 2 ? R : 0, s1 = d >= 2 ? S : 0;
  double sum = 0.0;
  for (long a = -R; a <= R; ++a)
    for (long b = -r1; b <= r1; ++b) {
      const double p2 = unit * static_cast<double>(a * a + b * b);
      if (p2 > p.mu()) continue;
      for (long x = -S; x <= S; ++x)
        for (long y = -s1; y <= s1; ++y) {
          const auto c = V.coeff({static_cast<int>(x - a), static_cast<int>(y - b), 0});
          if (c == boxsim::cplx{}) continue;
          const double q2 = unit * static_cast<double>(x * x + y * y);
          if (q2 > p.mu()) sum += std::norm(c) / (q2 - p2);
        }
    }
  return -p.q() * sum;
}

CriterionResult c10_second_order() {
  using namespace boxsim;
  const PhysicsParams p(1, 1, 1.0);
  const auto V = cosine_mode(1, 40.0, {3, 0, 0}, 1.0);
  const double so = second_order_box(V, p);
  const double t = 1e-3;
  const double e = relative_energy(V.scaled(t), p).relative_energy / (t * t);
  const auto G = gaussian_bump(1, half_shell_L(6.5, 1.0), 1.0, 1.0);
  const bool exact_cos = so == brute_second_order(V, p);
  const bool exact_gauss = second_order_box(G, p) == brute_second_order(G, p);

  const double cont = continuum_second_order_gaussian(1.0, 1.0, p);
  json levels = json::array();
  std::vector<double> errs;
  for (double m : {3.5, 6.5, 13.5, 26.5}) {
    const double L = half_shell_L(m, 1.0);
    const double s = second_order_box(gaussian_bump(1, L, 1.0, 1.0), p);
    errs.push_back(rel_err(s, cont));
    levels.push_back({{"L", L}, {"second_order", s}, {"relative_error", errs.back()}});
  }
  bool shrinking = true;
  for (std::size_t i = 1; i < errs.size(); ++i) shrinking = shrinking && errs[i] < errs[i - 1];
  return finish(10, "Second order: E_rel(tV)/t^2, brute-force oracle, continuum Psi_1 limit",
                {at_most("|E_rel(tV)/t^2 / second_order_box - 1| at t=1e-3", rel_err(e, so), 0.005),
                 holds("second_order_box == all-pairs oracle (cosine and gaussian)", exact_cos && exact_gauss),
                 holds("continuum error shrinks as L grows", shrinking),
                 at_most("|box / continuum - 1| at largest L", errs.back(), 0.03)},
                {{"second_order_box", so}, {"energy_over_t2", e}, {"continuum", cont}, {"levels", levels},
                 {"fourier_convention", "unitary: c_n = (2 pi)^{d/2} Vhat(k_n) / L^d"}});
}

CriterionResult c11_peierls() {
  const auto s1 = boxsim::peierls_scan(PhysicsParams(1, 1, 1.0), 4, 0.05, 6.0);
  const auto s2 = boxsim::peierls_scan(PhysicsParams(2, 1, 1.0), 4, 0.05, 3.0);
  bool increasing = true;
  for (std::size_t i = 1; i < s1.levels.size(); ++i)
    increasing = increasing && s1.levels[i].ratio > s1.levels[i - 1].ratio;
  double lo = 1e300, hi = 0.0;
  for (const auto& l : s2.levels) {
    lo = std::min(lo, l.ratio);
    hi = std::max(hi, l.ratio);
  }
  auto dump = [](const boxsim::PeierlsScan& s) {
    json out = json::array();
    for (const auto& l : s.levels) out.push_back({{"width", l.width}, {"L", l.L}, {"ratio", l.ratio}});
    return out;
  };
  return finish(11, "Peierls contrast: d=1 diverges, d=2 bounded",
                {holds("d=1 ratios strictly increasing over 4 levels", increasing),
                 at_most("d=2 max/min ratio", hi / lo, 1.1)},
                {{"d1", dump(s1)}, {"d2", dump(s2)}, {"d1_slope", s1.slope},
                 {"d1_slope_expected", 1.0 / (8.0 * kPi)}, {"implied_l_prime", s1.implied_l_prime},
                 {"l_prime_lower_bound", 1.0 / (12.0 * kPi)}});
}

CriterionResult c12_li_yau(std::uint64_t seed) {
  using namespace boxsim;
  Rng rng = criterion_rng(seed, 12);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 10; ++i) {
    const int d = 1 + i % 2;
    const BoxSpec box = d == 1 ? BoxSpec{1, 10.0, 20} : BoxSpec{2, 6.0, 8};
    std::vector<double> lo(d), w(d);
    for (int k = 0; k < d; ++k) {
      w[k] = u(rng) * 0.6 * box.L;
      lo[k] = -0.5 * box.L + u(rng) * (box.L - w[k]);
    }
    const auto r = li_yau_check(box, lo, w, PhysicsParams(d, 1, 0.5 + u(rng)));
    worst = std::max(worst, r.identity_deviation);
  }
  const double lo1[] = {0.0}, w1[] = {1.0};
  const auto r = li_yau_check(BoxSpec{1, 60.0, 60}, lo1, w1, PhysicsParams(1, 1, 1.0));
  return finish(12, "Li-Yau: trace identity, constructed gamma vs sharp bound",
                {at_most("max trace identity deviation (10 random Omega)", worst, 1e-10),
                 at_least("relative kinetic at L=60, |Omega|=1", r.lhs, 0.95 * r.rhs_continuum)},
                {{"lhs", r.lhs}, {"hole_part", r.hole_part}, {"rhs_discrete", r.rhs_discrete},
                 {"rhs_continuum", r.rhs_continuum}});
}

CriterionResult c13_temperature() {
  using namespace boxsim;
  const PhysicsParams p(1, 1, 1.0);
  auto V = gaussian_bump(1, half_shell_L(6.5, 1.0), 1.0, 1.0);
  V.set_mode({0, 0, 0}, 0.0);
  double worst = 0.0;
  json temps = json::array();
  for (double T : {0.05, 0.2}) {
    const auto r = free_energy_T(V, p, T);
    worst = std::max(worst, std::abs(r.direct - r.lambda_quad));
    temps.push_back({{"T", T}, {"direct", r.direct}, {"lambda_quadrature", r.lambda_quad}});
  }
  const double e0 = relative_energy(V, p).relative_energy;
  const double cold = free_energy_T(V, p, 1e-4).direct;
  return finish(13, "Temperature: level sums vs lambda quadrature, T -> 0 limit",
                {at_most("max |direct - lambda quadrature|", worst, 1e-6),
                 at_most("|F(T=1e-4) - E_rel|", std::abs(cold - e0), 1e-3)},
                {{"temperatures", temps}, {"E_rel", e0}, {"F_cold", cold}});
}

CriterionResult c14_thermo() {
  const std::vector<double> ms{3.5, 6.5, 13.5, 26.5};
  const auto levels = boxsim::thermo_sweep(1.0, 1.0, PhysicsParams(1, 1, 1.0), ms);
  bool decreasing = true;
  json out = json::array();
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (i >= 2) decreasing = decreasing && levels[i].gap < levels[i - 1].gap;
    out.push_back({{"L", levels[i].L}, {"n_max", levels[i].n_max}, {"E_rel", levels[i].relative_energy},
                   {"gap", levels[i].gap}});
  }
  return finish(14, "Thermodynamic limit: |E(2L) - E(L)| decreasing over 3 doublings",
                {holds("gaps strictly decreasing", decreasing)}, {{"levels", out}});
}

json criterion_json(const CriterionResult& c) {
  json checks = json::array();
  for (const auto& a : c.checks) checks.push_back(assertion_json(a));
  return {{"id", c.id}, {"title", c.title}, {"pass", c.pass}, {"checks", checks}, {"data", c.data}};
}

json suite_report(const AcceptanceOptions& opt, const std::vector<CriterionResult>& cs) {
  json crit = json::array();
  std::vector<Assertion> flat;
  for (const auto& c : cs) {
    crit.push_back(criterion_json(c));
    for (const auto& a : c.checks) {
      Assertion f = a;
      f.name = "C" + std::string(c.id < 10 ? "0" : "") + std::to_string(c.id) + ": " + a.name;
      flat.push_back(f);
    }
  }
  json tolerances{{"duality_rel", 1e-12}, {"free_gas_rel", 1e-12}, {"phi3_abs", 1e-6},
                   {"psi_abs", 1e-8},     {"psi_zero_abs", 1e-6},  {"divergence_rel", 0.05},
                   {"rumin_rel", 0.01},   {"khat_rel", 1e-3},      {"lattice_rel", 0.02},
                   {"matrix_abs", 1e-10}, {"trace_abs", 1e-9},     {"doubling_abs", 1e-8},
                   {"second_order_rel", 0.005}, {"continuum_rel", 0.03}, {"peierls_band", 1.1},
                   {"li_yau_identity", 1e-10},  {"li_yau_fraction", 0.95}, {"temperature_abs", 1e-6},
                   {"zero_temperature_abs", 1e-3}};
  json meta{{"delta_T_scaling", "delta_T_mu(rho) = mu^{1+d/2} delta_T_1(rho mu^{-d/2})"},
            {"rumin_rho0", "|S^{d-1}| / (d (2 pi)^d), forced by f(e)"},
            {"thermo_subtraction", "rho0 * int V"},
            {"announced_r3", physcore::kAnnouncedR3},
            {"announced_r2", physcore::kAnnouncedR2}};
  if (!opt.fault.empty()) meta["fault_injected"] = opt.fault;
  return make_report("accept", opt.seed, json{{"seed", opt.seed}}, json{{"criteria", crit}}, tolerances, flat,
                     meta);
}

std::vector<CriterionResult> run_criteria(const AcceptanceOptions& opt, std::ostream* progress) {
  std::vector<std::function<CriterionResult()>> jobs{
      [&] { return c01_duality(opt); },    [] { return c02_free_gas(); },
      [] { return c03_phi3(); },           [] { return c04_psi(); },
      [] { return c05_divergence(); },     [] { return c06_rumin(); },
      [&] { return c07_lattice(opt.seed); }, [&] { return c08_matrix(opt.seed); },
      [&] { return c09_box(opt.seed); },   [] { return c10_second_order(); },
      [] { return c11_peierls(); },        [&] { return c12_li_yau(opt.seed); },
      [] { return c13_temperature(); },    [] { return c14_thermo(); }};
  std::vector<CriterionResult> out;
  for (auto& job : jobs) {
    const auto t0 = std::chrono::steady_clock::now();
    out.push_back(job());
    if (progress) {
      const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      *progress << "  [" << out.back().id << "] " << s << " s\n" << std::flush;
    }
  }
  return out;
}

}  // namespace

std::string format_line(const CriterionResult& c) {
  std::ostringstream os;
  os << 'C' << (c.id < 10 ? "0" : "") << c.id << ' ' << (c.pass ? "PASS" : "FAIL") << "  " << c.title;
  for (const auto& a : c.checks) {
    os << " | " << a.name;
    if (a.value) os << '=' << format_double(*a.value);
    if (a.tolerance) os << (a.detail == "lower bound" ? " >= " : " <= ") << format_double(*a.tolerance);
    else if (!a.detail.empty()) os << " (" << a.detail << ')';
    if (!a.pass) os << " [x]";
  }
  return os.str();
}

AcceptanceOutcome run_acceptance(const AcceptanceOptions& opt, std::ostream* progress) {
  const auto t0 = std::chrono::steady_clock::now();
  AcceptanceOutcome out;
  out.criteria = run_criteria(opt, progress);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const std::string first = dump_report(suite_report(opt, out.criteria));

  std::vector<Assertion> checks;
  if (opt.check_determinism) {
    if (progress) *progress << "  rerunning for the determinism check\n";
    const auto again = run_criteria(opt, progress);
    checks.push_back(holds("second run gives byte-identical report", dump_report(suite_report(opt, again)) == first));
  }
  // The budget is 10 minutes for the whole suite on one core; the duration
  // itself stays out of the report.
  checks.push_back(holds("suite runtime within 600 s", seconds <= 600.0));
  out.criteria.push_back(finish(15, "Determinism and runtime budget", std::move(checks)));

  out.all_pass = std::all_of(out.criteria.begin(), out.criteria.end(), [](const auto& c) { return c.pass; });
  out.report = suite_report(opt, out.criteria);
  out.report["results"]["all_pass"] = out.all_pass;
  if (progress) *progress << "  suite time " << seconds << " s\n";
  return out;
}

}  // namespace ltlab::cli
