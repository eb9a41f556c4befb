#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <string>

#include "ltlab/boxsim.hpp"
#include "ltlab/errors.hpp"

namespace ltlab::boxsim {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Index negate(const Index& n) { return {-n[0], -n[1], -n[2]}; }

void check_dimension(int d) {
  if (d < 1 || d > 3) throw ConfigError("box dimension must be 1, 2 or 3");
}

}  // namespace

std::size_t basis_cap() {
  if (const char* env = std::getenv("LTLAB_BUDGET")) {
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end != env && v >= 1.0) return static_cast<std::size_t>(v);
  }
  return 4096;
}

std::size_t BoxSpec::basis_size() const {
  std::size_t s = 1;
  for (int i = 0; i < d; ++i) s *= static_cast<std::size_t>(2 * n_max + 1);
  return s;
}

double BoxSpec::cutoff_energy() const {
  const double pc = kTwoPi * n_max / L;
  return pc * pc;
}

void BoxSpec::validate() const {
  check_dimension(d);
  if (!(L > 0.0) || !std::isfinite(L)) throw ConfigError("box side L must be > 0");
  if (n_max < 1) throw ConfigError("n_max must be >= 1");
  if (basis_size() > basis_cap())
    throw ResourceError("plane-wave basis of size " + std::to_string(basis_size()) +
                        " exceeds the cap " + std::to_string(basis_cap()));
}

// ---------------------------------------------------------------------------

FourierPotential::FourierPotential(int d, double L) : d_(d), L_(L) {
  check_dimension(d);
  if (!(L > 0.0) || !std::isfinite(L)) throw ConfigError("potential box side must be > 0");
}

void FourierPotential::set_mode(const Index& n, cplx c) {
  for (int i = d_; i < 3; ++i)
    if (n[i] != 0) throw ConfigError("mode index has components beyond dimension d");
  if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
    throw ConfigError("Fourier coefficient must be finite");
  const Index m = negate(n);
  if (m == n) {
    if (c.imag() != 0.0) throw ConfigError("c_0 must be real");
    if (c == cplx{}) coeffs_.erase(n); else coeffs_[n] = c;
    return;
  }
  if (c == cplx{}) {
    coeffs_.erase(n);
    coeffs_.erase(m);
    return;
  }
  coeffs_[n] = c;
  coeffs_[m] = std::conj(c);
}

cplx FourierPotential::coeff(const Index& n) const {
  auto it = coeffs_.find(n);
  return it == coeffs_.end() ? cplx{} : it->second;
}

int FourierPotential::support_radius() const {
  int r = 0;
  for (const auto& [n, c] : coeffs_)
    for (int i = 0; i < d_; ++i) r = std::max(r, std::abs(n[i]));
  return r;
}

bool FourierPotential::is_real() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(),
                     [](const auto& kv) { return kv.second.imag() == 0.0; });
}

double FourierPotential::value_at(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != d_) throw ConfigError("point dimension mismatch");
  double v = 0.0;
  for (const auto& [n, c] : coeffs_) {
    double phase = 0.0;
    for (int i = 0; i < d_; ++i) phase += kTwoPi * n[i] * x[i] / L_;
    v += c.real() * std::cos(phase) - c.imag() * std::sin(phase);
  }
  return v;
}

double FourierPotential::l2_norm_squared() const {
  double s = 0.0;
  for (const auto& kv : coeffs_) s += std::norm(kv.second);
  return s * std::pow(L_, d_);
}

FourierPotential FourierPotential::scaled(double t) const {
  FourierPotential out(d_, L_);
  for (const auto& [n, c] : coeffs_) out.coeffs_[n] = t * c;
  return out;
}

// ---------------------------------------------------------------------------

Basis::Basis(const BoxSpec& box) : d(box.d), L(box.L), n_max(box.n_max) {
  box.validate();
  const int side = 2 * n_max + 1;
  const std::size_t total = box.basis_size();
  n.reserve(total);
  p2.reserve(total);
  const double unit = (kTwoPi / L) * (kTwoPi / L);
  for (std::size_t flat = 0; flat < total; ++flat) {
    Index m{0, 0, 0};
    std::size_t rest = flat;
    for (int i = d - 1; i >= 0; --i) {
      m[i] = static_cast<int>(rest % side) - n_max;
      rest /= side;
    }
    long norm = 0;
    for (int i = 0; i < d; ++i) norm += static_cast<long>(m[i]) * m[i];
    n.push_back(m);
    p2.push_back(unit * static_cast<double>(norm));
  }
}

long Basis::find(const Index& m) const {
  const long side = 2 * n_max + 1;
  long flat = 0;
  for (int i = 0; i < d; ++i) {
    if (m[i] < -n_max || m[i] > n_max) return -1;
    flat = flat * side + (m[i] + n_max);
  }
  for (int i = d; i < 3; ++i)
    if (m[i] != 0) return -1;
  return flat;
}

Eigen::MatrixXcd build_hamiltonian(const BoxSpec& box, const FourierPotential& V) {
  const Basis basis(box);
  if (V.d() != box.d) throw ConfigError("potential dimension differs from the box");
  if (std::abs(V.L() - box.L) > 1e-12 * box.L) throw ConfigError("potential built for another box side");
  if (V.support_radius() > box.n_max)
    throw CutoffError("potential support exceeds the plane-wave cutoff");
  const auto size = static_cast<Eigen::Index>(basis.size());
  Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(size, size);
  for (Eigen::Index j = 0; j < size; ++j) {
    H(j, j) += basis.p2[j];
    for (const auto& [m, c] : V.coeffs()) {
      const Index target{basis.n[j][0] + m[0], basis.n[j][1] + m[1], basis.n[j][2] + m[2]};
      const long i = basis.find(target);
      if (i >= 0) H(i, j) += c;
    }
  }
  return H;
}

double neg_riesz_sum(std::span<const double> eigs, double mu) {
  double s = 0.0;
  for (double l : eigs)
    if (l < mu) s += mu - l;
  return s;
}

// ---- potential families ----------------------------------------------------

FourierPotential cosine_mode(int d, double L, const Index& m, double a) {
  FourierPotential V(d, L);
  if (m == Index{0, 0, 0}) {
    V.set_mode(m, a);
  } else {
    V.set_mode(m, 0.5 * a);
  }
  return V;
}

namespace {

// Fills c_n = (2 pi)^{d/2} vhat(k_n) / L^d for all n with |k_n| <= k_max.
template <class F>
void fill_from_transform(FourierPotential& V, double k_max, double cut, F vhat) {
  const int d = V.d();
  const double L = V.L();
  const int r = static_cast<int>(std::ceil(k_max * L / kTwoPi));
  const double norm = std::pow(kTwoPi, 0.5 * d) / std::pow(L, d);
  const int r1 = d >= 2 ? r : 0, r2 = d >= 3 ? r : 0;
  for (int a = -r; a <= r; ++a)
    for (int b = -r1; b <= r1; ++b)
      for (int c = -r2; c <= r2; ++c) {
        const Index n{a, b, c};
        if (V.coeff(n) != cplx{}) continue;
        const std::array<double, 3> k{kTwoPi * a / L, kTwoPi * b / L, kTwoPi * c / L};
        const double value = vhat(k);
        if (std::abs(value) < cut) continue;
        V.set_mode(n, norm * value);
      }
}

}  // namespace

FourierPotential gaussian_bump(int d, double L, double a, double sigma, double rel_cut) {
  if (!(sigma > 0.0)) throw ConfigError("gaussian width must be > 0");
  if (!(rel_cut > 0.0 && rel_cut < 1.0)) throw ConfigError("rel_cut must lie in (0, 1)");
  FourierPotential V(d, L);
  if (a == 0.0) return V;
  const double peak = a * std::pow(sigma, d);
  const double k_max = std::sqrt(2.0 * std::log(1.0 / rel_cut)) / sigma;
  fill_from_transform(V, k_max, std::abs(peak) * rel_cut, [&](const std::array<double, 3>& k) {
    const double k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
    return peak * std::exp(-0.5 * sigma * sigma * k2);
  });
  return V;
}

FourierPotential peierls_packet(int d, double L, double a, double k0, double w, double rel_cut) {
  if (!(w > 0.0)) throw ConfigError("packet width must be > 0");
  FourierPotential V(d, L);
  if (a == 0.0) return V;
  const double sigma = 1.0 / w;
  const double peak = 0.5 * a * std::pow(sigma, d);
  const double k_max = std::abs(k0) + std::sqrt(2.0 * std::log(1.0 / rel_cut)) * w;
  fill_from_transform(V, k_max, std::abs(peak) * rel_cut, [&](const std::array<double, 3>& k) {
    const double rest = k[1] * k[1] + k[2] * k[2];
    const double minus = (k[0] - k0) * (k[0] - k0) + rest;
    const double plus = (k[0] + k0) * (k[0] + k0) + rest;
    return peak * (std::exp(-0.5 * sigma * sigma * minus) + std::exp(-0.5 * sigma * sigma * plus));
  });
  return V;
}

double half_shell_L(double m_plus_half, double mu) {
  if (!(mu > 0.0)) throw ConfigError("half-shell box needs mu > 0");
  if (!(m_plus_half > 0.0)) throw ConfigError("half-shell index must be > 0");
  return kTwoPi * m_plus_half / std::sqrt(mu);
}

}  // namespace ltlab::boxsim
