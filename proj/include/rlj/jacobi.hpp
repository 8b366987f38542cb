#pragma once

// Whole-line Jacobi matrices stored as a coefficient window plus a rule for
// the coefficients outside it, and their diagonal Green functions
// g_n(z) = <delta_n, (J - z)^{-1} delta_n>.
//
// Green functions are exact: the window is closed on both sides by the
// Weyl function of the tail (constant tail, periodic tail, or half-line
// Stieltjes transforms supplied directly), so no truncation error enters.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <sstream>
#include <variant>
#include <vector>

#include "rlj/error.hpp"
#include "rlj/measures.hpp"

namespace rlj {

// Coefficients outside the window repeat the edge values.
struct PadConstant {};

// a(n + p) = a(n), b(n + p) = b(n); the window holds a whole number of periods.
struct Periodic {
  int period = 1;
};

// Beyond the sites adjacent to 0 the operator is described by the Stieltjes
// transforms of its half-line spectral measures nu_+ (sites n >= 1) and
// nu_- (sites n <= -1): nu_plus(z) = a(0)^2 m_+(z), nu_minus(z) = a(-1)^2 m_-(z).
struct SpectralTails {
  std::function<cdouble(cdouble)> nu_plus;
  std::function<cdouble(cdouble)> nu_minus;
};

using BoundaryPolicy = std::variant<PadConstant, Periodic, SpectralTails>;

class JacobiMatrix {
 public:
  JacobiMatrix() : JacobiMatrix({}, {0.0}, 0) {}

  // Pad and spectral-tail policies: b covers sites offset .. offset+len-1 and
  // a covers the couplings a(offset) .. a(offset+len-2), so a.size() ==
  // b.size() - 1. Periodic: a.size() == b.size() == k * period.
  JacobiMatrix(std::vector<double> a, std::vector<double> b, long offset, BoundaryPolicy policy = PadConstant{})
      : a_(std::move(a)), b_(std::move(b)), offset_(offset), policy_(std::move(policy)) {
    require(!b_.empty(), "Jacobi window needs at least one diagonal entry");
    for (double x : a_) require(std::isfinite(x) && x >= 0.0, "Jacobi off-diagonal entries must be finite and >= 0");
    for (double x : b_) require(std::isfinite(x), "Jacobi diagonal entries must be finite");
    if (const auto* per = std::get_if<Periodic>(&policy_)) {
      require(per->period >= 1, "period must be >= 1");
      require(a_.size() == b_.size(), "periodic window: a and b must have equal length");
      require(b_.size() % static_cast<std::size_t>(per->period) == 0,
              "periodic window length must be a multiple of the period");
    } else {
      require(a_.size() + 1 == b_.size(), "window: a must have one entry fewer than b");
    }
    if (const auto* t = std::get_if<SpectralTails>(&policy_)) {
      require(static_cast<bool>(t->nu_plus) && static_cast<bool>(t->nu_minus), "spectral tails need both transforms");
      require(first() <= 0 && last() >= 0, "spectral-tail window must contain site 0");
    }
  }

  static JacobiMatrix constant(double a, double b, long half_width = 50) {
    return {std::vector<double>(2 * half_width, a), std::vector<double>(2 * half_width + 1, b), -half_width};
  }

  static JacobiMatrix periodic(std::vector<double> a, std::vector<double> b, long offset = 0) {
    int p = static_cast<int>(b.size());
    return {std::move(a), std::move(b), offset, Periodic{p}};
  }

  long first() const { return offset_; }
  long last() const { return offset_ + static_cast<long>(b_.size()) - 1; }
  const std::vector<double>& a_window() const { return a_; }
  const std::vector<double>& b_window() const { return b_; }
  const BoundaryPolicy& policy() const { return policy_; }
  bool is_periodic() const { return std::holds_alternative<Periodic>(policy_); }
  bool has_spectral_tails() const { return std::holds_alternative<SpectralTails>(policy_); }
  int period() const { return is_periodic() ? std::get<Periodic>(policy_).period : 0; }

  double a(long n) const {
    if (is_periodic()) return a_[wrap(n)];
    if (a_.empty()) return 0.0;
    long i = std::clamp(n - offset_, 0L, static_cast<long>(a_.size()) - 1);
    return a_[i];
  }

  double b(long n) const {
    if (is_periodic()) return b_[wrap(n)];
    long i = std::clamp(n - offset_, 0L, static_cast<long>(b_.size()) - 1);
    return b_[i];
  }

  // Same coefficients with a different boundary rule.
  JacobiMatrix with_policy(BoundaryPolicy p) const { return {a_, b_, offset_, std::move(p)}; }

  // Coefficients shifted by c on the diagonal.
  JacobiMatrix plus_identity(double c) const {
    JacobiMatrix out = *this;
    for (auto& x : out.b_) x += c;
    return out;
  }

 private:
  std::size_t wrap(long n) const {
    long len = static_cast<long>(b_.size());
    long i = (n - offset_) % len;
    if (i < 0) i += len;
    return static_cast<std::size_t>(i);
  }

  std::vector<double> a_;
  std::vector<double> b_;
  long offset_;
  BoundaryPolicy policy_;
};

namespace detail {

using Mobius = std::array<cdouble, 4>;  // m -> (x0 m + x1) / (x2 m + x3)

inline Mobius mobius_mul(const Mobius& p, const Mobius& q) {
  Mobius r{p[0] * q[0] + p[1] * q[2], p[0] * q[1] + p[1] * q[3], p[2] * q[0] + p[3] * q[2],
           p[2] * q[1] + p[3] * q[3]};
  double s = 0.0;
  for (const auto& x : r) s = std::max(s, std::abs(x));
  if (s > 0.0)
    for (auto& x : r) x /= s;
  return r;
}

// The fixed point a Weyl function must take: the attracting one (for
// im z > 0 this is the unique fixed point in the upper half plane).
inline cdouble attracting_fixed_point(const Mobius& m) {
  const cdouble alpha = m[0], beta = m[1], gamma = m[2], delta = m[3];
  if (std::abs(gamma) <= 1e-300) return beta / (delta - alpha);
  const cdouble bq = delta - alpha;
  const cdouble disc = std::sqrt(bq * bq + 4.0 * gamma * beta);
  // numerically stable pair of roots of gamma m^2 + bq m - beta = 0
  const cdouble q = -0.5 * (bq + (std::real(std::conj(bq) * disc) >= 0.0 ? disc : -disc));
  std::array<cdouble, 2> roots{q / gamma, q != 0.0 ? -beta / q : cdouble(0.0)};
  const cdouble det = alpha * delta - beta * gamma;
  auto deriv = [&](cdouble r) { return std::abs(det / ((gamma * r + delta) * (gamma * r + delta))); };
  const double d0 = deriv(roots[0]), d1 = deriv(roots[1]);
  if (std::abs(d0 - d1) > 1e-12 * std::max(d0, d1)) return d0 < d1 ? roots[0] : roots[1];
  return roots[0].imag() >= roots[1].imag() ? roots[0] : roots[1];
}

// Step maps: right half-line m^{(k)} = 1 / (b(k) - z - a(k)^2 m^{(k+1)}),
// left half-line m^{(k)} = 1 / (b(k) - z - a(k-1)^2 m^{(k-1)}).
inline Mobius step_map(double coupling, double diag, cdouble z) {
  return {cdouble(0.0), cdouble(1.0), cdouble(-coupling * coupling), diag - z};
}

// Weyl function of the right half-line starting at site s.
inline cdouble right_tail_m(const JacobiMatrix& j, long s, cdouble z) {
  if (j.is_periodic()) {
    Mobius m = step_map(j.a(s), j.b(s), z);
    for (long k = s + 1; k < s + j.period(); ++k) m = mobius_mul(m, step_map(j.a(k), j.b(k), z));
    return attracting_fixed_point(m);
  }
  return attracting_fixed_point(step_map(j.a(s), j.b(s), z));
}

// Weyl function of the left half-line ending at site s.
inline cdouble left_tail_m(const JacobiMatrix& j, long s, cdouble z) {
  if (j.is_periodic()) {
    Mobius m = step_map(j.a(s - 1), j.b(s), z);
    for (long k = s - 1; k > s - j.period(); --k) m = mobius_mul(m, step_map(j.a(k - 1), j.b(k), z));
    return attracting_fixed_point(m);
  }
  return attracting_fixed_point(step_map(j.a(s - 1), j.b(s), z));
}

// Weyl functions by backward continued fraction from the tail closure:
// right m^{(s)} = 1 / (b(s) - z - a(s)^2 m^{(s+1)}),
// left  m^{(s)} = 1 / (b(s) - z - a(s-1)^2 m^{(s-1)}).
inline cdouble right_weyl(const JacobiMatrix& j, long s, cdouble z) {
  if (j.is_periodic() || s > j.last()) return right_tail_m(j, s, z);
  cdouble m = right_tail_m(j, j.last() + 1, z);
  for (long k = j.last(); k >= s; --k) m = 1.0 / (j.b(k) - z - j.a(k) * j.a(k) * m);
  return m;
}

inline cdouble left_weyl(const JacobiMatrix& j, long s, cdouble z) {
  if (j.is_periodic() || s < j.first()) return left_tail_m(j, s, z);
  cdouble m = left_tail_m(j, j.first() - 1, z);
  for (long k = j.first(); k <= s; ++k) m = 1.0 / (j.b(k) - z - j.a(k - 1) * j.a(k - 1) * m);
  return m;
}

// Left and right continued-fraction parts around site n for spectral-tail
// operators, obtained by peeling the half-line transforms at 0.
inline std::pair<cdouble, cdouble> spectral_tail_parts(const JacobiMatrix& j, long n, cdouble z) {
  const auto& tails = std::get<SpectralTails>(j.policy());
  cdouble left = tails.nu_minus(z), right = tails.nu_plus(z);
  auto peel = [](double diag_minus_z_re, cdouble zz, double coupling, cdouble prev) {
    if (prev == 0.0) throw NumericalError("cannot peel a vanishing half-line transform");
    return cdouble(diag_minus_z_re) - zz - coupling * coupling / prev;
  };
  auto build = [](double coupling, double diag, cdouble zz, cdouble prev) {
    return coupling * coupling / (diag - zz - prev);
  };
  if (n > 0) {
    for (long k = 1; k <= n; ++k) {
      right = peel(j.b(k), z, j.a(k - 1), right);
      left = build(j.a(k - 1), j.b(k - 1), z, left);
    }
  } else if (n < 0) {
    for (long k = 1; k <= -n; ++k) {
      left = peel(j.b(-k), z, j.a(-k), left);
      right = build(j.a(-k), j.b(-k + 1), z, right);
    }
  }
  return {left, right};
}

inline void require_site_in_window(const JacobiMatrix& j, long n) {
  if (n < j.first() || n > j.last()) {
    std::ostringstream os;
    os << "site " << n << " outside the coefficient window [" << j.first() << ", " << j.last() << "]";
    throw ValidationError(os.str());
  }
}

}  // namespace detail

namespace detail {

inline cdouble green_value(const JacobiMatrix& j, long n, cdouble z) {
  if (j.has_spectral_tails()) {
    require_site_in_window(j, n);
    auto [left, right] = spectral_tail_parts(j, n, z);
    return 1.0 / (j.b(n) - z - left - right);
  }
  if (!j.is_periodic()) require_site_in_window(j, n);
  const cdouble left = j.a(n - 1) * j.a(n - 1) * left_weyl(j, n - 1, z);
  const cdouble right = j.a(n) * j.a(n) * right_weyl(j, n + 1, z);
  return 1.0 / (j.b(n) - z - left - right);
}

}  // namespace detail

// g_n(z) = <delta_n, (J - z)^{-1} delta_n>, im z > 0.
inline cdouble green_function(const JacobiMatrix& j, long n, cdouble z) {
  require(z.imag() > 0.0, "green_function needs im z > 0");
  return audit::herglotz_value(detail::green_value(j, n, z), z.imag());
}

// Real boundary value g_n(t + i0) at a point t off the spectrum (inside a
// gap). Evaluated at t + 1e-13 i; the imaginary part is rounding noise there.
inline double green_function_real(const JacobiMatrix& j, long n, double t) {
  return detail::green_value(j, n, {t, 1e-13}).real();
}

// H(z) = -1 / g_0(z).
inline cdouble h_function(const JacobiMatrix& j, cdouble z) {
  return audit::herglotz_value(-1.0 / green_function(j, 0, z), z.imag());
}

enum class HalfLine { plus, minus };

// Stieltjes transform of nu_+ = a(0)^2 rho_+ (or nu_- = a(-1)^2 rho_-).
inline cdouble halfline_stieltjes(const JacobiMatrix& j, HalfLine side, cdouble z) {
  require(z.imag() > 0.0, "halfline_stieltjes needs im z > 0");
  if (j.has_spectral_tails()) {
    const auto& t = std::get<SpectralTails>(j.policy());
    return side == HalfLine::plus ? t.nu_plus(z) : t.nu_minus(z);
  }
  const double c = side == HalfLine::plus ? j.a(0) : j.a(-1);
  if (c == 0.0) return 0.0;
  return audit::herglotz_value(
      c * c * (side == HalfLine::plus ? detail::right_weyl(j, 1, z) : detail::left_weyl(j, -1, z)), z.imag());
}

// d(J, J') = sum_{|n| <= n_max} 2^{-|n|} (|a(n) - a'(n)| + |b(n) - b'(n)|).
inline double operator_distance(const JacobiMatrix& j1, const JacobiMatrix& j2, long n_max) {
  double s = 0.0;
  for (long n = -n_max; n <= n_max; ++n)
    s += std::ldexp(std::abs(j1.a(n) - j2.a(n)) + std::abs(j1.b(n) - j2.b(n)), -static_cast<int>(std::abs(n)));
  return s;
}

}  // namespace rlj
