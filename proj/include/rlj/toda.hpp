#pragma once

// Polynomial Toda flows  dJ/dt = [p_a(J), J]  on p-periodic Jacobi matrices,
// run on the periodic quotient: a matrix is stored by its diagonals
// M(n, n + k), n mod p, |k| <= w.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "rlj/error.hpp"
#include "rlj/jacobi.hpp"
#include "rlj/sets.hpp"

namespace rlj {

struct PeriodicJacobi {
  std::vector<double> a;  // a(0..p-1), couples n and n+1
  std::vector<double> b;  // b(0..p-1)

  int period() const { return static_cast<int>(b.size()); }
  double a_at(long n) const { return a[mod(n)]; }
  double b_at(long n) const { return b[mod(n)]; }

  void validate(bool strict_positive = true) const {
    require(!b.empty(), "periodic Jacobi matrix needs period >= 1");
    require(a.size() == b.size(), "periodic Jacobi matrix needs as many a entries as b entries");
    for (double x : a) {
      require(std::isfinite(x), "a entries must be finite");
      require(strict_positive ? x > 0.0 : x >= 0.0, strict_positive ? "Toda flows need a(n) > 0" : "a(n) must be >= 0");
    }
    for (double x : b) require(std::isfinite(x), "b entries must be finite");
  }

  JacobiMatrix to_jacobi() const { return JacobiMatrix::periodic(a, b); }

  // sup-norm bound on ||J||
  double norm_bound() const {
    double s = 0.0;
    for (int n = 0; n < period(); ++n) s = std::max(s, std::abs(b[n]) + a[n] + a_at(n - 1));
    return s;
  }

 private:
  std::size_t mod(long n) const {
    const long p = static_cast<long>(b.size());
    return static_cast<std::size_t>(((n % p) + p) % p);
  }
};

// coefficients c0 + c1 x + c2 x^2 + ...
using Polynomial = std::vector<double>;

inline int degree(const Polynomial& p) {
  int d = static_cast<int>(p.size()) - 1;
  while (d > 0 && p[d] == 0.0) --d;
  return std::max(d, 0);
}

class BandedPeriodic {
 public:
  BandedPeriodic(int period, int width) : p_(period), w_(width), c_(period * (2 * width + 1), 0.0) {
    require(period >= 1 && width >= 0, "banded matrix needs period >= 1 and width >= 0");
  }

  static BandedPeriodic identity(int period, int width = 0) {
    BandedPeriodic m(period, width);
    for (int n = 0; n < period; ++n) m.at(n, 0) = 1.0;
    return m;
  }

  static BandedPeriodic from_jacobi(const PeriodicJacobi& j) {
    BandedPeriodic m(j.period(), 1);
    for (int n = 0; n < j.period(); ++n) {
      m.at(n, 0) = j.b[n];
      m.at(n, 1) = j.a[n];
      m.at(n, -1) = j.a_at(n - 1);
    }
    return m;
  }

  int period() const { return p_; }
  int width() const { return w_; }

  // M(n, n + k)
  double operator()(long n, int k) const {
    if (k < -w_ || k > w_) return 0.0;
    return c_[idx(n, k)];
  }
  double& at(long n, int k) {
    require(k >= -w_ && k <= w_, "banded entry outside the stored width");
    return c_[idx(n, k)];
  }

  BandedPeriodic resized(int width) const {
    BandedPeriodic m(p_, width);
    for (int n = 0; n < p_; ++n)
      for (int k = -std::min(w_, width); k <= std::min(w_, width); ++k) m.at(n, k) = (*this)(n, k);
    return m;
  }

  double max_abs() const {
    double s = 0.0;
    for (double x : c_) s = std::max(s, std::abs(x));
    return s;
  }

  // max |M(n, n+k) - M(n+k, n)|
  double asymmetry() const {
    double s = 0.0;
    for (int n = 0; n < p_; ++n)
      for (int k = 1; k <= w_; ++k) s = std::max(s, std::abs((*this)(n, k) - (*this)(n + k, -k)));
    return s;
  }

  friend BandedPeriodic operator*(const BandedPeriodic& x, const BandedPeriodic& y) {
    require(x.p_ == y.p_, "banded product needs equal periods");
    BandedPeriodic out(x.p_, x.w_ + y.w_);
    for (int n = 0; n < x.p_; ++n)
      for (int l = -x.w_; l <= x.w_; ++l) {
        const double v = x(n, l);
        if (v == 0.0) continue;
        for (int m = -y.w_; m <= y.w_; ++m) out.at(n, l + m) += v * y(n + l, m);
      }
    return out;
  }

  friend BandedPeriodic operator+(const BandedPeriodic& x, const BandedPeriodic& y) {
    require(x.p_ == y.p_, "banded sum needs equal periods");
    BandedPeriodic out(x.p_, std::max(x.w_, y.w_));
    for (int n = 0; n < x.p_; ++n)
      for (int k = -out.w_; k <= out.w_; ++k) out.at(n, k) = x(n, k) + y(n, k);
    return out;
  }

  friend BandedPeriodic operator-(const BandedPeriodic& x, const BandedPeriodic& y) {
    BandedPeriodic ny = y;
    for (double& v : ny.c_) v = -v;
    return x + ny;
  }

  BandedPeriodic scaled(double s) const {
    BandedPeriodic m = *this;
    for (double& v : m.c_) v *= s;
    return m;
  }

  // Dense matrix of N consecutive sites (N a multiple of the period), with
  // periodic wrap-around.
  Eigen::MatrixXd dense_block(int sites) const {
    require(sites >= 1 && sites % p_ == 0, "dense block size must be a multiple of the period");
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(sites, sites);
    for (int n = 0; n < sites; ++n)
      for (int k = -w_; k <= w_; ++k) {
        const int col = ((n + k) % sites + sites) % sites;
        m(n, col) += (*this)(n, k);
      }
    return m;
  }

 private:
  std::size_t idx(long n, int k) const {
    const long p = p_;
    const long r = ((n % p) + p) % p;
    return static_cast<std::size_t>(r * (2 * w_ + 1) + (k + w_));
  }

  int p_;
  int w_;
  std::vector<double> c_;
};

inline BandedPeriodic poly_of_J(const PeriodicJacobi& j, const Polynomial& poly, int bandwidth) {
  require(!poly.empty(), "polynomial needs at least one coefficient");
  const int d = degree(poly);
  require(bandwidth >= d, "bandwidth must be at least the polynomial degree");
  const BandedPeriodic jm = BandedPeriodic::from_jacobi(j);
  BandedPeriodic r = BandedPeriodic::identity(j.period()).scaled(poly[d]);
  for (int i = d - 1; i >= 0; --i) r = r * jm + BandedPeriodic::identity(j.period()).scaled(poly[i]);
  return r.resized(bandwidth);
}

inline BandedPeriodic antisymmetric_part(const BandedPeriodic& m, double tol = 1e-12) {
  const double asym = m.asymmetry();
  if (asym > tol * std::max(1.0, m.max_abs())) {
    std::ostringstream os;
    os << "antisymmetric part needs a symmetric matrix; asymmetry " << asym;
    throw ValidationError(os.str());
  }
  BandedPeriodic out(m.period(), m.width());
  for (int n = 0; n < m.period(); ++n)
    for (int k = 1; k <= m.width(); ++k) {
      out.at(n, k) = m(n, k);
      out.at(n, -k) = -m(n, -k);
    }
  return out;
}

struct TodaState {
  double t = 0.0;
  PeriodicJacobi j;
};

struct TodaOptions {
  int record_every = 1;
  double blowup_factor = 2.0;  // abort once the norm bound exceeds this times its start value
};

struct TodaTrajectory {
  std::vector<TodaState> states;
  double max_resymmetrization = 0.0;   // largest |C(n,n+1) - C(n+1,n)| seen in [P, J]
  double max_off_tridiagonal = 0.0;    // largest entry of [P, J] beyond the first off-diagonal
  long steps = 0;
};

namespace detail {

struct TodaRhs {
  std::vector<double> da, db;
  double asym = 0.0;
  double off = 0.0;
};

inline TodaRhs toda_rhs(const PeriodicJacobi& j, const Polynomial& poly) {
  const int d = std::max(1, degree(poly));
  const BandedPeriodic jm = BandedPeriodic::from_jacobi(j);
  const BandedPeriodic pa = antisymmetric_part(poly_of_J(j, poly, d), 1e-10);
  const BandedPeriodic c = pa * jm - jm * pa;
  TodaRhs r;
  const int p = j.period();
  r.da.resize(p);
  r.db.resize(p);
  for (int n = 0; n < p; ++n) {
    r.db[n] = c(n, 0);
    r.da[n] = 0.5 * (c(n, 1) + c(n + 1, -1));
    r.asym = std::max(r.asym, std::abs(c(n, 1) - c(n + 1, -1)));
    for (int k = 2; k <= c.width(); ++k) r.off = std::max({r.off, std::abs(c(n, k)), std::abs(c(n, -k))});
  }
  return r;
}

inline PeriodicJacobi axpy(const PeriodicJacobi& j, double h, const TodaRhs& r) {
  PeriodicJacobi out = j;
  for (int n = 0; n < j.period(); ++n) {
    out.a[n] += h * r.da[n];
    out.b[n] += h * r.db[n];
  }
  return out;
}

}  // namespace detail

// Classical RK4 with fixed step dt up to t_end (the last step is shortened to
// land on t_end).
inline TodaTrajectory toda_flow(const PeriodicJacobi& j0, const Polynomial& poly, double t_end, double dt,
                                const TodaOptions& opt = {}) {
  j0.validate();
  require(!poly.empty(), "polynomial needs at least one coefficient");
  require(dt > 0.0 && std::isfinite(dt), "time step must be positive");
  require(t_end >= 0.0 && std::isfinite(t_end), "end time must be non-negative");
  require(opt.record_every >= 1, "record_every must be >= 1");
  TodaTrajectory tr;
  const double norm0 = j0.norm_bound();
  PeriodicJacobi j = j0;
  double t = 0.0;
  tr.states.push_back({t, j});
  const long steps = static_cast<long>(std::ceil(t_end / dt - 1e-9));
  for (long s = 0; s < steps; ++s) {
    const double h = std::min(dt, t_end - t);
    const auto k1 = detail::toda_rhs(j, poly);
    const auto k2 = detail::toda_rhs(detail::axpy(j, 0.5 * h, k1), poly);
    const auto k3 = detail::toda_rhs(detail::axpy(j, 0.5 * h, k2), poly);
    const auto k4 = detail::toda_rhs(detail::axpy(j, h, k3), poly);
    for (int n = 0; n < j.period(); ++n) {
      j.a[n] += h / 6.0 * (k1.da[n] + 2.0 * k2.da[n] + 2.0 * k3.da[n] + k4.da[n]);
      j.b[n] += h / 6.0 * (k1.db[n] + 2.0 * k2.db[n] + 2.0 * k3.db[n] + k4.db[n]);
    }
    for (const auto* k : {&k1, &k2, &k3, &k4}) {
      tr.max_resymmetrization = std::max(tr.max_resymmetrization, k->asym);
      tr.max_off_tridiagonal = std::max(tr.max_off_tridiagonal, k->off);
    }
    t = (s + 1 == steps) ? t_end : t + h;
    const double nb = j.norm_bound();
    if (!std::isfinite(nb) || nb > opt.blowup_factor * std::max(norm0, 1e-300)) {
      std::ostringstream os;
      os << "Toda flow blew up at t = " << t << ": norm bound " << nb << " vs initial " << norm0;
      throw NumericalError(os.str());
    }
    for (double x : j.a)
      if (!(x > 0.0)) {
        std::ostringstream os;
        os << "Toda flow lost positivity of a(n) at t = " << t;
        throw NumericalError(os.str());
      }
    ++tr.steps;
    if ((s + 1) % opt.record_every == 0 || s + 1 == steps) tr.states.push_back({t, j});
  }
  return tr;
}

// ---------------------------------------------------------------------------
// Spectrum

// Delta(z) = trace of the transfer matrix over one period.
inline double discriminant(const PeriodicJacobi& j, double z) {
  double m00 = 1.0, m01 = 0.0, m10 = 0.0, m11 = 1.0;
  for (int n = 0; n < j.period(); ++n) {
    const double an = j.a[n];
    const double t00 = (z - j.b[n]) / an, t01 = -j.a_at(n - 1) / an;
    const double n00 = t00 * m00 + t01 * m10;
    const double n01 = t00 * m01 + t01 * m11;
    m10 = m00;
    m11 = m01;
    m00 = n00;
    m01 = n01;
  }
  return m00 + m11;
}

// Eigenvalues of the Bloch matrix with quasi-momentum theta (theta = 0:
// periodic, theta = pi: antiperiodic).
inline std::vector<double> bloch_eigenvalues(const PeriodicJacobi& j, double theta) {
  const int p = j.period();
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(p, p);
  const std::complex<double> phase = std::polar(1.0, theta);
  for (int n = 0; n < p; ++n) {
    h(n, n) += j.b[n];
    const int m = (n + 1) % p;
    const std::complex<double> c = n == p - 1 ? j.a[n] * phase : std::complex<double>(j.a[n]);
    h(m, n) += c;
    h(n, m) += std::conj(c);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
  std::vector<double> out(es.eigenvalues().data(), es.eigenvalues().data() + p);
  return out;
}

// Bands {z : |Delta(z)| <= 2}: edges are the 2p periodic/antiperiodic
// eigenvalues, refined by bisection on |Delta| - 2. Closed gaps are merged.
inline FiniteGapSet spectrum(const PeriodicJacobi& j, double radius = 0.0, double tol = 1e-10) {
  j.validate();
  std::vector<double> ev = bloch_eigenvalues(j, 0.0);
  const auto anti = bloch_eigenvalues(j, std::numbers::pi);
  ev.insert(ev.end(), anti.begin(), anti.end());
  std::sort(ev.begin(), ev.end());
  const double scale = std::max(1.0, j.norm_bound());
  auto outside = [&](double z) { return std::abs(discriminant(j, z)) - 2.0; };
  auto refine = [&](double seed, bool left_edge, double width) {
    const double eps = std::min(1e-6 * scale, 0.25 * width);
    if (!(eps > 0.0)) return seed;
    double out = left_edge ? seed - eps : seed + eps;
    double in = left_edge ? seed + eps : seed - eps;
    if (!(outside(out) > 0.0 && outside(in) <= 0.0)) return seed;
    while (std::abs(out - in) > tol * 1e-2) {
      const double m = 0.5 * (out + in);
      (outside(m) > 0.0 ? out : in) = m;
    }
    return 0.5 * (out + in);
  };
  std::vector<Interval> bands;
  for (std::size_t k = 0; k + 1 < ev.size(); k += 2) {
    const double w = ev[k + 1] - ev[k];
    Interval iv{refine(ev[k], true, w), refine(ev[k + 1], false, w)};
    if (!bands.empty() && iv.lo - bands.back().hi < kMinBandSeparation)
      bands.back().hi = std::max(bands.back().hi, iv.hi);
    else
      bands.push_back(iv);
  }
  double r = radius;
  if (r <= 0.0) r = std::max(std::abs(bands.front().lo), std::abs(bands.back().hi)) + 1.0;
  return {std::move(bands), r};
}

inline double block_trace(const PeriodicJacobi& j) {
  double s = 0.0;
  for (double x : j.b) s += x;
  return s;
}

inline double block_trace_sq(const PeriodicJacobi& j) {
  double s = 0.0;
  for (int n = 0; n < j.period(); ++n) s += j.b[n] * j.b[n] + 2.0 * j.a[n] * j.a[n];
  return s;
}

// max distance between matching band endpoints of two spectra with the same
// band count (infinity if the counts differ)
inline double band_edge_drift(const FiniteGapSet& k1, const FiniteGapSet& k2) {
  if (k1.band_count() != k2.band_count()) return std::numeric_limits<double>::infinity();
  double s = 0.0;
  for (std::size_t i = 0; i < k1.band_count(); ++i)
    s = std::max({s, std::abs(k1.bands()[i].lo - k2.bands()[i].lo), std::abs(k1.bands()[i].hi - k2.bands()[i].hi)});
  return s;
}

}  // namespace rlj
