#pragma once

// Maps between Jacobi coefficients and spectral data.
//
//   forward:  J -> g_0, H = -1/g_0, xi, and (for J in R_0(K)) the torus
//             coordinates (mu_j, sigma_j) of each gap
//   inverse:  (nu_+, nu_-, A) -> J via the three-term recurrence of the
//             normalized half-line measures; (K, mu, sigma) -> J
//
// plus the y-regularized reflectionless test Re g_n(t + i0) = 0 on B.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "rlj/error.hpp"
#include "rlj/jacobi.hpp"
#include "rlj/krein.hpp"
#include "rlj/measures.hpp"
#include "rlj/sets.hpp"

namespace rlj {

// ---------------------------------------------------------------------------
// xi from J

struct XiFitOptions {
  double y = 1e-5;
  double snap = 0.02;  // values within this of 0, 1/2, 1 are snapped
};

// Samples (1/pi) arg H(t + iy) on an increasing grid inside (-R, R) and fits
// a step function (breaks halfway between samples whose values differ).
inline KreinFunction xi_from_J(const JacobiMatrix& j, double radius, const std::vector<double>& grid,
                               const XiFitOptions& opt = {}) {
  require(!grid.empty(), "xi_from_J needs a non-empty grid");
  require(opt.y > 0.0, "xi_from_J needs y > 0");
  std::vector<double> vals;
  vals.reserve(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    require(grid[i] > -radius && grid[i] < radius, "xi_from_J grid must lie inside (-R, R)");
    if (i > 0) require(grid[i] > grid[i - 1], "xi_from_J grid must be increasing");
    double v = std::arg(h_function(j, {grid[i], opt.y})) / std::numbers::pi;
    v = std::clamp(v, 0.0, 1.0);
    for (double target : {0.0, 0.5, 1.0})
      if (std::abs(v - target) <= opt.snap) v = target;
    vals.push_back(v);
  }
  std::vector<double> breaks{-radius};
  std::vector<double> values{vals.front()};
  for (std::size_t i = 1; i < vals.size(); ++i) {
    if (vals[i] == values.back()) continue;
    breaks.push_back(0.5 * (grid[i - 1] + grid[i]));
    values.push_back(vals[i]);
  }
  breaks.push_back(radius);
  return {radius, std::move(breaks), std::move(values)};
}

// ---------------------------------------------------------------------------
// Inverse map from half-line measures

struct RecurrenceCoefficients {
  std::vector<double> diag;     // b(1), b(2), ... (or b(-1), b(-2), ...)
  std::vector<double> offdiag;  // a(1), a(2), ... (or a(-2), a(-3), ...)
  int determined = 0;           // number of determined diagonal entries
};

// Lanczos on the multiplication operator of a discrete probability measure,
// with full reorthogonalization (two passes of classical Gram-Schmidt).
inline RecurrenceCoefficients lanczos_recurrence(const std::vector<std::pair<double, double>>& points, int depth) {
  RecurrenceCoefficients out;
  const std::size_t m = points.size();
  if (m == 0 || depth <= 0) return out;
  double mass = 0.0;
  for (const auto& p : points) mass += p.second;
  if (mass <= 0.0) return out;
  Eigen::VectorXd x(m), q0(m);
  for (std::size_t i = 0; i < m; ++i) {
    x[i] = points[i].first;
    q0[i] = std::sqrt(points[i].second / mass);
  }
  const int steps = std::min<int>(depth, static_cast<int>(m));
  Eigen::MatrixXd q(m, steps);
  q.col(0) = q0;
  double beta_prev = 0.0;
  const double scale = std::max(1.0, x.cwiseAbs().maxCoeff());
  for (int k = 0; k < steps; ++k) {
    Eigen::VectorXd r = x.cwiseProduct(q.col(k));
    const double alpha = q.col(k).dot(r);
    r -= alpha * q.col(k);
    if (k > 0) r -= beta_prev * q.col(k - 1);
    for (int pass = 0; pass < 2; ++pass) r -= q.leftCols(k + 1) * (q.leftCols(k + 1).transpose() * r);
    out.diag.push_back(alpha);
    out.determined = k + 1;
    const double beta = r.norm();
    if (k + 1 == steps) {
      // the last coupling is available only if the measure has more points
      if (static_cast<std::size_t>(k + 1) < m) out.offdiag.push_back(beta);
      break;
    }
    if (beta <= 1e-13 * scale) {
      out.offdiag.push_back(0.0);
      break;
    }
    out.offdiag.push_back(beta);
    q.col(k + 1) = r / beta;
    beta_prev = beta;
  }
  return out;
}

struct ReconstructOptions {
  bool warn_on_sparse_discretization = true;
};

struct Reconstruction {
  JacobiMatrix jacobi;
  int determined_plus = 0;   // b(1..determined_plus) are determined
  int determined_minus = 0;  // b(-1..-determined_minus) are determined
  std::vector<std::string> warnings;
};

// a(0) = sqrt(nu_+(R)), a(-1) = sqrt(nu_-(R)), b(0) = -A; the remaining
// coefficients are the recurrence coefficients of rho_+ = nu_+/|nu_+| (sites
// n >= 1) and rho_- (sites n <= -1). Window: b on [-depth, depth], a on
// [-depth, depth-1]. Entries past the determined prefix are set to 0.
inline Reconstruction reconstruct_from_halfline(const SpectralMeasure& nu_plus, const SpectralMeasure& nu_minus,
                                                double a_const, int depth, const ReconstructOptions& opt = {}) {
  require(depth >= 1, "reconstruction depth must be >= 1");
  Reconstruction rec;
  const long n = depth;
  std::vector<double> a(2 * n, 0.0), b(2 * n + 1, 0.0);
  auto a_at = [&](long k) -> double& { return a[k + n]; };
  auto b_at = [&](long k) -> double& { return b[k + n]; };
  b_at(0) = -a_const;

  auto side = [&](const SpectralMeasure& nu, int sign, int& determined, const char* name) {
    const double mass = total_mass(nu);
    if (mass <= 0.0) {
      rec.warnings.push_back(std::string(name) + " has zero mass: a(" + (sign > 0 ? "0" : "-1") +
                             ") = 0 and that half-line is undetermined");
      determined = 0;
      return;
    }
    (sign > 0 ? a_at(0) : a_at(-1)) = std::sqrt(mass);
    const auto pts = nu.discretize();
    if (opt.warn_on_sparse_discretization && pts.size() < static_cast<std::size_t>(10 * depth))
      rec.warnings.push_back(std::string(name) + ": " + std::to_string(pts.size()) +
                             " support points < 10 * depth; deep coefficients may be inaccurate");
    const auto rc = lanczos_recurrence(pts, depth);
    determined = rc.determined;
    if (rc.determined < depth)
      rec.warnings.push_back(std::string(name) + " is finitely supported: only " + std::to_string(rc.determined) +
                             " coefficients determined");
    for (int k = 0; k < rc.determined; ++k) {
      if (sign > 0)
        b_at(k + 1) = rc.diag[k];
      else
        b_at(-(k + 1)) = rc.diag[k];
    }
    for (std::size_t k = 0; k < rc.offdiag.size(); ++k) {
      if (sign > 0) {
        if (static_cast<long>(k) + 1 <= n - 1) a_at(static_cast<long>(k) + 1) = rc.offdiag[k];
      } else {
        if (static_cast<long>(k) + 2 <= n) a_at(-static_cast<long>(k) - 2) = rc.offdiag[k];
      }
    }
  };
  side(nu_plus, +1, rec.determined_plus, "nu_+");
  side(nu_minus, -1, rec.determined_minus, "nu_-");
  rec.jacobi = JacobiMatrix(std::move(a), std::move(b), -n);
  return rec;
}

// Stieltjes transforms of nu_+ and nu_- built from the closed form of H.
// On K the measure nu_+ must equal rho/2; only the parts off K are taken from
// the (discretized) measures, so the transforms stay exact near the bands.
inline SpectralTails spectral_tails_from_data(const KreinFunction& xi, const SpectralMeasure& rho,
                                              const SpectralMeasure& nu_plus, const FiniteGapSet& k) {
  const double a_const = constant_A(xi);
  SpectralMeasure rho_off = rho.off_set_part(k);
  SpectralMeasure plus_off = nu_plus.off_set_part(k);
  auto plus = [=](cdouble z) {
    return 0.5 * (eval_H(xi, z) - z - a_const) + stieltjes(plus_off, z) - 0.5 * stieltjes(rho_off, z);
  };
  auto minus = [=](cdouble z) { return eval_H(xi, z) - z - a_const - plus(z); };
  return {plus, minus};
}

// ---------------------------------------------------------------------------
// Torus coordinates of R_0(K)

struct TorusPoint {
  std::vector<double> mu;
  std::vector<int> sigma;
};

inline void validate_torus_point(const FiniteGapSet& k, TorusPoint& p) {
  const auto gs = k.gaps();
  if (p.mu.size() != gs.size() || p.sigma.size() != gs.size()) {
    std::ostringstream os;
    os << "torus point has " << p.mu.size() << " mu / " << p.sigma.size() << " sigma entries for " << gs.size()
       << " gaps";
    throw ValidationError(os.str());
  }
  for (std::size_t j = 0; j < gs.size(); ++j) {
    const double tol = 1e-12 * std::max(1.0, k.radius());
    require(p.mu[j] >= gs[j].lo - tol && p.mu[j] <= gs[j].hi + tol,
            "mu_" + std::to_string(j) + " outside its gap closure");
    p.mu[j] = std::clamp(p.mu[j], gs[j].lo, gs[j].hi);
    require(p.sigma[j] == 0 || p.sigma[j] == 1, "sigma entries must be 0 or 1");
  }
}

inline bool mu_at_endpoint(const Interval& gap, double mu) { return mu <= gap.lo || mu >= gap.hi; }

// xi = 1 left of K, 1/2 on K, 0 right of K, chi_(mu_j, b_j) on gap j.
inline KreinFunction xi_from_torus(const FiniteGapSet& k, TorusPoint p) {
  validate_torus_point(k, p);
  const double r = k.radius();
  std::vector<XiPiece> pieces;
  pieces.push_back({-r, k.min(), 1.0});
  const auto& bands = k.bands();
  const auto gs = k.gaps();
  for (std::size_t i = 0; i < bands.size(); ++i) {
    if (bands[i].length() > 0.0) pieces.push_back({bands[i].lo, bands[i].hi, 0.5});
    if (i < gs.size()) {
      const auto& g = gs[i];
      const double mu = p.mu[i];
      if (mu <= g.lo) {
        pieces.push_back({g.lo, g.hi, 1.0});
      } else if (mu >= g.hi) {
        pieces.push_back({g.lo, g.hi, 0.0});
      } else {
        pieces.push_back({g.lo, mu, 0.0});
        pieces.push_back({mu, g.hi, 1.0});
      }
    }
  }
  pieces.push_back({k.max(), r, 0.0});
  return KreinFunction::from_pieces(r, pieces);
}

// sigma per atom of rho (atoms sit at the interior mu_j, in gap order).
inline SplitSpec split_from_torus(const FiniteGapSet& k, const TorusPoint& p) {
  SplitSpec s;
  const auto gs = k.gaps();
  for (std::size_t j = 0; j < gs.size(); ++j)
    if (!mu_at_endpoint(gs[j], p.mu[j])) s.sigma.push_back(p.sigma[j]);
  return s;
}

struct TorusOptions {
  int nodes_per_band = kDefaultNodesPerBand;
  bool attach_spectral_tails = true;
};

struct SpectralData {
  KreinFunction xi;
  double a_const = 0.0;
  SpectralMeasure rho;
  SpectralMeasure nu_plus;
  SpectralMeasure nu_minus;
};

inline SpectralData spectral_data_from_torus(const FiniteGapSet& k, const TorusPoint& p, int nodes_per_band) {
  SpectralData d;
  d.xi = xi_from_torus(k, p);
  d.a_const = constant_A(d.xi);
  d.rho = extract_measure(d.xi, k, nodes_per_band);
  auto [plus, minus] = split_nu(d.rho, k, split_from_torus(k, p));
  d.nu_plus = std::move(plus);
  d.nu_minus = std::move(minus);
  return d;
}

// (K, mu, sigma) -> xi -> rho -> (nu_+, nu_-) -> J.
inline Reconstruction jacobi_from_torus(const FiniteGapSet& k, const TorusPoint& p, int depth,
                                        const TorusOptions& opt = {}) {
  const SpectralData d = spectral_data_from_torus(k, p, opt.nodes_per_band);
  Reconstruction rec = reconstruct_from_halfline(d.nu_plus, d.nu_minus, d.a_const, depth);
  if (opt.attach_spectral_tails)
    rec.jacobi = rec.jacobi.with_policy(spectral_tails_from_data(d.xi, d.rho, d.nu_plus, k));
  return rec;
}

// Circle coordinates z_j = e^{i pi x_j}: mu = a + x (b - a) with sigma = 1
// for 0 < x < 1, mu = a - x (b - a) with sigma = 0 for -1 < x < 0; z = 1 is
// mu = a and z = -1 is mu = b.
inline std::vector<cdouble> torus_circle_encode(const FiniteGapSet& k, TorusPoint p) {
  validate_torus_point(k, p);
  const auto gs = k.gaps();
  std::vector<cdouble> out;
  for (std::size_t j = 0; j < gs.size(); ++j) {
    const double len = gs[j].length();
    if (p.mu[j] <= gs[j].lo) {
      out.emplace_back(1.0, 0.0);
    } else if (p.mu[j] >= gs[j].hi) {
      out.emplace_back(-1.0, 0.0);
    } else {
      const double x = (p.mu[j] - gs[j].lo) / len;
      out.push_back(std::polar(1.0, std::numbers::pi * (p.sigma[j] == 1 ? x : -x)));
    }
  }
  return out;
}

inline TorusPoint torus_circle_decode(const FiniteGapSet& k, const std::vector<cdouble>& zs) {
  const auto gs = k.gaps();
  require(zs.size() == gs.size(), "one circle coordinate per gap required");
  TorusPoint p;
  for (std::size_t j = 0; j < gs.size(); ++j) {
    require(std::abs(std::abs(zs[j]) - 1.0) <= 1e-9, "circle coordinates must have modulus 1");
    const double x = std::arg(zs[j]) / std::numbers::pi;  // (-1, 1]
    const double len = gs[j].length();
    if (x == 0.0) {
      p.mu.push_back(gs[j].lo);
      p.sigma.push_back(0);
    } else if (x >= 1.0) {
      p.mu.push_back(gs[j].hi);
      p.sigma.push_back(0);
    } else if (x > 0.0) {
      p.mu.push_back(gs[j].lo + x * len);
      p.sigma.push_back(1);
    } else {
      p.mu.push_back(gs[j].lo - x * len);
      p.sigma.push_back(0);
    }
  }
  return p;
}

// Reads (mu_j, sigma_j) off an operator J in R_0(K): on each gap g_0 is real
// and increasing, its zero is mu_j (H has its pole there); sigma_j = 1 when
// the pole belongs to the right half-line transform.
inline TorusPoint torus_from_jacobi(const JacobiMatrix& j, const FiniteGapSet& k) {
  TorusPoint p;
  auto g0 = [&](double t) { return green_function_real(j, 0, t); };
  for (const auto& gap : k.gaps()) {
    const double eps = 1e-9 * gap.length();
    double lo = gap.lo + eps, hi = gap.hi - eps;
    const double glo = g0(lo), ghi = g0(hi);
    double mu;
    if (glo >= 0.0) {
      mu = gap.lo;
    } else if (ghi <= 0.0) {
      mu = gap.hi;
    } else {
      for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(lo)); ++it) {
        const double m = 0.5 * (lo + hi);
        (g0(m) < 0.0 ? lo : hi) = m;
      }
      mu = 0.5 * (lo + hi);
    }
    int sigma = 0;
    if (!mu_at_endpoint(gap, mu)) {
      const cdouble z{mu, 1e-7 * gap.length()};
      sigma = std::abs(halfline_stieltjes(j, HalfLine::plus, z)) > std::abs(halfline_stieltjes(j, HalfLine::minus, z))
                  ? 1
                  : 0;
    }
    p.mu.push_back(mu);
    p.sigma.push_back(sigma);
  }
  return p;
}

// Gauss quadrature measure of the window restricted to one half-line:
// eigenvalues of the truncated half-line matrix, weights a^2 (first
// eigenvector component)^2. Matches nu_+- in the first 2*depth-1 moments.
inline SpectralMeasure halfline_measure_from_window(const JacobiMatrix& j, HalfLine side, int depth) {
  require(depth >= 1, "depth must be >= 1");
  const double c = side == HalfLine::plus ? j.a(0) : j.a(-1);
  if (c == 0.0) return {};
  Eigen::VectorXd d(depth), e(depth > 1 ? depth - 1 : 0);
  int used = depth;
  for (int k = 0; k < depth; ++k) {
    const long site = side == HalfLine::plus ? k + 1 : -(k + 1);
    d[k] = j.b(site);
    if (k + 1 < depth) {
      const double coupling = side == HalfLine::plus ? j.a(site) : j.a(site - 1);
      if (coupling == 0.0) {
        used = k + 1;
        break;
      }
      e[k] = coupling;
    }
  }
  Eigen::VectorXd dd = d.head(used);
  Eigen::VectorXd ee = used > 1 ? Eigen::VectorXd(e.head(used - 1)) : Eigen::VectorXd();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(dd, ee, Eigen::ComputeEigenvectors);
  std::vector<Atom> atoms;
  for (int i = 0; i < used; ++i) {
    const double w = c * c * es.eigenvectors()(0, i) * es.eigenvectors()(0, i);
    if (w > 0.0) atoms.push_back({es.eigenvalues()[i], w});
  }
  return {std::move(atoms), {}};
}

// ---------------------------------------------------------------------------
// Reflectionless and spectral-inclusion checks

struct ReflectionlessOptions {
  double y = 1e-3;
  long n_min = 0;
  long n_max = 0;
  double tol = 1e-2;
  int samples_per_band = 24;
  double edge_zone_factor = 5.0;  // samples avoid [lo, lo + f y) and (hi - f y, hi]
  bool extrapolate = true;        // Richardson over y, y/10, y/100
};

struct ReflectionlessReport {
  bool pass = false;
  double max_abs_re = 0.0;      // the tested quantity (extrapolated if enabled)
  double max_abs_re_raw = 0.0;  // |Re g_n(t + iy)| at the given y
  double worst_t = 0.0;
  long worst_n = 0;
  int samples = 0;
  int vacuous_bands = 0;  // bands too narrow to hold a sample
};

inline ReflectionlessReport is_reflectionless(const JacobiMatrix& j, const FiniteGapSet& b,
                                              const ReflectionlessOptions& opt = {}) {
  require(opt.y > 0.0 && opt.y <= 0.1, "reflectionless check needs y in (0, 0.1]");
  require(opt.n_min <= opt.n_max, "empty site range");
  require(opt.samples_per_band >= 1, "need at least one sample per band");
  ReflectionlessReport rep;
  for (const auto& band : b.bands()) {
    const double lo = band.lo + opt.edge_zone_factor * opt.y;
    const double hi = band.hi - opt.edge_zone_factor * opt.y;
    if (!(hi > lo)) {
      ++rep.vacuous_bands;
      continue;
    }
    for (int s = 0; s < opt.samples_per_band; ++s) {
      const double t = opt.samples_per_band == 1 ? 0.5 * (lo + hi)
                                                 : lo + (hi - lo) * s / (opt.samples_per_band - 1.0);
      for (long n = opt.n_min; n <= opt.n_max; ++n) {
        const double r0 = green_function(j, n, {t, opt.y}).real();
        double value = r0;
        if (opt.extrapolate) {
          const double r1 = green_function(j, n, {t, opt.y / 10}).real();
          const double r2 = green_function(j, n, {t, opt.y / 100}).real();
          const double e01 = (10.0 * r1 - r0) / 9.0;
          const double e12 = (10.0 * r2 - r1) / 9.0;
          value = (100.0 * e12 - e01) / 99.0;
        }
        ++rep.samples;
        rep.max_abs_re_raw = std::max(rep.max_abs_re_raw, std::abs(r0));
        if (std::abs(value) >= rep.max_abs_re) {
          rep.max_abs_re = std::abs(value);
          rep.worst_t = t;
          rep.worst_n = n;
        }
      }
    }
  }
  rep.pass = rep.max_abs_re < opt.tol;
  return rep;
}

struct SpectrumInclusionReport {
  bool pass = true;
  int poles_found = 0;  // sign reversals of the increasing functions g_0, g_1
  double worst_location = 0.0;
};

// sigma(J) within K, tested on the gaps of K and on one unit beyond each end:
// off the spectrum g_0 and g_1 are real and strictly increasing, so any
// decrease between neighbouring samples marks an eigenvalue there.
inline SpectrumInclusionReport spectrum_in_set(const JacobiMatrix& j, const FiniteGapSet& k,
                                               int samples_per_gap = 400, double edge_fraction = 1e-3) {
  SpectrumInclusionReport rep;
  std::vector<Interval> zones = k.gaps();
  zones.push_back({k.min() - 1.0, k.min()});
  zones.push_back({k.max(), k.max() + 1.0});
  for (const auto& zone : zones) {
    const double pad = edge_fraction * zone.length();
    for (long n : {0L, 1L}) {
      double prev = 0.0;
      for (int s = 0; s < samples_per_gap; ++s) {
        const double t = zone.lo + pad + (zone.length() - 2 * pad) * s / (samples_per_gap - 1.0);
        const double g = green_function_real(j, n, t);
        if (s > 0 && g < prev) {
          ++rep.poles_found;
          rep.worst_location = t;
          rep.pass = false;
        }
        prev = g;
      }
    }
  }
  return rep;
}

}  // namespace rlj
