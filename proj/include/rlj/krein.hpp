#pragma once

// Piecewise constant Krein functions xi : (-R, R) -> [0, 1] and everything
// that follows from them in closed form: the Herglotz function
//   H(z) = (z + R) exp( int_{-R}^{R} xi(t) dt / (t - z) ),
// its boundary values, the Hilbert transform of xi, the constant A of
// H(z) = z + A + int drho/(t-z), point masses of rho and the measure rho
// itself.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>
#include <tuple>
#include <vector>

#include "rlj/error.hpp"
#include "rlj/measures.hpp"
#include "rlj/sets.hpp"

namespace rlj {

struct XiPiece {
  double lo;
  double hi;
  double value;
};

class KreinFunction {
 public:
  KreinFunction() : KreinFunction(1.0, {-1.0, 1.0}, {0.0}) {}

  // breakpoints t_0 = -R < ... < t_m = R, values v_0..v_{m-1} in [0,1].
  // Adjacent equal values are merged (canonical form).
  KreinFunction(double radius, std::vector<double> breakpoints, std::vector<double> values) : radius_(radius) {
    require(std::isfinite(radius) && radius > 0.0, "Krein function radius must be positive");
    require(breakpoints.size() == values.size() + 1 && !values.empty(),
            "Krein function needs m+1 breakpoints for m values");
    const double tol = 1e-12 * radius;
    require(std::abs(breakpoints.front() + radius) <= tol, "first breakpoint must be -R");
    require(std::abs(breakpoints.back() - radius) <= tol, "last breakpoint must be R");
    breakpoints.front() = -radius;
    breakpoints.back() = radius;
    for (std::size_t k = 0; k < values.size(); ++k) {
      require(breakpoints[k + 1] > breakpoints[k], "Krein breakpoints must be strictly increasing");
      require(std::isfinite(values[k]) && values[k] >= 0.0 && values[k] <= 1.0, "Krein values must lie in [0,1]");
    }
    breaks_.push_back(breakpoints.front());
    for (std::size_t k = 0; k < values.size(); ++k) {
      if (!values_.empty() && values_.back() == values[k]) {
        breaks_.back() = breakpoints[k + 1];
      } else {
        values_.push_back(values[k]);
        breaks_.push_back(breakpoints[k + 1]);
      }
    }
  }

  static KreinFunction constant(double radius, double v) { return {radius, {-radius, radius}, {v}}; }

  // Pieces must tile (-R, R) in order.
  static KreinFunction from_pieces(double radius, const std::vector<XiPiece>& pieces) {
    require(!pieces.empty(), "no pieces");
    std::vector<double> b{pieces.front().lo};
    std::vector<double> v;
    for (std::size_t i = 0; i < pieces.size(); ++i) {
      if (i > 0) require(std::abs(pieces[i].lo - pieces[i - 1].hi) <= 1e-12 * radius, "pieces must be contiguous");
      b.push_back(pieces[i].hi);
      v.push_back(pieces[i].value);
    }
    return {radius, std::move(b), std::move(v)};
  }

  double radius() const { return radius_; }
  const std::vector<double>& breakpoints() const { return breaks_; }
  const std::vector<double>& values() const { return values_; }
  std::size_t piece_count() const { return values_.size(); }
  XiPiece piece(std::size_t k) const { return {breaks_[k], breaks_[k + 1], values_[k]}; }

  // Index of the piece containing x (right-continuous at breakpoints), or -1
  // outside [-R, R).
  int piece_index(double x) const {
    if (x < -radius_ || x >= radius_) return -1;
    auto it = std::upper_bound(breaks_.begin(), breaks_.end(), x);
    return static_cast<int>(it - breaks_.begin()) - 1;
  }

  // xi(x); zero outside (-R, R).
  double operator()(double x) const {
    int k = piece_index(x);
    return k < 0 ? 0.0 : values_[k];
  }

  bool is_breakpoint(double x, double tol = 0.0) const {
    if (tol == 0.0) tol = 1e-14 * radius_;
    return std::any_of(breaks_.begin(), breaks_.end(), [&](double t) { return std::abs(t - x) <= tol; });
  }

  // int_lo^hi xi(t) dt, clipped to (-R, R).
  double integral(double lo, double hi) const {
    double s = 0.0;
    for (std::size_t k = 0; k < values_.size(); ++k) {
      double a = std::max(lo, breaks_[k]), b = std::min(hi, breaks_[k + 1]);
      if (b > a) s += values_[k] * (b - a);
    }
    return s;
  }

  // Pieces clipped to [lo, hi].
  std::vector<XiPiece> pieces_in(double lo, double hi) const {
    std::vector<XiPiece> out;
    for (std::size_t k = 0; k < values_.size(); ++k) {
      double a = std::max(lo, breaks_[k]), b = std::min(hi, breaks_[k + 1]);
      if (b > a) out.push_back({a, b, values_[k]});
    }
    return out;
  }

  std::vector<XiPiece> pieces() const { return pieces_in(-radius_, radius_); }

  friend bool operator==(const KreinFunction&, const KreinFunction&) = default;

 private:
  double radius_;
  std::vector<double> breaks_;
  std::vector<double> values_;
};

// sum_k v_k [Log(t_{k+1} - z) - Log(t_k - z)], the exponent of H. Exact for
// step functions; each bracket has imaginary part in (0, pi) for im z > 0.
inline cdouble cauchy_integral(const KreinFunction& xi, cdouble z) {
  require(z.imag() > 0.0, "cauchy_integral needs im z > 0");
  const auto& t = xi.breakpoints();
  const auto& v = xi.values();
  cdouble s = 0.0;
  for (std::size_t k = 0; k < v.size(); ++k)
    if (v[k] != 0.0) s += v[k] * (std::log(cdouble(t[k + 1]) - z) - std::log(cdouble(t[k]) - z));
  return s;
}

inline cdouble eval_H(const KreinFunction& xi, cdouble z) {
  return audit::herglotz_value((z + xi.radius()) * std::exp(cauchy_integral(xi, z)), z.imag());
}

namespace detail {

inline void require_not_breakpoint(const KreinFunction& xi, double x) {
  if (xi.is_breakpoint(x)) {
    std::ostringstream os;
    os << "x = " << x << " is a breakpoint of xi; the boundary limit need not exist there";
    throw ValidationError(os.str());
  }
}

// sum_k v_k ln|(t_{k+1} - x)/(t_k - x)|, skipping one piece index.
inline double log_modulus_sum(const KreinFunction& xi, double x, int skip = -1) {
  const auto& t = xi.breakpoints();
  const auto& v = xi.values();
  double s = 0.0;
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (static_cast<int>(k) == skip || v[k] == 0.0) continue;
    s += v[k] * (std::log(std::abs(t[k + 1] - x)) - std::log(std::abs(t[k] - x)));
  }
  return s;
}

}  // namespace detail

// Principal value of int_{-R}^{R} xi(t) / (t - x) dt.
inline double hilbert_transform(const KreinFunction& xi, double x) {
  detail::require_not_breakpoint(xi, x);
  return detail::log_modulus_sum(xi, x);
}

// lim_{y -> 0+} H(x + iy): modulus (x+R) exp(Hilbert transform), argument
// pi xi(x).
inline cdouble boundary_H(const KreinFunction& xi, double x) {
  detail::require_not_breakpoint(xi, x);
  const double r = xi.radius();
  const double mod = std::exp(detail::log_modulus_sum(xi, x));
  if (x < -r || x > r) return cdouble((x + r) * mod, 0.0);
  return std::polar((x + r) * mod, std::numbers::pi * xi(x));
}

// A = R - int xi.
inline double constant_A(const KreinFunction& xi) { return xi.radius() - xi.integral(-xi.radius(), xi.radius()); }

// Weight of the point mass of rho at an interior 0 -> 1 jump of xi:
// lim y |H(mu + iy)| = (mu + R) (t_right - mu) prod_{other pieces} |...|^{v}.
inline double atom_weight(const KreinFunction& xi, double mu) {
  const auto& t = xi.breakpoints();
  const auto& v = xi.values();
  const double tol = 1e-12 * std::max(1.0, std::abs(mu));
  std::size_t k = 0;
  for (std::size_t i = 1; i + 1 < t.size(); ++i)
    if (std::abs(t[i] - mu) <= tol) k = i;
  if (k == 0 || v[k - 1] != 0.0 || v[k] != 1.0) {
    std::ostringstream os;
    os << "xi has no interior 0 -> 1 jump at mu = " << mu << "; rho has no point mass there";
    throw ValidationError(os.str());
  }
  const double m = t[k];
  return (m + xi.radius()) * (t[k + 1] - m) * std::exp(detail::log_modulus_sum(xi, m, static_cast<int>(k)));
}

// Positions of all interior 0 -> 1 jumps.
inline std::vector<double> atom_positions(const KreinFunction& xi) {
  std::vector<double> out;
  const auto& t = xi.breakpoints();
  const auto& v = xi.values();
  for (std::size_t k = 1; k < v.size(); ++k)
    if (v[k - 1] == 0.0 && v[k] == 1.0) out.push_back(t[k]);
  return out;
}

inline constexpr int kDefaultNodesPerBand = 256;

// rho for an arbitrary step xi: point masses at interior 0 -> 1 jumps and
// density (1/pi) |H(x)| sin(pi v) on every piece with 0 < v < 1.
inline SpectralMeasure extract_measure_general(const KreinFunction& xi, int nodes_per_band = kDefaultNodesPerBand) {
  std::vector<Atom> atoms;
  for (double mu : atom_positions(xi)) atoms.push_back({mu, atom_weight(xi, mu)});
  std::vector<AcBand> bands;
  const double r = xi.radius();
  for (std::size_t k = 0; k < xi.piece_count(); ++k) {
    const auto p = xi.piece(k);
    if (p.value <= 0.0 || p.value >= 1.0) continue;
    const double s = std::sin(std::numbers::pi * p.value);
    bands.push_back(AcBand::chebyshev({p.lo, p.hi}, nodes_per_band, [&](double x) {
      return (x + r) * std::exp(detail::log_modulus_sum(xi, x)) * s / std::numbers::pi;
    }));
  }
  return {std::move(atoms), std::move(bands)};
}

// Throws naming the violated clause unless xi is in X(K): xi = 1 left of K,
// 0 right of K, 1/2 on every band, and chi_(mu, b) on every gap (a, b).
inline void validate_xi_in_XK(const KreinFunction& xi, const FiniteGapSet& k) {
  const double r = xi.radius();
  require(std::abs(r - k.radius()) <= 1e-12 * r, "xi and K use different radii");
  auto fail = [](const std::string& what) { throw ValidationError("xi is not in X(K): " + what); };
  for (const auto& p : xi.pieces_in(-r, k.min()))
    if (p.value != 1.0) fail("xi must equal 1 left of K");
  for (const auto& p : xi.pieces_in(k.max(), r))
    if (p.value != 0.0) fail("xi must equal 0 right of K");
  const auto& bands = k.bands();
  for (std::size_t i = 0; i < bands.size(); ++i) {
    for (const auto& p : xi.pieces_in(bands[i].lo, bands[i].hi))
      if (p.value != 0.5) fail("xi must equal 1/2 on band " + std::to_string(i));
    if (bands[i].length() > 0.0 && xi.pieces_in(bands[i].lo, bands[i].hi).size() != 1)
      fail("band " + std::to_string(i) + " is split by a breakpoint");
  }
  const auto gs = k.gaps();
  for (std::size_t j = 0; j < gs.size(); ++j) {
    auto ps = xi.pieces_in(gs[j].lo, gs[j].hi);
    bool ok = (ps.size() == 1 && (ps[0].value == 0.0 || ps[0].value == 1.0)) ||
              (ps.size() == 2 && ps[0].value == 0.0 && ps[1].value == 1.0);
    if (!ok) fail("gap " + std::to_string(j) + " is not a single 0 -> 1 step chi_(mu, b)");
  }
}

inline SpectralMeasure extract_measure(const KreinFunction& xi, const FiniteGapSet& k,
                                       int nodes_per_band = kDefaultNodesPerBand) {
  validate_xi_in_XK(xi, k);
  return extract_measure_general(xi, nodes_per_band);
}

// xi dt as a measure (one constant-density cell per piece); used to compare
// Krein functions in the weak-* metric.
inline SpectralMeasure xi_measure(const KreinFunction& xi) {
  std::vector<AcBand> bands;
  for (const auto& p : xi.pieces()) {
    if (p.value == 0.0) continue;
    AcBand b;
    b.band = {p.lo, p.hi};
    b.nodes = {0.5 * (p.lo + p.hi)};
    b.density = {p.value};
    b.weights = {p.hi - p.lo};
    b.edges = {p.lo, p.hi};
    bands.push_back(std::move(b));
  }
  return {{}, std::move(bands)};
}

inline double weak_star_distance(const KreinFunction& x1, const KreinFunction& x2) {
  return weak_star_distance(xi_measure(x1), xi_measure(x2), std::max(x1.radius(), x2.radius()));
}

}  // namespace rlj
