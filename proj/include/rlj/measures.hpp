#pragma once

// Finite positive measures on the line made of point masses plus
// absolutely continuous pieces sampled on quadrature nodes. These carry the
// measure rho of the Herglotz representation H(z) = z + A + int drho/(t-z)
// and its half-line parts nu_+ and nu_-.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <sstream>
#include <utility>
#include <vector>

#include "rlj/audit.hpp"
#include "rlj/error.hpp"
#include "rlj/sets.hpp"

namespace rlj {

using cdouble = std::complex<double>;

struct Atom {
  double position = 0.0;
  double weight = 0.0;
};

// Density samples on one interval. `weights` integrate a function sampled at
// `nodes`; `edges` (size nodes+1) split the interval into cells, cell k
// carrying mass weights[k]*density[k] (used for exact CDF arithmetic).
struct AcBand {
  Interval band;
  std::vector<double> nodes;
  std::vector<double> density;
  std::vector<double> weights;
  std::vector<double> edges;

  double mass() const {
    double s = 0.0;
    for (std::size_t k = 0; k < nodes.size(); ++k) s += weights[k] * density[k];
    return s;
  }

  // Nodes t = mid + hw cos(theta), theta = (k + 1/2) pi / M, ascending.
  // Square-root (or inverse square-root) edge behaviour of the density turns
  // into a smooth periodic integrand in theta, where the midpoint rule is
  // spectrally accurate.
  template <class F>
  static AcBand chebyshev(Interval band, int m, F&& density_fn) {
    require(m >= 1, "need at least one node per band");
    require(band.hi > band.lo, "ac band must have positive length");
    AcBand out;
    out.band = band;
    const double mid = band.mid();
    const double hw = 0.5 * band.length();
    const double h = std::numbers::pi / m;
    out.nodes.resize(m);
    out.weights.resize(m);
    out.density.resize(m);
    out.edges.resize(m + 1);
    for (int j = 0; j < m; ++j) {
      // j counts from the left end, so theta runs from pi down to 0
      double theta = (m - j - 0.5) * h;
      out.nodes[j] = mid + hw * std::cos(theta);
      out.weights[j] = hw * std::sin(theta) * h;
    }
    for (int j = 0; j <= m; ++j) out.edges[j] = mid + hw * std::cos((m - j) * h);
    out.edges.front() = band.lo;
    out.edges.back() = band.hi;
    for (int j = 0; j < m; ++j) out.density[j] = density_fn(out.nodes[j]);
    return out;
  }

  // Arbitrary ascending nodes inside the band. Recognises the Chebyshev
  // layout (and reuses its weights); otherwise cells are bounded by node
  // midpoints and weights are the cell lengths.
  static AcBand from_samples(Interval band, std::vector<double> nodes, std::vector<double> density) {
    require(nodes.size() == density.size() && !nodes.empty(), "ac band: nodes/density size mismatch");
    require(band.hi > band.lo, "ac band must have positive length");
    for (std::size_t k = 0; k < nodes.size(); ++k) {
      require(band.contains(nodes[k]), "ac band node outside its interval");
      require(density[k] >= 0.0 && std::isfinite(density[k]), "ac density must be finite and >= 0");
      if (k > 0) require(nodes[k] > nodes[k - 1], "ac band nodes must be strictly increasing");
    }
    const int m = static_cast<int>(nodes.size());
    AcBand cheb = chebyshev(band, m, [](double) { return 0.0; });
    bool is_cheb = true;
    for (int k = 0; k < m && is_cheb; ++k)
      is_cheb = std::abs(cheb.nodes[k] - nodes[k]) <= 1e-12 * std::max(1.0, std::abs(nodes[k]));
    if (is_cheb) {
      cheb.density = std::move(density);
      return cheb;
    }
    AcBand out;
    out.band = band;
    out.nodes = std::move(nodes);
    out.density = std::move(density);
    out.edges.resize(m + 1);
    out.edges.front() = band.lo;
    out.edges.back() = band.hi;
    for (int k = 1; k < m; ++k) out.edges[k] = 0.5 * (out.nodes[k - 1] + out.nodes[k]);
    out.weights.resize(m);
    for (int k = 0; k < m; ++k) out.weights[k] = out.edges[k + 1] - out.edges[k];
    return out;
  }

  AcBand scaled(double c) const {
    AcBand out = *this;
    for (auto& d : out.density) d *= c;
    return out;
  }
};

class SpectralMeasure {
 public:
  SpectralMeasure() = default;
  SpectralMeasure(std::vector<Atom> atoms, std::vector<AcBand> bands)
      : atoms_(std::move(atoms)), bands_(std::move(bands)) {
    std::sort(atoms_.begin(), atoms_.end(), [](const Atom& a, const Atom& b) { return a.position < b.position; });
    std::sort(bands_.begin(), bands_.end(), [](const AcBand& a, const AcBand& b) { return a.band.lo < b.band.lo; });
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
      require(std::isfinite(atoms_[i].position), "atom position must be finite");
      require(atoms_[i].weight > 0.0 && std::isfinite(atoms_[i].weight), "atom weights must be finite and > 0");
      if (i > 0) require(atoms_[i].position > atoms_[i - 1].position, "atom positions must be distinct");
    }
  }

  const std::vector<Atom>& atoms() const { return atoms_; }
  const std::vector<AcBand>& ac_bands() const { return bands_; }
  bool empty() const { return atoms_.empty() && bands_.empty(); }

  SpectralMeasure scaled(double c) const {
    require(c >= 0.0, "measure scale factor must be >= 0");
    if (c == 0.0) return {};
    std::vector<Atom> a = atoms_;
    for (auto& x : a) x.weight *= c;
    std::vector<AcBand> b;
    for (const auto& x : bands_) b.push_back(x.scaled(c));
    return {std::move(a), std::move(b)};
  }

  // The measure as finitely many weighted points: atoms plus quadrature nodes.
  std::vector<std::pair<double, double>> discretize() const {
    std::vector<std::pair<double, double>> pts;
    for (const auto& a : atoms_) pts.emplace_back(a.position, a.weight);
    for (const auto& b : bands_)
      for (std::size_t k = 0; k < b.nodes.size(); ++k)
        if (b.density[k] > 0.0) pts.emplace_back(b.nodes[k], b.weights[k] * b.density[k]);
    std::sort(pts.begin(), pts.end());
    return pts;
  }

  // Parts not lying on K: atoms outside K and ac bands not contained in K.
  SpectralMeasure off_set_part(const FiniteGapSet& k) const {
    std::vector<Atom> a;
    for (const auto& x : atoms_)
      if (!k.contains(x.position)) a.push_back(x);
    std::vector<AcBand> b;
    for (const auto& x : bands_)
      if (!band_inside(x.band, k)) b.push_back(x);
    return {std::move(a), std::move(b)};
  }

  static bool band_inside(const Interval& iv, const FiniteGapSet& k) {
    for (const auto& b : k.bands())
      if (iv.lo >= b.lo - kEndpointTolerance && iv.hi <= b.hi + kEndpointTolerance) return true;
    return false;
  }

 private:
  std::vector<Atom> atoms_;
  std::vector<AcBand> bands_;
};

inline double total_mass(const SpectralMeasure& m) {
  double s = 0.0;
  for (const auto& a : m.atoms()) s += a.weight;
  for (const auto& b : m.ac_bands()) s += b.mass();
  return s;
}

// int dm(t) / (t - z); exact over atoms, band quadrature otherwise.
inline cdouble stieltjes(const SpectralMeasure& m, cdouble z) {
  require(z.imag() != 0.0, "stieltjes transform needs z off the real axis");
  cdouble s = 0.0;
  for (const auto& a : m.atoms()) s += a.weight / (a.position - z);
  for (const auto& b : m.ac_bands())
    for (std::size_t k = 0; k < b.nodes.size(); ++k) s += b.weights[k] * b.density[k] / (b.nodes[k] - z);
  return audit::herglotz_value(s, z.imag());
}

inline cdouble herglotz_assemble(double a_const, const SpectralMeasure& m, cdouble z) {
  require(z.imag() > 0.0, "herglotz_assemble needs im z > 0");
  return audit::herglotz_value(z + a_const + stieltjes(m, z), z.imag());
}

// How the measure rho is divided between the two half-lines. sigma has one
// 0/1 entry per atom; when g is present its entry (in [0,1]) overrides sigma
// as the fraction of that atom given to nu_+.
struct SplitSpec {
  std::vector<int> sigma;
  std::optional<std::vector<double>> g;
};

// nu_+ = (1/2) ac part on K + sum sigma_j w_j delta_{mu_j} (+ g-weighted atoms),
// nu_- = m - nu_+.
inline std::pair<SpectralMeasure, SpectralMeasure> split_nu(const SpectralMeasure& m, const FiniteGapSet& k,
                                                            const SplitSpec& s) {
  const auto& atoms = m.atoms();
  if (s.sigma.size() != atoms.size()) {
    std::ostringstream os;
    os << "split spec has " << s.sigma.size() << " sigma entries for " << atoms.size() << " atoms";
    throw ValidationError(os.str());
  }
  if (s.g) require(s.g->size() == atoms.size(), "split spec g must have one entry per atom");
  std::vector<Atom> plus, minus;
  for (std::size_t j = 0; j < atoms.size(); ++j) {
    require(s.sigma[j] == 0 || s.sigma[j] == 1, "sigma entries must be 0 or 1");
    double frac;
    if (s.g) {
      frac = (*s.g)[j];
      require(frac >= 0.0 && frac <= 1.0, "g entries must lie in [0,1]");
    } else {
      if (k.contains(atoms[j].position)) {
        std::ostringstream os;
        os << "atom at " << atoms[j].position << " lies on K; its split needs a g entry";
        throw ValidationError(os.str());
      }
      frac = s.sigma[j];
    }
    const double wp = frac * atoms[j].weight;
    const double wm = atoms[j].weight - wp;
    if (wm < -1e-15 * atoms[j].weight) throw ValidationError("invalid split spec: nu_- would be negative");
    if (wp > 0.0) plus.push_back({atoms[j].position, wp});
    if (wm > 0.0) minus.push_back({atoms[j].position, wm});
  }
  std::vector<AcBand> bp, bm;
  for (const auto& b : m.ac_bands()) {
    if (!SpectralMeasure::band_inside(b.band, k)) {
      std::ostringstream os;
      os << "ac band [" << b.band.lo << ", " << b.band.hi << "] is not contained in K";
      throw ValidationError(os.str());
    }
    bp.push_back(b.scaled(0.5));
    bm.push_back(b.scaled(0.5));
  }
  return {SpectralMeasure(std::move(plus), bp), SpectralMeasure(std::move(minus), bm)};
}

namespace detail {

// Piecewise linear cumulative mass function with jumps: events carry a jump
// and a change of slope at a position.
struct CdfEvent {
  double x;
  double jump;
  double dslope;
};

inline void append_cdf_events(const SpectralMeasure& m, double sign, std::vector<CdfEvent>& ev) {
  for (const auto& a : m.atoms()) ev.push_back({a.position, sign * a.weight, 0.0});
  for (const auto& b : m.ac_bands()) {
    for (std::size_t k = 0; k < b.nodes.size(); ++k) {
      const double q = sign * b.weights[k] * b.density[k];
      const double c0 = b.edges[k], c1 = b.edges[k + 1];
      if (c1 > c0) {
        ev.push_back({c0, 0.0, q / (c1 - c0)});
        ev.push_back({c1, 0.0, -q / (c1 - c0)});
      } else {
        ev.push_back({c0, q, 0.0});
      }
    }
  }
}

// int_lo^hi |g| for g linear from g0 to g1.
inline double abs_linear_integral(double g0, double g1, double len) {
  if (len <= 0.0) return 0.0;
  if ((g0 >= 0.0 && g1 >= 0.0) || (g0 <= 0.0 && g1 <= 0.0)) return 0.5 * len * (std::abs(g0) + std::abs(g1));
  return 0.5 * len * (g0 * g0 + g1 * g1) / (std::abs(g0) + std::abs(g1));
}

inline double cdf_l1(std::vector<CdfEvent> ev, double lo, double hi) {
  std::sort(ev.begin(), ev.end(), [](const CdfEvent& a, const CdfEvent& b) { return a.x < b.x; });
  double value = 0.0, slope = 0.0, x = lo, total = 0.0;
  std::size_t i = 0;
  // events left of the window only shift the starting value
  while (i < ev.size() && ev[i].x <= lo) {
    value += ev[i].jump + ev[i].dslope * (lo - ev[i].x);
    slope += ev[i].dslope;
    ++i;
  }
  while (x < hi) {
    const double next = (i < ev.size()) ? std::min(ev[i].x, hi) : hi;
    const double end_value = value + slope * (next - x);
    total += abs_linear_integral(value, end_value, next - x);
    value = end_value;
    x = next;
    while (i < ev.size() && ev[i].x <= x) {
      value += ev[i].jump;
      slope += ev[i].dslope;
      ++i;
    }
  }
  return total;
}

}  // namespace detail

// D(m1, m2) = int_{-R-1}^{R+1} |F1 - F2| dt with F the cumulative mass
// functions. Exact on the piecewise representation (no sampling).
inline double weak_star_distance(const SpectralMeasure& m1, const SpectralMeasure& m2, double radius) {
  require(radius > 0.0, "weak_star_distance needs R > 0");
  std::vector<detail::CdfEvent> ev;
  detail::append_cdf_events(m1, 1.0, ev);
  detail::append_cdf_events(m2, -1.0, ev);
  return detail::cdf_l1(std::move(ev), -radius - 1.0, radius + 1.0);
}

}  // namespace rlj
