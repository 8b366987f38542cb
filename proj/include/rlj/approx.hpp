#pragma once

// Finite-gap approximation of reflectionless operators.
//
// Given B (finite gap), xi = 1/2 on B, and a target split of the off-B part
// of rho between the half-lines, each SubdivisionPlan produces a set P_n and
// an operator J_n in R_0(P_n):
//
//   1. cut every gap of B into n equal sub-gaps separated by bands of width
//      delta (A_n);
//   2. replace xi on each sub-gap (a, b) by chi_(mu, b), mu = b - int_a^b xi,
//      deleting tiny bands next to sub-gaps where mu hits an endpoint;
//   3. split each remaining point mass into two twins carrying g w and
//      (1 - g) w by inserting a band of width delta^2 next to it;
//   4. reconstruct J_n with sigma = 1 on the g-twin, 0 on the other.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "rlj/error.hpp"
#include "rlj/jacobi.hpp"
#include "rlj/krein.hpp"
#include "rlj/measures.hpp"
#include "rlj/sets.hpp"
#include "rlj/spectral.hpp"

namespace rlj {

struct SubdivisionPlan {
  int n = 1;
  double delta = 0.0;
};

inline FiniteGapSet subdivide(const FiniteGapSet& a0, const SubdivisionPlan& plan) {
  require(plan.n >= 1, "subdivision needs n >= 1");
  if (plan.n == 1) return a0;
  require(plan.delta > 0.0, "subdivision band size must be positive");
  std::vector<Interval> bands;
  const auto& src = a0.bands();
  for (std::size_t i = 0; i < src.size(); ++i) {
    bands.push_back(src[i]);
    if (i + 1 == src.size()) break;
    const double a = src[i].hi, b = src[i + 1].lo;
    const double sub = ((b - a) - (plan.n - 1) * plan.delta) / plan.n;
    if (!(sub > 0.0)) {
      std::ostringstream os;
      os << "delta = " << plan.delta << " too large: " << plan.n - 1 << " bands do not fit in gap (" << a << ", "
         << b << ")";
      throw ValidationError(os.str());
    }
    for (int k = 1; k < plan.n; ++k) {
      const double lo = a + k * sub + (k - 1) * plan.delta;
      bands.push_back({lo, lo + plan.delta});
    }
  }
  return {std::move(bands), a0.radius()};
}

struct AveragedXi {
  KreinFunction xi;
  FiniteGapSet set;  // A_n with the deleted bands removed
  int deleted_bands = 0;
};

// Averages xi over the gaps of An. Bands of `keep` are never deleted (the
// deletion rule is meant for the subdivision bands only). Deletions where
// mu = b are applied first; mu = a deletions only touch bands still present,
// so every merged gap still carries a single 0 -> 1 step.
inline AveragedXi averaged_xi(const KreinFunction& xi, const FiniteGapSet& an,
                              const std::optional<FiniteGapSet>& keep = std::nullopt) {
  const double r = xi.radius();
  require(std::abs(r - an.radius()) <= 1e-12 * r, "xi and the set use different radii");
  for (const auto& p : xi.pieces_in(-r, an.min()))
    require(p.value == 1.0, "xi must equal 1 left of the set");
  for (const auto& p : xi.pieces_in(an.max(), r))
    require(p.value == 0.0, "xi must equal 0 right of the set");

  const auto& bands = an.bands();
  const auto gs = an.gaps();
  std::vector<double> mu(gs.size());
  for (std::size_t j = 0; j < gs.size(); ++j) {
    const double m = gs[j].hi - xi.integral(gs[j].lo, gs[j].hi);
    const double tol = kEndpointTolerance * std::max(1.0, std::abs(m));
    mu[j] = std::abs(m - gs[j].lo) <= tol ? gs[j].lo : std::abs(m - gs[j].hi) <= tol ? gs[j].hi : m;
    mu[j] = std::clamp(mu[j], gs[j].lo, gs[j].hi);
  }
  auto protected_band = [&](std::size_t i) {
    if (!keep) return false;
    const auto& kb = keep->bands();
    return std::find(kb.begin(), kb.end(), bands[i]) != kb.end();
  };
  // value carried by a deleted band: -1 kept, 0 or 1 after deletion
  std::vector<int> fill(bands.size(), -1);
  for (std::size_t j = 0; j < gs.size(); ++j)
    if (mu[j] >= gs[j].hi && !protected_band(j + 1)) fill[j + 1] = 0;
  for (std::size_t j = 0; j < gs.size(); ++j)
    if (mu[j] <= gs[j].lo && fill[j] < 0 && !protected_band(j)) fill[j] = 1;
  // the outermost bands bound the set; deleting them would change min/max
  fill.front() = -1;
  fill.back() = -1;

  AveragedXi out;
  std::vector<XiPiece> pieces;
  std::vector<Interval> kept;
  pieces.push_back({-r, an.min(), 1.0});
  for (std::size_t i = 0; i < bands.size(); ++i) {
    if (fill[i] < 0) {
      kept.push_back(bands[i]);
      if (bands[i].length() > 0.0) pieces.push_back({bands[i].lo, bands[i].hi, 0.5});
    } else {
      ++out.deleted_bands;
      if (bands[i].length() > 0.0) pieces.push_back({bands[i].lo, bands[i].hi, static_cast<double>(fill[i])});
    }
    if (i < gs.size()) {
      if (mu[i] > gs[i].lo) pieces.push_back({gs[i].lo, mu[i], 0.0});
      if (mu[i] < gs[i].hi) pieces.push_back({mu[i], gs[i].hi, 1.0});
    }
  }
  pieces.push_back({an.max(), r, 0.0});
  out.xi = KreinFunction::from_pieces(r, pieces);
  out.set = FiniteGapSet(std::move(kept), an.radius());
  return out;
}

// ---------------------------------------------------------------------------
// Weight carried by a tiny band [0, delta] sitting in a gap (-A, B)

inline double lemma32_h(double x, double a, double delta) { return std::sqrt(x * (delta - x)) / (a + x); }

// Density of rho on (0, delta) for the extremal arrangement: xi = 1 on
// (-A, 0), 1/2 on (0, delta), 0 on (delta, B), 0 on (-R, -A), 1 on (B, R).
inline double lemma32_density(double x, double a, double b, double delta, double radius) {
  return (x + radius) * lemma32_h(x, a, delta) * (radius - x) / (b - x) / std::numbers::pi;
}

// The extremal Krein function itself (useful for cross-checks).
inline KreinFunction lemma32_xi(double a, double b, double delta, double radius) {
  require(a > 0.0 && b > delta && delta > 0.0 && a < radius && b < radius, "tiny band weight needs 0 < delta < B and A, B < R");
  return KreinFunction::from_pieces(radius, {{-radius, -a, 0.0},
                                             {-a, 0.0, 1.0},
                                             {0.0, delta, 0.5},
                                             {delta, b, 0.0},
                                             {b, radius, 1.0}});
}

inline double lemma32_band_weight(double a, double b, double delta, double radius, int nodes = 512) {
  require(a > 0.0 && b > delta && delta > 0.0 && a < radius && b < radius, "tiny band weight needs 0 < delta < B and A, B < R");
  // x = delta/2 (1 - cos t) makes the sqrt edges smooth; midpoint rule in t
  const double h = std::numbers::pi / nodes;
  double s = 0.0;
  for (int k = 0; k < nodes; ++k) {
    const double t = (k + 0.5) * h;
    const double x = 0.5 * delta * (1.0 - std::cos(t));
    s += lemma32_density(x, a, b, delta, radius) * 0.5 * delta * std::sin(t) * h;
  }
  return s;
}

// ---------------------------------------------------------------------------
// Splitting a point mass

struct JumpNeighbourhood {
  double mu = 0.0;
  double left = 0.0;   // start of the 0-piece ending at mu
  double right = 0.0;  // end of the 1-piece starting at mu
};

inline JumpNeighbourhood jump_neighbourhood(const KreinFunction& xi, double mu) {
  atom_weight(xi, mu);  // throws unless xi jumps 0 -> 1 at mu
  const auto& t = xi.breakpoints();
  std::size_t k = 1;
  while (k + 1 < t.size() && std::abs(t[k] - mu) > 1e-12 * std::max(1.0, std::abs(mu))) ++k;
  return {t[k], t[k - 1], t[k + 1]};
}

// xi_delta = 1 on (mu - g delta, mu), 1/2 on (mu, mu + delta^2),
// 0 on (mu + delta^2, mu + (1 - g) delta), xi elsewhere.
inline KreinFunction split_point_mass(const KreinFunction& xi, double mu, double g, double delta) {
  require(g > 0.0 && g < 1.0, "split fraction g must lie in (0, 1)");
  require(delta > 0.0 && delta < 1.0, "splitting delta must lie in (0, 1)");
  const auto nb = jump_neighbourhood(xi, mu);
  const double m = nb.mu;
  if (!(m - nb.left > delta && nb.right - m > delta)) {
    std::ostringstream os;
    os << "insufficient clearance to split the point mass at " << m << ": need > " << delta
       << " on both sides, have " << m - nb.left << " and " << nb.right - m;
    throw ValidationError(os.str());
  }
  std::vector<XiPiece> pieces;
  for (const auto& p : xi.pieces()) {
    if (p.hi <= nb.left || p.lo >= nb.right) pieces.push_back(p);
  }
  pieces.push_back({nb.left, m - g * delta, 0.0});
  pieces.push_back({m - g * delta, m, 1.0});
  pieces.push_back({m, m + delta * delta, 0.5});
  pieces.push_back({m + delta * delta, m + (1.0 - g) * delta, 0.0});
  pieces.push_back({m + (1.0 - g) * delta, nb.right, 1.0});
  std::sort(pieces.begin(), pieces.end(), [](const XiPiece& a, const XiPiece& b) { return a.lo < b.lo; });
  return KreinFunction::from_pieces(xi.radius(), pieces);
}

inline Interval splitting_band(double mu, double delta) { return {mu, mu + delta * delta}; }

// h(x) = (x + R) exp(sum over the pieces of xi outside (mu - A, mu + B)),
// the factor of |H| contributed by everything outside the gap around mu.
inline double splitting_outer_h(const KreinFunction& xi, const JumpNeighbourhood& nb, double x) {
  double s = 0.0;
  for (const auto& p : xi.pieces()) {
    if (p.hi <= nb.left || p.lo >= nb.right) {
      if (p.value == 0.0) continue;
      s += p.value * std::log(std::abs((p.hi - x) / (p.lo - x)));
    }
  }
  return (x + xi.radius()) * std::exp(s);
}

struct TwinWeights {
  double left = 0.0;
  double right = 0.0;
};

// Closed form of the twin weights in coordinates centred at mu (gap (-A, B)):
//   left  = g^{1/2} (g + delta)^{1/2} (B + g delta) h(-g delta)
//   right = (1-g)^{1/2} (1 - g - delta)^{1/2} (B - (1-g) delta) h((1-g) delta)
inline TwinWeights splitting_twin_weights(const KreinFunction& xi, double mu, double g, double delta) {
  const auto nb = jump_neighbourhood(xi, mu);
  const double b = nb.right - nb.mu;
  const double xl = nb.mu - g * delta, xr = nb.mu + (1.0 - g) * delta;
  TwinWeights w;
  w.left = std::sqrt(g) * std::sqrt(g + delta) * (b + g * delta) * splitting_outer_h(xi, nb, xl);
  w.right = std::sqrt(1.0 - g) * std::sqrt(1.0 - g - delta) * (b - (1.0 - g) * delta) * splitting_outer_h(xi, nb, xr);
  return w;
}

// ---------------------------------------------------------------------------
// Data transport between nearby sets

inline TorusPoint transport_torus_data(const FiniteGapSet& k, const FiniteGapSet& k2, TorusPoint p,
                                       double min_gap_length = 0.0) {
  validate_torus_point(k, p);
  const auto g1 = k.gaps();
  const auto g2 = k2.gaps();
  TorusPoint out;
  for (const auto& g : g2) {
    out.mu.push_back(g.hi);
    out.sigma.push_back(0);
  }
  std::vector<bool> taken(g2.size(), false);
  for (std::size_t j = 0; j < g1.size(); ++j) {
    if (g1[j].length() < min_gap_length) continue;
    const bool interior = !mu_at_endpoint(g1[j], p.mu[j]);
    const double clearance =
        interior ? std::min(g1[j].hi - p.mu[j], p.mu[j] - g1[j].lo) : g1[j].length();
    int best = -1;
    double best_shift = 0.0;
    for (std::size_t i = 0; i < g2.size(); ++i) {
      const double shift = std::abs(g2[i].lo - g1[j].lo) + std::abs(g2[i].hi - g1[j].hi);
      if (shift < clearance / 10.0 && (best < 0 || shift < best_shift)) {
        best = static_cast<int>(i);
        best_shift = shift;
      }
    }
    if (best < 0 || taken[best]) {
      std::ostringstream os;
      os << "gap " << j << " (" << g1[j].lo << ", " << g1[j].hi << ") has no matching gap in the target set";
      throw ValidationError(os.str());
    }
    taken[best] = true;
    const auto& t = g2[best];
    if (p.mu[j] <= g1[j].lo) {
      out.mu[best] = t.lo;
      out.sigma[best] = 0;
    } else if (p.mu[j] >= g1[j].hi) {
      out.mu[best] = t.hi;
      out.sigma[best] = 0;
    } else {
      out.mu[best] = p.mu[j];
      out.sigma[best] = p.sigma[j];
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// The approximation pipeline

// rho for a step xi with every ac piece cut at the given points, so that
// each ac band lies either inside B or inside one of its gaps.
inline SpectralMeasure extract_measure_cut(const KreinFunction& xi, const std::vector<double>& cuts,
                                           int nodes_per_band) {
  std::vector<Atom> atoms;
  for (double mu : atom_positions(xi)) atoms.push_back({mu, atom_weight(xi, mu)});
  std::vector<AcBand> bands;
  const double r = xi.radius();
  for (const auto& p : xi.pieces()) {
    if (p.value <= 0.0 || p.value >= 1.0) continue;
    std::vector<double> edges{p.lo};
    for (double c : cuts)
      if (c > p.lo && c < p.hi) edges.push_back(c);
    edges.push_back(p.hi);
    const double s = std::sin(std::numbers::pi * p.value);
    for (std::size_t e = 0; e + 1 < edges.size(); ++e) {
      bands.push_back(AcBand::chebyshev({edges[e], edges[e + 1]}, nodes_per_band, [&](double x) {
        return (x + r) * std::exp(detail::log_modulus_sum(xi, x)) * s / std::numbers::pi;
      }));
    }
  }
  return {std::move(atoms), std::move(bands)};
}

// nu_+ = rho/2 on B plus fraction[j] of rho on gap j of B.
inline std::pair<SpectralMeasure, SpectralMeasure> split_by_gaps(const SpectralMeasure& rho, const FiniteGapSet& b,
                                                                 const std::vector<double>& fraction) {
  const auto gs = b.gaps();
  require(fraction.size() == gs.size(), "one split fraction per gap of B required");
  auto frac_at = [&](double x) -> double {
    if (b.contains(x)) return 0.5;
    const int j = b.gap_index(x);
    if (j < 0) throw ValidationError("rho has mass outside the convex hull of B");
    return fraction[j];
  };
  std::vector<Atom> plus, minus;
  for (const auto& a : rho.atoms()) {
    if (b.contains(a.position)) throw ValidationError("rho has a point mass on B; xi must equal 1/2 on B");
    const double f = frac_at(a.position);
    if (f > 0.0) plus.push_back({a.position, f * a.weight});
    if (f < 1.0) minus.push_back({a.position, (1.0 - f) * a.weight});
  }
  std::vector<AcBand> bp, bm;
  for (const auto& band : rho.ac_bands()) {
    const double f = frac_at(band.band.mid());
    if (f > 0.0) bp.push_back(band.scaled(f));
    if (f < 1.0) bm.push_back(band.scaled(1.0 - f));
  }
  return {SpectralMeasure(std::move(plus), std::move(bp)), SpectralMeasure(std::move(minus), std::move(bm))};
}

struct ApproxOptions {
  int depth = 40;
  int nodes_per_band = 256;
  long distance_sites = 40;  // d(J_n, J) sums over |n| <= this
  ReflectionlessOptions reflectionless{.y = 1e-3, .n_min = -1, .n_max = 1, .tol = 1e-2};
  bool check_spectrum = true;
};

// The operator J in R(B) described by (B, xi, split).
struct TargetOperator {
  KreinFunction xi;
  double a_const = 0.0;
  SpectralMeasure rho;
  SpectralMeasure nu_plus;
  SpectralMeasure nu_minus;
  Reconstruction rec;
};

inline std::vector<double> gap_fractions(const FiniteGapSet& b, const SplitSpec& split) {
  const std::size_t ng = b.gaps().size();
  if (split.g) {
    require(split.g->size() == ng, "split g must have one entry per gap of B");
    for (double g : *split.g) require(g >= 0.0 && g <= 1.0, "split g entries must lie in [0, 1]");
    return *split.g;
  }
  require(split.sigma.size() == ng, "split sigma must have one entry per gap of B");
  std::vector<double> out;
  for (int s : split.sigma) {
    require(s == 0 || s == 1, "sigma entries must be 0 or 1");
    out.push_back(s);
  }
  return out;
}

inline std::vector<double> band_endpoints(const FiniteGapSet& b) {
  std::vector<double> cuts;
  for (const auto& iv : b.bands()) {
    cuts.push_back(iv.lo);
    cuts.push_back(iv.hi);
  }
  return cuts;
}

inline TargetOperator target_operator(const FiniteGapSet& b, const KreinFunction& xi, const SplitSpec& split,
                                      const ApproxOptions& opt = {}) {
  const double r = xi.radius();
  require(std::abs(r - b.radius()) <= 1e-12 * r, "xi and B use different radii");
  for (const auto& band : b.bands())
    for (const auto& p : xi.pieces_in(band.lo, band.hi))
      require(p.value == 0.5, "xi must equal 1/2 on B");
  for (const auto& p : xi.pieces_in(-r, b.min())) require(p.value == 1.0, "xi must equal 1 left of B");
  for (const auto& p : xi.pieces_in(b.max(), r)) require(p.value == 0.0, "xi must equal 0 right of B");
  TargetOperator t;
  t.xi = xi;
  t.a_const = constant_A(xi);
  t.rho = extract_measure_cut(xi, band_endpoints(b), opt.nodes_per_band);
  auto [plus, minus] = split_by_gaps(t.rho, b, gap_fractions(b, split));
  t.nu_plus = std::move(plus);
  t.nu_minus = std::move(minus);
  t.rec = reconstruct_from_halfline(t.nu_plus, t.nu_minus, t.a_const, opt.depth);
  t.rec.jacobi = t.rec.jacobi.with_policy(spectral_tails_from_data(xi, t.rho, t.nu_plus, b));
  return t;
}

struct ApproxStage {
  SubdivisionPlan plan;
  FiniteGapSet set;  // P_n
  KreinFunction xi;  // xi_n after splitting
  TorusPoint torus;  // coordinates of J_n in R_0(P_n)
  Reconstruction rec;
  SpectralMeasure nu_plus;
  int deleted_bands = 0;
  int split_atoms = 0;
  int greedy_atoms = 0;
  double operator_distance = 0.0;  // d(J_n, J)
  double symmdiff = 0.0;           // |P_n Delta B|
  double nu_plus_distance = 0.0;   // D(nu_+^(n), nu_+)
  ReflectionlessReport reflectionless;
  SpectrumInclusionReport spectrum;
};

inline ApproxStage approximate_stage(const FiniteGapSet& b, const TargetOperator& target,
                                     const std::vector<double>& fractions, const SubdivisionPlan& plan,
                                     const ApproxOptions& opt) {
  ApproxStage st;
  st.plan = plan;
  const FiniteGapSet an = subdivide(b, plan);
  AveragedXi avg = averaged_xi(target.xi, an, b);
  st.deleted_bands = avg.deleted_bands;

  KreinFunction xi = avg.xi;
  std::vector<Interval> bands = avg.set.bands();
  struct Assigned {
    double position;
    int sigma;
  };
  std::vector<Assigned> fixed;
  std::vector<double> unsplit;  // atoms left for the greedy pass
  for (double mu : atom_positions(avg.xi)) {
    const int j = b.gap_index(mu);
    require(j >= 0, "averaged xi has a point mass outside the gaps of B");
    const double g = fractions[j];
    if (g == 0.0 || g == 1.0) {
      fixed.push_back({mu, static_cast<int>(g)});
      continue;
    }
    const auto nb = jump_neighbourhood(xi, mu);
    if (mu - nb.left > plan.delta && nb.right - mu > plan.delta && plan.delta < 1.0) {
      xi = split_point_mass(xi, mu, g, plan.delta);
      bands.push_back(splitting_band(mu, plan.delta));
      fixed.push_back({mu - g * plan.delta, 1});
      fixed.push_back({mu + (1.0 - g) * plan.delta, 0});
      ++st.split_atoms;
    } else {
      unsplit.push_back(mu);
    }
  }
  std::sort(bands.begin(), bands.end(), [](const Interval& x, const Interval& y) { return x.lo < y.lo; });
  st.set = FiniteGapSet(std::move(bands), b.radius());
  st.xi = xi;

  const SpectralMeasure rho = extract_measure(xi, st.set, opt.nodes_per_band);

  // greedy sigma for atoms that could not be split: heaviest first, each goes
  // to nu_+ when that brings the gap's nu_+ mass closer to its target
  if (!unsplit.empty()) {
    const auto bg = b.gaps();
    std::vector<double> target_mass(bg.size(), 0.0), assigned(bg.size(), 0.0);
    for (const auto& a : rho.atoms()) {
      const int j = b.gap_index(a.position);
      target_mass[j] += fractions[j] * a.weight;
      for (const auto& f : fixed)
        if (f.sigma == 1 && std::abs(f.position - a.position) <= 1e-12 * std::max(1.0, std::abs(a.position)))
          assigned[j] += a.weight;
    }
    for (const auto& band : rho.ac_bands()) {
      const int j = b.gap_index(band.band.mid());
      if (j < 0) continue;
      target_mass[j] += fractions[j] * band.mass();
      assigned[j] += 0.5 * band.mass();
    }
    std::vector<std::pair<double, double>> order;  // (weight, position)
    for (const auto& a : rho.atoms())
      for (double mu : unsplit)
        if (std::abs(mu - a.position) <= 1e-12 * std::max(1.0, std::abs(mu))) order.push_back({a.weight, mu});
    std::sort(order.begin(), order.end(), [](const auto& x, const auto& y) {
      return x.first != y.first ? x.first > y.first : x.second < y.second;
    });
    for (const auto& [w, mu] : order) {
      const int j = b.gap_index(mu);
      const int s = assigned[j] + 0.5 * w <= target_mass[j] ? 1 : 0;
      if (s == 1) assigned[j] += w;
      fixed.push_back({mu, s});
      ++st.greedy_atoms;
    }
  }

  SplitSpec spec;
  for (const auto& a : rho.atoms()) {
    int s = -1;
    for (const auto& f : fixed)
      if (std::abs(f.position - a.position) <= 1e-12 * std::max(1.0, std::abs(a.position))) s = f.sigma;
    require(s >= 0, "internal error: point mass without a sigma assignment");
    spec.sigma.push_back(s);
  }
  auto [plus, minus] = split_nu(rho, st.set, spec);
  st.nu_plus = plus;
  st.rec = reconstruct_from_halfline(plus, minus, constant_A(xi), opt.depth);
  st.rec.jacobi = st.rec.jacobi.with_policy(spectral_tails_from_data(xi, rho, plus, st.set));

  // torus coordinates read straight off xi
  for (const auto& gap : st.set.gaps()) {
    double mu = gap.hi;
    int s = 0;
    for (std::size_t k = 0; k < spec.sigma.size(); ++k)
      if (gap.interior_contains(rho.atoms()[k].position)) {
        mu = rho.atoms()[k].position;
        s = spec.sigma[k];
      }
    if (mu == gap.hi && xi(gap.mid()) == 1.0) mu = gap.lo;
    st.torus.mu.push_back(mu);
    st.torus.sigma.push_back(s);
  }

  st.operator_distance = operator_distance(st.rec.jacobi, target.rec.jacobi, opt.distance_sites);
  st.symmdiff = lebesgue_symmdiff(st.set, b);
  st.nu_plus_distance = weak_star_distance(plus, target.nu_plus, b.radius());
  st.reflectionless = is_reflectionless(st.rec.jacobi, st.set, opt.reflectionless);
  if (opt.check_spectrum) st.spectrum = spectrum_in_set(st.rec.jacobi, st.set);
  return st;
}

struct ApproxRun {
  TargetOperator target;
  std::vector<ApproxStage> stages;
};

inline ApproxRun approximate_reflectionless(const FiniteGapSet& b, const KreinFunction& xi, const SplitSpec& split,
                                            const std::vector<SubdivisionPlan>& schedule,
                                            const ApproxOptions& opt = {}) {
  require(!schedule.empty(), "approximation schedule is empty");
  const auto fractions = gap_fractions(b, split);
  ApproxRun run{target_operator(b, xi, split, opt), {}};
  for (const auto& plan : schedule) run.stages.push_back(approximate_stage(b, run.target, fractions, plan, opt));
  return run;
}

}  // namespace rlj
