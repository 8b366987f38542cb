#pragma once

// Finite unions of compact intervals ("finite gap sets") and the set
// metrics used to compare them: Hausdorff distance h, Lebesgue measure of
// the symmetric difference, and delta = h + |.Delta.|.

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "rlj/error.hpp"

namespace rlj {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double length() const { return hi - lo; }
  double mid() const { return 0.5 * (lo + hi); }
  bool contains(double x) const { return lo <= x && x <= hi; }
  bool interior_contains(double x) const { return lo < x && x < hi; }

  friend bool operator==(const Interval&, const Interval&) = default;
};

// Bands closer than this are rejected rather than merged: merging would
// silently change the gap structure (and hence the torus dimension).
inline constexpr double kMinBandSeparation = 1e-9;
inline constexpr double kEndpointTolerance = 1e-12;

class FiniteGapSet {
 public:
  FiniteGapSet() = default;

  // Validates: at least one band, lo <= hi, sorted, separated by at least
  // kMinBandSeparation, all inside (-R, R).
  FiniteGapSet(std::vector<Interval> bands, double radius)
      : bands_(std::move(bands)), radius_(radius) {
    validate();
  }

  const std::vector<Interval>& bands() const { return bands_; }
  double radius() const { return radius_; }
  std::size_t band_count() const { return bands_.size(); }
  double min() const { return bands_.front().lo; }
  double max() const { return bands_.back().hi; }

  // Bounded open components of the complement, in order.
  std::vector<Interval> gaps() const {
    std::vector<Interval> out;
    out.reserve(bands_.size() > 0 ? bands_.size() - 1 : 0);
    for (std::size_t i = 1; i < bands_.size(); ++i) out.push_back({bands_[i - 1].hi, bands_[i].lo});
    return out;
  }

  double measure() const {
    double s = 0.0;
    for (const auto& b : bands_) s += b.length();
    return s;
  }

  bool contains(double x) const {
    return std::any_of(bands_.begin(), bands_.end(), [x](const Interval& b) { return b.contains(x); });
  }

  // Index of the band containing x, or -1.
  int band_index(double x) const {
    for (std::size_t i = 0; i < bands_.size(); ++i)
      if (bands_[i].contains(x)) return static_cast<int>(i);
    return -1;
  }

  // Index of the gap whose open interval contains x, or -1.
  int gap_index(double x) const {
    for (std::size_t i = 1; i < bands_.size(); ++i)
      if (bands_[i - 1].hi < x && x < bands_[i].lo) return static_cast<int>(i - 1);
    return -1;
  }

  FiniteGapSet shifted(double c) const {
    std::vector<Interval> b = bands_;
    for (auto& iv : b) {
      iv.lo += c;
      iv.hi += c;
    }
    return FiniteGapSet(std::move(b), radius_ + std::abs(c));
  }

  friend bool operator==(const FiniteGapSet&, const FiniteGapSet&) = default;

 private:
  void validate() const {
    require(!bands_.empty(), "finite gap set needs at least one band");
    require(std::isfinite(radius_) && radius_ > 0.0, "radius must be positive and finite");
    for (std::size_t i = 0; i < bands_.size(); ++i) {
      const auto& b = bands_[i];
      require(std::isfinite(b.lo) && std::isfinite(b.hi), "band endpoints must be finite");
      require(b.lo <= b.hi, "band lo > hi");
      if (!(b.lo > -radius_ && b.hi < radius_)) {
        std::ostringstream os;
        os << "band [" << b.lo << ", " << b.hi << "] not inside (-R, R) with R = " << radius_;
        throw ValidationError(os.str());
      }
      if (i > 0) {
        double sep = b.lo - bands_[i - 1].hi;
        if (sep < kMinBandSeparation) {
          std::ostringstream os;
          os << "bands " << i - 1 << " and " << i << " are unsorted, overlapping or separated by "
             << sep << " < " << kMinBandSeparation;
          throw ValidationError(os.str());
        }
      }
    }
  }

  std::vector<Interval> bands_;
  double radius_ = 1.0;
};

namespace detail {

inline double dist_to_set(double x, const FiniteGapSet& k) {
  double d = std::numeric_limits<double>::infinity();
  for (const auto& b : k.bands()) {
    if (b.contains(x)) return 0.0;
    d = std::min(d, x < b.lo ? b.lo - x : x - b.hi);
  }
  return d;
}

// sup_{x in from} dist(x, to). dist(., to) restricted to a band of `from` is
// piecewise linear with local maxima only at the band endpoints and at gap
// midpoints of `to`, so enumerating those candidates is exact.
inline double directed_hausdorff(const FiniteGapSet& from, const FiniteGapSet& to) {
  double best = 0.0;
  const auto to_gaps = to.gaps();
  for (const auto& b : from.bands()) {
    best = std::max(best, dist_to_set(b.lo, to));
    best = std::max(best, dist_to_set(b.hi, to));
    for (const auto& g : to_gaps) {
      double m = g.mid();
      if (b.contains(m)) best = std::max(best, dist_to_set(m, to));
    }
  }
  return best;
}

inline double intersection_measure(const FiniteGapSet& a, const FiniteGapSet& b) {
  double s = 0.0;
  std::size_t i = 0, j = 0;
  const auto& x = a.bands();
  const auto& y = b.bands();
  while (i < x.size() && j < y.size()) {
    double lo = std::max(x[i].lo, y[j].lo);
    double hi = std::min(x[i].hi, y[j].hi);
    if (hi > lo) s += hi - lo;
    if (x[i].hi < y[j].hi)
      ++i;
    else
      ++j;
  }
  return s;
}

}  // namespace detail

inline std::vector<Interval> gaps(const FiniteGapSet& k) { return k.gaps(); }

inline double hausdorff(const FiniteGapSet& k1, const FiniteGapSet& k2) {
  return std::max(detail::directed_hausdorff(k1, k2), detail::directed_hausdorff(k2, k1));
}

inline double lebesgue_symmdiff(const FiniteGapSet& k1, const FiniteGapSet& k2) {
  double v = k1.measure() + k2.measure() - 2.0 * detail::intersection_measure(k1, k2);
  return std::max(0.0, v);
}

inline double delta_metric(const FiniteGapSet& k1, const FiniteGapSet& k2) {
  return hausdorff(k1, k2) + lebesgue_symmdiff(k1, k2);
}

}  // namespace rlj
