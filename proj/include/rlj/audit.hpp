#pragma once

// Optional bookkeeping of Herglotz-type evaluations. With RLJ_HERGLOTZ_AUDIT
// defined, every green_function / h_function / stieltjes / eval_H value is
// counted, and one whose imaginary part has the wrong sign (or is NaN) is a
// violation. Without the macro the hook compiles to nothing.

#include <atomic>
#include <cmath>
#include <complex>

namespace rlj::audit {

struct HerglotzCounter {
  std::atomic<long> evaluations{0};
  std::atomic<long> violations{0};
};

inline HerglotzCounter& herglotz() {
  static HerglotzCounter c;
  return c;
}

inline void reset() {
  herglotz().evaluations = 0;
  herglotz().violations = 0;
}

// value should lie in the same closed half-plane as z
inline std::complex<double> herglotz_value(std::complex<double> value, double z_imag) {
#ifdef RLJ_HERGLOTZ_AUDIT
  auto& c = herglotz();
  ++c.evaluations;
  if (std::isnan(value.imag()) || std::isnan(value.real()) || value.imag() * (z_imag > 0.0 ? 1.0 : -1.0) < 0.0)
    ++c.violations;
#else
  (void)z_imag;
#endif
  return value;
}

}  // namespace rlj::audit
