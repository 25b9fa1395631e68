#pragma once

// 50-digit reference formulas, written independently of the library so that
// tests compare two implementations rather than one against itself.

#include <boost/multiprecision/cpp_bin_float.hpp>

namespace oracle {

using mpf = boost::multiprecision::cpp_bin_float_50;

inline mpf t1(const mpf& k, const mpf& t) {
  const mpf kk = k * k;
  return (1 - kk - t) * t / ((1 - kk) * (1 - t));
}

// Naive form on purpose: the cancellation is harmless at 50 digits.
inline mpf alpha(const mpf& k, const mpf& t) {
  const mpf a = t1(k, t);
  const mpf S = a + t;
  const mpf P = a * t;
  return (sqrt(S * S + 12 * P) - S) / 2;
}

inline mpf alpha1(const mpf& k) {
  return (1 - k) * (sqrt(k * k + 16 * k + 16) - k - 2) / (2 * (1 + k));
}

inline mpf alpha2(const mpf& k) {
  const mpf kk = k * k;
  return (sqrt(mpf(33)) - 3) / 4 * (1 - kk) / (1 + kk);
}

inline mpf t0(const mpf& k) { return (1 - k) * (1 + k / 4); }

inline mpf alpha_prime(const mpf& k, const mpf& t) {
  const mpf h("1e-20");
  return (alpha(k, t + h) - alpha(k, t - h)) / (2 * h);
}

/// Ternary search on the concave alpha; 300 rounds shrink the bracket far
/// below binary64 resolution.
inline mpf t_star(const mpf& k) {
  mpf lo = 1 - k;
  mpf hi = 1 - k * k;
  for (int i = 0; i < 300; ++i) {
    const mpf a = lo + (hi - lo) / 3;
    const mpf b = hi - (hi - lo) / 3;
    if (alpha(k, a) < alpha(k, b)) {
      lo = a;
    } else {
      hi = b;
    }
  }
  return (lo + hi) / 2;
}

inline mpf Nk(const mpf& k, const mpf& t) {
  const mpf k2 = k * k, k4 = k2 * k2, k6 = k4 * k2;
  const mpf c4 = 16 - 16 * k2 + k4;
  const mpf c3 = -(64 - 80 * k2 + 18 * k4);
  const mpf c2 = 96 - 160 * k2 + 69 * k4 - 5 * k6;
  const mpf c1 = -(64 - 144 * k2 + 96 * k4 - 16 * k6);
  const mpf c0 = 16 * (1 - k2) * (1 - k2) * (1 - k2);
  return (((c4 * t + c3) * t + c2) * t + c1) * t + c0;
}

inline double to_d(const mpf& x) { return x.convert_to<double>(); }

}  // namespace oracle
