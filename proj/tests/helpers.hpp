#pragma once

#include <random>

#include "pennyflip/pennyflip.hpp"

namespace pftest {

using namespace pennyflip;

inline Mat2 mat(Complex a, Complex b, Complex c, Complex d) { return Mat2{{a, b, c, d}}; }

inline double diff(const Mat2& a, const Mat2& b) { return a.max_abs_diff(b); }

/// Entrywise distance after removing the global phase (aligned on the
/// largest entry of `a`).
inline double diff_up_to_phase(const Mat2& a, const Mat2& b) {
  int lead = 0;
  for (int i = 1; i < 4; ++i)
    if (std::abs(a.e[i]) > std::abs(a.e[lead])) lead = i;
  if (std::abs(b.e[lead]) == 0.0) return 1.0;
  Complex ph = a.e[lead] / b.e[lead];
  return diff(a, (ph / std::abs(ph)) * b);
}

inline Mat2 sigma(int i) { return pennyflip::pauli(i).mat(); }

inline GameSpec meyer_spec() {
  return GameSpec::uniform(DensityMatrix::pure(ket0()), {identity_op(), pauli(1)}, "meyer");
}

inline GameSpec sigma13_spec() {
  return GameSpec::uniform(DensityMatrix::pure(ket0()), {pauli(1), pauli(3)}, "sigma13");
}

inline GameSpec fn_spec(double alpha, double beta) {
  return GameSpec::uniform(DensityMatrix::pure(ket0()), {flip_op(alpha), nonflip_op(beta)},
                           "phase");
}

}  // namespace pftest
