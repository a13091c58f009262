#pragma once

#include <random>
#include <vector>

#include "pennyflip/core.hpp"

namespace pennyflip {

/// 2x2 unitary. The constructor enforces U†U = 1 and |det U| = 1 within
/// kEpsUnit (max-entry deviation).
class UnitaryOp {
 public:
  explicit UnitaryOp(const Mat2& m) : m_(m) {
    if (!m.is_finite()) throw std::domain_error("unitary has non-finite entries");
    double dev = (m.adjoint() * m).max_abs_diff(Mat2::identity());
    if (dev > kEpsUnit)
      throw std::domain_error("matrix is not unitary (deviation " + std::to_string(dev) + ")");
    if (std::abs(std::abs(m.det()) - 1.0) > kEpsUnit)
      throw std::domain_error("matrix determinant is not unimodular");
  }

  const Mat2& mat() const { return m_; }
  UnitaryOp adjoint() const { return UnitaryOp(m_.adjoint()); }
  UnitaryOp operator*(const UnitaryOp& o) const { return UnitaryOp(m_ * o.m_); }

 private:
  Mat2 m_;
};

inline UnitaryOp identity_op() { return UnitaryOp(Mat2::identity()); }

inline UnitaryOp pauli(int index) {
  const Complex i(0, 1);
  switch (index) {
    case 1: return UnitaryOp(Mat2{{0, 1, 1, 0}});
    case 2: return UnitaryOp(Mat2{{0, -i, i, 0}});
    case 3: return UnitaryOp(Mat2{{1, 0, 0, -1}});
    default: throw std::invalid_argument("pauli index must be 1, 2 or 3");
  }
}

inline UnitaryOp hadamard() {
  double s = 1.0 / std::sqrt(2.0);
  return UnitaryOp(Mat2{{s, s, s, -s}});
}

/// n1*s1 + n2*s2 + n3*s3 for a real 3-vector n.
inline Mat2 pauli_dot(const Vec3& n) {
  const Complex i(0, 1);
  return Mat2{{Complex(n.z), Complex(n.x, -n.y), Complex(n.x, n.y), Complex(-n.z)}};
}

/// Parameters of e^{i delta} e^{i theta n.sigma / 2}. `axis` must be a unit
/// vector; `delta` and `theta` are unconstrained on input and reduced into
/// [0, 2*pi) by canonical().
struct AxisAngle {
  double delta = 0;
  double theta = 0;
  Vec3 axis{0, 0, 1};

  /// Axis-angle of the inverse operator.
  AxisAngle inverse() const { return {-delta, theta, -axis}; }
};

namespace detail {

// Unique representative of (delta, c, s*n) with c = cos(theta/2) and s*n the
// imaginary Pauli component. sin(theta/2) is kept non-negative; below the
// singularity guard the axis collapses to +z and a negative cosine is folded
// into the phase. The first axis component larger than kEpsSing is made
// positive via the identity (delta, theta, n) ~ (delta+pi, 2pi-theta, -n).
inline AxisAngle canonical_axis_angle(double delta, double c, Vec3 sn) {
  double s = sn.norm();
  if (s < kEpsSing) {
    if (c < 0) delta += kPi;
    return {wrap_angle(delta), 0.0, {0, 0, 1}};
  }
  double theta = 2.0 * std::atan2(s, c);
  Vec3 n = sn * (1.0 / s);
  for (double comp : {n.x, n.y, n.z}) {
    if (std::abs(comp) > kEpsSing) {
      if (comp < 0) {
        delta += kPi;
        theta = kTau - theta;
        n = -n;
      }
      break;
    }
  }
  return {wrap_angle(delta), theta, n};
}

}  // namespace detail

inline UnitaryOp from_axis_angle(const AxisAngle& p) {
  double nn = p.axis.norm();
  if (std::abs(nn - 1.0) > kEpsUnit) throw std::domain_error("rotation axis is not unit length");
  Vec3 n = p.axis * (1.0 / nn);
  const Complex i(0, 1);
  Complex phase = std::exp(i * p.delta);
  double c = std::cos(p.theta / 2), s = std::sin(p.theta / 2);
  return UnitaryOp(phase * (c * Mat2::identity() + (i * s) * pauli_dot(n)));
}

/// Inverse of from_axis_angle, canonicalized. Any U(2) element factors as
/// e^{i delta} S with S in SU(2); delta comes from det U = e^{2 i delta} and
/// the Pauli components of S give (theta, n).
inline AxisAngle to_axis_angle(const UnitaryOp& u) {
  const Mat2& m = u.mat();
  double delta = std::arg(m.det()) / 2.0;
  Complex ph = std::exp(Complex(0, -delta));
  Mat2 s = ph * m;
  double c = (s(0, 0) + s(1, 1)).real() / 2.0;
  Vec3 sn{(s(0, 1) + s(1, 0)).imag() / 2.0,
          (s(0, 1) - s(1, 0)).real() / 2.0,
          (s(0, 0) - s(1, 1)).imag() / 2.0};
  return detail::canonical_axis_angle(delta, c, sn);
}

/// SU(2)xU(1) composition law: parameters of from_axis_angle(a)*from_axis_angle(b)
/// without forming the product matrix. For half angles A, B and unit axes u, v:
///   cos(C) = cos(A)cos(B) - u.v sin(A)sin(B)
///   sin(C) n = sin(A)cos(B) u + cos(A)sin(B) v - sin(A)sin(B) u x v
/// (the cross term carries a minus sign under the e^{+i theta n.sigma/2}
/// convention). Result is canonicalized; when sin(C) < kEpsSing the product is
/// a pure phase and the axis is fixed to (0,0,1).
inline AxisAngle compose_axis_angle(const AxisAngle& a, const AxisAngle& b) {
  Vec3 u = a.axis, v = b.axis;
  for (const Vec3& w : {u, v})
    if (std::abs(w.norm() - 1.0) > kEpsUnit)
      throw std::domain_error("rotation axis is not unit length");
  double ca = std::cos(a.theta / 2), sa = std::sin(a.theta / 2);
  double cb = std::cos(b.theta / 2), sb = std::sin(b.theta / 2);
  double c = ca * cb - u.dot(v) * sa * sb;
  Vec3 sn = sa * cb * u + ca * sb * v - sa * sb * u.cross(v);
  return detail::canonical_axis_angle(a.delta + b.delta, c, sn);
}

inline Mat2 commutator(const UnitaryOp& a, const UnitaryOp& b) {
  return a.mat() * b.mat() - b.mat() * a.mat();
}

inline bool commutes(const UnitaryOp& a, const UnitaryOp& b) {
  return commutator(a, b).max_abs() < kEpsComm;
}

/// Normalized two-component state.
struct StateVector {
  Complex a0, a1;

  StateVector(Complex c0, Complex c1) : a0(c0), a1(c1) {
    double n = norm();
    if (!std::isfinite(n) || std::abs(n - 1.0) > kEpsUnit)
      throw std::domain_error("state vector is not normalized");
  }

  double norm() const { return std::sqrt(std::norm(a0) + std::norm(a1)); }
  Complex inner(const StateVector& o) const {
    return std::conj(a0) * o.a0 + std::conj(a1) * o.a1;
  }
};

inline StateVector ket0() { return {1, 0}; }
inline StateVector ket1() { return {0, 1}; }

namespace detail {

inline StateVector phase_fixed(Complex v0, Complex v1) {
  double n = std::sqrt(std::norm(v0) + std::norm(v1));
  v0 /= n;
  v1 /= n;
  // deterministic overall phase: largest component real positive
  Complex lead = std::abs(v0) >= std::abs(v1) ? v0 : v1;
  Complex ph = std::conj(lead) / std::abs(lead);
  return {v0 * ph, v1 * ph};
}

// Orthonormal eigenvectors of a single 2x2 unitary.
inline std::vector<StateVector> eigenvectors(const Mat2& m) {
  if ((m - Mat2::identity() * (m.trace() / 2.0)).max_abs() < kEpsUnit)
    return {ket0(), ket1()};  // multiple of identity: any basis
  Complex tr = m.trace(), dt = m.det();
  Complex disc = std::sqrt(tr * tr - 4.0 * dt);
  std::vector<StateVector> out;
  for (Complex lambda : {(tr + disc) / 2.0, (tr - disc) / 2.0}) {
    Complex r0 = m(0, 1), r1 = lambda - m(0, 0);
    Complex q0 = lambda - m(1, 1), q1 = m(1, 0);
    if (std::norm(q0) + std::norm(q1) > std::norm(r0) + std::norm(r1)) {
      r0 = q0;
      r1 = q1;
    }
    out.push_back(phase_fixed(r0, r1));
  }
  return out;
}

}  // namespace detail

/// Unit vectors v with op*v = lambda*v (unimodular lambda) for every operator
/// in `ops`. Requires a pairwise-commuting input set; the eigenvectors of the
/// first non-scalar operator are filtered by the eigen-residual of all others.
inline std::vector<StateVector> simultaneous_eigenvectors(const std::vector<UnitaryOp>& ops) {
  if (ops.empty()) throw std::invalid_argument("empty operator list");
  for (size_t i = 0; i < ops.size(); ++i)
    for (size_t j = i + 1; j < ops.size(); ++j)
      if (!commutes(ops[i], ops[j]))
        throw NonCommutingError("operators do not pairwise commute");

  std::vector<StateVector> candidates = {ket0(), ket1()};
  for (const UnitaryOp& op : ops) {
    const Mat2& m = op.mat();
    if ((m - Mat2::identity() * (m.trace() / 2.0)).max_abs() >= kEpsUnit) {
      candidates = detail::eigenvectors(m);
      break;
    }
  }

  std::vector<StateVector> out;
  for (const StateVector& v : candidates) {
    bool ok = true;
    for (const UnitaryOp& op : ops) {
      const Mat2& m = op.mat();
      Complex w0 = m(0, 0) * v.a0 + m(0, 1) * v.a1;
      Complex w1 = m(1, 0) * v.a0 + m(1, 1) * v.a1;
      Complex lambda = std::conj(v.a0) * w0 + std::conj(v.a1) * w1;
      double resid = std::sqrt(std::norm(w0 - lambda * v.a0) + std::norm(w1 - lambda * v.a1));
      if (resid >= kEpsUnit) {
        ok = false;
        break;
      }
    }
    if (ok) out.push_back(v);
  }
  return out;
}

/// Unitary whose first column is `v` (second column is the canonical
/// orthogonal complement). Maps |0> to v.
inline UnitaryOp basis_from_state(const StateVector& v) {
  return UnitaryOp(Mat2{{v.a0, -std::conj(v.a1), v.a1, std::conj(v.a0)}});
}

// --- seeded sampling helpers (uniform theta, Gaussian-normalized axis) ---

inline Vec3 random_axis(std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  while (true) {
    Vec3 v{g(rng), g(rng), g(rng)};
    double n = v.norm();
    if (n > 1e-6) return v * (1.0 / n);
  }
}

inline AxisAngle random_axis_angle(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, kTau);
  return {u(rng), u(rng), random_axis(rng)};
}

inline UnitaryOp random_unitary(std::mt19937_64& rng) {
  return from_axis_angle(random_axis_angle(rng));
}

}  // namespace pennyflip
