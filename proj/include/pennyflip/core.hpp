#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace pennyflip {

using Complex = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTau = 2.0 * std::numbers::pi;

// Library-wide tolerances.
inline constexpr double kEpsUnit = 1e-9;  // unitarity / density-matrix invariants
inline constexpr double kEpsComm = 1e-9;  // commutator-is-zero cutoff
inline constexpr double kEpsSing = 1e-7;  // sin(theta/2) singularity guard
inline constexpr double kEpsWin = 1e-9;   // winning-fidelity tolerance
inline constexpr double kEpsDet = 1e-8;   // singular linear-system guard
inline constexpr double kEpsNorm = 1e-9;  // Bloch-axis norm tolerance

/// Thrown when a requested Bloch axis cannot reach unit norm; carries the
/// norm that the closed-form solution actually achieved.
struct AxisNormError : std::domain_error {
  double achieved_norm;
  explicit AxisNormError(double norm)
      : std::domain_error("axis norm " + std::to_string(norm) +
                          " is not 1; re-tune theta1"),
        achieved_norm(norm) {}
};

/// Thrown when the strategy-synthesis linear system is numerically singular.
struct SingularProblemError : std::domain_error {
  using std::domain_error::domain_error;
};

/// Thrown when free solver parameters contradict the adversary operators;
/// carries the off-diagonal residual of the failed branch condition.
struct InconsistentParamsError : std::domain_error {
  double residual;
  explicit InconsistentParamsError(double r)
      : std::domain_error("solver parameters inconsistent with adversary "
                          "(branch residual " +
                          std::to_string(r) + ")"),
        residual(r) {}
};

/// Thrown when an operation requires pairwise-commuting operators.
struct NonCommutingError : std::domain_error {
  using std::domain_error::domain_error;
};

struct Vec3 {
  double x = 0, y = 0, z = 0;

  double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
  Vec3 cross(const Vec3& o) const {
    return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
  }
  double norm() const { return std::sqrt(dot(*this)); }
  Vec3 normalized() const {
    double n = norm();
    if (n <= 0) throw std::domain_error("cannot normalize zero vector");
    return {x / n, y / n, z / n};
  }
  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator-() const { return {-x, -y, -z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }

/// Dense 2x2 complex matrix, row-major: e[0]=m00, e[1]=m01, e[2]=m10, e[3]=m11.
struct Mat2 {
  std::array<Complex, 4> e{};

  static Mat2 zero() { return {}; }
  static Mat2 identity() { return {{Complex(1), Complex(0), Complex(0), Complex(1)}}; }

  Complex& operator()(int r, int c) { return e[2 * r + c]; }
  const Complex& operator()(int r, int c) const { return e[2 * r + c]; }

  Mat2 operator+(const Mat2& o) const {
    return {{e[0] + o.e[0], e[1] + o.e[1], e[2] + o.e[2], e[3] + o.e[3]}};
  }
  Mat2 operator-(const Mat2& o) const {
    return {{e[0] - o.e[0], e[1] - o.e[1], e[2] - o.e[2], e[3] - o.e[3]}};
  }
  Mat2 operator*(const Mat2& o) const {
    return {{e[0] * o.e[0] + e[1] * o.e[2], e[0] * o.e[1] + e[1] * o.e[3],
             e[2] * o.e[0] + e[3] * o.e[2], e[2] * o.e[1] + e[3] * o.e[3]}};
  }
  Mat2 operator*(Complex s) const { return {{e[0] * s, e[1] * s, e[2] * s, e[3] * s}}; }
  Mat2 operator*(double s) const { return *this * Complex(s); }

  Mat2 adjoint() const {
    return {{std::conj(e[0]), std::conj(e[2]), std::conj(e[1]), std::conj(e[3])}};
  }
  Complex trace() const { return e[0] + e[3]; }
  Complex det() const { return e[0] * e[3] - e[1] * e[2]; }

  double max_abs() const {
    double m = 0;
    for (const auto& v : e) m = std::max(m, std::abs(v));
    return m;
  }
  double max_abs_diff(const Mat2& o) const { return (*this - o).max_abs(); }

  bool is_finite() const {
    for (const auto& v : e)
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
  }
};

inline Mat2 operator*(Complex s, const Mat2& m) { return m * s; }
inline Mat2 operator*(double s, const Mat2& m) { return m * Complex(s); }

/// Reduce an angle into [0, 2*pi).
inline double wrap_angle(double a) {
  double r = std::fmod(a, kTau);
  if (r < 0) r += kTau;
  // fmod can land exactly on 2*pi after the correction
  if (r >= kTau) r = 0;
  return r;
}

}  // namespace pennyflip
