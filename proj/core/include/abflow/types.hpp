#pragma once

#include <cmath>
#include <complex>
#include <numbers>

namespace abflow {

using Complex = std::complex<double>;

/// Planar vector in Cartesian components. One-dimensional fields leave y at 0.
struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Vec2& operator+=(const Vec2& o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  constexpr Vec2& operator-=(const Vec2& o) {
    x -= o.x;
    y -= o.y;
    return *this;
  }
  constexpr Vec2& operator*=(double s) {
    x *= s;
    y *= s;
    return *this;
  }

  friend constexpr Vec2 operator+(Vec2 a, const Vec2& b) { return a += b; }
  friend constexpr Vec2 operator-(Vec2 a, const Vec2& b) { return a -= b; }
  friend constexpr Vec2 operator-(const Vec2& a) { return {-a.x, -a.y}; }
  friend constexpr Vec2 operator*(Vec2 a, double s) { return a *= s; }
  friend constexpr Vec2 operator*(double s, Vec2 a) { return a *= s; }
  friend constexpr Vec2 operator/(Vec2 a, double s) { return {a.x / s, a.y / s}; }
  friend constexpr bool operator==(const Vec2&, const Vec2&) = default;
};

constexpr double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }
/// z-component of the planar cross product.
constexpr double cross(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }
inline double norm(const Vec2& a) { return std::hypot(a.x, a.y); }
constexpr double norm_sq(const Vec2& a) { return dot(a, a); }

/// Complex-valued planar vector (gradients of a wavefunction).
struct CVec2 {
  Complex x{};
  Complex y{};

  friend CVec2 operator+(const CVec2& a, const CVec2& b) { return {a.x + b.x, a.y + b.y}; }
  friend CVec2 operator*(const CVec2& a, Complex s) { return {a.x * s, a.y * s}; }
  friend CVec2 operator*(Complex s, const CVec2& a) { return {a.x * s, a.y * s}; }
};

inline Vec2 real(const CVec2& v) { return {v.x.real(), v.y.real()}; }
inline Vec2 imag(const CVec2& v) { return {v.x.imag(), v.y.imag()}; }
inline CVec2 to_complex(const Vec2& v) { return {Complex(v.x, 0.0), Complex(v.y, 0.0)}; }

/// Ordinary 3-vector, used for cross products with fields along e_z.
struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend constexpr Vec3 operator+(const Vec3& a, const Vec3& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
  friend constexpr Vec3 operator-(const Vec3& a, const Vec3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
  friend constexpr Vec3 operator*(double s, const Vec3& a) { return {s * a.x, s * a.y, s * a.z}; }
  friend constexpr bool operator==(const Vec3&, const Vec3&) = default;
};

constexpr Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
constexpr double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

struct Polar {
  double r = 0.0;
  double theta = 0.0;
};

inline Polar to_polar(const Vec2& p) { return {std::hypot(p.x, p.y), std::atan2(p.y, p.x)}; }
inline Vec2 from_polar(double r, double theta) { return {r * std::cos(theta), r * std::sin(theta)}; }

inline Vec2 unit_r(const Vec2& p) {
  const double r = norm(p);
  return {p.x / r, p.y / r};
}
inline Vec2 unit_theta(const Vec2& p) {
  const double r = norm(p);
  return {-p.y / r, p.x / r};
}

/// Components of a planar vector along (e_r, e_theta) at position p.
struct PolarComponents {
  double r = 0.0;
  double theta = 0.0;
};

inline PolarComponents polar_components(const Vec2& v, const Vec2& p) {
  return {dot(v, unit_r(p)), dot(v, unit_theta(p))};
}

inline Vec2 from_polar_components(double vr, double vtheta, const Vec2& p) {
  return unit_r(p) * vr + unit_theta(p) * vtheta;
}

/// Gaussian-CGS constants. The default is natural mode (all ones).
struct PhysicalConstants {
  double hbar = 1.0;
  double mass = 1.0;
  double charge = 1.0;
  double light_speed = 1.0;

  /// Nelson diffusion coefficient beta^2 = hbar / 2M.
  [[nodiscard]] double diffusion() const { return hbar / (2.0 * mass); }
  /// Coupling q / (M c) converting a vector potential into a velocity.
  [[nodiscard]] double coupling() const { return charge / (mass * light_speed); }
};

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

}  // namespace abflow
