#pragma once

#include <array>
#include <cmath>
#include <numbers>

namespace catsim {

// CGS throughout: cm, g, s, erg.
namespace units {
inline constexpr double hbar = 1.054571817e-27;       // erg s
inline constexpr double bohr_radius = 5.29177210903e-9; // cm
inline constexpr double gram = 1.0;
inline constexpr double second = 1.0;
inline constexpr double hour = 3600.0;
inline constexpr double julian_year = 365.25 * 86400.0;
inline constexpr double nanometer = 1e-7;
}  // namespace units

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr Vec3& operator+=(const Vec3& o) {
    x += o.x;
    y += o.y;
    z += o.z;
    return *this;
  }
  constexpr Vec3& operator-=(const Vec3& o) {
    x -= o.x;
    y -= o.y;
    z -= o.z;
    return *this;
  }
  constexpr Vec3& operator*=(double s) {
    x *= s;
    y *= s;
    z *= s;
    return *this;
  }
  friend constexpr Vec3 operator+(Vec3 a, const Vec3& b) { return a += b; }
  friend constexpr Vec3 operator-(Vec3 a, const Vec3& b) { return a -= b; }
  friend constexpr Vec3 operator*(Vec3 a, double s) { return a *= s; }
  friend constexpr Vec3 operator*(double s, Vec3 a) { return a *= s; }
  friend constexpr bool operator==(const Vec3&, const Vec3&) = default;

  constexpr double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
  constexpr double norm2() const { return dot(*this); }
  double norm() const { return std::sqrt(norm2()); }
  constexpr std::array<double, 3> array() const { return {x, y, z}; }
};

inline double distance(const Vec3& a, const Vec3& b) { return (a - b).norm(); }

}  // namespace catsim
