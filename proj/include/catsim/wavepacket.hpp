#pragma once

#include <complex>

#include "catsim/units.hpp"

namespace catsim {

/// Straight-line move of the mirror from `start` to `end`, completed after
/// `transit_time` seconds. Position follows a quintic smoothstep, so the
/// motion is C2 and each coordinate is monotone.
struct Trajectory {
  Vec3 start;
  Vec3 end;
  double transit_time = 0.1;

  static Trajectory stationary(const Vec3& at) { return {at, at, 0.1}; }
  bool is_stationary() const { return start == end; }
};

void validate(const Trajectory& trajectory);

Vec3 trajectory_position(const Trajectory& trajectory, double elapsed);

/// Free minimum-uncertainty Gaussian packet of a massive body's center of
/// mass. `dk` is the momentum spread (g cm/s); the position spread at birth
/// is hbar / (2 dk). `center` is the current packet center.
struct GaussianPacket {
  double mass = 1.0;
  double dk = 0.0;
  Vec3 center;
  double global_phase = 0.0;
  double born_at = 0.0;

  static GaussianPacket from_sigma0(double mass, double sigma0, const Vec3& center = {});

  double sigma0() const { return units::hbar / (2.0 * dk); }
  GaussianPacket at(const Vec3& new_center) const {
    GaussianPacket p = *this;
    p.center = new_center;
    return p;
  }
};

void validate(const GaussianPacket& packet);

// The two functions below take hbar explicitly so the natural-unit form
// (hbar = 1) can be checked against the printed expressions.

/// sqrt((hbar / 2 dk)^2 + (dk t / m)^2)
double spread_width(double mass, double dk, double t, double hbar = units::hbar);

/// Coefficient c of the position-dependent phase exp(i c r^2) of a free
/// packet after time t: hbar t / (8 m sigma0^4 + 2 hbar^2 t^2 / m).
double chirp_coefficient(double mass, double dk, double t, double hbar = units::hbar);

// Functions below take absolute time t; a packet has evolved freely for
// t - born_at, which must be >= 0.

double spread_width(const GaussianPacket& packet, double t);

/// Time for the spread to double, 2 sqrt(3) m sigma0^2 / hbar.
double doubling_time(double mass, double sigma0);

/// Amplitude at position x of a packet centered on `packet.center`, scaled
/// so that the squared modulus integrates to `norm`.
std::complex<double> amplitude(const GaussianPacket& packet, double t, const Vec3& x,
                               double norm = 1.0);

/// As amplitude(), with the center placed on the trajectory at t - born_at.
std::complex<double> evaluate(const GaussianPacket& packet, const Trajectory& trajectory, double t,
                              const Vec3& x, double norm = 1.0);

/// Closed-form <p1|p2> of two unit-norm packets of the same body. With
/// `include_chirp` false only the real envelopes (and global phases) are
/// overlapped.
std::complex<double> overlap(const GaussianPacket& p1, const GaussianPacket& p2, double t,
                             bool include_chirp = true);

}  // namespace catsim
