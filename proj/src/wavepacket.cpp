#include "catsim/wavepacket.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "catsim/errors.hpp"

namespace catsim {
namespace {

using cplx = std::complex<double>;

double elapsed_since_birth(const GaussianPacket& packet, double t) {
  const double elapsed = t - packet.born_at;
  if (!(elapsed >= 0.0) || !std::isfinite(elapsed)) {
    throw DomainError("packet evaluated before its birth (t - born_at = " + std::to_string(elapsed) +
                      ")");
  }
  return elapsed;
}

// Free evolution of exp(-r^2 / (4 sigma0^2)) gives exp(-alpha r^2) with
// alpha = 1 / (4 sigma0^2 (1 + i s)), s = hbar t / (2 m sigma0^2), and the
// prefactor (2 pi sigma0^2)^{-3/4} (1 + i s)^{-3/2}.
struct FreeGaussian {
  cplx alpha;
  cplx prefactor;  // includes exp(-i phi)
};

FreeGaussian free_gaussian(const GaussianPacket& packet, double elapsed, bool include_chirp) {
  const double sigma0 = packet.sigma0();
  const double phase_factor_re = std::cos(packet.global_phase);
  const cplx global(phase_factor_re, -std::sin(packet.global_phase));
  if (!include_chirp) {
    const double sigma = spread_width(packet.mass, packet.dk, elapsed);
    return {cplx(1.0 / (4.0 * sigma * sigma), 0.0),
            std::pow(2.0 * std::numbers::pi * sigma * sigma, -0.75) * global};
  }
  const double s = units::hbar * elapsed / (2.0 * packet.mass * sigma0 * sigma0);
  const cplx one_is(1.0, s);
  const cplx root = std::sqrt(one_is);
  return {1.0 / (4.0 * sigma0 * sigma0 * one_is),
          std::pow(2.0 * std::numbers::pi * sigma0 * sigma0, -0.75) / (root * root * root) * global};
}

}  // namespace

void validate(const Trajectory& trajectory) {
  if (!(trajectory.transit_time > 0.0) || !std::isfinite(trajectory.transit_time)) {
    throw DomainError("transit_time > 0 required");
  }
}

Vec3 trajectory_position(const Trajectory& trajectory, double elapsed) {
  if (!(elapsed >= 0.0)) throw DomainError("trajectory elapsed time must be >= 0");
  validate(trajectory);
  if (elapsed >= trajectory.transit_time) return trajectory.end;
  const double u = elapsed / trajectory.transit_time;
  const double s = u * u * u * (10.0 + u * (-15.0 + 6.0 * u));
  return trajectory.start + s * (trajectory.end - trajectory.start);
}

GaussianPacket GaussianPacket::from_sigma0(double mass, double sigma0, const Vec3& center) {
  if (!(sigma0 > 0.0)) throw DomainError("sigma0 > 0 required");
  GaussianPacket p;
  p.mass = mass;
  p.dk = units::hbar / (2.0 * sigma0);
  p.center = center;
  validate(p);
  return p;
}

void validate(const GaussianPacket& packet) {
  if (!(packet.mass > 0.0) || !std::isfinite(packet.mass)) throw DomainError("mass > 0 required");
  if (!(packet.dk > 0.0) || !std::isfinite(packet.dk)) throw DomainError("dk > 0 required");
}

double spread_width(double mass, double dk, double t, double hbar) {
  if (!(t >= 0.0)) throw DomainError("spread_width: t >= 0 required");
  const double sigma0 = hbar / (2.0 * dk);
  return std::hypot(sigma0, dk * t / mass);
}

double chirp_coefficient(double mass, double dk, double t, double hbar) {
  if (!(t >= 0.0)) throw DomainError("chirp_coefficient: t >= 0 required");
  const double sigma0 = hbar / (2.0 * dk);
  const double s2 = sigma0 * sigma0;
  return hbar * t / (8.0 * mass * s2 * s2 + 2.0 * hbar * hbar * t * t / mass);
}

double spread_width(const GaussianPacket& packet, double t) {
  return spread_width(packet.mass, packet.dk, elapsed_since_birth(packet, t));
}

double doubling_time(double mass, double sigma0) {
  if (!(mass > 0.0) || !(sigma0 > 0.0)) throw DomainError("doubling_time: mass, sigma0 > 0 required");
  return 2.0 * std::numbers::sqrt3 * mass * sigma0 * sigma0 / units::hbar;
}

std::complex<double> amplitude(const GaussianPacket& packet, double t, const Vec3& x, double norm) {
  validate(packet);
  if (!(norm >= 0.0)) throw DomainError("amplitude: norm >= 0 required");
  const FreeGaussian g = free_gaussian(packet, elapsed_since_birth(packet, t), true);
  const double r2 = (x - packet.center).norm2();
  return std::sqrt(norm) * g.prefactor * std::exp(-g.alpha * r2);
}

std::complex<double> evaluate(const GaussianPacket& packet, const Trajectory& trajectory, double t,
                              const Vec3& x, double norm) {
  const double elapsed = elapsed_since_birth(packet, t);
  return amplitude(packet.at(trajectory_position(trajectory, elapsed)), t, x, norm);
}

std::complex<double> overlap(const GaussianPacket& p1, const GaussianPacket& p2, double t,
                             bool include_chirp) {
  validate(p1);
  validate(p2);
  if (p1.mass != p2.mass || p1.dk != p2.dk) {
    throw DomainError("overlap: packets must share mass and dk");
  }
  const FreeGaussian g1 = free_gaussian(p1, elapsed_since_birth(p1, t), include_chirp);
  const FreeGaussian g2 = free_gaussian(p2, elapsed_since_birth(p2, t), include_chirp);

  // int exp(-conj(a1)|x-c1|^2 - a2|x-c2|^2) d^3x
  //   = (pi / g)^{3/2} exp(-conj(a1) a2 d^2 / g),  g = conj(a1) + a2
  const cplx a1 = std::conj(g1.alpha);
  const cplx gamma = a1 + g2.alpha;
  const double d2 = (p1.center - p2.center).norm2();
  const cplx root = std::sqrt(std::numbers::pi / gamma);
  return std::conj(g1.prefactor) * g2.prefactor * (root * root * root) *
         std::exp(-a1 * g2.alpha * d2 / gamma);
}

}  // namespace catsim
