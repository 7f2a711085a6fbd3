#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "catsim/errors.hpp"
#include "catsim/wavepacket.hpp"
#include "oracles.hpp"

using namespace catsim;
using cplx = std::complex<double>;

namespace {

// Free evolution of a 1-D minimum-uncertainty packet by direct momentum
// integration: psi(x, t) = int phi(k) exp(i k x - i hbar k^2 t / 2m) dk / sqrt(2 pi).
cplx evolved_1d(double mass, double sigma0, double t, double x) {
  const double kmax = 12.0 / sigma0;
  const int n = 4000;
  const double h = 2.0 * kmax / n;
  const double pref = std::pow(2.0 * sigma0 * sigma0 / oracle::kPi, 0.25) / std::sqrt(2.0 * oracle::kPi);
  cplx sum = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double k = -kmax + i * h;
    const double w = (i == 0 || i == n) ? 0.5 : 1.0;
    const double phase = k * x - oracle::kHbar * k * k * t / (2.0 * mass);
    sum += w * std::exp(-sigma0 * sigma0 * k * k) * cplx(std::cos(phase), std::sin(phase));
  }
  return pref * h * sum;
}

// A light body whose packet spreads appreciably in ~1e-16 s.
constexpr double kLightMass = 1e-27;
constexpr double kLightSigma = 1e-8;
constexpr double kLightT = 2e-16;

}  // namespace

TEST_CASE("spread width") {
  const auto p = GaussianPacket::from_sigma0(1.0, oracle::kBohr);
  CHECK(spread_width(p, 0.0) == doctest::Approx(oracle::kBohr).epsilon(1e-15));
  CHECK(p.dk == doctest::Approx(oracle::kHbar / (2.0 * oracle::kBohr)).epsilon(1e-15));
  CHECK(p.dk < 1e-16);
  CHECK(p.dk == doctest::Approx(1.0e-19).epsilon(0.01));

  const double td = doubling_time(1.0, oracle::kBohr);
  CHECK(td == doctest::Approx(2.0 * std::sqrt(3.0) * oracle::kBohr * oracle::kBohr / oracle::kHbar).epsilon(1e-14));
  CHECK(td == doctest::Approx(9.2e10).epsilon(0.005));
  CHECK(td / oracle::kYear == doctest::Approx(2.915e3).epsilon(0.001));
  CHECK(spread_width(p, td) == doctest::Approx(2.0 * oracle::kBohr).epsilon(1e-12));

  // Hour-scale growth stays below one part in 1e14.
  CHECK(spread_width(p, 3600.0) / oracle::kBohr - 1.0 < 1e-14);
  CHECK_THROWS_AS(spread_width(p, -1.0), DomainError);
}

TEST_CASE("spread width is monotone and hyperbolic") {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 300; ++k) {
    const double m = std::pow(10.0, -28.0 + 29.0 * u(gen));
    const double dk = std::pow(10.0, -22.0 + 4.0 * u(gen));
    const double t1 = 1e3 * u(gen), t2 = t1 + 1e3 * u(gen);
    const double s1 = spread_width(m, dk, t1), s2 = spread_width(m, dk, t2);
    CHECK(s2 >= s1);
    const double s0 = oracle::kHbar / (2.0 * dk);
    CHECK(s1 * s1 == doctest::Approx(s0 * s0 + std::pow(dk * t1 / m, 2)).epsilon(1e-12));
  }
}

TEST_CASE("chirp coefficient in natural units") {
  // hbar = 1, m = 2, sigma0 = 2 (dk = 1/4), t = 3: 3 / (8*2*16 + 2*9/2) = 3/265.
  CHECK(chirp_coefficient(2.0, 0.25, 3.0, 1.0) == doctest::Approx(3.0 / 265.0).epsilon(1e-15));
  CHECK(chirp_coefficient(2.0, 0.25, 0.0, 1.0) == 0.0);
  CHECK(spread_width(2.0, 0.25, 0.0, 1.0) == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("chirp coefficient matches the phase curvature of the amplitude") {
  const auto p = GaussianPacket::from_sigma0(kLightMass, kLightSigma);
  const double c = chirp_coefficient(kLightMass, p.dk, kLightT);
  const double dx = 1e-3 * kLightSigma;
  const double phase = std::arg(amplitude(p, kLightT, {dx, 0, 0}) / amplitude(p, kLightT, {0, 0, 0}));
  CHECK(phase / (dx * dx) == doctest::Approx(c).epsilon(1e-6));
}

TEST_CASE("amplitude agrees with direct momentum-space evolution") {
  const auto p = GaussianPacket::from_sigma0(kLightMass, kLightSigma);
  for (double t : {0.0, 0.5 * kLightT, kLightT, 3.0 * kLightT}) {
    for (const Vec3& x : {Vec3{0, 0, 0}, Vec3{kLightSigma, 0, 0}, Vec3{0.7 * kLightSigma, -1.3 * kLightSigma, 2.1 * kLightSigma}}) {
      const cplx want = evolved_1d(kLightMass, kLightSigma, t, x.x) * evolved_1d(kLightMass, kLightSigma, t, x.y) *
                        evolved_1d(kLightMass, kLightSigma, t, x.z);
      const cplx got = amplitude(p, t, x);
      CHECK(std::abs(got - want) <= 1e-9 * std::abs(want));
    }
  }
}

TEST_CASE("evaluate at the center and in the tail") {
  const auto p = GaussianPacket::from_sigma0(1.0, oracle::kBohr, {10.0, 0.0, 0.0});
  const auto traj = Trajectory::stationary(p.center);
  const cplx peak = evaluate(p, traj, 0.0, p.center);
  CHECK(peak.imag() == 0.0);
  CHECK(peak.real() > 0.0);
  CHECK(std::abs(evaluate(p, traj, 0.0, p.center + Vec3{0.1 * oracle::kBohr, 0, 0})) < std::abs(peak));
  const double ten_sigma = 10.0 * spread_width(p, 0.0);
  // sigma is the density width, so the density falls by e^{-50} at ten widths.
  CHECK(std::norm(evaluate(p, traj, 0.0, p.center + Vec3{0, ten_sigma, 0})) <=
        std::exp(-50.0) * std::norm(peak) * (1 + 1e-12));
  CHECK(std::abs(evaluate(p, traj, 0.0, p.center, 0.25)) == doctest::Approx(0.5 * std::abs(peak)).epsilon(1e-15));
}

TEST_CASE("squared amplitude integrates to the branch norm") {
  for (double t : {0.0, kLightT, 4.0 * kLightT}) {
    auto p = GaussianPacket::from_sigma0(kLightMass, kLightSigma, {1e-7, 0.0, 0.0});
    const auto traj = Trajectory::stationary(p.center);
    const double norm = 0.5;
    const double s = spread_width(p, t);
    const int n = 72;
    const double half = 12.0 * s, h = 2.0 * half / n;
    double sum = 0.0;
    for (int i = 0; i <= n; ++i) {
      const double wi = (i == 0 || i == n) ? 0.5 : 1.0;
      for (int j = 0; j <= n; ++j) {
        const double wj = (j == 0 || j == n) ? 0.5 : 1.0;
        for (int k = 0; k <= n; ++k) {
          const double wk = (k == 0 || k == n) ? 0.5 : 1.0;
          const Vec3 x = p.center + Vec3{-half + i * h, -half + j * h, -half + k * h};
          sum += wi * wj * wk * std::norm(evaluate(p, traj, t, x, norm));
        }
      }
    }
    CHECK(sum * h * h * h == doctest::Approx(norm).epsilon(1e-6));
  }
}

TEST_CASE("overlap of packets") {
  const auto p = GaussianPacket::from_sigma0(1.0, oracle::kBohr);
  CHECK(std::abs(overlap(p, p, 3600.0)) == doctest::Approx(1.0).epsilon(1e-14));

  SUBCASE("envelope-only overlap at twenty widths") {
    const double s = spread_width(p, 3600.0);
    const auto q = p.at({20.0 * s, 0.0, 0.0});
    CHECK(std::abs(overlap(p, q, 3600.0, false)) == doctest::Approx(std::exp(-50.0)).epsilon(1e-9));
  }

  SUBCASE("closed form agrees with quadrature of the amplitudes") {
    const auto a = GaussianPacket::from_sigma0(kLightMass, kLightSigma);
    const auto b = a.at({1.5 * kLightSigma, 0.0, 0.0});
    const double s = spread_width(a, kLightT);
    const int n = 64;
    const double half = 10.0 * s, h = 2.0 * half / n;
    cplx sum = 0.0;
    for (int i = 0; i <= n; ++i) {
      for (int j = 0; j <= n; ++j) {
        for (int k = 0; k <= n; ++k) {
          const double w = ((i == 0 || i == n) ? 0.5 : 1.0) * ((j == 0 || j == n) ? 0.5 : 1.0) *
                           ((k == 0 || k == n) ? 0.5 : 1.0);
          const Vec3 x{-half + 0.75 * kLightSigma + i * h, -half + j * h, -half + k * h};
          const cplx pa = amplitude(a, kLightT, x);
          const cplx pb = amplitude(b, kLightT, x);
          sum += w * std::conj(pa) * pb;
        }
      }
    }
    sum *= h * h * h;
    const cplx closed = overlap(a, b, kLightT);
    CHECK(std::abs(closed - sum) <= 1e-8 * std::abs(closed));
    // Free evolution preserves the overlap of packets born together.
    CHECK(std::abs(closed) == doctest::Approx(std::exp(-std::pow(1.5, 2) / 8.0)).epsilon(1e-12));
  }

  SUBCASE("chirped overlap falls below the envelope prediction as time grows") {
    const auto a = GaussianPacket::from_sigma0(kLightMass, kLightSigma);
    const auto b = a.at({2.0 * kLightSigma, 0.0, 0.0});
    double previous_ratio = 1.0;
    for (double t : {0.5 * kLightT, kLightT, 2.0 * kLightT, 4.0 * kLightT}) {
      const double chirped = std::abs(overlap(a, b, t, true));
      const double envelope = std::abs(overlap(a, b, t, false));
      CHECK(chirped < envelope);
      CHECK(chirped / envelope < previous_ratio);
      previous_ratio = chirped / envelope;
    }
  }

  SUBCASE("global phases enter as a relative phase") {
    auto a = p, b = p;
    a.global_phase = 0.3;
    b.global_phase = 1.0;
    const cplx ov = overlap(a, b, 10.0);
    CHECK(std::abs(ov) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(std::abs(std::remainder(std::arg(ov) - (a.global_phase - b.global_phase), 2.0 * oracle::kPi)) < 1e-12);
  }

  auto heavier = p;
  heavier.mass = 2.0;
  CHECK_THROWS_AS(overlap(p, heavier, 1.0), DomainError);
  auto wider = p;
  wider.dk *= 2.0;
  CHECK_THROWS_AS(overlap(p, wider, 1.0), DomainError);
}

TEST_CASE("overlap modulus is symmetric and bounded") {
  std::mt19937_64 gen(17);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  const auto a = GaussianPacket::from_sigma0(kLightMass, kLightSigma);
  for (int k = 0; k < 200; ++k) {
    const auto b = a.at(Vec3{u(gen), u(gen), u(gen)} * kLightSigma);
    const double t = std::abs(u(gen)) * kLightT;
    const cplx ab = overlap(a, b, t), ba = overlap(b, a, t);
    CHECK(std::abs(ab - std::conj(ba)) <= 1e-12);
    CHECK(std::abs(ab) <= 1.0 + 1e-12);
  }
}

TEST_CASE("trajectory") {
  const Trajectory tr{{10, 0, 0}, {10, 0, 2}, 0.1};
  CHECK(trajectory_position(tr, 0.0) == tr.start);
  CHECK(trajectory_position(tr, 0.1) == tr.end);
  CHECK(trajectory_position(tr, 5.0) == tr.end);
  const Vec3 mid = trajectory_position(tr, 0.05);
  CHECK(mid.z == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(mid.x == 10.0);

  // Zero velocity at both ends.
  const double h = 1e-7;
  CHECK(std::abs(trajectory_position(tr, h).z - tr.start.z) / h < 1e-6);
  CHECK(std::abs(tr.end.z - trajectory_position(tr, 0.1 - h).z) / h < 1e-6);

  SUBCASE("each coordinate is monotone") {
    const Trajectory diag{{1, 2, 3}, {-4, 2, 8}, 2.0};
    Vec3 prev = diag.start;
    for (int i = 1; i <= 2000; ++i) {
      const Vec3 cur = trajectory_position(diag, 2.0 * i / 2000.0);
      CHECK(cur.x <= prev.x);
      CHECK(cur.y == prev.y);
      CHECK(cur.z >= prev.z);
      prev = cur;
    }
  }

  CHECK(Trajectory::stationary({1, 2, 3}).is_stationary());
  CHECK_THROWS_AS(validate(Trajectory{{0, 0, 0}, {1, 0, 0}, 0.0}), DomainError);
  CHECK_THROWS_AS(trajectory_position(tr, -1.0), DomainError);
  CHECK_THROWS_AS(validate(GaussianPacket{1.0, 0.0, {}, 0.0, 0.0}), DomainError);
  CHECK_THROWS_AS(GaussianPacket::from_sigma0(-1.0, 1e-8), DomainError);
}
