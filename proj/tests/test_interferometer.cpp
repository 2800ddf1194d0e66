#include <doctest.h>

#include <cmath>
#include <numbers>

#include "atomint/interferometer.hpp"
#include "atomint/semiclassics.hpp"
#include "support.hpp"

using namespace atomint;
using testing::Random;

namespace {

constexpr double pi = std::numbers::pi;
const double m = rb87::mass;
const double k0 = rb87::raman_wavenumber;
const double pk = hbar * k0;

using LD = long double;

InterferometerSetup random_smi(Random& rng, bool open) {
  auto s = canonical_interferometer(rng.uniform(1e-3, 0.1), rng.uniform(0, 10), rng.uniform(0.5, 2) * k0);
  s.phi0 = rng.uniform(0, 2 * pi);
  s.phi2T = rng.uniform(0, 2 * pi);
  s.zeta_g += rng.uniform(-1e-3, 1e-3);
  const double Z = open ? rng.uniform(-3, 3) * hbar / s.packet.delta_p : 0.0;
  s.zeta_e = s.zeta_g + hbar * s.k * s.T / m + Z;
  return s;
}

}  // namespace

TEST_CASE("Raman pi/2 pulse on |g> transfers fully with -i e^{i phi}") {
  auto g = make_gaussian<double>(0.0, 0.05 * rb87::recoil_momentum, 0.0, GridSpec{});
  g.level = InternalLevel::ground;
  const double phi = 0.7;
  const auto out = apply_raman<double>({g}, mirror_area, k0, phi, +1);
  REQUIRE(out.size() == 1);
  CHECK(out[0].level == InternalLevel::excited);
  CHECK(out[0].grid.center == doctest::Approx(pk));
  CHECK(std::abs(std::polar(1.0, out[0].scalar_phase) - std::complex<double>(0, -1) * std::polar(1.0, phi)) <
        1e-15);
  CHECK(max_relative_difference(g, kick(add_phase(out[0], -out[0].scalar_phase), -pk)) < 1e-15);

  // R_- pulse sends |g> down by hbar k with e^{-i phi}.
  const auto minus = apply_raman<double>({g}, mirror_area, k0, phi, -1);
  CHECK(minus[0].grid.center == doctest::Approx(-pk));
  CHECK(std::remainder(minus[0].scalar_phase - (-phi - pi / 2), 2 * pi) == doctest::Approx(0.0));
}

TEST_CASE("two beamsplitters compose to one mirror pulse") {
  Random rng(21);
  auto e = make_gaussian<double>(pk / 2, 0.05 * rb87::recoil_momentum, 0.0, GridSpec{});
  const double phi = 1.3;
  for (const int sign : {+1, -1}) {
    const auto one = apply_raman<double>({e}, mirror_area, k0, phi, sign);
    const auto two = apply_raman(apply_raman<double>({e}, beamsplitter_area, k0, phi, sign),
                                 beamsplitter_area, k0, phi, sign);
    REQUIRE(one.size() == 1);
    for (const auto& b : two) {
      if (b.level == one[0].level) {
        CHECK(max_relative_difference(one[0], b) < 1e-12);
      } else {
        CHECK(b.amplitudes.abs().maxCoeff() < 1e-12 * e.amplitudes.abs().maxCoeff());
      }
    }
  }
}

TEST_CASE("Raman pulse matches the 2x2 unitary on a two-component state") {
  // |psi> = a |e, p> + b |g, p - hbar k>, coupled component by component.
  const auto base = make_gaussian<double>(pk / 2, 0.05 * rb87::recoil_momentum, 0.0, GridSpec{});
  const std::complex<double> a(0.6, 0.2), b(-0.3, 0.7);
  auto e = base;
  e.amplitudes *= a;
  auto g = kick(base, -pk);
  g.level = InternalLevel::ground;
  g.amplitudes *= b;
  const double theta = 0.37, phi = 2.1;
  const auto out = apply_raman<double>({e, g}, theta, k0, phi, +1);
  const std::complex<double> i(0, 1);
  const std::complex<double> e_expected = std::cos(theta) * a - i * std::sin(theta) * std::polar(1.0, phi) * b;
  const std::complex<double> g_expected = std::cos(theta) * b - i * std::sin(theta) * std::polar(1.0, -phi) * a;
  REQUIRE(out.size() == 2);
  for (const auto& s : out) {
    const auto expected = s.level == InternalLevel::excited ? e_expected : g_expected;
    const auto amps = s.resolved();
    const Eigen::Index mid = s.grid.count / 2;
    CHECK(std::abs(amps(mid) / base.amplitudes(mid) - expected) < 1e-13);
  }
  double norm = 0;
  for (const auto& s : out) norm += s.norm_squared();
  CHECK(norm == doctest::Approx(std::norm(a) + std::norm(b)).epsilon(1e-13));
}

TEST_CASE("Raman pulse rejects mismatched spacing") {
  auto e = make_gaussian<double>(0.0, 1e-29, 0.0, GridSpec{});
  auto g = make_gaussian<double>(0.0, 2e-29, 0.0, GridSpec{});
  g.level = InternalLevel::ground;
  CHECK_THROWS_AS(apply_raman<double>({e, g}, beamsplitter_area, k0, 0.0, +1), ValidationError);
}

TEST_CASE("mirror operator") {
  auto e = make_gaussian<double>(pk, 0.05 * rb87::recoil_momentum, 0.0, GridSpec{});
  auto g = kick(e, -pk);
  g.level = InternalLevel::ground;
  const auto [up, low] = apply_mirror(e, g, 0.0, 0.0);
  CHECK(up.grid.center == doctest::Approx(-pk));
  CHECK(low.grid.center == doctest::Approx(0.0).epsilon(1e-40));
  CHECK(up.scalar_phase == doctest::Approx(pi));
  CHECK(low.scalar_phase == doctest::Approx(pi));
  CHECK(up.norm_squared() == doctest::Approx(e.norm_squared()).epsilon(1e-12));

  // Relative phase 2 p (zeta_e - zeta_g) / hbar at each |p|.
  const double ze = 2e-6, zg = -1e-6;
  auto g_same = e;
  g_same.level = InternalLevel::ground;
  const auto [u3, l3] = apply_mirror(e, g_same, ze, zg);
  for (Eigen::Index j = 0; j < e.grid.count; j += 401) {
    const double p = e.grid.momentum(j);
    const Eigen::Index r = e.grid.count - 1 - j;
    const double rel = std::arg(u3.resolved()(r) / l3.resolved()(r));
    CHECK(std::remainder(rel - 2 * p * (ze - zg) / hbar, 2 * pi) == doctest::Approx(0.0).epsilon(1e-9));
  }
  CHECK_THROWS_AS(apply_mirror(g, e, 0.0, 0.0), ValidationError);
}

TEST_CASE("MZI fringe follows the closed form") {
  auto s = canonical_interferometer(0.01);
  const double phi_g = s.k * s.g * s.T * s.T;
  s.phiT = -phi_g / 2;  // Delta phi = k g T^2
  CHECK(run_mzi<LD>(s).excited == doctest::Approx(1.0).epsilon(1e-10));
  s.phiT = -(phi_g + pi) / 2;
  CHECK(run_mzi<LD>(s).excited == doctest::Approx(0.0).epsilon(1e-10));

  Random rng(22);
  for (int i = 0; i < 20; ++i) {
    auto r = canonical_interferometer(rng.uniform(1e-3, 0.05), rng.uniform(0, 10));
    r.phi0 = rng.uniform(0, 2 * pi);
    r.phiT = rng.uniform(0, 2 * pi);
    r.phi2T = rng.uniform(0, 2 * pi);
    r.packet.p_center = rng.uniform(-10, 10) * pk;
    r.packet.z_center = rng.uniform(-1e-3, 1e-3);
    r.packet.delta_p = rng.uniform(0.02, 0.2) * rb87::recoil_momentum;
    const double expected = 0.5 * (1 + std::cos(phase_mzi(r.k, r.g, r.T, r.phi0, r.phiT, r.phi2T)));
    const auto p = run_mzi<LD>(r);
    CHECK(std::abs(p.excited - expected) < 1e-10);
    CHECK(std::abs(p.excited + p.ground - 1) < 1e-10);
  }
}

TEST_CASE("closed SMI gives phi_+ - 2 k g T^2 with full visibility") {
  for (const double T : {1e-3, 0.01, 0.05}) {
    auto s = canonical_interferometer(T);
    s.phi0 = 0.4;
    s.phi2T = 1.1;
    const double expected = 0.5 * (1 + std::cos(phase_smi(s.k, s.g, s.T, s.phi0, s.phi2T)));
    const auto p = run_smi_direct<LD>(s);
    CHECK(std::abs(p.ground - expected) < 1e-8);
    CHECK(std::abs(p.ground + p.excited - 1) < 1e-10);
    CHECK(std::abs(run_smi_closed_form<LD>(s).ground - expected) < 1e-8);
  }
}

TEST_CASE("gravity-free SMI phase") {
  // g = 0, zeta_e - zeta_g = hbar k T / m, phi_+ = 0: phi~ = 2 k zeta_g + hbar k^2 T / m.
  auto s = canonical_interferometer(0.02, 0.0);
  const double tilde = 2 * s.k * s.zeta_g + hbar * s.k * s.k * s.T / m;
  const auto p = run_smi_direct<LD>(s);
  CHECK(std::abs(p.ground - 0.5 * (1 + std::cos(tilde))) < 1e-8);
}

TEST_CASE("direct SMI evolution equals the closed form on open and closed configurations") {
  Random rng(23);
  double worst = 0;
  for (int i = 0; i < 60; ++i) {
    const auto s = random_smi(rng, i % 4 != 0);
    const auto direct = run_smi_direct<LD>(s);
    const auto closed = run_smi_closed_form<LD>(s);
    worst = std::max(worst, std::abs(direct.ground - closed.ground));
    CHECK(std::abs(direct.ground + direct.excited - 1) < 1e-10);
  }
  CHECK(worst < 1e-8);
}

TEST_CASE("clock phase adds -2 omega T") {
  auto s = canonical_interferometer(1e-3);
  s.clock_phase = true;
  s.species.internal_splitting = 2 * pi * 1234.5;
  const double base = phase_smi(s.k, s.g, s.T, s.phi0, s.phi2T);
  const double expected = 0.5 * (1 + std::cos(base - 2 * s.species.internal_splitting * s.T));
  CHECK(std::abs(run_smi_direct<LD>(s).ground - expected) < 1e-8);
  CHECK(std::abs(run_smi_closed_form<LD>(s).ground - expected) < 1e-8);
  s.diffraction = Diffraction::bragg;
  CHECK(s.effective_omega() == 0.0);
}

TEST_CASE("Gaussian visibility law for the closed form") {
  auto s = canonical_interferometer(0.01);
  const double dp = s.packet.delta_p;
  for (const double x : {0.0, 0.5, 1.0, 2.0}) {
    const double Z = x * hbar / dp;
    auto probe = s;
    probe.zeta_e = s.zeta_g + hbar * s.k * s.T / m + Z;
    double p[4];
    for (int q = 0; q < 4; ++q) {
      auto t = probe;
      t.phi0 += q * pi / 2;
      p[q] = run_smi_closed_form<LD>(t).ground;
    }
    const double v = std::hypot(p[0] - p[2], p[1] - p[3]);
    CHECK(std::abs(v - std::exp(-2 * x * x)) < 1e-6);
  }
}

TEST_CASE("laboratory and freely-falling frames agree") {
  Random rng(24);
  for (int i = 0; i < 20; ++i) {
    const auto s = random_smi(rng, i % 2 == 0);
    const auto lab = run_smi_direct<LD>(s);
    const auto fall = run_in_freefall_frame<LD>(s, Geometry::smi);
    CHECK(std::abs(lab.ground - fall.ground) < 1e-8);
    CHECK(std::abs(lab.excited - fall.excited) < 1e-8);

    auto mzi = s;
    mzi.phiT = rng.uniform(0, 2 * pi);
    const auto a = run_mzi<LD>(mzi, Frame::laboratory);
    const auto b = run_mzi<LD>(mzi, Frame::freely_falling);
    CHECK(std::abs(a.excited - b.excited) < 1e-10);
  }
  // g = 0: the two runs coincide state by state.
  auto s = canonical_interferometer(0.01, 0.0);
  s.phi0 = 0.2;
  const auto lab = run_sequence<double>(s, Geometry::smi, Frame::laboratory);
  const auto fall = run_sequence<double>(s, Geometry::smi, Frame::freely_falling);
  REQUIRE(lab.size() == fall.size());
  for (std::size_t i = 0; i < lab.size(); ++i) CHECK(max_relative_difference(lab[i], fall[i]) < 1e-12);
}

TEST_CASE("momentum-open recombination is reported") {
  auto a = make_gaussian<double>(0.0, 1e-29, 0.0, GridSpec{});
  a.level = InternalLevel::ground;
  auto b = kick(a, 3 * a.grid.spacing);
  CHECK_THROWS_AS(port_probability<double>({a, b}, InternalLevel::ground), MomentumOpenError);
  CHECK(port_probability<double>({a, b}, InternalLevel::excited) == 0.0);
}
