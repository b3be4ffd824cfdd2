#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "pabeam/simulate.hpp"

using namespace pabeam;

TEST_CASE("pulse: zero at origin, odd in time") {
  PulseModel p(7e6, 0.77);
  CHECK(pulse_waveform(0.0, p) == 0.0);
  for (double t : {1e-8, 3.7e-8, 1.1e-7})
    CHECK(pulse_waveform(-t, p) == doctest::Approx(-pulse_waveform(t, p)));
}

TEST_CASE("pulse: spectral peak within one DFT bin of f0") {
  PulseModel p(7e6, 0.77);
  const double fs = 40e6;
  const int n = 1024;
  std::vector<double> x(n);
  for (int k = 0; k < n; ++k)
    x[k] = pulse_waveform((k - n / 2) / fs, p);
  auto spec = oracle::dft(x);
  int peak = 1;
  for (int f = 1; f < n / 2; ++f)
    if (std::abs(spec[f]) > std::abs(spec[peak])) peak = f;
  const double bin = fs / n;
  CHECK(std::abs(peak * bin - 7e6) <= bin);
}

TEST_CASE("pulse validation") {
  CHECK_THROWS_AS(PulseModel(0.0, 0.77), Error);
  CHECK_THROWS_AS(PulseModel(7e6, 0.0), Error);
  CHECK_THROWS_AS(PulseModel(7e6, 2.0), Error);
}

TEST_CASE("simulate: one-way travel time puts the envelope peak at r/c") {
  ArrayGeometry geom(1, 0.3e-3);
  MediumModel medium(1540.0);
  PulseModel pulse(7e6, 0.77);
  Phantom ph = make_custom_phantom({{0.0, 20e-3, 1.0}});
  const double fs = 40e6;
  RfFrame frame = simulate_rf(ph, geom, medium, pulse, fs, 20e-6);
  auto env = oracle::envelope(frame.channel(0));
  int peak = int(std::max_element(env.begin(), env.end()) - env.begin());
  const double t_peak = peak / fs;
  const double expected = 20e-3 / 1540.0;  // 12.987 us
  CHECK(std::abs(t_peak - expected) <= 1.5 / fs);
}

TEST_CASE("simulate: superposition over phantoms") {
  ArrayGeometry geom(4, 0.3e-3);
  MediumModel medium(1540.0);
  PulseModel pulse(7e6, 0.77);
  Phantom a = make_custom_phantom({{-1e-3, 18e-3, 1.0}, {0.5e-3, 22e-3, 0.7}});
  Phantom b = make_custom_phantom({{1e-3, 25e-3, 1.3}});
  Phantom ab = make_custom_phantom({{-1e-3, 18e-3, 1.0},
                                    {0.5e-3, 22e-3, 0.7},
                                    {1e-3, 25e-3, 1.3}});
  const double dur = 25e-6;
  RfFrame fa = simulate_rf(a, geom, medium, pulse, 40e6, dur);
  RfFrame fb = simulate_rf(b, geom, medium, pulse, 40e6, dur);
  RfFrame fab = simulate_rf(ab, geom, medium, pulse, 40e6, dur);
  for (std::size_t i = 0; i < fab.data().size(); ++i)
    CHECK(oracle::close_rel(fab.data()[i], fa.data()[i] + fb.data()[i], 1e-9,
                            1e-15));
}

TEST_CASE("simulate: 1/r spherical spreading") {
  // Elements at +-25 mm; absorber placed so distances are exactly 20 and 40 mm.
  ArrayGeometry geom(2, 50e-3);
  MediumModel medium(1540.0);
  PulseModel pulse(7e6, 0.77);
  const double z = std::sqrt(400.0 - 169.0) * 1e-3;  // 15.1987 mm
  Phantom ph = make_custom_phantom({{-12e-3, z, 1.0}});
  RfFrame frame = simulate_rf(ph, geom, medium, pulse, 40e6, 40e-6);
  auto e0 = oracle::envelope(frame.channel(0));
  auto e1 = oracle::envelope(frame.channel(1));
  double p0 = *std::max_element(e0.begin(), e0.end());
  double p1 = *std::max_element(e1.begin(), e1.end());
  CHECK(p1 / p0 == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("simulate: amplitude homogeneity is exact for power-of-two scales") {
  ArrayGeometry geom(3, 0.4e-3);
  MediumModel medium(1540.0);
  PulseModel pulse(7e6, 0.77);
  Phantom ph = make_custom_phantom({{-0.5e-3, 15e-3, 0.8}, {0.7e-3, 21e-3, 1.1}});
  Phantom ph2 = make_custom_phantom({{-0.5e-3, 15e-3, 1.6}, {0.7e-3, 21e-3, 2.2}});
  RfFrame f1 = simulate_rf(ph, geom, medium, pulse, 40e6, 22e-6);
  RfFrame f2 = simulate_rf(ph2, geom, medium, pulse, 40e6, 22e-6);
  for (std::size_t i = 0; i < f1.data().size(); ++i)
    CHECK(f2.data()[i] == 2.0 * f1.data()[i]);
}

TEST_CASE("simulate: axial translation shifts arrival by dz/c") {
  ArrayGeometry geom(1, 0.3e-3);
  MediumModel medium(1540.0);
  PulseModel pulse(7e6, 0.77);
  const double fs = 40e6;
  const double dz = 3e-3;
  RfFrame f1 = simulate_rf(make_custom_phantom({{0.0, 20e-3, 1.0}}), geom,
                           medium, pulse, fs, 25e-6);
  RfFrame f2 = simulate_rf(make_custom_phantom({{0.0, 20e-3 + dz, 1.0}}), geom,
                           medium, pulse, fs, 25e-6);
  auto e1 = oracle::envelope(f1.channel(0));
  auto e2 = oracle::envelope(f2.channel(0));
  int p1 = int(std::max_element(e1.begin(), e1.end()) - e1.begin());
  int p2 = int(std::max_element(e2.begin(), e2.end()) - e2.begin());
  CHECK(std::abs((p2 - p1) / fs - dz / 1540.0) <= 1.0 / fs);
}

TEST_CASE("simulate: duration too short raises with the required minimum") {
  ArrayGeometry geom(1, 0.3e-3);
  MediumModel medium(1540.0);
  PulseModel pulse(7e6, 0.77);
  Phantom ph = make_custom_phantom({{0.0, 50e-3, 1.0}});
  CHECK_THROWS_WITH_AS(
      simulate_rf(ph, geom, medium, pulse, 40e6, 10e-6),
      doctest::Contains("need at least"), Error);
}

TEST_CASE("add_noise: infinite SNR is the identity") {
  ArrayGeometry geom(2, 0.3e-3);
  RfFrame f = simulate_rf(make_custom_phantom({{0.0, 10e-3, 1.0}}), geom,
                          MediumModel(1540.0), PulseModel(7e6, 0.77), 40e6,
                          12e-6);
  RfFrame g = add_noise(f, std::numeric_limits<double>::infinity(), 99);
  CHECK(g.data() == f.data());
}

TEST_CASE("add_noise: deterministic for a fixed seed") {
  ArrayGeometry geom(2, 0.3e-3);
  RfFrame f = simulate_rf(make_custom_phantom({{0.0, 10e-3, 1.0}}), geom,
                          MediumModel(1540.0), PulseModel(7e6, 0.77), 40e6,
                          12e-6);
  RfFrame a = add_noise(f, 30.0, 1234);
  RfFrame b = add_noise(f, 30.0, 1234);
  CHECK(a.data() == b.data());
  RfFrame c = add_noise(f, 30.0, 1235);
  CHECK(a.data() != c.data());
}

TEST_CASE("add_noise: empirical SNR within 0.2 dB at 1e5+ samples") {
  const int m = 4, n = 30000;
  std::vector<double> data(std::size_t(m) * n);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (double& v : data) v = u(rng);
  RfFrame f(m, n, 40e6, 0.0, data);
  RfFrame g = add_noise(f, 50.0, 77);
  double sig = 0.0, noise = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    sig += f.data()[i] * f.data()[i];
    double d = g.data()[i] - f.data()[i];
    noise += d * d;
  }
  double snr = 10.0 * std::log10(sig / noise);
  CHECK(snr == doctest::Approx(50.0).epsilon(0.004));
}

TEST_CASE("add_noise: added noise is zero-mean with the requested sigma") {
  const int m = 16, n = 62500;  // 1e6 samples
  std::vector<double> data(std::size_t(m) * n, 1.0);  // rms = 1
  RfFrame f(m, n, 40e6, 0.0, data);
  const double snr = 20.0;
  RfFrame g = add_noise(f, snr, 4242);
  const double sigma = std::pow(10.0, -snr / 20.0);
  double mean = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i)
    mean += g.data()[i] - f.data()[i];
  mean /= double(data.size());
  double var = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    double d = g.data()[i] - f.data()[i] - mean;
    var += d * d;
  }
  double std_hat = std::sqrt(var / double(data.size()));
  CHECK(std::abs(mean) < 0.01 * sigma);
  CHECK(std_hat == doctest::Approx(sigma).epsilon(0.01));
}

TEST_CASE("add_noise: all-zero frame with finite SNR is an error") {
  RfFrame f(2, 16, 40e6, 0.0, std::vector<double>(32, 0.0));
  CHECK_THROWS_AS(add_noise(f, 50.0, 1), Error);
}

TEST_CASE("point grid phantom matches the published layout") {
  Phantom ph = make_point_grid_phantom();
  REQUIRE(ph.absorbers().size() == 21);
  // first row at 25 mm depth
  double zmin = 1.0;
  for (const auto& a : ph.absorbers()) zmin = std::min(zmin, a.axial);
  CHECK(zmin == doctest::Approx(25e-3));
  // row separations
  const double seps[] = {4.6e-3, 5.5e-3, 6.4e-3, 7.2e-3, 7.7e-3, 8.5e-3, 9.1e-3};
  for (int row = 0; row < 7; ++row) {
    double z = 25e-3 + row * 5e-3;
    std::vector<double> lats;
    for (const auto& a : ph.absorbers())
      if (std::abs(a.axial - z) < 1e-9) lats.push_back(a.lateral);
    REQUIRE(lats.size() == 3);
    std::sort(lats.begin(), lats.end());
    CHECK(lats[1] == doctest::Approx(0.0));
    CHECK(lats[2] - lats[0] == doctest::Approx(seps[row]));
  }
}

TEST_CASE("cyst phantom: exclusion holds and the count tracks the density") {
  CystSpec spec;
  Phantom ph = make_cyst_phantom(spec);
  for (const auto& a : ph.absorbers())
    for (auto [cx, cz] : spec.cyst_centers) {
      double dx = a.lateral - cx, dz = a.axial - cz;
      CHECK(dx * dx + dz * dz >= spec.cyst_radius * spec.cyst_radius);
    }
  // ~6000 draws minus two pi r^2 rho disks, within 4 binomial sigmas
  const double expected =
      6000.0 - 2.0 * std::numbers::pi * 16e-6 * spec.density_per_m2;
  CHECK(std::abs(double(ph.absorbers().size()) - expected) < 120.0);
  // reproducible by seed
  Phantom ph2 = make_cyst_phantom(spec);
  REQUIRE(ph2.absorbers().size() == ph.absorbers().size());
  CHECK(ph2.absorbers()[0].lateral == ph.absorbers()[0].lateral);
}

TEST_CASE("low contrast and two wire builders") {
  Phantom lc = make_low_contrast_phantom();
  int strong = 0;
  for (const auto& a : lc.absorbers())
    if (a.amplitude == 1.0) ++strong;
  CHECK(strong == 4);
  CHECK(lc.background().has_value());

  Phantom tw = make_two_wire_phantom();
  REQUIRE(tw.absorbers().size() == 2);
  CHECK(tw.absorbers()[0].axial == doctest::Approx(30e-3));
  CHECK(tw.absorbers()[1].axial == doctest::Approx(50e-3));
}
