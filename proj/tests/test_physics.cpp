#include <doctest.h>

#include <cmath>
#include <fstream>

#include "common.hpp"
#include "ness/error.hpp"
#include "ness/physics.hpp"

using namespace ness;
using testing_util::geometry;

TEST_CASE("dispersion at band center and edges") {
  CHECK(dispersion(kPi / 2) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(dispersion(0.0) == doctest::Approx(-2.0));
  CHECK(dispersion(kPi) == doctest::Approx(2.0));
  CHECK(dispersion(0.0, LatticeParams{0.5, 0}) == doctest::Approx(-1.0));
  CHECK(dispersion(kPi / 3 + 2 * kPi) == doctest::Approx(dispersion(kPi / 3)));
}

TEST_CASE("Fermi-Dirac function") {
  CHECK(fermi_dirac(0.3, 0.3, 0.5) == 0.5);
  CHECK(fermi_dirac(-10.0 * 0.7, 0.0, 0.7) == doctest::Approx(1.0 / (std::exp(-10.0) + 1.0)).epsilon(1e-14));
  CHECK(fermi_dirac(1.0, 0.0, 0.0) == 0.0);
  CHECK(fermi_dirac(-1.0, 0.0, 0.0) == 1.0);
  CHECK(fermi_dirac(0.2, 0.2, 0.0) == 0.5);
  // no overflow far in the tails
  CHECK(fermi_dirac(1e4, 0.0, 1e-3) == 0.0);
  CHECK(fermi_dirac(-1e4, 0.0, 1e-3) == 1.0);
  CHECK_THROWS_AS(fermi_dirac(0.0, 0.0, -1.0), InvalidArgument);
}

TEST_CASE("occupation of scattering states by side") {
  ReservoirPair res{0.0, 1.0, 0.3, 0.0};
  CHECK(occupation_tilde(kPi / 2, res) == doctest::Approx(0.5));
  CHECK(occupation_tilde(-kPi / 2, res) == 1.0);
  CHECK_THROWS_AS(occupation_tilde(0.0, res), InvalidArgument);
  ReservoirPair eq{0.4, 0.8, 0.4, 0.8};
  for (double k : {0.3, 1.1, 2.9}) CHECK(occupation_tilde(k, eq) == occupation_tilde(-k, eq));
}

TEST_CASE("reservoir validation") {
  CHECK_THROWS_AS((ReservoirPair{0.0, -0.1, 0.0, 1.0}.validate()), InvalidArgument);
  CHECK_THROWS_AS((ReservoirPair{std::nan(""), 1.0, 0.0, 1.0}.validate()), InvalidArgument);
  CHECK_NOTHROW((ReservoirPair{0.0, 0.0, 0.0, 0.0}.validate()));
  CHECK_THROWS_AS((LatticeParams{0.0, 0}.validate()), InvalidArgument);
  CHECK_THROWS_AS((LatticeParams{1.0, -1}.validate()), InvalidArgument);
}

TEST_CASE("resonant level transmission") {
  const auto free = resonant_level(0.0);
  for (double k : {0.1, 1.0, 2.5}) CHECK(free.transmission(k) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(resonant_level(2.0).transmission(kPi / 2) == doctest::Approx(0.5));
  CHECK(resonant_level(1.0).transmission(kPi / 2) == doctest::Approx(0.8));
  const auto m = resonant_level(1.3);
  for (double k : {0.2, 0.9, 1.7, 3.0}) {
    const double s = std::sin(k);
    CHECK(m.transmission(k) == doctest::Approx(s * s / (s * s + 0.65 * 0.65)).epsilon(1e-14));
    const auto a = m(k);
    CHECK(std::abs(a.t_L - (a.r_L + 1.0)) < 1e-15);
  }
}

TEST_CASE("scattering model invariants on 1000 samples") {
  for (double e : {0.0, 0.5, 1.0, 2.0, -3.0}) {
    const auto m = resonant_level(e);
    CHECK(m.max_unitarity_violation(1000) < 1e-12);
    for (int i = 0; i < 1000; ++i) {
      const double k = kPi * (i + 0.5) / 1000;
      const auto a = m(k);
      CHECK(std::abs(a.transmission() + a.reflection() - 1.0) < 1e-12);
      CHECK(std::abs(std::conj(a.t_R) * a.r_R + a.t_L * std::conj(a.r_L)) < 1e-12);
    }
  }
}

TEST_CASE("non-unitary evaluator is rejected") {
  auto bad = [](double) { return ScatteringAmplitudes{0.5, 0.5, 0.5, 0.5}; };
  CHECK_THROWS_AS(ScatteringModel(bad, "bad"), InvalidArgument);
  auto phase = [](double) {
    const cdouble r(0.6, 0.0), t(0.8, 0.0);
    return ScatteringAmplitudes{r, t, r, t};  // violates t_R* r_R = -t_L r_L*
  };
  CHECK_THROWS_AS(ScatteringModel(phase, "phase"), InvalidArgument);
}

TEST_CASE("mirrored model swaps sides") {
  const auto m = resonant_level(1.0);
  const auto mm = m.mirrored();
  const auto a = m(0.7), b = mm(0.7);
  CHECK(std::abs(a.r_L - b.r_R) < 1e-15);
  CHECK(std::abs(a.t_R - b.t_L) < 1e-15);
}

TEST_CASE("tabulated scattering interpolates and stays unitary") {
  const auto ref = resonant_level(1.0);
  std::vector<double> ks;
  std::vector<ScatteringAmplitudes> rows;
  for (int i = 0; i < 400; ++i) {
    const double k = kPi * (i + 0.5) / 400;
    ks.push_back(k);
    rows.push_back(ref(k));
  }
  const auto tab = tabulated_scattering(ks, rows);
  CHECK(tab.max_unitarity_violation(1000) < 1e-12);
  for (double k : {0.3, 1.0, 1.57, 2.2})
    CHECK(tab.transmission(k) == doctest::Approx(ref.transmission(k)).epsilon(1e-4));
  CHECK_THROWS_AS(tabulated_scattering({0.5, 0.4}, {ref(0.5), ref(0.4)}), InvalidArgument);
  CHECK_THROWS_AS(tabulated_scattering({0.5}, {ref(0.5), ref(0.4)}), InvalidArgument);
}

TEST_CASE("tabulated scattering from CSV") {
  const std::string path = NESS_TEST_DATA "/rlm_eps1.csv";
  const auto tab = load_tabulated_scattering(path);
  const auto ref = resonant_level(1.0);
  for (double k : {0.4, 1.3, 2.8}) CHECK(tab.transmission(k) == doctest::Approx(ref.transmission(k)).epsilon(1e-3));
  CHECK_THROWS_AS(load_tabulated_scattering("/nonexistent/table.csv"), InvalidArgument);
}

TEST_CASE("Fermi momentum") {
  CHECK(fermi_momentum(0.0) == doctest::Approx(kPi / 2));
  CHECK(fermi_momentum(std::sqrt(2.0)) == doctest::Approx(3 * kPi / 4));
  CHECK(fermi_momentum(-2.0 + 1e-10) < 1e-4);
  CHECK_THROWS_AS(fermi_momentum(2.0), InvalidArgument);
  CHECK_THROWS_AS(fermi_momentum(-2.5), InvalidArgument);
}

TEST_CASE("mirror overlap length") {
  CHECK(mirror_overlap_length(geometry(5, 100, 5, 200)) == 100);
  CHECK(mirror_overlap_length(geometry(0, 10, 20, 10)) == 0);
  CHECK(mirror_overlap_length(geometry(10, 50, 30, 100)) == 30);
  for (long s : {0L, 1L, 7L, 300L}) CHECK(mirror_overlap_length(geometry(10 + s, 50, 30 + s, 100)) == 30);
}

TEST_CASE("subsystem site sets") {
  const auto g = geometry(2, 3, 1, 2, 1);
  CHECK(g.left_sites() == std::vector<long>{-6, -5, -4});
  CHECK(g.right_sites() == std::vector<long>{3, 4});
  CHECK(g.union_sites() == std::vector<long>{-6, -5, -4, 3, 4});
  const auto h = geometry(0, 4, 2, 4);
  CHECK(mirror_overlap_length(h) == 2);
  CHECK(h.mirror_sites() == std::vector<long>{-3, 3, -4, 4});
  CHECK(h.delta_ell(Side::Left) == 2);
  CHECK_THROWS_AS(geometry(0, 0, 0, 1).validate(), InvalidArgument);
  CHECK_THROWS_AS(geometry(-1, 3, 0, 1).validate(), InvalidArgument);
}

TEST_CASE("steady state breakpoints") {
  const auto s = testing_util::rlm(1.0, 0.0, 0.0, 1.0, 0.5);
  const auto b = s.breakpoints();
  CHECK(b.size() == 3);
  CHECK(b[1] == 0.0);
  CHECK(b[2] == doctest::Approx(kPi / 2));
  const auto t = testing_util::rlm(1.0, 0.0, 1.0, 0.0, 1.0);
  CHECK(t.breakpoints() == std::vector<double>{0.0});
}
