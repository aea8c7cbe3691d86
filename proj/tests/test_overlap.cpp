#include <doctest.h>

#include <cmath>
#include <tuple>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "codedphoton/atom.hpp"
#include "codedphoton/error.hpp"
#include "codedphoton/experiments.hpp"
#include "codedphoton/overlap.hpp"

using namespace codedphoton;

namespace {

// Independent oracle: <xi_e|xi_opt> integrated directly in time,
//   \int_{-inf}^0 conj(xi_e(t)) sqrt(gamma) e^{gamma t / 2} dt,
// with xi_e the unit-normalized encoded pulse,
// sqrt(W/2pi)/N0 sinc(Omega t/2) sum_n exp[-i(n Omega t + phi_n)].
cplx overlap_by_quadrature(const PhaseCode& code, double gamma) {
  using boost::math::quadrature::gauss_kronrod;
  const std::size_t n0 = code.length();
  const double omega = code.chip_width;
  const double w = omega * static_cast<double>(n0);
  const auto half = static_cast<double>((n0 - 1) / 2);
  auto integrand = [&](double s, bool imag) {
    const double t = -s;
    cplx comb{0.0, 0.0};
    for (std::size_t j = 0; j < n0; ++j) {
      const double n = static_cast<double>(j) - half;
      comb += std::polar(1.0, -(n * omega * t + code.phases[j]));
    }
    const cplx xi = std::sqrt(w / (2.0 * kPi)) / static_cast<double>(n0) * sinc(0.5 * omega * t) * comb;
    const cplx v = std::conj(xi) * std::sqrt(gamma) * std::exp(0.5 * gamma * t);
    return imag ? v.imag() : v.real();
  };
  // e^{-gamma s / 2} < 1e-20 beyond s = 92 / gamma.
  const double upper = 92.0 / gamma;
  const double re = gauss_kronrod<double, 61>::integrate([&](double s) { return integrand(s, false); }, 0.0, upper, 20,
                                                         1e-13);
  const double im = gauss_kronrod<double, 61>::integrate([&](double s) { return integrand(s, true); }, 0.0, upper, 20,
                                                         1e-13);
  return {re, im};
}

FrequencyGrid chi_grid(double gamma, double half_span, double spacing) {
  return FrequencyGrid::covering(0.0, half_span * gamma, spacing * gamma);
}

}  // namespace

TEST_CASE("lorentzian susceptibility") {
  const double gamma = 2.0, delta = 0.3;
  const auto grid = FrequencyGrid::covering(delta, 40.0 * gamma, 0.01);
  const auto chi = lorentzian_chi(gamma, delta, grid);
  double mass = 0.0, peak = 0.0;
  std::size_t at = 0;
  for (std::size_t k = 0; k < grid.count; ++k) {
    mass += std::norm(chi.values[k]) * grid.spacing;
    if (std::abs(chi.values[k]) > peak) peak = std::abs(chi.values[k]), at = k;
  }
  CHECK(std::abs(grid[at] - delta) <= grid.spacing);
  CHECK(mass == doctest::Approx(2.0 * kPi).epsilon(0.01));

  auto chi_at = [&](double w) { return std::sqrt(gamma) / cplx{0.5 * gamma, -(w - delta)}; };
  CHECK(std::abs(chi_at(delta)) == doctest::Approx(2.0 / std::sqrt(gamma)));
  CHECK(std::norm(chi_at(delta + 0.5 * gamma)) == doctest::Approx(0.5 * std::norm(chi_at(delta))));
  CHECK(std::norm(chi_at(delta - 0.5 * gamma)) == doctest::Approx(0.5 * std::norm(chi_at(delta))));
  // The implementation agrees with the formula sample by sample.
  for (std::size_t k = 0; k < grid.count; k += 997) CHECK(std::abs(chi.values[k] - chi_at(grid[k])) < 1e-14);

  CHECK_THROWS_AS(lorentzian_chi(gamma, delta, FrequencyGrid::covering(delta, 10.0 * gamma, 0.01)), ValidationError);
}

TEST_CASE("spectral overlap") {
  const double gamma = 1.0;
  SUBCASE("matched spectrum saturates Cauchy-Schwarz") {
    const auto grid = chi_grid(gamma, 4000.0, 0.05);
    const auto chi = lorentzian_chi(gamma, 0.0, grid);
    SpectralAmplitude xi{grid, {}, 1.0, 0.0, std::nullopt};
    for (const auto& c : chi.values) xi.values.push_back(std::conj(c));
    const std::vector<double> zero(grid.count, 0.0);
    CHECK(std::abs(spectral_overlap(xi, zero, 0.0, gamma).m) == doctest::Approx(1.0).epsilon(1e-4));
  }
  const double w = 1.39 * gamma;
  const auto grid = default_frequency_grid(w);
  const auto xi = rect_spectrum(w, 1.0, grid);
  const std::vector<double> zero(grid.count, 0.0);
  SUBCASE("constant phase does not change |M|") {
    const std::vector<double> c(grid.count, 0.7);
    CHECK(std::abs(spectral_overlap(xi, c, 0.0, gamma).m) ==
          doctest::Approx(std::abs(spectral_overlap(xi, zero, 0.0, gamma).m)).epsilon(1e-14));
  }
  SUBCASE("rectangular spectrum near the optimum") {
    const auto r = spectral_overlap(xi, zero, 0.0, gamma);
    CHECK(r.m_abs2 == doctest::Approx(std::norm(r.m)));
    CHECK(r.m_abs2 == doctest::Approx(0.411).epsilon(0.005 / 0.411));
    CHECK(r.m_abs2 == doctest::Approx(bandwidth_match(w, gamma)).epsilon(0.005));
  }
  SUBCASE("detuning symmetry") {
    const double a = std::abs(spectral_overlap(xi, zero, 0.4, gamma).m);
    const double b = std::abs(spectral_overlap(xi, zero, -0.4, gamma).m);
    CHECK(std::abs(a - b) < 1e-9);
  }
  SUBCASE("never above one") {
    for (double d : {-2.0, 0.0, 0.3, 5.0}) CHECK(std::abs(spectral_overlap(xi, zero, d, gamma).m) <= 1.0 + 1e-6);
  }
  SUBCASE("grid mismatch") {
    const std::vector<double> bad(grid.count - 1, 0.0);
    CHECK_THROWS_AS(spectral_overlap(xi, bad, 0.0, gamma), ValidationError);
  }
}

TEST_CASE("bandwidth matching") {
  const double gamma = 1.0;
  SUBCASE("closed form at zero detuning") {
    for (double x : {0.2, 1.0, 2.5, 8.0}) {
      const double ref = 2.0 / (kPi * x) * std::pow(std::atan(x), 2);
      CHECK(bandwidth_match(x * gamma, gamma) == doctest::Approx(ref).epsilon(1e-14));
    }
  }
  SUBCASE("asymptotics") {
    CHECK(bandwidth_match(2e-4, gamma) / bandwidth_match(1e-4, gamma) == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(bandwidth_match(2e4, gamma) / bandwidth_match(1e4, gamma) == doctest::Approx(0.5).epsilon(1e-3));
  }
  SUBCASE("agrees with quadrature across W and detuning") {
    for (double x : {0.2, 0.5, 1.0, 1.39, 2.0, 4.0, 8.0}) {
      const double w = x * gamma;
      const auto grid = default_frequency_grid(w);
      const auto xi = rect_spectrum(w, 1.0, grid);
      const std::vector<double> zero(grid.count, 0.0);
      for (double d : {0.0, 0.3, -1.2}) {
        const double q = spectral_overlap(xi, zero, d, gamma).m_abs2;
        CHECK(q == doctest::Approx(bandwidth_match(w, gamma, d)).epsilon(0.005));
      }
    }
  }
  SUBCASE("detuning symmetry of the analytic form") {
    CHECK(bandwidth_match(1.5, gamma, 0.7) == doctest::Approx(bandwidth_match(1.5, gamma, -0.7)).epsilon(1e-12));
    CHECK(bandwidth_match(1.5, gamma, 0.7) < bandwidth_match(1.5, gamma, 0.0));
  }
}

TEST_CASE("optimal bandwidth") {
  for (double gamma : {0.5, 1.0, 3.0}) {
    const double w = optimal_bandwidth(gamma);
    const double x = w / gamma;
    CHECK(x == doctest::Approx(1.39).epsilon(0.01 / 1.39));
    CHECK(std::abs(optimal_bandwidth_residual(x)) < 1e-10);
    CHECK(bandwidth_match(0.9 * w, gamma) < bandwidth_match(w, gamma));
    CHECK(bandwidth_match(1.1 * w, gamma) < bandwidth_match(w, gamma));
  }
  SUBCASE("single interior maximum") {
    const double xs = optimal_bandwidth(1.0);
    double prev = 0.0;
    bool rising = true;
    double turn = 0.0;
    for (int i = 0; i <= 2000; ++i) {
      const double x = 0.1 + i * (10.0 - 0.1) / 2000.0;
      const double v = bandwidth_match(x, 1.0);
      if (i > 0) {
        if (rising && v < prev) rising = false, turn = x;
        else if (!rising) CHECK(v < prev);
      }
      prev = v;
    }
    CHECK(turn == doctest::Approx(xs).epsilon(0.01));
  }
  SUBCASE("trivial root excluded") { CHECK(optimal_bandwidth_residual(0.0) == 0.0); }
}

TEST_CASE("chip amplitudes sum to M") {
  const double gamma = 1.0;
  for (std::size_t n0 : {1UL, 2UL, 7UL, 32UL}) {
    for (double d : {0.0, 0.4}) {
      const double w = 1.5;
      const auto a = chip_amplitudes(n0, w / static_cast<double>(n0), gamma, d);
      cplx s{0.0, 0.0};
      for (const auto& v : a) s += v;
      CHECK(std::norm(s) == doctest::Approx(bandwidth_match(w, gamma, d)).epsilon(1e-12));
    }
  }
}

TEST_CASE("coded overlap") {
  const double gamma = 1.0, w = 1.5;
  SUBCASE("term-wise closed form against direct time quadrature") {
    for (std::size_t n0 : {1UL, 3UL, 7UL, 31UL}) {
      const auto code = PhaseCode::random_binary(n0, w / static_cast<double>(n0), 17, 0);
      const cplx ref = overlap_by_quadrature(code, gamma);
      CHECK(std::abs(coded_overlap(code, code.chip_width, gamma) - ref) < 1e-9);
    }
    const PhaseCode arbitrary{{0.3, -1.1, 2.0, 0.0, 0.9}, w / 5};
    CHECK(std::abs(coded_overlap(arbitrary, arbitrary.chip_width, gamma) - overlap_by_quadrature(arbitrary, gamma)) <
          1e-9);
  }
  SUBCASE("all-zero code is the uncoded overlap") {
    const auto code = PhaseCode::zeros(31, w / 31);
    const auto grid = TimeGrid::cell_aligned(-4000.0, 4000.0, 0.01);
    const cplx t = temporal_overlap(uncoded_mode(w, grid), optimal_mode(gamma, grid));
    CHECK(std::abs(coded_overlap(code, code.chip_width, gamma) - t) < 1e-4);
    CHECK(std::norm(coded_overlap(code, code.chip_width, gamma)) == doctest::Approx(bandwidth_match(w, gamma)));
  }
  SUBCASE("global sign flip") {
    auto code = PhaseCode::random_binary(7, w / 7, 4, 0);
    const cplx a = coded_overlap(code, code.chip_width, gamma);
    for (auto& p : code.phases) p = p == 0.0 ? kPi : 0.0;
    CHECK(std::abs(coded_overlap(code, code.chip_width, gamma) + a) < 1e-14);
  }
  SUBCASE("spectral route agrees for odd N0") {
    for (std::uint64_t i = 0; i < 10; ++i) {
      const auto code = PhaseCode::random_binary(31, w / 31, 8, i);
      CHECK(std::abs(coded_overlap(code, code.chip_width, gamma) - coded_overlap_spectral(code, gamma)) < 1e-12);
    }
  }
  SUBCASE("spectral route agrees with the transform path for even N0") {
    // Unit-norm spectrum (P0 = W) transformed without renormalizing on the
    // window; xi_opt has negligible weight outside it.
    for (std::size_t n0 : {2UL, 8UL, 32UL}) {
      const double omega = w / static_cast<double>(n0);
      const auto code = PhaseCode::random_binary(n0, omega, 8, 0);
      const auto fgrid = FrequencyGrid::covering(0.0, 0.5 * w, omega / 64.0);
      const auto tgrid = TimeGrid::cell_aligned(-100.0, 0.5, 0.01);
      auto mode = to_time(encode(rect_spectrum(w, w, fgrid), code), tgrid);
      mode.normalized = true;
      const cplx t = temporal_overlap(mode, optimal_mode(gamma, tgrid));
      CHECK(std::abs(t - coded_overlap_spectral(code, gamma)) < 1e-5);
    }
  }
  SUBCASE("even N0 is rejected") {
    CHECK_THROWS_AS(coded_overlap(PhaseCode::zeros(4, w / 4), w / 4, gamma), ValidationError);
  }
  SUBCASE("ensemble mean decreases with N0") {
    double prev = 1e300;
    for (std::size_t n0 : {3UL, 7UL, 31UL}) {
      double mean = 0.0;
      for (std::uint64_t i = 0; i < 200; ++i) {
        const auto code = PhaseCode::random_binary(n0, w / static_cast<double>(n0), 21, i);
        mean += std::norm(coded_overlap(code, code.chip_width, gamma)) / 200.0;
      }
      CHECK(mean < prev);
      prev = mean;
    }
  }
}

TEST_CASE("parity comparison") {
  const double gamma = 1.0;
  CHECK_THROWS_AS(parity_comparison(31, 32, 1.0, gamma, 0, 1), ValidationError);
  CHECK_THROWS_AS(parity_comparison(31, 33, 1.0, gamma, 10, 1), ValidationError);
  CHECK_THROWS_AS(parity_comparison(32, 33, 1.0, gamma, 10, 1), ValidationError);
  const auto one = parity_comparison(31, 32, 1.0, gamma, 1, 5);
  CHECK((one.odd_fraction == 0.0 || one.odd_fraction == 1.0));
  CHECK((one.even_fraction == 0.0 || one.even_fraction == 1.0));
  const auto r = parity_comparison(7, 8, 1.0, gamma, 2000, 5);
  CHECK(r.odd_fraction >= 0.0);
  CHECK(r.odd_fraction <= 1.0);
  CHECK(r.even_fraction >= 0.0);
  CHECK(r.even_fraction <= 1.0);
  CHECK(r.odd_lo <= r.odd_fraction);
  CHECK(r.odd_hi >= r.odd_fraction);
  CHECK(r.even_lo <= r.even_fraction);
  CHECK(r.even_hi >= r.even_fraction);
  const auto again = parity_comparison(7, 8, 1.0, gamma, 2000, 5, 3);
  CHECK(again.odd_fraction == r.odd_fraction);
  CHECK(again.even_fraction == r.even_fraction);
}

TEST_CASE("wilson interval") {
  auto [lo, hi] = wilson_interval(50, 100);
  CHECK(lo == doctest::Approx(0.4038).epsilon(1e-3));
  CHECK(hi == doctest::Approx(0.5962).epsilon(1e-3));
  std::tie(lo, hi) = wilson_interval(0, 10);
  CHECK(lo == 0.0);
  CHECK(hi > 0.2);
}
