#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "xychain/model.hpp"

using namespace xychain;
using Catch::Approx;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("build_chain validates its inputs") {
  const ChainSpec strong = build_chain(0.1, 0.5, 1.0, 5);
  CHECK(strong.n_sites == 5);
  CHECK(strong.coupling == 0.1);
  CHECK(strong.anisotropy == 0.5);
  CHECK(strong.field == 1.0);

  CHECK_NOTHROW(build_chain(1.0, 0.0, 0.0, 3));
  CHECK_THROWS_AS(build_chain(1.0, 0.5, 0.5, 2), std::invalid_argument);
  CHECK_THROWS_AS(build_chain(std::nan(""), 0.0, 0.0, 5), std::invalid_argument);
  CHECK_THROWS_AS(build_chain(1.0, 0.0, std::numeric_limits<double>::infinity(), 5),
                  std::invalid_argument);
}

TEST_CASE("build_chain_xy converts to (J, gamma)") {
  const ChainSpec spec = build_chain_xy(1.5, 0.5, 0.3, 4);
  CHECK(spec.coupling == Approx(1.0));
  CHECK(spec.anisotropy == Approx(0.5));
  CHECK(spec.field == 0.3);
  CHECK_THROWS_AS(build_chain_xy(1.0, -1.0, 0.0, 4), std::invalid_argument);
}

TEST_CASE("momentum grid instantiates k = 2 pi m / N") {
  SECTION("N = 4") {
    const auto grid = momentum_grid(4);
    REQUIRE(grid.modes.size() == 4);
    CHECK(grid.modes[0] == Approx(-kPi / 2));
    CHECK(grid.modes[1] == Approx(0.0).margin(1e-15));
    CHECK(grid.modes[2] == Approx(kPi / 2));
    CHECK(grid.modes[3] == Approx(kPi));
  }
  SECTION("N = 5") {
    const auto grid = momentum_grid(5);
    REQUIRE(grid.modes.size() == 5);
    CHECK(grid.modes[0] == Approx(-4 * kPi / 5));
    CHECK(grid.modes[1] == Approx(-2 * kPi / 5));
    CHECK(grid.modes[2] == Approx(0.0).margin(1e-15));
    CHECK(grid.modes[3] == Approx(2 * kPi / 5));
    CHECK(grid.modes[4] == Approx(4 * kPi / 5));
  }
  SECTION("N = 3") {
    const auto grid = momentum_grid(3);
    REQUIRE(grid.modes.size() == 3);
    CHECK(grid.modes[0] == Approx(-2 * kPi / 3));
    CHECK(grid.modes[2] == Approx(2 * kPi / 3));
  }
}

TEST_CASE("momentum grid covers (-pi, pi] and pairs +-k") {
  for (int n : {3, 4, 5, 6, 7, 8, 11, 12}) {
    const auto grid = momentum_grid(n);
    REQUIRE(static_cast<int>(grid.modes.size()) == n);
    for (double k : grid.modes) {
      CHECK(k > -kPi - 1e-12);
      CHECK(k <= kPi + 1e-12);
    }
    // every k except 0 (and pi for even N) has its mirror
    for (double k : grid.modes) {
      if (std::abs(k) < 1e-12 || std::abs(k - kPi) < 1e-12) continue;
      const bool mirrored =
          std::any_of(grid.modes.begin(), grid.modes.end(),
                      [&](double q) { return std::abs(q + k) < 1e-12; });
      CHECK(mirrored);
    }
  }
}

TEST_CASE("dispersion closed forms") {
  SECTION("k = pi removes the anisotropy term") {
    for (double gamma : {0.0, 0.3, 1.0}) {
      const ChainSpec spec = build_chain(0.7, gamma, 0.25, 6);
      CHECK(dispersion(spec, kPi) == Approx(std::abs(0.25 - 0.7)).margin(1e-12));
    }
  }
  SECTION("gamma = 0 reduces to |h + J cos k|") {
    const ChainSpec spec = build_chain(1.0, 0.0, 0.4, 7);
    for (double k : momentum_grid(7).modes)
      CHECK(dispersion(spec, k) ==
            Approx(std::abs(0.4 + std::cos(k))).margin(1e-14));
  }
  SECTION("frozen value at J=1, h=0.1, gamma=0.5, k=2pi/5") {
    const ChainSpec spec = build_chain(1.0, 0.5, 0.1, 5);
    CHECK(dispersion(spec, 2 * kPi / 5) ==
          Approx(0.627233629506888).margin(1e-12));
  }
}

TEST_CASE("dispersion is even in k") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const ChainSpec spec =
        build_chain(0.1 + unit(rng), unit(rng), 0.1 + unit(rng), 5);
    const double k = (2.0 * unit(rng) - 1.0) * kPi;
    CHECK(dispersion(spec, k) == Approx(dispersion(spec, -k)).margin(1e-14));
  }
}

TEST_CASE("bogoliubov coefficients at sin k = 0") {
  SECTION("h + J cos k > 0 gives (0, 1)") {
    const ChainSpec spec = build_chain(0.5, 0.8, 1.0, 6);
    const auto [alpha, beta] = bogoliubov_coefficients(spec, 0.0);
    CHECK(alpha == 0.0);
    CHECK(beta == 1.0);
  }
  SECTION("h + J cos k < 0 gives (1, 0)") {
    const ChainSpec spec = build_chain(1.0, 0.8, -2.0, 6);
    const auto [alpha, beta] = bogoliubov_coefficients(spec, 0.0);
    CHECK(alpha == 1.0);
    CHECK(beta == 0.0);
  }
  SECTION("grid mode at k = pi is exact for any gamma") {
    const ChainSpec spec = build_chain(0.5, 0.8, 1.0, 6);
    const auto modes = bogoliubov_modes(spec);
    const auto& edge = modes.back();
    REQUIRE(edge.k == Approx(kPi));
    CHECK(edge.alpha == 0.0);  // h - J = 0.5 > 0
    CHECK(edge.beta == 1.0);
  }
}

TEST_CASE("bogoliubov coefficients at a generic mode") {
  const ChainSpec spec = build_chain(1.0, 0.5, 0.1, 5);
  const double k = 2 * kPi / 5;
  const auto [alpha, beta] = bogoliubov_coefficients(spec, k);
  CHECK(alpha == Approx(0.417075099335316).margin(1e-12));
  CHECK(beta == Approx(0.908872027028248).margin(1e-12));
  CHECK(beta > 0.0);  // sign(J gamma sin k) with sin k > 0
  CHECK(alpha * alpha + beta * beta == Approx(1.0).margin(1e-12));
}

TEST_CASE("degenerate lambda = 0 mode maps to (1, 0)") {
  // h + J cos(pi) = 0 and the pairing part vanishes at k = pi
  const ChainSpec spec = build_chain(1.0, 0.0, 1.0, 4);
  CHECK(dispersion(spec, kPi) == 0.0);
  const auto [alpha, beta] = bogoliubov_coefficients(spec, kPi);
  CHECK(alpha == 1.0);
  CHECK(beta == 0.0);
}

TEST_CASE("normalization holds on every grid mode") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 3 + static_cast<int>(rng() % 8);
    const ChainSpec spec =
        build_chain(0.1 + 0.9 * unit(rng), unit(rng), 0.1 + 0.9 * unit(rng), n);
    for (const auto& mode : bogoliubov_modes(spec)) {
      CHECK(mode.alpha * mode.alpha + mode.beta * mode.beta ==
            Approx(1.0).margin(1e-12));
      CHECK(mode.lambda >= 0.0);
      CHECK(mode.lambda == Approx(dispersion(spec, mode.k)).margin(1e-12));
      const double pairing =
          spec.coupling * spec.anisotropy * std::sin(mode.k);
      if (std::abs(pairing) > 1e-12)
        CHECK(std::signbit(mode.beta) == std::signbit(pairing));
    }
  }
}

TEST_CASE("strong-field dispersion expansion") {
  // |lambda_k - h (1 + (J/h) cos k)| <= 2 (J/h)^2 h for J/h <= 0.01
  const double h = 1.0, ratio = 0.01;
  for (double gamma : {0.0, 0.5, 1.0}) {
    const ChainSpec spec = build_chain(ratio * h, gamma, h, 7);
    for (double k : momentum_grid(7).modes) {
      const double expansion = h * (1.0 + ratio * std::cos(k));
      CHECK(std::abs(dispersion(spec, k) - expansion) <= 2.0 * ratio * ratio * h);
    }
  }
}
