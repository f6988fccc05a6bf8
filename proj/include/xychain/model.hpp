#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace xychain {

// Anisotropic XY chain in a transverse field, N sites on a ring with the
// fermion boundary c_{N+1} = c_1:
//
//   H = -sum_i { (J/2) [ (c_i^+ c_{i+1} - c_i c_{i+1}^+)
//              + gamma (c_i^+ c_{i+1}^+ - c_i c_{i+1}) ]
//              + h (c_i^+ c_i - 1/2) }.
//
// gamma = 0 is the isotropic chain, gamma = 1 the Ising limit.
struct ChainSpec {
  int n_sites;        // N >= 3
  double coupling;    // J
  double anisotropy;  // gamma
  double field;       // h
};

struct MomentumGrid {
  std::vector<double> modes;  // k_m = 2*pi*m/N, -N/2 < m <= N/2, ascending in m
};

// One quasiparticle mode. beta carries the sign of J*gamma*sin(k), with
// sign(0) := +1 so that alpha^2 + beta^2 = 1 also where sin(k) = 0.
struct BogoliubovMode {
  double k;
  double lambda;  // excitation energy, >= 0
  double alpha;
  double beta;
};

inline ChainSpec build_chain(double coupling, double anisotropy, double field,
                             int n_sites) {
  if (n_sites < 3)
    throw std::invalid_argument("build_chain: need n_sites >= 3, got " +
                                std::to_string(n_sites));
  if (!std::isfinite(coupling) || !std::isfinite(anisotropy) ||
      !std::isfinite(field))
    throw std::invalid_argument("build_chain: parameters must be finite");
  return ChainSpec{n_sites, coupling, anisotropy, field};
}

// Interface form with separate in-plane couplings; stored canonically as
// J = (Jx+Jy)/2, gamma = (Jx-Jy)/(Jx+Jy).
inline ChainSpec build_chain_xy(double jx, double jy, double field,
                                int n_sites) {
  if (!std::isfinite(jx) || !std::isfinite(jy))
    throw std::invalid_argument("build_chain_xy: couplings must be finite");
  const double sum = jx + jy;
  if (sum == 0.0)
    throw std::invalid_argument("build_chain_xy: Jx + Jy must be nonzero");
  return build_chain(0.5 * sum, (jx - jy) / sum, field, n_sites);
}

inline MomentumGrid momentum_grid(int n_sites) {
  if (n_sites < 3)
    throw std::invalid_argument("momentum_grid: need n_sites >= 3");
  MomentumGrid grid;
  grid.modes.reserve(static_cast<std::size_t>(n_sites));
  for (int m = -((n_sites - 1) / 2); m <= n_sites / 2; ++m)
    grid.modes.push_back(2.0 * std::numbers::pi * m / n_sites);
  return grid;
}

inline double dispersion(const ChainSpec& spec, double k) {
  const double eps = spec.field + spec.coupling * std::cos(k);
  const double pair = spec.coupling * spec.anisotropy * std::sin(k);
  return std::hypot(eps, pair);
}

namespace detail {

// (alpha, beta) from the longitudinal part eps = h + J cos k and the pairing
// part pair = J gamma sin k. pair == 0 is resolved without rounding residue
// so that gamma = 0 and the sin(k) = 0 modes give alpha*beta exactly zero;
// the degenerate lambda = 0 point is fixed to (1, 0) to keep results
// deterministic (every use multiplies by sin(lambda t) = 0 there anyway).
inline std::pair<double, double> bogoliubov_pair(double eps, double pair) {
  if (pair == 0.0) {
    if (eps > 0.0) return {0.0, 1.0};
    return {1.0, 0.0};
  }
  const double lambda = std::hypot(eps, pair);
  const double ratio = std::clamp(eps / lambda, -1.0, 1.0);
  return {std::sqrt(0.5 * (1.0 - ratio)),
          std::copysign(std::sqrt(0.5 * (1.0 + ratio)), pair)};
}

}  // namespace detail

inline std::pair<double, double> bogoliubov_coefficients(const ChainSpec& spec,
                                                         double k) {
  if (!std::isfinite(k))
    throw std::invalid_argument("bogoliubov_coefficients: k must be finite");
  const double eps = spec.field + spec.coupling * std::cos(k);
  const double pair = spec.coupling * spec.anisotropy * std::sin(k);
  return detail::bogoliubov_pair(eps, pair);
}

// All modes of the grid. sin(k) is zeroed exactly at m = 0 and m = N/2 so the
// pairing amplitude vanishes identically there (and for gamma = 0 on the
// whole grid), which the closed-form contractions rely on.
inline std::vector<BogoliubovMode> bogoliubov_modes(const ChainSpec& spec) {
  const int n = spec.n_sites;
  std::vector<BogoliubovMode> modes;
  modes.reserve(static_cast<std::size_t>(n));
  for (int m = -((n - 1) / 2); m <= n / 2; ++m) {
    const double k = 2.0 * std::numbers::pi * m / n;
    const double sin_k = (m == 0 || 2 * m == n) ? 0.0 : std::sin(k);
    const double eps = spec.field + spec.coupling * std::cos(k);
    const double pair = spec.coupling * spec.anisotropy * sin_k;
    const auto [alpha, beta] = detail::bogoliubov_pair(eps, pair);
    modes.push_back({k, std::hypot(eps, pair), alpha, beta});
  }
  return modes;
}

}  // namespace xychain
