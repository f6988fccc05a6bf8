#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <stdexcept>

#include "xychain/model.hpp"

namespace xychain {

// Float-noise windows. Residues inside the window are clamped; anything
// larger is treated as a pipeline bug and raised.
inline constexpr double kClampTolerance = 1e-10;
inline constexpr double kBlochNormSlack = 1e-8;

struct BlochVector {
  double sx = 0.0;
  double sy = 0.0;
  double sz = 0.0;
};

inline double bloch_norm_sq(const BlochVector& b) {
  return b.sx * b.sx + b.sy * b.sy + b.sz * b.sz;
}

// Qubit amplitudes of the transmitted state alpha|0> + beta|1>, both real.
struct InputState {
  double alpha;
  double beta;

  InputState(double a, double b) : alpha(a), beta(b) {
    if (!std::isfinite(a) || !std::isfinite(b))
      throw std::invalid_argument("InputState: amplitudes must be finite");
    if (std::abs(a * a + b * b - 1.0) > 1e-12)
      throw std::invalid_argument("InputState: alpha^2 + beta^2 must be 1");
  }

  static InputState from_alpha(double a) {
    if (!(a >= 0.0 && a <= 1.0))
      throw std::invalid_argument("InputState: alpha must lie in [0, 1]");
    return InputState(a, std::sqrt(1.0 - a * a));
  }

  static InputState vacuum() { return InputState(1.0, 0.0); }
};

// rho = [[1/2 + sz, sx - i sy], [sx + i sy, 1/2 - sz]] in the {|1>, |0>}
// basis; eigenvalues 1/2 +- |b|.
inline Eigen::Matrix2cd reduced_density(const BlochVector& b) {
  if (bloch_norm_sq(b) > 0.25 + kBlochNormSlack)
    throw std::invalid_argument("reduced_density: Bloch vector longer than 1/2");
  Eigen::Matrix2cd rho;
  rho(0, 0) = std::complex<double>(0.5 + b.sz, 0.0);
  rho(0, 1) = std::complex<double>(b.sx, -b.sy);
  rho(1, 0) = std::complex<double>(b.sx, b.sy);
  rho(1, 1) = std::complex<double>(0.5 - b.sz, 0.0);
  return rho;
}

// F = sqrt(<phi(0)| rho_r(t) |phi(0)>)
//   = sqrt(1/2 + (beta^2 - alpha^2) sz + 2 alpha beta sx).
inline double fidelity(const InputState& input, const BlochVector& b) {
  const double radicand = 0.5 +
                          (input.beta * input.beta - input.alpha * input.alpha) * b.sz +
                          2.0 * input.alpha * input.beta * b.sx;
  if (radicand < -kClampTolerance)
    throw std::runtime_error("fidelity: radicand below tolerance, " +
                             std::to_string(radicand));
  return std::sqrt(std::max(radicand, 0.0));
}

// One-tangle tau = 4 det rho = 1 - 4 |b|^2; entanglement of the site with
// the rest of the chain when the global state is pure.
inline double one_tangle(const BlochVector& b) {
  const double tau = 1.0 - 4.0 * bloch_norm_sq(b);
  if (tau < -kClampTolerance || tau > 1.0 + kClampTolerance)
    throw std::runtime_error("one_tangle: value outside [0, 1], " +
                             std::to_string(tau));
  return std::clamp(tau, 0.0, 1.0);
}

namespace detail {

inline double binary_entropy(double x) {
  double s = 0.0;
  if (x > 0.0) s -= x * std::log2(x);
  if (x < 1.0) s -= (1.0 - x) * std::log2(1.0 - x);
  return s;
}

}  // namespace detail

// Von Neumann entropy of the one-site state, S = h((1 + sqrt(1 - tau)) / 2).
inline double entanglement_entropy(double tangle) {
  if (!(tangle >= 0.0 && tangle <= 1.0))
    throw std::domain_error("entanglement_entropy: tangle must lie in [0, 1]");
  return detail::binary_entropy(0.5 * (1.0 + std::sqrt(1.0 - tangle)));
}

// Closed form for gamma = 0 and alpha = beta = 1/sqrt(2):
//   F = sqrt(1/2 + (1/2N) sum_k cos[k(r-1) - lambda_k t]).
inline double isotropic_fidelity(const ChainSpec& spec, double t, int r) {
  if (spec.anisotropy != 0.0)
    throw std::invalid_argument("isotropic_fidelity: requires gamma = 0");
  if (r < 1 || r > spec.n_sites)
    throw std::invalid_argument("isotropic_fidelity: site out of range");
  const auto grid = momentum_grid(spec.n_sites);
  double sum = 0.0;
  for (double k : grid.modes)
    sum += std::cos(k * (r - 1) - dispersion(spec, k) * t);
  const double radicand = 0.5 + 0.5 * sum / spec.n_sites;
  return std::sqrt(std::max(radicand, 0.0));
}

}  // namespace xychain
