#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <bit>
#include <complex>
#include <cstdint>
#include <initializer_list>
#include <iterator>
#include <optional>
#include <stdexcept>

#include "xychain/model.hpp"
#include "xychain/observables.hpp"

namespace xychain {

// Dense Fock-space oracle. Basis states are occupation bitstrings: bit i-1
// of the index is the occupation of site i, |0...0> = all spins down.
// Desk-scale only.
inline constexpr int kMaxDenseSites = 14;

namespace detail {

inline void check_dense_size(int n_sites, const char* what) {
  if (n_sites < 1 || n_sites > kMaxDenseSites)
    throw std::invalid_argument(std::string(what) + ": dense oracle is limited to " +
                                std::to_string(kMaxDenseSites) + " sites");
}

inline double jw_sign(std::uint64_t basis, int bit) {
  const std::uint64_t below = basis & ((std::uint64_t{1} << bit) - 1);
  return (std::popcount(below) & 1) ? -1.0 : 1.0;
}

struct LadderOp {
  int site;     // 1-based
  bool create;
};

// Applies a product of ladder operators (rightmost acts first) to a basis
// state; returns the resulting state and fermionic sign, or nothing if the
// product annihilates it.
inline std::optional<std::pair<std::uint64_t, double>> apply_ladder(
    std::uint64_t basis, std::initializer_list<LadderOp> ops) {
  double sign = 1.0;
  for (auto it = std::rbegin(ops); it != std::rend(ops); ++it) {
    const int bit = it->site - 1;
    const bool occupied = (basis >> bit) & 1;
    if (occupied == it->create) return std::nullopt;
    sign *= jw_sign(basis, bit);
    basis ^= std::uint64_t{1} << bit;
  }
  return std::pair{basis, sign};
}

}  // namespace detail

// c_site as a dense matrix, Jordan-Wigner string over the lower sites.
inline Eigen::MatrixXcd annihilation_operator(int n_sites, int site) {
  detail::check_dense_size(n_sites, "annihilation_operator");
  if (site < 1 || site > n_sites)
    throw std::invalid_argument("annihilation_operator: site out of range");
  const std::uint64_t dim = std::uint64_t{1} << n_sites;
  Eigen::MatrixXcd op = Eigen::MatrixXcd::Zero(
      static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (std::uint64_t b = 0; b < dim; ++b) {
    if (auto res = detail::apply_ladder(b, {{site, false}}))
      op(static_cast<Eigen::Index>(res->first), static_cast<Eigen::Index>(b)) =
          res->second;
  }
  return op;
}

// The fermionic ring Hamiltonian with c_{N+1} = c_1 taken literally. This is
// the operator the momentum-space solution diagonalizes, and the truth
// source for all cross-validation.
inline Eigen::MatrixXcd build_fermion_hamiltonian(const ChainSpec& spec) {
  detail::check_dense_size(spec.n_sites, "build_fermion_hamiltonian");
  const int n = spec.n_sites;
  const std::uint64_t dim = std::uint64_t{1} << n;
  const double hop = -0.5 * spec.coupling;
  const double pair = -0.5 * spec.coupling * spec.anisotropy;

  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(
      static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (std::uint64_t b = 0; b < dim; ++b) {
    const auto col = static_cast<Eigen::Index>(b);
    double diag = 0.0;
    for (int site = 0; site < n; ++site)
      diag += -spec.field * ((((b >> site) & 1) ? 1.0 : 0.0) - 0.5);
    h(col, col) += diag;

    for (int i = 1; i <= n; ++i) {
      const int ip = i % n + 1;
      using detail::apply_ladder;
      // -(J/2) (c_i^+ c_{i+1} - c_i c_{i+1}^+)
      if (auto r = apply_ladder(b, {{i, true}, {ip, false}}))
        h(static_cast<Eigen::Index>(r->first), col) += hop * r->second;
      if (auto r = apply_ladder(b, {{i, false}, {ip, true}}))
        h(static_cast<Eigen::Index>(r->first), col) -= hop * r->second;
      // -(J gamma / 2) (c_i^+ c_{i+1}^+ - c_i c_{i+1})
      if (auto r = apply_ladder(b, {{i, true}, {ip, true}}))
        h(static_cast<Eigen::Index>(r->first), col) += pair * r->second;
      if (auto r = apply_ladder(b, {{i, false}, {ip, false}}))
        h(static_cast<Eigen::Index>(r->first), col) -= pair * r->second;
    }
  }
  return h;
}

// The periodic spin chain H = -sum_i (Jx Sx Sx + Jy Sy Sy) - h sum_i Sz,
// built directly from spin matrices (no fermionic string). Differs from the
// fermionic ring by a parity-dependent boundary term; kept as a diagnostic.
inline Eigen::MatrixXcd build_spin_hamiltonian(const ChainSpec& spec) {
  detail::check_dense_size(spec.n_sites, "build_spin_hamiltonian");
  const int n = spec.n_sites;
  const std::uint64_t dim = std::uint64_t{1} << n;
  const double jx = spec.coupling * (1.0 + spec.anisotropy);
  const double jy = spec.coupling * (1.0 - spec.anisotropy);

  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(
      static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (std::uint64_t b = 0; b < dim; ++b) {
    const auto col = static_cast<Eigen::Index>(b);
    double diag = 0.0;
    for (int site = 0; site < n; ++site)
      diag += -spec.field * ((((b >> site) & 1) ? 1.0 : 0.0) - 0.5);
    h(col, col) += diag;

    for (int i = 0; i < n; ++i) {
      const int j = (i + 1) % n;
      const bool ni = (b >> i) & 1;
      const bool nj = (b >> j) & 1;
      const std::uint64_t flipped =
          b ^ (std::uint64_t{1} << i) ^ (std::uint64_t{1} << j);
      // Sx Sx flips both spins with weight 1/4; Sy Sy with -1/4 for aligned
      // pairs and +1/4 for antialigned ones.
      const double yy = (ni == nj) ? -1.0 : 1.0;
      h(static_cast<Eigen::Index>(flipped), col) += -0.25 * (jx + jy * yy);
    }
  }
  return h;
}

struct SpectralDecomposition {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXcd eigenvectors;

  Eigen::VectorXcd evolve(const Eigen::VectorXcd& psi0, double t) const {
    Eigen::VectorXcd coeffs = eigenvectors.adjoint() * psi0;
    for (Eigen::Index i = 0; i < coeffs.size(); ++i)
      coeffs(i) *= std::exp(std::complex<double>(0.0, -eigenvalues(i) * t));
    return eigenvectors * coeffs;
  }
};

inline SpectralDecomposition diagonalize(const Eigen::MatrixXcd& h) {
  const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
  if ((h - h.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw std::invalid_argument("diagonalize: matrix not Hermitian");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("diagonalize: eigensolver failed");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

// e^{-iHt} |psi0> by full eigendecomposition; prefer SpectralDecomposition
// when evolving many times from one Hamiltonian.
inline Eigen::VectorXcd evolve(const Eigen::MatrixXcd& h,
                               const Eigen::VectorXcd& psi0, double t) {
  return diagonalize(h).evolve(psi0, t);
}

inline Eigen::VectorXcd vacuum_state(int n_sites) {
  detail::check_dense_size(n_sites, "vacuum_state");
  Eigen::VectorXcd psi =
      Eigen::VectorXcd::Zero(Eigen::Index{1} << n_sites);
  psi(0) = 1.0;
  return psi;
}

// (alpha + beta c_1^+) |0>
inline Eigen::VectorXcd encoded_state(int n_sites, const InputState& input) {
  Eigen::VectorXcd psi = vacuum_state(n_sites);
  psi(0) = input.alpha;
  psi(1) = input.beta;
  return psi;
}

// Single-site spin expectations <S_r^{x,y,z}> of a Fock-space state.
inline BlochVector site_bloch(const Eigen::VectorXcd& psi, int r) {
  const auto dim = static_cast<std::uint64_t>(psi.size());
  if (dim == 0 || (dim & (dim - 1)) != 0)
    throw std::invalid_argument("site_bloch: state dimension must be 2^N");
  const int n = std::countr_zero(dim);
  if (r < 1 || r > n)
    throw std::invalid_argument("site_bloch: site out of range");
  const int bit = r - 1;

  std::complex<double> sx(0.0, 0.0), sy(0.0, 0.0);
  double sz = 0.0;
  for (std::uint64_t b = 0; b < dim; ++b) {
    const auto i = static_cast<Eigen::Index>(b);
    const auto flipped = static_cast<Eigen::Index>(b ^ (std::uint64_t{1} << bit));
    const bool up = (b >> bit) & 1;
    const std::complex<double> overlap = std::conj(psi(flipped)) * psi(i);
    sx += 0.5 * overlap;
    sy += (up ? std::complex<double>(0.0, 0.5)
              : std::complex<double>(0.0, -0.5)) *
          overlap;
    sz += std::norm(psi(i)) * ((up ? 1.0 : 0.0) - 0.5);
  }
  if (std::abs(sx.imag()) > 1e-10 || std::abs(sy.imag()) > 1e-10)
    throw std::runtime_error("site_bloch: imaginary residue on expectation");
  return {sx.real(), sy.real(), sz};
}

struct OraclePoint {
  BlochVector bloch;
  double fidelity = 0.0;
  double tangle = 0.0;
};

// Full brute-force pipeline: build the fermionic ring, evolve the encoded
// state and read off the receiver site.
inline OraclePoint oracle_pipeline(const ChainSpec& spec, double t, int r,
                                   const InputState& input) {
  if (r < 1 || r > spec.n_sites)
    throw std::invalid_argument("oracle_pipeline: site out of range");
  const auto h = build_fermion_hamiltonian(spec);
  const auto psi = diagonalize(h).evolve(encoded_state(spec.n_sites, input), t);
  const BlochVector b = site_bloch(psi, r);
  return {b, fidelity(input, b), one_tangle(b)};
}

}  // namespace xychain
