#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include "xychain/dynamics.hpp"
#include "xychain/observables.hpp"

namespace xychain {

inline constexpr int kBruteforceMaxOps = 12;
inline constexpr double kImagResidueTolerance = 1e-10;

// Labels for the operators entering a string expectation value. A and B live
// at time t; C1 stands for the symmetrized time-0 insertion, i.e. the pair
// contraction <0| X c_1^+ + c_1 X |0> for the operator X to its left.
enum class MajoranaKind { A, B, C1 };

struct MajoranaOp {
  MajoranaKind kind;
  int site;  // 1-based
};

struct MajoranaString {
  std::vector<MajoranaOp> ops;  // left-to-right operator order, C1 last
  Complex prefactor;
};

// S_r^x(t) = (1/2) A_1 B_1 ... A_{r-1} B_{r-1} A_r, all at time t.
inline MajoranaString spin_x_string(int r) {
  MajoranaString s;
  s.prefactor = Complex(0.5, 0.0);
  for (int site = 1; site < r; ++site) {
    s.ops.push_back({MajoranaKind::A, site});
    s.ops.push_back({MajoranaKind::B, site});
  }
  s.ops.push_back({MajoranaKind::A, r});
  s.ops.push_back({MajoranaKind::C1, 1});
  return s;
}

// S_r^y substitutes A_r -> B_r and 1/2 -> -i/2.
inline MajoranaString spin_y_string(int r) {
  MajoranaString s = spin_x_string(r);
  s.prefactor = Complex(0.0, -0.5);
  s.ops[s.ops.size() - 2] = {MajoranaKind::B, r};
  return s;
}

// Pair contraction of `left` (earlier in the string) with `right`.
inline Complex contraction(const MajoranaOp& left, const MajoranaOp& right,
                           const ContractionTable& table) {
  if (left.kind == MajoranaKind::C1)
    throw std::invalid_argument("contraction: C1 must be the last operator");
  const int j = left.site - 1;
  if (right.kind == MajoranaKind::C1)
    return left.kind == MajoranaKind::A ? table.a_c1(j) : table.b_c1(j);
  const int m = right.site - 1;
  if (left.kind == MajoranaKind::A)
    return right.kind == MajoranaKind::A ? table.aa(j, m) : table.ab(j, m);
  // <0| B_j A_m |0> = -<0| A_m B_j |0> from {A, B} = 0
  return right.kind == MajoranaKind::A ? -table.ab(m, j) : table.bb(j, m);
}

// Antisymmetric matrix M with M(i, j) = contraction(op_i, op_j) for i < j.
inline Eigen::MatrixXcd contraction_matrix(const MajoranaString& s,
                                           const ContractionTable& table) {
  const auto n = static_cast<Eigen::Index>(s.ops.size());
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const Complex v = contraction(s.ops[static_cast<std::size_t>(i)],
                                    s.ops[static_cast<std::size_t>(j)], table);
      m(i, j) = v;
      m(j, i) = -v;
    }
  }
  return m;
}

// Pfaffian by skew-symmetric Gaussian elimination with partial pivoting
// (Parlett-Reid). The input must be antisymmetric within 1e-10; it is
// re-symmetrized before elimination. Returns 0 for odd or structurally
// singular matrices.
inline Complex pfaffian(Eigen::MatrixXcd m) {
  const Eigen::Index n = m.rows();
  if (m.cols() != n)
    throw std::invalid_argument("pfaffian: matrix must be square");
  if (n == 0) return Complex(1.0, 0.0);
  if (n % 2 != 0) return Complex(0.0, 0.0);

  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m + m.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale)
    throw std::invalid_argument("pfaffian: matrix not antisymmetric");
  m = 0.5 * (m - m.transpose()).eval();

  Complex result(1.0, 0.0);
  for (Eigen::Index k = 0; k + 1 < n; k += 2) {
    Eigen::Index pivot = k + 1;
    double best = std::abs(m(k + 1, k));
    for (Eigen::Index i = k + 2; i < n; ++i) {
      if (std::abs(m(i, k)) > best) {
        best = std::abs(m(i, k));
        pivot = i;
      }
    }
    if (pivot != k + 1) {
      m.row(k + 1).swap(m.row(pivot));
      m.col(k + 1).swap(m.col(pivot));
      result = -result;
    }
    const Complex p = m(k, k + 1);
    if (p == Complex(0.0, 0.0)) return Complex(0.0, 0.0);
    result *= p;
    const Eigen::Index rest = n - k - 2;
    if (rest > 0) {
      const Eigen::VectorXcd tau =
          m.row(k).segment(k + 2, rest).transpose() / p;
      const Eigen::VectorXcd col = m.col(k + 1).segment(k + 2, rest);
      m.block(k + 2, k + 2, rest, rest).noalias() += tau * col.transpose();
      m.block(k + 2, k + 2, rest, rest).noalias() -= col * tau.transpose();
    }
  }
  return result;
}

namespace detail {

inline Complex pairing_sum_rec(const Eigen::MatrixXcd& m,
                               const std::vector<Eigen::Index>& idx) {
  if (idx.empty()) return Complex(1.0, 0.0);
  const Eigen::Index first = idx.front();
  Complex total(0.0, 0.0);
  double sign = 1.0;
  for (std::size_t pos = 1; pos < idx.size(); ++pos) {
    const Eigen::Index partner = idx[pos];
    std::vector<Eigen::Index> rest;
    rest.reserve(idx.size() - 2);
    for (std::size_t q = 1; q < idx.size(); ++q)
      if (q != pos) rest.push_back(idx[q]);
    total += sign * m(first, partner) * pairing_sum_rec(m, rest);
    sign = -sign;
  }
  return total;
}

inline double take_real(Complex z, const char* what) {
  if (std::abs(z.imag()) >= kImagResidueTolerance)
    throw std::runtime_error(std::string(what) +
                             ": imaginary residue " + std::to_string(z.imag()));
  return z.real();
}

}  // namespace detail

// Sum over all (2n-1)!! perfect pairings; factorially slow and kept only as
// the independent oracle for the Pfaffian route.
inline Complex pairing_sum(const Eigen::MatrixXcd& m) {
  const Eigen::Index n = m.rows();
  if (m.cols() != n)
    throw std::invalid_argument("pairing_sum: matrix must be square");
  if (n > kBruteforceMaxOps)
    throw std::invalid_argument("pairing_sum: more than 12 operators");
  if (n % 2 != 0) return Complex(0.0, 0.0);
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) idx[static_cast<std::size_t>(i)] = i;
  return detail::pairing_sum_rec(m, idx);
}

inline Complex wick_pfaffian(const MajoranaString& s,
                             const ContractionTable& table) {
  return s.prefactor * pfaffian(contraction_matrix(s, table));
}

inline Complex wick_bruteforce(const MajoranaString& s,
                               const ContractionTable& table) {
  if (s.ops.size() > kBruteforceMaxOps)
    throw std::invalid_argument("wick_bruteforce: string longer than 12 operators");
  return s.prefactor * pairing_sum(contraction_matrix(s, table));
}

namespace detail {

inline void check_site(int r, int n, const char* what) {
  if (r < 1 || r > n)
    throw std::invalid_argument(std::string(what) + ": site out of range");
}

}  // namespace detail

// <S_r^x(t)> on (alpha + beta c_1^+)|0>. Only the alpha*beta cross term
// survives; the pure-vacuum strings have odd length and vanish.
inline double spin_x(const ContractionTable& table, int r,
                     const InputState& input) {
  detail::check_site(r, table.n_sites, "spin_x");
  const double cross = input.alpha * input.beta;
  if (cross == 0.0) return 0.0;
  return detail::take_real(cross * wick_pfaffian(spin_x_string(r), table),
                           "spin_x");
}

inline double spin_y(const ContractionTable& table, int r,
                     const InputState& input) {
  detail::check_site(r, table.n_sites, "spin_y");
  const double cross = input.alpha * input.beta;
  if (cross == 0.0) return 0.0;
  return detail::take_real(cross * wick_pfaffian(spin_y_string(r), table),
                           "spin_y");
}

// <S_r^z(t)> = -1/2 [ <0|A_r B_r|0> + 2 beta^2 (|b~_1r|^2 - |a~_1r|^2) ].
// The single-excitation correction carries weight 2 beta^2: expanding
// <1|A_r B_r|1> by Wick gives <0|A_r B_r|0> + 2(|b~_1r|^2 - |a~_1r|^2).
inline double spin_z(const ContractionTable& table, const PropagatorPair& prop,
                     int r, const InputState& input) {
  detail::check_site(r, table.n_sites, "spin_z");
  const double ab_rr = detail::take_real(table.ab(r - 1, r - 1), "spin_z");
  const double b1r = std::norm(prop.b_tilde(0, r - 1));
  const double a1r = std::norm(prop.a_tilde(0, r - 1));
  return -0.5 * (ab_rr + 2.0 * input.beta * input.beta * (b1r - a1r));
}

inline double spin_x(const ChainSpec& spec, double t, int r,
                     const InputState& input) {
  return spin_x(contraction_table(spec, t), r, input);
}

inline double spin_y(const ChainSpec& spec, double t, int r,
                     const InputState& input) {
  return spin_y(contraction_table(spec, t), r, input);
}

inline double spin_z(const ChainSpec& spec, double t, int r,
                     const InputState& input) {
  return spin_z(contraction_table(spec, t), propagator(spec, t), r, input);
}

inline BlochVector bloch_vector(const ContractionTable& table,
                                const PropagatorPair& prop, int r,
                                const InputState& input) {
  return {spin_x(table, r, input), spin_y(table, r, input),
          spin_z(table, prop, r, input)};
}

inline BlochVector bloch_vector(const ChainSpec& spec, double t, int r,
                                const InputState& input) {
  return bloch_vector(contraction_table(spec, t), propagator(spec, t), r,
                      input);
}

}  // namespace xychain
