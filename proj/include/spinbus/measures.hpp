#pragma once

// Observables and two-site entanglement of pure states (or equal-weight
// mixtures). Site arguments are 0-based global indices: chain sites first,
// then qubits.
//
// Two-site density matrices use the pair basis {uu, ud, du, dd} with the lower
// global index as the first label.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "spinbus/errors.hpp"
#include "spinbus/model.hpp"
#include "spinbus/state.hpp"

namespace spinbus {

using Matrix4c = Eigen::Matrix4cd;

inline constexpr double kPsdFloor = -1e-10;

struct TwoSiteDensity {
  Matrix4c rho = Matrix4c::Zero();
  int site_a = 0;
  int site_b = 1;

  // Trace, Hermiticity and positivity within the round-off floors.
  void validate() const {
    if (std::abs(rho.trace() - 1.0) > 1e-10) throw InvalidArgument("two-site density: trace differs from 1");
    if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-10) throw InvalidArgument("two-site density: not Hermitian");
    Eigen::SelfAdjointEigenSolver<Matrix4c> es(rho, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < kPsdFloor)
      throw InvalidArgument("two-site density: negative eigenvalue " + std::to_string(es.eigenvalues().minCoeff()));
  }
};

inline Eigen::Matrix2cd pauli(Axis axis) {
  using C = std::complex<double>;
  Eigen::Matrix2cd s;
  switch (axis) {
    case Axis::x: s << 0, 1, 1, 0; break;
    case Axis::y: s << 0, C(0, -1), C(0, 1), 0; break;
    case Axis::z: s << 1, 0, 0, -1; break;
  }
  return s;
}

inline Matrix4c kron(const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b) {
  Matrix4c k;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) k.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return k;
}

inline Matrix4c singlet_projector() {
  Matrix4c p = Matrix4c::Zero();
  p(1, 1) = p(2, 2) = 0.5;
  p(1, 2) = p(2, 1) = -0.5;
  return p;
}

inline double trace_distance(const Matrix4c& a, const Matrix4c& b) {
  Eigen::SelfAdjointEigenSolver<Matrix4c> es(a - b, Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

template <class Scalar>
double local_moment(const SpinState<Scalar>& state, int site) {
  if (site < 0 || site >= state.n_sites()) throw InvalidArgument("local_moment: site out of range");
  require_normalized(state, "local_moment");
  double m = 0.0;
  for (const auto& b : state.blocks())
    for (std::size_t k = 0; k < b.amps.size(); ++k)
      m += ((b.basis->words()[k] >> site) & 1u) ? -std::norm(b.amps[k]) : std::norm(b.amps[k]);
  return m;
}

namespace detail {

template <class Scalar>
void add_pair_density(const SpinState<Scalar>& state, int lo, int hi, double weight, Matrix4c& rho) {
  const std::uint32_t mlo = 1u << lo;
  const std::uint32_t mhi = 1u << hi;
  for (const auto& b : state.blocks()) {
    for (std::size_t k = 0; k < b.amps.size(); ++k) {
      const std::complex<double> psi = b.amps[k];
      if (psi == 0.0) continue;
      const std::uint32_t w = b.basis->words()[k];
      const int p = 2 * static_cast<int>((w & mlo) != 0) + static_cast<int>((w & mhi) != 0);
      const std::uint32_t rest = w & ~(mlo | mhi);
      for (int q = 0; q < 4; ++q) {
        const std::uint32_t wq = rest | ((q & 2) ? mlo : 0u) | ((q & 1) ? mhi : 0u);
        const std::complex<double> phi = q == p ? psi : std::complex<double>(state.amplitude(wq));
        rho(p, q) += weight * psi * std::conj(phi);
      }
    }
  }
}

inline void check_pair(int n_sites, int a, int b, const char* who) {
  if (a < 0 || b < 0 || a >= n_sites || b >= n_sites) throw InvalidArgument(std::string(who) + ": site out of range");
  if (a == b) throw InvalidArgument(std::string(who) + ": sites must differ");
}

}  // namespace detail

template <class Scalar>
TwoSiteDensity reduced_density(const SpinState<Scalar>& state, int site_a, int site_b) {
  detail::check_pair(state.n_sites(), site_a, site_b, "reduced_density");
  require_normalized(state, "reduced_density");
  TwoSiteDensity out;
  out.site_a = std::min(site_a, site_b);
  out.site_b = std::max(site_a, site_b);
  detail::add_pair_density(state, out.site_a, out.site_b, 1.0, out.rho);
  return out;
}

// Equal-weight mixture of orthonormal states, e.g. a degenerate ground manifold.
template <class Scalar>
TwoSiteDensity reduced_density(std::span<const SpinState<Scalar>> mixture, int site_a, int site_b) {
  if (mixture.empty()) throw InvalidArgument("reduced_density: empty mixture");
  detail::check_pair(mixture.front().n_sites(), site_a, site_b, "reduced_density");
  TwoSiteDensity out;
  out.site_a = std::min(site_a, site_b);
  out.site_b = std::max(site_a, site_b);
  for (const auto& s : mixture) {
    require_normalized(s, "reduced_density");
    detail::add_pair_density(s, out.site_a, out.site_b, 1.0 / static_cast<double>(mixture.size()), out.rho);
  }
  return out;
}

template <class Scalar>
double spin_correlation(const SpinState<Scalar>& state, int i, int j, Axis axis) {
  detail::check_pair(state.n_sites(), i, j, "spin_correlation");
  const TwoSiteDensity d = reduced_density(state, i, j);
  const Eigen::Matrix2cd s = pauli(axis);
  return (d.rho * kron(s, s)).trace().real();
}

// Eigenvalues of rho below this are treated as round-off zeros.
inline constexpr double kRankFloor = 1e-14;

// Wootters concurrence. With rho = V V^dagger over its nonzero eigenvectors,
// the lambda_i are the singular values of tau = V^T (sy x sy) V. Working with
// singular values avoids square roots of round-off eigenvalues, which would
// cost about sqrt(eps) of accuracy on rank-deficient (e.g. pure-state) inputs.
inline double concurrence(const TwoSiteDensity& d) {
  Eigen::SelfAdjointEigenSolver<Matrix4c> es(d.rho);
  if (es.eigenvalues().minCoeff() < kPsdFloor)
    throw InvalidArgument("concurrence: density matrix is not positive semidefinite");
  Matrix4c v = Matrix4c::Zero();
  for (int k = 0; k < 4; ++k)
    if (es.eigenvalues()[k] > kRankFloor) v.col(k) = std::sqrt(es.eigenvalues()[k]) * es.eigenvectors().col(k);
  const Eigen::Matrix2cd sy = pauli(Axis::y);
  const Matrix4c tau = v.transpose() * kron(sy, sy) * v;
  const Eigen::Vector4d lam = Eigen::JacobiSVD<Matrix4c>(tau).singularValues();  // descending
  return std::clamp(lam[0] - lam[1] - lam[2] - lam[3], 0.0, 1.0);
}

struct ConcurrenceMap {
  std::vector<int> sites;  // global indices, in map order
  Eigen::MatrixXd values;  // symmetric, zero diagonal

  double at(std::size_t a, std::size_t b) const {
    return values(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
  }
};

namespace detail {

template <class DensityFn>
ConcurrenceMap build_map(std::vector<int> sites, DensityFn density) {
  if (sites.size() < 2) throw InvalidArgument("concurrence_map: at least two sites required");
  const auto n = static_cast<Eigen::Index>(sites.size());
  ConcurrenceMap m{std::move(sites), Eigen::MatrixXd::Zero(n, n)};
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index b = a + 1; b < n; ++b) {
      const double c = concurrence(density(m.sites[static_cast<std::size_t>(a)], m.sites[static_cast<std::size_t>(b)]));
      m.values(a, b) = m.values(b, a) = c;
    }
  return m;
}

}  // namespace detail

template <class Scalar>
ConcurrenceMap concurrence_map(const SpinState<Scalar>& state, std::vector<int> sites) {
  return detail::build_map(std::move(sites), [&](int a, int b) { return reduced_density(state, a, b); });
}

template <class Scalar>
ConcurrenceMap concurrence_map(std::span<const SpinState<Scalar>> mixture, std::vector<int> sites) {
  return detail::build_map(std::move(sites), [&](int a, int b) { return reduced_density(mixture, a, b); });
}

inline std::vector<int> all_sites(int n_sites) {
  std::vector<int> s(static_cast<std::size_t>(n_sites));
  for (int i = 0; i < n_sites; ++i) s[static_cast<std::size_t>(i)] = i;
  return s;
}

// <S^2> of a real state; each sector block is evaluated separately.
inline double total_spin_squared(const RealState& state) {
  double acc = 0.0;
  for (const auto& b : state.blocks()) {
    const SparseOperator s2 = build_total_spin_squared(b.basis);
    const auto y = s2.matvec(b.amps);
    for (std::size_t k = 0; k < y.size(); ++k) acc += b.amps[k] * y[k];
  }
  return acc;
}

}  // namespace spinbus
