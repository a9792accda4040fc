#pragma once

// Brute-force reference: operators on the full 2^M space built from Kronecker
// products, full diagonalization, explicit partial traces. No code is shared
// with the engine apart from the state container used to hand states over.
//
// Conventions: local index 0 = up, 1 = down; site 0 is the rightmost Kronecker
// factor, so the full index equals the engine's bit pattern.

#include <algorithm>
#include <cmath>
#include <complex>
#include <tuple>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

#include "spinbus/state.hpp"

namespace oracle {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;
using cd = std::complex<double>;

inline MatrixXcd sx() { return (MatrixXcd(2, 2) << 0, 1, 1, 0).finished(); }
inline MatrixXcd sy() { return (MatrixXcd(2, 2) << 0, cd(0, -1), cd(0, 1), 0).finished(); }
inline MatrixXcd sz() { return (MatrixXcd(2, 2) << 1, 0, 0, -1).finished(); }

// sigma acting on one site of an m-site register.
inline MatrixXcd on_site(const MatrixXcd& op, int site, int m) {
  MatrixXcd out = MatrixXcd::Identity(1, 1);
  for (int s = m - 1; s >= 0; --s) {
    const MatrixXcd f = s == site ? op : MatrixXcd::Identity(2, 2);
    out = Eigen::kroneckerProduct(out, f).eval();
  }
  return out;
}

struct Bond {
  int a, b;
  double j;
};

// H = sum J s_a.s_b with s = sigma/2.
inline MatrixXd hamiltonian(int m, const std::vector<Bond>& bonds) {
  const auto d = Eigen::Index{1} << m;
  MatrixXcd h = MatrixXcd::Zero(d, d);
  for (const auto& bd : bonds)
    for (const auto& p : {sx(), sy(), sz()}) h += 0.25 * bd.j * on_site(p, bd.a, m) * on_site(p, bd.b, m);
  return h.real();
}

inline std::vector<Bond> chain(int n, bool ring, double j = 1.0) {
  std::vector<Bond> b;
  for (int i = 0; i + 1 < n; ++i) b.push_back({i, i + 1, j});
  if (ring && n > 1) b.push_back({n - 1, 0, j});
  return b;
}

// Chain of n sites plus qubits at chain sites (1-based) with couplings j.
inline std::vector<Bond> system(int n, bool ring, const std::vector<std::pair<int, double>>& qubits) {
  auto b = chain(n, ring);
  for (std::size_t q = 0; q < qubits.size(); ++q) b.push_back({n + static_cast<int>(q), qubits[q].first - 1, qubits[q].second});
  return b;
}

inline MatrixXd total_sz(int m) {
  MatrixXcd s = MatrixXcd::Zero(Eigen::Index{1} << m, Eigen::Index{1} << m);
  for (int k = 0; k < m; ++k) s += 0.5 * on_site(sz(), k, m);
  return s.real();
}

inline MatrixXd total_s2(int m) {
  const auto d = Eigen::Index{1} << m;
  MatrixXcd sum[3] = {MatrixXcd::Zero(d, d), MatrixXcd::Zero(d, d), MatrixXcd::Zero(d, d)};
  const MatrixXcd p[3] = {sx(), sy(), sz()};
  for (int k = 0; k < m; ++k)
    for (int a = 0; a < 3; ++a) sum[a] += 0.5 * on_site(p[a], k, m);
  return (sum[0] * sum[0] + sum[1] * sum[1] + sum[2] * sum[2]).real();
}

struct Spectrum {
  VectorXd values;
  MatrixXd vectors;
};

inline Spectrum diagonalize(const MatrixXd& h) {
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(h);
  return {es.eigenvalues(), es.eigenvectors()};
}

inline int degeneracy(const VectorXd& e, double tol = 1e-7) {
  int d = 1;
  while (d < e.size() && e[d] - e[0] < tol) ++d;
  return d;
}

// Lowest eigenvector with a given total S_z, from H + big * (S_z - target)^2.
inline Spectrum restricted(const MatrixXd& h, int m, double sz_target) {
  const MatrixXd s = total_sz(m) - sz_target * MatrixXd::Identity(h.rows(), h.cols());
  return diagonalize(h + 1e3 * s * s);
}

template <class Scalar>
VectorXcd embed(const spinbus::SpinState<Scalar>& st) {
  VectorXcd v = VectorXcd::Zero(Eigen::Index{1} << st.n_sites());
  for (const auto& b : st.blocks())
    for (std::size_t k = 0; k < b.amps.size(); ++k) v[static_cast<Eigen::Index>((*b.basis)[k].bits)] = b.amps[k];
  return v;
}

// Reduced density of sites a < b, basis {uu, ud, du, dd} with a first.
inline Eigen::Matrix4cd partial_trace(const VectorXcd& psi, int a, int b) {
  Eigen::Matrix4cd rho = Eigen::Matrix4cd::Zero();
  const Eigen::Index d = psi.size();
  for (Eigen::Index x = 0; x < d; ++x)
    for (Eigen::Index y = 0; y < d; ++y) {
      const Eigen::Index rest = ~((Eigen::Index{1} << a) | (Eigen::Index{1} << b));
      if ((x & rest) != (y & rest)) continue;
      const int rx = static_cast<int>(2 * ((x >> a) & 1) + ((x >> b) & 1));
      const int ry = static_cast<int>(2 * ((y >> a) & 1) + ((y >> b) & 1));
      rho(rx, ry) += psi[x] * std::conj(psi[y]);
    }
  return rho;
}

// Wootters: square roots of the eigenvalues of rho (sy sy) rho* (sy sy).
inline double concurrence(const Eigen::Matrix4cd& rho) {
  Eigen::Matrix4cd yy = Eigen::kroneckerProduct(sy(), sy());
  const Eigen::Matrix4cd r = rho * yy * rho.conjugate() * yy;
  Eigen::ComplexEigenSolver<Eigen::Matrix4cd> es(r);
  std::vector<double> l;
  for (int k = 0; k < 4; ++k) l.push_back(std::sqrt(std::max(0.0, es.eigenvalues()[k].real())));
  std::sort(l.rbegin(), l.rend());
  return std::max(0.0, l[0] - l[1] - l[2] - l[3]);
}

inline double expectation(const VectorXcd& psi, const MatrixXcd& op) { return psi.dot(op * psi).real(); }

// 2 jA jB sum_{n != 0} <0|s_i|n><n|s_j|0>/(E0 - En) with Pauli matrices, over
// the full chain spectrum; ground state must be nondegenerate.
inline double rkky_sum(int n, bool ring, int i, int j, double ja, double jb, const MatrixXcd& pauli = sz()) {
  const Spectrum s = diagonalize(hamiltonian(n, chain(n, ring)));
  const VectorXcd g = s.vectors.col(0).cast<cd>();
  const VectorXcd ai = s.vectors.transpose().cast<cd>() * (on_site(pauli, i - 1, n) * g);
  const VectorXcd aj = s.vectors.transpose().cast<cd>() * (on_site(pauli, j - 1, n) * g);
  double sum = 0.0;
  for (Eigen::Index k = 1; k < s.values.size(); ++k) sum += (std::conj(ai[k]) * aj[k]).real() / (s.values[0] - s.values[k]);
  return 2.0 * ja * jb * sum;
}

}  // namespace oracle
