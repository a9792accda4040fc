#pragma once

// Eigensolvers and low-lying spectra.
//
// Dense diagonalization (Eigen) covers sectors up to 4096 states and doubles as
// the oracle for the Lanczos path. Lanczos finds the k lowest pairs one at a time,
// each run confined to the orthogonal complement of the pairs already found and
// fully reorthogonalized, so exact degeneracies inside a sector are recovered.
//
// low_spectrum() merges sector solutions: levels are sorted by energy, and
// levels within degeneracy_tol of each other are ordered by n_down (largest S_z
// first). Sectors with larger |S_z| only repeat multiplets already present in
// the more balanced sectors, which lets large systems stop the sector scan early.

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <memory>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "spinbus/basis.hpp"
#include "spinbus/errors.hpp"
#include "spinbus/model.hpp"
#include "spinbus/state.hpp"

namespace spinbus {

struct SolverOptions {
  double lanczos_tol = 1e-9;       // residual |Hv - Ev| accepted by Lanczos
  double degeneracy_tol = 1e-7;    // levels closer than this count as degenerate
  std::size_t dense_limit = 400;   // sectors up to this dimension are solved densely
  int levels_per_sector = 3;       // initial k per sector, doubled on demand
  int max_krylov = 200;
  int max_restarts = 60;
  int exhaustive_sites = 16;       // scan every sector when M <= this
  std::uint64_t seed = 0x5eedULL;
  int threads = 1;
};

inline constexpr std::size_t kDenseCapacity = 4096;
inline constexpr int kMaxLanczosPairs = 16;

struct Eigenpairs {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // column k pairs with values[k]
  Eigen::VectorXd residuals;
};

template <class Op>
concept SymmetricOperator = requires(const Op& op, std::span<const double> x, std::span<double> y) {
  { op.dim() } -> std::convertible_to<std::size_t>;
  op.apply(x, y);
};

// Adapts a dense symmetric matrix to the operator interface.
class DenseOperator {
 public:
  explicit DenseOperator(Eigen::MatrixXd m) : m_(std::move(m)) {}
  std::size_t dim() const noexcept { return static_cast<std::size_t>(m_.rows()); }
  void apply(std::span<const double> x, std::span<double> y) const {
    Eigen::Map<const Eigen::VectorXd> xv(x.data(), m_.rows());
    Eigen::Map<Eigen::VectorXd> yv(y.data(), m_.rows());
    yv.noalias() = m_ * xv;
  }
  const Eigen::MatrixXd& matrix() const noexcept { return m_; }

 private:
  Eigen::MatrixXd m_;
};

// First coefficient with magnitude above 1e-8 is made positive.
inline void gauge_fix(Eigen::Ref<Eigen::VectorXd> v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v[i]) > 1e-8) {
      if (v[i] < 0) v = -v;
      return;
    }
  }
}

namespace detail {

template <SymmetricOperator Op>
double residual_norm(const Op& op, const Eigen::VectorXd& v, double value) {
  Eigen::VectorXd hv(v.size());
  op.apply(std::span<const double>(v.data(), static_cast<std::size_t>(v.size())),
           std::span<double>(hv.data(), static_cast<std::size_t>(hv.size())));
  return (hv - value * v).norm();
}

template <SymmetricOperator Op>
void apply(const Op& op, const Eigen::VectorXd& x, Eigen::VectorXd& y, int threads) {
  if constexpr (requires { op.apply(std::span<const double>{}, std::span<double>{}, 1); })
    op.apply(std::span<const double>(x.data(), static_cast<std::size_t>(x.size())),
             std::span<double>(y.data(), static_cast<std::size_t>(y.size())), threads);
  else
    op.apply(std::span<const double>(x.data(), static_cast<std::size_t>(x.size())),
             std::span<double>(y.data(), static_cast<std::size_t>(y.size())));
}

// Two passes of classical Gram-Schmidt against each set.
inline void orthogonalize(Eigen::VectorXd& w, const std::vector<Eigen::VectorXd>& a,
                          const std::vector<Eigen::VectorXd>& b) {
  for (int pass = 0; pass < 2; ++pass) {
    for (const auto& q : a) w -= q.dot(w) * q;
    for (const auto& q : b) w -= q.dot(w) * q;
  }
}

struct RitzPair {
  double value = 0.0;
  Eigen::VectorXd vector;
  double residual = std::numeric_limits<double>::infinity();
};

// One Lanczos cycle for the lowest eigenpair of H restricted to the complement of `locked`.
template <SymmetricOperator Op>
RitzPair lanczos_cycle(const Op& op, Eigen::VectorXd start, const std::vector<Eigen::VectorXd>& locked,
                       const SolverOptions& opt) {
  const auto n = static_cast<Eigen::Index>(op.dim());
  const auto room = static_cast<int>(n) - static_cast<int>(locked.size());
  const int mmax = std::max(1, std::min(opt.max_krylov, room));

  std::vector<Eigen::VectorXd> basis;
  std::vector<double> alpha;
  std::vector<double> beta;
  orthogonalize(start, locked, {});
  start.normalize();
  basis.push_back(start);

  Eigen::VectorXd w(n);
  RitzPair out;
  for (int m = 0; m < mmax; ++m) {
    apply(op, basis[static_cast<std::size_t>(m)], w, opt.threads);
    const double a = basis[static_cast<std::size_t>(m)].dot(w);
    alpha.push_back(a);
    w -= a * basis[static_cast<std::size_t>(m)];
    if (m > 0) w -= beta[static_cast<std::size_t>(m - 1)] * basis[static_cast<std::size_t>(m - 1)];
    orthogonalize(w, locked, basis);
    const double b = w.norm();

    const auto size = static_cast<Eigen::Index>(alpha.size());
    Eigen::VectorXd diag = Eigen::Map<const Eigen::VectorXd>(alpha.data(), size);
    Eigen::VectorXd sub = size > 1 ? Eigen::VectorXd(Eigen::Map<const Eigen::VectorXd>(beta.data(), size - 1))
                                   : Eigen::VectorXd(0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
    tri.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    const double theta = tri.eigenvalues()[0];
    const Eigen::VectorXd y = tri.eigenvectors().col(0);
    const double scale = std::max(1.0, std::abs(theta));
    const double estimate = b * std::abs(y[size - 1]);
    const bool exhausted = b <= 1e-13 * scale || m + 1 == mmax;

    if (estimate <= 0.5 * opt.lanczos_tol || exhausted) {
      Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
      for (Eigen::Index k = 0; k < size; ++k) v += y[k] * basis[static_cast<std::size_t>(k)];
      orthogonalize(v, locked, {});
      v.normalize();
      out.value = v.dot([&] {
        Eigen::VectorXd hv(n);
        apply(op, v, hv, opt.threads);
        return hv;
      }());
      out.residual = residual_norm(op, v, out.value);
      out.vector = std::move(v);
      return out;
    }
    basis.push_back(w / b);
    beta.push_back(b);
  }
  return out;
}

}  // namespace detail

inline Eigenpairs dense_spectrum(const Eigen::MatrixXd& m) {
  if (static_cast<std::size_t>(m.rows()) > kDenseCapacity)
    throw CapacityError("dense_spectrum: dimension " + std::to_string(m.rows()) + " exceeds " +
                        std::to_string(kDenseCapacity));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  if (es.info() != Eigen::Success) throw ConvergenceError("dense_spectrum: eigensolver failed", 0.0);
  Eigenpairs out{es.eigenvalues(), es.eigenvectors(), Eigen::VectorXd(m.rows())};
  for (Eigen::Index k = 0; k < out.vectors.cols(); ++k) gauge_fix(out.vectors.col(k));
  out.residuals = ((m * out.vectors) - out.vectors * out.values.asDiagonal()).colwise().norm().transpose();
  return out;
}

inline Eigenpairs dense_spectrum(const SparseOperator& op) {
  if (op.dim() > kDenseCapacity)
    throw CapacityError("dense_spectrum: dimension " + std::to_string(op.dim()) + " exceeds " +
                        std::to_string(kDenseCapacity));
  return dense_spectrum(op.to_dense());
}

inline Eigen::VectorXd dense_eigenvalues(const SparseOperator& op) {
  if (op.dim() > kDenseCapacity) throw CapacityError("dense_eigenvalues: dimension exceeds capacity");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(op.to_dense(), Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

template <SymmetricOperator Op>
Eigenpairs lowest_eigenpairs(const Op& op, int k, const SolverOptions& opt = {}) {
  const auto n = static_cast<Eigen::Index>(op.dim());
  if (k < 1 || k > kMaxLanczosPairs) throw InvalidArgument("lowest_eigenpairs: k must be in [1, 16]");
  if (n < k) throw InvalidArgument("lowest_eigenpairs: k exceeds dimension");

  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  std::vector<Eigen::VectorXd> locked;
  std::vector<double> values;
  std::vector<double> residuals;
  for (int t = 0; t < k; ++t) {
    Eigen::VectorXd start(n);
    for (Eigen::Index i = 0; i < n; ++i) start[i] = uni(rng);
    detail::RitzPair best;
    for (int restart = 0; restart <= opt.max_restarts; ++restart) {
      auto ritz = detail::lanczos_cycle(op, start, locked, opt);
      if (ritz.residual < best.residual) best = ritz;
      if (ritz.residual <= opt.lanczos_tol) break;
      start = ritz.vector;
    }
    if (!(best.residual <= opt.lanczos_tol))
      throw ConvergenceError("lowest_eigenpairs: eigenpair " + std::to_string(t) + " did not converge", best.residual);
    locked.push_back(best.vector);
    values.push_back(best.value);
    residuals.push_back(best.residual);
  }

  std::vector<int> order(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) order[static_cast<std::size_t>(i)] = i;
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return values[static_cast<std::size_t>(a)] < values[static_cast<std::size_t>(b)];
  });
  Eigenpairs out{Eigen::VectorXd(k), Eigen::MatrixXd(n, k), Eigen::VectorXd(k)};
  for (int i = 0; i < k; ++i) {
    const auto src = static_cast<std::size_t>(order[static_cast<std::size_t>(i)]);
    out.values[i] = values[src];
    out.vectors.col(i) = locked[src];
    out.residuals[i] = residuals[src];
    gauge_fix(out.vectors.col(i));
  }
  return out;
}

// k lowest pairs of one sector operator, dense or Lanczos by dimension.
inline Eigenpairs solve_sector(const SparseOperator& op, int k, const SolverOptions& opt) {
  const auto n = static_cast<int>(op.dim());
  k = std::min(k, n);
  if (op.dim() <= opt.dense_limit || (k > kMaxLanczosPairs && op.dim() <= kDenseCapacity)) {
    Eigenpairs all = dense_spectrum(op);
    return {all.values.head(k), all.vectors.leftCols(k), all.residuals.head(k)};
  }
  return lowest_eigenpairs(op, std::min(k, kMaxLanczosPairs), opt);
}

struct Level {
  double energy = 0.0;
  std::shared_ptr<const SectorBasis> sector;
  Eigen::VectorXd vector;
  double residual = 0.0;

  int n_down() const { return sector->n_down(); }
  double sz() const { return sector->sz(); }
  RealState state() const {
    return RealState(sector, std::vector<double>(vector.data(), vector.data() + vector.size()));
  }
};

struct LowSpectrum {
  SystemSpec spec;
  std::vector<Level> levels;
  // Every eigenvalue strictly below this bound (less degeneracy_tol) is listed.
  double complete_below = std::numeric_limits<double>::infinity();
  std::vector<int> sectors_scanned;
  double degeneracy_tol = 1e-7;

  int n_sites() const { return spec.n_sites(); }
};

namespace detail {

inline std::vector<std::vector<int>> sector_shells(int m) {
  std::vector<std::vector<int>> shells;
  for (int twice_sz = m % 2; twice_sz <= m; twice_sz += 2) {
    const int lo = (m - twice_sz) / 2;
    const int hi = m - lo;
    shells.push_back(lo == hi ? std::vector<int>{lo} : std::vector<int>{lo, hi});
  }
  return shells;
}

inline void sort_levels(std::vector<Level>& levels, double tol) {
  std::stable_sort(levels.begin(), levels.end(), [](const Level& a, const Level& b) { return a.energy < b.energy; });
  std::size_t begin = 0;
  while (begin < levels.size()) {
    std::size_t end = begin + 1;
    while (end < levels.size() && levels[end].energy - levels[end - 1].energy <= tol) ++end;
    std::stable_sort(levels.begin() + static_cast<std::ptrdiff_t>(begin), levels.begin() + static_cast<std::ptrdiff_t>(end),
                     [](const Level& a, const Level& b) { return a.n_down() < b.n_down(); });
    begin = end;
  }
}

inline bool spectrum_sufficient(const LowSpectrum& s, std::size_t min_levels) {
  if (s.levels.empty()) return false;
  const double tol = s.degeneracy_tol;
  const double e0 = s.levels.front().energy;
  // a resolved level above the ground manifold, and the manifold itself complete
  bool gap_found = false;
  for (const auto& l : s.levels)
    if (l.energy > e0 + tol) {
      gap_found = l.energy <= s.complete_below;
      break;
    }
  if (!gap_found && std::isfinite(s.complete_below)) return false;
  if (e0 + tol >= s.complete_below - tol) return false;
  if (s.levels.size() < min_levels) return !std::isfinite(s.complete_below);
  if (min_levels > 0 && s.levels[min_levels - 1].energy > s.complete_below) return false;
  for (std::size_t i = 0; i + 1 < min_levels; ++i)
    if (s.levels[i].energy >= s.complete_below - tol) return false;
  return true;
}

}  // namespace detail

// Lowest levels of the system (chain alone, or chain plus qubits) over all
// relevant Sz sectors. At least `min_levels` levels, counted with multiplicity,
// are guaranteed complete.
inline LowSpectrum low_spectrum(const SystemSpec& spec, const SolverOptions& opt = {}, std::size_t min_levels = 2) {
  spec.validate();
  const int m = spec.n_sites();
  const bool exhaustive = m <= opt.exhaustive_sites;
  int k = std::max(1, opt.levels_per_sector);
  for (int attempt = 0; attempt < 8; ++attempt, k *= 2) {
    LowSpectrum out;
    out.spec = spec;
    out.degeneracy_tol = opt.degeneracy_tol;
    for (const auto& shell : detail::sector_shells(m)) {
      double shell_min = std::numeric_limits<double>::infinity();
      for (int nd : shell) {
        const SparseOperator op = build_system(spec, nd);
        const int dim = static_cast<int>(op.dim());
        int kk = std::min(k, dim);
        Eigenpairs ep = solve_sector(op, kk, opt);
        // a sector whose computed levels are all degenerate may hide more copies
        while (kk < dim && ep.values[kk - 1] - ep.values[0] <= opt.degeneracy_tol) {
          kk = std::min(dim, 2 * kk);
          ep = solve_sector(op, kk, opt);
          kk = static_cast<int>(ep.values.size());
          if (kk >= kMaxLanczosPairs && dim > static_cast<int>(kDenseCapacity)) break;
        }
        for (Eigen::Index i = 0; i < ep.values.size(); ++i)
          out.levels.push_back({ep.values[i], op.sector_ptr(), ep.vectors.col(i), ep.residuals[i]});
        if (ep.values.size() < dim) out.complete_below = std::min(out.complete_below, ep.values[ep.values.size() - 1]);
        shell_min = std::min(shell_min, ep.values[0]);
        out.sectors_scanned.push_back(nd);
      }
      if (!exhaustive && shell_min >= out.complete_below) break;
    }
    detail::sort_levels(out.levels, opt.degeneracy_tol);
    if (detail::spectrum_sufficient(out, min_levels)) {
      // drop levels that are not guaranteed complete
      std::erase_if(out.levels, [&](const Level& l) { return l.energy > out.complete_below; });
      return out;
    }
  }
  throw ConvergenceError("low_spectrum: could not resolve the requested levels", 0.0);
}

struct GroundManifold {
  LowSpectrum spectrum;
  int degeneracy = 1;
  double gap = 0.0;  // first level above the degenerate ground manifold, minus E0

  const std::vector<Level>& levels() const { return spectrum.levels; }
  double energy() const { return spectrum.levels.front().energy; }
  std::vector<double> energies() const {
    std::vector<double> e;
    for (const auto& l : spectrum.levels) e.push_back(l.energy);
    return e;
  }
  // S_z of each member of the ground manifold, largest first.
  std::vector<double> ground_sz() const {
    std::vector<double> s;
    for (int i = 0; i < degeneracy; ++i) s.push_back(spectrum.levels[static_cast<std::size_t>(i)].sz());
    return s;
  }
  RealState ground(std::size_t member = 0) const { return spectrum.levels.at(member).state(); }

  // Ground-manifold member in a given sector.
  const Level* member_in_sector(int n_down) const {
    for (int i = 0; i < degeneracy; ++i)
      if (spectrum.levels[static_cast<std::size_t>(i)].n_down() == n_down) return &spectrum.levels[static_cast<std::size_t>(i)];
    return nullptr;
  }
};

inline GroundManifold ground_manifold(const SystemSpec& spec, const SolverOptions& opt = {}) {
  GroundManifold g{low_spectrum(spec, opt, 2)};
  const auto& lv = g.spectrum.levels;
  const double e0 = lv.front().energy;
  g.degeneracy = 0;
  while (g.degeneracy < static_cast<int>(lv.size()) && lv[static_cast<std::size_t>(g.degeneracy)].energy - e0 <= opt.degeneracy_tol)
    ++g.degeneracy;
  g.gap = g.degeneracy < static_cast<int>(lv.size()) ? lv[static_cast<std::size_t>(g.degeneracy)].energy - e0
                                                      : std::numeric_limits<double>::infinity();
  return g;
}

// Splitting of the four-level qubit manifold (singlet + triplet) that sits on
// top of an even chain's nondegenerate ground state.
struct Splitting {
  double delta = 0.0;       // E3 - E0 within the lowest four levels
  double separation = 0.0;  // E4 - E0, distance to the next manifold (~ chain gap)
  bool perturbative = true; // separation >= 10 * delta
  std::array<double, 5> energies{};
  int ground_degeneracy = 1;
  Level ground_sz0;  // ground-manifold representative with S_z = 0
};

inline Splitting splitting_in_ground_sector(const SystemSpec& spec, const SolverOptions& opt = {}) {
  spec.validate();
  if (spec.n_qubits() != 2) throw InvalidArgument("splitting: exactly two attached qubits required");
  if (spec.n_chain % 2 != 0) throw ParityError("splitting: chain length must be even");
  const LowSpectrum s = low_spectrum(spec, opt, 5);
  const auto& lv = s.levels;
  Splitting out;
  for (std::size_t i = 0; i < 5; ++i) out.energies[i] = lv[i].energy;
  out.delta = lv[3].energy - lv[0].energy;
  out.separation = lv[4].energy - lv[0].energy;
  out.perturbative = out.separation >= 10.0 * out.delta;
  out.ground_degeneracy = 0;
  while (out.ground_degeneracy < 4 && lv[static_cast<std::size_t>(out.ground_degeneracy)].energy - lv[0].energy <= opt.degeneracy_tol)
    ++out.ground_degeneracy;
  const int balanced = spec.n_sites() / 2;
  for (int i = 0; i < out.ground_degeneracy; ++i)
    if (lv[static_cast<std::size_t>(i)].n_down() == balanced) out.ground_sz0 = lv[static_cast<std::size_t>(i)];
  if (!out.ground_sz0.sector) out.ground_sz0 = lv[0];
  return out;
}

}  // namespace spinbus
