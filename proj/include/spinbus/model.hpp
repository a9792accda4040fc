#pragma once

// Heisenberg chain (or ring) with weakly attached external qubits, assembled as a
// real symmetric sparse operator inside one total-Sz sector.
//
// Units: hbar = 1, s = sigma/2, every energy in units of the chain exchange J0.
// Chain sites occupy global indices 0..N-1 and qubit q sits at N+q. Sites in
// SystemSpec::attachments are 1-based, matching the usual chain labelling.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "spinbus/basis.hpp"
#include "spinbus/errors.hpp"

namespace spinbus {

enum class Boundary { open, ring };

inline const char* to_string(Boundary b) { return b == Boundary::open ? "open" : "ring"; }

struct Attachment {
  std::string label;
  int site = 1;  // 1-based chain site
  double j_bare = 0.01;

  friend bool operator==(const Attachment&, const Attachment&) = default;
};

struct SystemSpec {
  int n_chain = 0;
  Boundary boundary = Boundary::open;
  std::vector<double> j_chain;  // per-bond couplings; empty means uniform J0 = 1
  std::vector<Attachment> attachments;

  static SystemSpec chain(int n, Boundary b = Boundary::open) {
    SystemSpec s;
    s.n_chain = n;
    s.boundary = b;
    return s;
  }

  SystemSpec& attach(std::string label, int site, double j_bare) {
    attachments.push_back({std::move(label), site, j_bare});
    return *this;
  }

  int n_bonds() const noexcept {
    if (n_chain <= 1) return 0;
    return boundary == Boundary::ring ? n_chain : n_chain - 1;
  }
  int n_qubits() const noexcept { return static_cast<int>(attachments.size()); }
  int n_sites() const noexcept { return n_chain + n_qubits(); }
  double bond(int k) const { return j_chain.empty() ? 1.0 : j_chain.at(static_cast<std::size_t>(k)); }

  SystemSpec chain_only() const {
    SystemSpec s = *this;
    s.attachments.clear();
    return s;
  }

  void validate() const {
    if (n_chain < 1) throw InvalidArgument("system: n_chain must be >= 1");
    if (!j_chain.empty() && static_cast<int>(j_chain.size()) != n_bonds())
      throw InvalidArgument("system: j_chain has " + std::to_string(j_chain.size()) + " entries, expected " +
                            std::to_string(n_bonds()));
    std::set<std::string> labels;
    for (const auto& a : attachments) {
      if (a.site < 1 || a.site > n_chain)
        throw InvalidArgument("system: attachment " + a.label + " at site " + std::to_string(a.site) +
                              " outside [1, " + std::to_string(n_chain) + "]");
      if (!(a.j_bare >= 0.0)) throw InvalidArgument("system: attachment " + a.label + " has negative j_bare");
      if (!labels.insert(a.label).second) throw InvalidArgument("system: duplicate qubit label " + a.label);
    }
    if (n_sites() > kMaxSites)
      throw CapacityError("system: " + std::to_string(n_sites()) + " sites exceeds cap " + std::to_string(kMaxSites));
  }

  friend bool operator==(const SystemSpec&, const SystemSpec&) = default;
};

// Heisenberg exchange j * s_a . s_b between global sites a and b (0-based).
struct Bond {
  int a = 0;
  int b = 0;
  double j = 1.0;
};

inline std::vector<Bond> chain_bonds(const SystemSpec& spec) {
  std::vector<Bond> bonds;
  for (int k = 0; k < spec.n_bonds(); ++k) bonds.push_back({k, (k + 1) % spec.n_chain, spec.bond(k)});
  return bonds;
}

inline std::vector<Bond> coupling_bonds(const SystemSpec& spec) {
  std::vector<Bond> bonds;
  for (int q = 0; q < spec.n_qubits(); ++q) {
    const auto& a = spec.attachments[static_cast<std::size_t>(q)];
    bonds.push_back({a.site - 1, spec.n_chain + q, a.j_bare});
  }
  return bonds;
}

// Real symmetric operator in CSR form on one sector. Rows are sorted by column,
// without duplicates.
class SparseOperator {
 public:
  SparseOperator(std::shared_ptr<const SectorBasis> sector, std::vector<std::size_t> row_ptr,
                 std::vector<std::uint32_t> cols, std::vector<double> vals)
      : sector_(std::move(sector)), row_ptr_(std::move(row_ptr)), cols_(std::move(cols)), vals_(std::move(vals)) {}

  std::size_t dim() const noexcept { return row_ptr_.size() - 1; }
  std::size_t nonzeros() const noexcept { return vals_.size(); }
  const SectorBasis& sector() const noexcept { return *sector_; }
  const std::shared_ptr<const SectorBasis>& sector_ptr() const noexcept { return sector_; }

  std::span<const std::uint32_t> row_cols(std::size_t r) const {
    return {cols_.data() + row_ptr_[r], row_ptr_[r + 1] - row_ptr_[r]};
  }
  std::span<const double> row_vals(std::size_t r) const {
    return {vals_.data() + row_ptr_[r], row_ptr_[r + 1] - row_ptr_[r]};
  }

  // y = H x. Rows are independent, so any thread count gives identical bits.
  void apply(std::span<const double> x, std::span<double> y, int threads = 1) const {
    if (x.size() != dim() || y.size() != dim())
      throw InvalidArgument("matvec: vector length " + std::to_string(x.size()) + " vs dim " + std::to_string(dim()));
    auto rows = [&](std::size_t lo, std::size_t hi) {
      for (std::size_t r = lo; r < hi; ++r) {
        double acc = 0.0;
        for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) acc += vals_[k] * x[cols_[k]];
        y[r] = acc;
      }
    };
    const std::size_t n = dim();
    if (threads <= 1 || n < 4096) {
      rows(0, n);
      return;
    }
    std::vector<std::jthread> pool;
    const std::size_t chunk = (n + static_cast<std::size_t>(threads) - 1) / static_cast<std::size_t>(threads);
    for (std::size_t lo = 0; lo < n; lo += chunk) pool.emplace_back(rows, lo, std::min(n, lo + chunk));
  }

  std::vector<double> matvec(std::span<const double> x, int threads = 1) const {
    std::vector<double> y(dim());
    apply(x, y, threads);
    return y;
  }

  Eigen::MatrixXd to_dense() const {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dim()), static_cast<Eigen::Index>(dim()));
    for (std::size_t r = 0; r < dim(); ++r)
      for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
        m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(cols_[k])) = vals_[k];
    return m;
  }

 private:
  std::shared_ptr<const SectorBasis> sector_;
  std::vector<std::size_t> row_ptr_;
  std::vector<std::uint32_t> cols_;
  std::vector<double> vals_;
};

// Sum of j * s_a . s_b over the bonds plus `constant` times the identity.
// s_a . s_b = s^z_a s^z_b + (s^+_a s^-_b + s^-_a s^+_b)/2: the diagonal part is
// +-j/4 and antiparallel pairs flip with amplitude j/2.
inline SparseOperator assemble(std::shared_ptr<const SectorBasis> sector, std::span<const Bond> bonds,
                               double constant = 0.0) {
  const SectorBasis& basis = *sector;
  for (const auto& b : bonds)
    if (b.a < 0 || b.b < 0 || b.a >= basis.n_sites() || b.b >= basis.n_sites() || b.a == b.b)
      throw InvalidArgument("assemble: bond (" + std::to_string(b.a) + "," + std::to_string(b.b) + ") invalid");

  std::vector<std::size_t> row_ptr{0};
  std::vector<std::uint32_t> cols;
  std::vector<double> vals;
  row_ptr.reserve(basis.size() + 1);
  std::vector<std::pair<std::uint32_t, double>> row;
  for (std::size_t r = 0; r < basis.size(); ++r) {
    const std::uint32_t w = basis.words()[r];
    double diag = constant;
    row.clear();
    for (const auto& b : bonds) {
      const bool da = (w >> b.a) & 1u;
      const bool db = (w >> b.b) & 1u;
      if (da == db) {
        diag += 0.25 * b.j;
      } else {
        diag -= 0.25 * b.j;
        const std::uint32_t flipped = w ^ (1u << b.a) ^ (1u << b.b);
        row.emplace_back(static_cast<std::uint32_t>(*basis.find(flipped)), 0.5 * b.j);
      }
    }
    row.emplace_back(static_cast<std::uint32_t>(r), diag);
    std::sort(row.begin(), row.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (!cols.empty() && cols.size() > row_ptr.back() && cols.back() == row[k].first) {
        vals.back() += row[k].second;
      } else {
        cols.push_back(row[k].first);
        vals.push_back(row[k].second);
      }
    }
    row_ptr.push_back(cols.size());
  }
  return SparseOperator(std::move(sector), std::move(row_ptr), std::move(cols), std::move(vals));
}

inline SparseOperator build_chain(const SystemSpec& spec, int n_down) {
  const SystemSpec chain = spec.chain_only();
  chain.validate();
  auto sector = std::make_shared<const SectorBasis>(chain.n_chain, n_down);
  const auto bonds = chain_bonds(chain);
  return assemble(std::move(sector), bonds);
}

inline SparseOperator build_full(const SystemSpec& spec, int n_down) {
  spec.validate();
  auto sector = std::make_shared<const SectorBasis>(spec.n_sites(), n_down);
  auto bonds = chain_bonds(spec);
  const auto qc = coupling_bonds(spec);
  bonds.insert(bonds.end(), qc.begin(), qc.end());
  return assemble(std::move(sector), bonds);
}

// Chain-only operator when the spec has no qubits, the coupled system otherwise.
inline SparseOperator build_system(const SystemSpec& spec, int n_down) {
  return spec.attachments.empty() ? build_chain(spec, n_down) : build_full(spec, n_down);
}

// S^2 = 3M/4 + 2 sum_{a<b} s_a . s_b over all M sites of the sector.
inline SparseOperator build_total_spin_squared(std::shared_ptr<const SectorBasis> sector) {
  const int m = sector->n_sites();
  std::vector<Bond> bonds;
  for (int a = 0; a < m; ++a)
    for (int b = a + 1; b < m; ++b) bonds.push_back({a, b, 2.0});
  return assemble(std::move(sector), bonds, 0.75 * m);
}

}  // namespace spinbus
