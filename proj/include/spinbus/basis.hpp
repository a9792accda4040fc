#pragma once

// Computational basis of M spin-1/2 sites restricted to a fixed total-Sz sector.
//
// Bit convention: bit b of a basis word is 1 when site b is spin-down and 0 when
// it is spin-up; site 0 is the least-significant bit. The fully polarized up
// state is the zero word.

#include <algorithm>
#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "spinbus/errors.hpp"

namespace spinbus {

inline constexpr int kMaxSites = 24;

struct BasisState {
  std::uint32_t bits = 0;

  constexpr bool down(int site) const noexcept { return (bits >> site) & 1u; }
  constexpr int popcount() const noexcept { return std::popcount(bits); }

  friend constexpr auto operator<=>(const BasisState&, const BasisState&) = default;
};

inline std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
  return r;
}

class SectorBasis {
 public:
  SectorBasis(int n_sites, int n_down) : n_sites_(n_sites), n_down_(n_down) {
    if (n_sites < 0 || n_sites > kMaxSites)
      throw InvalidArgument("sector: n_sites=" + std::to_string(n_sites) + " outside [0, " +
                            std::to_string(kMaxSites) + "]");
    if (n_down < 0 || n_down > n_sites)
      throw InvalidArgument("sector: n_down=" + std::to_string(n_down) + " outside [0, " +
                            std::to_string(n_sites) + "]");
    states_.reserve(binomial(n_sites, n_down));
    if (n_down == 0) {
      states_.push_back(0);
      return;
    }
    // Gosper's hack walks the fixed-popcount words in increasing order.
    const std::uint64_t end = std::uint64_t{1} << n_sites;
    std::uint64_t w = (std::uint64_t{1} << n_down) - 1;
    while (w < end) {
      states_.push_back(static_cast<std::uint32_t>(w));
      const std::uint64_t c = w & (~w + 1);
      const std::uint64_t r = w + c;
      w = (((r ^ w) >> 2) / c) | r;
    }
  }

  int n_sites() const noexcept { return n_sites_; }
  int n_down() const noexcept { return n_down_; }
  std::size_t size() const noexcept { return states_.size(); }

  // Total S_z of every state in the sector, in units of hbar.
  double sz() const noexcept { return 0.5 * (n_sites_ - 2 * n_down_); }

  BasisState operator[](std::size_t k) const { return BasisState{states_[k]}; }
  std::span<const std::uint32_t> words() const noexcept { return states_; }

  std::optional<std::size_t> find(std::uint32_t bits) const noexcept {
    const auto it = std::lower_bound(states_.begin(), states_.end(), bits);
    if (it == states_.end() || *it != bits) return std::nullopt;
    return static_cast<std::size_t>(it - states_.begin());
  }

  friend bool operator==(const SectorBasis& a, const SectorBasis& b) {
    return a.n_sites_ == b.n_sites_ && a.n_down_ == b.n_down_;
  }

 private:
  int n_sites_;
  int n_down_;
  std::vector<std::uint32_t> states_;
};

inline SectorBasis enumerate_sector(int n_sites, int n_down) { return SectorBasis(n_sites, n_down); }

inline std::size_t rank_of(const SectorBasis& basis, BasisState state) {
  if (state.popcount() != basis.n_down())
    throw InvalidArgument("rank_of: state has " + std::to_string(state.popcount()) +
                          " down spins, sector expects " + std::to_string(basis.n_down()));
  if (basis.n_sites() < 32 && (state.bits >> basis.n_sites()) != 0)
    throw InvalidArgument("rank_of: state uses sites beyond n_sites");
  // popcount matches and no stray bits, so the word is always present
  return *basis.find(state.bits);
}

}  // namespace spinbus
