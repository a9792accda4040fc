#pragma once

// Pure states of M spin-1/2 sites stored as a direct sum of Sz-sector blocks.
// Eigenvectors live in a single sector; Pauli x/y and superpositions of
// doublet partners spread over several.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <string_view>
#include <type_traits>
#include <vector>

#include "spinbus/basis.hpp"
#include "spinbus/errors.hpp"

namespace spinbus {

template <class T>
struct is_complex : std::false_type {};
template <class T>
struct is_complex<std::complex<T>> : std::true_type {};

template <class T>
inline T conj_if(const T& x) {
  if constexpr (is_complex<T>::value)
    return std::conj(x);
  else
    return x;
}

enum class Axis { x, y, z };

inline const char* to_string(Axis a) { return a == Axis::x ? "x" : (a == Axis::y ? "y" : "z"); }

template <class Scalar>
class SpinState {
 public:
  using scalar_type = Scalar;

  struct Block {
    std::shared_ptr<const SectorBasis> basis;
    std::vector<Scalar> amps;
  };

  explicit SpinState(int n_sites) : n_sites_(n_sites) {
    if (n_sites < 1 || n_sites > kMaxSites) throw InvalidArgument("state: n_sites out of range");
  }

  SpinState(std::shared_ptr<const SectorBasis> basis, std::vector<Scalar> amps) : n_sites_(basis->n_sites()) {
    if (amps.size() != basis->size()) throw InvalidArgument("state: amplitude count does not match sector");
    blocks_.push_back({std::move(basis), std::move(amps)});
  }

  int n_sites() const noexcept { return n_sites_; }
  const std::vector<Block>& blocks() const noexcept { return blocks_; }

  const Block* block(int n_down) const noexcept {
    for (const auto& b : blocks_)
      if (b.basis->n_down() == n_down) return &b;
    return nullptr;
  }

  // Adds coeff * amps into the block of `basis`, creating it when absent.
  void accumulate(const std::shared_ptr<const SectorBasis>& basis, const std::vector<Scalar>& amps,
                  Scalar coeff = Scalar{1}) {
    if (basis->n_sites() != n_sites_) throw InvalidArgument("state: sector site count mismatch");
    Block& b = block_for(basis);
    for (std::size_t k = 0; k < amps.size(); ++k) b.amps[k] += coeff * amps[k];
  }

  void accumulate(const SpinState& other, Scalar coeff = Scalar{1}) {
    for (const auto& b : other.blocks_) accumulate(b.basis, b.amps, coeff);
  }

  Block& block_for(const std::shared_ptr<const SectorBasis>& basis) {
    for (auto& b : blocks_)
      if (b.basis->n_down() == basis->n_down()) return b;
    blocks_.push_back({basis, std::vector<Scalar>(basis->size(), Scalar{0})});
    std::sort(blocks_.begin(), blocks_.end(),
              [](const Block& x, const Block& y) { return x.basis->n_down() < y.basis->n_down(); });
    for (auto& b : blocks_)
      if (b.basis->n_down() == basis->n_down()) return b;
    return blocks_.back();  // unreachable
  }

  Scalar amplitude(std::uint32_t bits) const noexcept {
    const Block* b = block(std::popcount(bits));
    if (!b) return Scalar{0};
    const auto k = b->basis->find(bits);
    return k ? b->amps[*k] : Scalar{0};
  }

  double norm() const noexcept {
    double s = 0.0;
    for (const auto& b : blocks_)
      for (const auto& a : b.amps) s += std::norm(a);
    return std::sqrt(s);
  }

  void scale(Scalar c) {
    for (auto& b : blocks_)
      for (auto& a : b.amps) a *= c;
  }

  SpinState normalized() const {
    SpinState out = *this;
    const double n = norm();
    if (n == 0.0) throw InvalidArgument("state: cannot normalize the zero vector");
    out.scale(Scalar{1.0 / n});
    return out;
  }

  template <class Other>
  SpinState<std::common_type_t<Scalar, Other>> as() const {
    using R = std::common_type_t<Scalar, Other>;
    SpinState<R> out(n_sites_);
    for (const auto& b : blocks_) out.accumulate(b.basis, std::vector<R>(b.amps.begin(), b.amps.end()));
    return out;
  }

 private:
  int n_sites_;
  std::vector<Block> blocks_;
};

using RealState = SpinState<double>;
using ComplexState = SpinState<std::complex<double>>;

// <a|b>, antilinear in a.
template <class A, class B>
auto inner(const SpinState<A>& a, const SpinState<B>& b) {
  using R = std::common_type_t<A, B>;
  R acc{0};
  for (const auto& ba : a.blocks()) {
    const auto* bb = b.block(ba.basis->n_down());
    if (!bb) continue;
    for (std::size_t k = 0; k < ba.amps.size(); ++k) acc += conj_if(R(ba.amps[k])) * R(bb->amps[k]);
  }
  return acc;
}

template <class Scalar>
void require_normalized(const SpinState<Scalar>& s, const char* who) {
  if (std::abs(s.norm() - 1.0) > 1e-8) throw InvalidArgument(std::string(who) + ": state is not normalized");
}

// sigma^mu on one site (0-based global index). sigma^x and sigma^y move weight
// between neighbouring sectors; sigma^y|up> = i|down>, sigma^y|down> = -i|up>.
template <class Scalar>
ComplexState apply_pauli(const SpinState<Scalar>& state, int site, Axis axis) {
  if (site < 0 || site >= state.n_sites()) throw InvalidArgument("apply_pauli: site out of range");
  using C = std::complex<double>;
  ComplexState out(state.n_sites());
  const std::uint32_t mask = 1u << site;
  for (const auto& b : state.blocks()) {
    const int nd = b.basis->n_down();
    if (axis == Axis::z) {
      std::vector<C> amps(b.amps.size());
      for (std::size_t k = 0; k < amps.size(); ++k) amps[k] = (b.basis->words()[k] & mask) ? -C(b.amps[k]) : C(b.amps[k]);
      out.accumulate(b.basis, amps);
      continue;
    }
    // up -> down lands in nd+1, down -> up lands in nd-1
    std::shared_ptr<const SectorBasis> up_sector = nd + 1 <= state.n_sites() ? std::make_shared<const SectorBasis>(state.n_sites(), nd + 1) : nullptr;
    std::shared_ptr<const SectorBasis> dn_sector = nd - 1 >= 0 ? std::make_shared<const SectorBasis>(state.n_sites(), nd - 1) : nullptr;
    std::vector<C> to_down(up_sector ? up_sector->size() : 0);
    std::vector<C> to_up(dn_sector ? dn_sector->size() : 0);
    for (std::size_t k = 0; k < b.amps.size(); ++k) {
      const std::uint32_t w = b.basis->words()[k];
      const std::uint32_t f = w ^ mask;
      if (w & mask) {
        const C phase = axis == Axis::x ? C(1) : C(0, -1);
        to_up[*dn_sector->find(f)] += phase * C(b.amps[k]);
      } else {
        const C phase = axis == Axis::x ? C(1) : C(0, 1);
        to_down[*up_sector->find(f)] += phase * C(b.amps[k]);
      }
    }
    if (up_sector) out.accumulate(up_sector, to_down);
    if (dn_sector) out.accumulate(dn_sector, to_up);
  }
  return out;
}

// Total lowering operator S^- = sum_i s^-_i applied to a real state.
inline RealState apply_total_lowering(const RealState& state) {
  RealState out(state.n_sites());
  for (const auto& b : state.blocks()) {
    const int nd = b.basis->n_down();
    if (nd + 1 > state.n_sites()) continue;
    auto target = std::make_shared<const SectorBasis>(state.n_sites(), nd + 1);
    std::vector<double> amps(target->size(), 0.0);
    for (std::size_t k = 0; k < b.amps.size(); ++k) {
      const std::uint32_t w = b.basis->words()[k];
      for (int s = 0; s < state.n_sites(); ++s)
        if (!((w >> s) & 1u)) amps[*target->find(w | (1u << s))] += b.amps[k];
    }
    out.accumulate(target, amps);
  }
  return out;
}

// Product basis state from a string of '0' (up) / '1' (down), leftmost = site 0.
inline RealState ket(std::string_view pattern) {
  const int m = static_cast<int>(pattern.size());
  std::uint32_t bits = 0;
  for (int s = 0; s < m; ++s) {
    if (pattern[static_cast<std::size_t>(s)] == '1')
      bits |= 1u << s;
    else if (pattern[static_cast<std::size_t>(s)] != '0')
      throw InvalidArgument("ket: pattern must contain only '0' and '1'");
  }
  auto basis = std::make_shared<const SectorBasis>(m, std::popcount(bits));
  std::vector<double> amps(basis->size(), 0.0);
  amps[*basis->find(bits)] = 1.0;
  return RealState(std::move(basis), std::move(amps));
}

}  // namespace spinbus
