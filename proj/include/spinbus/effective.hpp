#pragma once

// Effective qubit couplings mediated by a Heisenberg chain.
//
//  * odd chain, first order: the ground doublet acts as a central spin and a
//    qubit on site i couples to it with J* = J_bare <0_c|sigma_iz|0_c>;
//  * even chain, second order: the qubits couple directly (RKKY), either
//    summed over every chain eigenstate or approximated with the gap and the
//    ground-state correlation;
//  * nonperturbative: the singlet-triplet splitting of the full system.
//
// Chain sites in this header are 1-based, as in SystemSpec::attachments.

#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "spinbus/errors.hpp"
#include "spinbus/measures.hpp"
#include "spinbus/model.hpp"
#include "spinbus/spectra.hpp"
#include "spinbus/state.hpp"

namespace spinbus {

enum class CouplingMethod { central_spin, rkky_exact, rkky_approx, gap };
enum class GroundCharacter { none, singlet, triplet, ambiguous };

inline const char* to_string(CouplingMethod m) {
  switch (m) {
    case CouplingMethod::central_spin: return "central_spin";
    case CouplingMethod::rkky_exact: return "rkky_exact";
    case CouplingMethod::rkky_approx: return "rkky_approx";
    case CouplingMethod::gap: return "gap";
  }
  return "?";
}

inline const char* to_string(GroundCharacter c) {
  switch (c) {
    case GroundCharacter::none: return "none";
    case GroundCharacter::singlet: return "singlet";
    case GroundCharacter::triplet: return "triplet";
    case GroundCharacter::ambiguous: return "ambiguous";
  }
  return "?";
}

struct EffectiveCoupling {
  CouplingMethod method = CouplingMethod::central_spin;
  double value = 0.0;  // J* in units of J0
  int n_chain = 0;
  Boundary boundary = Boundary::open;
  int site_i = 0;
  int site_j = 0;  // 0 for central-spin couplings
  double j_a = 0.0;
  double j_b = 0.0;
  double gap = std::numeric_limits<double>::quiet_NaN();
  std::size_t states_summed = 0;
  GroundCharacter character = GroundCharacter::none;
  double spin_squared = std::numeric_limits<double>::quiet_NaN();
  bool flagged = false;
  std::string flag;
};

// The three central-spin matrix elements of one site:
// <0_c|sigma_z|0_c>, -<1_c|sigma_z|1_c> and <1_c|sigma_x|0_c>.
struct CentralSpinElements {
  int site = 0;
  double moment = 0.0;
  double flipped_moment = 0.0;
  double transverse = 0.0;

  double spread() const {
    return std::max({std::abs(moment - flipped_moment), std::abs(moment - transverse),
                     std::abs(flipped_moment - transverse)});
  }
};

// Ground doublet of an odd chain. |0_c> is the gauge-fixed S_z = +1/2 ground
// state; |1_c> = S^-|0_c>, normalized, so the central-spin operators are the
// standard spin-1/2 matrices on {|0_c>, |1_c>}.
class CentralSpin {
 public:
  explicit CentralSpin(const SystemSpec& spec, const SolverOptions& opt = {}) : spec_(spec.chain_only()) {
    spec_.validate();
    if (spec_.n_chain % 2 == 0) throw ParityError("central spin: chain length must be odd");
    manifold_ = ground_manifold(spec_, opt);
    const int up_sector = (spec_.n_chain - 1) / 2;
    const Level* up = manifold_.member_in_sector(up_sector);
    const Level* down = manifold_.member_in_sector(up_sector + 1);
    if (!up || !down) throw InvalidArgument("central spin: ground manifold lacks an S_z = +-1/2 doublet");
    up_ = up->state();
    down_ = apply_total_lowering(up_).normalized();
    partner_overlap_ = std::abs(inner(down->state(), down_));
  }

  const SystemSpec& spec() const noexcept { return spec_; }
  const GroundManifold& manifold() const noexcept { return manifold_; }
  const RealState& up() const noexcept { return up_; }
  const RealState& down() const noexcept { return down_; }
  double gap() const noexcept { return manifold_.gap; }
  // |<solved S_z=-1/2 ground state | S^-|0_c>>|, 1 when the doublet is clean.
  double partner_overlap() const noexcept { return partner_overlap_; }

  CentralSpinElements elements(int site) const {
    check_site(site);
    const int s = site - 1;
    CentralSpinElements e;
    e.site = site;
    e.moment = local_moment(up_, s);
    e.flipped_moment = -local_moment(down_, s);
    e.transverse = inner(down_.as<std::complex<double>>(), apply_pauli(up_, s, Axis::x)).real();
    return e;
  }

  EffectiveCoupling coupling(int site, double j_bare) const {
    const CentralSpinElements e = elements(site);
    EffectiveCoupling c;
    c.method = CouplingMethod::central_spin;
    c.value = j_bare * e.moment;
    c.n_chain = spec_.n_chain;
    c.boundary = spec_.boundary;
    c.site_i = site;
    c.j_a = j_bare;
    c.gap = gap();
    if (e.spread() > 1e-9) {
      c.flagged = true;
      c.flag = "central-spin matrix elements disagree by " + std::to_string(e.spread());
    }
    return c;
  }

 private:
  void check_site(int site) const {
    if (site < 1 || site > spec_.n_chain) throw InvalidArgument("central spin: site out of range");
  }

  SystemSpec spec_;
  GroundManifold manifold_;
  RealState up_{1};
  RealState down_{1};
  double partner_overlap_ = 0.0;
};

inline EffectiveCoupling central_spin_coupling(const SystemSpec& spec, int site, double j_bare,
                                               const SolverOptions& opt = {}) {
  return CentralSpin(spec, opt).coupling(site, j_bare);
}

struct SiteSign {
  int site = 0;
  double moment = 0.0;
  char label = 'U';  // 'A' antiferromagnetic, 'F' ferromagnetic, 'U' undetermined
};

inline std::vector<SiteSign> sign_map(const CentralSpin& cs) {
  std::vector<SiteSign> out;
  for (int i = 1; i <= cs.spec().n_chain; ++i) {
    const double m = local_moment(cs.up(), i - 1);
    out.push_back({i, m, std::abs(m) < 1e-10 ? 'U' : (m > 0 ? 'A' : 'F')});
  }
  return out;
}

inline std::vector<SiteSign> sign_map(const SystemSpec& spec, const SolverOptions& opt = {}) {
  return sign_map(CentralSpin(spec, opt));
}

// Nondegenerate singlet ground state of an even chain and the machinery for
// both RKKY routes. Full sector spectra are built lazily on first use.
class EvenChain {
 public:
  explicit EvenChain(const SystemSpec& spec, const SolverOptions& opt = {}) : spec_(spec.chain_only()), opt_(opt) {
    spec_.validate();
    if (spec_.n_chain % 2 != 0) throw ParityError("RKKY: chain length must be even");
    manifold_ = ground_manifold(spec_, opt_);
    if (manifold_.degeneracy != 1) throw InvalidArgument("RKKY: chain ground state is degenerate");
    ground_ = manifold_.ground();
  }

  const SystemSpec& spec() const noexcept { return spec_; }
  double gap() const noexcept { return manifold_.gap; }
  double energy() const noexcept { return manifold_.energy(); }
  const RealState& ground() const noexcept { return ground_; }

  // <0_c|sigma_i^mu sigma_j^mu|0_c>; sigma^2 = 1 on a single site.
  double correlation(int i, int j, Axis axis) const {
    check_site(i);
    check_site(j);
    if (i == j) return 1.0;
    return spin_correlation(ground_, i - 1, j - 1, axis);
  }

  // 2 jA jB sum_{n != 0} <0|sigma_i^mu|n><n|sigma_j^mu|0> / (E0 - En), over
  // every eigenstate of the sectors that sigma^mu reaches.
  EffectiveCoupling rkky_exact(int i, int j, double j_a, double j_b, Axis axis = Axis::z) const {
    check_site(i);
    check_site(j);
    const int half = spec_.n_chain / 2;
    const Eigenpairs& centre = spectrum(half);
    const double e0 = centre.values[0];
    RealState g(std::make_shared<const SectorBasis>(spec_.n_chain, half),
                std::vector<double>(centre.vectors.col(0).data(), centre.vectors.col(0).data() + centre.vectors.rows()));
    const ComplexState si = apply_pauli(g, i - 1, axis);
    const ComplexState sj = apply_pauli(g, j - 1, axis);

    double sum = 0.0;
    std::size_t summed = 0;
    for (const auto& bi : si.blocks()) {
      const auto* bj = sj.block(bi.basis->n_down());
      if (!bj) continue;
      const Eigenpairs& sp = spectrum(bi.basis->n_down());
      const auto n = static_cast<Eigen::Index>(bi.amps.size());
      Eigen::Map<const Eigen::VectorXcd> vi(bi.amps.data(), n);
      Eigen::Map<const Eigen::VectorXcd> vj(bj->amps.data(), n);
      // <n|sigma|0> for every eigenvector n of the sector
      const Eigen::VectorXcd ai = sp.vectors.transpose().cast<std::complex<double>>() * vi;
      const Eigen::VectorXcd aj = sp.vectors.transpose().cast<std::complex<double>>() * vj;
      for (Eigen::Index k = 0; k < n; ++k) {
        if (std::abs(sp.values[k] - e0) <= opt_.degeneracy_tol) continue;
        sum += (std::conj(ai[k]) * aj[k]).real() / (e0 - sp.values[k]);
        ++summed;
      }
    }
    EffectiveCoupling c = base(CouplingMethod::rkky_exact, i, j, j_a, j_b);
    c.value = 2.0 * j_a * j_b * sum;
    c.gap = gap();
    c.states_summed = summed;
    return c;
  }

  // -2 jA jB <0_c|sigma_i^mu sigma_j^mu|0_c> / Delta.
  EffectiveCoupling rkky_approx(int i, int j, double j_a, double j_b, Axis axis = Axis::z) const {
    EffectiveCoupling c = base(CouplingMethod::rkky_approx, i, j, j_a, j_b);
    c.value = -2.0 * j_a * j_b * correlation(i, j, axis) / gap();
    c.gap = gap();
    c.states_summed = 1;
    return c;
  }

 private:
  void check_site(int site) const {
    if (site < 1 || site > spec_.n_chain) throw InvalidArgument("RKKY: site out of range");
  }

  EffectiveCoupling base(CouplingMethod m, int i, int j, double j_a, double j_b) const {
    EffectiveCoupling c;
    c.method = m;
    c.n_chain = spec_.n_chain;
    c.boundary = spec_.boundary;
    c.site_i = i;
    c.site_j = j;
    c.j_a = j_a;
    c.j_b = j_b;
    return c;
  }

  const Eigenpairs& spectrum(int n_down) const {
    auto it = spectra_.find(n_down);
    if (it == spectra_.end()) it = spectra_.emplace(n_down, dense_spectrum(build_chain(spec_, n_down))).first;
    return it->second;
  }

  SystemSpec spec_;
  SolverOptions opt_;
  GroundManifold manifold_;
  RealState ground_{1};
  mutable std::map<int, Eigenpairs> spectra_;
};

inline EffectiveCoupling rkky_exact(const SystemSpec& spec, int i, int j, double j_a, double j_b,
                                    Axis axis = Axis::z, const SolverOptions& opt = {}) {
  return EvenChain(spec, opt).rkky_exact(i, j, j_a, j_b, axis);
}

inline EffectiveCoupling rkky_approx(const SystemSpec& spec, int i, int j, double j_a, double j_b,
                                     Axis axis = Axis::z, const SolverOptions& opt = {}) {
  return EvenChain(spec, opt).rkky_approx(i, j, j_a, j_b, axis);
}

inline GroundCharacter classify_spin(double s2) {
  if (s2 < 0.5) return GroundCharacter::singlet;
  if (s2 > 1.5) return GroundCharacter::triplet;
  return GroundCharacter::ambiguous;
}

// |J*| = delta of the full system; + for a singlet ground state, - for a triplet.
inline EffectiveCoupling coupling_from_gap(const SystemSpec& spec, const SolverOptions& opt = {}) {
  const Splitting sp = splitting_in_ground_sector(spec, opt);
  EffectiveCoupling c;
  c.method = CouplingMethod::gap;
  c.n_chain = spec.n_chain;
  c.boundary = spec.boundary;
  c.site_i = spec.attachments[0].site;
  c.site_j = spec.attachments[1].site;
  c.j_a = spec.attachments[0].j_bare;
  c.j_b = spec.attachments[1].j_bare;
  c.gap = sp.separation;
  c.spin_squared = total_spin_squared(sp.ground_sz0.state());
  c.character = classify_spin(c.spin_squared);
  c.value = c.character == GroundCharacter::triplet ? -sp.delta : sp.delta;
  if (c.character == GroundCharacter::ambiguous) {
    c.flagged = true;
    c.flag = "ground state is neither singlet nor triplet (<S^2> = " + std::to_string(c.spin_squared) + ")";
  }
  if (!sp.perturbative) {
    c.flagged = true;
    c.flag += (c.flag.empty() ? "" : "; ") + std::string("splitting not 10x below the next manifold");
  }
  return c;
}

}  // namespace spinbus
