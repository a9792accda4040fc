#pragma once

// Datasets behind the experiment outputs: local moments and concurrence maps,
// concurrence along the lambda sweep, ring/open concurrence maps, RKKY
// profiles, parity of the ground manifold and gap scaling.

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "spinbus/effective.hpp"
#include "spinbus/measures.hpp"
#include "spinbus/model.hpp"
#include "spinbus/spectra.hpp"
#include "spinbus/three_spin.hpp"

namespace spinbus {

inline constexpr double kDefaultJq = 0.01;

// "1".."N" for chain sites followed by the qubit labels.
inline std::vector<std::string> site_labels(const SystemSpec& spec) {
  std::vector<std::string> out;
  for (int i = 1; i <= spec.n_chain; ++i) out.push_back(std::to_string(i));
  for (const auto& a : spec.attachments) out.push_back(a.label);
  return out;
}

inline SystemSpec two_qubit_spec(int n, Boundary b, int site_a, int site_b, double jq) {
  return SystemSpec::chain(n, b).attach("A", site_a, jq).attach("B", site_b, jq);
}

struct MomentsAndMap {
  SystemSpec spec;
  std::vector<double> moments;  // chain alone, <0_c|sigma_iz|0_c>
  ConcurrenceMap map;           // full ground state, every site
  std::vector<std::string> labels;
  double sz = 0.0;              // S_z of the full-system ground state used
};

inline MomentsAndMap moments_and_map(const SystemSpec& spec, const SolverOptions& opt = {}) {
  MomentsAndMap d{spec, {}, {}, site_labels(spec), 0.0};
  const CentralSpin cs(spec, opt);
  for (int i = 0; i < spec.n_chain; ++i) d.moments.push_back(local_moment(cs.up(), i));
  const GroundManifold full = ground_manifold(spec, opt);
  d.sz = full.levels().front().sz();
  d.map = concurrence_map(full.ground(), all_sites(spec.n_sites()));
  return d;
}

struct LambdaPoint {
  double lambda = 0.0;
  PairConcurrences c;
};

inline std::vector<LambdaPoint> lambda_sweep(double lo, double hi, int steps, DoubletState which = DoubletState::pure) {
  if (steps < 2 || !(hi > lo)) throw InvalidArgument("lambda sweep: need steps >= 2 and max > min");
  std::vector<LambdaPoint> out;
  for (int k = 0; k < steps; ++k) {
    const double lambda = lo + (hi - lo) * k / (steps - 1);
    out.push_back({lambda, pair_concurrences(three_spin_model(lambda), which)});
  }
  return out;
}

struct GeometryMap {
  std::string geometry;
  SystemSpec spec;
  ConcurrenceMap map;
  std::vector<std::string> labels;
  GroundCharacter character = GroundCharacter::none;
};

inline GeometryMap geometry_map(std::string name, const SystemSpec& spec, const SolverOptions& opt = {}) {
  const GroundManifold g = ground_manifold(spec, opt);
  GeometryMap out{std::move(name), spec, concurrence_map(g.ground(), all_sites(spec.n_sites())), site_labels(spec)};
  out.character = classify_spin(total_spin_squared(g.ground()));
  return out;
}

// Chain-pair block of a map (the first n_chain entries).
inline Eigen::MatrixXd chain_block(const ConcurrenceMap& m, int n_chain) {
  return m.values.topLeftCorner(n_chain, n_chain);
}

// Largest change of a chain-pair matrix under a one-site cyclic shift.
inline double cyclic_shift_deviation(const Eigen::MatrixXd& c) {
  const auto n = c.rows();
  double dev = 0.0;
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index b = 0; b < n; ++b) dev = std::max(dev, std::abs(c((a + 1) % n, (b + 1) % n) - c(a, b)));
  return dev;
}

struct RkkyProfile {
  int n_chain = 10;
  int site_i = 1;
  double jq = kDefaultJq;
  std::vector<int> j;             // 1..N
  std::vector<double> correlation;  // <sigma_ix sigma_jx>, 1 at j = i
  std::vector<double> exact;
  std::vector<double> approx;
  double mu_spread = 0.0;         // max over j of |J*_x - J*_z|, |J*_y - J*_z| divided by jA jB

  double exact_norm(std::size_t k) const { return exact[k] / std::abs(exact[static_cast<std::size_t>(site_i - 1)]); }
  double approx_norm(std::size_t k) const { return approx[k] / std::abs(approx[static_cast<std::size_t>(site_i - 1)]); }
};

inline RkkyProfile rkky_profile(const SystemSpec& chain, int site_i, double jq, const SolverOptions& opt = {}) {
  const EvenChain ec(chain, opt);
  RkkyProfile p;
  p.n_chain = chain.n_chain;
  p.site_i = site_i;
  p.jq = jq;
  for (int j = 1; j <= chain.n_chain; ++j) {
    p.j.push_back(j);
    p.correlation.push_back(ec.correlation(site_i, j, Axis::x));
    const double z = ec.rkky_exact(site_i, j, jq, jq, Axis::z).value;
    const double x = ec.rkky_exact(site_i, j, jq, jq, Axis::x).value;
    const double y = ec.rkky_exact(site_i, j, jq, jq, Axis::y).value;
    p.exact.push_back(z);
    p.approx.push_back(ec.rkky_approx(site_i, j, jq, jq, Axis::x).value);
    p.mu_spread = std::max({p.mu_spread, std::abs(x - z) / (jq * jq), std::abs(y - z) / (jq * jq)});
  }
  return p;
}

struct ParityRow {
  int n_chain = 0;
  Boundary boundary = Boundary::open;
  int degeneracy = 0;
  std::vector<double> sz;
  double spin_squared = 0.0;  // <S^2> of the first ground member
  double gap = 0.0;
};

inline ParityRow parity_row(int n, Boundary b, const SolverOptions& opt = {}) {
  const GroundManifold g = ground_manifold(SystemSpec::chain(n, b), opt);
  return {n, b, g.degeneracy, g.ground_sz(), total_spin_squared(g.ground()), g.gap};
}

struct ScalingRow {
  int n_chain = 0;
  double gap = 0.0;    // chain gap Delta
  double jq = 0.0;     // 1e-2 Delta
  double delta = 0.0;  // singlet-triplet splitting with qubits at (1, N)
  double jstar = 0.0;  // rkky_exact(1, N) at jq

  double gap_bound() const { return std::numbers::pi * std::numbers::pi / (2.0 * n_chain); }
  double jstar_estimate() const { return 1e-4 * std::numbers::pi * std::numbers::pi / n_chain; }
};

inline ScalingRow scaling_row(int n, const SolverOptions& opt = {}) {
  const SystemSpec chain = SystemSpec::chain(n);
  const EvenChain ec(chain, opt);
  ScalingRow r;
  r.n_chain = n;
  r.gap = ec.gap();
  r.jq = 1e-2 * r.gap;
  r.jstar = ec.rkky_exact(1, n, r.jq, r.jq).value;
  r.delta = coupling_from_gap(two_qubit_spec(n, Boundary::open, 1, n, r.jq), opt).value;
  return r;
}

}  // namespace spinbus
