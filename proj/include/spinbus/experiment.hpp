#pragma once

// Named experiments: config, CSV/JSON output and the run driver.

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <system_error>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "json.hpp"
#include "spinbus/acceptance.hpp"
#include "spinbus/datasets.hpp"
#include "spinbus/errors.hpp"
#include "spinbus/serialization.hpp"

namespace spinbus {

// Malformed or inconsistent run configuration.
class ConfigError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

// A dataset file is already present and --force was not given.
class OutputExists : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names{"fig2", "fig3", "fig4", "fig5", "parity_levels", "scaling", "custom"};
  return names;
}

inline bool known_experiment(const std::string& name) {
  const auto& n = experiment_names();
  return std::find(n.begin(), n.end(), name) != n.end();
}

struct ExperimentConfig {
  std::string experiment;
  std::optional<SystemSpec> system;
  double jq = kDefaultJq;
  double lambda_min = -10.0;
  double lambda_max = 10.0;
  int lambda_steps = 201;
  int site_i = 1;                             // fig5 reference site
  std::vector<int> sizes;                     // parity_levels / scaling; empty = defaults
  double lanczos_tol = SolverOptions{}.lanczos_tol;
  double degeneracy_tol = SolverOptions{}.degeneracy_tol;
  std::uint64_t seed = SolverOptions{}.seed;
  int threads = 1;
  std::string out = "out";

  SolverOptions solver() const {
    SolverOptions o;
    o.lanczos_tol = lanczos_tol;
    o.degeneracy_tol = degeneracy_tol;
    o.seed = seed;
    o.threads = threads;
    return o;
  }

  bool operator==(const ExperimentConfig&) const = default;
};

inline void to_json(json& j, const ExperimentConfig& c) {
  j = json{{"experiment", c.experiment},
           {"jq", c.jq},
           {"lambda_min", c.lambda_min},
           {"lambda_max", c.lambda_max},
           {"lambda_steps", c.lambda_steps},
           {"site_i", c.site_i},
           {"sizes", c.sizes},
           {"lanczos_tol", c.lanczos_tol},
           {"degeneracy_tol", c.degeneracy_tol},
           {"seed", c.seed},
           {"threads", c.threads},
           {"out", c.out}};
  j["system"] = c.system ? json(*c.system) : json(nullptr);
}

// Missing keys keep their defaults. Parse failures surface as ConfigError.
inline void from_json(const json& j, ExperimentConfig& c) {
  try {
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    c.experiment = j.value("experiment", c.experiment);
    if (j.contains("system") && !j["system"].is_null()) c.system = j["system"].get<SystemSpec>();
    c.jq = j.value("jq", c.jq);
    c.lambda_min = j.value("lambda_min", c.lambda_min);
    c.lambda_max = j.value("lambda_max", c.lambda_max);
    c.lambda_steps = j.value("lambda_steps", c.lambda_steps);
    c.site_i = j.value("site_i", c.site_i);
    c.sizes = j.value("sizes", c.sizes);
    c.lanczos_tol = j.value("lanczos_tol", c.lanczos_tol);
    c.degeneracy_tol = j.value("degeneracy_tol", c.degeneracy_tol);
    c.seed = j.value("seed", c.seed);
    c.threads = j.value("threads", c.threads);
    c.out = j.value("out", c.out);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  } catch (const CapacityError&) {
    throw;
  } catch (const ConfigError&) {
    throw;
  } catch (const InvalidArgument& e) {
    throw ConfigError(std::string("config system: ") + e.what());
  }
}

inline ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("config " + path.string() + ": " + e.what());
  }
  return j.get<ExperimentConfig>();
}

// ---------------------------------------------------------------------------
// CSV

inline std::string format_number(double x) {
  if (!std::isfinite(x)) throw std::domain_error("refusing to write a non-finite value");
  if (x == 0.0) x = 0.0;  // drop the sign of -0
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

using Cell = std::variant<std::string, long long, double>;

class CsvTable {
 public:
  CsvTable(std::string name, std::vector<std::string> header) : name_(std::move(name)), header_(std::move(header)) {}

  void row(std::vector<Cell> cells) {
    if (cells.size() != header_.size()) throw std::logic_error(name_ + ": row width does not match header");
    std::string line;
    for (std::size_t k = 0; k < cells.size(); ++k) {
      if (k) line += ',';
      line += std::visit(
          [](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, std::string>)
              return v;
            else if constexpr (std::is_same_v<T, double>)
              return format_number(v);
            else
              return std::to_string(v);
          },
          cells[k]);
    }
    rows_.push_back(std::move(line));
  }

  const std::string& name() const { return name_; }
  std::size_t size() const { return rows_.size(); }

  std::string str() const {
    std::string s;
    for (std::size_t k = 0; k < header_.size(); ++k) s += (k ? "," : "") + header_[k];
    s += '\n';
    for (const auto& r : rows_) s += r + '\n';
    return s;
  }

 private:
  std::string name_;
  std::vector<std::string> header_;
  std::vector<std::string> rows_;
};

// ---------------------------------------------------------------------------
// results

struct RunResult {
  std::vector<CsvTable> tables;
  std::vector<std::pair<std::string, json>> documents;  // extra JSON files
  std::vector<CriterionResult> checks;

  std::vector<std::string> file_names() const {
    std::vector<std::string> f;
    for (const auto& t : tables) f.push_back(t.name());
    for (const auto& d : documents) f.push_back(d.first);
    f.push_back("params.json");
    f.push_back("summary.json");
    return f;
  }
};

inline json summary_json(const std::vector<CriterionResult>& checks) {
  json rows = json::array();
  for (const auto& c : checks)
    rows.push_back({{"criterion", std::to_string(c.id) + ". " + c.title},
                    {"measured", c.measured},
                    {"expected", c.expected},
                    {"tol", c.tolerance},
                    {"status", to_string(c.status)},
                    {"notes", c.notes}});
  return rows;
}

inline json environment_json() {
  json e;
#if defined(__clang__)
  e["compiler"] = "clang " __clang_version__;
#elif defined(__GNUC__)
  e["compiler"] = "gcc " __VERSION__;
#else
  e["compiler"] = "unknown";
#endif
  e["eigen"] = std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
               std::to_string(EIGEN_MINOR_VERSION);
  e["cplusplus"] = __cplusplus;
  return e;
}

inline json params_json(const ExperimentConfig& c) {
  json j = c;
  j["environment"] = environment_json();
  return j;
}

// ---------------------------------------------------------------------------
// experiments

namespace detail {

inline std::vector<int> default_sizes(const std::string& experiment) {
  if (experiment == "scaling") return {6, 8, 10, 12, 14};
  return {2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12};
}

inline void require(bool ok, const std::string& msg) {
  if (!ok) throw ConfigError(msg);
}

inline SystemSpec with_jq(SystemSpec s, double jq) {
  for (auto& a : s.attachments) a.j_bare = jq;
  return s;
}

inline void pair_rows(CsvTable& t, const ConcurrenceMap& m, const std::vector<std::string>& labels,
                      const std::string& prefix = {}) {
  for (std::size_t a = 0; a < m.sites.size(); ++a)
    for (std::size_t b = a + 1; b < m.sites.size(); ++b) {
      std::vector<Cell> cells;
      if (!prefix.empty()) cells.emplace_back(prefix);
      cells.emplace_back(labels[static_cast<std::size_t>(m.sites[a])]);
      cells.emplace_back(labels[static_cast<std::size_t>(m.sites[b])]);
      cells.emplace_back(m.at(a, b));
      t.row(std::move(cells));
    }
}

inline bool is_default_pair(const SystemSpec& s, int n, Boundary b, int sa, int sb) {
  return s.n_chain == n && s.boundary == b && s.j_chain.empty() && s.attachments.size() == 2 &&
         s.attachments[0].site == sa && s.attachments[1].site == sb;
}

}  // namespace detail

// Everything that can be checked without solving: experiment name, system
// shape for the experiment, grid and tolerances.
inline void validate_config(const ExperimentConfig& c) {
  using detail::require;
  require(known_experiment(c.experiment), "unknown experiment \"" + c.experiment + "\"");
  require(c.jq >= 0.0 && std::isfinite(c.jq), "jq must be finite and >= 0");
  require(c.threads >= 1, "threads must be >= 1");
  require(c.lanczos_tol > 0.0 && c.degeneracy_tol > 0.0, "tolerances must be positive");
  if (c.system) {
    try {
      c.system->validate();
    } catch (const CapacityError&) {
      throw;
    } catch (const InvalidArgument& e) {
      throw ConfigError(e.what());
    }
  }
  const auto& e = c.experiment;
  if (e == "fig2" && c.system) {
    require(c.system->n_chain % 2 == 1, "fig2: chain length must be odd");
    require(!c.system->attachments.empty(), "fig2: at least one attached qubit required");
  }
  if (e == "fig3") {
    require(c.lambda_steps >= 2 && c.lambda_max > c.lambda_min, "fig3: need lambda_steps >= 2 and lambda_max > lambda_min");
    if (c.system) require(c.system->attachments.size() == 2, "fig3: the three-spin model needs exactly two qubits");
  }
  if (e == "fig4" && c.system) {
    require(c.system->n_chain % 2 == 0, "fig4: chain length must be even");
    require(c.system->attachments.size() == 2, "fig4: exactly two qubits required");
  }
  if (e == "fig5") {
    const int n = c.system ? c.system->n_chain : 10;
    if (c.system) require(n % 2 == 0, "fig5: chain length must be even");
    require(c.site_i >= 1 && c.site_i <= n, "fig5: site_i out of range");
  }
  if (e == "parity_levels" || e == "scaling") {
    for (int n : c.sizes) {
      require(n >= 2, "sizes must be >= 2");
      if (e == "scaling") require(n % 2 == 0, "scaling: sizes must be even");
      if (n > kMaxSites) throw CapacityError("size " + std::to_string(n) + " exceeds " + std::to_string(kMaxSites) + " sites");
    }
  }
  if (e == "custom") require(c.system.has_value(), "custom: a system is required");
}

inline RunResult run_fig2(const ExperimentConfig& c, const SolverOptions& opt) {
  const SystemSpec spec = c.system ? detail::with_jq(*c.system, c.jq) : two_qubit_spec(9, Boundary::open, 1, 9, c.jq);
  const MomentsAndMap d = moments_and_map(spec, opt);
  RunResult r;
  CsvTable a("fig2a.csv", {"site", "moment"});
  for (std::size_t k = 0; k < d.moments.size(); ++k) a.row({static_cast<long long>(k + 1), d.moments[k]});
  CsvTable b("fig2b.csv", {"site_i", "site_j", "concurrence"});
  detail::pair_rows(b, d.map, d.labels);
  r.tables = {std::move(a), std::move(b)};
  r.checks.push_back(acceptance::moment_alternation(d.moments));
  if (detail::is_default_pair(spec, 9, Boundary::open, 1, 9)) r.checks.push_back(acceptance::chain_locality(d));
  return r;
}

inline RunResult run_fig3(const ExperimentConfig& c) {
  RunResult r;
  CsvTable t("fig3.csv", {"lambda", "c_ab", "c_ac", "c_bc"});
  for (const auto& p : lambda_sweep(c.lambda_min, c.lambda_max, c.lambda_steps)) t.row({p.lambda, p.c.ab, p.c.ac, p.c.bc});
  r.tables.push_back(std::move(t));
  r.checks.push_back(acceptance::three_spin());
  r.checks.push_back(acceptance::doublet_independence(c.seed));
  return r;
}

inline RunResult run_fig4(const ExperimentConfig& c, const SolverOptions& opt) {
  std::vector<GeometryMap> maps;
  if (c.system) {
    maps.push_back(geometry_map(to_string(c.system->boundary), detail::with_jq(*c.system, c.jq), opt));
  } else {
    maps.push_back(geometry_map("open", two_qubit_spec(8, Boundary::open, 1, 8, c.jq), opt));
    maps.push_back(geometry_map("ring", two_qubit_spec(8, Boundary::ring, 1, 4, c.jq), opt));
  }
  RunResult r;
  CsvTable t("fig4.csv", {"geometry", "site_i", "site_j", "concurrence"});
  for (const auto& m : maps) detail::pair_rows(t, m.map, m.labels, m.geometry);
  r.tables.push_back(std::move(t));
  if (!c.system) {
    r.checks.push_back(acceptance::even_entanglement(acceptance::even_entanglement_data(c.jq, opt)));
    r.checks.push_back(acceptance::ring_invariance(maps[0], maps[1]));
  }
  return r;
}

inline RunResult run_fig5(const ExperimentConfig& c, const SolverOptions& opt) {
  const SystemSpec chain = c.system ? c.system->chain_only() : SystemSpec::chain(10);
  const RkkyProfile p = rkky_profile(chain, c.site_i, c.jq, opt);
  RunResult r;
  CsvTable a("fig5a.csv", {"j", "correlation"});
  CsvTable b("fig5b.csv", {"j", "rkky_exact_norm", "rkky_approx_norm"});
  for (std::size_t k = 0; k < p.j.size(); ++k) {
    a.row({static_cast<long long>(p.j[k]), p.correlation[k]});
    b.row({static_cast<long long>(p.j[k]), p.exact_norm(k), p.approx_norm(k)});
  }
  r.tables = {std::move(a), std::move(b)};
  r.checks.push_back(acceptance::rkky_signs(p));
  return r;
}

inline RunResult run_parity(const ExperimentConfig& c, const SolverOptions& opt) {
  const std::vector<int> sizes = c.sizes.empty() ? detail::default_sizes(c.experiment) : c.sizes;
  std::vector<ParityRow> rows;
  for (int n : sizes) {
    rows.push_back(parity_row(n, Boundary::open, opt));
    if (n % 2 == 0) rows.push_back(parity_row(n, Boundary::ring, opt));
  }
  RunResult r;
  CsvTable t("parity_levels.csv", {"N", "boundary", "degeneracy", "sz", "spin_squared", "gap"});
  for (const auto& row : rows) {
    std::string sz;
    for (double s : row.sz) sz += (sz.empty() ? "" : " ") + format_number(s);
    t.row({static_cast<long long>(row.n_chain), std::string(to_string(row.boundary)),
           static_cast<long long>(row.degeneracy), sz, row.spin_squared, row.gap});
  }
  r.tables.push_back(std::move(t));
  r.checks.push_back(acceptance::parity(rows));
  return r;
}

inline RunResult run_scaling(const ExperimentConfig& c, const SolverOptions& opt) {
  const std::vector<int> sizes = c.sizes.empty() ? detail::default_sizes(c.experiment) : c.sizes;
  std::vector<ScalingRow> rows;
  for (int n : sizes) rows.push_back(scaling_row(n, opt));
  RunResult r;
  CsvTable t("scaling.csv", {"N", "gap", "delta", "jstar"});
  for (const auto& row : rows) t.row({static_cast<long long>(row.n_chain), row.gap, row.delta, row.jstar});
  r.tables.push_back(std::move(t));
  r.checks.push_back(acceptance::gap_scaling(rows));
  return r;
}

inline RunResult run_custom(const ExperimentConfig& c, const SolverOptions& opt) {
  const SystemSpec& spec = *c.system;
  RunResult r;
  const LowSpectrum low = low_spectrum(spec, opt, 8);
  CsvTable levels("levels.csv", {"index", "energy", "sz", "residual"});
  for (std::size_t k = 0; k < low.levels.size(); ++k)
    levels.row({static_cast<long long>(k), low.levels[k].energy, low.levels[k].sz(), low.levels[k].residual});

  const GroundManifold g = ground_manifold(spec, opt);
  const RealState psi = g.ground();
  const auto labels = site_labels(spec);
  CsvTable moments("moments.csv", {"site", "moment"});
  for (int s = 0; s < spec.n_sites(); ++s) moments.row({labels[static_cast<std::size_t>(s)], local_moment(psi, s)});
  CsvTable conc("concurrence.csv", {"site_i", "site_j", "concurrence"});
  if (spec.n_sites() >= 2) detail::pair_rows(conc, concurrence_map(psi, all_sites(spec.n_sites())), labels);

  json couplings = json::array();
  if (spec.n_chain % 2 == 1 && spec.boundary == Boundary::open) {
    const CentralSpin cs(spec, opt);
    for (const auto& a : spec.attachments) couplings.push_back(coupling_row(cs.coupling(a.site, a.j_bare)));
  } else if (spec.n_chain % 2 == 0 && spec.attachments.size() == 2) {
    const auto& qa = spec.attachments[0];
    const auto& qb = spec.attachments[1];
    const EvenChain ec(spec, opt);
    couplings.push_back(coupling_row(ec.rkky_exact(qa.site, qb.site, qa.j_bare, qb.j_bare)));
    couplings.push_back(coupling_row(ec.rkky_approx(qa.site, qb.site, qa.j_bare, qb.j_bare)));
    couplings.push_back(coupling_row(coupling_from_gap(spec, opt)));
  }
  r.tables = {std::move(levels), std::move(moments), std::move(conc)};
  r.documents.emplace_back("couplings.json", std::move(couplings));
  return r;
}

// Computes the experiment without touching the filesystem.
inline RunResult compute(const ExperimentConfig& c) {
  validate_config(c);
  const SolverOptions opt = c.solver();
  const auto& e = c.experiment;
  if (e == "fig2") return run_fig2(c, opt);
  if (e == "fig3") return run_fig3(c);
  if (e == "fig4") return run_fig4(c, opt);
  if (e == "fig5") return run_fig5(c, opt);
  if (e == "parity_levels") return run_parity(c, opt);
  if (e == "scaling") return run_scaling(c, opt);
  return run_custom(c, opt);
}

inline std::vector<std::string> output_files(const std::string& experiment) {
  if (experiment == "fig2") return {"fig2a.csv", "fig2b.csv"};
  if (experiment == "fig3") return {"fig3.csv"};
  if (experiment == "fig4") return {"fig4.csv"};
  if (experiment == "fig5") return {"fig5a.csv", "fig5b.csv"};
  if (experiment == "parity_levels") return {"parity_levels.csv"};
  if (experiment == "scaling") return {"scaling.csv"};
  return {"levels.csv", "moments.csv", "concurrence.csv", "couplings.json"};
}

inline void write_file(const std::filesystem::path& path, const std::string& content) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write " + tmp.string());
    f << content;
    if (!f) throw std::runtime_error("write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

inline void check_writable(const std::filesystem::path& dir, const std::vector<std::string>& files, bool force) {
  if (force) return;
  for (const auto& f : files)
    if (std::filesystem::exists(dir / f))
      throw OutputExists((dir / f).string() + " exists; pass --force to overwrite");
}

// Validate, check the output directory, compute, write. Returns the checks.
inline std::vector<CriterionResult> run_experiment(const ExperimentConfig& c, bool force) {
  validate_config(c);
  const std::filesystem::path dir(c.out);
  auto files = output_files(c.experiment);
  files.push_back("params.json");
  files.push_back("summary.json");
  check_writable(dir, files, force);

  RunResult r = compute(c);
  std::filesystem::create_directories(dir);
  for (const auto& t : r.tables) write_file(dir / t.name(), t.str());
  for (const auto& [name, doc] : r.documents) write_file(dir / name, doc.dump(2) + "\n");
  write_file(dir / "params.json", params_json(c).dump(2) + "\n");
  write_file(dir / "summary.json", summary_json(r.checks).dump(2) + "\n");
  return r.checks;
}

}  // namespace spinbus
