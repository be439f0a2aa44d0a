#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "idslab/csv.hpp"
#include "idslab/distributions.hpp"
#include "idslab/errors.hpp"
#include "idslab/model.hpp"
#include "idslab/rng.hpp"

namespace idslab {

using nlohmann::json;

namespace cfg_detail {

inline const json& require_field(const json& j, const char* key, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw ConfigError(path + "." + key, "missing required field");
  return *it;
}

template <class T>
T get_field(const json& j, const char* key, const std::string& path) {
  try {
    return require_field(j, key, path).get<T>();
  } catch (const ConfigError&) {
    throw;
  } catch (const json::exception& e) {
    throw ConfigError(path + "." + key, std::string("wrong type: ") + e.what());
  }
}

template <class T>
T get_field_or(const json& j, const char* key, const std::string& path, T fallback) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  return get_field<T>(j, key, path);
}

}  // namespace cfg_detail

// --- plain value mirrors of the model blocks -------------------------------

struct EdgeConfig {
  int i = 0;
  int j = 0;
  double weight = 1.0;
  friend bool operator==(const EdgeConfig&, const EdgeConfig&) = default;
};

struct BondConfig {
  int i = 0;
  std::vector<std::int64_t> offset;
  int j = 0;
  double weight = 1.0;
  friend bool operator==(const BondConfig&, const BondConfig&) = default;
};

struct CellConfig {
  int vertices = 1;
  std::vector<double> vertex_weights;
  std::vector<EdgeConfig> internal_edges;
  std::vector<BondConfig> cross_bonds;
  friend bool operator==(const CellConfig&, const CellConfig&) = default;
};

struct SiteConfig {
  std::vector<std::int64_t> offset;
  int vertex = 0;
  double value = 0.0;
  friend bool operator==(const SiteConfig&, const SiteConfig&) = default;
};

struct PotentialConfig {
  DistributionSpec coupling = DistributionSpec::constant(0.0);
  std::vector<SiteConfig> single_site;
  bool require_nonnegative = true;
  friend bool operator==(const PotentialConfig&, const PotentialConfig&) = default;
};

struct MetricConfig {
  DistributionSpec log_deformation = DistributionSpec::constant(0.0);
  std::vector<SiteConfig> single_site;
  friend bool operator==(const MetricConfig&, const MetricConfig&) = default;
};

struct ExperimentSpec {
  std::string name;
  std::string estimator;  // oracle | ids | bracket | wegner | selfavg
  std::vector<double> lambdas;
  double lambda = 0.0;  // selfavg evaluates a single threshold
  std::vector<int> radii;
  std::vector<double> epsilons;
  std::vector<int> box_sides;
  double energy = 0.0;
  int samples = 0;
  int theta_samples = 0;
  std::string boundary = "dirichlet";
  bool compare_to_oracle = false;
  int oracle_theta_samples = 4096;
  friend bool operator==(const ExperimentSpec&, const ExperimentSpec&) = default;
};

/// Full experiment configuration; round-trips through JSON to an identical
/// value. The master seed determines every derived seed.
struct ExperimentConfig {
  int dimension = 1;
  CellConfig cell;
  std::vector<double> periodic_potential;
  std::optional<PotentialConfig> potential;
  std::optional<MetricConfig> metric;
  std::vector<ExperimentSpec> experiments;
  std::uint64_t seed = 0;
  int workers = 0;  // 0 = unset (fall back to IDS_LAB_WORKERS, then 1)
  std::string output_dir = "out";

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;

  ModelSpec build_model() const;
  void validate() const;
  json to_json() const;
  static ExperimentConfig from_json(const json& j);

  std::string canonical_dump() const { return to_json().dump(); }
  std::string config_hash() const {
    const std::string dump = canonical_dump();
    return format_u64_hex(fnv1a64(dump.data(), dump.size()));
  }
};

// --- distribution (de)serialization ----------------------------------------

inline json distribution_to_json(const DistributionSpec& d) {
  json j;
  j["kind"] = d.kind_name();
  if (d.kind() == DistributionSpec::Kind::TwoPoint) {
    j["p"] = d.param_p();
    j["x0"] = d.param_a();
    j["x1"] = d.param_b();
  } else {
    j["a"] = d.param_a();
    j["b"] = d.param_b();
  }
  return j;
}

inline DistributionSpec distribution_from_json(const json& j, const std::string& path) {
  using cfg_detail::get_field;
  const std::string kind = get_field<std::string>(j, "kind", path);
  try {
    if (kind == "uniform")
      return DistributionSpec::uniform(get_field<double>(j, "a", path),
                                       get_field<double>(j, "b", path));
    if (kind == "triangular")
      return DistributionSpec::triangular(get_field<double>(j, "a", path),
                                          get_field<double>(j, "b", path));
    if (kind == "two_point")
      return DistributionSpec::two_point(get_field<double>(j, "p", path),
                                         get_field<double>(j, "x0", path),
                                         get_field<double>(j, "x1", path));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(path, e.what());
  }
  throw ConfigError(path + ".kind", "unknown distribution kind '" + kind + "'");
}

// --- config <-> json --------------------------------------------------------

inline json ExperimentConfig::to_json() const {
  json j;
  json cell_j;
  cell_j["vertices"] = cell.vertices;
  cell_j["vertex_weights"] = cell.vertex_weights;
  cell_j["internal_edges"] = json::array();
  for (const auto& e : cell.internal_edges)
    cell_j["internal_edges"].push_back({{"i", e.i}, {"j", e.j}, {"weight", e.weight}});
  cell_j["cross_bonds"] = json::array();
  for (const auto& b : cell.cross_bonds)
    cell_j["cross_bonds"].push_back(
        {{"i", b.i}, {"offset", b.offset}, {"j", b.j}, {"weight", b.weight}});

  json model_j;
  model_j["dimension"] = dimension;
  model_j["cell"] = cell_j;
  model_j["periodic_potential"] = periodic_potential;
  if (potential) {
    json p;
    p["coupling"] = distribution_to_json(potential->coupling);
    p["single_site"] = json::array();
    for (const auto& s : potential->single_site)
      p["single_site"].push_back(
          {{"offset", s.offset}, {"vertex", s.vertex}, {"value", s.value}});
    p["require_nonnegative"] = potential->require_nonnegative;
    model_j["potential"] = p;
  }
  if (metric) {
    json mj;
    mj["log_deformation"] = distribution_to_json(metric->log_deformation);
    mj["single_site"] = json::array();
    for (const auto& s : metric->single_site)
      mj["single_site"].push_back(
          {{"offset", s.offset}, {"vertex", s.vertex}, {"value", s.value}});
    model_j["metric"] = mj;
  }
  j["model"] = model_j;

  j["experiments"] = json::array();
  for (const auto& e : experiments) {
    json ej;
    ej["name"] = e.name;
    ej["estimator"] = e.estimator;
    if (!e.lambdas.empty()) ej["lambdas"] = e.lambdas;
    if (e.estimator == "selfavg") ej["lambda"] = e.lambda;
    if (!e.radii.empty()) ej["radii"] = e.radii;
    if (!e.epsilons.empty()) ej["epsilons"] = e.epsilons;
    if (!e.box_sides.empty()) ej["box_sides"] = e.box_sides;
    if (e.estimator == "wegner") ej["energy"] = e.energy;
    if (e.samples > 0) ej["samples"] = e.samples;
    if (e.theta_samples > 0) ej["theta_samples"] = e.theta_samples;
    ej["boundary"] = e.boundary;
    if (e.compare_to_oracle) {
      ej["compare_to_oracle"] = true;
      ej["oracle_theta_samples"] = e.oracle_theta_samples;
    }
    j["experiments"].push_back(ej);
  }

  j["run"] = json{{"seed", seed}, {"output_dir", output_dir}};
  if (workers > 0) j["run"]["workers"] = workers;
  return j;
}

inline ExperimentConfig ExperimentConfig::from_json(const json& j) {
  using cfg_detail::get_field;
  using cfg_detail::get_field_or;
  using cfg_detail::require_field;

  ExperimentConfig cfg;
  const json& model_j = require_field(j, "model", "config");
  cfg.dimension = get_field<int>(model_j, "dimension", "model");

  const json& cell_j = require_field(model_j, "cell", "model");
  cfg.cell.vertices = get_field<int>(cell_j, "vertices", "model.cell");
  cfg.cell.vertex_weights =
      get_field<std::vector<double>>(cell_j, "vertex_weights", "model.cell");
  if (cell_j.contains("internal_edges")) {
    int k = 0;
    for (const auto& ej : cell_j["internal_edges"]) {
      const std::string path = "model.cell.internal_edges[" + std::to_string(k++) + "]";
      EdgeConfig e;
      e.i = get_field<int>(ej, "i", path);
      e.j = get_field<int>(ej, "j", path);
      e.weight = get_field<double>(ej, "weight", path);
      cfg.cell.internal_edges.push_back(e);
    }
  }
  if (cell_j.contains("cross_bonds")) {
    int k = 0;
    for (const auto& bj : cell_j["cross_bonds"]) {
      const std::string path = "model.cell.cross_bonds[" + std::to_string(k++) + "]";
      BondConfig b;
      b.i = get_field<int>(bj, "i", path);
      b.offset = get_field<std::vector<std::int64_t>>(bj, "offset", path);
      b.j = get_field<int>(bj, "j", path);
      b.weight = get_field<double>(bj, "weight", path);
      cfg.cell.cross_bonds.push_back(b);
    }
  }
  cfg.periodic_potential =
      get_field_or<std::vector<double>>(model_j, "periodic_potential", "model", {});

  auto parse_sites = [&](const json& parent, const std::string& path) {
    std::vector<SiteConfig> sites;
    int k = 0;
    for (const auto& sj : parent) {
      const std::string spath = path + "[" + std::to_string(k++) + "]";
      SiteConfig s;
      s.offset = get_field<std::vector<std::int64_t>>(sj, "offset", spath);
      s.vertex = get_field<int>(sj, "vertex", spath);
      s.value = get_field<double>(sj, "value", spath);
      sites.push_back(s);
    }
    return sites;
  };

  if (model_j.contains("potential")) {
    const json& pj = model_j["potential"];
    PotentialConfig p;
    p.coupling =
        distribution_from_json(require_field(pj, "coupling", "model.potential"),
                               "model.potential.coupling");
    p.single_site = parse_sites(require_field(pj, "single_site", "model.potential"),
                                "model.potential.single_site");
    p.require_nonnegative =
        get_field_or<bool>(pj, "require_nonnegative", "model.potential", true);
    cfg.potential = p;
  }
  if (model_j.contains("metric")) {
    const json& mj = model_j["metric"];
    MetricConfig m;
    m.log_deformation =
        distribution_from_json(require_field(mj, "log_deformation", "model.metric"),
                               "model.metric.log_deformation");
    m.single_site = parse_sites(require_field(mj, "single_site", "model.metric"),
                                "model.metric.single_site");
    cfg.metric = m;
  }

  const json& exps = require_field(j, "experiments", "config");
  if (!exps.is_array()) throw ConfigError("experiments", "expected an array");
  int idx = 0;
  for (const auto& ej : exps) {
    const std::string path = "experiments[" + std::to_string(idx++) + "]";
    ExperimentSpec e;
    e.name = get_field<std::string>(ej, "name", path);
    e.estimator = get_field<std::string>(ej, "estimator", path);
    if (ej.contains("lambdas")) {
      const json& lj = ej["lambdas"];
      if (lj.is_array()) {
        e.lambdas = lj.get<std::vector<double>>();
      } else if (lj.is_object()) {
        const double lo = get_field<double>(lj, "min", path + ".lambdas");
        const double hi = get_field<double>(lj, "max", path + ".lambdas");
        const int count = get_field<int>(lj, "count", path + ".lambdas");
        if (count < 2) throw ConfigError(path + ".lambdas.count", "need at least 2 grid points");
        for (int k = 0; k < count; ++k)
          e.lambdas.push_back(lo + (hi - lo) * k / (count - 1));
      } else {
        throw ConfigError(path + ".lambdas", "expected array or {min,max,count}");
      }
    }
    e.lambda = get_field_or<double>(ej, "lambda", path, 0.0);
    e.radii = get_field_or<std::vector<int>>(ej, "radii", path, {});
    e.epsilons = get_field_or<std::vector<double>>(ej, "epsilons", path, {});
    e.box_sides = get_field_or<std::vector<int>>(ej, "box_sides", path, {});
    e.energy = get_field_or<double>(ej, "energy", path, 0.0);
    e.samples = get_field_or<int>(ej, "samples", path, 0);
    e.theta_samples = get_field_or<int>(ej, "theta_samples", path, 0);
    e.boundary = get_field_or<std::string>(ej, "boundary", path, "dirichlet");
    e.compare_to_oracle = get_field_or<bool>(ej, "compare_to_oracle", path, false);
    e.oracle_theta_samples = get_field_or<int>(ej, "oracle_theta_samples", path, 4096);
    cfg.experiments.push_back(e);
  }

  const json& run_j = require_field(j, "run", "config");
  cfg.seed = get_field<std::uint64_t>(run_j, "seed", "run");
  cfg.workers = get_field_or<int>(run_j, "workers", "run", 0);
  cfg.output_dir = get_field_or<std::string>(run_j, "output_dir", "run", "out");
  return cfg;
}

inline ModelSpec ExperimentConfig::build_model() const {
  std::vector<InternalEdge> edges;
  for (const auto& e : cell.internal_edges) edges.push_back({e.i, e.j, e.weight});
  std::vector<CrossBond> bonds;
  for (const auto& b : cell.cross_bonds) {
    if (static_cast<int>(b.offset.size()) != dimension)
      throw ConfigError("model.cell.cross_bonds",
                        "offset length != dimension " + std::to_string(dimension));
    bonds.push_back({b.i, GroupElement(std::span<const std::int64_t>(b.offset)), b.j, b.weight});
  }
  FundamentalCell fc(dimension, cell.vertices, std::move(edges), std::move(bonds),
                     cell.vertex_weights);

  auto build_sites = [&](const std::vector<SiteConfig>& sites, const std::string& path) {
    std::vector<SiteContribution> out;
    for (const auto& s : sites) {
      if (static_cast<int>(s.offset.size()) != dimension)
        throw ConfigError(path, "site offset length != dimension");
      out.push_back({GroupElement(std::span<const std::int64_t>(s.offset)), s.vertex, s.value});
    }
    return out;
  };

  std::optional<PotentialModel> pot;
  if (potential) {
    pot = PotentialModel{
        potential->coupling,
        SingleSiteFunction(dimension, cell.vertices,
                           build_sites(potential->single_site, "model.potential.single_site")),
        potential->require_nonnegative};
  }
  std::optional<MetricModel> met;
  if (metric) {
    met = MetricModel{
        metric->log_deformation,
        SingleSiteFunction(dimension, cell.vertices,
                           build_sites(metric->single_site, "model.metric.single_site"))};
  }
  return ModelSpec(std::move(fc), periodic_potential, std::move(pot), std::move(met));
}

inline void ExperimentConfig::validate() const {
  if (dimension < 1 || dimension > GroupElement::kMaxDim)
    throw ConfigError("model.dimension", "must be between 1 and " +
                                             std::to_string(GroupElement::kMaxDim));
  try {
    (void)build_model();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError("model", e.what());
  }

  if (experiments.empty()) throw ConfigError("experiments", "at least one experiment required");
  std::vector<std::string> names;
  for (std::size_t k = 0; k < experiments.size(); ++k) {
    const auto& e = experiments[k];
    const std::string path = "experiments[" + std::to_string(k) + "]";
    if (e.name.empty()) throw ConfigError(path + ".name", "must not be empty");
    for (const auto& seen : names)
      if (seen == e.name) throw ConfigError(path + ".name", "duplicate experiment name");
    names.push_back(e.name);

    const bool known = e.estimator == "oracle" || e.estimator == "ids" ||
                       e.estimator == "bracket" || e.estimator == "wegner" ||
                       e.estimator == "selfavg";
    if (!known) throw ConfigError(path + ".estimator", "unknown estimator '" + e.estimator + "'");

    if (e.boundary != "dirichlet" && e.boundary != "neumann")
      throw ConfigError(path + ".boundary", "must be 'dirichlet' or 'neumann'");

    auto need_grid = [&]() {
      if (e.lambdas.size() < 1) throw ConfigError(path + ".lambdas", "grid required");
      for (std::size_t g = 0; g + 1 < e.lambdas.size(); ++g)
        if (!(e.lambdas[g] < e.lambdas[g + 1]))
          throw ConfigError(path + ".lambdas", "grid not strictly ascending");
    };
    auto need_radii = [&]() {
      if (e.radii.empty()) throw ConfigError(path + ".radii", "required");
      for (std::size_t g = 0; g < e.radii.size(); ++g) {
        if (e.radii[g] < 0) throw ConfigError(path + ".radii", "must be >= 0");
        if (g + 1 < e.radii.size() && !(e.radii[g] < e.radii[g + 1]))
          throw ConfigError(path + ".radii", "must be strictly increasing");
      }
    };

    if (e.estimator == "oracle") {
      need_grid();
      if (e.theta_samples < 1) throw ConfigError(path + ".theta_samples", "must be >= 1");
    } else if (e.estimator == "ids") {
      need_grid();
      need_radii();
    } else if (e.estimator == "bracket") {
      need_grid();
      if (e.samples < 2) throw ConfigError(path + ".samples", "must be >= 2");
    } else if (e.estimator == "wegner") {
      if (e.epsilons.empty()) throw ConfigError(path + ".epsilons", "required");
      for (double eps : e.epsilons)
        if (!(eps > 0.0)) throw ConfigError(path + ".epsilons", "must be positive");
      if (e.box_sides.empty()) throw ConfigError(path + ".box_sides", "required");
      for (int side : e.box_sides)
        if (side < 1) throw ConfigError(path + ".box_sides", "must be >= 1");
      if (e.samples < 1) throw ConfigError(path + ".samples", "must be >= 1");
    } else if (e.estimator == "selfavg") {
      need_radii();
      if (e.samples < 10) throw ConfigError(path + ".samples", "must be >= 10");
    }
    if (e.compare_to_oracle && e.estimator != "ids")
      throw ConfigError(path + ".compare_to_oracle", "only valid for the ids estimator");
  }
  if (workers < 0) throw ConfigError("run.workers", "must be >= 0");
  if (output_dir.empty()) throw ConfigError("run.output_dir", "must not be empty");
}

}  // namespace idslab
