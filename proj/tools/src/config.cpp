#include "config.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "nonlocal/error.hpp"
#include "nonlocal/grid.hpp"

namespace nonlocal::cli {

namespace {

std::string join(const std::vector<std::string>& lines) {
  std::string out = "invalid config";
  for (const auto& l : lines) out += "\n  " + l;
  return out;
}

// Walks one JSON object, remembering which keys were consumed so the rest can
// be reported as unknown.
class Reader {
 public:
  Reader(const nlohmann::json& node, std::string path, std::vector<std::string>& issues)
      : node_(node), path_(std::move(path)), issues_(issues) {
    if (!node_.is_object()) issue(path_, "expected an object");
  }

  ~Reader() {
    if (!node_.is_object()) return;
    for (const auto& [key, value] : node_.items())
      if (!seen_.count(key)) issue(path_ + "." + key, "unknown field");
  }

  bool has(const std::string& key) {
    seen_.insert(key);
    return node_.is_object() && node_.contains(key);
  }

  template <typename T>
  void get(const std::string& key, T& out) {
    if (!has(key)) return;
    try {
      out = node_.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
      issue(path_ + "." + key, "wrong type");
    }
  }

  template <typename T>
  void get(const std::string& key, std::optional<T>& out) {
    if (!has(key)) return;
    try {
      out = node_.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
      issue(path_ + "." + key, "wrong type");
    }
  }

  void positive(const std::string& key, double& out) {
    get(key, out);
    if (!(out > 0.0)) issue(path_ + "." + key, "must be positive");
  }

  Reader child(const std::string& key) {
    seen_.insert(key);
    static const nlohmann::json empty = nlohmann::json::object();
    if (!node_.is_object() || !node_.contains(key)) return Reader(empty, path_ + "." + key, issues_);
    return Reader(node_.at(key), path_ + "." + key, issues_);
  }

  bool present(const std::string& key) const { return node_.is_object() && node_.contains(key); }
  const std::string& path() const { return path_; }
  void issue(const std::string& where, const std::string& what) { issues_.push_back(where + ": " + what); }

 private:
  const nlohmann::json& node_;
  std::string path_;
  std::vector<std::string>& issues_;
  std::set<std::string> seen_;
};

void read_kernel(Reader r, KernelConfig& k) {
  r.get("family", k.family);
  r.positive("intensity", k.intensity);
  if (k.family == "gaussian") {
    r.positive("sigma", k.sigma);
  } else if (k.family == "stable") {
    r.get("gamma", k.gamma);
    if (!(k.gamma > 0.0 && k.gamma < 2.0)) r.issue(r.path() + ".gamma", "must lie in (0, 2)");
  } else if (k.family == "embedded") {
    r.get("h", k.h);
    if (!(k.h > 0.0 && k.h <= 4.0 / 9.0)) r.issue(r.path() + ".h", "must lie in (0, 4/9]");
  } else if (k.family == "embedded_multi") {
    r.get("h", k.h_seq);
    r.get("m_max", k.m_max);
    if (k.h_seq.empty()) r.issue(r.path() + ".h", "needs a non-empty array");
    if (k.m_max < 1) r.issue(r.path() + ".m_max", "must be at least 1");
  } else if (k.family == "exponential_power") {
    r.get("alpha", k.alpha);
    if (!(k.alpha > 1.0)) r.issue(r.path() + ".alpha", "must exceed 1");
  } else {
    r.issue(r.path() + ".family", "unknown family '" + k.family + "'");
  }
}

void read_potential(Reader r, PotentialConfig& p) {
  r.get("profile", p.profile);
  r.get("amplitude", p.amplitude);
  r.positive("support_radius", p.support_radius);
  r.positive("delta", p.delta);
  r.positive("R", p.R);
  if (p.amplitude < 0.0) r.issue(r.path() + ".amplitude", "must be non-negative");
  if (p.delta >= 1.0) r.issue(r.path() + ".delta", "must be below 1");
  if (p.profile != "zero" && p.profile != "bump" && p.profile != "raised_cosine" && p.profile != "gaussian_bump")
    r.issue(r.path() + ".profile", "unknown profile '" + p.profile + "'");
}

void power_of_two(Reader& r, const std::string& key, std::size_t& n) {
  r.get(key, n);
  if (!is_power_of_two(n)) r.issue(r.path() + "." + key, "must be a power of two");
}

void read_initial(Reader r, InitialCondition& ic) {
  std::string kind = "indicator";
  r.get("kind", kind);
  if (kind == "constant") ic.kind = InitialCondition::Kind::kConstant;
  else if (kind == "indicator") ic.kind = InitialCondition::Kind::kIndicator;
  else if (kind == "gaussian") ic.kind = InitialCondition::Kind::kGaussian;
  else r.issue(r.path() + ".kind", "unknown initial condition '" + kind + "'");
  r.positive("amplitude", ic.amplitude);
  r.positive("width", ic.width);
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> issues) : std::runtime_error(join(issues)), issues_(std::move(issues)) {}

JumpKernel KernelConfig::build() const {
  JumpKernel base = [&] {
    if (family == "gaussian") return make_gaussian(sigma);
    if (family == "stable") return make_stable_like(gamma);
    if (family == "embedded") return make_embedded_family(h);
    if (family == "embedded_multi") return make_embedded_family_multi(h_seq, m_max);
    if (family == "exponential_power") return make_exponential_power(alpha);
    fail(ErrorKind::kConfig, "unknown kernel family '" + family + "'");
  }();
  return intensity == 1.0 ? base : base.with_intensity(intensity);
}

Potential PotentialConfig::build() const {
  return Potential::make(potential_profile_from_string(profile), amplitude, support_radius, delta, 1.0);
}

ExperimentConfig parse_config(const nlohmann::json& doc) {
  std::vector<std::string> issues;
  ExperimentConfig c;
  {
    Reader r(doc, "$", issues);
    if (!r.has("schema_version")) {
      r.issue("$.schema_version", "missing");
    } else {
      r.get("schema_version", c.schema_version);
      if (c.schema_version != kSchemaVersion)
        r.issue("$.schema_version", "unsupported version " + std::to_string(c.schema_version));
    }
    r.get("name", c.name);
    r.get("seed", c.seed);
    read_kernel(r.child("kernel"), c.kernel);
    read_potential(r.child("potential"), c.potential);
    {
      Reader g = r.child("grid");
      g.get("K", c.grid.K);
      if (c.grid.K && !(*c.grid.K > 0.0)) g.issue("$.grid.K", "must be positive");
      power_of_two(g, "n_points", c.grid.n_points);
      g.get("padding", c.grid.padding);
      if (c.grid.padding < 1) g.issue("$.grid.padding", "must be at least 1");
    }
    {
      Reader t = r.child("tolerances");
      t.positive("root", c.tolerances.root);
      t.positive("refinement", c.tolerances.refinement);
      t.positive("oracle", c.tolerances.oracle);
      t.positive("clt", c.tolerances.clt);
      t.positive("front_slope", c.tolerances.front_slope);
      t.positive("stabilization_gap", c.tolerances.stabilization_gap);
    }
    {
      Reader s = r.child("spectrum");
      s.positive("flatness_tol", c.spectrum.flatness_tol);
      s.positive("min_width", c.spectrum.min_width);
    }
    {
      Reader s = r.child("transience");
      s.get("levels", c.transience.levels);
      if (c.transience.levels < 4) s.issue("$.transience.levels", "must be at least 4");
    }
    {
      Reader e = r.child("eigen");
      e.get("R", c.eigen.R);
      e.get("max_nodes", c.eigen.max_nodes);
      if (c.eigen.R.empty()) e.issue("$.eigen.R", "needs at least one value");
      for (double R : c.eigen.R)
        if (!(R > 0.0)) e.issue("$.eigen.R", "values must be positive");
    }
    {
      Reader a = r.child("asym");
      a.get("theta", c.asym.theta);
      a.get("lambda", c.asym.lambda);
      a.get("p", c.asym.p);
      a.get("r", c.asym.r);
      for (double l : c.asym.lambda)
        if (!(l > 0.0)) a.issue("$.asym.lambda", "values must be positive");
    }
    {
      Reader f = r.child("front");
      f.positive("R", c.front.R);
      f.get("lambda0", c.front.lambda0);
      f.get("eigen_result", c.front.eigen_result);
      f.get("inline_eigen", c.front.inline_eigen);
      f.positive("T", c.front.T);
      f.positive("dt", c.front.dt);
      power_of_two(f, "n_points", c.front.n_points);
      f.positive("h", c.front.h);
      f.positive("snapshot_interval", c.front.snapshot_interval);
      read_initial(f.child("initial"), c.front.initial);
      f.positive("threshold", c.front.threshold);
      f.positive("probe_gamma", c.front.probe_gamma);
      f.get("probe_times", c.front.probe_times);
    }
    {
      Reader s = r.child("stabilize");
      s.positive("h", c.stabilize.series.h);
      s.positive("window", c.stabilize.series.window);
      s.positive("tol", c.stabilize.series.tol);
      s.get("max_terms", c.stabilize.series.max_terms);
      s.get("evolution_check", c.stabilize.evolution_check);
      Reader e = s.child("evolution");
      std::size_t n = c.stabilize.evolution.grid.n;
      double h = c.stabilize.evolution.grid.h;
      power_of_two(e, "n_points", n);
      e.positive("h", h);
      c.stabilize.evolution.grid = SpatialGrid(n, h);
      e.positive("dt", c.stabilize.evolution.dt);
      e.positive("check_interval", c.stabilize.evolution.check_interval);
      e.positive("increment_tol", c.stabilize.evolution.increment_tol);
      e.positive("t_max", c.stabilize.evolution.t_max);
    }
    {
      Reader o = r.child("oracle");
      o.get("clt_n", c.oracle.clt_n);
      o.get("clt_points", c.oracle.clt_points);
      o.get("resolvent_lambda", c.oracle.resolvent_lambda);
      o.get("resolvent_x", c.oracle.resolvent_x);
      o.get("n_max", c.oracle.n_max);
      for (int n : c.oracle.clt_n)
        if (n < 1) o.issue("$.oracle.clt_n", "values must be at least 1");
      if (c.oracle.clt_points < 2) o.issue("$.oracle.clt_points", "must be at least 2");
    }
  }
  if (!issues.empty()) throw ConfigError(issues);
  c.canonical = doc.dump();
  c.hash = hex64(fnv1a64(c.canonical));
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError({path + ": cannot open"});
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError({path + ": " + e.what()});
  }
  return parse_config(doc);
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(value));
  return buf;
}

}  // namespace nonlocal::cli
