#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "nonlocal/dynamics.hpp"
#include "nonlocal/kernels.hpp"

namespace nonlocal::cli {

inline constexpr int kSchemaVersion = 1;

// All problems found while reading a config, one "path: message" per entry.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> issues);
  const std::vector<std::string>& issues() const { return issues_; }

 private:
  std::vector<std::string> issues_;
};

struct KernelConfig {
  std::string family = "gaussian";
  double intensity = 1.0;
  double sigma = 1.0;
  double gamma = 0.5;
  double h = 0.4;
  std::vector<double> h_seq;
  int m_max = 8;
  double alpha = 4.0;

  JumpKernel build() const;
};

struct PotentialConfig {
  std::string profile = "bump";
  double amplitude = 0.0;
  double support_radius = 1.0;
  double delta = 0.5;
  double R = 1.0;

  Potential build() const;  // at R = 1; commands apply R themselves
};

struct GridConfig {
  std::optional<double> K;
  std::size_t n_points = 1u << 14;
  std::size_t padding = 2;
};

struct Tolerances {
  double root = 1e-10;
  double refinement = 1e-5;
  double oracle = 1e-6;
  double clt = 0.05;
  double front_slope = 0.05;
  double stabilization_gap = 1e-2;
};

struct SpectrumConfig {
  double flatness_tol = 1e-4;
  double min_width = 0.1;
};

struct TransienceConfig {
  int levels = 48;
};

struct EigenConfig {
  std::vector<double> R{1.0};
  std::size_t max_nodes = 4096;
};

struct AsymConfig {
  double theta = 1.0;
  std::vector<double> lambda{1.0};
  std::vector<double> p{0.5, 1.0, 2.0};
  std::vector<double> r{20.0, 30.0, 40.0};
};

struct FrontConfig {
  double R = 2.0;
  std::optional<double> lambda0;
  std::optional<std::string> eigen_result;
  bool inline_eigen = false;
  double T = 120.0;
  double dt = 0.05;
  std::size_t n_points = 4096;
  double h = 0.1;
  double snapshot_interval = 1.0;
  InitialCondition initial{InitialCondition::Kind::kIndicator, 1.0, 1.0};
  double threshold = 1.0;
  double probe_gamma = 0.05;
  std::vector<double> probe_times{40.0, 50.0, 60.0, 70.0, 80.0};
};

struct StabilizeConfig {
  StabilizationOptions series;
  bool evolution_check = false;
  EvolutionGapOptions evolution;
};

struct OracleConfig {
  std::vector<int> clt_n{16, 64};
  int clt_points = 41;
  std::vector<double> resolvent_lambda{0.5, 1.0, 2.0};
  std::vector<double> resolvent_x{0.5, 1.0, 2.0, 4.0, 8.0};
  int n_max = 4000;
};

struct ExperimentConfig {
  int schema_version = kSchemaVersion;
  std::string name = "experiment";
  std::uint64_t seed = 0;
  KernelConfig kernel;
  PotentialConfig potential;
  GridConfig grid;
  Tolerances tolerances;
  SpectrumConfig spectrum;
  TransienceConfig transience;
  EigenConfig eigen;
  AsymConfig asym;
  FrontConfig front;
  StabilizeConfig stabilize;
  OracleConfig oracle;

  std::string canonical;  // sorted-key dump of the input document
  std::string hash;       // FNV-1a 64 of `canonical`, hex
};

ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig load_config(const std::string& path);

std::uint64_t fnv1a64(const std::string& bytes);
std::string hex64(std::uint64_t value);

}  // namespace nonlocal::cli
