#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "dstsp/dynamics.hpp"
#include "dstsp/grid_field.hpp"

namespace dstsp::cli {

inline constexpr const char* kSubcommands[] = {"estimate-agility", "build-cover", "run-dstsp",   "run-adversarial",
                                                "hcp-solve",        "check-bounds", "cbo-check", "concentration"};

struct ExperimentConfig {
  std::string subcommand;

  // Model.
  std::string model = "euclidean2";
  double r_min = 1.0;
  double c_pi = 1.0;
  std::string sigma = "1";  // "<value>" or "<x_split>:<left>:<right>"
  double v_max = 1.0;
  double omega_max = 1.0;

  // Experiment.
  std::string density = "uniform";  // uniform | linear | worst | anti | file:<path>
  std::vector<std::uint64_t> n{256};
  std::uint64_t seeds = 1;
  std::uint64_t seed = 0;
  double delta = 0.3;
  double zeta = 0.05;
  double eps0 = 0.0;  // 0 picks eps0 from n
  double c0 = 1.0;
  unsigned threads = 0;  // 0 falls back to DSTSP_LAB_THREADS, then the core count
  bool assert_properties = false;
  std::string out = "-";
  std::string format = "csv";

  // Subcommand specific.
  std::uint64_t samples = 200000;
  std::vector<double> lambda{0.25, 0.5};
  std::vector<std::uint64_t> m{4, 16};
  std::vector<double> exponents{0.5, 2.0 / 3.0};
  std::uint64_t trials = 10000;
  std::string instance;
  std::string plan_out;
  double b = 0.0;  // branching; 0 measures it from the cover
  double beta = 0.0;
  double s = 2.0;
  double alpha = 0.0;
  double gamma = 0.0;
  double J = 1.0;
  double int_g_inv = 1.0;

  void validate() const;
  // Canonical JSON echo; thread count is left out so it does not change outputs.
  std::string to_json() const;
};

// Applies the keys of a JSON config object onto `base`; throws ConfigError naming the line or field.
ExperimentConfig config_from_json(const std::string& text, ExperimentConfig base = {});

DynamicsModel make_model(const ExperimentConfig& cfg);

// Named or file density on a 64 x 64 unit-square grid (file densities keep their own grid).
GridField make_density(const ExperimentConfig& cfg, const GridField& g);

// Runs one subcommand, writing its report and manifest; returns the exit code
// (0 ok, 1 property violation under --assert).
int run(const ExperimentConfig& cfg, std::ostream& log);

// Command-line entry point.
int main(int argc, char** argv);

}  // namespace dstsp::cli
