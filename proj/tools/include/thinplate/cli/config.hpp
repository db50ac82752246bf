#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace thinplate::cli {

/// Every knob a subcommand can read. A JSON file fills it first, then command
/// line flags overwrite individual fields.
struct ExperimentConfig {
  std::string density = "neo-hookean";
  double mu = 1.0;
  double lambda = 1.0;
  double pi = 1.0;
  double alpha = 2.0;

  std::string regime = "vklin";  // minimize2d
  std::vector<std::size_t> grid{16, 16, 4};  // NX NY (nodes) and NZ (layers)
  double lx = 1.0;
  double ly = 1.0;

  double h = 0.25;  // minimize3d
  std::vector<double> h_list{0.25, 0.125, 0.0625};

  std::string kind = "vk";  // recovery
  double radius = 2.0;
  double amplitude = 0.1;
  double refine = 4.0;      // recovery plane cells per side are max(32, refine / h)
  std::size_t layers = 16;

  double xmin = 1e-3;  // membrane-envelope
  double xmax = 1e6;
  std::size_t samples_1d = 4000;
  double envelope_tol = 1e-3;

  int samples = 1000;  // check-assumptions
  double tol = 0.0;    // 0 picks the solver default
  int max_iter = 20000;
  std::uint64_t seed = 20240917;
  std::string output_dir;
  bool timing = false;
};

/// Reads a JSON object whose keys are the field names above (h_list and
/// samples_1d spelled as shown). Unknown keys and type mismatches throw
/// std::invalid_argument.
void merge_json_file(ExperimentConfig& cfg, const std::string& path);
void merge_json_text(ExperimentConfig& cfg, const std::string& text);

/// Canonical JSON snapshot (sorted keys) of the configuration and the
/// subcommand. output_dir and timing are left out since they do not change
/// the numbers.
std::string to_json(const ExperimentConfig& cfg, const std::string& subcommand);

/// Checks the preconditions of one subcommand. Throws std::invalid_argument.
void validate(const ExperimentConfig& cfg, const std::string& subcommand);

}  // namespace thinplate::cli
