#include "thinplate/cli/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "thinplate/density.hpp"
#include "thinplate/plate.hpp"

namespace thinplate::cli {

namespace {

using nlohmann::json;

template <class T>
void take(const json& j, const char* key, T& field) {
  try {
    field = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("config key '") + key + "': " + e.what());
  }
}

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument(msg);
}

void check_h_list(const std::vector<double>& hs, std::size_t min_len) {
  require(hs.size() >= min_len, "h_list needs at least " + std::to_string(min_len) + " entries");
  for (std::size_t i = 0; i < hs.size(); ++i) {
    require(hs[i] > 0.0 && hs[i] <= 1.0, "h_list entries must lie in (0, 1]");
    if (i) require(hs[i] < hs[i - 1], "h_list must be strictly decreasing");
  }
}

void check_grid(const ExperimentConfig& c, bool three_d) {
  // A 2D run ignores a trailing NZ so one config can drive both kinds of run.
  require(c.grid.size() == 3 || (!three_d && c.grid.size() == 2), three_d ? "grid needs NX NY NZ" : "grid needs NX NY");
  require(c.grid[0] >= 4 && c.grid[1] >= 4, "grid needs at least 4 nodes per side");
  if (three_d) require(c.grid[2] >= 2, "grid needs at least 2 layers");
  require(c.lx > 0.0 && c.ly > 0.0 && std::isfinite(c.lx) && std::isfinite(c.ly), "lx and ly must be positive");
}

}  // namespace

void merge_json_text(ExperimentConfig& cfg, const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config is not valid JSON: ") + e.what());
  }
  require(j.is_object(), "config must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (key == "density") take(j, "density", cfg.density);
    else if (key == "mu") take(j, "mu", cfg.mu);
    else if (key == "lambda") take(j, "lambda", cfg.lambda);
    else if (key == "pi") take(j, "pi", cfg.pi);
    else if (key == "alpha") take(j, "alpha", cfg.alpha);
    else if (key == "regime") take(j, "regime", cfg.regime);
    else if (key == "grid") take(j, "grid", cfg.grid);
    else if (key == "lx") take(j, "lx", cfg.lx);
    else if (key == "ly") take(j, "ly", cfg.ly);
    else if (key == "h") take(j, "h", cfg.h);
    else if (key == "h_list") take(j, "h_list", cfg.h_list);
    else if (key == "kind") take(j, "kind", cfg.kind);
    else if (key == "radius") take(j, "radius", cfg.radius);
    else if (key == "amplitude") take(j, "amplitude", cfg.amplitude);
    else if (key == "refine") take(j, "refine", cfg.refine);
    else if (key == "layers") take(j, "layers", cfg.layers);
    else if (key == "xmin") take(j, "xmin", cfg.xmin);
    else if (key == "xmax") take(j, "xmax", cfg.xmax);
    else if (key == "samples_1d") take(j, "samples_1d", cfg.samples_1d);
    else if (key == "envelope_tol") take(j, "envelope_tol", cfg.envelope_tol);
    else if (key == "samples") take(j, "samples", cfg.samples);
    else if (key == "tol") take(j, "tol", cfg.tol);
    else if (key == "max_iter") take(j, "max_iter", cfg.max_iter);
    else if (key == "seed") take(j, "seed", cfg.seed);
    else if (key == "output_dir") take(j, "output_dir", cfg.output_dir);
    else if (key == "timing") take(j, "timing", cfg.timing);
    else throw std::invalid_argument("unknown config key '" + key + "'");
  }
}

void merge_json_file(ExperimentConfig& cfg, const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::invalid_argument("cannot read config file " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  merge_json_text(cfg, ss.str());
}

std::string to_json(const ExperimentConfig& c, const std::string& subcommand) {
  json j = {{"subcommand", subcommand}, {"density", c.density}, {"mu", c.mu}, {"lambda", c.lambda},
            {"pi", c.pi}, {"alpha", c.alpha}, {"regime", c.regime}, {"grid", c.grid}, {"lx", c.lx},
            {"ly", c.ly}, {"h", c.h}, {"h_list", c.h_list}, {"kind", c.kind}, {"radius", c.radius},
            {"amplitude", c.amplitude}, {"refine", c.refine}, {"layers", c.layers}, {"xmin", c.xmin},
            {"xmax", c.xmax}, {"samples_1d", c.samples_1d}, {"envelope_tol", c.envelope_tol},
            {"samples", c.samples}, {"tol", c.tol}, {"max_iter", c.max_iter}, {"seed", c.seed}};
  return j.dump(2);
}

void validate(const ExperimentConfig& c, const std::string& sub) {
  require(std::isfinite(c.pi), "pi must be finite");
  require(c.tol >= 0.0 && std::isfinite(c.tol), "tol must be nonnegative");
  require(c.max_iter > 0, "max_iter must be positive");
  // Throws for unknown kinds and inadmissible Lamé parameters.
  const DensityModel model = DensityModel::from_name(c.density, c.mu, c.lambda);
  const bool has_hessian = model.kind() != DensityKind::MembraneCubic;

  if (sub == "reduce") {
    require(has_hessian, "reduce needs a density with Lamé parameters");
  } else if (sub == "minimize2d") {
    parse_regime(c.regime);
    check_grid(c, false);
    require(has_hessian, "minimize2d needs a density with Lamé parameters");
  } else if (sub == "minimize3d") {
    check_grid(c, true);
    require(c.h > 0.0 && c.h <= 1.0, "h must lie in (0, 1]");
    require(c.alpha >= 1.0 && std::isfinite(c.alpha), "alpha must be at least 1");
  } else if (sub == "gamma-sweep") {
    check_grid(c, true);
    check_h_list(c.h_list, 1);
    require(c.alpha > 1.0 && std::isfinite(c.alpha), "gamma-sweep needs alpha > 1");
    require(has_hessian, "gamma-sweep needs a density with Lamé parameters");
  } else if (sub == "recovery") {
    require(c.kind == "kirchhoff" || c.kind == "vk", "recovery kind must be kirchhoff or vk");
    check_h_list(c.h_list, 2);
    require(has_hessian, "recovery needs a density with Lamé parameters");
    require(c.refine > 0.0 && std::isfinite(c.refine), "refine must be positive");
    require(c.layers >= 2, "layers must be at least 2");
    if (c.kind == "vk") {
      require(c.alpha >= 2.0 && std::isfinite(c.alpha), "vk recovery needs alpha >= 2");
      require(std::isfinite(c.amplitude), "amplitude must be finite");
    } else {
      require(c.radius != 0.0 && !std::isnan(c.radius), "radius must be nonzero");
    }
  } else if (sub == "membrane-envelope") {
    require(c.pi >= 0.0, "membrane-envelope needs pi >= 0");
    require(c.xmin > 0.0 && c.xmax > c.xmin && std::isfinite(c.xmax), "need 0 < xmin < xmax");
    require(c.samples_1d >= 100, "need at least 100 samples");
    require(c.envelope_tol > 0.0, "envelope_tol must be positive");
  } else if (sub == "check-assumptions") {
    require(c.samples > 0, "samples must be positive");
  } else {
    throw std::invalid_argument("unknown subcommand '" + sub + "'");
  }
}

}  // namespace thinplate::cli
