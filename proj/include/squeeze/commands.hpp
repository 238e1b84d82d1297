#pragma once

// Implementation of the `squeeze` subcommands, usable without the CLI parser.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "squeeze/io.hpp"
#include "squeeze/params.hpp"
#include "squeeze/squeezing.hpp"

namespace squeeze::cli {

enum class Engine { Dicke, Gaussian, Meanfield };

Engine engine_from_string(const std::string& s);
const char* to_string(Engine e);

struct SimulateOptions {
  Engine engine = Engine::Gaussian;
  Protocol protocol = Protocol::OAT;
  int steps = 200;          // number of time samples after t = 0
  bool keep_linear = false; // dicke: keep the −(χ₀+κ₀)Sz term
  bool rates = false;       // meanfield: also run the two-tilt rate extraction
  int jobs = 1;
};

// "a:b:step" (inclusive of b up to rounding) or a single number.
std::vector<double> parse_range(const std::string& text, const std::string& field);

// Effective parameters, regime flags and warnings.
io::json run_derive_params(const PhysicalParams& p);

struct SimulateOutput {
  io::json result;
  std::vector<std::filesystem::path> files;
};

SimulateOutput run_simulate(const PhysicalParams& p, const SimulateOptions& opt,
                            const std::filesystem::path& out_dir);

// CSV text with header protocol,alpha,eta0,xi2,dB,theta; rows ordered
// by protocol, then η₀, then α.
std::string run_sweep(const std::vector<Protocol>& protocols, const std::vector<double>& alphas,
                      const std::vector<double>& eta0s, int jobs);

// Writes figure_<id>.csv and figure_<id>.svg into out_dir.
std::vector<std::filesystem::path> run_figure(const std::string& figure_id,
                                              const std::filesystem::path& out_dir, int jobs);

// Grid used by figure 2c: log-spaced on [10, 1e4] plus 6000/π.
std::vector<double> figure_2c_grid();

} // namespace squeeze::cli
