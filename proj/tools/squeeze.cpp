// squeeze: command-line front end for the spin-squeezing engines.
//
// Exit codes: 0 success, 2 configuration error, 3 numerical failure, 1 other.
// Failures print a JSON object {"error": kind, "message": ..., ...} on stderr.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include "squeeze/commands.hpp"
#include "squeeze/errors.hpp"
#include "squeeze/io.hpp"

namespace {

using squeeze::io::json;

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

const char* const kParamFields[] = {"rabi_frequency", "cavity_coupling",     "detuning",
                                    "two_photon_detuning", "atomic_decay",   "cavity_decay",
                                    "atom_number",    "rotation_rate",       "interaction_time"};

struct ParamSources {
  std::string config;
  std::map<std::string, std::string> overrides;

  void add_options(CLI::App* cmd) {
    cmd->add_option("-c,--config", config, "JSON parameter file");
    for (const char* field : kParamFields) {
      std::string flag = std::string("--") + field;
      for (auto& ch : flag)
        if (ch == '_') ch = '-';
      cmd->add_option(flag, overrides[field], std::string("override ") + field +
                                                  " (number or quantity such as 2pi*100kHz)");
    }
  }

  // Config file first, then command-line overrides; validated as one object.
  squeeze::PhysicalParams resolve() const {
    json j = json::object();
    if (!config.empty()) {
      j = squeeze::io::parse_json_text(read_file(config), config);
      if (!j.is_object()) throw squeeze::ConfigError(config + ": top level must be a JSON object");
    }
    for (const auto& [field, value] : overrides)
      if (!value.empty()) j[field] = value;
    return squeeze::io::params_from_json(j);
  }

  static std::string read_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is)
      throw squeeze::ConfigError("cannot read config '" + path + "'", {{"config", "unreadable"}});
    return {std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>()};
  }
};

int report(const char* kind, const std::string& message, json extra, int code) {
  json j = {{"error", kind}, {"message", message}};
  j.update(extra);
  std::cerr << j.dump() << '\n';
  return code;
}

json fields_json(const squeeze::ConfigError& e) {
  json fields = json::array();
  for (const auto& f : e.fields()) fields.push_back({{"field", f.name}, {"message", f.message}});
  return {{"fields", fields}};
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cavity-mediated spin squeezing: parameter derivation, simulation, sweeps, figures"};
  app.require_subcommand(1);

  ParamSources derive_src, sim_src;
  std::string derive_out;
  auto* derive = app.add_subcommand("derive-params", "effective parameters and regime flags");
  derive_src.add_options(derive);
  derive->add_option("-o,--output", derive_out, "also write effective_params.json here");

  squeeze::cli::SimulateOptions sim;
  std::string engine, sim_protocol = "oat", sim_out;
  auto* simulate = app.add_subcommand("simulate", "time evolution with one engine");
  sim_src.add_options(simulate);
  simulate->add_option("--engine", engine, "dicke, gaussian or meanfield")->required();
  simulate->add_option("--protocol", sim_protocol, "oat or tat")->capture_default_str();
  simulate->add_option("-o,--output", sim_out, "output directory")->required();
  simulate->add_option("--steps", sim.steps, "time samples after t = 0")->capture_default_str();
  simulate->add_flag("--keep-linear", sim.keep_linear, "dicke: keep the linear Sz term");
  simulate->add_flag("--rates", sim.rates, "meanfield: extract effective rates (rates.json)");
  simulate->add_option("--jobs", sim.jobs, "worker threads")->capture_default_str();

  std::string sweep_protocol, alpha_range, eta0_range, sweep_out;
  int sweep_jobs = 1;
  auto* sweep = app.add_subcommand("sweep", "closed-form xi^2 over an (alpha, eta0) grid");
  sweep->add_option("--protocol", sweep_protocol, "oat or tat (default: both)");
  sweep->add_option("--alpha", alpha_range, "start:stop:step")->required();
  sweep->add_option("--eta0", eta0_range, "start:stop:step")->required();
  sweep->add_option("-o,--output", sweep_out, "write sweep.csv here instead of stdout");
  sweep->add_option("--jobs", sweep_jobs, "worker threads")->capture_default_str();

  std::string figure_id, figure_out;
  int figure_jobs = 1;
  auto* figure = app.add_subcommand("figure", "reproduce a figure panel (CSV + SVG)");
  figure->add_option("id", figure_id, "2a, 2b or 2c")->required();
  figure->add_option("-o,--output", figure_out, "output directory")->required();
  figure->add_option("--jobs", figure_jobs, "worker threads")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report("config", e.what(), json::object(), kExitConfig);
  }

  try {
    if (derive->parsed()) {
      const json report_json = squeeze::cli::run_derive_params(derive_src.resolve());
      std::cout << squeeze::io::dump(report_json);
      if (!derive_out.empty()) {
        squeeze::io::ensure_directory(derive_out);
        squeeze::io::write_text(std::filesystem::path(derive_out) / "effective_params.json",
                                squeeze::io::dump(report_json));
      }
    } else if (simulate->parsed()) {
      sim.engine = squeeze::cli::engine_from_string(engine);
      sim.protocol = squeeze::protocol_from_string(sim_protocol);
      const auto out = squeeze::cli::run_simulate(sim_src.resolve(), sim, sim_out);
      for (const auto& f : out.files) std::cout << f.string() << '\n';
    } else if (sweep->parsed()) {
      std::vector<squeeze::Protocol> protocols;
      if (sweep_protocol.empty())
        protocols = {squeeze::Protocol::OAT, squeeze::Protocol::TAT};
      else
        protocols = {squeeze::protocol_from_string(sweep_protocol)};
      const auto csv = squeeze::cli::run_sweep(protocols,
                                               squeeze::cli::parse_range(alpha_range, "alpha"),
                                               squeeze::cli::parse_range(eta0_range, "eta0"),
                                               sweep_jobs);
      if (sweep_out.empty()) {
        std::cout << csv;
      } else {
        squeeze::io::ensure_directory(sweep_out);
        const auto file = std::filesystem::path(sweep_out) / "sweep.csv";
        squeeze::io::write_text(file, csv);
        std::cout << file.string() << '\n';
      }
    } else if (figure->parsed()) {
      for (const auto& f : squeeze::cli::run_figure(figure_id, figure_out, figure_jobs))
        std::cout << f.string() << '\n';
    }
  } catch (const squeeze::ConfigError& e) {
    return report("config", e.what(), fields_json(e), kExitConfig);
  } catch (const squeeze::NumericalError& e) {
    return report("numerical", e.what(), {{"estimate", squeeze::io::rounded(e.estimate())}},
                  kExitNumerical);
  } catch (const std::exception& e) {
    return report("internal", e.what(), json::object(), 1);
  }
  return 0;
}
