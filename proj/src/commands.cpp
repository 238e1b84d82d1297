#include "squeeze/commands.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "squeeze/dicke.hpp"
#include "squeeze/errors.hpp"
#include "squeeze/gaussian.hpp"
#include "squeeze/meanfield.hpp"
#include "squeeze/parallel.hpp"
#include "squeeze/svg.hpp"
#include "squeeze/units.hpp"

namespace squeeze::cli {

using io::json;
using io::rounded;
namespace fs = std::filesystem;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// JSON has no NaN; degenerate values become null.
json number_or_null(double v) { return std::isfinite(v) ? json(rounded(v)) : json(nullptr); }

std::vector<double> linspace(double lo, double hi, int steps) {
  std::vector<double> t(static_cast<std::size_t>(steps) + 1);
  for (int i = 0; i <= steps; ++i) t[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / steps;
  return t;
}

json warnings_for(const EffectiveParams& e) {
  json w = json::array();
  if (auto cross = gaussian::cavity_cross_term_warning(e); !cross.empty()) w.push_back(cross);
  for (const auto& line : describe_flags(e.flags))
    if (line.rfind("WARN", 0) == 0) w.push_back("regime flag violated: " + line.substr(6));
  return w;
}

void check_steps(int steps) {
  if (steps < 1 || steps > 10'000'000)
    throw ConfigError("steps must be in [1, 1e7]", {{"steps", "out of range"}});
}

SimulateOutput simulate_gaussian(const PhysicalParams& p, const SimulateOptions& opt,
                                 const fs::path& dir) {
  const EffectiveParams e = derive_effective(p);
  const auto drift = gaussian::DriftSpec::from_effective(e, opt.protocol);
  const auto noise = gaussian::NoiseSpec::optical_pumping(e.eta);
  const auto times = linspace(0.0, p.interaction_time, opt.steps);
  const auto states = gaussian::propagate_series(gaussian::GaussianSpinState::css(), drift, noise,
                                                 times);

  io::CsvTable csv({"t", "alpha", "mean_x", "mean_p", "cov_xx", "cov_xp", "cov_pp",
                    "sx_fraction", "xi2", "dB", "theta"});
  for (std::size_t i = 0; i < states.size(); ++i) {
    const auto& s = states[i];
    const auto r = gaussian::squeezing(s);
    const double frac = p.interaction_time > 0 ? times[i] / p.interaction_time : 0.0;
    csv.add_row(std::vector<double>{times[i], e.alpha * frac, s.mean[0], s.mean[1], s.cov(0, 0),
                                    s.cov(0, 1), s.cov(1, 1), s.sx_fraction, r.xi2, r.db,
                                    r.theta});
  }
  const auto final_result = gaussian::squeezing(states.back());
  json result = {{"engine", "gaussian"},
                 {"protocol", to_string(opt.protocol)},
                 {"effective", io::to_json(e)},
                 {"final", io::to_json(final_result)},
                 {"closed_form", io::to_json(gaussian::xi2_noisy(opt.protocol, e.alpha, e.eta0))},
                 {"warnings", warnings_for(e)}};
  SimulateOutput out{result, {dir / "timeseries.csv", dir / "result.json"}};
  csv.write(out.files[0]);
  io::write_text(out.files[1], io::dump(result));
  return out;
}

SimulateOutput simulate_dicke(const PhysicalParams& p, const SimulateOptions& opt,
                              const fs::path& dir) {
  const EffectiveParams e = derive_effective(p);
  const auto initial = dicke::css_state(p.atom_number);
  const double S = e.spin;
  dicke::HamiltonianSpec h;
  if (opt.protocol == Protocol::OAT)
    h = opt.keep_linear ? dicke::HamiltonianSpec::oat(e.kappa0, e.chi0)
                        : dicke::HamiltonianSpec::ideal_oat(e.kappa0);
  else
    h = opt.keep_linear ? dicke::HamiltonianSpec::tat(e.kappa0, e.chi0, S)
                        : dicke::HamiltonianSpec::ideal_tat(e.kappa0, S);
  const dicke::DickePropagator prop(h, p.atom_number);
  const auto times = linspace(0.0, p.interaction_time, opt.steps);

  struct Row {
    dicke::SpinMoments m;
    SqueezingResult r;
    bool degenerate = false;
  };
  std::vector<Row> rows(times.size());
  parallel_for(times.size(), opt.jobs, [&](std::size_t i) {
    const auto s = prop.evolve(initial, times[i]);
    rows[i].m = dicke::moments(s);
    try {
      rows[i].r = dicke::wineland_xi2(s);
    } catch (const DegeneratePolarization&) {
      rows[i].degenerate = true;
    }
  });

  io::CsvTable csv({"t", "alpha", "sx", "sy", "sz", "s2", "xi2", "dB", "theta"});
  std::size_t best = 0;
  double best_xi2 = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& row = rows[i];
    const double alpha = 2.0 * S * e.kappa0 * times[i];
    const double xi2 = row.degenerate ? kNaN : row.r.xi2;
    csv.add_row(std::vector<double>{times[i], alpha, row.m.mean[0], row.m.mean[1], row.m.mean[2],
                                    row.m.total_spin_sq, xi2,
                                    row.degenerate ? kNaN : row.r.db,
                                    row.degenerate ? kNaN : row.r.theta});
    if (!row.degenerate && row.r.xi2 < best_xi2) {
      best_xi2 = row.r.xi2;
      best = i;
    }
  }

  const double best_alpha = 2.0 * S * e.kappa0 * times[best];
  const auto prediction = gaussian::xi2_noisy(opt.protocol, best_alpha, 0.0);
  json warnings = warnings_for(e);
  if (e.eta0 > 0.0)
    warnings.push_back("the dicke engine is unitary: optical pumping (eta0 = " +
                       io::format_number(e.eta0) + ") is not included");
  json result = {
      {"engine", "dicke"},
      {"protocol", to_string(opt.protocol)},
      {"keep_linear", opt.keep_linear},
      {"effective", io::to_json(e)},
      {"final", rows.back().degenerate ? json(nullptr) : io::to_json(rows.back().r)},
      {"minimum",
       {{"t", rounded(times[best])},
        {"alpha", rounded(best_alpha)},
        {"xi2", rounded(rows[best].r.xi2)},
        {"dB", rounded(rows[best].r.db)},
        {"theta", rounded(rows[best].r.theta)}}},
      {"gaussian_prediction",
       {{"alpha", rounded(best_alpha)}, {"xi2", rounded(prediction.xi2)},
        {"dB", rounded(prediction.db)}}},
      {"warnings", warnings}};
  SimulateOutput out{result, {dir / "timeseries.csv", dir / "result.json"}};
  csv.write(out.files[0]);
  io::write_text(out.files[1], io::dump(result));
  return out;
}

json state_json(const meanfield::AtomFieldState& s) {
  auto c = [](std::complex<double> z) { return json::array({rounded(z.real()), rounded(z.imag())}); };
  return {{"t", rounded(s.t)},           {"sigma11", rounded(s.sigma11)},
          {"sigma22", rounded(s.sigma22)}, {"sigma33", rounded(s.sigma33)},
          {"sigma12", c(s.sigma12)},      {"sigma13", c(s.sigma13)},
          {"sigma23", c(s.sigma23)},      {"epsilon", c(s.epsilon)}};
}

SimulateOutput simulate_meanfield(const PhysicalParams& p, const SimulateOptions& opt,
                                  const fs::path& dir) {
  const EffectiveParams e = derive_effective(p);
  meanfield::MBConfig cfg;
  cfg.params = p;
  cfg.include_decay = p.atomic_decay > 0.0 || p.cavity_decay > 0.0;
  json warnings = warnings_for(e);
  if (opt.protocol == Protocol::TAT && cfg.params.rotation_rate == 0.0) {
    cfg.params.rotation_rate = e.spin * e.kappa0;
    warnings.push_back("tat protocol: rotation_rate set to S*kappa0 = " +
                       io::format_number(cfg.params.rotation_rate));
  }
  cfg.include_rotation = cfg.params.rotation_rate != 0.0;

  const auto series = meanfield::integrate_mb(cfg, p.interaction_time, opt.steps);
  io::CsvTable csv({"t", "sigma11", "sigma22", "sigma33", "re_sigma12", "im_sigma12",
                    "re_sigma13", "im_sigma13", "re_sigma23", "im_sigma23", "re_epsilon",
                    "im_epsilon", "sz", "population"});
  double drift = 0.0;
  const double n0 = series.front().population();
  for (const auto& s : series) {
    csv.add_row(std::vector<double>{s.t, s.sigma11, s.sigma22, s.sigma33, s.sigma12.real(),
                                    s.sigma12.imag(), s.sigma13.real(), s.sigma13.imag(),
                                    s.sigma23.real(), s.sigma23.imag(), s.epsilon.real(),
                                    s.epsilon.imag(), s.sz(), s.population()});
    drift = std::max(drift, std::abs(s.population() - n0));
  }

  json rate = nullptr;
  if (series.size() >= 10) {
    try {
      rate = number_or_null(meanfield::rotation_rate(series));
    } catch (const NumericalError& err) {
      warnings.push_back(std::string("rotation rate unavailable: ") + err.what());
    }
  }
  const auto res = meanfield::adiabatic_residuals(series, cfg.params);
  json result = {{"engine", "meanfield"},
                 {"include_decay", cfg.include_decay},
                 {"include_rotation", cfg.include_rotation},
                 {"effective", io::to_json(e)},
                 {"initial", state_json(series.front())},
                 {"final", state_json(series.back())},
                 {"population_drift", rounded(drift / static_cast<double>(p.atom_number))},
                 {"rotation_rate", rate},
                 {"adiabatic_residuals",
                  {{"sigma13", number_or_null(res.res13)},
                   {"sigma23", number_or_null(res.res23)},
                   {"epsilon", number_or_null(res.res_eps)}}},
                 {"warnings", warnings}};
  SimulateOutput out{result, {dir / "timeseries.csv", dir / "result.json"}};
  csv.write(out.files[0]);
  io::write_text(out.files[1], io::dump(result));

  if (opt.rates) {
    const auto r = meanfield::extract_rates(cfg);
    json rates = {{"chi_eff", rounded(r.chi_eff)},   {"chi0", rounded(r.chi0)},
                  {"chi_rel", rounded(r.chi_rel)},   {"kappa_eff", rounded(r.kappa_eff)},
                  {"kappa0", rounded(r.kappa0)},     {"kappa_rel", rounded(r.kappa_rel)},
                  {"eta_eff", rounded(r.eta_eff)},   {"eta", rounded(r.eta)},
                  {"eta_rel", number_or_null(r.eta_rel)},
                  {"sz", {rounded(r.sz[0]), rounded(r.sz[1])}},
                  {"rate", {rounded(r.rate[0]), rounded(r.rate[1])}}};
    out.files.push_back(dir / "rates.json");
    io::write_text(out.files.back(), io::dump(rates));
    out.result["rates"] = rates;
  }
  return out;
}

const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::vector<fs::path> figure_2a(const fs::path& dir, int jobs) {
  const auto alphas = parse_range("0:8:0.1", "alpha");
  const std::vector<double> eta0s = {0.0, 0.05, 0.1, 0.2};
  const std::vector<Protocol> protocols = {Protocol::OAT, Protocol::TAT};
  const auto rows = gaussian::squeeze_sweep(protocols, alphas, eta0s, jobs);

  // var_dB is the plain quadrature variance 2(ΔX)², which starts at 0 dB for
  // every η₀; dB includes the loss of polarization and is what is plotted.
  io::CsvTable csv({"protocol", "eta0", "alpha", "xi2", "dB", "var_dB"});
  svg::LinePlot plot{"Squeezing vs twisting strength", "alpha", "squeezing (dB)", false};
  std::size_t k = 0;
  for (auto proto : protocols)
    for (double eta0 : eta0s) {
      svg::Series ser;
      ser.label = std::string(to_string(proto)) + " eta0=" + io::format_number(eta0);
      ser.marker = proto == Protocol::OAT ? svg::Marker::Diamond : svg::Marker::Circle;
      ser.color = kColors[k++ % std::size(kColors)];
      ser.dashed = proto == Protocol::TAT;
      plot.series.push_back(ser);
    }
  for (const auto& row : rows) {
    const std::size_t pi = row.protocol == Protocol::OAT ? 0 : 1;
    const auto ei = static_cast<std::size_t>(
        std::find(eta0s.begin(), eta0s.end(), row.eta0) - eta0s.begin());
    auto& ser = plot.series[pi * eta0s.size() + ei];
    ser.x.push_back(row.alpha);
    ser.y.push_back(row.result.db);
    csv.add_row({to_string(row.protocol), io::format_number(row.eta0),
                 io::format_number(row.alpha), io::format_number(row.result.xi2),
                 io::format_number(row.result.db), io::format_number(to_db(row.result.var_min))});
  }
  const std::vector<fs::path> files = {dir / "figure_2a.csv", dir / "figure_2a.svg"};
  csv.write(files[0]);
  io::write_text(files[1], plot.render());
  return files;
}

std::vector<fs::path> figure_2b(const fs::path& dir, int jobs) {
  const auto alphas = parse_range("0:8:0.1", "alpha");
  const auto eta0s = parse_range("0:0.3:0.01", "eta0");
  const auto rows = gaussian::difference_surface(alphas, eta0s, jobs);
  io::CsvTable csv({"alpha", "eta0", "xi2_oat", "xi2_tat", "difference"});
  svg::Heatmap map{"xi2(OAT) - xi2(TAT)", "alpha", "eta0", alphas, eta0s, {}};
  map.z.reserve(rows.size());
  // Rows arrive η₀-major, α-minor, which is the heatmap's row-major layout.
  for (const auto& r : rows) {
    csv.add_row(std::vector<double>{r.alpha, r.eta0, r.xi2_oat, r.xi2_tat, r.difference});
    map.z.push_back(r.difference);
  }
  const std::vector<fs::path> files = {dir / "figure_2b.csv", dir / "figure_2b.svg"};
  csv.write(files[0]);
  io::write_text(files[1], map.render());
  return files;
}

std::vector<fs::path> figure_2c(const fs::path& dir, int jobs) {
  const double r0 = 0.1;
  const auto grid = figure_2c_grid();
  std::vector<gaussian::BudgetOptimum> oat(grid.size()), tat(grid.size());
  parallel_for(grid.size(), jobs, [&](std::size_t i) {
    oat[i] = gaussian::optimize_over_eta0(grid[i], r0, Protocol::OAT);
    tat[i] = gaussian::optimize_over_eta0(grid[i], r0, Protocol::TAT);
  });
  io::CsvTable csv({"d_c", "r0", "eta0_oat", "xi2_oat", "dB_oat", "eta0_tat", "xi2_tat", "dB_tat"});
  svg::LinePlot plot{"Squeezing optimized over eta0 (r0 = 0.1)", "cavity optical depth d_c",
                     "squeezing (dB)", true};
  svg::Series so{"OAT", {}, {}, svg::Marker::Diamond, kColors[0], false};
  svg::Series st{"TAT", {}, {}, svg::Marker::Circle, kColors[1], true};
  for (std::size_t i = 0; i < grid.size(); ++i) {
    csv.add_row(std::vector<double>{grid[i], r0, oat[i].eta0, oat[i].xi2, oat[i].db, tat[i].eta0,
                                    tat[i].xi2, tat[i].db});
    so.x.push_back(grid[i]);
    so.y.push_back(oat[i].db);
    st.x.push_back(grid[i]);
    st.y.push_back(tat[i].db);
  }
  plot.series = {so, st};
  const std::vector<fs::path> files = {dir / "figure_2c.csv", dir / "figure_2c.svg"};
  csv.write(files[0]);
  io::write_text(files[1], plot.render());
  return files;
}

} // namespace

Engine engine_from_string(const std::string& s) {
  if (s == "dicke") return Engine::Dicke;
  if (s == "gaussian") return Engine::Gaussian;
  if (s == "meanfield") return Engine::Meanfield;
  throw ConfigError("unknown engine '" + s + "'", {{"engine", "expected dicke, gaussian or meanfield"}});
}

const char* to_string(Engine e) {
  switch (e) {
  case Engine::Dicke: return "dicke";
  case Engine::Gaussian: return "gaussian";
  case Engine::Meanfield: return "meanfield";
  }
  return "?";
}

std::vector<double> parse_range(const std::string& text, const std::string& field) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  for (std::size_t pos; (pos = text.find(':', start)) != std::string::npos; start = pos + 1)
    parts.push_back(text.substr(start, pos - start));
  parts.push_back(text.substr(start));

  auto value = [&](const std::string& s) {
    try {
      return parse_quantity(s);
    } catch (const ConfigError& e) {
      throw ConfigError(field + ": " + e.what(), {{field, e.what()}});
    }
  };
  if (parts.size() == 1) return {value(parts[0])};
  if (parts.size() != 3)
    throw ConfigError(field + ": expected 'start:stop:step'", {{field, "malformed range"}});
  const double a = value(parts[0]), b = value(parts[1]), step = value(parts[2]);
  if (!(step > 0.0) || !(b >= a))
    throw ConfigError(field + ": need step > 0 and stop >= start", {{field, "empty range"}});
  const double count = std::floor((b - a) / step + 1e-9) + 1.0;
  if (count > 1e6) throw ConfigError(field + ": more than 1e6 points", {{field, "range too large"}});
  std::vector<double> out(static_cast<std::size_t>(count));
  for (std::size_t i = 0; i < out.size(); ++i) {
    // Computed from the index so that e.g. 0:0.3:0.1 yields exactly 0.3 at the end.
    const double v = a + static_cast<double>(i) * step;
    out[i] = std::abs(v - b) < 1e-9 * step ? b : v;
  }
  return out;
}

json run_derive_params(const PhysicalParams& p) {
  const EffectiveParams e = derive_effective(p);
  return {{"params", io::to_json(p)},
          {"effective", io::to_json(e)},
          {"regime_summary", describe_flags(e.flags)},
          {"all_flags_ok", e.flags.all()},
          {"warnings", warnings_for(e)}};
}

SimulateOutput run_simulate(const PhysicalParams& p, const SimulateOptions& opt,
                            const fs::path& out_dir) {
  validate(p);
  check_steps(opt.steps);
  io::ensure_directory(out_dir);
  switch (opt.engine) {
  case Engine::Gaussian: return simulate_gaussian(p, opt, out_dir);
  case Engine::Dicke: return simulate_dicke(p, opt, out_dir);
  case Engine::Meanfield: return simulate_meanfield(p, opt, out_dir);
  }
  throw ConfigError("unknown engine");
}

std::string run_sweep(const std::vector<Protocol>& protocols, const std::vector<double>& alphas,
                      const std::vector<double>& eta0s, int jobs) {
  const auto rows = gaussian::squeeze_sweep(protocols, alphas, eta0s, jobs);
  io::CsvTable csv({"protocol", "alpha", "eta0", "xi2", "dB", "theta"});
  for (const auto& r : rows)
    csv.add_row({to_string(r.protocol), io::format_number(r.alpha), io::format_number(r.eta0),
                 io::format_number(r.result.xi2), io::format_number(r.result.db),
                 io::format_number(r.result.theta)});
  return csv.str();
}

std::vector<double> figure_2c_grid() {
  std::vector<double> grid;
  for (int i = 0; i <= 60; ++i) grid.push_back(std::pow(10.0, 1.0 + 3.0 * i / 60.0));
  grid.push_back(6000.0 / std::numbers::pi);
  std::sort(grid.begin(), grid.end());
  return grid;
}

std::vector<fs::path> run_figure(const std::string& figure_id, const fs::path& out_dir, int jobs) {
  if (figure_id != "2a" && figure_id != "2b" && figure_id != "2c")
    throw ConfigError("unknown figure '" + figure_id + "'", {{"figure_id", "expected 2a, 2b or 2c"}});
  io::ensure_directory(out_dir);
  if (figure_id == "2a") return figure_2a(out_dir, jobs);
  if (figure_id == "2b") return figure_2b(out_dir, jobs);
  return figure_2c(out_dir, jobs);
}

} // namespace squeeze::cli
