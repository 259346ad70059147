#include "nvfq/runner.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#ifndef NVFQ_VERSION
#define NVFQ_VERSION "unknown"
#endif

namespace nvfq {

namespace {

constexpr double kPi = std::numbers::pi;

// Decoherence settings used by the figures that fix them.
DecoherenceModel fixed_decoherence(const RunConfig& cfg, double t1_us, double tnu_us) {
  DecoherenceModel d = rates_from_microseconds(t1_us, tnu_us, cfg.bridge());
  return cfg.symmetric_rates ? d.with_symmetric_rates() : d;
}

Qubit2State<double> spin_input(const RunConfig& cfg) {
  return Qubit2State<double>::from_angles(cfg.theta, cfg.varphi);
}

// Tags every table and scalar of `report` so several runs can share one
// output directory.
void tag(ProtocolReport& report, const std::string& prefix, const std::string& suffix) {
  for (auto& t : report.tables) t.name = prefix + t.name + suffix;
  for (auto& s : report.scalars) s.name += suffix;
}

ProtocolReport detect(const RunConfig& cfg, const std::vector<double>& detunings,
                      const DecoherenceModel& dec, const Qubit2State<double>& spin) {
  DetectionOptions opts;
  static_cast<ProtocolOptions&>(opts) = cfg.protocol_options();
  opts.window_periods = cfg.t_max.value_or(4.0);
  opts.samples_per_rabi_period = cfg.samples_per_rabi_period;
  ProtocolReport report = detection_scan(detunings, dec, spin, opts).report;
  if (!cfg.write_raw)
    std::erase_if(report.tables, [](const DataTable& t) { return t.name == "detect_p1"; });
  return report;
}

ProtocolReport rwa_figure(const RunConfig& cfg, double detuning, const std::string& name) {
  const RwaValidation v = validate_rwa(cfg.system(), {detuning}, cfg.t_max.value_or(2.0),
                                       cfg.integrator(), cfg.points);
  ProtocolReport report = v.report;
  DataTable table{name};
  table.index = v.report.tables.front().index;
  table.add_column("exact", v.curves.front().second.first);
  table.add_column("effective", v.curves.front().second.second);
  report.tables = {std::move(table)};
  return report;
}

ProtocolReport rabi_figure(const RunConfig& cfg) {
  const SystemParams sp = cfg.system();
  const HamiltonianModel h = build_rotating_total(sp);
  const JointState<double> psi0 = JointState<double>::product(
      Qubit2State<double>(Vector2c(0, 1)), Qubit2State<double>::from_angles(kPi / 4, 0));
  const double carrier = std::max(std::abs(sp.Omega), std::abs(sp.g));
  const double spacing = 2 * kPi / (carrier * cfg.samples_per_rabi_period);
  const double window = cfg.t_max.value_or(2.0) * 2 * kPi / std::abs(sp.g == 0 ? 1 : sp.g);
  const auto count = static_cast<long>(std::ceil(window / spacing - 1e-9));
  IntegratorConfig icfg = sampled_config(h, cfg.integrator(), spacing, count);
  icfg.store_states = false;
  const Vector4c target = psi0.amplitudes();
  const Observable<Vector4c> p11{"P_11",
                                 [target](double, const Vector4c& y) { return std::norm(target.dot(y)); }};
  const auto traj = evolve_schrodinger(h, psi0, icfg, {p11});

  ProtocolReport report;
  report.protocol = "figure";
  DataTable table{"fig2"};
  for (double t : traj.times) table.index.push_back(t * std::abs(sp.g == 0 ? 1 : sp.g) / (2 * kPi));
  table.add_column("P_11", traj.observable("P_11"));
  report.tables.push_back(std::move(table));
  return report;
}

ProtocolReport memory_grid(const RunConfig& cfg) {
  const DecoherenceModel dec = fixed_decoherence(cfg, 20, 15);
  const ProtocolOptions opts = cfg.protocol_options();
  constexpr int n = 16;
  DataTable table{"fig9a"};
  table.index_name = "alpha";
  std::vector<std::vector<double>> columns(n);
  for (int a = 0; a <= n; ++a) {
    const double alpha = kPi / 2 * a / n;
    table.index.push_back(alpha);
    for (int p = 0; p < n; ++p)
      columns[p].push_back(memory_transfer(alpha, 2 * kPi * p / n, dec, opts).fidelity);
  }
  for (int p = 0; p < n; ++p) table.add_column("phi=" + format_double(2 * kPi * p / n), columns[p]);
  ProtocolReport report;
  report.protocol = "figure";
  report.tables.push_back(std::move(table));
  return report;
}

ProtocolReport memory_curves(const RunConfig& cfg) {
  const ProtocolOptions opts = cfg.protocol_options();
  constexpr int n = 32;
  DataTable table{"fig9b"};
  table.index_name = "alpha";
  ProtocolReport report;
  report.protocol = "figure";
  for (int a = 0; a <= n; ++a) table.index.push_back(kPi / 2 * a / n);
  for (auto [t1, tnu] : {std::pair{10.0, 10.0}, std::pair{20.0, 15.0}}) {
    const DecoherenceModel dec = fixed_decoherence(cfg, t1, tnu);
    std::vector<double> f;
    for (double alpha : table.index) f.push_back(memory_transfer(alpha, cfg.phi, dec, opts).fidelity);
    report.add_scalar("fidelity_alpha=0_" + dec.label, f.front(), opts.model, dec);
    report.add_scalar("fidelity_alpha=pi/2_" + dec.label, f.back(), opts.model, dec);
    table.add_column("fidelity_" + dec.label, std::move(f));
  }
  report.tables.push_back(std::move(table));
  return report;
}

std::vector<ProtocolReport> figure(std::string_view name, const RunConfig& cfg) {
  const Qubit2State<double> zero(Vector2c(1, 0)), one(Vector2c(0, 1));
  const std::vector<double> scan = {0, 0.5, 1, 2};
  const std::string prefix = std::string(name) + "_";
  std::vector<ProtocolReport> out;
  if (name == "fig2") {
    out.push_back(rabi_figure(cfg));
  } else if (name == "fig3-left") {
    out.push_back(rwa_figure(cfg, 0, "fig3-left"));
  } else if (name == "fig3-right") {
    out.push_back(rwa_figure(cfg, 1, "fig3-right"));
  } else if (name == "fig4") {
    out.push_back(detect(cfg, {0}, fixed_decoherence(cfg, 20, 15), one));
    tag(out.back(), prefix, "");
  } else if (name == "fig5") {
    out.push_back(detect(cfg, scan, DecoherenceModel::none(), zero));
    tag(out.back(), prefix, "");
  } else if (name == "fig6") {
    out.push_back(detect(cfg, scan, fixed_decoherence(cfg, 20, 15), zero));
    tag(out.back(), prefix, "");
  } else if (name == "fig7") {
    for (double t1 : {20.0, 10.0, 5.0, 2.0}) {
      out.push_back(detect(cfg, {0}, fixed_decoherence(cfg, t1, 15), zero));
      tag(out.back(), prefix, "_T1=" + format_double(t1) + "us");
    }
  } else if (name == "fig8") {
    const DecoherenceModel dec = fixed_decoherence(cfg, 20, 15);
    out.push_back(detect(cfg, {0}, dec, zero));
    tag(out.back(), prefix, "_spin0");
    out.push_back(detect(cfg, {0}, dec, one));
    tag(out.back(), prefix, "_spin1");
  } else if (name == "fig9a") {
    out.push_back(memory_grid(cfg));
  } else if (name == "fig9b") {
    out.push_back(memory_curves(cfg));
  } else {
    throw std::invalid_argument("unknown figure '" + std::string(name) + "'");
  }
  return out;
}

std::string file_name(const std::string& table) {
  std::string s = table;
  for (char& c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.')) c = '_';
  return s + ".csv";
}

}  // namespace

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names = {"detect", "init", "memory", "rotate",
                                                 "tomo", "validate-rwa", "figure"};
  return names;
}

const std::vector<std::string>& figure_names() {
  static const std::vector<std::string> names = {"fig2", "fig3-left", "fig3-right", "fig4",
                                                 "fig5", "fig6",      "fig7",       "fig8",
                                                 "fig9a", "fig9b"};
  return names;
}

std::vector<ProtocolReport> execute(std::string_view subcommand, std::string_view figure_name,
                                    const RunConfig& cfg, int workers) {
  const DecoherenceModel dec = cfg.decoherence();
  const ProtocolOptions opts = cfg.protocol_options();
  if (subcommand == "detect") return {detect(cfg, cfg.detunings, dec, spin_input(cfg))};
  if (subcommand == "init")
    return {initialization_average(dec, cfg.samples, cfg.iterations, cfg.seed, opts, workers).report};
  if (subcommand == "memory") return {memory_transfer(cfg.alpha, cfg.phi, dec, opts).report};
  if (subcommand == "rotate") {
    const double idle = cfg.idle_time * 2 * kPi / std::abs(cfg.g == 0 ? 1 : cfg.g);
    return {rotate_spin(spin_input(cfg), {cfg.beta, cfg.chi}, dec, opts, idle).report};
  }
  if (subcommand == "tomo") {
    TomographyOptions topts;
    static_cast<ProtocolOptions&>(topts) = opts;
    topts.shots = cfg.shots;
    topts.project_to_ball = cfg.project_bloch;
    SeedStream rng(cfg.seed);
    ProtocolReport single = tomography(spin_input(cfg).density(), dec, rng, topts).report;
    ProtocolReport average = tomography_average(dec, cfg.samples, cfg.seed, topts, workers).report;
    tag(average, "", "_haar");
    return {single, average};
  }
  if (subcommand == "validate-rwa")
    return {validate_rwa(cfg.system(), {0, cfg.g}, cfg.t_max.value_or(2.0), cfg.integrator(),
                         cfg.points)
                .report};
  if (subcommand == "figure") return figure(figure_name, cfg);
  throw std::invalid_argument("unknown subcommand '" + std::string(subcommand) + "'");
}

std::string to_csv(const DataTable& table) {
  std::string out = table.index_name;
  for (const auto& [name, values] : table.columns) out += "," + name;
  out += "\n";
  for (std::size_t r = 0; r < table.index.size(); ++r) {
    out += format_double(table.index[r]);
    for (const auto& [name, values] : table.columns) out += "," + format_double(values[r]);
    out += "\n";
  }
  return out;
}

RunOutcome run(std::string_view subcommand, std::string_view figure_name, const RunConfig& config,
               const RunOptions& options) {
  const std::vector<ProtocolReport> reports =
      execute(subcommand, figure_name, config, options.workers);

  namespace fs = std::filesystem;
  fs::create_directories(options.out_dir);
  RunOutcome outcome;
  auto write = [&](const std::string& name, const std::string& text) {
    std::ofstream f(fs::path(options.out_dir) / name, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + name);
    f << text;
    outcome.files.push_back(name);
  };

  using json = nlohmann::ordered_json;
  json manifest;
  manifest["version"] = NVFQ_VERSION;
  manifest["command"] = std::string(subcommand);
  if (subcommand == "figure") manifest["figure"] = std::string(figure_name);
  manifest["seed"] = config.seed;
  json resolved = json::object();
  for (const auto& key : RunConfig::keys()) resolved[key] = config.get(key);
  manifest["config"] = resolved;
  manifest["decoherence"] = config.decoherence().label;

  json scalars = json::array(), parameters = json::object(), warnings = json::array();
  for (const auto& report : reports) {
    for (const auto& [k, v] : report.parameters) parameters[k] = v;
    for (const auto& w : report.warnings) warnings.push_back(w);
    for (const auto& s : report.scalars)
      scalars.push_back({{"name", s.name},
                         {"value", s.value},
                         {"model", to_string(s.model)},
                         {"decoherence", s.decoherence}});
    for (const auto& t : report.tables) write(file_name(t.name), to_csv(t));
  }
  manifest["parameters"] = parameters;
  manifest["scalars"] = scalars;
  manifest["warnings"] = warnings;
  manifest["files"] = outcome.files;
  write("run.json", manifest.dump(2) + "\n");
  outcome.manifest = std::move(manifest);
  return outcome;
}

}  // namespace nvfq
