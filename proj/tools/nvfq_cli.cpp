// Command-line front end.
//
//   nvfq <subcommand> [--config PATH] [--set key=value ...] [--seed N]
//        [--workers N] [--out DIR]
//   nvfq figure <name> [...]
//
// Exit status: 0 success, 1 other errors, 2 unknown configuration key,
// 3 integrator invariant breach.
#include "nvfq/runner.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <iostream>
#include <numbers>

int main(int argc, char** argv) {
  CLI::App app{"NV spin / dressed flux qubit simulator"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed;
  int workers = 1;
  std::string out_dir = "out";
  std::string figure_name;
  bool print_config = false;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "flat key = value config file");
    sub->add_option("--set", overrides, "override one key (key=value), repeatable");
    sub->add_option("--seed", seed, "random seed");
    sub->add_option("--workers", workers, "worker threads for sample fan-out")
        ->check(CLI::PositiveNumber);
    sub->add_option("--out", out_dir, "output directory");
    sub->add_flag("--print-config", print_config, "print the resolved config and exit");
  };
  for (const auto& name : nvfq::subcommands()) {
    CLI::App* sub = app.add_subcommand(name);
    add_common(sub);
    if (name == "figure")
      sub->add_option("name", figure_name, "figure key")
          ->required()
          ->check(CLI::IsMember(nvfq::figure_names()));
  }

  CLI11_PARSE(app, argc, argv);
  const std::string command = app.get_subcommands().front()->get_name();

  try {
    nvfq::RunConfig config = config_path.empty() ? nvfq::RunConfig{} : nvfq::RunConfig::load(config_path);
    for (const auto& assignment : overrides) {
      const auto eq = assignment.find('=');
      if (eq == std::string::npos)
        throw nvfq::ConfigValueError("--set expects key=value, got '" + assignment + "'");
      config.set(assignment.substr(0, eq), assignment.substr(eq + 1));
    }
    if (seed) config.seed = *seed;
    if (print_config) {
      std::cout << config.serialize();
      return 0;
    }

    const auto outcome = nvfq::run(command, figure_name, config, {out_dir, workers});
    for (const auto& w : outcome.manifest["warnings"]) std::cerr << "warning: " << w.get<std::string>() << "\n";
    for (const auto& s : outcome.manifest["scalars"]) {
      std::cout << s["name"].get<std::string>() << " = ";
      if (s["value"].is_null()) std::cout << "nan\n";
      else std::cout << nvfq::format_double(s["value"].get<double>()) << "\n";
    }
    std::cout << "wrote " << outcome.files.size() << " files to " << out_dir << "\n";
    return 0;
  } catch (const nvfq::UnknownKeyError& e) {
    std::cerr << "error: unknown configuration key '" << e.key() << "'\n";
    return 2;
  } catch (const nvfq::IntegrationError& e) {
    std::cerr << "error: integrator invariant breached at t = " << e.time() << " /g ("
              << e.time() / (2 * std::numbers::pi) << " coupling periods): " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
