// transpin: spin maps, observable reports and the verification suite.
//
//   transpin spinmap --config run.json [--output map.csv] [--nx 81] ...
//   transpin report  --config run.json [--output report.json]
//   transpin verify  [filter]
//   transpin commutators [--output table.json]
//
// Every config field can be overridden with its kebab-case flag.
// Exit codes: 0 success, 1 config error, 2 I/O error, 3 verification failure.

#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "transpin/cli.hpp"
#include "transpin/errors.hpp"
#include "transpin/kernels.hpp"

namespace {

using namespace transpin;
using namespace transpin::cli;

struct ConfigOptions {
  std::string config_path;
  std::map<std::string, std::string> values;
};

void add_config_options(CLI::App* cmd, ConfigOptions& opts) {
  cmd->add_option("--config", opts.config_path, "JSON run configuration");
  for (const auto& flag : override_flags()) {
    cmd->add_option_function<std::string>(
        "--" + flag, [&opts, flag](const std::string& v) { opts.values[flag] = v; },
        "override the '" + flag + "' config field");
  }
}

RunConfig resolve_config(const ConfigOptions& opts) {
  json doc = opts.config_path.empty() ? json::object() : load_config_file(opts.config_path);
  std::vector<FlagOverride> overrides;
  for (const auto& [flag, value] : opts.values) overrides.push_back({flag, value});
  apply_overrides(doc, overrides);
  return config_from_json(doc);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Transverse spin, energy and effective mass of guided and surface waves"};
  app.require_subcommand(1);

  ConfigOptions spinmap_opts;
  auto* spinmap = app.add_subcommand("spinmap", "Write the time-averaged spin density on a grid as CSV");
  add_config_options(spinmap, spinmap_opts);

  ConfigOptions report_opts;
  auto* report = app.add_subcommand("report", "Write totals, quantization and mass identities as JSON");
  add_config_options(report, report_opts);

  std::string filter;
  auto* verify = app.add_subcommand("verify", "Run the invariant catalogue and print a pass/fail table");
  verify->add_option("filter", filter, "only run checks whose name contains this text");

  std::string table_output;
  auto* commutators =
      app.add_subcommand("commutators", "Write the spin-tensor commutator table as JSON");
  commutators->add_option("--output", table_output, "output path (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    kernels::set_thread_cap(kernels::thread_cap_from_env());

    if (spinmap->parsed()) {
      const RunConfig cfg = resolve_config(spinmap_opts);
      write_output(cfg.output, spin_map_csv(spin_map(cfg)), std::cout);
    } else if (report->parsed()) {
      const RunConfig cfg = resolve_config(report_opts);
      write_output(cfg.output, report_json(cfg).dump(2) + "\n", std::cout);
    } else if (verify->parsed()) {
      const auto results = run_checks(filter);
      print_check_table(results, std::cout);
      if (results.empty()) {
        std::cerr << "no checks match '" << filter << "'\n";
        return kConfigError;
      }
      for (const auto& r : results) {
        if (!r.passed) return kVerifyFailed;
      }
    } else if (commutators->parsed()) {
      write_output(table_output, commutator_table_json().dump(2) + "\n", std::cout);
    }
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIoError;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfigError;
  }
  return kOk;
}
