// Command-line front end: run scenarios from a config file, run the
// validation suite, export field CSVs as JSON. Exit codes: 0 success,
// 1 failed checks, 2 configuration errors, 3 I/O errors.
#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "infogeom/io.hpp"
#include "infogeom/scenarios.hpp"

namespace {

void print_checks(const std::vector<infogeom::CheckResult>& checks) {
  int failed = 0;
  for (const auto& c : checks) {
    std::cout << (c.pass ? "PASS" : "FAIL") << "  " << c.module << "." << c.name
              << "  value=" << infogeom::format_double(c.value)
              << " tolerance=" << infogeom::format_double(c.tolerance) << "\n";
    if (!c.pass) {
      std::cout << "      " << c.detail << "\n";
      ++failed;
    }
  }
  std::cout << checks.size() - static_cast<size_t>(failed) << " passed, " << failed
            << " failed\n";
}

int run_command(const std::string& config_path, const std::optional<std::string>& out_dir,
                const std::optional<std::uint64_t>& seed) {
  std::string text = infogeom::read_text_file(config_path);
  infogeom::CliOverrides cli;
  cli.out_dir = out_dir;
  cli.seed = seed;
  auto sc = infogeom::ScenarioConfig::load(text, cli);
  auto report = infogeom::run_scenario(sc);
  print_checks(report.checks);
  std::cout << "report: " << (sc.out_dir / "report.json").string() << "\n";
  return report.all_passed() ? 0 : 1;
}

int validate_command(const std::string& filter,
                     const std::vector<std::string>& tol_overrides) {
  infogeom::Tolerances tol;
  for (const auto& kv : tol_overrides) {
    auto eq = kv.find('=');
    if (eq == std::string::npos)
      throw infogeom::ConfigError("--tol expects name=value, got '" + kv + "'");
    tol.set(kv.substr(0, eq), infogeom::parse_double(kv.substr(eq + 1)));
  }
  auto checks = infogeom::run_validation_checks(filter, tol);
  print_checks(checks);
  for (const auto& c : checks)
    if (!c.pass) return 1;
  return 0;
}

int export_command(const std::string& field_path, const std::string& format) {
  if (format != "json")
    throw infogeom::ConfigError("unsupported export format '" + format + "'");
  auto field = infogeom::read_field_csv(field_path);
  std::cout << infogeom::field_to_json(field).dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"information-geometric quantum dynamics toolkit"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::string> out_dir;
  std::optional<std::uint64_t> seed;
  auto* run = app.add_subcommand("run", "run a scenario from a config file");
  run->add_option("--config", config_path, "INI config file")->required();
  run->add_option("--out", out_dir, "output directory (overrides config and INFOGEOM_OUT)");
  run->add_option("--seed", seed, "RNG seed (overrides config)");

  std::string filter;
  std::vector<std::string> tol_overrides;
  auto* validate = app.add_subcommand("validate", "run the cross-module validation suite");
  validate->add_option("--filter", filter, "restrict to one module by name prefix");
  validate->add_option("--tol", tol_overrides, "override a tolerance, name=value");

  std::string field_path, format = "json";
  auto* exp = app.add_subcommand("export", "convert a field CSV to JSON on stdout");
  exp->add_option("--field", field_path, "field CSV file")->required();
  exp->add_option("--format", format, "output format (json)");

  try {
    app.parse(argc, argv);
    if (run->parsed()) return run_command(config_path, out_dir, seed);
    if (validate->parsed()) return validate_command(filter, tol_overrides);
    return export_command(field_path, format);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  } catch (const infogeom::IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 3;
  } catch (const infogeom::CheckFailed& e) {
    std::cerr << "check failed: " << e.what() << "\n";
    return 1;
  } catch (const infogeom::Error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
