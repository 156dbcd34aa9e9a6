// Command-line front end: solve, entropy, extrapolate, sweep, verify.

#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "hylent/commands.hpp"
#include "hylent/errors.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hylleraas variational solver and linear-entropy calculator"};
  app.require_subcommand(1, 1);
  app.fallthrough();

  std::string config_path;
  bool quiet = false;
  // Flag values stay as text and go through the same parser as the config
  // file, so the two sources cannot disagree about syntax.
  std::map<std::string, std::string> flags;
  auto text_option = [&](const std::string& name, const std::string& key, const std::string& help) {
    app.add_option_function<std::string>(name, [&flags, key](const std::string& v) { flags[key] = v; }, help);
  };

  app.add_option("-c,--config", config_path, "key=value configuration file")->check(CLI::ExistingFile);
  app.add_flag("-q,--quiet", quiet, "no progress messages on stderr");
  text_option("-s,--system", "system", "preset: helium, h-minus, ps-minus");
  text_option("-w,--omega", "omega", "omega list, e.g. 3,4,5 or 2-6");
  text_option("-Z,--charge", "Z", "nuclear charge override");
  text_option("--inverse-mass", "inverse_mass", "1/m3 override (0 = infinite mass)");
  text_option("-p,--precision-digits", "precision_digits", "working digits (15 = double, <= 33 = quad)");
  text_option("--alpha-low", "alpha_low", "lower end of the alpha bracket");
  text_option("--alpha-high", "alpha_high", "upper end of the alpha bracket");
  text_option("--tol-i4", "tol_i4", "relative truncation tolerance of ring integrals");
  text_option("--seed", "seed", "Monte Carlo seed");
  text_option("-o,--output", "output", "output file (default stdout)");
  text_option("-f,--format", "format", "csv or json");
  text_option("-j,--threads", "threads", "maximum worker threads");
  text_option("--series", "series", "extrapolate: CSV of omega,value[,value...]");
  text_option("--uncertainty-floor", "uncertainty_floor", "extrapolate: smallest reported uncertainty");
  text_option("--axis", "axis", "sweep: charge or inverse_mass");
  text_option("--grid", "grid", "sweep: values, e.g. 1,1.5,2 or 1:2:0.1");
  text_option("--samples", "samples", "verify: Monte Carlo samples per key");
  text_option("--keys", "random_keys", "verify: number of random keys");
  app.add_flag_function(
      "--corrupt", [&flags](std::int64_t) { flags["corrupt"] = "true"; },
      "verify: negate one analytic value (checks that failures are caught)");

  auto* solve = app.add_subcommand("solve", "optimize alpha and report ground-state energies");
  auto* entropy = app.add_subcommand("entropy", "energies and linear entropies");
  auto* extrapolate = app.add_subcommand("extrapolate", "geometric extrapolation of omega series");
  auto* sweep = app.add_subcommand("sweep", "linear entropy along a charge or inverse-mass grid");
  auto* verify = app.add_subcommand("verify", "compare ring integrals with independent oracles");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    hylent::RunConfig config = hylent::default_config();
    if (!config_path.empty()) hylent::load_config_file(config, config_path);
    for (const auto& [key, value] : flags) hylent::apply_setting(config, key, value);
    config.validate();

    hylent::Logger log;
    if (!quiet) log = [](const std::string& msg) { std::cerr << msg << '\n'; };

    hylent::Table table;
    if (*solve) table = hylent::cmd_solve(config, log);
    else if (*entropy) table = hylent::cmd_entropy(config, log);
    else if (*extrapolate) table = hylent::cmd_extrapolate(config, log);
    else if (*sweep) table = hylent::cmd_sweep(config, log);
    else if (*verify) table = hylent::cmd_verify(config, log);

    std::ofstream file;
    if (!config.output_path.empty()) {
      file.open(config.output_path);
      if (!file) throw hylent::InvalidArgument(fmt::format("cannot write '{}'", config.output_path));
    }
    std::ostream& out = config.output_path.empty() ? std::cout : file;
    if (config.format == hylent::OutputFormat::Json)
      hylent::write_json(out, table, config);
    else
      hylent::write_csv(out, table);
    out.flush();
    if (!table.ok) {
      std::cerr << "error: " << table.command << ": one or more checks failed\n";
      return kExitValidation;
    }
    return kExitOk;
  } catch (const hylent::InvalidArgument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const hylent::DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const hylent::NumericalError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 1;
  }
}
