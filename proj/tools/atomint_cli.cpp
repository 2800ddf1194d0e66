// atomint: command-line front end.
//
//   atomint budget|fringe|mirror-phase|visibility|frame-check --config <path>
//           [--out <path>] [--sweep name,start,stop,count]
//
// Exit status: 0 success, 1 invalid input, 2 numerical failure, 3 check failed.
// ATOMINT_LOG=quiet|info|debug sets the stderr verbosity (default info); errors
// are always printed.

#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "atomint/commands.hpp"
#include "atomint/config.hpp"
#include "atomint/error.hpp"

namespace {

enum class LogLevel { quiet, info, debug };

LogLevel log_level() {
  const char* env = std::getenv("ATOMINT_LOG");
  if (env == nullptr) return LogLevel::info;
  const std::string v(env);
  if (v == "quiet" || v == "0") return LogLevel::quiet;
  if (v == "debug" || v == "2") return LogLevel::debug;
  return LogLevel::info;
}

void log(LogLevel level, const std::string& message) {
  if (level <= log_level()) std::cerr << "atomint: " << message << '\n';
}

// Errors are printed at every verbosity.
void report_error(const std::string& message) { std::cerr << "atomint: error: " << message << '\n'; }

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw atomint::ValidationError("cannot write " + path);
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Light-pulse and specular-mirror atom interferometer calculations"};
  app.set_version_flag("--version", std::string(ATOMINT_VERSION));
  app.require_subcommand(1);

  std::string config_path, out_path, sweep_text;
  int random_cases = 0;
  std::uint64_t seed = 20240611;

  auto add_common = [&](CLI::App* sub, bool with_sweep) {
    sub->add_option("--config", config_path, "JSON experiment file")->required();
    sub->add_option("--out", out_path, "output CSV path (default stdout)");
    if (with_sweep) sub->add_option("--sweep", sweep_text, "name,start,stop,count");
  };
  auto* budget = app.add_subcommand("budget", "action budgets per branch and frame");
  add_common(budget, false);
  auto* fringe = app.add_subcommand("fringe", "port probabilities along a sweep");
  add_common(fringe, true);
  auto* mirror = app.add_subcommand("mirror-phase", "reflection phase of the exponential barrier");
  add_common(mirror, false);
  auto* visibility = app.add_subcommand("visibility", "SMI visibility against mirror mismatch");
  add_common(visibility, true);
  auto* frame = app.add_subcommand("frame-check", "laboratory against freely-falling frame");
  add_common(frame, false);
  frame->add_option("--random", random_cases, "number of extra randomized cases")
      ->check(CLI::NonNegativeNumber);
  frame->add_option("--seed", seed, "seed for the randomized cases");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    const atomint::ExperimentConfig config = atomint::load_config(config_path);
    log(LogLevel::debug, "config hash " + std::to_string(atomint::config_hash(config)));
    std::optional<atomint::SweepSpec> sweep = config.sweep;
    if (!sweep_text.empty()) sweep = atomint::parse_sweep(sweep_text);

    atomint::CommandOutput result;
    if (*budget) {
      result = atomint::cmd_budget(config);
    } else if (*fringe) {
      if (!sweep) throw atomint::ValidationError("fringe: needs --sweep or a \"sweep\" section");
      result = atomint::cmd_fringe(config, *sweep);
    } else if (*mirror) {
      const std::string name =
          out_path.empty() ? "mirror_phase.csv" : std::filesystem::path(out_path).filename().string();
      result = atomint::cmd_mirror_phase(config, name);
      if (!result.passed) log(LogLevel::info, "warning: quadratic validity number exceeds 0.1");
    } else if (*visibility) {
      result = atomint::cmd_visibility(config, sweep);
    } else {
      result = atomint::cmd_frame_check(config, random_cases, seed);
    }

    if (out_path.empty()) {
      std::cout << result.csv;
    } else {
      write_text(out_path, result.csv);
      log(LogLevel::info, "wrote " + out_path);
      if (!result.plot_script.empty()) {
        const std::string script = std::filesystem::path(out_path).replace_extension(".py").string();
        write_text(script, result.plot_script);
        log(LogLevel::info, "wrote " + script);
      }
    }
    if ((*frame || *visibility) && !result.passed) {
      log(LogLevel::info, "check failed");
      return atomint::exit_check_failed;
    }
    return 0;
  } catch (const atomint::ValidationError& e) {
    report_error(e.what());
    return 1;
  } catch (const atomint::ConvergenceError& e) {
    report_error(e.what());
    return 2;
  } catch (const atomint::MomentumOpenError& e) {
    report_error(e.what());
    return 2;
  } catch (const std::exception& e) {
    report_error(std::string("unexpected error: ") + e.what());
    return 2;
  }
}
