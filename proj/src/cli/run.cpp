#include "lillab/cli/run.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "commands.hpp"
#include "lillab/error.hpp"
#include "lillab/parallel.hpp"
#include "lillab/simd/kernels.hpp"

#ifndef LILLAB_VERSION
#define LILLAB_VERSION "unknown"
#endif

namespace lillab::cli {

namespace {

constexpr const char* kExitCodes =
    "Exit codes:\n"
    "  0  success\n"
    "  1  unexpected error\n"
    "  2  usage, configuration or invalid input\n"
    "  3  unknown example or functional\n"
    "  4  numerical failure\n"
    "  5  optimizer did not converge\n"
    "  6  output could not be written\n"
    "On failure a JSON error record is printed to stderr and written to <out>/error.json.";

std::string utc_timestamp() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

std::string command_path(CLI::App& app) {
  std::string path;
  for (CLI::App* cur = &app;;) {
    const auto subs = cur->get_subcommands();
    if (subs.empty()) break;
    cur = subs.front();
    path += (path.empty() ? "" : " ") + cur->get_name();
  }
  return path;
}

int exit_code_for(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::invalid_input: return kExitUsage;
    case ErrorKind::unknown_name: return kExitUnknownName;
    case ErrorKind::numerical_failure: return kExitNumerical;
    case ErrorKind::non_convergence: return kExitNonConvergence;
    case ErrorKind::io: return kExitIo;
  }
  return kExitOther;
}

const char* kind_name(int code) {
  switch (code) {
    case kExitUsage: return "usage";
    case kExitUnknownName: return "unknown_name";
    case kExitNumerical: return "numerical_failure";
    case kExitNonConvergence: return "non_convergence";
    case kExitIo: return "io";
    default: return "error";
  }
}

int report_error(int code, const std::string& message, const nlohmann::json& extra, const std::string& out_dir,
                 std::ostream& err) {
  nlohmann::json rec = {{"error", kind_name(code)}, {"exit_code", code}, {"message", message}};
  if (!extra.is_null()) rec["details"] = extra;
  err << rec.dump() << '\n';
  if (!out_dir.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    std::ofstream os(std::filesystem::path(out_dir) / "error.json");
    if (os) os << rec.dump(2) << '\n';
  }
  return code;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Numerical laboratory for small-time LIL behaviour of degenerate SDEs", "lillab"};
  app.footer(kExitCodes);
  app.set_version_flag("--version", LILLAB_VERSION);
  app.require_subcommand(1);
  app.fallthrough();
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.set_config("--config", "", "INI file with flat key = value settings; flags override it");

  Context ctx;
  Settings& s = ctx.s;
  if (const char* env = std::getenv("LILLAB_SEED")) {
    try {
      s.seed = std::stoull(env);
    } catch (const std::exception&) {
      return report_error(kExitUsage, std::string("LILLAB_SEED is not an unsigned integer: ") + env, nullptr, "", err);
    }
  }
  app.add_option("--seed", s.seed, "Master seed (default: $LILLAB_SEED or 0)")->capture_default_str();
  app.add_option("--threads", s.threads, "Worker threads (0 = hardware)")->capture_default_str();
  app.add_flag("--scalar", s.scalar, "Force the scalar kernels");
  app.add_option("--out,-o", s.out_dir, "Output directory")->capture_default_str();
  app.add_option("--format", s.formats, "Data formats to write")
      ->delimiter(',')
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  auto actions = register_commands(app, s);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    return report_error(kExitUsage, e.what(), nullptr, "", err);
  }

  const std::string cmd = command_path(app);
  const auto it = actions.find(cmd);
  if (it == actions.end()) return report_error(kExitUsage, "no runnable subcommand '" + cmd + "'", nullptr, "", err);

  simd::set_force_scalar(s.scalar);
  s.threads = resolve_threads(s.threads);
  ctx.out = &out;
  const auto start = std::chrono::steady_clock::now();
  try {
    it->second(ctx);
  } catch (const NumericalFailure& e) {
    return report_error(kExitNumerical, e.what(), {{"state", e.state()}}, s.out_dir, err);
  } catch (const NonConvergence& e) {
    return report_error(kExitNonConvergence, e.what(), {{"diagnostics", e.diagnostics()}}, s.out_dir, err);
  } catch (const Error& e) {
    return report_error(exit_code_for(e), e.what(), nullptr, s.out_dir, err);
  } catch (const std::exception& e) {
    return report_error(kExitOther, e.what(), nullptr, s.out_dir, err);
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  try {
    nlohmann::json manifest;
    manifest["command"] = cmd;
    manifest["version"] = LILLAB_VERSION;
    manifest["seed"] = s.seed;
    manifest["threads"] = s.threads;
    manifest["simd"] = std::string(simd::isa_name(simd::active_isa()));
    manifest["config"] = app.config_to_str(true, false);
    manifest["outputs"] = ctx.outputs;
    manifest["summary"] = ctx.summary;
    // Only this block differs between repeated runs.
    manifest["run"] = {{"timestamp", utc_timestamp()}, {"wall_time_s", wall}};
    ctx.write_json("manifest.json", manifest);
  } catch (const Error& e) {
    return report_error(exit_code_for(e), e.what(), nullptr, "", err);
  }
  out << ctx.summary.dump(2) << '\n';
  return kExitOk;
}

int run(int argc, const char* const* argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, std::cout, std::cerr);
}

}  // namespace lillab::cli
