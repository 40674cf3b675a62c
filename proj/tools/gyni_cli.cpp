#include <chrono>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/program_options.hpp>

#include "gyni/error.hpp"
#include "gyni/game.hpp"
#include "gyni/json_io.hpp"
#include "gyni/nosignalling.hpp"
#include "gyni/report.hpp"
#include "gyni/runbook.hpp"

namespace po = boost::program_options;

namespace {

constexpr std::uint64_t kDefaultSeed = 20260822;

const char kUsage[] =
    "gyni - exact bounds, polytope audits, and certificates for the\n"
    "       neighbour-guessing game\n"
    "\n"
    "usage: gyni <command> [options]\n"
    "\n"
    "commands:\n"
    "  bounds         classical bound and maximizing input (--ns adds the\n"
    "                 no-signalling optimum and ratio)\n"
    "  ns-bound       no-signalling optimum, ratio, and optional witness file\n"
    "  facet          facet test of the game inequality (--parties/--dist) or\n"
    "                 of an inequality JSON file (--inequality)\n"
    "  boxes verify   extremal three-party boxes: normalization,\n"
    "                 no-signalling, value, vertex property, orbit census\n"
    "  appendix-c     odd-to-even ratio transfer with constructive witness\n"
    "                 (--odd-n, default 3)\n"
    "  sos-check      sum-of-squares certificate for the classical bound\n"
    "  seesaw         see-saw search for the best quantum value\n"
    "                 (--dim, --restarts, --seed)\n"
    "  nlc-audit      nonlocal-computation candidate audit (--n 2 or 3)\n"
    "  reproduce-all  every check in sequence (--profile core|extended)\n"
    "\n"
    "common options:\n"
    "  --parties N         number of parties\n"
    "  --dist KIND         promise | uniform | cubic4 | path to a\n"
    "                      distribution JSON file (default: promise)\n"
    "  --decimal           add a 12-digit decimal rendering next to each\n"
    "                      exact rational (never replacing it)\n"
    "  --emit-report PATH  write the canonical JSON report to PATH\n"
    "  --help              show this help\n"
    "\n"
    "Reports print exact rationals; checked values carry PASS/FAIL verdicts.\n"
    "Exit code: 0 all checks passed, 1 some check failed, 2 usage or input\n"
    "error.  GYNI_THREADS caps worker threads where parallelism applies.\n";

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CommonArgs {
  bool decimal = false;
  std::string emit_report;
};

void add_common(po::options_description& desc) {
  desc.add_options()("decimal", "decimal renderings alongside exact values")(
      "emit-report", po::value<std::string>(), "write JSON report to this path")(
      "help,h", "show help");
}

// Parses one command's arguments; returns nullopt when --help was given.
std::optional<po::variables_map> parse_args(const po::options_description& desc,
                                            const std::vector<std::string>& args) {
  po::variables_map vm;
  po::store(po::command_line_parser(args).options(desc).run(), vm);
  po::notify(vm);
  if (vm.count("help")) {
    std::fputs(kUsage, stdout);
    return std::nullopt;
  }
  return vm;
}

CommonArgs common_args(const po::variables_map& vm) {
  CommonArgs common;
  common.decimal = vm.count("decimal") > 0;
  if (vm.count("emit-report")) common.emit_report = vm["emit-report"].as<std::string>();
  return common;
}

int required_parties(const po::variables_map& vm, const char* command) {
  if (!vm.count("parties"))
    throw UsageError(std::string(command) + " requires --parties");
  return vm["parties"].as<int>();
}

// Turns a --dist argument into a validated prior.  Named priors need
// --parties (cubic4 pins it to four); anything else is read as a JSON file,
// whose scenario must agree with --parties when both are given.
gyni::PriorDistribution resolve_dist(const std::string& kind,
                                     std::optional<int> parties) {
  if (kind == "promise" || kind == "uniform") {
    if (!parties) throw UsageError("--dist " + kind + " requires --parties");
    if (kind == "promise") return gyni::promise_distribution(*parties);
    return gyni::PriorDistribution::uniform(gyni::Scenario(*parties, 2, 2));
  }
  if (kind == "cubic4") {
    if (parties && *parties != 4)
      throw UsageError("--dist cubic4 is a four-party prior; got --parties " +
                       std::to_string(*parties));
    return gyni::cubic4_distribution();
  }
  gyni::PriorDistribution dist =
      gyni::parse_distribution_json(gyni::read_text_file(kind));
  if (parties && *parties != dist.scenario.parties)
    throw UsageError("--parties " + std::to_string(*parties) +
                     " disagrees with the " + std::to_string(dist.scenario.parties) +
                     "-party distribution in " + kind);
  return dist;
}

std::optional<int> optional_parties(const po::variables_map& vm) {
  if (!vm.count("parties")) return std::nullopt;
  return vm["parties"].as<int>();
}

gyni::GyniInstance game_for(const po::variables_map& vm, const char* command) {
  std::string kind = vm["dist"].as<std::string>();
  std::optional<int> parties = optional_parties(vm);
  if ((kind == "promise" || kind == "uniform") && !parties)
    throw UsageError(std::string(command) + " requires --parties with --dist " + kind);
  gyni::PriorDistribution dist = resolve_dist(kind, parties);
  return gyni::GyniInstance(dist.scenario.parties, std::move(dist));
}

// Prints, optionally saves, and exit-codes a finished report.  Timing goes
// to stderr so stdout and the report file stay byte-stable.
int finish(gyni::RunReport report, const CommonArgs& common, double seconds) {
  report.duration_seconds = seconds;
  std::fputs(gyni::render_report(report, common.decimal).c_str(), stdout);
  if (!common.emit_report.empty())
    gyni::write_text_file(common.emit_report, gyni::serialize_report(report));
  std::fprintf(stderr, "# completed in %.2fs\n", seconds);
  return gyni::exit_code_for(report);
}

template <typename Producer>
int run_command(const CommonArgs& common, Producer&& producer) {
  auto start = std::chrono::steady_clock::now();
  gyni::RunReport report = producer();
  double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return finish(std::move(report), common, seconds);
}

int cmd_bounds(const std::vector<std::string>& args) {
  po::options_description desc;
  desc.add_options()("parties", po::value<int>(), "")("dist",
                                                      po::value<std::string>()
                                                          ->default_value("promise"),
                                                      "")("ns", "");
  add_common(desc);
  auto vm = parse_args(desc, args);
  if (!vm) return 0;
  gyni::GyniInstance game = game_for(*vm, "bounds");
  return run_command(common_args(*vm), [&] {
    return gyni::run_bounds(game, (*vm)["dist"].as<std::string>(), vm->count("ns") > 0);
  });
}

int cmd_ns_bound(const std::vector<std::string>& args) {
  po::options_description desc;
  desc.add_options()("parties", po::value<int>(), "")(
      "dist", po::value<std::string>()->default_value("promise"), "")(
      "witness", po::value<std::string>(), "");
  add_common(desc);
  auto vm = parse_args(desc, args);
  if (!vm) return 0;
  gyni::GyniInstance game = game_for(*vm, "ns-bound");
  std::string witness =
      vm->count("witness") ? (*vm)["witness"].as<std::string>() : std::string();
  return run_command(common_args(*vm), [&] {
    return gyni::run_ns_bound(game, (*vm)["dist"].as<std::string>(), witness);
  });
}

int cmd_facet(const std::vector<std::string>& args) {
  po::options_description desc;
  desc.add_options()("parties", po::value<int>(), "")(
      "dist", po::value<std::string>()->default_value("promise"), "")(
      "inequality", po::value<std::string>(), "");
  add_common(desc);
  auto vm = parse_args(desc, args);
  if (!vm) return 0;
  if (vm->count("inequality")) {
    std::string path = (*vm)["inequality"].as<std::string>();
    gyni::BellInequality ineq =
        gyni::parse_inequality_json(gyni::read_text_file(path));
    return run_command(common_args(*vm),
                       [&] { return gyni::run_facet_inequality(ineq, path); });
  }
  gyni::GyniInstance game = game_for(*vm, "facet");
  return run_command(common_args(*vm), [&] {
    return gyni::run_facet(game, (*vm)["dist"].as<std::string>());
  });
}

int cmd_boxes(const std::vector<std::string>& args) {
  if (args.empty() || args[0] != "verify")
    throw UsageError("the boxes command has one form: gyni boxes verify");
  po::options_description desc;
  add_common(desc);
  auto vm = parse_args(desc, {args.begin() + 1, args.end()});
  if (!vm) return 0;
  return run_command(common_args(*vm), [] { return gyni::run_boxes_verify(); });
}

int cmd_appendix_c(const std::vector<std::string>& args) {
  po::options_description desc;
  desc.add_options()("odd-n", po::value<int>()->default_value(3), "");
  add_common(desc);
  auto vm = parse_args(desc, args);
  if (!vm) return 0;
  int odd = (*vm)["odd-n"].as<int>();
  return run_command(common_args(*vm), [&] { return gyni::run_appendix_c(odd); });
}

int cmd_sos_check(const std::vector<std::string>& args) {
  po::options_description desc;
  desc.add_options()("parties", po::value<int>(), "")(
      "dist", po::value<std::string>()->default_value("promise"), "");
  add_common(desc);
  auto vm = parse_args(desc, args);
  if (!vm) return 0;
  gyni::GyniInstance game = game_for(*vm, "sos-check");
  return run_command(common_args(*vm), [&] {
    return gyni::run_sos_check(game, (*vm)["dist"].as<std::string>());
  });
}

int cmd_seesaw(const std::vector<std::string>& args) {
  po::options_description desc;
  desc.add_options()("parties", po::value<int>(), "")(
      "dist", po::value<std::string>()->default_value("promise"), "")(
      "dim", po::value<int>()->default_value(2), "")(
      "restarts", po::value<int>()->default_value(50), "")(
      "seed", po::value<std::uint64_t>()->default_value(kDefaultSeed), "");
  add_common(desc);
  auto vm = parse_args(desc, args);
  if (!vm) return 0;
  gyni::GyniInstance game = game_for(*vm, "seesaw");
  return run_command(common_args(*vm), [&] {
    return gyni::run_seesaw(game, (*vm)["dist"].as<std::string>(),
                            (*vm)["dim"].as<int>(), (*vm)["restarts"].as<int>(),
                            (*vm)["seed"].as<std::uint64_t>());
  });
}

int cmd_nlc_audit(const std::vector<std::string>& args) {
  po::options_description desc;
  desc.add_options()("n", po::value<int>(), "");
  add_common(desc);
  auto vm = parse_args(desc, args);
  if (!vm) return 0;
  if (!vm->count("n")) throw UsageError("nlc-audit requires --n 2 or --n 3");
  int n = (*vm)["n"].as<int>();
  return run_command(common_args(*vm), [&] { return gyni::run_nlc_audit(n); });
}

int cmd_reproduce_all(const std::vector<std::string>& args) {
  po::options_description desc;
  desc.add_options()("profile", po::value<std::string>()->default_value("core"), "")(
      "seed", po::value<std::uint64_t>()->default_value(kDefaultSeed), "");
  add_common(desc);
  auto vm = parse_args(desc, args);
  if (!vm) return 0;
  std::string profile_name = (*vm)["profile"].as<std::string>();
  gyni::Profile profile;
  if (profile_name == "core")
    profile = gyni::Profile::kCore;
  else if (profile_name == "extended")
    profile = gyni::Profile::kExtended;
  else
    throw UsageError("unknown profile '" + profile_name + "' (core or extended)");
  std::uint64_t seed = (*vm)["seed"].as<std::uint64_t>();
  auto progress = [](const gyni::RunReport& child) {
    std::fprintf(stderr, "# %s: %s (%.2fs)\n", child.label().c_str(),
                 child.all_passed() ? "pass" : "FAIL", child.duration_seconds);
    std::fflush(stderr);
  };
  return run_command(common_args(*vm), [&] {
    return gyni::run_reproduce_all(profile, seed, progress);
  });
}

int dispatch(int argc, char** argv) {
  if (argc < 2) {
    std::fputs(kUsage, stderr);
    return 2;
  }
  std::string command = argv[1];
  if (command == "--help" || command == "-h" || command == "help") {
    std::fputs(kUsage, stdout);
    return 0;
  }
  std::vector<std::string> args(argv + 2, argv + argc);
  if (command == "bounds") return cmd_bounds(args);
  if (command == "ns-bound") return cmd_ns_bound(args);
  if (command == "facet") return cmd_facet(args);
  if (command == "boxes") return cmd_boxes(args);
  if (command == "appendix-c") return cmd_appendix_c(args);
  if (command == "sos-check") return cmd_sos_check(args);
  if (command == "seesaw") return cmd_seesaw(args);
  if (command == "nlc-audit") return cmd_nlc_audit(args);
  if (command == "reproduce-all") return cmd_reproduce_all(args);
  throw UsageError("unknown command '" + command + "'");
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return dispatch(argc, argv);
  } catch (const UsageError& e) {
    std::fprintf(stderr, "gyni: %s\nRun 'gyni --help' for usage.\n", e.what());
    return 2;
  } catch (const po::error& e) {
    std::fprintf(stderr, "gyni: %s\nRun 'gyni --help' for usage.\n", e.what());
    return 2;
  } catch (const gyni::Error& e) {
    std::fprintf(stderr, "gyni: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "gyni: unexpected error: %s\n", e.what());
    return 2;
  }
}
