// kplane: batch front end for transforms, constants, extremizer search,
// concentration diagnostics and the inequality verification suites.
//
// Exit codes: 0 success, 1 a verification check failed or a numerical
// failure occurred, 2 usage or input error, 3 search did not converge.

#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "kplane/cc.hpp"
#include "kplane/errors.hpp"
#include "kplane/extremal.hpp"
#include "kplane/io.hpp"
#include "kplane/norms.hpp"
#include "kplane/transform.hpp"
#include "kplane/verify.hpp"

#ifndef KPLANE_VERSION
#define KPLANE_VERSION "unknown"
#endif

namespace {

using namespace kplane;

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNoConvergence = 3;

struct Common {
  int k = 0;
  int d = 0;
  int grid_n = 2048;
  std::string rmax = "inf";
  std::string out;
};

double parse_rmax(const std::string& text) {
  if (text == "inf" || text == "infinity") return kUnbounded;
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used == text.size() && v > 0.0) return v;
  } catch (const std::exception&) {
  }
  throw ConfigError("--rmax must be a positive number or 'inf', got '" + text + "'");
}

std::vector<double> split_numbers(const std::string& text, char sep, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, sep)) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(part, &used));
      if (used != part.size()) throw std::invalid_argument(part);
    } catch (const std::exception&) {
      throw ConfigError("malformed " + what + ": '" + text + "'");
    }
  }
  return out;
}

io::Header make_header(const std::string& command, const Common& c, const std::string& seed) {
  return {
      {"kplane", KPLANE_VERSION}, {"command", command},          {"k", std::to_string(c.k)},
      {"d", std::to_string(c.d)}, {"seed", seed},                {"grid_n", std::to_string(c.grid_n)},
      {"rmax", c.rmax},
  };
}

nlohmann::json header_json(const io::Header& header) {
  nlohmann::json out = nlohmann::json::object();
  for (const auto& [key, value] : header) out[key] = value;
  return out;
}

// Writes to the named file, or to stdout when the name is empty or "-".
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty() && path != "-") {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw DataError("cannot write '" + path + "'");
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

void add_common(CLI::App* cmd, Common& c, bool needs_grid = true) {
  cmd->add_option("--k", c.k, "plane dimension k")->required();
  cmd->add_option("--d", c.d, "ambient dimension d")->required();
  if (needs_grid) {
    cmd->add_option("--grid-n", c.grid_n, "number of grid nodes")->capture_default_str();
    cmd->add_option("--rmax", c.rmax, "radial truncation, or 'inf' for the half-line")->capture_default_str();
  }
  cmd->add_option("--out", c.out, "output file (default: stdout)");
}

// ---------------------------------------------------------------- transform

struct TransformArgs {
  Common common;
  std::string input;
  std::string preset;
  std::string matrix_out;
};

int run_transform(const TransformArgs& a) {
  const Params params = make_params(a.common.k, a.common.d);
  const double rmax = parse_rmax(a.common.rmax);
  std::optional<RadialProfile> Tf;
  std::string source;
  double tail = 0.0;
  bool tail_warning = false;

  if (!a.input.empty()) {
    const auto table = io::read_profile_csv(a.input);
    const auto grid = make_grid(a.common.grid_n, rmax);
    const auto result = apply_T_with_diagnostics(params, io::resample(table, grid));
    Tf = result.values;
    tail = result.tail_estimate;
    tail_warning = result.tail_warning;
    source = "file:" + a.input;
  } else if (a.preset == "extremizer") {
    const auto grid = make_grid(a.common.grid_n, rmax);
    const auto result = apply_T_with_diagnostics(params, extremizer_profile(params, 1.0, grid));
    Tf = result.values;
    tail = result.tail_estimate;
    tail_warning = result.tail_warning;
    source = "extremizer";
  } else if (a.preset.rfind("indicator:", 0) == 0) {
    const auto v = split_numbers(a.preset.substr(10), ':', "indicator preset");
    if (v.size() != 1 || !(v[0] > 0.0)) throw ConfigError("indicator preset is indicator:a with a > 0");
    const std::vector<double> cuts{v[0]};
    Tf = apply_T_indicator(params, IntervalSet{{0.0, v[0]}}, make_grid(a.common.grid_n, rmax, cuts));
    source = a.preset;
  } else if (a.preset.rfind("bump:", 0) == 0) {
    const auto v = split_numbers(a.preset.substr(5), ':', "bump preset");
    if (v.size() != 2 || !(v[1] > 0.0) || v[0] - v[1] / 2 < 0.0) {
      throw ConfigError("bump preset is bump:center:width with width > 0 and center >= width/2");
    }
    const double lo = v[0] - v[1] / 2;
    const double hi = v[0] + v[1] / 2;
    std::vector<double> cuts{hi};
    if (lo > 0.0) cuts.insert(cuts.begin(), lo);
    const auto grid = make_grid(a.common.grid_n, rmax, cuts);
    const auto bump = RadialProfile::sample(grid, [lo, hi](double r) {
      if (r <= lo || r >= hi) return 0.0;
      const double s = std::sin(M_PI * (r - lo) / (hi - lo));
      return s * s;
    });
    const auto result = apply_T_with_diagnostics(params, bump);
    Tf = result.values;
    tail = result.tail_estimate;
    tail_warning = result.tail_warning;
    source = a.preset;
  } else {
    throw ConfigError("give --input FILE or --preset {extremizer, indicator:a, bump:center:width}");
  }

  if (tail_warning) std::cerr << "warning: unresolved tail contribution estimated at " << tail << "\n";
  auto header = make_header("transform", a.common, "none");
  header.emplace_back("source", source);
  header.emplace_back("tail_estimate", io::format_double(tail));
  Sink sink(a.common.out);
  io::write_profile(sink.stream(), header, *Tf, "Tf");

  if (!a.matrix_out.empty()) {
    const TransformOperator op(params, Tf->grid());
    Sink matrix(a.matrix_out);
    io::write_operator(matrix.stream(), header, OperatorMatrix{op.matrix(), rmax, Tf->grid()});
  }
  return kExitOk;
}

// ---------------------------------------------------------------- constant

struct ConstantArgs {
  Common common;
  std::string which;
};

int run_constant(const ConstantArgs& a) {
  const Params params = make_params(a.common.k, a.common.d);
  nlohmann::json out{{"k", params.k}, {"d", params.d}, {"which", a.which}};
  if (a.which == "A") {
    out["value"] = constant_A(params);
    out["est_error"] = 0.0;
  } else {
    const auto b = constant_B(params, a.common.grid_n);
    out["value"] = b.value;
    out["est_error"] = b.est_error;
    out["grid_n"] = a.common.grid_n;
  }
  Sink sink(a.common.out);
  sink.stream() << out.dump() << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------- search

struct SearchArgs {
  Common common;
  std::string init = "indicator";
  int max_iter = 500;
  double tol = 1e-8;
  std::string profile_out;
};

int run_search(const SearchArgs& a) {
  const Params params = make_params(a.common.k, a.common.d);
  const double rmax = parse_rmax(a.common.rmax);
  std::string seed = "none";
  std::optional<RadialProfile> init;
  if (a.init == "indicator") {
    const std::vector<double> cuts{1.0};
    init = RadialProfile::indicator(make_grid(a.common.grid_n, rmax, cuts), IntervalSet{{0.0, 1.0}});
  } else if (a.init.rfind("random:", 0) == 0) {
    const std::string text = a.init.substr(7);
    std::uint64_t value = 0;
    try {
      std::size_t used = 0;
      value = std::stoull(text, &used);
      if (used != text.size()) throw std::invalid_argument(text);
    } catch (const std::exception&) {
      throw ConfigError("random init is random:SEED with a nonnegative integer seed");
    }
    seed = text;
    std::mt19937_64 rng(value);
    init = random_decaying_profile(params, make_grid(a.common.grid_n, rmax), rng);
  } else if (a.init.rfind("file:", 0) == 0) {
    const auto table = io::read_profile_csv(a.init.substr(5));
    init = io::resample(table, make_grid(a.common.grid_n, rmax));
  } else {
    throw ConfigError("--init must be indicator, random:SEED or file:PATH");
  }

  SearchOptions options;
  options.max_iter = a.max_iter;
  options.tol = a.tol;
  const auto trace = search_extremizer(params, *init, options);

  auto header = make_header("search", a.common, seed);
  header.emplace_back("init", a.init);
  header.emplace_back("max_iter", std::to_string(a.max_iter));
  header.emplace_back("tol", io::format_double(a.tol));
  auto json = io::to_json(trace);
  json["header"] = header_json(header);
  Sink sink(a.common.out);
  sink.stream() << json.dump() << '\n';
  if (!a.profile_out.empty()) {
    Sink profile(a.profile_out);
    io::write_profile(profile.stream(), header, trace.final_profile);
  }
  return trace.converged ? kExitOk : kExitNoConvergence;
}

// ---------------------------------------------------------------- diagnose

struct DiagnoseArgs {
  Common common;
  std::vector<std::string> inputs;
  std::string synthetic;
  double eps = 0.1;
  double separation_min = 10.0;
  double floor = 0.1;
  bool auto_normalize = false;
};

int run_diagnose(const DiagnoseArgs& a) {
  const Params params = make_params(a.common.k, a.common.d);
  const auto grid = make_grid(a.common.grid_n, parse_rmax(a.common.rmax));
  std::vector<RadialProfile> seq;
  if (!a.synthetic.empty()) {
    if (!a.inputs.empty()) throw ConfigError("give either --inputs or --synthetic, not both");
    std::string kind = a.synthetic;
    double alpha = 0.4;
    if (const auto colon = kind.find(':'); colon != std::string::npos) {
      const auto v = split_numbers(kind.substr(colon + 1), ':', "synthetic alpha");
      if (v.size() != 1) throw ConfigError("synthetic dichotomy is dichotomy:alpha");
      alpha = v[0];
      kind = kind.substr(0, colon);
    }
    if (kind != "tight" && kind != "vanishing" && kind != "dichotomy") {
      throw ConfigError("--synthetic must be tight, vanishing or dichotomy:alpha");
    }
    if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha must lie in (0, 1)");
    seq = synthetic_sequence(params, grid, kind, alpha);
  } else if (!a.inputs.empty()) {
    for (const auto& path : a.inputs) {
      auto f = io::resample(io::read_profile_csv(path), grid);
      if (a.auto_normalize) {
        const double norm = weighted_lp_norm(f, params.input_weight(), params.pd());
        if (!(norm > 0.0)) throw DomainError("profile '" + path + "' has zero norm");
        f = f.scaled(1.0 / norm);
      }
      seq.push_back(std::move(f));
    }
  } else {
    throw ConfigError("give --inputs FILE... or --synthetic KIND");
  }

  TrichotomyOptions options;
  options.eps = a.eps;
  options.separation_min = a.separation_min;
  options.floor = a.floor;
  auto json = io::to_json(classify_trichotomy(params, seq, options));
  auto header = make_header("diagnose", a.common, "none");
  header.emplace_back("source", a.synthetic.empty() ? "files" : "synthetic:" + a.synthetic);
  json["header"] = header_json(header);
  Sink sink(a.common.out);
  sink.stream() << json.dump() << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------- verify

struct VerifyArgs {
  Common common;
  std::string suite;
  std::uint64_t seed = 1;
  int trials = 100;
  std::string summary;
};

int run_verify(const VerifyArgs& a) {
  const Suite suite = parse_suite(a.suite);
  const Params params = make_params(a.common.k, a.common.d);
  SuiteOptions options;
  options.seed = a.seed;
  options.trials = a.trials;
  options.grid_n = a.common.grid_n;
  const auto reports = run_suite(suite, params, options);

  auto header = make_header("verify", a.common, std::to_string(a.seed));
  header.emplace_back("suite", a.suite);
  header.emplace_back("trials", std::to_string(a.trials));
  Sink sink(a.common.out);
  int failed = 0;
  for (const auto& report : reports) {
    sink.stream() << io::to_json(report).dump() << '\n';
    failed += report.passed ? 0 : 1;
  }
  if (!a.summary.empty()) {
    Sink summary(a.summary);
    io::write_summary_csv(summary.stream(), header, reports);
  }
  std::cerr << a.suite << ": " << reports.size() - failed << "/" << reports.size() << " passed (seed " << a.seed
            << ")\n";
  return failed == 0 ? kExitOk : kExitFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Radial k-plane transform: transforms, sharp constants, extremizers and diagnostics"};
  app.set_version_flag("--version", KPLANE_VERSION);
  app.require_subcommand(1);

  TransformArgs transform;
  auto* cmd_transform = app.add_subcommand("transform", "write (r, Tf(r)) for a profile");
  add_common(cmd_transform, transform.common);
  cmd_transform->add_option("--input", transform.input, "CSV profile with header r,value");
  cmd_transform->add_option("--preset", transform.preset, "extremizer | indicator:a | bump:center:width");
  cmd_transform->add_option("--matrix-out", transform.matrix_out, "also write the operator matrix as CSV");

  ConstantArgs constant;
  auto* cmd_constant = app.add_subcommand("constant", "print the constant A or B as JSON");
  add_common(cmd_constant, constant.common);
  cmd_constant->add_option("--which", constant.which, "A or B")->required()->check(CLI::IsMember({"A", "B"}));

  SearchArgs search;
  auto* cmd_search = app.add_subcommand("search", "fixed-point search for an extremizer");
  add_common(cmd_search, search.common);
  cmd_search->add_option("--init", search.init, "indicator | random:SEED | file:PATH")->capture_default_str();
  cmd_search->add_option("--max-iter", search.max_iter)->capture_default_str()->check(CLI::PositiveNumber);
  cmd_search->add_option("--tol", search.tol)->capture_default_str()->check(CLI::PositiveNumber);
  cmd_search->add_option("--profile-out", search.profile_out, "write the final profile as CSV");

  DiagnoseArgs diagnose;
  auto* cmd_diagnose = app.add_subcommand("diagnose", "classify a profile sequence (tight/vanishing/dichotomy)");
  add_common(cmd_diagnose, diagnose.common);
  cmd_diagnose->add_option("--inputs", diagnose.inputs, "CSV profiles, in sequence order");
  cmd_diagnose->add_option("--synthetic", diagnose.synthetic, "tight | vanishing | dichotomy:alpha");
  cmd_diagnose->add_option("--eps", diagnose.eps)->capture_default_str();
  cmd_diagnose->add_option("--separation-min", diagnose.separation_min)->capture_default_str();
  cmd_diagnose->add_option("--floor", diagnose.floor)->capture_default_str();
  cmd_diagnose->add_flag("--auto-normalize", diagnose.auto_normalize, "rescale inputs to unit L^p norm");

  VerifyArgs verify;
  auto* cmd_verify = app.add_subcommand("verify", "run inequality verification suites (JSON lines)");
  add_common(cmd_verify, verify.common);
  cmd_verify->add_option("--suite", verify.suite,
                         "concentration-k2 | concentration-k1 | slide | superadd | compactness | truncation | "
                         "interaction | all")
      ->required();
  cmd_verify->add_option("--seed", verify.seed)->capture_default_str();
  cmd_verify->add_option("--trials", verify.trials)->capture_default_str()->check(CLI::PositiveNumber);
  cmd_verify->add_option("--summary", verify.summary, "write a summary CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*cmd_transform) return run_transform(transform);
    if (*cmd_constant) return run_constant(constant);
    if (*cmd_search) return run_search(search);
    if (*cmd_diagnose) return run_diagnose(diagnose);
    if (*cmd_verify) return run_verify(verify);
  } catch (const ParameterError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const PreconditionError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailed;
  }
  return kExitUsage;
}
