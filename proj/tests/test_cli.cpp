#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "kplane/errors.hpp"
#include "kplane/extremal.hpp"
#include "kplane/io.hpp"
#include "kplane/transform.hpp"

using namespace kplane;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(KPLANE_CLI_PATH) + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  std::size_t n = 0;
  while ((n = fread(buf, 1, sizeof(buf), pipe)) > 0) r.out.append(buf, n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "kplane_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

void write_file(const fs::path& path, const std::string& text) { std::ofstream(path) << text; }

// Drops '#' lines so CSV bodies can be parsed back.
std::istringstream body(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::string kept;
  while (std::getline(in, line)) {
    if (!line.empty() && line.front() != '#') kept += line + "\n";
  }
  return std::istringstream(kept);
}

}  // namespace

TEST(ProfileCsv, ParsesCommentsAndHeader) {
  std::istringstream in("# written by hand\n r , value \n0,1\n0.5, 2\n\n1,3\n");
  const auto table = io::parse_profile_csv(in);
  ASSERT_EQ(table.r.size(), 3u);
  EXPECT_EQ(table.r[1], 0.5);
  EXPECT_EQ(table.value[2], 3.0);
}

TEST(ProfileCsv, RejectsMalformedInput) {
  const char* bad[] = {
      "",                        // no header
      "x,y\n0,1\n1,2\n",          // wrong header
      "r,value\n0,1\n",           // single row
      "r,value\n0,1\n0,2\n",      // repeated radius
      "r,value\n-1,1\n0,2\n",     // negative radius
      "r,value\n0,1\n1,nan\n",    // non-finite value
      "r,value\n0,1\n1,2,3\n",    // extra column
      "r,value\n0,1\n1,abc\n",    // not a number
  };
  for (const char* text : bad) {
    std::istringstream in(text);
    EXPECT_THROW(io::parse_profile_csv(in), DataError) << text;
  }
  try {
    std::istringstream in("r,value\n0,1\n2,1\n1,1\n");
    io::parse_profile_csv(in);
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("line 4"), std::string::npos);
  }
}

TEST(ProfileCsv, ResampleIsMonotoneAndZeroBeyondData) {
  io::ProfileTable table;
  for (int i = 0; i <= 20; ++i) {
    table.r.push_back(0.25 * i);
    table.value.push_back(std::exp(-0.25 * i));
  }
  const auto grid = make_grid(256, 10.0);
  const auto f = io::resample(table, grid);
  for (std::size_t i = 0; i < grid->size(); ++i) {
    const double r = grid->nodes()[i];
    if (r > 5.0) {
      EXPECT_EQ(f.values()[i], 0.0);
    } else {
      EXPECT_NEAR(f.values()[i], std::exp(-r), 5e-3) << r;
      if (i > 0 && grid->nodes()[i - 1] <= 5.0) EXPECT_LE(f.values()[i], f.values()[i - 1]);
    }
  }
  io::ProfileTable two{{1.0, 3.0}, {2.0, 4.0}};
  const auto g = io::resample(two, make_grid(64, 4.0));
  EXPECT_NEAR(g.at(2.0), 3.0, 1e-6);
  EXPECT_EQ(g.values().front(), 2.0);
}

TEST(ProfileCsv, WriteReadRoundTripIsExact) {
  const auto grid = make_grid(128, kUnbounded);
  const auto h = extremizer_profile(make_params(2, 4), 1.3, grid);
  std::ostringstream out;
  io::write_profile(out, {{"k", "2"}}, h);
  std::istringstream in(out.str());
  const auto table = io::parse_profile_csv(in);
  ASSERT_EQ(table.r.size(), grid->size());
  for (std::size_t i = 0; i < table.r.size(); ++i) {
    EXPECT_EQ(table.r[i], grid->nodes()[i]);
    EXPECT_EQ(table.value[i], h.values()[i]);
  }
  EXPECT_EQ(io::format_double(0.1), "0.10000000000000001");
}

TEST(Cli, VersionAndUsageErrors) {
  const auto v = run("--version");
  EXPECT_EQ(v.code, 0);
  EXPECT_EQ(v.out, std::string(KPLANE_VERSION_STRING) + "\n");
  EXPECT_EQ(run("").code, 2);
  EXPECT_EQ(run("constant --k 2").code, 2);
  EXPECT_EQ(run("constant --k 3 --d 3 --which A").code, 2);
  EXPECT_EQ(run("constant --k 1 --d 3 --which C").code, 2);
  EXPECT_EQ(run("transform --k 1 --d 3 --rmax -1 --preset extremizer").code, 2);
  EXPECT_EQ(run("transform --k 1 --d 3 --preset bump:0.1:1").code, 2);
  EXPECT_EQ(run("transform --k 1 --d 3 --input /nonexistent/profile.csv").code, 2);
  EXPECT_EQ(run("verify --k 1 --d 3 --suite nonsense").code, 2);
  EXPECT_EQ(run("verify --k 2 --d 3 --suite slide").code, 2);
}

TEST(Cli, ConstantMatchesLibrary) {
  const auto r = run("constant --k 2 --d 4 --which A");
  ASSERT_EQ(r.code, 0);
  const auto json = nlohmann::json::parse(r.out);
  EXPECT_EQ(json["which"], "A");
  EXPECT_EQ(json["value"].get<double>(), constant_A(make_params(2, 4)));
}

TEST(Cli, TransformPresetMatchesClosedForm) {
  const auto r = run("transform --k 2 --d 3 --grid-n 128 --preset indicator:1.5");
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("# k: 2"), std::string::npos);
  EXPECT_NE(r.out.find("# rmax: inf"), std::string::npos);
  auto in = body(r.out);
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "r,Tf");
  const Params params = make_params(2, 3);
  int rows = 0;
  for (std::string line; std::getline(in, line); ++rows) {
    const auto comma = line.find(',');
    const double x = std::stod(line.substr(0, comma));
    const double y = std::stod(line.substr(comma + 1));
    EXPECT_NEAR(y, indicator_transform(params, IntervalSet{{0.0, 1.5}}, x), 1e-14);
  }
  EXPECT_GE(rows, 128);
}

TEST(Cli, TransformFileInputAndDeterminism) {
  const auto path = scratch("bump.csv");
  std::ostringstream csv;
  csv << "r,value\n";
  for (int i = 0; i <= 40; ++i) csv << 0.1 * i << ',' << std::exp(-0.1 * i * 0.1 * i) << '\n';
  write_file(path, csv.str());
  const std::string args = "transform --k 1 --d 2 --grid-n 256 --input " + path.string();
  const auto a = run(args);
  const auto b = run(args);
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  // Tf(0) for k = 1 is the integral of f along the half-line.
  auto in = body(a.out);
  std::string line;
  std::getline(in, line);
  std::getline(in, line);
  const double tf0 = std::stod(line.substr(line.find(',') + 1));
  EXPECT_NEAR(tf0, std::sqrt(M_PI) / 2.0 * std::erf(4.0), 2e-3);

  const auto matrix = scratch("matrix.csv");
  ASSERT_EQ(run("transform --k 2 --d 3 --grid-n 64 --rmax 5 --preset extremizer --matrix-out " + matrix.string()).code,
            0);
  std::ifstream m(matrix);
  std::string row;
  int rows = 0;
  while (std::getline(m, row)) rows += row.front() == '#' ? 0 : 1;
  EXPECT_EQ(rows, 64 + 1);
}

TEST(Cli, SearchWritesTraceAndProfile) {
  const auto profile = scratch("extremizer.csv");
  const auto r = run("search --k 1 --d 3 --grid-n 256 --init random:4 --profile-out " + profile.string());
  ASSERT_EQ(r.code, 0);
  const auto json = nlohmann::json::parse(r.out);
  EXPECT_EQ(json["kind"], "search_trace");
  EXPECT_EQ(json["header"]["seed"], "4");
  EXPECT_TRUE(json["converged"].get<bool>());
  EXPECT_NEAR(json["final_phi"].get<double>(), constant_B(make_params(1, 3), 256).value, 1e-6);
  const auto table = io::read_profile_csv(profile.string());
  EXPECT_GE(table.r.size(), 256u);

  EXPECT_EQ(run("search --k 2 --d 3 --grid-n 128 --max-iter 1").code, 3);
  EXPECT_EQ(run("search --k 2 --d 3 --init random:x").code, 2);
  EXPECT_EQ(run("search --k 1 --d 3 --grid-n 256 --init file:" + profile.string()).code, 0);
}

TEST(Cli, DiagnoseSyntheticAndFiles) {
  const auto tight = nlohmann::json::parse(run("diagnose --k 2 --d 3 --grid-n 1024 --synthetic tight").out);
  EXPECT_EQ(tight["verdict"], "Tight");
  const auto split = nlohmann::json::parse(run("diagnose --k 2 --d 3 --grid-n 1024 --synthetic dichotomy:0.3").out);
  EXPECT_EQ(split["verdict"], "Dichotomy");
  EXPECT_NEAR(split["alpha_estimate"].get<double>(), 0.3, 0.05);
  EXPECT_EQ(run("diagnose --k 2 --d 3 --synthetic dichotomy:1.5").code, 2);
  EXPECT_EQ(run("diagnose --k 2 --d 3 --synthetic sideways").code, 2);

  const auto path = scratch("unnormalized.csv");
  write_file(path, "r,value\n0,2\n1,2\n1.0001,0\n3,0\n");
  EXPECT_EQ(run("diagnose --k 2 --d 3 --inputs " + path.string()).code, 2);
  const auto fixed = run("diagnose --k 2 --d 3 --auto-normalize --inputs " + path.string());
  ASSERT_EQ(fixed.code, 0);
  EXPECT_EQ(nlohmann::json::parse(fixed.out)["kind"], "trichotomy_report");
}

TEST(Cli, VerifyEmitsJsonLinesAndExitStatus) {
  const auto summary = scratch("summary.csv");
  const auto ok = run("verify --k 1 --d 3 --suite slide --seed 3 --trials 5 --summary " + summary.string());
  ASSERT_EQ(ok.code, 0);
  std::istringstream lines(ok.out);
  int count = 0;
  for (std::string line; std::getline(lines, line); ++count) {
    const auto report = nlohmann::json::parse(line);
    EXPECT_EQ(report["name"], "slide_monotonicity");
    EXPECT_EQ(report["seed"], 3);
  }
  EXPECT_EQ(count, 5);
  std::ifstream s(summary);
  std::string text((std::istreambuf_iterator<char>(s)), std::istreambuf_iterator<char>());
  EXPECT_NE(text.find("# seed: 3"), std::string::npos);
  EXPECT_NE(text.find("name,lhs,rhs,margin,passed,seed\n"), std::string::npos);

  // The literal concentration bound for k >= 2 is violated, so the run fails.
  EXPECT_EQ(run("verify --k 2 --d 3 --suite concentration-k2 --trials 2").code, 1);
  EXPECT_EQ(run("verify --k 2 --d 3 --suite superadd").code, 0);
}
