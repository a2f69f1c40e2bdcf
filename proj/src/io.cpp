#include "kplane/io.hpp"

#include <charconv>
#include <cmath>

// Boost 1.74's pchip header calls isnan unqualified on doubles.
using std::isnan;
#include <boost/math/interpolators/pchip.hpp>

#include <fstream>
#include <istream>
#include <ostream>

#include "kplane/errors.hpp"

namespace kplane::io {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_number(const std::string& text, int line) {
  const std::string t = trim(text);
  double value = 0.0;
  const auto [end, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (t.empty() || ec != std::errc() || end != t.data() + t.size() || !std::isfinite(value)) {
    throw DataError("line " + std::to_string(line) + ": not a finite number: '" + t + "'");
  }
  return value;
}

nlohmann::json optional_json(const auto& value) {
  return value ? nlohmann::json(*value) : nlohmann::json(nullptr);
}

}  // namespace

ProfileTable parse_profile_csv(std::istream& in) {
  ProfileTable table;
  std::string raw;
  int line = 0;
  bool header_seen = false;
  while (std::getline(in, raw)) {
    ++line;
    const std::string text = trim(raw);
    if (text.empty() || text.front() == '#') continue;
    if (!header_seen) {
      std::string compact;
      for (char c : text) {
        if (c != ' ' && c != '\t') compact.push_back(c);
      }
      if (compact != "r,value") throw DataError("line " + std::to_string(line) + ": expected header 'r,value'");
      header_seen = true;
      continue;
    }
    const auto comma = text.find(',');
    if (comma == std::string::npos || text.find(',', comma + 1) != std::string::npos) {
      throw DataError("line " + std::to_string(line) + ": expected two comma-separated columns");
    }
    const double r = parse_number(text.substr(0, comma), line);
    const double v = parse_number(text.substr(comma + 1), line);
    if (r < 0.0) throw DataError("line " + std::to_string(line) + ": negative radius");
    if (!table.r.empty() && !(r > table.r.back())) {
      throw DataError("line " + std::to_string(line) + ": radii must be strictly increasing");
    }
    table.r.push_back(r);
    table.value.push_back(v);
  }
  if (!header_seen) throw DataError("empty profile file (no 'r,value' header)");
  if (table.r.size() < 2) throw DataError("profile needs at least two rows");
  return table;
}

ProfileTable read_profile_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");
  return parse_profile_csv(in);
}

RadialProfile resample(const ProfileTable& table, GridPtr grid) {
  if (table.r.size() < 2) throw DataError("profile needs at least two rows");
  std::vector<double> out(grid->size());
  const double lo = table.r.front();
  const double hi = table.r.back();
  if (table.r.size() < 4) {
    // pchip needs four points; fall back to linear pieces.
    for (std::size_t i = 0; i < out.size(); ++i) {
      const double r = grid->nodes()[i];
      if (r > hi) continue;
      if (r <= lo) {
        out[i] = table.value.front();
        continue;
      }
      const auto j = static_cast<std::size_t>(std::upper_bound(table.r.begin(), table.r.end(), r) - table.r.begin());
      const double t = (r - table.r[j - 1]) / (table.r[j] - table.r[j - 1]);
      out[i] = (1.0 - t) * table.value[j - 1] + t * table.value[j];
    }
    return RadialProfile(std::move(grid), std::move(out));
  }
  using boost::math::interpolators::pchip;
  const pchip<std::vector<double>> spline(std::vector<double>(table.r), std::vector<double>(table.value));
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double r = grid->nodes()[i];
    if (r > hi) continue;
    out[i] = r <= lo ? table.value.front() : spline(r);
  }
  return RadialProfile(std::move(grid), std::move(out));
}

std::string format_double(double x) {
  char buf[32];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::general, 17);
  return ec == std::errc() ? std::string(buf, end) : std::string("nan");
}

void write_header(std::ostream& out, const Header& header) {
  for (const auto& [key, value] : header) out << "# " << key << ": " << value << '\n';
}

void write_columns(std::ostream& out, const Header& header, const std::vector<std::string>& names,
                   const std::vector<std::vector<double>>& columns) {
  if (names.size() != columns.size()) throw ParameterError("column names and columns differ in count");
  write_header(out, header);
  for (std::size_t c = 0; c < names.size(); ++c) out << (c ? "," : "") << names[c];
  out << '\n';
  const std::size_t rows = columns.empty() ? 0 : columns.front().size();
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t c = 0; c < columns.size(); ++c) out << (c ? "," : "") << format_double(columns[c][i]);
    out << '\n';
  }
}

void write_profile(std::ostream& out, const Header& header, const RadialProfile& f, const std::string& value_name) {
  write_columns(out, header, {"r", value_name}, {f.grid()->nodes(), f.values()});
}

void write_operator(std::ostream& out, const Header& header, const OperatorMatrix& m) {
  write_header(out, header);
  const auto& r = m.grid->nodes();
  out << "r";
  for (double x : r) out << ',' << format_double(x);
  out << '\n';
  for (Eigen::Index i = 0; i < m.entries.rows(); ++i) {
    out << format_double(r[i]);
    for (Eigen::Index j = 0; j < m.entries.cols(); ++j) out << ',' << format_double(m.entries(i, j));
    out << '\n';
  }
}

nlohmann::json to_json(const IntervalSet& set) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& iv : set.intervals()) out.push_back({iv.a, iv.b});
  return out;
}

nlohmann::json to_json(const SearchTrace& trace) {
  return {
      {"schema", kSchemaVersion},
      {"kind", "search_trace"},
      {"converged", trace.converged},
      {"iterations_used", trace.iterations_used},
      {"damped_steps", trace.damped_steps},
      {"recentered_steps", trace.recentered_steps},
      {"final_phi", trace.iterates.empty() ? 0.0 : trace.iterates.back()},
      {"iterates", trace.iterates},
  };
}

nlohmann::json to_json(const TrichotomyReport& report) {
  nlohmann::json split = nullptr;
  if (report.split) {
    split = {
        {"inner", to_json(report.split->inner)},     {"outer", to_json(report.split->outer)},
        {"inner_mass", report.split->inner_mass},    {"outer_mass", report.split->outer_mass},
        {"gap", {report.split->gap_lo, report.split->gap_hi}},
    };
  }
  return {
      {"schema", kSchemaVersion},
      {"kind", "trichotomy_report"},
      {"verdict", to_string(report.verdict)},
      {"radii", report.radii},
      {"evidence", report.evidence},
      {"trend_drop", optional_json(report.trend_drop)},
      {"monotone_spreading", optional_json(report.monotone_spreading)},
      {"split", split},
      {"alpha_estimate", optional_json(report.alpha_estimate)},
      {"split_gaps", report.split_gaps},
  };
}

nlohmann::json to_json(const BoundReport& report) {
  return {
      {"schema", kSchemaVersion},
      {"kind", "bound_report"},
      {"name", report.name},
      {"lhs", report.lhs},
      {"rhs", report.rhs},
      {"margin", report.margin},
      {"passed", report.passed},
      {"inputs", report.inputs},
      {"seed", optional_json(report.seed)},
      {"cross_check", optional_json(report.cross_check)},
  };
}

void write_summary_csv(std::ostream& out, const Header& header, const std::vector<BoundReport>& reports) {
  write_header(out, header);
  out << "name,lhs,rhs,margin,passed,seed\n";
  for (const auto& r : reports) {
    out << r.name << ',' << format_double(r.lhs) << ',' << format_double(r.rhs) << ',' << format_double(r.margin)
        << ',' << (r.passed ? "true" : "false") << ',' << (r.seed ? std::to_string(*r.seed) : "") << '\n';
  }
}

}  // namespace kplane::io
