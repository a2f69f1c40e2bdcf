#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "kplane/cc.hpp"
#include "kplane/extremal.hpp"
#include "kplane/transform.hpp"
#include "kplane/verify.hpp"

namespace kplane::io {

inline constexpr int kSchemaVersion = 1;

/// A two-column profile as read from disk.
struct ProfileTable {
  std::vector<double> r;
  std::vector<double> value;
};

/// Parses `r,value` CSV: '#' lines are comments, the first other line must be
/// the header `r,value`, radii must be finite, nonnegative and strictly
/// increasing, and at least two rows are required. Throws DataError with the
/// offending line number otherwise.
ProfileTable parse_profile_csv(std::istream& in);
ProfileTable read_profile_csv(const std::string& path);

/// Monotone (PCHIP) interpolation of the table onto the grid nodes. Nodes
/// below the first radius take the first value; nodes beyond the last radius
/// are zero.
RadialProfile resample(const ProfileTable& table, GridPtr grid);

/// Lines written as '# ' comments ahead of every output file.
using Header = std::vector<std::pair<std::string, std::string>>;

void write_header(std::ostream& out, const Header& header);

/// Writes `names` as the CSV header row and the columns side by side.
void write_columns(std::ostream& out, const Header& header, const std::vector<std::string>& names,
                   const std::vector<std::vector<double>>& columns);

void write_profile(std::ostream& out, const Header& header, const RadialProfile& f,
                   const std::string& value_name = "value");

/// Rows are output nodes; the first column holds r_i and the header row lists
/// the input nodes r_j.
void write_operator(std::ostream& out, const Header& header, const OperatorMatrix& m);

/// Doubles are written with 17 significant digits so output is bit-stable.
std::string format_double(double x);

nlohmann::json to_json(const SearchTrace& trace);
nlohmann::json to_json(const TrichotomyReport& report);
nlohmann::json to_json(const BoundReport& report);
nlohmann::json to_json(const IntervalSet& set);

/// One line: name,lhs,rhs,margin,passed,seed.
void write_summary_csv(std::ostream& out, const Header& header, const std::vector<BoundReport>& reports);

}  // namespace kplane::io
