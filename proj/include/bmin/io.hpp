#pragma once

// JSON documents for matrices, frames, algebras and reports, plus the CSV
// point-cloud format. Complex entries are [re, im] pairs.
//
//   matrix:  {"n": 3, "entries": [[[re, im], ...], ...]}
//   frame:   {"n": 3, "r": 2, "entries": n rows of r pairs}
//   algebra: {"kind": "block", "pattern": "2d,2f"}
//            {"kind": "diag", "n": 3} | {"kind": "pauli-diag", "q": 2}
//            {"kind": "custom", "elements": [matrix, ...]}

#include <iosfwd>
#include <map>
#include <string>

#include <json.hpp>

#include "bmin/variational.hpp"

namespace bmin {

using Json = nlohmann::json;

/// Throws ParseError on unreadable files or malformed JSON.
Json read_json_file(const std::string& path);

/// Rows x cols complex matrix from an array of [re, im] rows.
CMatrix parse_entries(const Json& entries, Eigen::Index rows, Eigen::Index cols);
Json entries_to_json(const CMatrix& m);

/// Throws ParseError on shape problems and InvalidInput if not Hermitian.
HermitianMatrix parse_matrix(const Json& doc);
Json matrix_to_json(const HermitianMatrix& m);

/// Columns are orthonormalized; throws ParseError or InvalidInput for a bad
/// frame.
Subspace parse_frame(const Json& doc);
Json frame_to_json(const Subspace& s);

SubalgebraBasis parse_algebra(const Json& doc);

/// diag | pauli:q | block:SPEC | custom:FILE, checked against ambient n.
/// A block pattern whose sizes do not add up to n is InvalidPattern.
SubalgebraBasis parse_algebra_spec(const std::string& spec, Eigen::Index n);

using Timings = std::map<std::string, double>;

Json report_to_json(const MinimalityReport& report, const Timings* timings = nullptr);
/// Inverse of report_to_json (timings are dropped).
MinimalityReport parse_report(const Json& doc);

Json best_approx_to_json(const BestApproxResult& result);

/// Header B_1..B_t, then one row per point, 17 significant digits.
void write_points_csv(std::ostream& os, const std::vector<MomentPoint>& points, Eigen::Index t);

/// Shortest decimal string that parses back to the same double.
std::string format_double(double v);

}  // namespace bmin
