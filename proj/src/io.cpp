#include "bmin/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>

namespace bmin {

namespace {

[[noreturn]] void parse_fail(const std::string& what) { throw Error(ErrorCode::ParseError, what); }

Eigen::Index get_size(const Json& doc, const char* key) {
  if (!doc.contains(key)) parse_fail(std::string("missing field '") + key + "'");
  const Json& v = doc.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 1) parse_fail(std::string("'") + key + "' must be a positive integer");
  return static_cast<Eigen::Index>(v.get<long long>());
}

double get_number(const Json& doc, const char* key) {
  if (!doc.contains(key)) parse_fail(std::string("missing field '") + key + "'");
  const Json& v = doc.at(key);
  if (!v.is_number()) parse_fail(std::string("'") + key + "' must be a number");
  return v.get<double>();
}

const Json& get_field(const Json& doc, const char* key) {
  if (!doc.is_object() || !doc.contains(key)) parse_fail(std::string("missing field '") + key + "'");
  return doc.at(key);
}

Json density_to_json(const DensityMatrix& r) { return matrix_to_json(r.hermitian()); }

}  // namespace

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) parse_fail("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    parse_fail(path + ": " + e.what());
  }
}

CMatrix parse_entries(const Json& entries, Eigen::Index rows, Eigen::Index cols) {
  if (!entries.is_array() || static_cast<Eigen::Index>(entries.size()) != rows) {
    parse_fail("'entries' must be an array of " + std::to_string(rows) + " rows");
  }
  CMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const Json& row = entries[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      parse_fail("row " + std::to_string(i) + " must hold " + std::to_string(cols) + " entries");
    }
    for (Eigen::Index j = 0; j < cols; ++j) {
      const Json& z = row[static_cast<std::size_t>(j)];
      if (!z.is_array() || z.size() != 2 || !z[0].is_number() || !z[1].is_number()) {
        parse_fail("entry (" + std::to_string(i) + "," + std::to_string(j) + ") must be a [re, im] pair");
      }
      m(i, j) = Complex(z[0].get<double>(), z[1].get<double>());
    }
  }
  return m;
}

Json entries_to_json(const CMatrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

HermitianMatrix parse_matrix(const Json& doc) {
  if (!doc.is_object()) parse_fail("matrix document must be an object");
  const Eigen::Index n = get_size(doc, "n");
  if (!doc.contains("entries")) parse_fail("missing field 'entries'");
  return HermitianMatrix(parse_entries(doc.at("entries"), n, n));
}

Json matrix_to_json(const HermitianMatrix& m) {
  return {{"n", m.n()}, {"entries", entries_to_json(m.matrix())}};
}

Subspace parse_frame(const Json& doc) {
  if (!doc.is_object()) parse_fail("frame document must be an object");
  const Eigen::Index n = get_size(doc, "n");
  const Eigen::Index r = get_size(doc, "r");
  if (r > n) parse_fail("frame rank exceeds n");
  if (!doc.contains("entries")) parse_fail("missing field 'entries'");
  return Subspace::span(parse_entries(doc.at("entries"), n, r));
}

Json frame_to_json(const Subspace& s) {
  return {{"n", s.n()}, {"r", s.rank()}, {"entries", entries_to_json(s.frame())}};
}

SubalgebraBasis parse_algebra(const Json& doc) {
  if (!doc.is_object() || !doc.contains("kind") || !doc.at("kind").is_string()) {
    parse_fail("algebra document needs a string 'kind'");
  }
  const std::string kind = doc.at("kind").get<std::string>();
  SubalgebraBasis basis;
  if (kind == "diag") {
    basis = build_diagonal(get_size(doc, "n"));
  } else if (kind == "block") {
    if (!doc.contains("pattern")) parse_fail("block algebra needs 'pattern'");
    const Json& p = doc.at("pattern");
    std::string spec;
    if (p.is_string()) {
      spec = p.get<std::string>();
    } else if (p.is_array()) {
      for (const auto& item : p) {
        if (!item.is_string()) parse_fail("block pattern entries must be strings such as \"2f\"");
        if (!spec.empty()) spec += ',';
        spec += item.get<std::string>();
      }
    } else {
      parse_fail("block pattern must be a string or a list of strings");
    }
    const BlockPattern pattern = BlockPattern::parse(spec);
    if (doc.contains("n") && get_size(doc, "n") != pattern.total()) {
      throw Error(ErrorCode::InvalidPattern, "block sizes do not add up to n");
    }
    basis = build_block(pattern);
  } else if (kind == "pauli-diag") {
    basis = build_pauli_diagonal(static_cast<int>(get_size(doc, "q")));
  } else if (kind == "custom") {
    if (!doc.contains("elements") || !doc.at("elements").is_array()) parse_fail("custom algebra needs 'elements'");
    std::vector<HermitianMatrix> raw;
    for (const auto& e : doc.at("elements")) raw.push_back(parse_matrix(e));
    if (raw.empty()) throw Error(ErrorCode::EmptySpan, "custom algebra has no elements");
    for (const auto& m : raw) {
      if (m.n() != raw.front().n()) throw Error(ErrorCode::DimensionMismatch, "custom elements differ in size");
    }
    basis = orthonormalize(raw, BasisLabel::Custom);
  } else {
    parse_fail("unknown algebra kind '" + kind + "'");
  }
  if (kind != "block" && doc.contains("n") && get_size(doc, "n") != basis.n()) {
    throw Error(ErrorCode::DimensionMismatch, "algebra size does not match 'n'");
  }
  return basis;
}

SubalgebraBasis parse_algebra_spec(const std::string& spec, Eigen::Index n) {
  const auto colon = spec.find(':');
  const std::string head = spec.substr(0, colon);
  const std::string arg = colon == std::string::npos ? std::string() : spec.substr(colon + 1);
  SubalgebraBasis basis;
  if (head == "diag" && arg.empty()) {
    basis = build_diagonal(n);
  } else if (head == "pauli" && !arg.empty()) {
    std::size_t used = 0;
    int q = 0;
    try {
      q = std::stoi(arg, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != arg.size()) parse_fail("pauli:q needs an integer q, got '" + arg + "'");
    basis = build_pauli_diagonal(q);
  } else if (head == "block" && !arg.empty()) {
    const BlockPattern pattern = BlockPattern::parse(arg);
    if (pattern.total() != n) {
      throw Error(ErrorCode::InvalidPattern, "block sizes add up to " + std::to_string(pattern.total()) +
                                                 ", matrix has n = " + std::to_string(n));
    }
    basis = build_block(pattern);
  } else if (head == "custom" && !arg.empty()) {
    const Json doc = read_json_file(arg);
    basis = doc.is_array() ? parse_algebra(Json{{"kind", "custom"}, {"elements", doc}}) : parse_algebra(doc);
  } else {
    parse_fail("algebra must be diag, pauli:q, block:SPEC or custom:FILE, got '" + spec + "'");
  }
  if (basis.n() != n) {
    throw Error(ErrorCode::DimensionMismatch, "algebra acts on n = " + std::to_string(basis.n()) +
                                                  ", matrix has n = " + std::to_string(n));
  }
  return basis;
}

Json report_to_json(const MinimalityReport& report, const Timings* timings) {
  Json doc = {
      {"verdict", std::string(to_string(report.verdict))},
      {"reason", std::string(to_string(report.reason))},
      {"norm", report.norm},
      {"distance", report.distance},
      {"gap", report.gap},
      {"lower_bound", report.lower_bound},
      {"iterations", report.iterations},
  };
  if (report.certificate) {
    const Certificate& c = *report.certificate;
    doc["certificate"] = {
        {"x", matrix_to_json(c.x)},
        {"rho_plus", density_to_json(c.rho_plus)},
        {"rho_minus", density_to_json(c.rho_minus)},
        {"residual_eq", c.residual_eq},
        {"residual_perp", c.residual_perp},
    };
  }
  if (timings) doc["timings"] = *timings;
  return doc;
}

MinimalityReport parse_report(const Json& doc) {
  if (!doc.is_object()) parse_fail("report must be an object");
  MinimalityReport r;
  const auto verdict = doc.value("verdict", std::string());
  if (verdict == "minimal") {
    r.verdict = Verdict::Minimal;
  } else if (verdict == "not_minimal") {
    r.verdict = Verdict::NotMinimal;
  } else if (verdict == "undecided") {
    r.verdict = Verdict::Undecided;
  } else {
    parse_fail("unknown verdict '" + verdict + "'");
  }
  const auto reason = doc.value("reason", std::string());
  bool known = false;
  for (Reason cand : {Reason::NormNotTwoSided, Reason::MomentsDisjoint, Reason::CertificateFound, Reason::GapUndecided,
                      Reason::NearThreshold}) {
    if (to_string(cand) == reason) {
      r.reason = cand;
      known = true;
    }
  }
  if (!known) parse_fail("unknown reason '" + reason + "'");
  r.norm = get_number(doc, "norm");
  r.distance = get_number(doc, "distance");
  r.gap = get_number(doc, "gap");
  r.lower_bound = get_number(doc, "lower_bound");
  if (!doc.contains("iterations") || !doc.at("iterations").is_number_integer()) parse_fail("'iterations' must be an integer");
  r.iterations = doc.at("iterations").get<int>();
  if (doc.contains("certificate")) {
    const Json& c = get_field(doc, "certificate");
    Certificate cert;
    cert.x = parse_matrix(get_field(c, "x"));
    cert.rho_plus = DensityMatrix(parse_matrix(get_field(c, "rho_plus")));
    cert.rho_minus = DensityMatrix(parse_matrix(get_field(c, "rho_minus")));
    cert.residual_eq = get_number(c, "residual_eq");
    cert.residual_perp = get_number(c, "residual_perp");
    r.certificate = std::move(cert);
  }
  return r;
}

Json best_approx_to_json(const BestApproxResult& result) {
  Json x = Json::array();
  for (Eigen::Index k = 0; k < result.x_star.size(); ++k) x.push_back(result.x_star[k]);
  return {
      {"x_star", std::move(x)},
      {"dist", result.dist},
      {"lower_bound", result.lower_bound},
      {"iterations", result.iterations},
      {"converged", result.converged},
  };
}

std::string format_double(double v) {
  char buf[32];
  for (int digits = 15; digits <= 17; ++digits) {
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

void write_points_csv(std::ostream& os, const std::vector<MomentPoint>& points, Eigen::Index t) {
  for (Eigen::Index k = 0; k < t; ++k) os << (k ? "," : "") << "B_" << (k + 1);
  os << '\n';
  char buf[32];
  for (const auto& p : points) {
    if (p.coords.size() != t) throw Error(ErrorCode::DimensionMismatch, "write_points_csv: point has the wrong length");
    for (Eigen::Index k = 0; k < t; ++k) {
      std::snprintf(buf, sizeof buf, "%.17g", p.coords[k]);
      os << (k ? "," : "") << buf;
    }
    os << '\n';
  }
}

}  // namespace bmin
