#pragma once

// JSON interchange: matrices {"dim","re","im"}, tolerance overrides, trial
// configs {seed, dims, trials, tolerances, properties}, series
// {"coeffs_re","coeffs_im"} and subspace maps {ambient_dim, basis, images,
// codomain_dim}. Output goes through dump17, which prints every number with
// 17 significant digits; ±∞ and NaN are written as the strings "inf",
// "-inf" and "nan".

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "accretive/funcalc.hpp"
#include "accretive/matcore.hpp"
#include "accretive/rcp.hpp"
#include "accretive/report.hpp"
#include "accretive/verify.hpp"

namespace accretive {

using Json = nlohmann::ordered_json;

inline constexpr const char* kTolOverrideEnv = "ACCRETIVE_LAB_TOL_OVERRIDE";

namespace detail {

[[noreturn]] inline void parse_fail(const std::string& what) { throw Error(ErrorKind::InputParseError, what); }

inline double number_of(const Json& v, const std::string& where) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    const auto& s = v.get_ref<const std::string&>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
  }
  parse_fail(where + ": expected a number");
}

inline std::vector<std::vector<double>> real_grid(const Json& v, std::size_t rows, std::size_t cols,
                                                  const std::string& where) {
  if (!v.is_array() || v.size() != rows) parse_fail(where + ": expected " + std::to_string(rows) + " rows");
  std::vector<std::vector<double>> g(rows, std::vector<double>(cols));
  for (std::size_t i = 0; i < rows; ++i) {
    if (!v[i].is_array() || v[i].size() != cols) {
      parse_fail(where + ": row " + std::to_string(i) + " must have " + std::to_string(cols) + " entries");
    }
    for (std::size_t j = 0; j < cols; ++j) g[i][j] = number_of(v[i][j], where);
  }
  return g;
}

inline void format_number(std::string& out, double x) {
  if (std::isnan(x)) { out += "\"nan\""; return; }
  if (std::isinf(x)) { out += x > 0 ? "\"inf\"" : "\"-inf\""; return; }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  out += buf;
}

inline void dump_rec(std::string& out, const Json& j, int indent, int level) {
  const auto newline = [&](int l) {
    if (indent < 0) return;
    out += '\n';
    out.append(static_cast<std::size_t>(indent * l), ' ');
  };
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) { out += "{}"; return; }
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ',';
        first = false;
        newline(level + 1);
        out += Json(it.key()).dump();
        out += indent < 0 ? ":" : ": ";
        dump_rec(out, it.value(), indent, level + 1);
      }
      newline(level);
      out += '}';
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) { out += "[]"; return; }
      // Arrays of scalars stay on one line.
      bool flat = true;
      for (const auto& e : j) flat = flat && !e.is_structured();
      out += '[';
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += flat && indent >= 0 ? ", " : ",";
        if (!flat) newline(level + 1);
        dump_rec(out, j[i], indent, level + 1);
      }
      if (!flat) newline(level);
      out += ']';
      return;
    }
    case Json::value_t::number_float: format_number(out, j.get<double>()); return;
    default: out += j.dump(); return;
  }
}

}  // namespace detail

/// Serialises with 17 significant digits per number.
inline std::string dump17(const Json& j, int indent = 2) {
  std::string out;
  detail::dump_rec(out, j, indent, 0);
  return out;
}

inline Json parse_json_text(const std::string& text, const std::string& source = "input") {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    detail::parse_fail(source + ": " + e.what());
  }
}

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) detail::parse_fail("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json_text(ss.str(), path);
}

// ---- matrices -------------------------------------------------------------

inline CMatrix matrix_from_json(const Json& j) {
  if (!j.is_object()) detail::parse_fail("matrix: expected an object");
  for (const char* key : {"dim", "re", "im"}) {
    if (!j.contains(key)) detail::parse_fail(std::string("matrix: missing '") + key + "'");
  }
  if (!j["dim"].is_number_integer() || j["dim"].get<long long>() < 1) {
    detail::parse_fail("matrix: 'dim' must be a positive integer");
  }
  const auto d = static_cast<std::size_t>(j["dim"].get<long long>());
  const auto re = detail::real_grid(j["re"], d, d, "matrix.re");
  const auto im = detail::real_grid(j["im"], d, d, "matrix.im");
  CMatrix m(d, d);
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t c = 0; c < d; ++c) m(r, c) = Complex(re[r][c], im[r][c]);
  if (!m.allFinite()) detail::parse_fail("matrix: entries must be finite");
  return m;
}

inline Json matrix_to_json(const CMatrix& m) {
  Json re = Json::array(), im = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json rr = Json::array(), ii = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      rr.push_back(m(r, c).real());
      ii.push_back(m(r, c).imag());
    }
    re.push_back(std::move(rr));
    im.push_back(std::move(ii));
  }
  Json j;
  j["dim"] = m.rows();
  j["re"] = std::move(re);
  j["im"] = std::move(im);
  return j;
}

// ---- tolerances -----------------------------------------------------------

/// Applies the keys present in `j` on top of `base`.
inline TolerancePolicy tolerances_from_json(const Json& j, TolerancePolicy base = {}) {
  if (!j.is_object()) detail::parse_fail("tolerances: expected an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    const double v = detail::number_of(it.value(), "tolerances." + it.key());
    if (it.key() == "psd_tol") base.psd_tol = v;
    else if (it.key() == "norm_tol") base.norm_tol = v;
    else if (it.key() == "angle_tol") base.angle_tol = v;
    else if (it.key() == "commute_tol") base.commute_tol = v;
    else detail::parse_fail("tolerances: unknown key '" + it.key() + "'");
  }
  try {
    base.validate();
  } catch (const Error& e) {
    detail::parse_fail(e.what());
  }
  return base;
}

inline Json tolerances_to_json(const TolerancePolicy& t) {
  Json j;
  j["psd_tol"] = t.psd_tol;
  j["norm_tol"] = t.norm_tol;
  j["angle_tol"] = t.angle_tol;
  j["commute_tol"] = t.commute_tol;
  return j;
}

/// Defaults, overridden by the file named in ACCRETIVE_LAB_TOL_OVERRIDE.
inline TolerancePolicy tolerances_from_env(TolerancePolicy base = {}) {
  const char* path = std::getenv(kTolOverrideEnv);
  if (path == nullptr || *path == '\0') return base;
  return tolerances_from_json(read_json_file(path), base);
}

// ---- trial configs ----------------------------------------------------------

inline TrialConfig trial_config_from_json(const Json& j, TrialConfig cfg = {}) {
  if (!j.is_object()) detail::parse_fail("config: expected an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& key = it.key();
    const Json& v = it.value();
    if (key == "seed") {
      if (!v.is_number_unsigned()) detail::parse_fail("config.seed must be a nonnegative integer");
      cfg.seed = v.get<std::uint64_t>();
    } else if (key == "trials") {
      if (!v.is_number_integer()) detail::parse_fail("config.trials must be an integer");
      cfg.trials = v.get<int>();
    } else if (key == "dims") {
      if (!v.is_array()) detail::parse_fail("config.dims must be an array");
      cfg.dims.clear();
      for (const auto& d : v) {
        if (!d.is_number_integer()) detail::parse_fail("config.dims entries must be integers");
        cfg.dims.push_back(d.get<int>());
      }
    } else if (key == "tolerances") {
      cfg.tol = tolerances_from_json(v, cfg.tol);
    } else if (key == "properties") {
      if (!v.is_array()) detail::parse_fail("config.properties must be an array");
      cfg.property_ids.clear();
      for (const auto& p : v) {
        if (!p.is_string()) detail::parse_fail("config.properties entries must be strings");
        cfg.property_ids.push_back(p.get<std::string>());
      }
    } else {
      detail::parse_fail("config: unknown key '" + key + "'");
    }
  }
  return cfg;
}

inline Json trial_config_to_json(const TrialConfig& cfg) {
  Json j;
  j["seed"] = cfg.seed;
  j["dims"] = cfg.dims;
  j["trials"] = cfg.trials;
  j["tolerances"] = tolerances_to_json(cfg.tol);
  j["properties"] = cfg.property_ids;
  return j;
}

// ---- series ---------------------------------------------------------------

inline DiskFunction disk_function_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("coeffs_re")) detail::parse_fail("series: missing 'coeffs_re'");
  const Json& re = j["coeffs_re"];
  if (!re.is_array() || re.empty()) detail::parse_fail("series: 'coeffs_re' must be a nonempty array");
  const Json im = j.contains("coeffs_im") ? j["coeffs_im"] : Json::array();
  if (!im.is_array() || (!im.empty() && im.size() != re.size())) {
    detail::parse_fail("series: 'coeffs_im' must match 'coeffs_re' in length");
  }
  std::vector<Complex> c(re.size());
  for (std::size_t k = 0; k < re.size(); ++k) {
    c[k] = Complex(detail::number_of(re[k], "series.coeffs_re"),
                   im.empty() ? 0.0 : detail::number_of(im[k], "series.coeffs_im"));
    if (!std::isfinite(c[k].real()) || !std::isfinite(c[k].imag())) detail::parse_fail("series: nonfinite coefficient");
  }
  return DiskFunction(std::move(c));
}

inline Json disk_function_to_json(const DiskFunction& h) {
  Json re = Json::array(), im = Json::array();
  for (const auto& c : h.coeffs()) {
    re.push_back(c.real());
    im.push_back(c.imag());
  }
  Json j;
  j["coeffs_re"] = std::move(re);
  j["coeffs_im"] = std::move(im);
  return j;
}

/// Row-major two-index variant: coeffs_re[n][m] multiplies z^n w^m.
inline BidiskFunction bidisk_function_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("coeffs_re")) detail::parse_fail("series: missing 'coeffs_re'");
  const Json& re = j["coeffs_re"];
  if (!re.is_array() || re.empty()) detail::parse_fail("series: 'coeffs_re' must be a nonempty array of rows");
  const Json im = j.contains("coeffs_im") ? j["coeffs_im"] : Json::array();
  if (!im.is_array() || (!im.empty() && im.size() != re.size())) {
    detail::parse_fail("series: 'coeffs_im' must match 'coeffs_re' in shape");
  }
  std::vector<std::vector<Complex>> c(re.size());
  for (std::size_t n = 0; n < re.size(); ++n) {
    if (!re[n].is_array()) detail::parse_fail("series: rows of 'coeffs_re' must be arrays");
    if (!im.empty() && (!im[n].is_array() || im[n].size() != re[n].size())) {
      detail::parse_fail("series: 'coeffs_im' must match 'coeffs_re' in shape");
    }
    for (std::size_t m = 0; m < re[n].size(); ++m) {
      c[n].emplace_back(detail::number_of(re[n][m], "series.coeffs_re"),
                        im.empty() ? 0.0 : detail::number_of(im[n][m], "series.coeffs_im"));
    }
  }
  return BidiskFunction::dense(std::move(c));
}

// ---- maps -----------------------------------------------------------------

inline SubspaceMap map_from_json(const Json& j) {
  if (!j.is_object()) detail::parse_fail("map: expected an object");
  for (const char* key : {"ambient_dim", "basis", "images", "codomain_dim"}) {
    if (!j.contains(key)) detail::parse_fail(std::string("map: missing '") + key + "'");
  }
  if (!j["ambient_dim"].is_number_integer() || !j["codomain_dim"].is_number_integer()) {
    detail::parse_fail("map: dimensions must be integers");
  }
  const int d = j["ambient_dim"].get<int>(), k = j["codomain_dim"].get<int>();
  if (d < 1 || k < 1) detail::parse_fail("map: dimensions must be positive");
  if (!j["basis"].is_array() || !j["images"].is_array()) detail::parse_fail("map: 'basis' and 'images' must be arrays");
  std::vector<CMatrix> basis, images;
  for (const auto& b : j["basis"]) basis.push_back(matrix_from_json(b));
  for (const auto& y : j["images"]) images.push_back(matrix_from_json(y));
  try {
    return SubspaceMap(MatrixSubspace(d, std::move(basis)), k, std::move(images));
  } catch (const Error& e) {
    detail::parse_fail(std::string("map: ") + e.what());
  }
}

inline Json map_to_json(const SubspaceMap& t) {
  Json j;
  j["ambient_dim"] = t.domain().ambient_dim();
  Json basis = Json::array(), images = Json::array();
  for (const auto& b : t.domain().basis()) basis.push_back(matrix_to_json(b));
  for (const auto& y : t.images()) images.push_back(matrix_to_json(y));
  j["basis"] = std::move(basis);
  j["images"] = std::move(images);
  j["codomain_dim"] = t.codomain_dim();
  return j;
}

// ---- reports --------------------------------------------------------------

inline Json report_to_json(const PropertyReport& r, std::uint64_t seed) {
  Json j;
  j["property_id"] = r.property_id;
  j["seed"] = seed;
  j["trials_run"] = r.trials_run;
  j["status"] = to_string(r.status);
  j["worst_margin"] = r.worst_margin;
  Json fails = Json::array();
  for (const auto& f : r.failures) {
    Json fj;
    fj["digest"] = f.digest;
    fj["margin"] = f.margin;
    fj["check"] = f.check;
    fails.push_back(std::move(fj));
  }
  j["failures"] = std::move(fails);
  Json checks = Json::array();
  for (const auto& c : r.checks) {
    Json cj;
    cj["name"] = c.name;
    cj["tolerance"] = c.tolerance;
    cj["evaluated"] = c.evaluated;
    cj["violations"] = c.violations;
    cj["inconclusive"] = c.inconclusive;
    cj["worst_margin"] = c.worst_margin;
    checks.push_back(std::move(cj));
  }
  j["checks"] = std::move(checks);
  if (r.witness) j["witness"] = matrix_to_json(*r.witness);
  if (!r.notes.empty()) j["notes"] = r.notes;
  return j;
}

}  // namespace accretive
