// accretive_lab: command-line front end.
//
// Exit codes: 0 success / all properties pass, 1 property failure,
// 2 input or domain error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "accretive/accretive.hpp"

namespace {

using namespace accretive;

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitInput = 2;

void emit(const std::string& text, const std::string& out) {
  if (out.empty() || out == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(out);
  if (!f) throw Error(ErrorKind::InputParseError, "cannot write '" + out + "'");
  f << text;
}

std::string fmt17(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<int> parse_int_list(const std::string& s, const std::string& what) {
  std::vector<int> out;
  for (const auto& item : split_csv(s)) {
    try {
      std::size_t pos = 0;
      out.push_back(std::stoi(item, &pos));
      if (pos != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Error(ErrorKind::InputParseError, what + ": '" + item + "' is not an integer");
    }
  }
  return out;
}

struct Options {
  std::string in, out;
  double alpha = 0.5;
  std::string alg = "schur";
  std::string shift_policy = "deflate";
  int angles = kDefaultAngles;
  std::string schedule = "1,2,4,8,16,32,64,128,256,512,1024";
  int levels = 2;
  int trials = 200;
  std::uint64_t seed = 42;
  int samples = 1000;
  std::string config, properties, dims;
};

int cmd_power(const Options& o, const TolerancePolicy& tol) {
  const CMatrix t = matrix_from_json(read_json_file(o.in));
  PowerOptions opt;
  opt.zero_policy = parse_zero_policy(o.shift_policy);
  const PowerResult r = principal_power(t, o.alpha, parse_power_algorithm(o.alg), tol, opt);
  Json j;
  j["value"] = matrix_to_json(r.value);
  j["algorithm"] = to_string(r.algorithm);
  j["residual"] = r.residual;
  j["shift_used"] = r.shift_used;
  emit(dump17(j) + "\n", o.out);
  return kExitOk;
}

int cmd_numrange(const Options& o, const TolerancePolicy&) {
  if (o.angles < 8) throw Error(ErrorKind::InvalidArgument, "--angles must be at least 8");
  const CMatrix t = matrix_from_json(read_json_file(o.in));
  std::ostringstream os;
  write_boundary_csv(os, boundary(t, o.angles));
  emit(os.str(), o.out);
  return kExitOk;
}

int cmd_membership(const Options& o, const TolerancePolicy& tol) {
  const CMatrix a = matrix_from_json(read_json_file(o.in));
  const ConeMembershipReport r = cone_membership(a, tol);
  Json j;
  j["in_F"] = r.in_F;
  j["in_half_F"] = r.in_half_F;
  j["accretive"] = r.accretive;
  j["in_c"] = r.in_c;
  j["c_min"] = r.c_min;
  Json m;
  m["one_minus_a"] = r.margins.one_minus_a;
  m["one_minus_2a"] = r.margins.one_minus_2a;
  m["re_min"] = r.margins.re_min;
  m["c_min"] = r.margins.c_min;
  j["margins"] = std::move(m);
  emit(dump17(j) + "\n", o.out);
  return kExitOk;
}

int cmd_support(const Options& o, const TolerancePolicy& tol) {
  const CMatrix x = matrix_from_json(read_json_file(o.in));
  const auto sp = support_projection(x, tol);
  const auto lim = root_limit(x, parse_int_list(o.schedule, "--schedule"), tol);
  Json j;
  j["projection"] = matrix_to_json(sp.projection);
  j["agree"] = sp.left_right_agree;
  j["rank"] = sp.rank;
  j["principal_angle_gap"] = sp.principal_angle_gap;
  j["rank_ambiguous"] = sp.rank_ambiguous;
  Json dist = Json::array();
  for (std::size_t i = 0; i < lim.n.size(); ++i) {
    Json e;
    e["n"] = lim.n[i];
    e["distance"] = lim.distance[i];
    dist.push_back(std::move(e));
  }
  j["schedule_distances"] = std::move(dist);
  j["rate_constant"] = lim.constant;
  j["fitted_c"] = lim.fitted_c;
  emit(dump17(j) + "\n", o.out);
  return kExitOk;
}

int cmd_stinespring(const Options& o, const TolerancePolicy& tol) {
  const SubspaceMap t = map_from_json(read_json_file(o.in));
  const ChoiMatrix c = choi(t);
  const StinespringFactorization f = stinespring(c, tol);
  Json j;
  j["d"] = f.d;
  j["k"] = f.k;
  j["multiplicity"] = f.multiplicity;
  j["V"] = Json::object();
  {
    // V is (r·d) × k; written as a rectangular re/im pair.
    Json re = Json::array(), im = Json::array();
    for (Eigen::Index r = 0; r < f.V.rows(); ++r) {
      Json rr = Json::array(), ii = Json::array();
      for (Eigen::Index k = 0; k < f.V.cols(); ++k) {
        rr.push_back(f.V(r, k).real());
        ii.push_back(f.V(r, k).imag());
      }
      re.push_back(std::move(rr));
      im.push_back(std::move(ii));
    }
    j["V"]["rows"] = f.V.rows();
    j["V"]["cols"] = f.V.cols();
    j["V"]["re"] = std::move(re);
    j["V"]["im"] = std::move(im);
  }
  j["cb_norm"] = f.cb_norm;
  j["norm_T_of_identity"] = operator_norm(t.apply(identity(f.d)));
  emit(dump17(j) + "\n", o.out);
  return kExitOk;
}

int cmd_rcp_check(const Options& o, const TolerancePolicy& tol) {
  const SubspaceMap t = map_from_json(read_json_file(o.in));
  if (o.levels < 1) throw Error(ErrorKind::InvalidArgument, "--levels must be at least 1");
  if (o.trials < 1) throw Error(ErrorKind::InvalidArgument, "--trials must be at least 1");
  const PropertyReport r = rcp_check(t, o.levels, o.trials, o.seed, tol);
  emit(dump17(report_to_json(r, o.seed)) + "\n", o.out);
  return r.status == Status::Fail ? kExitFailure : kExitOk;
}

int cmd_cardioid(const Options& o, const TolerancePolicy& tol) {
  if (o.samples < 1) throw Error(ErrorKind::InvalidArgument, "--samples must be at least 1");
  std::string out = "re,im,in_cardioid,in_halfF_sqrt\n";
  for (int i = 0; i < o.samples; ++i) {
    Rng rng = Rng::stream(o.seed, "cardioid", static_cast<std::uint64_t>(i));
    const double th = rng.uniform(-kPi, kPi), r = rng.uniform(0.0, 1.1);
    const Complex z = std::polar(r, th);
    out += fmt17(z.real()) + "," + fmt17(z.imag()) + "," + (in_cardioid(z, tol) ? "1" : "0") + "," +
           (scalar_half_F(std::sqrt(z)) ? "1" : "0") + "\n";
  }
  emit(out, o.out);
  return kExitOk;
}

int cmd_verify(const Options& o, const TolerancePolicy& tol, const CLI::App& sub) {
  TrialConfig cfg;
  cfg.tol = tol;
  if (!o.config.empty()) cfg = trial_config_from_json(read_json_file(o.config), cfg);
  if (sub.count("--seed")) cfg.seed = o.seed;
  if (sub.count("--trials")) cfg.trials = o.trials;
  if (!o.dims.empty()) cfg.dims = parse_int_list(o.dims, "--dims");
  if (!o.properties.empty()) cfg.property_ids = split_csv(o.properties);
  const auto reports = run_suite(cfg);
  Json arr = Json::array();
  bool all_pass = true;
  for (const auto& r : reports) {
    arr.push_back(report_to_json(r, cfg.seed));
    all_pass = all_pass && r.status == Status::Pass;
    std::fprintf(stderr, "%-4s %-12s trials=%d worst_margin=%.3e elapsed=%.2fs\n", r.property_id.c_str(),
                 to_string(r.status), r.trials_run, r.worst_margin, r.elapsed);
  }
  emit(dump17(arr) + "\n", o.out);
  return all_pass ? kExitOk : kExitFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"accretive_lab: accretive matrices, fractional powers, numerical ranges and RCP maps"};
  app.require_subcommand(1);
  Options o;

  auto add_io = [&](CLI::App* s, bool needs_input) {
    if (needs_input) s->add_option("--in", o.in, "input JSON file")->required()->check(CLI::ExistingFile);
    s->add_option("--out", o.out, "output file (default: stdout)");
  };

  auto* power = app.add_subcommand("power", "principal fractional power T^alpha");
  add_io(power, true);
  power->add_option("--alpha", o.alpha, "exponent alpha > 0");
  power->add_option("--alg", o.alg, "schur | spectral | series (or the full algorithm name)");
  power->add_option("--shift-policy", o.shift_policy, "deflate | extrapolate (zero eigenvalue handling)");

  auto* numrange = app.add_subcommand("numrange", "sampled boundary of the numerical range as CSV");
  add_io(numrange, true);
  numrange->add_option("--angles", o.angles, "number of boundary angles (>= 8)");

  auto* membership = app.add_subcommand("membership", "cone membership report");
  add_io(membership, true);

  auto* support = app.add_subcommand("support", "support projection and x^{1/n} distances");
  add_io(support, true);
  support->add_option("--schedule", o.schedule, "comma-separated n values");

  auto* stine = app.add_subcommand("stinespring", "Stinespring factorisation of a CP map on M_d");
  add_io(stine, true);

  auto* rcp = app.add_subcommand("rcp-check", "sampled real complete positivity test");
  add_io(rcp, true);
  rcp->add_option("--levels", o.levels, "matrix levels n = 1..L");
  rcp->add_option("--trials", o.trials, "number of samples");
  rcp->add_option("--seed", o.seed, "random seed");

  auto* cardioid = app.add_subcommand("cardioid", "cardioid membership samples as CSV");
  add_io(cardioid, false);
  cardioid->add_option("--samples", o.samples, "number of samples");
  cardioid->add_option("--seed", o.seed, "random seed");

  auto* verify = app.add_subcommand("verify", "run the property catalogue P1-P17");
  add_io(verify, false);
  verify->add_option("--seed", o.seed, "random seed");
  verify->add_option("--trials", o.trials, "trials per property");
  verify->add_option("--config", o.config, "config JSON {seed, dims, trials, tolerances, properties}")
      ->check(CLI::ExistingFile);
  verify->add_option("--properties", o.properties, "comma-separated property ids");
  verify->add_option("--dims", o.dims, "comma-separated dimensions");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    const TolerancePolicy tol = tolerances_from_env();
    if (*power) return cmd_power(o, tol);
    if (*numrange) return cmd_numrange(o, tol);
    if (*membership) return cmd_membership(o, tol);
    if (*support) return cmd_support(o, tol);
    if (*stine) return cmd_stinespring(o, tol);
    if (*rcp) return cmd_rcp_check(o, tol);
    if (*cardioid) return cmd_cardioid(o, tol);
    if (*verify) return cmd_verify(o, tol, *verify);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}
