#include "cli.hpp"

#include <algorithm>
#include <boost/crc.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "htk/io.hpp"

namespace htk::cli {

namespace {

using io::SchemaError;

struct Options {
  std::string input;
  std::uint64_t seed = 0;
  std::optional<double> tol;
  int jobs = 1;
  std::string out, csv;
  bool timing = false;
};

struct Check {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct Context {
  const Options& opt;
  std::vector<Check> checks;
  json result = json::object();
  std::string csv;
  std::optional<double> tol_used;

  double tol(double fallback) {
    tol_used = opt.tol.value_or(fallback);
    return *tol_used;
  }
  void check(std::string name, bool pass, std::string detail = "") {
    checks.push_back({std::move(name), pass, std::move(detail)});
  }
};

std::string num(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

// fixed-format CSV so files are byte-stable
std::string csv_num(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// ---- free groups -----------------------------------------------------------

void certify_loop(const json& doc, Context& ctx) {
  auto in = io::read<io::LoopInput>(doc, "loop input");
  auto G = surface_group(in.genus);
  auto phi = in.phi();
  if (phi.rank != G.rank()) throw SchemaError("automorphism rank does not match the genus");
  int r_phi = in.r_phi.value_or(phi.r_phi);
  int dfrak = 0;
  Certificate c;
  try {
    in.spec.validate(G);
    dfrak = in.dfrak.value_or(std::max(estimate_dfrak(in.spec, phi, G), r_phi));
    c = certify_noncontractible(in.spec, phi, G, dfrak, r_phi, in.N);
  } catch (const std::invalid_argument& e) {
    throw SchemaError(e.what());
  }
  ctx.result["certificate"] = c;
  ctx.check("verdict", c.verdict,
            "C = " + std::to_string(c.C) + ", bound p(n - 6d) = " + std::to_string(c.bound) +
                (in.spec.n > 6 * dfrak ? "" : ", n <= 6d so the bound is vacuous"));
  ctx.check("oracle_agrees", c.oracle_agrees, "reduced loop has length " + std::to_string(c.gamma0_length));

  if (in.random_trials > 0) {
    std::mt19937_64 rng(ctx.opt.seed);
    int verdicts = 0, disagreements = 0;
    for (int t = 0; t < in.random_trials; ++t) {
      auto r = random_loop(rng, 3, 4, 2, 20);
      auto G2 = surface_group(r.genus);
      auto cert = certify_noncontractible(r.spec, r.phi, G2, r.dfrak, r.phi.r_phi, 5);
      verdicts += cert.verdict;
      if (cert.verdict && is_trivial(build_gamma0(r.spec, r.phi, G2))) ++disagreements;
    }
    ctx.result["random_trials"] = {{"trials", in.random_trials}, {"verdicts", verdicts},
                                   {"disagreements", disagreements}};
    ctx.check("random_soundness", disagreements == 0,
              std::to_string(verdicts) + " positive verdicts in " + std::to_string(in.random_trials) + " trials");
  }
}

// ---- arcs ------------------------------------------------------------------

struct BuiltSequence {
  arcs::FatGraph G;
  arcs::GoodSequence seq;
};

BuiltSequence build_sequence(const io::ArcInput& in) {
  BuiltSequence b;
  b.G = arcs::standard_surface(in.genus);
  Automorphism phi;
  try {
    arcs::check_arc(b.G, in.alpha);
    phi = in.monodromy.empty() ? identity_automorphism(2 * in.genus) : parse_monodromy(in.genus, in.monodromy);
  } catch (const std::invalid_argument& e) {
    throw SchemaError(e.what());
  }
  if (!arcs::embedded(b.G, in.alpha) || !arcs::non_separating(b.G, in.alpha))
    throw SchemaError("alpha must be embedded and non-separating");
  b.seq = arcs::build_good_sequence(b.G, in.alpha, phi, in.monodromy, in.sign);
  return b;
}

void good_sequence(const json& doc, Context& ctx) {
  auto in = io::read<io::ArcInput>(doc, "arc input");
  auto b = build_sequence(in);
  auto rep = arcs::validate_good_sequence(b.G, b.seq);
  ctx.result["sequence"] = b.seq;
  ctx.result["validation"] = rep;
  ctx.check("good_sequence", rep.pass(),
            std::to_string(b.seq.arcs.size()) + " arcs by " + b.seq.method + (rep.detail.empty() ? "" : ": " + rep.detail));
}

void slope_interval(const json& doc, Context& ctx) {
  auto in = io::read<io::ArcInput>(doc, "arc input");
  auto b = build_sequence(in);
  auto spec = arcs::branched_surface_from_sequence(b.G, b.seq);
  std::string why;
  ctx.check("orientation_consistent", arcs::orientation_consistent(spec, &why), why);
  auto I = arcs::slope_interval(spec);
  ctx.result["sheets"] = spec.n;
  ctx.result["interval"] = I;
  ctx.check("interval_nonempty", I.lo < I.hi, I.to_string());
  json rows = json::array();
  for (auto& text : in.slopes) {
    auto eps = arcs::parse_rational(text);
    auto W = arcs::lamination_weights(spec, eps);
    bool inside = I.contains(eps);
    bool ok;
    std::string detail;
    if (inside && eps == 0) {
      // the fiber itself: annulus weights vanish, so nothing is fully carried
      ok = W.feasible && W.residual == 0;
      detail = ok ? "fiber lamination, zero residual" : "fiber lamination rejected: " + W.reason;
    } else if (inside) {
      bool positive = W.feasible;
      for (auto& row : W.pieces)
        for (auto& x : row) positive = positive && x > 0;
      ok = W.feasible && W.fully_carried && W.residual == 0 && positive;
      detail = ok ? "fully carried, zero residual" : "expected positive weights: " + W.reason;
    } else {
      ok = !W.feasible;
      detail = ok ? "outside the interval, no weights" : "weights found outside the interval";
    }
    rows.push_back(json{{"slope", arcs::rational_text(eps)}, {"inside", inside}, {"weights", W}});
    ctx.check("weights " + arcs::rational_text(eps), ok, detail);
  }
  ctx.result["slopes"] = rows;
}

// ---- contact models ---------------------------------------------------------

json profile_json(const io::ProfileInput& in) {
  if (!in.registry.empty()) return json{{"registry", in.registry}, {"a", in.profile.a}, {"b", in.profile.b}};
  return in.profile;
}

double sample_t(const TorusProfile& p, int k, int n) { return p.a + (p.b - p.a) * k / (n - 1); }

void contact_check(const json& doc, Context& ctx) {
  auto in = io::read<io::ProfileInput>(doc, "profile input");
  auto m = contact_margin(in.profile, in.samples);
  ctx.result["profile"] = profile_json(in);
  ctx.result["margin"] = m;
  ctx.check("contact", m.contact(), "min f g' - f' g = " + num(m.min_delta) + " at t = " + num(m.at));
  std::ostringstream csv;
  csv << "t,delta\n";
  for (int k = 0; k < in.samples; ++k) {
    double t = sample_t(in.profile, k, in.samples);
    csv << csv_num(t) << "," << csv_num(in.profile.delta(t)) << "\n";
  }
  ctx.csv = csv.str();
}

void reeb(const json& doc, Context& ctx) {
  auto in = io::read<io::ProfileInput>(doc, "profile input");
  double tol = ctx.tol(1e-12);
  ctx.result["profile"] = profile_json(in);
  std::ostringstream csv;
  csv << "t,Rx,Ry,Rz,alpha_R_minus_1,i_R_dalpha\n";
  double r0 = 0, r1 = 0;
  try {
    for (int k = 0; k < in.samples; ++k) {
      double t = sample_t(in.profile, k, in.samples);
      auto R = reeb_field(in.profile, t);
      auto res = reeb_residuals(in.profile, t, R);
      r0 = std::max(r0, std::abs(res[0]));
      r1 = std::max(r1, std::abs(res[1]));
      csv << csv_num(t) << "," << csv_num(R.x) << "," << csv_num(R.y) << "," << csv_num(R.z) << ","
          << csv_num(res[0]) << "," << csv_num(res[1]) << "\n";
    }
  } catch (const std::domain_error& e) {
    ctx.check("reeb_field", false, e.what());
    return;
  }
  ctx.result["samples"] = in.samples;
  ctx.result["max_alpha_R_minus_1"] = r0;
  ctx.result["max_i_R_dalpha"] = r1;
  ctx.check("reeb_equations", r0 < tol && r1 < tol, "residuals " + num(r0) + ", " + num(r1));
  ctx.csv = csv.str();
}

void slope(const json& doc, Context& ctx) {
  auto in = io::read<io::SlopeInput>(doc, "slope input");
  double tol = ctx.tol(1e-10);
  auto T = in.form.make();
  json rows = json::array();
  std::vector<std::pair<double, double>> curve;
  std::ostringstream csv;
  csv << "eps,slope,slope_error_bound,dalpha_residual\n";
  for (double eps : in.eps) {
    PerturbationResult r;
    try {
      r = slope_perturbation(T, eps, in.periods, in.steps_per_period, in.negative_sign);
    } catch (const std::exception& e) {
      ctx.check("slope " + num(eps), false, e.what());
      continue;
    }
    bool in_range = in.negative_sign ? (eps <= r.slope && r.slope < 0) : (0 < r.slope && r.slope <= eps);
    ctx.check("slope " + num(eps), in_range && r.dalpha_residual < tol,
              "slope " + num(r.slope) + ", residual " + num(r.dalpha_residual));
    rows.push_back(json{{"eps", eps},
                        {"slope", r.slope},
                        {"slope_error_bound", r.slope_error_bound},
                        {"dalpha_residual", r.dalpha_residual},
                        {"reeb_proportionality_residual", r.reeb_proportionality_residual}});
    curve.push_back({eps, r.slope});
    csv << csv_num(eps) << "," << csv_num(r.slope) << "," << csv_num(r.slope_error_bound) << ","
        << csv_num(r.dalpha_residual) << "\n";
  }
  if (curve.size() >= 2) {
    // |slope| must shrink as |eps| shrinks
    std::sort(curve.begin(), curve.end(),
              [](auto& x, auto& y) { return std::abs(x.first) > std::abs(y.first); });
    bool mono = true;
    for (size_t k = 1; k < curve.size(); ++k) mono = mono && std::abs(curve[k].second) <= std::abs(curve[k - 1].second);
    ctx.check("monotone_to_zero", mono);
  }
  ctx.result["curve"] = rows;
  ctx.csv = csv.str();
}

void length_adjust_cmd(const json& doc, Context& ctx) {
  auto in = io::read<io::LengthInput>(doc, "length input");
  double tol = ctx.tol(1e-8);
  LengthAdjustment adj;
  try {
    adj = length_adjust(in.germ.make(), in.a, in.b, in.L);
  } catch (const std::exception& e) {
    ctx.check("length_adjust", false, e.what());
    return;
  }
  double worst = 0;
  json measured = json::array();
  for (double y : {-0.5, 0.0, 0.5}) {
    double m = measured_boundary_length(adj.H, in.b, y);
    worst = std::max(worst, std::abs(m - in.L));
    measured.push_back(json{{"y", y}, {"length", m}});
  }
  double formula = length_formula(in.b, adj.h_b);
  ctx.result["adjustment"] = {{"a", adj.a},   {"b", adj.b},   {"L", adj.L},
                              {"h_b", adj.h_b}, {"L0", adj.L0}, {"flat_until", adj.flat_until}};
  ctx.result["measured"] = measured;
  ctx.result["formula"] = formula;
  ctx.check("measured_length", worst < tol, "max |measured - L| = " + num(worst));
  ctx.check("length_formula", std::abs(formula - in.L) < tol, "-cos b / H(b) = " + num(formula));
}

void fill(const json& doc, Context& ctx) {
  auto req = io::read<FillRequest>(doc, "fill request");
  ctx.result["request"] = req;
  FillCheck ck;
  try {
    dehn_fill(req, &ck);
  } catch (const std::exception& e) {
    ctx.check("dehn_fill", false, e.what());
    return;
  }
  ctx.result["check"] = ck;
  ctx.check("dehn_fill", ck.ok(),
            "min delta " + num(ck.min_delta) + ", min R_z " + num(ck.min_Rz) + ", core limit " + num(ck.core_limit));
}

// ---- moser ----------------------------------------------------------------------

void moser_verify(const json& doc, Context& ctx) {
  auto in = io::read<io::MoserInput>(doc, "moser input");
  double tol = ctx.tol(in.tol);
  moser::PrimitivePair P;
  P.grid = in.grid;
  P.beta = in.beta.make();
  P.beta_prime = in.beta_prime.make();
  double area = P.min_area();
  ctx.check("positive_area", area > 0, "min area density " + num(area));
  if (area <= 0) return;
  moser::Flow flow;
  try {
    flow = moser::integrate_flow(P, in.steps, std::max(1, ctx.opt.jobs));
  } catch (const std::exception& e) {
    ctx.check("flow", false, e.what());
    return;
  }
  auto rep = moser::verify_pullback(flow, P, tol);
  ctx.result["pullback"] = rep;
  ctx.result["max_displacement"] = flow.max_displacement;
  ctx.check("pullback", rep.pass, "residual " + num(rep.residual));
  ctx.check("boundary_fixed", rep.boundary_displacement < 1e-9, "displacement " + num(rep.boundary_displacement));
  std::ostringstream csv;
  csv << "x,y,steps,error,order\n";
  json studies = json::array();
  for (auto& pt : in.convergence_points) {
    auto st = moser::rk4_convergence(P, pt[0], pt[1], in.convergence_steps);
    studies.push_back(json{{"x", pt[0]}, {"y", pt[1]}, {"study", st}});
    ctx.check("rk4_order (" + num(pt[0]) + ", " + num(pt[1]) + ")", st.min_order() >= 3.5,
              "min order " + num(st.min_order()));
    for (size_t k = 0; k < st.steps.size(); ++k)
      csv << csv_num(pt[0]) << "," << csv_num(pt[1]) << "," << st.steps[k] << "," << csv_num(st.errors[k]) << ","
          << (k == 0 ? std::string() : csv_num(st.orders[k - 1])) << "\n";
  }
  ctx.result["convergence"] = studies;
  ctx.csv = csv.str();
}

// ---- sutured ------------------------------------------------------------------------

void hierarchy_check(const json& doc, Context& ctx) {
  auto H = io::read<sutured::Hierarchy>(doc, "hierarchy");
  auto rep = sutured::hierarchy_validate(H);
  ctx.result["name"] = H.name;
  ctx.result["report"] = rep;
  std::string detail = rep.pass() ? std::to_string(H.steps.size()) + " steps, terminal pieces are product balls"
                                  : "step " + std::to_string(rep.failed_step) + ", " +
                                        sutured::citation_name(rep.citation) + ": " + rep.detail;
  ctx.check("hierarchy", rep.pass(), detail);
}

void gluing(const json& doc, Context& ctx) {
  auto in = io::read<sutured::GluingInput>(doc, "gluing input");
  if (ctx.opt.tol) in.tol = ctx.tol(in.tol);
  sutured::GluingLedger L;
  try {
    L = sutured::gluing_ledger(in);
  } catch (const std::exception& e) {
    ctx.check("gluing", false, e.what());
    return;
  }
  ctx.result["ledger"] = L;
  ctx.check("stokes", L.stokes_ok, L.noop() ? "nothing to adjust" : "common length " + num(L.common_length));
}

struct Command {
  std::string kind;  // document kind the input must declare
  std::string help;
  std::function<void(const json&, Context&)> fn;
  bool csv = false;
};

const std::map<std::string, Command>& commands() {
  static const std::map<std::string, Command> table{
      {"certify-loop", {"loop", "certify that a loop in the mapping torus is not contractible", certify_loop}},
      {"good-sequence", {"arc", "build and validate a good sequence of arcs", good_sequence}},
      {"slope-interval", {"arc", "slope interval of the branched surface and weights at given slopes", slope_interval}},
      {"contact-check", {"profile", "contact margin of a torus profile", contact_check, true}},
      {"reeb", {"profile", "Reeb field of a torus profile and its residuals", reeb, true}},
      {"slope", {"slope", "slope of the perturbed boundary form for each eps", slope, true}},
      {"length-adjust", {"length", "adjust the boundary length of a generating function", length_adjust_cmd}},
      {"fill", {"fill", "contact Dehn filling of a boundary torus", fill}},
      {"moser-verify", {"moser", "integrate the Moser flow and check the pullback", moser_verify, true}},
      {"hierarchy-check", {"hierarchy", "validate a sutured hierarchy", hierarchy_check}},
      {"gluing-ledger", {"gluing", "length bookkeeping for gluing a hierarchy back", gluing}},
  };
  return table;
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw SchemaError("cannot read " + path);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

std::string digest(const std::string& bytes) {
  boost::crc_32_type crc;
  crc.process_bytes(bytes.data(), bytes.size());
  char buf[32];
  std::snprintf(buf, sizeof buf, "crc32:%08x", (unsigned)crc.checksum());
  return buf;
}

bool write_text(const std::string& path, const std::string& text, std::ostream& err) {
  std::ofstream f(path, std::ios::binary);
  f << text;
  if (!f) {
    err << "error: cannot write " << path << "\n";
    return false;
  }
  return true;
}

}  // namespace

std::vector<std::string> subcommands() {
  std::vector<std::string> out;
  for (auto& [name, c] : commands()) out.push_back(name);
  return out;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Checks for hypertight contact structure constructions"};
  app.require_subcommand(1);
  Options opt;
  std::string chosen;
  for (auto& [name, c] : commands()) {
    auto* sub = app.add_subcommand(name, c.help);
    sub->add_option("input", opt.input, "input JSON document (kind \"" + c.kind + "\")")->required();
    sub->add_option("--seed", opt.seed, "seed for randomized trials");
    sub->add_option("--tol", opt.tol, "override the tolerance of the numerical checks");
    sub->add_option("--jobs", opt.jobs, "worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--out", opt.out, "write the JSON report here instead of stdout");
    if (c.csv) sub->add_option("--csv", opt.csv, "also write the data as CSV");
    sub->add_flag("--timing", opt.timing, "include wall time in the JSON report");
    sub->callback([&chosen, name = name] { chosen = name; });
  }

  std::vector<const char*> argv{"htk"};
  for (auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse((int)argv.size(), argv.data());
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  const Command& cmd = commands().at(chosen);
  auto t0 = std::chrono::steady_clock::now();
  Context ctx{opt, {}, json::object(), "", std::nullopt};
  std::string bytes;
  try {
    bytes = read_file(opt.input);
    json doc = io::parse_document(bytes, cmd.kind);
    cmd.fn(doc, ctx);
  } catch (const SchemaError& e) {
    json report = io::document("error", {{"subcommand", chosen}, {"error", e.what()}});
    out << report.dump(2) << "\n";
    err << "htk " << chosen << ": schema error: " << e.what() << "\n";
    return 2;
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  bool pass = !ctx.checks.empty() && std::all_of(ctx.checks.begin(), ctx.checks.end(), [](auto& c) { return c.pass; });
  json checks = json::array();
  for (auto& c : ctx.checks) checks.push_back(json{{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
  json body{{"subcommand", chosen}, {"input_digest", digest(bytes)}, {"seed", opt.seed}};
  if (ctx.tol_used) body["tol"] = *ctx.tol_used;
  body["pass"] = pass;
  body["checks"] = checks;
  body["result"] = ctx.result;
  if (opt.timing) body["wall_time_s"] = secs;
  std::string text = io::document("report", body).dump(2) + "\n";

  if (opt.out.empty())
    out << text;
  else if (!write_text(opt.out, text, err))
    return 2;
  if (!opt.csv.empty() && !write_text(opt.csv, ctx.csv, err)) return 2;

  err << "htk " << chosen << ": " << (pass ? "PASS" : "FAIL") << " (" << digest(bytes) << ")\n";
  for (auto& c : ctx.checks)
    err << "  [" << (c.pass ? "PASS" : "FAIL") << "] " << c.name << (c.detail.empty() ? "" : ": " + c.detail) << "\n";
  err << "  wall time " << num(secs) << " s\n";
  return pass ? 0 : 1;
}

}  // namespace htk::cli
