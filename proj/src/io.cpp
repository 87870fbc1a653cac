#include "htk/io.hpp"

#include <cmath>
#include <sstream>

namespace htk {

namespace {

using io::SchemaError;

template <class T>
T get_or(const json& j, const char* key, T fallback) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return fallback;
  return it->get<T>();
}

void require_object(const json& j, const char* what) {
  if (!j.is_object()) throw SchemaError(std::string(what) + " must be an object");
}

int sign_field(const json& j, const char* key, int fallback = 1) {
  int s = get_or<int>(j, key, fallback);
  if (s != 1 && s != -1) throw SchemaError(std::string(key) + " must be +1 or -1");
  return s;
}

}  // namespace

// ---- free groups ---------------------------------------------------------------

void to_json(json& j, const SurfaceGroup& g) { j = json{{"genus", g.genus}, {"eta", g.eta}}; }
void from_json(const json& j, SurfaceGroup& g) {
  require_object(j, "surface group");
  g = surface_group(j.at("genus").get<int>());
  if (j.contains("eta") && j.at("eta").get<Word>() != g.eta) throw SchemaError("eta does not match the genus");
}

void to_json(json& j, const Automorphism& a) {
  j = json{{"name", a.name}, {"rank", a.rank}, {"images", a.images}, {"inverse_images", a.inverse_images},
           {"r_phi", a.r_phi}};
}
void from_json(const json& j, Automorphism& a) {
  require_object(j, "automorphism");
  a.name = get_or<std::string>(j, "name", "");
  a.rank = j.at("rank").get<int>();
  a.images = j.at("images").get<std::vector<Word>>();
  a.inverse_images = j.at("inverse_images").get<std::vector<Word>>();
  a.r_phi = get_or<int>(j, "r_phi", 4);
  if ((int)a.images.size() != a.rank || (int)a.inverse_images.size() != a.rank)
    throw SchemaError("automorphism needs one image per generator");
  for (auto* v : {&a.images, &a.inverse_images})
    for (auto& w : *v)
      for (int x : w)
        if (x == 0 || std::abs(x) > a.rank) throw SchemaError("letter out of range in automorphism");
  if (!a.check()) throw SchemaError("images and inverse images are not mutually inverse");
}

void to_json(json& j, const LoopSpec& s) {
  j = json{{"p", s.p}, {"n", s.n}, {"B", s.B}, {"O", s.O}, {"sigma", s.sigma}, {"o_bound", s.o_bound}};
}
void from_json(const json& j, LoopSpec& s) {
  require_object(j, "loop spec");
  s.p = j.at("p").get<int>();
  s.n = j.at("n").get<int>();
  s.B = j.at("B").get<std::vector<Word>>();
  s.O = j.at("O").get<std::vector<Word>>();
  s.sigma = j.at("sigma").get<std::vector<int>>();
  s.o_bound = get_or<int>(j, "o_bound", 64);
}

void to_json(json& j, const Certificate& c) {
  j = json{{"C", c.C},
           {"dfrak", c.dfrak},
           {"r_phi", c.r_phi},
           {"N", c.N},
           {"bound", c.bound},
           {"verdict", c.verdict},
           {"oracle_agrees", c.oracle_agrees},
           {"gamma0_trivial", c.gamma0_trivial},
           {"gamma0_length", c.gamma0_length}};
}
void from_json(const json& j, Certificate& c) {
  require_object(j, "certificate");
  c.C = j.at("C").get<long long>();
  c.dfrak = j.at("dfrak").get<int>();
  c.r_phi = j.at("r_phi").get<int>();
  c.N = j.at("N").get<int>();
  c.bound = j.at("bound").get<long long>();
  c.verdict = j.at("verdict").get<bool>();
  c.oracle_agrees = j.at("oracle_agrees").get<bool>();
  c.gamma0_trivial = j.at("gamma0_trivial").get<bool>();
  c.gamma0_length = j.at("gamma0_length").get<int>();
}

// ---- contact models ------------------------------------------------------------------

void to_json(json& j, const Term& t) {
  if (t.kind == Term::Poly) {
    j = json{{"kind", "poly"}, {"coeffs", t.coeffs}};
    return;
  }
  j = json{{"kind", t.kind == Term::Cos ? "cos" : "sin"}, {"amp", t.amp},       {"freq", t.freq},
           {"phase", t.phase},                            {"growth", t.growth}, {"center", t.center}};
}
void from_json(const json& j, Term& t) {
  require_object(j, "term");
  auto kind = j.at("kind").get<std::string>();
  t = Term{};
  if (kind == "poly") {
    t.kind = Term::Poly;
    t.coeffs = j.at("coeffs").get<std::vector<double>>();
    return;
  }
  if (kind != "cos" && kind != "sin") throw SchemaError("term kind must be poly, cos or sin");
  t.kind = kind == "cos" ? Term::Cos : Term::Sin;
  t.amp = get_or<double>(j, "amp", 1);
  t.freq = get_or<double>(j, "freq", 1);
  t.phase = get_or<double>(j, "phase", 0);
  t.growth = get_or<double>(j, "growth", 0);
  t.center = get_or<double>(j, "center", 0);
}
void to_json(json& j, const Fn1& f) { j = f.terms; }
void from_json(const json& j, Fn1& f) {
  if (!j.is_array()) throw SchemaError("a function is an array of terms");
  f.terms = j.get<std::vector<Term>>();
}

void to_json(json& j, const TorusProfile& p) {
  j = json{{"name", p.name}, {"f", p.f}, {"g", p.g}, {"a", p.a}, {"b", p.b}};
}
void from_json(const json& j, TorusProfile& p) {
  require_object(j, "profile");
  p.name = get_or<std::string>(j, "name", "");
  p.f = j.at("f").get<Fn1>();
  p.g = j.at("g").get<Fn1>();
  p.a = j.at("a").get<double>();
  p.b = j.at("b").get<double>();
  if (!(p.a < p.b)) throw SchemaError("profile interval needs a < b");
}

void to_json(json& j, const MarginReport& m) {
  j = json{{"min_delta", m.min_delta},
           {"at", m.at},
           {"exact", m.exact},
           {"nonvanishing", m.nonvanishing},
           {"contact", m.contact()}};
}

void to_json(json& j, const FillRequest& r) {
  j = json{{"u", r.u}, {"v", r.v}, {"p", r.p}, {"q", r.q}, {"threshold", r.threshold},
           {"reeb_direction", r.reeb_direction}};
  if (r.declared_meridian_meets_S_positively)
    j["declared_meridian_meets_S_positively"] = *r.declared_meridian_meets_S_positively;
  if (r.declared_meridian_meets_reeb_negatively)
    j["declared_meridian_meets_reeb_negatively"] = *r.declared_meridian_meets_reeb_negatively;
}
void from_json(const json& j, FillRequest& r) {
  require_object(j, "fill request");
  r = FillRequest{};
  r.u = j.at("u").get<double>();
  r.v = j.at("v").get<double>();
  r.p = j.at("p").get<long>();
  r.q = j.at("q").get<long>();
  r.threshold = get_or<double>(j, "threshold", r.threshold);
  r.reeb_direction = get_or<std::array<int, 2>>(j, "reeb_direction", r.reeb_direction);
  if (j.contains("declared_meridian_meets_S_positively"))
    r.declared_meridian_meets_S_positively = j.at("declared_meridian_meets_S_positively").get<bool>();
  if (j.contains("declared_meridian_meets_reeb_negatively"))
    r.declared_meridian_meets_reeb_negatively = j.at("declared_meridian_meets_reeb_negatively").get<bool>();
}
void to_json(json& j, const FillCheck& c) {
  j = json{{"g0_zero", c.g0_zero},     {"boundary_exact", c.boundary_exact}, {"core_smooth", c.core_smooth},
           {"min_delta", c.min_delta}, {"min_Rz", c.min_Rz},                 {"core_limit", c.core_limit},
           {"int_S", c.int_S},         {"int_R", c.int_R},                   {"ok", c.ok()}};
}

// ---- arcs -----------------------------------------------------------------------------

namespace arcs {

std::string rational_text(const Rational& r) {
  std::ostringstream os;
  os << numerator(r);
  if (denominator(r) != 1) os << "/" << denominator(r);
  return os.str();
}

// decimal digits only; cpp_int would read a leading 0 as octal
static boost::multiprecision::cpp_int dec_int(std::string s) {
  bool neg = !s.empty() && (s[0] == '-' || s[0] == '+') && s[0] == '-';
  if (!s.empty() && (s[0] == '-' || s[0] == '+')) s.erase(0, 1);
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) throw SchemaError("bad digits");
  s.erase(0, std::min(s.find_first_not_of('0'), s.size() - 1));
  boost::multiprecision::cpp_int v(s);
  return neg ? boost::multiprecision::cpp_int(-v) : v;
}

Rational parse_rational(const std::string& s) {
  try {
    auto slash = s.find('/');
    if (slash != std::string::npos) {
      auto q = dec_int(s.substr(slash + 1));
      if (q == 0) throw SchemaError("zero denominator");
      return Rational(dec_int(s.substr(0, slash)), q);
    }
    auto dot = s.find('.');
    if (dot == std::string::npos) return Rational(dec_int(s));
    std::string frac = s.substr(dot + 1);
    if (frac.empty() || frac[0] == '-' || frac[0] == '+') throw SchemaError("bad decimal");
    boost::multiprecision::cpp_int den = 1;
    for (size_t i = 0; i < frac.size(); ++i) den *= 10;
    return Rational(dec_int(s.substr(0, dot) + frac), den);
  } catch (const std::exception&) {
    throw SchemaError("not a rational: " + s);
  }
}

void to_json(json& j, const Arc& a) { j = json{{"start", a.start}, {"end", a.end}, {"path", a.path}}; }
void from_json(const json& j, Arc& a) {
  require_object(j, "arc");
  a.start = j.at("start").get<double>();
  a.end = j.at("end").get<double>();
  a.path = j.at("path").get<Word>();
}

void to_json(json& j, const FatGraph& G) { j = json{{"vertices", G.vertices}, {"rotation", G.rotation}}; }
void from_json(const json& j, FatGraph& G) {
  require_object(j, "fat graph");
  try {
    G = make_fat_graph(j.at("vertices").get<int>(), j.at("rotation").get<std::vector<std::vector<int>>>());
  } catch (const std::invalid_argument& e) {
    throw SchemaError(std::string("fat graph: ") + e.what());
  }
}

void to_json(json& j, const GoodSequence& s) {
  j = json{{"alpha", s.alpha}, {"monodromy", s.monodromy},     {"phi", s.phi},      {"sign", s.sign},
           {"arcs", s.arcs},   {"chain_length", s.chain_length}, {"method", s.method}};
}
void from_json(const json& j, GoodSequence& s) {
  require_object(j, "good sequence");
  s.alpha = j.at("alpha").get<Arc>();
  s.monodromy = get_or<std::string>(j, "monodromy", "");
  s.phi = j.at("phi").get<Automorphism>();
  s.sign = sign_field(j, "sign");
  s.arcs = j.at("arcs").get<std::vector<Arc>>();
  s.chain_length = get_or<int>(j, "chain_length", 0);
  s.method = get_or<std::string>(j, "method", "");
}

void to_json(json& j, const SequenceReport& r) {
  j = json{{"first_is_image", r.first_is_image}, {"last_is_alpha", r.last_is_alpha},
           {"consecutive_ok", r.consecutive_ok}, {"arcs_ok", r.arcs_ok},
           {"first_bad", r.first_bad},           {"detail", r.detail},
           {"pass", r.pass()}};
}

void to_json(json& j, const BranchLine& b) {
  j = json{{"annulus", b.annulus}, {"sheet", b.sheet}, {"level", b.level}, {"orientation", b.orientation},
           {"cusp", b.cusp}};
}
void from_json(const json& j, BranchLine& b) {
  require_object(j, "branch line");
  b.annulus = j.at("annulus").get<int>();
  b.sheet = j.at("sheet").get<int>();
  b.level = j.at("level").get<int>();
  b.orientation = sign_field(j, "orientation");
  b.cusp = sign_field(j, "cusp");
}

void to_json(json& j, const BranchedSurfaceSpec& s) {
  json annuli = json::array();
  for (auto& a : s.annuli) annuli.push_back(json{{"index", a.index}, {"start", a.start}, {"end", a.end}});
  j = json{{"n", s.n},          {"sign", s.sign},   {"boundary_length", s.boundary_length},
           {"annuli", annuli}, {"lines", s.lines}, {"sheet_orientation", s.sheet_orientation}};
}
void from_json(const json& j, BranchedSurfaceSpec& s) {
  require_object(j, "branched surface");
  s.n = j.at("n").get<int>();
  s.sign = sign_field(j, "sign");
  s.boundary_length = j.at("boundary_length").get<double>();
  s.annuli.clear();
  for (auto& a : j.at("annuli"))
    s.annuli.push_back({a.at("index").get<int>(), a.at("start").get<double>(), a.at("end").get<double>()});
  s.lines = j.at("lines").get<std::vector<BranchLine>>();
  s.sheet_orientation = j.at("sheet_orientation").get<std::vector<int>>();
}

static json rationals(const std::vector<Rational>& v) {
  json a = json::array();
  for (auto& x : v) a.push_back(rational_text(x));
  return a;
}
static std::vector<Rational> parse_rationals(const json& j) {
  std::vector<Rational> out;
  for (auto& x : j) out.push_back(parse_rational(x.get<std::string>()));
  return out;
}

void to_json(json& j, const WeightSystem& w) {
  json pieces = json::array();
  for (auto& row : w.pieces) pieces.push_back(rationals(row));
  j = json{{"feasible", w.feasible},
           {"fully_carried", w.fully_carried},
           {"slope", rational_text(w.slope)},
           {"pieces", pieces},
           {"sheet", rationals(w.sheet)},
           {"annulus", rationals(w.annulus)},
           {"residual", rational_text(w.residual)},
           {"reason", w.reason}};
}
void from_json(const json& j, WeightSystem& w) {
  require_object(j, "weight system");
  w.feasible = j.at("feasible").get<bool>();
  w.fully_carried = j.at("fully_carried").get<bool>();
  w.slope = parse_rational(j.at("slope").get<std::string>());
  w.pieces.clear();
  for (auto& row : j.at("pieces")) w.pieces.push_back(parse_rationals(row));
  w.sheet = parse_rationals(j.at("sheet"));
  w.annulus = parse_rationals(j.at("annulus"));
  w.residual = parse_rational(j.at("residual").get<std::string>());
  w.reason = get_or<std::string>(j, "reason", "");
}

void to_json(json& j, const SlopeInterval& s) {
  j = json{{"lo", rational_text(s.lo)},
           {"hi", rational_text(s.hi)},
           {"lo_closed", s.lo_closed},
           {"hi_closed", s.hi_closed},
           {"text", s.to_string()}};
}

}  // namespace arcs

// ---- moser ---------------------------------------------------------------------------

namespace moser {

void to_json(json& j, const GriddedSurface& g) {
  j = json{{"n", g.n}, {"domain", g.domain == Domain::Square ? "square" : "disk"}};
}
void from_json(const json& j, GriddedSurface& g) {
  require_object(j, "grid");
  g.n = j.at("n").get<int>();
  auto d = get_or<std::string>(j, "domain", "square");
  if (d != "square" && d != "disk") throw SchemaError("grid domain must be square or disk");
  g.domain = d == "square" ? Domain::Square : Domain::Disk;
  if (g.n < 9) throw SchemaError("grid needs at least 9 nodes per side");
}

void to_json(json& j, const PullbackReport& r) {
  j = json{{"residual", r.residual},
           {"equivariance", r.equivariance},
           {"boundary_displacement", r.boundary_displacement},
           {"pass", r.pass}};
}

void to_json(json& j, const ConvergenceStudy& c) {
  j = json{{"steps", c.steps}, {"errors", c.errors}, {"orders", c.orders}, {"min_order", c.min_order()}};
}

}  // namespace moser

// ---- sutured ---------------------------------------------------------------------------

namespace sutured {

void to_json(json& j, const Region& r) {
  j = json{{"id", r.id}, {"sign", r.sign}, {"genus", r.genus}, {"boundaries", r.boundaries}};
}
void from_json(const json& j, Region& r) {
  require_object(j, "region");
  r.id = j.at("id").get<std::string>();
  r.sign = j.at("sign").get<int>();
  r.genus = get_or<int>(j, "genus", 0);
  r.boundaries = j.at("boundaries").get<int>();
}

void to_json(json& j, const Suture& s) {
  j = json{{"id", s.id}, {"core_sign", s.core_sign}, {"plus_region", s.plus_region}, {"minus_region", s.minus_region}};
}
void from_json(const json& j, Suture& s) {
  require_object(j, "suture");
  s.id = j.at("id").get<std::string>();
  s.core_sign = get_or<int>(j, "core_sign", 1);
  s.plus_region = j.at("plus_region").get<std::string>();
  s.minus_region = j.at("minus_region").get<std::string>();
}

void to_json(json& j, const BoundaryComponent& b) {
  j = json{{"id", b.id}, {"genus", b.genus}, {"toric", b.toric}, {"sutures", b.sutures}, {"regions", b.regions}};
}
void from_json(const json& j, BoundaryComponent& b) {
  require_object(j, "boundary component");
  b.id = j.at("id").get<std::string>();
  b.genus = j.at("genus").get<int>();
  b.toric = get_or<bool>(j, "toric", false);
  b.sutures = get_or<std::vector<Suture>>(j, "sutures", {});
  b.regions = get_or<std::vector<Region>>(j, "regions", {});
}

void to_json(json& j, const Piece& p) {
  j = json{{"id", p.id},
           {"boundary", p.boundary},
           {"irreducible_declared", p.irreducible_declared},
           {"taut_declared", p.taut_declared}};
}
void from_json(const json& j, Piece& p) {
  require_object(j, "piece");
  p.id = j.at("id").get<std::string>();
  p.boundary = j.at("boundary").get<std::vector<BoundaryComponent>>();
  p.irreducible_declared = get_or<bool>(j, "irreducible_declared", false);
  p.taut_declared = get_or<bool>(j, "taut_declared", false);
}

void to_json(json& j, const SuturedManifold& m) { j = json{{"pieces", m.pieces}}; }
void from_json(const json& j, SuturedManifold& m) {
  require_object(j, "sutured manifold");
  m.pieces = j.at("pieces").get<std::vector<Piece>>();
}

void to_json(json& j, const SutureArc& a) {
  j = json{{"suture", a.suture}, {"sign", a.sign}, {"position", a.position}, {"separating", a.separating}};
}
void from_json(const json& j, SutureArc& a) {
  require_object(j, "suture arc");
  a.suture = j.at("suture").get<std::string>();
  a.sign = j.at("sign").get<int>();
  a.position = get_or<double>(j, "position", 0.5);
  a.separating = get_or<bool>(j, "separating", false);
}

void to_json(json& j, const BoundaryCurve& c) {
  j = json{{"component", c.component},         {"transverse", c.transverse}, {"arcs", c.arcs},
           {"lies_in", c.lies_in},             {"suture_class", c.suture_class},
           {"bounds_disk", c.bounds_disk}};
}
void from_json(const json& j, BoundaryCurve& c) {
  require_object(j, "boundary curve");
  c.component = j.at("component").get<std::string>();
  c.transverse = get_or<bool>(j, "transverse", true);
  c.arcs = get_or<std::vector<SutureArc>>(j, "arcs", {});
  c.lies_in = get_or<std::string>(j, "lies_in", "");
  c.suture_class = get_or<int>(j, "suture_class", 0);
  c.bounds_disk = get_or<bool>(j, "bounds_disk", false);
}

void to_json(json& j, const SurfaceComponent& s) {
  j = json{{"genus", s.genus}, {"curves", s.curves}, {"pi1_injective_declared", s.pi1_injective_declared}};
}
void from_json(const json& j, SurfaceComponent& s) {
  require_object(j, "surface component");
  s.genus = j.at("genus").get<int>();
  s.curves = j.at("curves").get<std::vector<BoundaryCurve>>();
  s.pi1_injective_declared = get_or<bool>(j, "pi1_injective_declared", true);
}

void to_json(json& j, const DecompositionStep& s) {
  j = json{{"piece", s.piece}, {"surface", s.surface}, {"result", s.result}};
}
void from_json(const json& j, DecompositionStep& s) {
  require_object(j, "decomposition step");
  s.piece = j.at("piece").get<std::string>();
  s.surface = j.at("surface").get<std::vector<SurfaceComponent>>();
  s.result = j.at("result").get<std::vector<Piece>>();
}

void to_json(json& j, const OrbitRecord& o) {
  j = json{{"id", o.id}, {"crossings", o.crossings}, {"carried_by", o.carried_by}};
}
void from_json(const json& j, OrbitRecord& o) {
  require_object(j, "orbit record");
  o.id = j.at("id").get<std::string>();
  o.crossings = j.at("crossings").get<std::vector<int>>();
  o.carried_by = get_or<std::string>(j, "carried_by", "");
}

void to_json(json& j, const Hierarchy& h) {
  j = json{{"name", h.name},
           {"start", h.start},
           {"steps", h.steps},
           {"annular_from", h.annular_from},
           {"orbits", h.orbits}};
}
void from_json(const json& j, Hierarchy& h) {
  require_object(j, "hierarchy");
  h.name = get_or<std::string>(j, "name", "");
  h.start = j.at("start").get<SuturedManifold>();
  h.steps = j.at("steps").get<std::vector<DecompositionStep>>();
  h.annular_from = get_or<int>(j, "annular_from", 0);
  h.orbits = get_or<std::vector<OrbitRecord>>(j, "orbits", {});
}

void to_json(json& j, const DecompositionLedger& l) {
  j = json{{"chi_surface", l.chi_surface},
           {"chi_plus", {{"before", l.chi_plus_before}, {"after", l.chi_plus}, {"declared", l.declared_chi_plus}}},
           {"chi_minus", {{"before", l.chi_minus_before}, {"after", l.chi_minus}, {"declared", l.declared_chi_minus}}},
           {"boundary_chi",
            {{"before", l.boundary_chi_before}, {"after", l.boundary_chi}, {"declared", l.declared_boundary_chi}}},
           {"annular_sutures", {{"computed", l.annular_sutures}, {"declared", l.declared_annular}}},
           {"toric_sutures", {{"computed", l.toric_sutures}, {"declared", l.declared_toric}}},
           {"balanced", l.balanced()}};
}

static json failures_json(const std::vector<Failure>& fs) {
  json a = json::array();
  for (auto& f : fs)
    a.push_back(json{{"citation", citation_name(f.citation)}, {"bullet", bullet_number(f.citation)}, {"detail", f.detail}});
  return a;
}

void to_json(json& j, const HierarchyReport& r) {
  json steps = json::array();
  for (auto& s : r.steps) {
    json e{{"index", s.index},
           {"annular", s.annular},
           {"well_positioned", s.well_positioned},
           {"well_positioned_required", s.well_positioned_required},
           {"ok", s.ok()},
           {"failures", failures_json(s.failures)}};
    if (s.ledger) e["ledger"] = *s.ledger;
    steps.push_back(e);
  }
  json orbits = json::array();
  for (auto& o : r.orbits) orbits.push_back(json{{"id", o.id}, {"ok", o.ok}, {"detail", o.detail}});
  j = json{{"pass", r.pass()},
           {"failed_step", r.failed_step},
           {"citation", citation_name(r.citation)},
           {"bullet", bullet_number(r.citation)},
           {"detail", r.detail},
           {"steps", steps},
           {"terminal_ok", r.terminal_ok},
           {"terminal_detail", r.terminal_detail},
           {"orbits", orbits},
           {"taut_declared", r.taut_declared},
           {"irreducible_declared", r.irreducible_declared}};
}

void to_json(json& j, const PolygonBoundary& p) {
  j = json{{"id", p.id}, {"a_plus", p.a_plus}, {"b_plus", p.b_plus}, {"a_minus", p.a_minus}, {"b_minus", p.b_minus}};
}
void from_json(const json& j, PolygonBoundary& p) {
  require_object(j, "polygon boundary");
  p.id = get_or<std::string>(j, "id", "");
  p.a_plus = j.at("a_plus").get<std::vector<double>>();
  p.b_plus = j.at("b_plus").get<std::vector<double>>();
  p.a_minus = j.at("a_minus").get<std::vector<double>>();
  p.b_minus = j.at("b_minus").get<std::vector<double>>();
}

void to_json(json& j, const ToricPair& t) {
  j = json{{"id", t.id}, {"plus_length", t.plus_length}, {"minus_length", t.minus_length}};
}
void from_json(const json& j, ToricPair& t) {
  require_object(j, "toric pair");
  t.id = get_or<std::string>(j, "id", "");
  t.plus_length = j.at("plus_length").get<double>();
  t.minus_length = j.at("minus_length").get<double>();
}

void to_json(json& j, const GluingInput& g) {
  j = json{{"epsilon", g.epsilon}, {"polygons", g.polygons}, {"toric", g.toric}, {"a", g.a}, {"tol", g.tol}};
  if (g.target) j["target"] = *g.target;
}
void from_json(const json& j, GluingInput& g) {
  require_object(j, "gluing input");
  g = GluingInput{};
  g.epsilon = j.at("epsilon").get<double>();
  g.polygons = get_or<std::vector<PolygonBoundary>>(j, "polygons", {});
  g.toric = get_or<std::vector<ToricPair>>(j, "toric", {});
  if (j.contains("target") && !j.at("target").is_null()) g.target = j.at("target").get<double>();
  g.a = get_or<double>(j, "a", g.a);
  g.tol = get_or<double>(j, "tol", g.tol);
}

void to_json(json& j, const GluingLedger& l) {
  json adj = json::array(), th = json::array();
  for (auto& a : l.adjustments) adj.push_back(json{{"arc", a.arc}, {"from", a.from}, {"to", a.to}});
  for (auto& t : l.thickenings)
    th.push_back(json{{"pair", t.pair}, {"from", t.from}, {"to", t.to}, {"a", t.a}, {"b", t.b}, {"h_a", t.h_a},
                      {"h_b", t.h_b}, {"L0", t.L0}, {"measured", t.measured}});
  j = json{{"ok", l.ok()},          {"noop", l.noop()},      {"polygons_matched", l.polygons_matched},
           {"stokes_ok", l.stokes_ok}, {"common_length", l.common_length}, {"adjustments", adj},
           {"thickenings", th},     {"notes", l.notes}};
}

void to_json(json& j, const AdaptedPairChecklist& c) {
  j = json{{"transverse_to_regions", c.transverse_to_regions},
           {"tangent_on_sutures", c.tangent_on_sutures},
           {"boundary_positive", c.boundary_positive},
           {"adapted", c.adapted()},
           {"notes", c.notes}};
}

}  // namespace sutured

// ---- documents ---------------------------------------------------------------------------

namespace io {

json parse_document(const std::string& text, const std::string& kind) {
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& e) {
    throw SchemaError(std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object()) throw SchemaError("document must be a JSON object");
  if (!j.contains("schema") || j["schema"] != kSchema) throw SchemaError("document schema must be \"v1\"");
  if (!j.contains("kind") || !j["kind"].is_string() || j["kind"] != kind)
    throw SchemaError("document kind must be \"" + kind + "\"");
  return j;
}

json document(const std::string& kind, const json& body) {
  json j{{"schema", kSchema}, {"kind", kind}};
  for (auto it = body.begin(); it != body.end(); ++it) j[it.key()] = it.value();
  return j;
}

TorusProfile named_profile(const std::string& name, double a, double b) {
  TorusProfile p;
  p.name = name;
  p.a = a;
  p.b = b;
  if (name == "model") {
    p.f = Fn1::cos();
    p.g = Fn1::sin();
  } else if (name == "flat") {
    p.f = Fn1::poly({1});
    p.g = Fn1::poly({0});
  } else {
    throw SchemaError("unknown profile " + name + " (known: model, flat)");
  }
  return p;
}

GenFn GenFnSpec::make() const {
  if (kind == "const") return genfn_const(h);
  if (kind == "cos_x") return genfn_cos_x(h0, amp);
  if (kind == "linear_t") return genfn_linear_t(h0, slope, t0);
  throw SchemaError("unknown generating function " + kind);
}

BoundaryTorusForm BoundaryFormSpec::make() const {
  BoundaryTorusForm T;
  T.period = period;
  T.half_width = half_width;
  double c = u0, A = amp;
  if (u == "constant")
    T.u = [c](double, double) { return c; };
  else if (u == "cos_x")
    T.u = [c, A](double x, double) { return c + A * std::cos(2 * std::acos(-1.0) * x); };
  else
    throw SchemaError("unknown boundary form " + u);
  return T;
}

moser::Primitive PrimitiveSpec::make() const {
  if (name == "standard") return moser::standard_primitive();
  if (name == "bump") return moser::bump_primitive(amp);
  if (name == "radial") return moser::radial_primitive(amp);
  throw SchemaError("unknown primitive " + name);
}

void to_json(json& j, const GenFnSpec& s) {
  if (s.kind == "const")
    j = json{{"kind", s.kind}, {"h", s.h}};
  else if (s.kind == "cos_x")
    j = json{{"kind", s.kind}, {"h0", s.h0}, {"amp", s.amp}};
  else
    j = json{{"kind", s.kind}, {"h0", s.h0}, {"slope", s.slope}, {"t0", s.t0}};
}
void from_json(const json& j, GenFnSpec& s) {
  require_object(j, "generating function");
  s = GenFnSpec{};
  s.kind = j.at("kind").get<std::string>();
  if (s.kind == "const") {
    s.h = j.at("h").get<double>();
  } else if (s.kind == "cos_x") {
    s.h0 = j.at("h0").get<double>();
    s.amp = j.at("amp").get<double>();
  } else if (s.kind == "linear_t") {
    s.h0 = j.at("h0").get<double>();
    s.slope = j.at("slope").get<double>();
    s.t0 = get_or<double>(j, "t0", 0);
  } else {
    throw SchemaError("generating function kind must be const, cos_x or linear_t");
  }
}

void to_json(json& j, const BoundaryFormSpec& s) {
  j = json{{"u", s.u}, {"u0", s.u0}, {"amp", s.amp}, {"period", s.period}, {"half_width", s.half_width}};
}
void from_json(const json& j, BoundaryFormSpec& s) {
  require_object(j, "boundary form");
  s = BoundaryFormSpec{};
  s.u = get_or<std::string>(j, "u", s.u);
  if (s.u != "constant" && s.u != "cos_x") throw SchemaError("boundary form u must be constant or cos_x");
  s.u0 = j.at("u0").get<double>();
  s.amp = get_or<double>(j, "amp", 0);
  s.period = get_or<double>(j, "period", 1);
  s.half_width = get_or<double>(j, "half_width", 0.25);
}

void to_json(json& j, const PrimitiveSpec& s) { j = json{{"name", s.name}, {"amp", s.amp}}; }
void from_json(const json& j, PrimitiveSpec& s) {
  require_object(j, "primitive");
  s.name = j.at("name").get<std::string>();
  if (s.name != "standard" && s.name != "bump" && s.name != "radial")
    throw SchemaError("primitive name must be standard, bump or radial");
  s.amp = get_or<double>(j, "amp", 0);
}

Automorphism LoopInput::phi() const {
  if (automorphism) return *automorphism;
  if (monodromy.empty()) return identity_automorphism(2 * genus);
  try {
    return parse_monodromy(genus, monodromy);
  } catch (const std::exception& e) {
    throw SchemaError(std::string("monodromy: ") + e.what());
  }
}

void to_json(json& j, const LoopInput& in) {
  j = json{{"genus", in.genus}, {"monodromy", in.monodromy}};
  if (in.automorphism) j["automorphism"] = *in.automorphism;
  j["spec"] = in.spec;
  if (in.dfrak) j["dfrak"] = *in.dfrak;
  if (in.r_phi) j["r_phi"] = *in.r_phi;
  j["N"] = in.N;
  j["random_trials"] = in.random_trials;
}
void from_json(const json& j, LoopInput& in) {
  in = LoopInput{};
  in.genus = j.at("genus").get<int>();
  if (in.genus < 1) throw SchemaError("genus must be at least 1");
  in.monodromy = get_or<std::string>(j, "monodromy", "");
  if (j.contains("automorphism")) in.automorphism = j.at("automorphism").get<Automorphism>();
  in.spec = j.at("spec").get<LoopSpec>();
  if (j.contains("dfrak") && !j.at("dfrak").is_null()) in.dfrak = j.at("dfrak").get<int>();
  if (j.contains("r_phi") && !j.at("r_phi").is_null()) in.r_phi = j.at("r_phi").get<int>();
  in.N = get_or<int>(j, "N", 5);
  in.random_trials = get_or<int>(j, "random_trials", 0);
}

void to_json(json& j, const ArcInput& in) {
  j = json{{"genus", in.genus}, {"alpha", in.alpha}, {"monodromy", in.monodromy}, {"sign", in.sign},
           {"slopes", in.slopes}};
}
void from_json(const json& j, ArcInput& in) {
  in = ArcInput{};
  in.genus = j.at("genus").get<int>();
  if (in.genus < 1) throw SchemaError("genus must be at least 1");
  in.alpha = j.at("alpha").get<arcs::Arc>();
  in.monodromy = get_or<std::string>(j, "monodromy", "");
  in.sign = sign_field(j, "sign");
  in.slopes = get_or<std::vector<std::string>>(j, "slopes", {});
  for (auto& s : in.slopes) arcs::parse_rational(s);
}

void to_json(json& j, const ProfileInput& in) {
  if (!in.registry.empty())
    j = json{{"registry", in.registry}, {"a", in.profile.a}, {"b", in.profile.b}};
  else
    j = json{{"profile", in.profile}};
  j["samples"] = in.samples;
}
void from_json(const json& j, ProfileInput& in) {
  in = ProfileInput{};
  if (j.contains("registry")) {
    in.registry = j.at("registry").get<std::string>();
    in.profile = named_profile(in.registry, j.at("a").get<double>(), j.at("b").get<double>());
  } else {
    in.profile = j.at("profile").get<TorusProfile>();
  }
  in.samples = get_or<int>(j, "samples", 1000);
  if (in.samples < 2) throw SchemaError("samples must be at least 2");
}

void to_json(json& j, const SlopeInput& in) {
  j = json{{"form", in.form},
           {"eps", in.eps},
           {"periods", in.periods},
           {"steps_per_period", in.steps_per_period},
           {"negative_sign", in.negative_sign}};
}
void from_json(const json& j, SlopeInput& in) {
  in = SlopeInput{};
  in.form = j.at("form").get<BoundaryFormSpec>();
  in.eps = j.at("eps").get<std::vector<double>>();
  in.periods = get_or<int>(j, "periods", in.periods);
  in.steps_per_period = get_or<int>(j, "steps_per_period", in.steps_per_period);
  in.negative_sign = get_or<bool>(j, "negative_sign", true);
}

void to_json(json& j, const LengthInput& in) {
  j = json{{"germ", in.germ}, {"a", in.a}, {"b", in.b}, {"L", in.L}};
}
void from_json(const json& j, LengthInput& in) {
  in = LengthInput{};
  in.germ = j.at("germ").get<GenFnSpec>();
  in.a = j.at("a").get<double>();
  in.b = j.at("b").get<double>();
  in.L = j.at("L").get<double>();
}

void to_json(json& j, const MoserInput& in) {
  j = json{{"grid", in.grid}, {"beta", in.beta}, {"beta_prime", in.beta_prime}, {"steps", in.steps}, {"tol", in.tol},
           {"convergence_points", in.convergence_points}, {"convergence_steps", in.convergence_steps}};
}
void from_json(const json& j, MoserInput& in) {
  in = MoserInput{};
  in.grid = j.at("grid").get<moser::GriddedSurface>();
  in.beta = j.at("beta").get<PrimitiveSpec>();
  in.beta_prime = j.at("beta_prime").get<PrimitiveSpec>();
  in.steps = get_or<int>(j, "steps", in.steps);
  in.tol = get_or<double>(j, "tol", in.tol);
  in.convergence_points = get_or<std::vector<std::array<double, 2>>>(j, "convergence_points", {});
  in.convergence_steps = get_or<std::vector<int>>(j, "convergence_steps", in.convergence_steps);
  if (in.steps < 1) throw SchemaError("steps must be positive");
}

namespace {

template <class T>
json reserialize(const json& doc) {
  json body = read<T>(doc, doc.value("kind", std::string("document")));
  return body;
}

const std::vector<std::pair<std::string, json (*)(const json&)>>& kinds() {
  static const std::vector<std::pair<std::string, json (*)(const json&)>> table{
      {"loop", reserialize<LoopInput>},
      {"arc", reserialize<ArcInput>},
      {"profile", reserialize<ProfileInput>},
      {"slope", reserialize<SlopeInput>},
      {"length", reserialize<LengthInput>},
      {"fill", reserialize<FillRequest>},
      {"moser", reserialize<MoserInput>},
      {"hierarchy", reserialize<sutured::Hierarchy>},
      {"gluing", reserialize<sutured::GluingInput>},
  };
  return table;
}

}  // namespace

std::vector<std::string> input_kinds() {
  std::vector<std::string> out;
  for (auto& [k, f] : kinds()) out.push_back(k);
  return out;
}

json normalize(const json& doc) {
  if (!doc.is_object() || doc.value("schema", std::string()) != kSchema) throw SchemaError("not a v1 document");
  auto kind = doc.value("kind", std::string());
  for (auto& [k, f] : kinds())
    if (k == kind) return document(kind, f(doc));
  throw SchemaError("unknown document kind " + kind);
}

}  // namespace io
}  // namespace htk
