#include "htk/sutured.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "htk/contact_models.hpp"

namespace htk::sutured {

std::string citation_name(Citation c) {
  switch (c) {
    case Citation::none: return "none";
    case Citation::record: return "record";
    case Citation::orientation: return "orientation";
    case Citation::annular: return "annular";
    case Citation::transverse: return "bullet 1 (boundary transverse to the sutures)";
    case Citation::separating_arc: return "bullet 2 (no arc separates an annular suture)";
    case Citation::circle_class: return "bullet 3 (circles homologous to the core)";
    case Citation::well_positioned: return "well-positioned";
    case Citation::disk_component: return "bullet 4 (no disk component with boundary in R)";
    case Citation::disk_boundary: return "bullet 5 (no boundary curve bounds a disk in R)";
    case Citation::pi1: return "pi1-injectivity";
    case Citation::ledger: return "ledger";
    case Citation::terminal: return "terminal";
  }
  return "?";
}

int bullet_number(Citation c) {
  switch (c) {
    case Citation::transverse: return 1;
    case Citation::separating_arc: return 2;
    case Citation::circle_class: return 3;
    case Citation::disk_component: return 4;
    case Citation::disk_boundary: return 5;
    default: return 0;
  }
}

namespace {

int region_chi(const Region& r) { return 2 - 2 * r.genus - r.boundaries; }

const Region* find_region(const BoundaryComponent& b, const std::string& id) {
  for (auto& r : b.regions)
    if (r.id == id) return &r;
  return nullptr;
}

const Suture* find_suture(const BoundaryComponent& b, const std::string& id) {
  for (auto& s : b.sutures)
    if (s.id == id) return &s;
  return nullptr;
}

const BoundaryComponent* find_component(const Piece& p, const std::string& id) {
  for (auto& b : p.boundary)
    if (b.id == id) return &b;
  return nullptr;
}

void piece_problems(const Piece& p, std::vector<Failure>& out) {
  auto fail = [&](Citation c, const std::string& msg) { out.push_back({c, "piece " + p.id + ": " + msg}); };
  std::set<std::string> comp_ids;
  for (auto& b : p.boundary) {
    if (!comp_ids.insert(b.id).second) fail(Citation::record, "duplicate boundary component " + b.id);
    std::string at = "component " + b.id + ": ";
    if (b.genus < 0) fail(Citation::record, at + "negative genus");
    if (b.toric) {
      if (b.genus != 1) fail(Citation::record, at + "a toric suture must be a torus");
      if (!b.sutures.empty() || !b.regions.empty()) fail(Citation::record, at + "toric component carries sutures or regions");
      continue;
    }
    std::set<std::string> ids;
    std::map<std::string, int> sides;
    for (auto& r : b.regions) {
      if (!ids.insert(r.id).second) fail(Citation::record, at + "duplicate id " + r.id);
      if (r.sign != 1 && r.sign != -1) fail(Citation::record, at + "region " + r.id + " has no sign");
      if (r.genus < 0 || r.boundaries < 0) fail(Citation::record, at + "region " + r.id + " has negative counts");
    }
    for (auto& s : b.sutures) {
      if (!ids.insert(s.id).second) fail(Citation::record, at + "duplicate id " + s.id);
      auto* rp = find_region(b, s.plus_region);
      auto* rm = find_region(b, s.minus_region);
      if (!rp || !rm) {
        fail(Citation::record, at + "suture " + s.id + " names a missing region");
        continue;
      }
      if (rp->sign != 1 || rm->sign != -1)
        fail(Citation::orientation, at + "suture " + s.id + " does not separate R- from R+");
      if (s.core_sign != 1)
        fail(Citation::orientation, at + "core of " + s.id + " is not oriented as the boundary of R+");
      sides[s.plus_region]++;
      sides[s.minus_region]++;
    }
    int chi = 0;
    for (auto& r : b.regions) {
      if (r.boundaries != sides[r.id])
        fail(Citation::record, at + "region " + r.id + " has " + std::to_string(r.boundaries) +
                                   " boundary circles but meets " + std::to_string(sides[r.id]) + " suture sides");
      chi += region_chi(r);
    }
    if (b.regions.empty()) fail(Citation::record, at + "no regions");
    if (chi != 2 - 2 * b.genus)
      fail(Citation::record, at + "regions have Euler characteristic " + std::to_string(chi) + ", surface has " +
                                 std::to_string(2 - 2 * b.genus));
  }
}

bool primary_before(const Failure& x, const Failure& y) { return x.citation < y.citation; }

struct Counts {
  int plus = 0, minus = 0, boundary = 0, annular = 0, toric = 0;
};

Counts counts(const std::vector<Piece>& pieces) {
  Counts c;
  for (auto& p : pieces)
    for (auto& b : p.boundary) {
      c.boundary += 2 - 2 * b.genus;
      if (b.toric) {
        c.toric++;
        continue;
      }
      c.annular += (int)b.sutures.size();
      for (auto& r : b.regions) (r.sign > 0 ? c.plus : c.minus) += region_chi(r);
    }
  return c;
}

bool in_region(const BoundaryComponent& b, const BoundaryCurve& c) {
  return !b.toric && c.arcs.empty() && !find_suture(b, c.lies_in);
}

struct UnionFind {
  std::vector<int> up;
  int add() {
    up.push_back((int)up.size());
    return (int)up.size() - 1;
  }
  int find(int x) { return up[x] == x ? x : up[x] = find(up[x]); }
  void unite(int x, int y) { up[find(x)] = find(y); }
  int classes() {
    int n = 0;
    for (int i = 0; i < (int)up.size(); ++i) n += find(i) == i;
    return n;
  }
};

}  // namespace

std::vector<Failure> manifold_problems(const SuturedManifold& M) {
  std::vector<Failure> out;
  std::set<std::string> ids;
  for (auto& p : M.pieces) {
    if (!ids.insert(p.id).second) out.push_back({Citation::record, "duplicate piece " + p.id});
    piece_problems(p, out);
  }
  std::stable_sort(out.begin(), out.end(), primary_before);
  return out;
}

bool is_annular(const SuturedManifold& M) {
  for (auto& p : M.pieces) {
    if (p.boundary.empty()) return false;
    for (auto& b : p.boundary)
      if (b.toric || b.sutures.empty()) return false;
  }
  return true;
}

bool is_product_ball(const Piece& p) {
  if (p.boundary.size() != 1) return false;
  auto& b = p.boundary[0];
  if (b.toric || b.genus != 0 || b.sutures.size() != 1 || b.regions.size() != 2) return false;
  for (auto& r : b.regions)
    if (r.genus != 0 || r.boundaries != 1) return false;
  return true;
}

const Piece* find_piece(const SuturedManifold& M, const std::string& id) {
  for (auto& p : M.pieces)
    if (p.id == id) return &p;
  return nullptr;
}

bool check_well_positioned(const DecompositionStep& step, const SuturedManifold& M) {
  const Piece* p = find_piece(M, step.piece);
  for (auto& S : step.surface)
    for (auto& c : S.curves) {
      if (c.arcs.empty()) return false;
      if (p) {
        auto* b = find_component(*p, c.component);
        if (b && b->toric) return false;
      }
    }
  return true;
}

bool DecompositionLedger::balanced() const {
  return chi_plus == declared_chi_plus && chi_minus == declared_chi_minus && boundary_chi == declared_boundary_chi &&
         annular_sutures == declared_annular && toric_sutures == declared_toric;
}

DecompositionLedger decomposition_ledger(const SuturedManifold& M, const DecompositionStep& step) {
  const Piece* p = find_piece(M, step.piece);
  if (!p) throw std::invalid_argument("no piece " + step.piece);
  DecompositionLedger L;
  for (auto& S : step.surface) L.chi_surface += 2 - 2 * S.genus - (int)S.curves.size();
  Counts before = counts({*p});
  L.chi_plus_before = before.plus;
  L.chi_minus_before = before.minus;
  L.boundary_chi_before = before.boundary;
  // cutting R+ along the arcs of dS in R+ and gluing S'+ back along them cancel out
  L.chi_plus = before.plus + L.chi_surface;
  L.chi_minus = before.minus + L.chi_surface;
  L.boundary_chi = before.boundary + 2 * L.chi_surface;

  // sutures after the cut: annuli cut into rectangles, rejoined by the strips
  // N(S'+ n R-) and N(S'- n R+) running along dS
  struct ArcRef {
    const SutureArc* arc;
    int plus_side = -1, minus_side = -1;
  };
  std::map<std::pair<std::string, std::string>, std::vector<const SutureArc*>> on_suture;  // (component, suture)
  std::map<std::pair<std::string, std::string>, int> circles;
  std::map<std::string, int> torus_circles;
  int region_circles = 0;
  for (auto& S : step.surface)
    for (auto& c : S.curves) {
      auto* b = find_component(*p, c.component);
      if (!b) throw std::invalid_argument("no boundary component " + c.component);
      for (auto& a : c.arcs) on_suture[{b->id, a.suture}].push_back(&a);
      if (!c.arcs.empty()) continue;
      if (b->toric)
        torus_circles[b->id]++;
      else if (find_suture(*b, c.lies_in))
        circles[{b->id, c.lies_in}]++;
      else
        region_circles++;
    }
  UnionFind uf;
  std::map<const SutureArc*, ArcRef> refs;
  int annular = region_circles, toric = 0;
  for (auto& b : p->boundary) {
    if (b.toric) {
      int k = torus_circles[b.id];
      if (k == 0)
        toric++;
      else
        annular += k;  // parallel essential circles cut the torus into k annuli
      continue;
    }
    for (auto& s : b.sutures) {
      auto key = std::make_pair(b.id, s.id);
      auto it = on_suture.find(key);
      if (it == on_suture.end()) {
        annular += circles[key] + 1;
        continue;
      }
      auto arcs = it->second;
      std::sort(arcs.begin(), arcs.end(), [](auto* x, auto* y) { return x->position < y->position; });
      int j = (int)arcs.size(), base = -1;
      for (int i = 0; i < j; ++i) {
        int r = uf.add();
        if (i == 0) base = r;
      }
      for (int i = 0; i < j; ++i) {
        int behind = base + (i + j - 1) % j, ahead = base + i;
        // the positive normal of S points along the core when the arc runs R- -> R+,
        // and S'+ is the copy on the side the normal points away from
        ArcRef ref{arcs[i]};
        if (arcs[i]->sign > 0) {
          ref.plus_side = behind;
          ref.minus_side = ahead;
        } else {
          ref.plus_side = ahead;
          ref.minus_side = behind;
        }
        refs[arcs[i]] = ref;
      }
    }
  }
  for (auto& S : step.surface)
    for (auto& c : S.curves) {
      int n = (int)c.arcs.size();
      for (int k = 0; k < n; ++k) {
        auto& x = refs.at(&c.arcs[k]);
        auto& y = refs.at(&c.arcs[(k + 1) % n]);
        if (c.arcs[k].sign > 0)
          uf.unite(x.minus_side, y.minus_side);  // segment in R+: strip along S'-
        else
          uf.unite(x.plus_side, y.plus_side);  // segment in R-: strip along S'+
      }
    }
  annular += uf.classes();
  L.annular_sutures = annular;
  L.toric_sutures = toric;

  Counts declared = counts(step.result);
  L.declared_chi_plus = declared.plus;
  L.declared_chi_minus = declared.minus;
  L.declared_boundary_chi = declared.boundary;
  L.declared_annular = declared.annular;
  L.declared_toric = declared.toric;
  return L;
}

std::vector<Failure> step_problems(const SuturedManifold& M, const DecompositionStep& step,
                                   bool require_well_positioned) {
  std::vector<Failure> out;
  auto fail = [&](Citation c, const std::string& msg) { out.push_back({c, msg}); };
  const Piece* p = find_piece(M, step.piece);
  if (!p) {
    fail(Citation::record, "no piece " + step.piece);
    return out;
  }
  bool record_ok = true;
  std::set<std::pair<std::string, std::string>> crossed, encircled;
  std::map<std::pair<std::string, std::string>, std::set<double>> positions;
  for (size_t si = 0; si < step.surface.size(); ++si) {
    auto& S = step.surface[si];
    std::string sat = "surface component " + std::to_string(si);
    if (S.genus < 0) {
      fail(Citation::record, sat + ": negative genus");
      record_ok = false;
    }
    for (size_t ci = 0; ci < S.curves.size(); ++ci) {
      auto& c = S.curves[ci];
      std::string at = sat + ", curve " + std::to_string(ci) + ": ";
      auto* b = find_component(*p, c.component);
      if (!b) {
        fail(Citation::record, at + "no boundary component " + c.component);
        record_ok = false;
        continue;
      }
      if (!c.transverse) fail(Citation::transverse, at + "not transverse to the sutures");
      if (b->toric && !c.arcs.empty()) {
        fail(Citation::record, at + "arcs recorded on a toric suture");
        record_ok = false;
        continue;
      }
      std::vector<int> signs;
      for (auto& a : c.arcs) {
        if (!find_suture(*b, a.suture)) {
          fail(Citation::record, at + "no suture " + a.suture);
          record_ok = false;
          continue;
        }
        if (a.sign != 1 && a.sign != -1) {
          fail(Citation::record, at + "arc without direction in " + a.suture);
          record_ok = false;
          continue;
        }
        if (!(a.position >= 0 && a.position < 1) || !positions[{b->id, a.suture}].insert(a.position).second) {
          fail(Citation::record, at + "arc position in " + a.suture + " is outside [0,1) or repeated");
          record_ok = false;
        }
        crossed.insert({b->id, a.suture});
        if (a.separating)
          fail(Citation::separating_arc, at + "arc separates the annular suture " + a.suture);
        else
          signs.push_back(a.sign);
      }
      for (size_t k = 0; k < signs.size(); ++k)
        if (signs[k] == signs[(k + 1) % signs.size()]) {
          fail(Citation::separating_arc,
               at + "consecutive crossings run the same way, so the curve turns back inside a suture");
          break;
        }
      if (!c.arcs.empty()) continue;
      if (b->toric) {
        if (c.suture_class == 0) fail(Citation::circle_class, at + "inessential circle on a toric suture");
      } else if (find_suture(*b, c.lies_in)) {
        encircled.insert({b->id, c.lies_in});
        if (c.suture_class != 1)
          fail(Citation::circle_class, at + "circle in " + c.lies_in + " has class " + std::to_string(c.suture_class) +
                                           " times the core");
      } else if (!c.lies_in.empty() && !find_region(*b, c.lies_in)) {
        fail(Citation::record, at + "no region or suture " + c.lies_in);
        record_ok = false;
      }
    }
  }
  for (auto& k : crossed)
    if (encircled.count(k)) fail(Citation::transverse, "suture " + k.second + " holds both arcs and circles of dS");

  if (require_well_positioned && !check_well_positioned(step, M))
    fail(Citation::well_positioned, "a boundary curve misses the sutures or lies in one");

  for (size_t si = 0; si < step.surface.size(); ++si) {
    auto& S = step.surface[si];
    for (size_t ci = 0; ci < S.curves.size(); ++ci) {
      auto* b = find_component(*p, S.curves[ci].component);
      if (!b || !in_region(*b, S.curves[ci])) continue;
      std::string at = "surface component " + std::to_string(si) + ", curve " + std::to_string(ci) + ": ";
      if (S.genus == 0 && S.curves.size() == 1)
        fail(Citation::disk_component, at + "disk component with boundary in R");
      if (S.curves[ci].bounds_disk) fail(Citation::disk_boundary, at + "boundary curve bounds a disk in R");
    }
    if (!S.pi1_injective_declared)
      fail(Citation::pi1, "surface component " + std::to_string(si) + " is not declared pi1-injective");
  }

  if (record_ok) {
    if (step.result.empty()) fail(Citation::ledger, "no result pieces declared");
    SuturedManifold R{step.result};
    for (auto& f : manifold_problems(R)) fail(Citation::ledger, "declared result: " + f.detail);
    for (auto& q : M.pieces)
      if (q.id != step.piece && find_piece(R, q.id)) fail(Citation::record, "result reuses piece id " + q.id);
    auto L = decomposition_ledger(M, step);
    auto cmp = [&](const char* what, int got, int want) {
      if (got != want)
        fail(Citation::ledger, std::string(what) + ": declared " + std::to_string(got) + ", formulas give " +
                                   std::to_string(want));
    };
    cmp("chi(R+)", L.declared_chi_plus, L.chi_plus);
    cmp("chi(R-)", L.declared_chi_minus, L.chi_minus);
    cmp("chi(boundary)", L.declared_boundary_chi, L.boundary_chi);
    cmp("annular sutures", L.declared_annular, L.annular_sutures);
    cmp("toric sutures", L.declared_toric, L.toric_sutures);
  }
  std::stable_sort(out.begin(), out.end(), primary_before);
  return out;
}

SuturedManifold decompose(const SuturedManifold& M, const DecompositionStep& step) {
  auto mp = manifold_problems(M);
  if (!mp.empty()) throw DecompositionError(mp[0].citation, mp[0].detail);
  auto sp = step_problems(M, step, false);
  if (!sp.empty()) throw DecompositionError(sp[0].citation, citation_name(sp[0].citation) + ": " + sp[0].detail);
  SuturedManifold out;
  for (auto& q : M.pieces)
    if (q.id == step.piece)
      out.pieces.insert(out.pieces.end(), step.result.begin(), step.result.end());
    else
      out.pieces.push_back(q);
  return out;
}

HierarchyReport hierarchy_validate(const Hierarchy& H) {
  HierarchyReport rep;
  rep.taut_declared = rep.irreducible_declared = !H.start.pieces.empty();
  for (auto& p : H.start.pieces) {
    rep.taut_declared &= p.taut_declared;
    rep.irreducible_declared &= p.irreducible_declared;
  }
  auto note = [&](int idx, const std::vector<Failure>& fs) {
    if (fs.empty() || rep.failed_step >= 0) return;
    rep.failed_step = idx;
    rep.citation = fs[0].citation;
    rep.detail = fs[0].detail;
  };
  SuturedManifold cur = H.start;
  std::set<std::string> seen_pieces;
  bool broken = false;
  for (size_t i = 0; i < H.steps.size(); ++i) {
    StepReport sr;
    sr.index = (int)i;
    for (auto& p : cur.pieces) seen_pieces.insert(p.id);
    auto& step = H.steps[i];
    sr.annular = is_annular(cur);
    sr.well_positioned = check_well_positioned(step, cur);
    sr.well_positioned_required = (int)i >= H.annular_from;
    if (!broken) {
      sr.failures = manifold_problems(cur);
      if (sr.well_positioned_required && !sr.annular)
        sr.failures.push_back({Citation::annular, "manifold before the step is not annular"});
      if (sr.failures.empty() || sr.failures[0].citation > Citation::orientation) {
        auto sp = step_problems(cur, step, sr.well_positioned_required);
        sr.failures.insert(sr.failures.end(), sp.begin(), sp.end());
        bool record_ok = std::none_of(sp.begin(), sp.end(), [](auto& f) { return f.citation == Citation::record; });
        if (record_ok && find_piece(cur, step.piece)) sr.ledger = decomposition_ledger(cur, step);
      }
      std::stable_sort(sr.failures.begin(), sr.failures.end(), primary_before);
      note((int)i, sr.failures);
      if (find_piece(cur, step.piece)) {
        SuturedManifold next;
        for (auto& q : cur.pieces)
          if (q.id == step.piece)
            next.pieces.insert(next.pieces.end(), step.result.begin(), step.result.end());
          else
            next.pieces.push_back(q);
        cur = next;
      } else {
        broken = true;
      }
    } else {
      sr.failures.push_back({Citation::record, "not evaluated: an earlier step names a missing piece"});
    }
    rep.steps.push_back(sr);
  }
  for (auto& p : cur.pieces) seen_pieces.insert(p.id);

  std::vector<Failure> term;
  if (!broken) {
    for (auto& f : manifold_problems(cur)) term.push_back({Citation::terminal, f.detail});
    if (cur.pieces.empty()) term.push_back({Citation::terminal, "no terminal pieces"});
    for (auto& p : cur.pieces)
      if (!is_product_ball(p))
        term.push_back({Citation::terminal, "piece " + p.id + " is not a product ball (one disk region of each "
                                            "sign and a single connected suture)"});
  } else {
    term.push_back({Citation::terminal, "terminal manifold unavailable"});
  }
  rep.terminal_ok = term.empty();
  rep.terminal_detail = term.empty() ? "all terminal pieces are product balls" : term[0].detail;
  note((int)H.steps.size(), term);

  bool orbits_ok = true;
  for (auto& o : H.orbits) {
    OrbitCheck oc{o.id, false, ""};
    bool counts_ok = o.crossings.size() == H.steps.size() &&
                     std::all_of(o.crossings.begin(), o.crossings.end(), [](int x) { return x >= 0; });
    bool meets = std::any_of(o.crossings.begin(), o.crossings.end(), [](int x) { return x > 0; });
    if (!counts_ok) {
      oc.detail = "needs one non-negative count per decomposing surface";
    } else if (meets) {
      oc.ok = true;
      oc.detail = "meets a decomposing surface positively, so it is non-zero in homology";
    } else if (!o.carried_by.empty() && seen_pieces.count(o.carried_by)) {
      oc.ok = true;
      oc.detail = "carried by piece " + o.carried_by;
    } else {
      oc.detail = "meets no decomposing surface and no carrying piece is recorded";
    }
    orbits_ok &= oc.ok;
    rep.orbits.push_back(oc);
  }
  if (!orbits_ok && rep.failed_step < 0) {
    rep.failed_step = (int)H.steps.size();
    rep.citation = Citation::record;
    rep.detail = "orbit ledger incomplete";
  }
  return rep;
}

// ---- convex presentation ---------------------------------------------------------

ConvexStructure to_convex(const SuturedManifold& M) {
  if (!is_annular(M)) throw std::invalid_argument("convex translation needs annular sutures on every component");
  ConvexStructure C;
  for (auto& p : M.pieces) {
    ConvexPiece cp{p.id, {}, p.irreducible_declared, p.taut_declared};
    for (auto& b : p.boundary) {
      ConvexComponent cc{b.id, b.genus, {}, b.regions};
      // each annulus collapses to its core, which becomes a dividing curve
      for (auto& s : b.sutures) cc.curves.push_back({s.id, s.core_sign, s.plus_region, s.minus_region});
      cp.boundary.push_back(cc);
    }
    C.pieces.push_back(cp);
  }
  return C;
}

SuturedManifold from_convex(const ConvexStructure& C) {
  SuturedManifold M;
  for (auto& cp : C.pieces) {
    Piece p{cp.id, {}, cp.irreducible_declared, cp.taut_declared};
    for (auto& cc : cp.boundary) {
      if (cc.curves.empty()) throw std::invalid_argument("component " + cc.id + " has no dividing curve");
      BoundaryComponent b{cc.id, cc.genus, false, {}, cc.regions};
      for (auto& d : cc.curves) b.sutures.push_back({d.id, d.sign, d.plus_region, d.minus_region});
      p.boundary.push_back(b);
    }
    M.pieces.push_back(p);
  }
  return M;
}

SuturedManifold reversed(const SuturedManifold& M) {
  SuturedManifold out = M;
  for (auto& p : out.pieces)
    for (auto& b : p.boundary) {
      for (auto& r : b.regions) r.sign = -r.sign;
      // the core keeps bounding the new R+, so only the region roles swap
      for (auto& s : b.sutures) std::swap(s.plus_region, s.minus_region);
    }
  return out;
}

ConvexStructure reversed(const ConvexStructure& C) {
  ConvexStructure out = C;
  for (auto& p : out.pieces)
    for (auto& b : p.boundary) {
      for (auto& r : b.regions) r.sign = -r.sign;
      for (auto& d : b.curves) std::swap(d.plus_region, d.minus_region);
    }
  return out;
}

// ---- adapted pairs -------------------------------------------------------------

AdaptedPairChecklist ball_model_checklist(int sign) {
  auto m = model_r3_checklist(sign);
  AdaptedPairChecklist c;
  c.transverse_to_regions = m.transverse_to_R;
  c.tangent_on_sutures = m.tangent_on_sutures;
  c.boundary_positive = m.boundary_positive;
  c.notes.push_back(std::string("alpha = dz ") + (sign > 0 ? "+" : "-") + " r^2 dtheta on D^2 x [-1,1], R = d/dz");
  c.notes.push_back(m.positive_contact ? "positive contact form" : "not a positive contact form");
  if (!m.positive_contact) c.transverse_to_regions = c.tangent_on_sutures = c.boundary_positive = false;
  return c;
}

// ---- gluing ledger ---------------------------------------------------------------------

GluingLedger gluing_ledger(const GluingInput& in) {
  const double pi = std::acos(-1.0);
  if (!(in.epsilon > 0)) throw std::domain_error("unsatisfiable ledger: the common arc length must be positive");
  if (!(pi / 2 < in.a && in.a < pi)) throw std::invalid_argument("germ level a must lie in (pi/2, pi)");
  GluingLedger L;
  auto positive = [](double x, const std::string& what) {
    if (!(x > 0)) throw std::domain_error("unsatisfiable ledger: non-positive length for " + what);
  };
  for (auto& P : in.polygons) {
    size_t k = P.a_plus.size();
    if (k == 0 || P.b_plus.size() != k || P.a_minus.size() != k || P.b_minus.size() != k)
      throw std::invalid_argument("polygon " + P.id + ": a+, b+, a-, b- need the same length k >= 1");
    auto check = [&](const std::vector<double>& v, const char* name) {
      for (size_t i = 0; i < k; ++i) {
        std::string arc = P.id + "." + name + std::to_string(i + 1);
        positive(v[i], arc);
        if (std::abs(v[i] - in.epsilon) > in.tol) {
          L.polygons_matched = false;
          // short lengths are always reachable by re-choosing the form near the Legendrian skeleton
          L.adjustments.push_back({arc, v[i], in.epsilon});
        }
      }
    };
    check(P.a_plus, "a+");
    check(P.b_plus, "b+");
    check(P.a_minus, "a-");
    check(P.b_minus, "b-");
  }
  double longest = 0;
  for (auto& T : in.toric) {
    positive(T.plus_length, T.id + ".plus");
    positive(T.minus_length, T.id + ".minus");
    if (std::abs(T.plus_length - T.minus_length) > in.tol * std::max(1.0, T.plus_length)) {
      L.stokes_ok = false;
      L.notes.push_back("pair " + T.id + " violates Stokes: the two boundary lengths must agree");
    }
    longest = std::max({longest, T.plus_length, T.minus_length});
  }
  L.common_length = in.target.value_or(longest);
  if (!in.toric.empty() && L.common_length < longest)
    throw std::domain_error("unsatisfiable ledger: target length is below an existing toric length (negative "
                            "required thickening)");
  for (auto& T : in.toric) {
    double ell = std::min(T.plus_length, T.minus_length);
    if (std::abs(ell - L.common_length) <= in.tol * std::max(1.0, ell)) continue;
    Thickening th;
    th.pair = T.id;
    th.from = ell;
    th.to = L.common_length;
    th.a = in.a;
    th.h_a = -std::cos(in.a) / ell;  // a t-invariant germ of length ell
    // the threshold ell cos b / cos a grows with b; stop halfway to where it reaches the target
    double c = L.common_length * std::cos(in.a) / ell;
    double b_max = c <= -1 ? pi : std::acos(c);
    th.b = 0.5 * (in.a + b_max);
    auto adj = length_adjust(genfn_const(th.h_a), th.a, th.b, th.to);
    th.h_b = adj.h_b;
    th.L0 = adj.L0;
    th.measured = measured_boundary_length(adj.H, th.b, 1.0);
    L.thickenings.push_back(th);
  }
  return L;
}

// ---- fixtures -------------------------------------------------------------------------

Piece product_ball(const std::string& id) {
  BoundaryComponent b{"sphere", 0, false, {{"s", 1, "top", "bottom"}}, {{"top", 1, 0, 1}, {"bottom", -1, 0, 1}}};
  return Piece{id, {b}, true, true};
}

Hierarchy fixture_product_ball() {
  Hierarchy H;
  H.name = "product-ball";
  H.start.pieces = {product_ball("ball")};
  return H;
}

Hierarchy fixture_thickened_torus() {
  Hierarchy H;
  H.name = "thickened-torus";
  // inner torus is a toric suture; the outer one carries two parallel annular sutures
  BoundaryComponent inner{"inner", 1, true, {}, {}};
  BoundaryComponent outer{"outer", 1, false,
                          {{"s1", 1, "P", "M"}, {"s2", 1, "P", "M"}},
                          {{"P", 1, 0, 2}, {"M", -1, 0, 2}}};
  H.start.pieces = {Piece{"V", {inner, outer}, true, true}};

  // vertical annulus through the toric suture and the region P
  DecompositionStep s0;
  s0.piece = "V";
  BoundaryCurve on_torus;
  on_torus.component = "inner";
  on_torus.suture_class = 1;
  BoundaryCurve in_P;
  in_P.component = "outer";
  in_P.lies_in = "P";
  s0.surface = {SurfaceComponent{0, {on_torus, in_P}, true}};
  // solid torus with four parallel sutures: around a meridian the boundary reads
  // g | P1 = S'+ u P' | s1 | M | s2 | P2 | n | N = S'- | g
  BoundaryComponent T{"torus", 1, false,
                      {{"g", 1, "P1", "N"}, {"s1", 1, "P1", "M"}, {"s2", 1, "P2", "M"}, {"n", 1, "P2", "N"}},
                      {{"P1", 1, 0, 2}, {"P2", 1, 0, 2}, {"M", -1, 0, 2}, {"N", -1, 0, 2}}};
  s0.result = {Piece{"V1", {T}, true, true}};

  // meridian disk crossing the four sutures in turn
  DecompositionStep s1;
  s1.piece = "V1";
  BoundaryCurve meridian;
  meridian.component = "torus";
  meridian.arcs = {{"g", 1, 0.5}, {"s1", -1, 0.5}, {"s2", 1, 0.5}, {"n", -1, 0.5}};
  s1.surface = {SurfaceComponent{0, {meridian}, true}};
  s1.result = {product_ball("B")};

  H.steps = {s0, s1};
  H.annular_from = 1;
  H.orbits = {{"meridian", {1, 0}, ""}, {"longitude", {0, 1}, ""}, {"toric", {0, 0}, "V"}};
  return H;
}

Hierarchy fixture_genus2_handlebody() {
  Hierarchy H;
  H.name = "genus2-handlebody";
  // (pair of pants) x I with the three boundary annuli as sutures
  BoundaryComponent F{"surface", 2, false,
                      {{"c1", 1, "top", "bottom"}, {"c2", 1, "top", "bottom"}, {"c3", 1, "top", "bottom"}},
                      {{"top", 1, 0, 3}, {"bottom", -1, 0, 3}}};
  H.start.pieces = {Piece{"H", {F}, true, true}};

  // product disk over an arc from c1 to c2
  DecompositionStep s0;
  s0.piece = "H";
  BoundaryCurve d0;
  d0.component = "surface";
  d0.arcs = {{"c1", 1, 0.5}, {"c2", -1, 0.5}};
  s0.surface = {SurfaceComponent{0, {d0}, true}};
  BoundaryComponent A{"torus", 1, false,
                      {{"c12", 1, "top", "bottom"}, {"c3", 1, "top", "bottom"}},
                      {{"top", 1, 0, 2}, {"bottom", -1, 0, 2}}};
  s0.result = {Piece{"H1", {A}, true, true}};

  // product disk over an arc across the remaining annulus
  DecompositionStep s1;
  s1.piece = "H1";
  BoundaryCurve d1;
  d1.component = "torus";
  d1.arcs = {{"c12", 1, 0.5}, {"c3", -1, 0.5}};
  s1.surface = {SurfaceComponent{0, {d1}, true}};
  s1.result = {product_ball("B")};

  H.steps = {s0, s1};
  H.annular_from = 0;
  H.orbits = {{"around-c1", {1, 0}, ""}, {"around-c3", {0, 1}, ""}};
  return H;
}

std::vector<Hierarchy> hierarchy_fixtures() {
  return {fixture_product_ball(), fixture_thickened_torus(), fixture_genus2_handlebody()};
}

}  // namespace htk::sutured
