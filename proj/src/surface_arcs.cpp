#include "htk/surface_arcs.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>
#include <set>
#include <sstream>
#include <stdexcept>

namespace htk::arcs {

// ---------------------------------------------------------------- fat graphs

FatGraph make_fat_graph(int vertices, const std::vector<std::vector<int>>& rotation) {
  if ((int)rotation.size() != vertices) throw std::invalid_argument("rotation system size differs from vertex count");
  int darts = 0;
  for (auto& r : rotation) darts += (int)r.size();
  if (darts % 2) throw std::invalid_argument("odd number of darts");
  FatGraph G;
  G.vertices = vertices;
  G.edges = darts / 2;
  G.tail_.assign(darts, -1);
  G.next_.assign(darts, 0);
  G.rot_index.assign(darts, -1);
  G.rotation = rotation;
  for (int v = 0; v < vertices; ++v) {
    const auto& r = rotation[v];
    for (size_t i = 0; i < r.size(); ++i) {
      int d = r[i];
      if (d == 0 || std::abs(d) > G.edges) throw std::invalid_argument("dart out of range");
      int k = FatGraph::idx(d);
      if (G.tail_[k] != -1) throw std::invalid_argument("dart listed twice");
      G.tail_[k] = v;
      G.next_[k] = r[(i + 1) % r.size()];
      G.rot_index[k] = (int)i;
    }
  }
  // face tracing h -> next(-h); exactly one cycle allowed
  std::vector<char> seen(darts, 0);
  int cycles = 0;
  for (int e = 1; e <= G.edges; ++e)
    for (int d : {e, -e}) {
      if (seen[FatGraph::idx(d)]) continue;
      ++cycles;
      std::vector<int> cyc;
      int h = d;
      while (!seen[FatGraph::idx(h)]) {
        seen[FatGraph::idx(h)] = 1;
        cyc.push_back(h);
        h = G.next(-h);
      }
      if (cycles == 1) G.boundary = cyc;
    }
  if (cycles != 1) throw std::invalid_argument("fat graph has " + std::to_string(cycles) + " boundary cycles, expected one");
  if ((1 - vertices + G.edges) % 2) throw std::invalid_argument("Euler characteristic inconsistent with one boundary");
  G.corner_of_dart.assign(darts, -1);
  for (int k = 0; k < G.length(); ++k) G.corner_of_dart[FatGraph::idx(G.boundary[k])] = k;
  return G;
}

FatGraph standard_surface(int genus) {
  if (genus < 1) throw std::invalid_argument("genus must be positive");
  Word eta = surface_group(genus).eta;
  int L = (int)eta.size();
  std::map<int, int> pos;
  for (int k = 0; k < L; ++k) pos[eta[k]] = k;
  // next(-eta_k) = eta_{k+1} makes the boundary read eta
  std::map<int, int> nxt;
  for (int k = 0; k < L; ++k) nxt[-eta[k]] = eta[(k + 1) % L];
  std::vector<int> rot{1};
  for (int d = nxt[1]; d != 1; d = nxt[d]) rot.push_back(d);
  if ((int)rot.size() != L) throw std::logic_error("standard rotation is not a single cycle");
  return make_fat_graph(1, {rot});
}

// ---------------------------------------------------------------- arcs

Arc reversed(const Arc& a) { return Arc{a.end, a.start, inverse(a.path)}; }

static int corner(double x) { return (int)std::floor(x); }

void check_arc(const FatGraph& G, const Arc& a) {
  double L = G.length();
  for (double x : {a.start, a.end}) {
    if (!(x >= 0 && x < L)) throw std::invalid_argument("endpoint outside the boundary");
    double o = x - std::floor(x);
    if (o <= 0 || o >= 1) throw std::invalid_argument("endpoint on a corner edge");
  }
  if (a.start == a.end) throw std::invalid_argument("arc endpoints coincide");
  int v = G.corner_vertex(corner(a.start));
  for (int d : a.path) {
    if (d == 0 || std::abs(d) > G.edges) throw std::invalid_argument("dart out of range");
    if (G.tail(d) != v) throw std::invalid_argument("path is not a walk");
    v = G.head(d);
  }
  if (v != G.corner_vertex(corner(a.end))) throw std::invalid_argument("path does not end at the end corner");
}

bool same_class(const Arc& a, const Arc& b) {
  return a.start == b.start && a.end == b.end && reduce(a.path) == reduce(b.path);
}

Word boundary_path(const FatGraph& G, double p, double q) {
  int L = G.length();
  int kp = corner(p), kq = corner(q);
  Word out;
  if (kp == kq && q > p) return out;
  int k = kp;
  do {
    out.push_back(G.boundary[k]);
    k = (k + 1) % L;
  } while (k != kq);
  return out;
}

bool cyclic_order(double p, double q, double r, double s, double L) {
  auto d = [&](double x) {
    double t = std::fmod(x - p, L);
    return t < 0 ? t + L : t;
  };
  double dq = d(q), dr = d(r), ds = d(s);
  return 0 < dq && dq < dr && dr < ds;
}

bool endpoint_order_ok(const Arc& a, const Arc& b, double L) { return cyclic_order(a.start, b.start, a.end, b.end, L); }

// ---------------------------------------------------------------- realization

namespace {

struct Chord {
  int arc;    // 0 or 1
  int index;  // chord i sits after i darts
  double p, q;
};

// Reduced prefixes of a path as a trie: prefix i is node at[i]; nodes carry parent and dart.
struct PrefixTrie {
  std::vector<int> parent{-1}, dart{0}, at;
  explicit PrefixTrie(const Word& path) {
    at.push_back(0);
    int cur = 0;
    for (int d : path) {
      if (cur != 0 && dart[cur] == -d) {
        cur = parent[cur];
      } else {
        parent.push_back(cur);
        dart.push_back(d);
        cur = (int)parent.size() - 1;
      }
      at.push_back(cur);
    }
  }
  Word word(int i) const {
    Word w;
    for (int n = at[i]; n != 0; n = parent[n]) w.push_back(dart[n]);
    std::reverse(w.begin(), w.end());
    return w;
  }
};

// reduce(A B^-1) for reduced A, B
Word relative_key(const Word& A, const Word& B) {
  size_t k = 0;
  while (k < A.size() && k < B.size() && A[A.size() - 1 - k] == B[B.size() - 1 - k]) ++k;
  Word out(A.begin(), A.end() - k);
  for (size_t i = B.size() - k; i-- > 0;) out.push_back(-B[i]);
  return out;
}

// keys with odd multiplicity, counted
int odd_classes(std::vector<Word>& keys, std::vector<std::pair<Word, int>>* out) {
  std::sort(keys.begin(), keys.end());
  int odd = 0;
  for (size_t i = 0; i < keys.size();) {
    size_t j = i;
    while (j < keys.size() && keys[j] == keys[i]) ++j;
    if ((j - i) % 2) ++odd;
    if (out) out->push_back({keys[i], (int)(j - i)});
    i = j;
  }
  return odd;
}

struct Realization {
  std::vector<std::vector<Chord>> by_vertex;
};

double corner_point(const FatGraph& G, double x) {
  int k = corner(x);
  int h = G.boundary[k];
  return G.rot_index[FatGraph::idx(h)] + 0.5 * (x - k);
}

double slot_point(const FatGraph& G, int slot, double tau) {
  return G.rot_index[FatGraph::idx(slot)] + 0.5 + 0.5 * (slot > 0 ? tau : 1 - tau);
}

// arcs drawn with parallel lanes in bands and straight chords in vertex disks
Realization realize(const FatGraph& G, const std::vector<const Arc*>& arcs) {
  std::vector<int> count(G.edges + 1, 0);
  for (auto* a : arcs)
    for (int d : a->path) ++count[std::abs(d)];
  std::vector<int> used(G.edges + 1, 0);
  Realization R;
  R.by_vertex.resize(G.vertices);
  for (int id = 0; id < (int)arcs.size(); ++id) {
    const Arc& a = *arcs[id];
    int m = (int)a.path.size();
    std::vector<double> tau(m);
    for (int t = 0; t < m; ++t) {
      int e = std::abs(a.path[t]);
      tau[t] = double(++used[e]) / (count[e] + 1);
    }
    int v = G.corner_vertex(corner(a.start));
    double p = corner_point(G, a.start);
    for (int i = 0; i <= m; ++i) {
      double q;
      if (i < m)
        q = slot_point(G, a.path[i], tau[i]);
      else
        q = corner_point(G, a.end);
      R.by_vertex[v].push_back(Chord{id, i, p, q});
      if (i < m) {
        p = slot_point(G, -a.path[i], tau[i]);
        v = G.head(a.path[i]);
      }
    }
  }
  return R;
}

bool chords_cross(const Chord& x, const Chord& y) {
  double lo = std::min(x.p, x.q), hi = std::max(x.p, x.q);
  bool a = lo < y.p && y.p < hi, b = lo < y.q && y.q < hi;
  return a != b;
}

}  // namespace

namespace {

std::vector<Word> crossing_keys(const FatGraph& G, const Arc& a, const Arc& b) {
  for (double x : {a.start, a.end})
    for (double y : {b.start, b.end})
      if (x == y) throw std::invalid_argument("arcs share an endpoint");
  auto R = realize(G, {&a, &b});
  std::vector<std::pair<int, int>> hits;
  for (auto& chords : R.by_vertex)
    for (auto& x : chords) {
      if (x.arc != 0) continue;
      for (auto& y : chords)
        if (y.arc == 1 && chords_cross(x, y)) hits.push_back({x.index, y.index});
    }
  std::vector<Word> keys;
  if (hits.empty()) return keys;
  PrefixTrie PA(a.path), PB(b.path);
  for (auto [i, j] : hits) keys.push_back(relative_key(PA.word(i), PB.word(j)));
  return keys;
}

}  // namespace

std::vector<std::pair<Word, int>> crossing_classes(const FatGraph& G, const Arc& a, const Arc& b) {
  auto keys = crossing_keys(G, a, b);
  std::vector<std::pair<Word, int>> out;
  odd_classes(keys, &out);
  return out;
}

int geometric_intersection(const FatGraph& G, const Arc& a, const Arc& b) {
  // crossings of one pair of lifts cancel in bigons; an odd count leaves one
  auto keys = crossing_keys(G, a, b);
  return odd_classes(keys, nullptr);
}

int self_intersection(const FatGraph& G, const Arc& a) {
  auto R = realize(G, {&a});
  PrefixTrie P(a.path);
  std::vector<Word> keys;
  for (auto& chords : R.by_vertex)
    for (size_t i = 0; i < chords.size(); ++i)
      for (size_t j = i + 1; j < chords.size(); ++j) {
        if (!chords_cross(chords[i], chords[j])) continue;
        Word k = relative_key(P.word(chords[i].index), P.word(chords[j].index));
        if (k.empty()) continue;  // a lift crossing itself bounds a monogon
        Word ki = inverse(k);
        keys.push_back(std::min(k, ki));
      }
  return odd_classes(keys, nullptr);
}

bool embedded(const FatGraph& G, const Arc& a) { return self_intersection(G, a) == 0; }

bool non_separating(const FatGraph& G, const Arc& a) {
  std::vector<int> h(G.edges + 1, 0);
  for (int d : a.path) h[std::abs(d)] += d > 0 ? 1 : -1;
  for (int d : boundary_path(G, a.end, a.start)) h[std::abs(d)] += d > 0 ? 1 : -1;
  for (int e = 1; e <= G.edges; ++e)
    if (h[e]) return true;
  return false;
}

bool parallel(const FatGraph& G, const Arc& a, const Arc& b) {
  double L = G.length();
  // no other endpoint strictly inside the forward segment from -> to
  auto free_segment = [&](double from, double to, const std::vector<double>& others) {
    double u = std::fmod(to - from + L, L);
    for (double o : others) {
      double t = std::fmod(o - from + L, L);
      if (t > 0 && t < u) return false;
    }
    return true;
  };
  Word target = reduce(b.path);
  for (const Arc& c : {a, reversed(a)}) {
    std::vector<double> others_s{c.end, b.end}, others_e{c.start, b.start};
    // slide the start from c.start to b.start, forward or backward
    std::vector<Word> starts, ends;
    if (free_segment(c.start, b.start, others_s)) starts.push_back(inverse(boundary_path(G, c.start, b.start)));
    if (free_segment(b.start, c.start, others_s)) starts.push_back(boundary_path(G, b.start, c.start));
    if (free_segment(c.end, b.end, others_e)) ends.push_back(boundary_path(G, c.end, b.end));
    if (free_segment(b.end, c.end, others_e)) ends.push_back(inverse(boundary_path(G, b.end, c.end)));
    for (auto& s : starts)
      for (auto& e : ends)
        if (reduce(concat(concat(s, c.path), e)) == target) return true;
  }
  return false;
}

Arc push_off(const Arc& a, int start_dir, int end_dir, const std::vector<double>& avoid) {
  auto slide = [&](double x, int dir) {
    if (dir == 0) return x;
    double lim = dir > 0 ? std::floor(x) + 1 : std::floor(x);
    auto closer = [&](double y) { return dir > 0 ? (y > x && y < lim) : (y < x && y > lim); };
    for (double y : avoid)
      if (closer(y)) lim = y;
    for (double y : {a.start, a.end})
      if (closer(y)) lim = y;
    return (x + lim) / 2;
  };
  return Arc{slide(a.start, start_dir), slide(a.end, end_dir), a.path};
}

Arc push_forward(const Arc& a, const std::vector<double>& avoid) { return push_off(a, 1, 1, avoid); }

// b pushed off the shared endpoints to the sides giving the fewest crossings with a
static Arc best_push(const FatGraph& G, const Arc& a, const Arc& b, int* crossings) {
  auto shared = [&](double x) { return x == a.start || x == a.end; };
  std::vector<int> ds = shared(b.start) ? std::vector<int>{1, -1} : std::vector<int>{0};
  std::vector<int> de = shared(b.end) ? std::vector<int>{1, -1} : std::vector<int>{0};
  Arc best;
  int bi = -1;
  for (int s : ds)
    for (int e : de) {
      Arc c = push_off(b, s, e, {a.start, a.end});
      int i = geometric_intersection(G, a, c);
      if (bi < 0 || i < bi) {
        bi = i;
        best = c;
      }
    }
  if (crossings) *crossings = bi;
  return best;
}

int relative_intersection(const FatGraph& G, const Arc& a, const Arc& b) {
  int i = 0;
  best_push(G, a, b, &i);
  return i;
}

Arc apply_mapping_class(const FatGraph& G, const Automorphism& phi, const Arc& a) {
  if (G.vertices != 1 || phi.rank != G.edges) throw std::invalid_argument("mapping class action needs the standard surface");
  Word dp = boundary_path(G, 0.0, a.start), dq = boundary_path(G, 0.0, a.end);
  Word loop = concat(concat(dp, a.path), inverse(dq));
  Word img = apply_automorphism(phi, loop);
  return Arc{a.start, a.end, reduce(concat(concat(inverse(dp), img), dq))};
}

// ---------------------------------------------------------------- good sequences

namespace {

// points strictly inside the forward interval (p, q), one per free gap, ordered from p
std::vector<double> interval_points(const FatGraph& G, double p, double q) {
  int L = G.length();
  std::vector<double> out;
  int kp = corner(p), kq = corner(q);
  if (kp == kq && q > p) return {(p + q) / 2};
  out.push_back((p + kp + 1) / 2);
  for (int k = (kp + 1) % L; k != kq; k = (k + 1) % L) out.push_back(k + 0.5);
  out.push_back((kq + q) / 2);
  return out;
}

struct Transversal {
  Arc arc;
  bool ok = false;
};

// i(beta, c) for beta = (s1 -> e, path) and every e in ends, sharing the work that does
// not depend on the end point: only beta's last chord moves.
std::vector<int> intersections_by_end(const FatGraph& G, double s1, const Word& path, const std::vector<double>& ends,
                                      const Arc& c) {
  std::vector<int> out(ends.size(), 0);
  if (ends.empty()) return out;
  Arc beta{s1, ends[0], path};
  auto R = realize(G, {&beta, &c});
  int m = (int)path.size();
  PrefixTrie PA(path), PC(c.path);
  std::map<Word, int> base;
  const Chord* last = nullptr;
  int v_last = -1;
  for (int v = 0; v < (int)R.by_vertex.size(); ++v)
    for (auto& x : R.by_vertex[v]) {
      if (x.arc != 0) continue;
      if (x.index == m) {
        last = &x;
        v_last = v;
        continue;
      }
      for (auto& y : R.by_vertex[v])
        if (y.arc == 1 && chords_cross(x, y)) ++base[relative_key(PA.word(x.index), PC.word(y.index))];
    }
  int odd = 0;
  for (auto& [k, n] : base) odd += n % 2;
  Word head = PA.word(m);
  for (size_t e = 0; e < ends.size(); ++e) {
    Chord x = *last;
    x.q = corner_point(G, ends[e]);
    std::vector<Word> extra;
    for (auto& y : R.by_vertex[v_last])
      if (y.arc == 1 && chords_cross(x, y)) extra.push_back(relative_key(head, PC.word(y.index)));
    std::sort(extra.begin(), extra.end());
    int n = odd;
    for (size_t i = 0; i < extra.size();) {
      size_t j = i;
      while (j < extra.size() && extra[j] == extra[i]) ++j;
      if ((j - i) % 2) {
        auto it = base.find(extra[i]);
        n += (it != base.end() && it->second % 2) ? -1 : 1;
      }
      i = j;
    }
    out[e] = n;
  }
  return out;
}

// Best-first search over (start point, tree path) pairs, all start points sharing one
// queue. Priority: crossings with c and d (best candidate end point) plus length.
Transversal find_transversal(const FatGraph& G, const Arc& c, const Arc& d, int sign, int budget) {
  double s = c.start, e = c.end;
  auto from = sign > 0 ? interval_points(G, s, e) : interval_points(G, e, s);
  auto to = sign > 0 ? interval_points(G, e, s) : interval_points(G, s, e);
  std::set<double> target(to.begin(), to.end());
  std::vector<double> all = from;
  all.insert(all.end(), to.begin(), to.end());
  struct Node {
    int cost;
    int len;
    long seq;
    int from;
    Word w;
    bool operator>(const Node& o) const {
      int a = cost + len, b = o.cost + o.len;
      return std::tie(a, cost, seq) > std::tie(b, o.cost, o.seq);
    }
  };
  std::priority_queue<Node, std::vector<Node>, std::greater<Node>> pq;
  std::set<std::pair<int, Word>> seen;
  long seq = 0;
  Transversal hit;
  auto end_vertex = [&](int f, const Word& w) { return w.empty() ? G.corner_vertex(corner(from[f])) : G.head(w.back()); };
  auto evaluate = [&](int f, const Word& w) {
    int best = 1 << 29;
    double s1 = from[f];
    int v = end_vertex(f, w);
    std::vector<double> ends;
    for (double e1 : all)
      if (e1 != s1 && G.corner_vertex(corner(e1)) == v) ends.push_back(e1);
    auto ic = intersections_by_end(G, s1, w, ends, c), id = intersections_by_end(G, s1, w, ends, d);
    for (size_t k = 0; k < ends.size(); ++k) {
      double e1 = ends[k];
      Arc beta{s1, e1, w};
      int cost = ic[k] + id[k];
      best = std::min(best, cost);
      if (cost == 0 && target.count(e1) && !hit.ok && embedded(G, beta) && non_separating(G, beta) &&
          !parallel(G, c, beta) && !parallel(G, d, beta)) {
        hit.arc = beta;
        hit.ok = true;
      }
    }
    return best;
  };
  for (int f = 0; f < (int)from.size() && !hit.ok; ++f) {
    seen.insert({f, Word{}});
    pq.push(Node{evaluate(f, {}), 0, seq++, f, {}});
  }
  int expanded = 0;
  while (!pq.empty() && !hit.ok && expanded < budget) {
    Node n = pq.top();
    pq.pop();
    ++expanded;
    int v = end_vertex(n.from, n.w);
    for (int d0 : G.rotation[v]) {
      if (!n.w.empty() && d0 == -n.w.back()) continue;
      Word w = n.w;
      w.push_back(d0);
      if (!seen.insert({n.from, w}).second) continue;
      int cost = evaluate(n.from, w);
      if (hit.ok) break;
      pq.push(Node{cost, (int)w.size(), seq++, n.from, w});
    }
  }
  return hit;
}

int measure(const FatGraph& G, const Arc& x, const Arc& target) { return relative_intersection(G, x, target); }

// arcs from surgering cur along target at one crossing class; kept if embedded,
// non-separating and strictly closer to target. Sorted by (crossings with target, length, path).
std::vector<Arc> surgery_candidates(const FatGraph& G, const Arc& cur, const Arc& target) {
  int I = measure(G, cur, target);
  std::vector<Arc> cands;
  auto add = [&](const Arc& a, const Arc& b) {
    Arc bp = best_push(G, a, b, nullptr);
    for (auto& [g, cnt] : crossing_classes(G, a, bp)) {
      if (cnt % 2 == 0) continue;
      cands.push_back(Arc{cur.start, cur.end, reduce(concat(g, b.path))});
      cands.push_back(Arc{cur.start, cur.end, reduce(concat(inverse(g), a.path))});
    }
  };
  add(cur, target);
  add(target, cur);
  std::vector<std::pair<int, Arc>> keep;
  std::set<Word> seen;
  for (auto& d : cands) {
    if (same_class(d, cur) || !seen.insert(d.path).second) continue;
    int m = measure(G, d, target);
    bool ok = m < I && embedded(G, d) && non_separating(G, d);
    if (ok) keep.push_back({m, d});
  }
  std::sort(keep.begin(), keep.end(), [](const auto& x, const auto& y) {
    if (x.first != y.first) return x.first < y.first;
    if (x.second.path.size() != y.second.path.size()) return x.second.path.size() < y.second.path.size();
    return x.second.path < y.second.path;
  });
  std::vector<Arc> out;
  for (auto& [m, d] : keep) out.push_back(d);
  return out;
}

}  // namespace

namespace {

// start, t, d^-1, t^-1, d, ... ending at alpha. Each link c -> d uses a common
// transversal t of c and d. Once the interiors are disjoint, bridge straight to alpha;
// before that, move to a surgered arc with fewer crossings with alpha.
std::vector<Arc> surgery_chain(const FatGraph& G, const Arc& a, const Arc& start, int sign, const BuildOptions& opt,
                               int* links) {
  std::vector<Arc> arcs{start};
  auto link = [&](const Arc& d, const Arc& t) {
    arcs.push_back(t);
    arcs.push_back(reversed(d));
    arcs.push_back(reversed(t));
    arcs.push_back(d);
    ++*links;
  };
  Arc cur = start;
  for (int moves = 0;; ++moves) {
    if (moves > opt.max_chain) throw std::runtime_error("failure to achieve efficient position: chain too long");
    int I = measure(G, cur, a);
    if (I == 0) {
      auto direct = find_transversal(G, cur, a, sign, opt.node_budget);
      if (!direct.ok) throw std::runtime_error("no transversal arc found within the search budget");
      link(a, direct.arc);
      return arcs;
    }
    bool moved = false;
    for (auto& d : surgery_candidates(G, cur, a)) {
      auto t = find_transversal(G, cur, d, sign, opt.node_budget);
      if (!t.ok) continue;
      link(d, t.arc);
      cur = d;
      moved = true;
      break;
    }
    if (!moved) throw std::runtime_error("failure to achieve efficient position: no non-separating reducing surgery");
  }
}

// Fallback through the letters of the monodromy word, phi = L_k o ... o L_1. With
// Q_j = L_k o ... o L_{j+1}, the arc Q_{j-1}(alpha) = Q_j(L_j(alpha)) is joined to Q_j(alpha)
// by Q_j applied to a chain from L_j(alpha) to alpha. Mapping classes fix the boundary,
// so disjointness, endpoint order and non-parallelism carry over.
std::vector<Arc> factored_chain(const FatGraph& G, const Arc& a, const std::string& monodromy, int sign,
                                const BuildOptions& opt, int* links) {
  std::istringstream in(monodromy);
  std::vector<std::string> letters;
  for (std::string tok; in >> tok;) letters.push_back(tok);
  int genus = G.genus();
  auto suffix = [&](size_t from) {
    std::string w;
    for (size_t i = from; i < letters.size(); ++i) w += (w.empty() ? "" : " ") + letters[i];
    return w.empty() ? identity_automorphism(G.edges) : parse_monodromy(genus, w);
  };
  std::map<std::string, std::vector<Arc>> cache;
  std::vector<Arc> arcs{apply_mapping_class(G, suffix(0), a)};
  for (size_t j = 0; j < letters.size(); ++j) {
    auto it = cache.find(letters[j]);
    if (it == cache.end()) {
      Arc moved = apply_mapping_class(G, parse_monodromy(genus, letters[j]), a);
      int n = 0;
      it = cache.emplace(letters[j], surgery_chain(G, a, moved, sign, opt, &n)).first;
    }
    auto Q = suffix(j + 1);
    for (size_t k = 1; k < it->second.size(); ++k) arcs.push_back(apply_mapping_class(G, Q, it->second[k]));
    *links += (int)(it->second.size() - 1) / 4;
  }
  return arcs;
}

}  // namespace

GoodSequence build_good_sequence(const FatGraph& G, const Arc& alpha, const Automorphism& phi,
                                 const std::string& monodromy, int sign, BuildOptions opt) {
  check_arc(G, alpha);
  if (!embedded(G, alpha)) throw std::invalid_argument("non-embedded input arc");
  if (!non_separating(G, alpha)) throw std::invalid_argument("input arc is separating");
  if (sign != 1 && sign != -1) throw std::invalid_argument("sign must be +1 or -1");
  GoodSequence seq;
  seq.alpha = alpha;
  seq.monodromy = monodromy;
  seq.phi = phi;
  seq.sign = sign;
  Arc a{alpha.start, alpha.end, reduce(alpha.path)};
  try {
    seq.method = "surgery";
    seq.arcs = surgery_chain(G, a, apply_mapping_class(G, phi, a), sign, opt, &seq.chain_length);
    return seq;
  } catch (const std::runtime_error&) {
    // the letter-by-letter route needs phi to be exactly the named registry word
    bool named = false;
    if (!monodromy.empty() && G.vertices == 1) {
      try {
        named = parse_monodromy(G.genus(), monodromy).images == phi.images;
      } catch (const std::exception&) {
      }
    }
    if (!named) throw;
  }
  seq.method = "factored";
  seq.chain_length = 0;
  seq.arcs = factored_chain(G, a, monodromy, sign, opt, &seq.chain_length);
  return seq;
}

SequenceReport validate_good_sequence(const FatGraph& G, const GoodSequence& seq) {
  SequenceReport r;
  const auto& A = seq.arcs;
  double L = G.length();
  auto fail = [&](int i, const std::string& why) {
    if (r.first_bad < 0) {
      r.first_bad = i;
      r.detail = why;
    }
  };
  if (A.size() < 2) {
    fail(0, "sequence needs at least two arcs");
    return r;
  }
  r.arcs_ok = true;
  for (int i = 0; i < (int)A.size(); ++i) {
    try {
      check_arc(G, A[i]);
    } catch (const std::exception& e) {
      r.arcs_ok = false;
      fail(i, std::string("arc invalid: ") + e.what());
      continue;
    }
    if (!embedded(G, A[i])) {
      r.arcs_ok = false;
      fail(i, "arc not embedded");
    } else if (!non_separating(G, A[i])) {
      r.arcs_ok = false;
      fail(i, "arc separating");
    }
  }
  if (!r.arcs_ok) return r;
  Arc image = apply_mapping_class(G, seq.phi, Arc{seq.alpha.start, seq.alpha.end, reduce(seq.alpha.path)});
  r.first_is_image = same_class(A.front(), image);
  if (!r.first_is_image) fail(0, "condition (1): first arc is not phi(alpha)");
  r.last_is_alpha = same_class(A.back(), seq.alpha);
  if (!r.last_is_alpha) fail((int)A.size() - 1, "condition (2): last arc not isotopic to alpha");
  r.consecutive_ok = true;
  for (int i = 0; i + 1 < (int)A.size(); ++i) {
    const Arc &x = A[i], &y = A[i + 1];
    std::string why;
    std::set<double> pts{x.start, x.end, y.start, y.end};
    if (pts.size() < 4)
      why = "condition (3): consecutive arcs share an endpoint";
    else if (geometric_intersection(G, x, y) != 0)
      why = "condition (3): consecutive arcs intersect";
    else if (parallel(G, x, y))
      why = "condition (3): consecutive arcs are parallel";
    else if (seq.sign > 0 ? !endpoint_order_ok(x, y, L) : !cyclic_order(y.end, x.end, y.start, x.start, L))
      why = "condition (3): endpoints out of order";
    if (!why.empty()) {
      r.consecutive_ok = false;
      fail(i, why);
    }
  }
  return r;
}

// ---------------------------------------------------------------- branched surface

BranchedSurfaceSpec branched_surface_from_sequence(const FatGraph& G, const GoodSequence& seq) {
  auto rep = validate_good_sequence(G, seq);
  if (!rep.pass()) throw std::invalid_argument("invalid sequence: " + rep.detail);
  BranchedSurfaceSpec spec;
  spec.n = (int)seq.arcs.size() - 1;
  spec.sign = seq.sign;
  spec.boundary_length = G.length();
  spec.sheet_orientation.assign(spec.n, 1);
  for (int i = 0; i < spec.n; ++i) {
    spec.annuli.push_back({i, seq.arcs[i].start, seq.arcs[i].end});
    spec.lines.push_back({i, i, 0, +1, seq.sign});
    spec.lines.push_back({i, (i + 1) % spec.n, 1, -1, -seq.sign});
  }
  return spec;
}

BranchedSurfaceSpec fiber_only_spec(int sheets, double boundary_length) {
  BranchedSurfaceSpec spec;
  spec.n = sheets;
  spec.boundary_length = boundary_length;
  spec.sheet_orientation.assign(sheets, 1);
  return spec;
}

bool orientation_consistent(const BranchedSurfaceSpec& spec, std::string* why) {
  auto bad = [&](const std::string& s) {
    if (why) *why = s;
    return false;
  };
  if (spec.n < 1) return bad("no sheets");
  if ((int)spec.sheet_orientation.size() != spec.n) return bad("sheet orientation count");
  for (int o : spec.sheet_orientation)
    if (o != 1) return bad("sheet not oriented as the fiber");
  if (!spec.annuli.empty() && (int)spec.annuli.size() != spec.n) return bad("annulus count differs from sheet count");
  if (spec.lines.size() != 2 * spec.annuli.size()) return bad("each annulus needs exactly two branch lines");
  for (int i = 0; i < (int)spec.annuli.size(); ++i) {
    int bottom = 0, top = 0;
    for (auto& l : spec.lines) {
      if (l.annulus != i) continue;
      if (l.level == 0) {
        ++bottom;
        if (l.sheet != i || l.orientation != 1 || l.cusp != spec.sign) return bad("bottom line of annulus " + std::to_string(i));
      } else {
        ++top;
        if (l.sheet != (i + 1) % spec.n || l.orientation != -1 || l.cusp != -spec.sign)
          return bad("top line of annulus " + std::to_string(i));
      }
    }
    if (bottom != 1 || top != 1) return bad("annulus " + std::to_string(i) + " lacks two branch lines");
  }
  return true;
}

// ---------------------------------------------------------------- weights

int rational_rank(std::vector<std::vector<Rational>> A) {
  int rows = (int)A.size(), rank = 0;
  if (!rows) return 0;
  int cols = (int)A[0].size();
  for (int c = 0; c < cols && rank < rows; ++c) {
    int piv = -1;
    for (int r = rank; r < rows; ++r)
      if (A[r][c] != 0) {
        piv = r;
        break;
      }
    if (piv < 0) continue;
    std::swap(A[piv], A[rank]);
    for (int r = 0; r < rows; ++r) {
      if (r == rank || A[r][c] == 0) continue;
      Rational f = A[r][c] / A[rank][c];
      for (int k = c; k < cols; ++k) A[r][k] -= f * A[rank][k];
    }
    ++rank;
  }
  return rank;
}

namespace {

struct Switch {
  double pos;
  int arrival;  // 1 arrival, 0 departure
  int annulus;
};

struct Track {
  double ref = 0;
  std::vector<std::vector<Switch>> circles;  // per sheet, ordered from the reference point
  std::vector<std::vector<int>> offsets;     // piece j weight = x_i + offsets[i][j] a
};

Track boundary_track(const BranchedSurfaceSpec& spec) {
  Track T;
  int n = spec.n;
  double L = spec.boundary_length;
  std::vector<double> pts;
  for (auto& a : spec.annuli) {
    pts.push_back(a.start);
    pts.push_back(a.end);
  }
  std::sort(pts.begin(), pts.end());
  T.ref = std::fmod((pts.back() + pts.front() + L) / 2, L);
  auto from_ref = [&](double x) {
    double t = std::fmod(x - T.ref, L);
    return t < 0 ? t + L : t;
  };
  T.circles.resize(n);
  T.offsets.resize(n);
  for (int i = 0; i < n; ++i) {
    auto& C = T.circles[i];
    const auto& dep = spec.annuli[i];
    const auto& arr = spec.annuli[(i - 1 + n) % n];
    C.push_back({dep.start, 0, i});
    C.push_back({dep.end, 0, i});
    C.push_back({arr.start, 1, (i - 1 + n) % n});
    C.push_back({arr.end, 1, (i - 1 + n) % n});
    std::sort(C.begin(), C.end(), [&](const Switch& a, const Switch& b) {
      double da = from_ref(a.pos), db = from_ref(b.pos);
      if (da != db) return da < db;
      return a.arrival > b.arrival;  // coincident points: arrive, then depart
    });
    int c = 0;
    T.offsets[i].push_back(0);
    for (size_t j = 0; j + 1 < C.size(); ++j) {
      c += C[j].arrival ? 1 : -1;
      T.offsets[i].push_back(c);
    }
  }
  return T;
}

}  // namespace

WeightSystem lamination_weights(const BranchedSurfaceSpec& spec, const Rational& eps) {
  WeightSystem W;
  int n = spec.n;
  if (n < 1) {
    W.reason = "no sheets";
    return W;
  }
  if (spec.annuli.empty()) {
    W.slope = 0;
    W.sheet.assign(n, Rational(1, n));
    for (int i = 0; i < n; ++i) W.pieces.push_back({Rational(1, n)});
    if (eps != 0) {
      W.reason = "fiber-only surface carries slope 0 only";
      return W;
    }
    W.feasible = true;
    W.fully_carried = true;
    return W;
  }
  if (eps * spec.sign < 0) {
    W.reason = "slope sign opposite to the sequence sign";
    return W;
  }
  Track T = boundary_track(spec);
  Rational a = abs(eps) / 2;
  int K = 0;
  std::vector<int> m(n);
  for (int i = 0; i < n; ++i) {
    int lo = *std::min_element(T.offsets[i].begin(), T.offsets[i].end());
    m[i] = std::max(0, -lo);
    K += m[i];
  }
  W.annulus.assign(n, a);
  W.slope = eps;
  if (K * a >= 1) {
    W.reason = "slope outside the admissible interval";
    return W;
  }
  W.sheet.resize(n);
  W.pieces.resize(n);
  for (int i = 0; i < n; ++i) {
    W.sheet[i] = m[i] * a + (1 - K * a) / n;
    for (int c : T.offsets[i]) W.pieces[i].push_back(W.sheet[i] + c * a);
  }
  // exact residual of every switch equation and of the two normalisations
  Rational res = 0;
  for (int i = 0; i < n; ++i) {
    const auto& C = T.circles[i];
    int k = (int)C.size();
    for (int j = 0; j < k; ++j) {
      const Rational& before = W.pieces[i][j];
      const Rational& after = W.pieces[i][(j + 1) % k];
      Rational r = after - before - (C[j].arrival ? 1 : -1) * W.annulus[C[j].annulus];
      res += abs(r);
    }
  }
  Rational H = 0;
  for (auto& x : W.sheet) H += x;
  res += abs(H - 1);
  res += abs(spec.sign * 2 * W.annulus[0] / H - eps);
  W.residual = res;
  W.feasible = true;
  bool pos = a > 0;
  for (auto& row : W.pieces)
    for (auto& x : row) pos = pos && x > 0;
  W.fully_carried = pos;
  return W;
}

bool SlopeInterval::contains(const Rational& e) const {
  bool above = lo_closed ? e >= lo : e > lo;
  bool below = hi_closed ? e <= hi : e < hi;
  return above && below;
}

std::string SlopeInterval::to_string() const {
  std::ostringstream o;
  o << (lo_closed ? "[" : "(") << lo << ", " << hi << (hi_closed ? "]" : ")");
  return o.str();
}

SlopeInterval slope_interval(const BranchedSurfaceSpec& spec) {
  SlopeInterval I;
  if (spec.annuli.empty()) return I;  // {0}
  Track T = boundary_track(spec);
  int K = 0;
  for (auto& off : T.offsets) K += std::max(0, -*std::min_element(off.begin(), off.end()));
  Rational bound = Rational(2, K);
  if (spec.sign > 0) {
    I.lo = 0;
    I.hi = bound;
    I.hi_closed = false;
  } else {
    I.lo = -bound;
    I.lo_closed = false;
    I.hi = 0;
  }
  return I;
}

}  // namespace htk::arcs
