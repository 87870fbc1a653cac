#pragma once
// Brute-force lift-and-count intersection numbers. Works in the universal cover:
// lifts are tree paths, and two lifts cross iff their endpoints interleave on
// the boundary of a thickened finite subtree containing both.

#include <cmath>
#include <map>
#include <set>
#include <utility>

#include "htk/surface_arcs.hpp"

namespace oracle {

using htk::Word;
using htk::arcs::Arc;
using htk::arcs::FatGraph;

struct Lift {
  Word from, to;  // tree nodes of the endpoints
  int start_corner, end_corner;
  double start_off, end_off;
};

inline Lift lift(const Arc& a, const Word& at) {
  Word p = htk::reduce(a.path);
  int ks = (int)std::floor(a.start), ke = (int)std::floor(a.end);
  return Lift{htk::reduce(at), htk::reduce(htk::concat(at, p)), ks, ke, a.start - ks, a.end - ke};
}

// walk index of every (node, corner-before-dart) on the thickened hull of `nodes`
inline std::map<std::pair<Word, int>, int> hull_walk(const FatGraph& G, int root_vertex, const std::vector<Word>& nodes) {
  std::set<Word> H{Word{}};
  for (auto& n : nodes)
    for (size_t k = 1; k <= n.size(); ++k) H.insert(Word(n.begin(), n.begin() + k));
  auto step = [&](const Word& w, int d) {
    Word x = w;
    if (!x.empty() && x.back() == -d)
      x.pop_back();
    else
      x.push_back(d);
    return x;
  };
  auto in_hull = [&](const Word& w, int d) { return H.count(step(w, d)) > 0; };
  std::map<std::pair<Word, int>, int> order;
  int t = 0;
  const auto& rot0 = G.rotation[root_vertex];
  if (H.size() == 1) {
    for (int d : rot0) order[{Word{}, d}] = t++;
    return order;
  }
  int h0 = 0;
  for (int d : rot0)
    if (in_hull(Word{}, d)) {
      h0 = d;
      break;
    }
  Word at{};
  int h = h0;
  do {
    Word nxt = step(at, h);
    int d = G.next(-h);
    for (;;) {
      order[{nxt, d}] = t++;
      if (in_hull(nxt, d)) break;
      d = G.next(d);
    }
    at = nxt;
    h = d;
  } while (!(at.empty() && h == h0));
  return order;
}

inline bool linked(const FatGraph& G, int root_vertex, const Lift& A, const Lift& B) {
  auto walk = hull_walk(G, root_vertex, {A.from, A.to, B.from, B.to});
  auto key = [&](const Word& node, int corner, double off) {
    int t = walk.at({node, G.boundary[corner]});
    return std::make_pair(t, off);
  };
  auto a0 = key(A.from, A.start_corner, A.start_off), a1 = key(A.to, A.end_corner, A.end_off);
  auto b0 = key(B.from, B.start_corner, B.start_off), b1 = key(B.to, B.end_corner, B.end_off);
  auto lo = std::min(a0, a1), hi = std::max(a0, a1);
  bool x = lo < b0 && b0 < hi, y = lo < b1 && b1 < hi;
  return x != y;
}

inline std::vector<Word> prefix_nodes(const Word& p) {
  std::vector<Word> out{Word{}};
  Word w;
  for (int d : p) {
    if (!w.empty() && w.back() == -d)
      w.pop_back();
    else
      w.push_back(d);
    out.push_back(w);
  }
  return out;
}

// vertex reached from `from` along w
inline int end_vertex(const FatGraph& G, int from, const Word& w) { return w.empty() ? from : G.head(w.back()); }

inline int intersection(const FatGraph& G, const Arc& a, const Arc& b) {
  int v = G.corner_vertex((int)std::floor(a.start));
  int vb = G.corner_vertex((int)std::floor(b.start));
  std::set<Word> cand;
  for (auto& x : prefix_nodes(a.path))
    for (auto& y : prefix_nodes(b.path))
      if (end_vertex(G, v, x) == end_vertex(G, vb, y)) cand.insert(htk::reduce(htk::concat(x, htk::inverse(y))));
  Lift A = lift(a, {});
  int n = 0;
  for (auto& g : cand) n += linked(G, v, A, lift(b, g));
  return n;
}

inline int self_intersection(const FatGraph& G, const Arc& a) {
  int v = G.corner_vertex((int)std::floor(a.start));
  std::set<Word> cand;
  auto P = prefix_nodes(a.path);
  for (auto& x : P)
    for (auto& y : P) {
      if (end_vertex(G, v, x) != end_vertex(G, v, y)) continue;
      Word g = htk::reduce(htk::concat(x, htk::inverse(y)));
      if (!g.empty()) cand.insert(g);
    }
  Lift A = lift(a, {});
  int n = 0;
  for (auto& g : cand) n += linked(G, v, A, lift(a, g));
  return n / 2;  // g and g^-1 see the same crossing
}

}  // namespace oracle
