#pragma once
// Slow, independent reference implementations used only by the tests.

#include <algorithm>
#include <random>
#include <vector>

#include "htk/freegroup.hpp"

namespace oracle {

using htk::Word;

// repeatedly delete the first adjacent cancelling pair
inline Word naive_reduce(Word w) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (size_t i = 0; i + 1 < w.size(); ++i)
      if (w[i] == -w[i + 1]) {
        w.erase(w.begin() + i, w.begin() + i + 2);
        changed = true;
        break;
      }
  }
  return w;
}

// cancel random adjacent pairs until none remain
inline Word random_order_reduce(Word w, std::mt19937_64& rng) {
  for (;;) {
    std::vector<size_t> cand;
    for (size_t i = 0; i + 1 < w.size(); ++i)
      if (w[i] == -w[i + 1]) cand.push_back(i);
    if (cand.empty()) return w;
    size_t i = cand[rng() % cand.size()];
    w.erase(w.begin() + i, w.begin() + i + 2);
  }
}

inline Word expand_eta(const Word& eta, int sign, int offset, int k) {
  Word e = sign > 0 ? eta : htk::inverse(eta);
  Word r;
  for (int j = 0; j < k * (int)e.size(); ++j) r.push_back(e[(offset + j) % e.size()]);
  return r;
}

struct Block {
  int exponent, start, end;
};

// enumerate every explicit eta^{+-k} rotation occurrence, keep leftmost-longest
inline std::vector<Block> scan_blocks(const Word& w, const Word& eta) {
  int L = (int)eta.size(), n = (int)w.size();
  std::vector<Block> out;
  int i = 0;
  while (i < n) {
    Block best{0, i, i};
    for (int sign : {1, -1})
      for (int off = 0; off < L; ++off)
        for (int k = 1; i + k * L <= n; ++k) {
          Word e = expand_eta(eta, sign, off, k);
          if (!std::equal(e.begin(), e.end(), w.begin() + i)) break;
          if (k * L > best.end - best.start) best = {sign * k, i, i + k * L};
        }
    if (best.exponent != 0) {
      out.push_back(best);
      i = best.end;
    } else {
      ++i;
    }
  }
  return out;
}

}  // namespace oracle
