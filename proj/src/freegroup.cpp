#include "htk/freegroup.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <stdexcept>

namespace htk {

Word reduce(const Word& w) {
  Word out;
  out.reserve(w.size());
  for (int x : w) {
    if (!out.empty() && out.back() == -x)
      out.pop_back();
    else
      out.push_back(x);
  }
  return out;
}

bool is_trivial(const Word& w) { return reduce(w).empty(); }

Word inverse(const Word& w) {
  Word r(w.rbegin(), w.rend());
  for (int& x : r) x = -x;
  return r;
}

Word concat(const Word& u, const Word& v) {
  Word r = u;
  r.insert(r.end(), v.begin(), v.end());
  return reduce(r);
}

Word power(const Word& w, int k) {
  Word base = k < 0 ? inverse(w) : w;
  Word r;
  for (int i = 0; i < std::abs(k); ++i) r.insert(r.end(), base.begin(), base.end());
  return reduce(r);
}

Word cyclic_reduce(const Word& w, Word* conj) {
  Word r = reduce(w);
  size_t i = 0, j = r.size();
  while (j - i >= 2 && r[i] == -r[j - 1]) {
    ++i;
    --j;
  }
  if (conj) conj->assign(r.begin(), r.begin() + i);
  return Word(r.begin() + i, r.begin() + j);
}

bool are_conjugate(const Word& u, const Word& v) {
  Word a = cyclic_reduce(u), b = cyclic_reduce(v);
  if (a.size() != b.size()) return false;
  if (a.empty()) return true;
  Word aa = a;
  aa.insert(aa.end(), a.begin(), a.end());
  return std::search(aa.begin(), aa.end(), b.begin(), b.end()) != aa.end();
}

std::string to_string(const Word& w) {
  if (w.empty()) return "1";
  std::ostringstream os;
  for (size_t i = 0; i < w.size(); ++i) {
    if (i) os << ' ';
    os << 'a' << std::abs(w[i]);
    if (w[i] < 0) os << "^-1";
  }
  return os.str();
}

SurfaceGroup surface_group(int genus) {
  if (genus < 1) throw std::invalid_argument("genus must be positive");
  SurfaceGroup G;
  G.genus = genus;
  for (int h = 0; h < genus; ++h) {
    int a = 2 * h + 1, b = 2 * h + 2;
    G.eta.insert(G.eta.end(), {a, b, -a, -b});
  }
  return G;
}

Word apply_unchecked(const Automorphism& phi, const Word& w) {
  Word r;
  for (int x : w) {
    int g = std::abs(x);
    if (g < 1 || g > phi.rank) throw std::invalid_argument("letter outside generator range");
    const Word& im = phi.images[g - 1];
    if (x > 0)
      r.insert(r.end(), im.begin(), im.end());
    else
      for (auto it = im.rbegin(); it != im.rend(); ++it) r.push_back(-*it);
  }
  return reduce(r);
}

static Word apply_inv(const Automorphism& phi, const Word& w) {
  Word r;
  for (int x : w) {
    const Word& im = phi.inverse_images[std::abs(x) - 1];
    if (x > 0)
      r.insert(r.end(), im.begin(), im.end());
    else
      for (auto it = im.rbegin(); it != im.rend(); ++it) r.push_back(-*it);
  }
  return reduce(r);
}

bool Automorphism::check() const {
  if ((int)images.size() != rank || (int)inverse_images.size() != rank) return false;
  for (auto* v : {&images, &inverse_images})
    for (auto& w : *v)
      for (int x : w)
        if (x == 0 || std::abs(x) > rank) return false;
  for (int g = 1; g <= rank; ++g) {
    if (apply_inv(*this, images[g - 1]) != Word{g}) return false;
    if (apply_unchecked(*this, inverse_images[g - 1]) != Word{g}) return false;
  }
  return true;
}

bool Automorphism::fixes(const Word& w) const { return apply_unchecked(*this, w) == reduce(w); }

Word apply_automorphism(const Automorphism& phi, const Word& w) {
  if (!phi.check()) throw std::invalid_argument("invalid automorphism: " + phi.name);
  return apply_unchecked(phi, w);
}

Automorphism identity_automorphism(int rank) {
  Automorphism a;
  a.name = "id";
  a.rank = rank;
  a.r_phi = 4;
  for (int g = 1; g <= rank; ++g) {
    a.images.push_back({g});
    a.inverse_images.push_back({g});
  }
  return a;
}

Automorphism compose(const Automorphism& first, const Automorphism& second) {
  Automorphism c;
  c.rank = first.rank;
  c.name = first.name == "id" ? second.name
           : second.name == "id" ? first.name
                                 : first.name + " " + second.name;
  c.r_phi = first.r_phi + second.r_phi - 4;
  for (int g = 0; g < c.rank; ++g) {
    c.images.push_back(apply_unchecked(second, first.images[g]));
    c.inverse_images.push_back(apply_inv(first, second.inverse_images[g]));
  }
  return c;
}

Automorphism invert(const Automorphism& phi) {
  Automorphism r = phi;
  std::swap(r.images, r.inverse_images);
  r.name = phi.name + "^-1";
  return r;
}

static Automorphism pow_aut(Automorphism base, int k, const std::string& name) {
  Automorphism r = identity_automorphism(base.rank);
  if (k < 0) base = invert(base);
  for (int i = 0; i < std::abs(k); ++i) r = compose(r, base);
  r.name = name;
  r.r_phi = 4 + std::abs(k);
  return r;
}

Automorphism twist_a(int genus, int handle, int k) {
  if (handle < 1 || handle > genus) throw std::invalid_argument("handle out of range");
  Automorphism t = identity_automorphism(2 * genus);
  int a = 2 * handle - 1, b = 2 * handle;
  t.images[b - 1] = {b, a};
  t.inverse_images[b - 1] = {b, -a};
  return pow_aut(t, k, "Ta" + std::to_string(handle) + (k == 1 ? "" : "^" + std::to_string(k)));
}

Automorphism twist_b(int genus, int handle, int k) {
  if (handle < 1 || handle > genus) throw std::invalid_argument("handle out of range");
  Automorphism t = identity_automorphism(2 * genus);
  int a = 2 * handle - 1, b = 2 * handle;
  t.images[a - 1] = {a, b};
  t.inverse_images[a - 1] = {a, -b};
  return pow_aut(t, k, "Tb" + std::to_string(handle) + (k == 1 ? "" : "^" + std::to_string(k)));
}

// handles h, h+1 with commutators X, Y:
//   a <- X c X^-1, b <- X d X^-1, c <- a, d <- b   so that XY is fixed
Automorphism handle_swap(int genus, int handle, int k) {
  if (handle < 1 || handle >= genus) throw std::invalid_argument("swap needs two handles");
  Automorphism t = identity_automorphism(2 * genus);
  int a = 2 * handle - 1, b = a + 1, c = a + 2, d = a + 3;
  Word X{a, b, -a, -b}, Y{c, d, -c, -d};
  auto conj = [](const Word& u, int x) { return reduce(concat(concat(u, {x}), inverse(u))); };
  t.images[a - 1] = conj(X, c);
  t.images[b - 1] = conj(X, d);
  t.images[c - 1] = {a};
  t.images[d - 1] = {b};
  t.inverse_images[a - 1] = {c};
  t.inverse_images[b - 1] = {d};
  t.inverse_images[c - 1] = conj(inverse(Y), a);
  t.inverse_images[d - 1] = conj(inverse(Y), b);
  return pow_aut(t, k, "S" + std::to_string(handle) + (k == 1 ? "" : "^" + std::to_string(k)));
}

static Automorphism parse_letter(int genus, const std::string& tok) {
  int k = 1;
  std::string base = tok;
  auto caret = tok.find('^');
  if (caret != std::string::npos) {
    base = tok.substr(0, caret);
    k = std::stoi(tok.substr(caret + 1));
  }
  if (base.size() < 2) throw std::invalid_argument("bad monodromy letter: " + tok);
  if (base == "id") return identity_automorphism(2 * genus);
  if (base[0] == 'S') return handle_swap(genus, std::stoi(base.substr(1)), k);
  if (base.size() >= 3 && base[0] == 'T' && base[1] == 'a') return twist_a(genus, std::stoi(base.substr(2)), k);
  if (base.size() >= 3 && base[0] == 'T' && base[1] == 'b') return twist_b(genus, std::stoi(base.substr(2)), k);
  throw std::invalid_argument("bad monodromy letter: " + tok);
}

Automorphism parse_monodromy(int genus, const std::string& text) {
  std::istringstream is(text);
  std::string tok;
  Automorphism r = identity_automorphism(2 * genus);
  int letters = 0;
  while (is >> tok) {
    Automorphism l = parse_letter(genus, tok);
    if (tok != "id") letters += l.r_phi - 4;
    r = compose(r, l);
  }
  r.name = text.empty() ? "id" : text;
  r.r_phi = 4 + letters;
  return r;
}

std::vector<std::string> registry_letters(int genus) {
  std::vector<std::string> out;
  for (int h = 1; h <= genus; ++h)
    for (std::string t : {"Ta", "Tb"}) {
      out.push_back(t + std::to_string(h));
      out.push_back(t + std::to_string(h) + "^-1");
    }
  for (int h = 1; h < genus; ++h) {
    out.push_back("S" + std::to_string(h));
    out.push_back("S" + std::to_string(h) + "^-1");
  }
  return out;
}

std::vector<std::string> registry_monodromies(int genus, int max_len) {
  auto letters = registry_letters(genus);
  auto inv_of = [](const std::string& s) {
    auto c = s.find("^-1");
    return c == std::string::npos ? s + "^-1" : s.substr(0, c);
  };
  std::vector<std::vector<std::string>> frontier{{}};
  std::vector<std::string> out{"id"};
  for (int len = 1; len <= max_len; ++len) {
    std::vector<std::vector<std::string>> next;
    for (auto& w : frontier)
      for (auto& l : letters) {
        if (!w.empty() && inv_of(w.back()) == l) continue;
        auto v = w;
        v.push_back(l);
        std::string s;
        for (size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + v[i];
        out.push_back(s);
        next.push_back(std::move(v));
      }
    frontier = std::move(next);
  }
  return out;
}

// --- eta blocks -----------------------------------------------------------

namespace {
struct EtaIndex {
  std::vector<int> pos_fwd, pos_inv;  // letter -> position in eta / eta^-1
  Word fwd, inv;
  int rank;
  explicit EtaIndex(const SurfaceGroup& G) : fwd(G.eta), inv(inverse(G.eta)), rank(G.rank()) {
    pos_fwd.assign(2 * rank + 1, -1);
    pos_inv.assign(2 * rank + 1, -1);
    for (int i = 0; i < (int)fwd.size(); ++i) {
      pos_fwd[fwd[i] + rank] = i;
      pos_inv[inv[i] + rank] = i;
    }
  }
  // sign of the rotation matching w[i..i+L) and its offset, 0 if none
  int match(const Word& w, int i, int* offset) const {
    int L = (int)fwd.size();
    if (i + L > (int)w.size()) return 0;
    int x = w[i];
    if (std::abs(x) > rank) return 0;
    for (int sgn : {1, -1}) {
      const Word& e = sgn > 0 ? fwd : inv;
      int o = (sgn > 0 ? pos_fwd : pos_inv)[x + rank];
      if (o < 0) continue;
      bool ok = true;
      for (int j = 1; j < L && ok; ++j) ok = w[i + j] == e[(o + j) % L];
      if (ok) {
        *offset = o;
        return sgn;
      }
    }
    return 0;
  }
};
}  // namespace

std::vector<EtaBlock> eta_power_decompose(const Word& w, const SurfaceGroup& G) {
  EtaIndex idx(G);
  const int L = G.eta_len();
  std::vector<EtaBlock> blocks;
  int i = 0, n = (int)w.size();
  while (i + L <= n) {
    int off = 0;
    int sgn = idx.match(w, i, &off);
    if (!sgn) {
      ++i;
      continue;
    }
    int j = i + L;
    while (j < n && w[j] == w[j - L]) ++j;
    int k = (j - i) / L;
    blocks.push_back({sgn * k, i, i + k * L, off});
    i += k * L;
  }
  return blocks;
}

Word expand_block(const EtaBlock& b, const SurfaceGroup& G) {
  Word e = b.exponent > 0 ? G.eta : inverse(G.eta);
  int L = (int)e.size();
  Word r;
  for (int j = 0; j < std::abs(b.exponent) * L; ++j) r.push_back(e[(b.offset + j) % L]);
  return r;
}

long long count_long_exponent_sum(const Word& w, const SurfaceGroup& G, int dfrak, int N) {
  long long C = 0;
  long long thr = (long long)N * dfrak;
  for (auto& b : eta_power_decompose(w, G))
    if (b.exponent >= thr) C += b.exponent;
  return C;
}

// --- loops ----------------------------------------------------------------

void LoopSpec::validate(const SurfaceGroup& G) const {
  if (p < 1 || n < 1) throw std::invalid_argument("p and n must be positive");
  if ((int)B.size() != p || (int)O.size() != p || (int)sigma.size() != p)
    throw std::invalid_argument("B, O, sigma must have p entries");
  std::vector<bool> seen(p, false);
  for (int s : sigma) {
    if (s < 0 || s >= p || seen[s]) throw std::invalid_argument("sigma is not a permutation");
    seen[s] = true;
  }
  for (auto* v : {&B, &O})
    for (auto& w : *v)
      for (int x : w)
        if (x == 0 || std::abs(x) > G.rank()) throw std::invalid_argument("letter outside generator range");
  for (auto& o : O)
    if ((int)reduce(o).size() > o_bound) throw std::invalid_argument("O_i exceeds its length bound");
}

Word build_gamma0(const LoopSpec& spec, const Automorphism& phi, const SurfaceGroup& G) {
  spec.validate(G);
  if (!phi.check()) throw std::invalid_argument("invalid automorphism: " + phi.name);
  Word etan = power(G.eta, spec.n);
  Word r;
  for (int i = 0; i < spec.p; ++i) {
    r.insert(r.end(), etan.begin(), etan.end());
    r.insert(r.end(), spec.B[i].begin(), spec.B[i].end());
    r.insert(r.end(), spec.O[i].begin(), spec.O[i].end());
    Word c = apply_unchecked(phi, inverse(spec.B[spec.sigma[i]]));
    r.insert(r.end(), c.begin(), c.end());
  }
  return reduce(r);
}

Certificate certify_noncontractible(const LoopSpec& spec, const Automorphism& phi,
                                    const SurfaceGroup& G, int dfrak, int r_phi, int N) {
  if (N < 5) throw std::invalid_argument("parameter violation: N < 5");
  if (dfrak < r_phi) throw std::invalid_argument("parameter violation: dfrak < r_phi");
  Certificate c;
  c.dfrak = dfrak;
  c.r_phi = r_phi;
  c.N = N;
  Word g0 = build_gamma0(spec, phi, G);
  c.C = count_long_exponent_sum(g0, G, dfrak, N);
  c.bound = (long long)spec.p * (spec.n - 6LL * dfrak);
  c.verdict = spec.n > 6 * dfrak && c.C >= c.bound && c.C > 0;
  c.gamma0_trivial = g0.empty();
  c.gamma0_length = (int)g0.size();
  c.oracle_agrees = !c.verdict || !c.gamma0_trivial;
  return c;
}

static int dfrak_of(const Word& w, const SurfaceGroup& G, int excluded) {
  std::vector<int> e;
  for (auto& b : eta_power_decompose(reduce(w), G)) e.push_back(std::abs(b.exponent));
  std::sort(e.rbegin(), e.rend());
  if ((int)e.size() <= excluded) return 1;
  return 1 + e[excluded];
}

int estimate_dfrak(const LoopSpec& spec, const Automorphism& phi, const SurfaceGroup& G) {
  spec.validate(G);
  int d = 1;
  for (int i = 0; i < spec.p; ++i) {
    d = std::max(d, dfrak_of(spec.B[i], G, 2));
    d = std::max(d, dfrak_of(apply_automorphism(phi, inverse(spec.B[spec.sigma[i]])), G, 2));
    d = std::max(d, dfrak_of(spec.O[i], G, 0));
  }
  return d;
}

Word random_word(std::mt19937_64& rng, int rank, int length) {
  std::uniform_int_distribution<int> gen(1, rank), sgn(0, 1);
  Word w;
  while ((int)w.size() < length) {
    int x = gen(rng) * (sgn(rng) ? 1 : -1);
    if (!w.empty() && w.back() == -x) continue;
    w.push_back(x);
  }
  return w;
}

RandomLoop random_loop(std::mt19937_64& rng, int max_genus, int max_p, int monodromy_len, int n_spread) {
  if (max_genus < 1 || max_p < 1 || monodromy_len < 0 || n_spread < 1)
    throw std::invalid_argument("random_loop: bad ranges");
  static std::mutex m;
  static std::map<std::pair<int, int>, std::vector<std::string>> cache;
  RandomLoop out;
  out.genus = 1 + (int)(rng() % max_genus);
  std::vector<std::string> words;
  {
    std::lock_guard<std::mutex> lock(m);
    auto& w = cache[{out.genus, monodromy_len}];
    if (w.empty()) w = registry_monodromies(out.genus, monodromy_len);
    words = w;
  }
  out.monodromy = words[rng() % words.size()];
  out.phi = out.monodromy.empty() ? identity_automorphism(2 * out.genus) : parse_monodromy(out.genus, out.monodromy);
  auto G = surface_group(out.genus);
  LoopSpec& s = out.spec;
  s.p = 1 + (int)(rng() % max_p);
  for (int i = 0; i < s.p; ++i) {
    s.B.push_back(random_word(rng, G.rank(), (int)(rng() % 12)));
    s.O.push_back(random_word(rng, G.rank(), (int)(rng() % 4)));
    s.sigma.push_back(i);
  }
  std::shuffle(s.sigma.begin(), s.sigma.end(), rng);
  out.dfrak = std::max(estimate_dfrak(s, out.phi, G), out.phi.r_phi);
  s.n = 6 * out.dfrak + 1 + (int)(rng() % n_spread);
  return out;
}

}  // namespace htk
