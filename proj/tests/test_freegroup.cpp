#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <random>
#include <set>
#include <stdexcept>

#include "htk/freegroup.hpp"
#include "oracles.hpp"

using namespace htk;

static Word cat(std::initializer_list<Word> parts) {
  Word r;
  for (auto& p : parts) r.insert(r.end(), p.begin(), p.end());
  return r;
}
static Word rep(const Word& w, int k) {
  Word r;
  for (int i = 0; i < k; ++i) r.insert(r.end(), w.begin(), w.end());
  return r;
}

TEST_CASE("reduce examples") {
  CHECK(reduce({1, -1}).empty());
  CHECK(reduce({1, 2, -2, 3}) == Word{1, 3});
  auto G = surface_group(1);
  Word w = cat({G.eta, inverse(G.eta), G.eta});
  CHECK(reduce(w) == Word{1, 2, -1, -2});
  CHECK(oracle::naive_reduce(w) == Word{1, 2, -1, -2});
}

TEST_CASE("reduce: idempotent, confluent, multiplicative (fuzz)") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 300; ++trial) {
    int len = trial < 290 ? (int)(rng() % 200) : 10000;
    Word w;
    for (int i = 0; i < len; ++i) w.push_back((int)(rng() % 3 + 1) * (rng() % 2 ? 1 : -1));
    Word r = reduce(w);
    CHECK(reduce(r) == r);
    for (size_t i = 0; i + 1 < r.size(); ++i) CHECK(r[i] != -r[i + 1]);
    if (len < 300) {
      CHECK(r == oracle::naive_reduce(w));
      CHECK(r == oracle::random_order_reduce(w, rng));
    }
    Word u(w.begin(), w.begin() + w.size() / 3), v(w.begin() + w.size() / 3, w.end());
    CHECK(reduce(cat({u, v})) == reduce(cat({reduce(u), reduce(v)})));
  }
}

TEST_CASE("is_trivial") {
  CHECK(is_trivial({}));
  CHECK_FALSE(is_trivial(surface_group(2).eta));
  LoopSpec s;
  s.p = 1;
  s.n = 10;
  s.B = {{3}};
  s.O = {{}};
  s.sigma = {0};
  auto G = surface_group(2);
  Word g0 = build_gamma0(s, identity_automorphism(4), G);
  CHECK_FALSE(is_trivial(g0));
  CHECK(g0 == rep(G.eta, 10));
}

TEST_CASE("surface group eta") {
  for (int g = 1; g <= 4; ++g) {
    auto G = surface_group(g);
    CHECK((int)G.eta.size() == 4 * g);
    CHECK(cyclic_reduce(G.eta) == G.eta);
  }
}

TEST_CASE("automorphisms: twist examples") {
  auto T = twist_a(1, 1);
  CHECK(T.check());
  CHECK(apply_automorphism(T, {2}) == Word{2, 1});
  auto G = surface_group(1);
  CHECK(apply_automorphism(T, G.eta) == G.eta);
  auto id = identity_automorphism(2);
  Word w{1, 2, -2, -1, 2};
  CHECK(apply_automorphism(id, w) == Word{2});
}

TEST_CASE("automorphisms: invalid one is rejected") {
  Automorphism bad = identity_automorphism(2);
  bad.images[1] = {1};  // not invertible
  CHECK_FALSE(bad.check());
  CHECK_THROWS_AS(apply_automorphism(bad, {1}), std::invalid_argument);
}

TEST_CASE("registry letters fix eta exactly and are homomorphic") {
  std::mt19937_64 rng(11);
  for (int g = 1; g <= 3; ++g) {
    auto G = surface_group(g);
    for (auto& m : registry_monodromies(g, 2)) {
      auto phi = parse_monodromy(g, m);
      REQUIRE(phi.check());
      CHECK(apply_unchecked(phi, G.eta) == G.eta);
      CHECK(are_conjugate(apply_unchecked(phi, G.eta), G.eta));
      Word u = random_word(rng, G.rank(), 12), v = random_word(rng, G.rank(), 9);
      CHECK(apply_unchecked(phi, cat({u, v})) == concat(apply_unchecked(phi, u), apply_unchecked(phi, v)));
      auto inv = invert(phi);
      CHECK(apply_unchecked(inv, apply_unchecked(phi, u)) == u);
    }
  }
}

TEST_CASE("handle swap mixes handles") {
  auto s = handle_swap(2, 1);
  CHECK(apply_unchecked(s, {3}) == Word{1});
  CHECK(apply_unchecked(s, {1}).size() == 9);
}

TEST_CASE("r_phi counts twist letters") {
  CHECK(parse_monodromy(2, "Ta1 Tb2^-1").r_phi == 6);
  CHECK(parse_monodromy(2, "").r_phi == 4);
  CHECK(parse_monodromy(1, "Ta1^3").r_phi == 7);
}

TEST_CASE("eta_power_decompose examples") {
  auto G1 = surface_group(1);
  auto b = eta_power_decompose(rep(G1.eta, 3), G1);
  REQUIRE(b.size() == 1);
  CHECK(b[0].exponent == 3);

  auto G = surface_group(2);
  CHECK(eta_power_decompose({3}, G).empty());

  Word w = cat({rep(G.eta, 2), {3}, inverse(G.eta)});
  REQUIRE(reduce(w) == w);
  auto bl = eta_power_decompose(w, G);
  REQUIRE(bl.size() == 2);
  CHECK(bl[0].exponent == 2);
  CHECK(bl[1].exponent == -1);
  auto ob = oracle::scan_blocks(w, G.eta);
  REQUIRE(ob.size() == 2);
  CHECK(ob[0].exponent == 2);
  CHECK(ob[1].exponent == -1);
}

TEST_CASE("eta blocks: re-expansion reproduces the word, agrees with exhaustive scan") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 400; ++trial) {
    int g = 1 + (int)(rng() % 3);
    auto G = surface_group(g);
    Word w;
    int parts = 1 + (int)(rng() % 5);
    for (int i = 0; i < parts; ++i) {
      Word e = G.eta;
      int rot = (int)(rng() % e.size());
      std::rotate(e.begin(), e.begin() + rot, e.end());
      if (rng() % 2) e = inverse(e);
      w = cat({w, rep(e, (int)(rng() % 4)), random_word(rng, G.rank(), (int)(rng() % 6))});
    }
    w = reduce(w);
    auto bl = eta_power_decompose(w, G);
    auto ob = oracle::scan_blocks(w, G.eta);
    REQUIRE(bl.size() == ob.size());
    Word rebuilt;
    int at = 0;
    for (size_t i = 0; i < bl.size(); ++i) {
      CHECK(bl[i].exponent == ob[i].exponent);
      CHECK(bl[i].start == ob[i].start);
      CHECK(bl[i].exponent != 0);
      CHECK(bl[i].start >= at);
      rebuilt.insert(rebuilt.end(), w.begin() + at, w.begin() + bl[i].start);
      Word e = expand_block(bl[i], G);
      rebuilt.insert(rebuilt.end(), e.begin(), e.end());
      at = bl[i].end;
      // maximal: cannot be extended by a full period either side
      int L = G.eta_len();
      if (bl[i].end + L <= (int)w.size())
        CHECK_FALSE(std::equal(w.begin() + bl[i].end, w.begin() + bl[i].end + L, w.begin() + bl[i].end - L));
    }
    rebuilt.insert(rebuilt.end(), w.begin() + at, w.end());
    CHECK(rebuilt == w);
  }
}

TEST_CASE("count_long_exponent_sum examples") {
  auto G1 = surface_group(1);
  CHECK(count_long_exponent_sum(rep(G1.eta, 10), G1, 1, 5) == 10);
  auto G = surface_group(2);
  CHECK(count_long_exponent_sum({3}, G, 1, 5) == 0);
  Word w = cat({rep(G.eta, 6), {3}, rep(inverse(G.eta), 7), {4}, rep(G.eta, 6)});
  REQUIRE(reduce(w) == w);
  auto bl = eta_power_decompose(w, G);
  REQUIRE(bl.size() == 3);
  CHECK(bl[1].exponent == -7);
  CHECK(count_long_exponent_sum(w, G, 1, 5) == 12);
}

TEST_CASE("build_gamma0 examples") {
  auto G = surface_group(2);
  auto id = identity_automorphism(4);
  LoopSpec s;
  s.p = 1;
  s.n = 2;
  s.B = {{}};
  s.O = {{}};
  s.sigma = {0};
  CHECK(build_gamma0(s, id, G) == rep(G.eta, 2));

  s.n = 10;
  s.B = {{3}};
  CHECK(build_gamma0(s, id, G) == rep(G.eta, 10));

  LoopSpec t;
  t.p = 2;
  t.n = 3;
  t.B = {{3}, {4}};
  t.O = {{}, {}};
  t.sigma = {1, 0};
  // frozen from the naive reduction oracle: the trailing a4^-1 of the second
  // eta^3 cancels against a4 = B_2
  Word expect = cat({rep(G.eta, 3), {3, -4}, rep(G.eta, 2), {1, 2, -1, -2, 3, 4, -3}, {-3}});
  Word raw = cat({rep(G.eta, 3), {3}, {-4}, rep(G.eta, 3), {4}, {-3}});
  CHECK(oracle::naive_reduce(raw) == expect);
  CHECK(build_gamma0(t, id, G) == expect);
  CHECK(expect.size() == 50);
}

TEST_CASE("certify_noncontractible") {
  auto G = surface_group(2);
  auto id = identity_automorphism(4);
  LoopSpec s;
  s.p = 1;
  s.n = 10;
  s.B = {{3}};
  s.O = {{}};
  s.sigma = {0};
  auto c = certify_noncontractible(s, id, G, 1, 1, 5);
  CHECK(c.verdict);
  CHECK(c.oracle_agrees);
  CHECK(c.C == 10);
  CHECK(c.bound == 4);

  s.n = 6;
  auto v = certify_noncontractible(s, id, G, 1, 1, 5);
  CHECK_FALSE(v.verdict);
  CHECK(v.bound == 0);

  CHECK_THROWS_AS(certify_noncontractible(s, id, G, 1, 1, 4), std::invalid_argument);
  CHECK_THROWS_AS(certify_noncontractible(s, id, G, 3, 4, 5), std::invalid_argument);
}

TEST_CASE("certificate soundness on n = 6d+1 specs") {
  std::mt19937_64 rng(2024);
  int verdicts = 0;
  for (int trial = 0; trial < 300; ++trial) {
    int g = 1 + (int)(rng() % 3);
    auto G = surface_group(g);
    auto mons = registry_monodromies(g, 2);
    auto phi = parse_monodromy(g, mons[rng() % mons.size()]);
    LoopSpec s;
    s.p = 1 + (int)(rng() % 4);
    for (int i = 0; i < s.p; ++i) {
      s.B.push_back(random_word(rng, G.rank(), (int)(rng() % 12)));
      s.O.push_back(random_word(rng, G.rank(), (int)(rng() % 4)));
      s.sigma.push_back(i);
    }
    std::shuffle(s.sigma.begin(), s.sigma.end(), rng);
    int d = std::max(estimate_dfrak(s, phi, G), phi.r_phi);
    s.n = 6 * d + 1;
    auto c = certify_noncontractible(s, phi, G, d, phi.r_phi, 5);
    if (c.verdict) {
      ++verdicts;
      CHECK_FALSE(is_trivial(build_gamma0(s, phi, G)));
    }
    CHECK(c.oracle_agrees);
  }
  CHECK(verdicts > 0);
}

TEST_CASE("estimate_dfrak") {
  auto G = surface_group(2);
  auto id = identity_automorphism(4);
  LoopSpec s;
  s.p = 1;
  s.n = 1;
  s.B = {{}};
  s.O = {{}};
  s.sigma = {0};
  CHECK(estimate_dfrak(s, id, G) == 1);
  s.B = {cat({rep(G.eta, 2), {3}, rep(G.eta, 3), {4}, rep(G.eta, 4)})};
  // a4 cancels the trailing a4^-1 of the middle block, which reduces to
  // eta^2 plus a tail; exponents 2,2,4 still give 3
  CHECK(reduce(s.B[0]).size() == s.B[0].size() - 2);
  CHECK(estimate_dfrak(s, id, G) == 3);
  s.B = {{3}};
  CHECK(estimate_dfrak(s, id, G) == 1);
}

// Small-scale check that long blocks survive a registry automorphism up to r_phi.
TEST_CASE("long blocks persist under registry automorphisms") {
  std::mt19937_64 rng(99);
  int checked = 0;
  for (int trial = 0; trial < 200; ++trial) {
    int g = 1 + (int)(rng() % 2);
    auto G = surface_group(g);
    auto mons = registry_monodromies(g, 1);
    auto phi = parse_monodromy(g, mons[rng() % mons.size()]);
    Word w = cat({random_word(rng, G.rank(), 5), rep(G.eta, 15 + (int)(rng() % 5)), random_word(rng, G.rank(), 5)});
    w = reduce(w);
    int longest = 0;
    for (auto& b : eta_power_decompose(w, G)) longest = std::max(longest, b.exponent);
    if (longest < 2 * phi.r_phi) continue;
    Word im = apply_unchecked(phi, w);
    bool matched = false;
    for (auto& b : eta_power_decompose(im, G)) matched |= std::abs(b.exponent - longest) <= phi.r_phi;
    CHECK(matched);
    ++checked;
  }
  CHECK(checked > 50);
}

TEST_CASE("random_loop stays inside its ranges") {
  std::mt19937_64 rng(5);
  std::set<int> genera;
  for (int t = 0; t < 200; ++t) {
    auto r = random_loop(rng, 3, 4, 2, 20);
    genera.insert(r.genus);
    CHECK(r.genus >= 1);
    CHECK(r.genus <= 3);
    CHECK(r.spec.p >= 1);
    CHECK(r.spec.p <= 4);
    auto G = surface_group(r.genus);
    CHECK_NOTHROW(r.spec.validate(G));
    CHECK(r.dfrak >= r.phi.r_phi);
    CHECK(r.dfrak >= estimate_dfrak(r.spec, r.phi, G));
    int k = r.spec.n - 6 * r.dfrak;
    CHECK(k >= 1);
    CHECK(k <= 20);
  }
  CHECK(genera.size() == 3);
  std::mt19937_64 a(9), b(9);
  CHECK(random_loop(a, 2, 2, 1, 5).spec.B == random_loop(b, 2, 2, 1, 5).spec.B);
  CHECK_THROWS_AS(random_loop(a, 0, 1, 1, 1), std::invalid_argument);
}
