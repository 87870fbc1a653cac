#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace htk {

// letters are signed generator indices 1..rank, negative = inverse
using Word = std::vector<int>;

Word reduce(const Word& w);
bool is_trivial(const Word& w);
Word inverse(const Word& w);
Word concat(const Word& u, const Word& v);
Word power(const Word& w, int k);
// cyclic reduction; `conj` receives the stripped prefix c with w = c x c^-1
Word cyclic_reduce(const Word& w, Word* conj = nullptr);
bool are_conjugate(const Word& u, const Word& v);
std::string to_string(const Word& w);

struct SurfaceGroup {
  int genus = 1;
  Word eta;
  int rank() const { return 2 * genus; }
  int eta_len() const { return 4 * genus; }
};

SurfaceGroup surface_group(int genus);

struct Automorphism {
  std::string name;
  int rank = 0;
  std::vector<Word> images;          // images[i] = phi(a_{i+1})
  std::vector<Word> inverse_images;  // same for phi^-1
  int r_phi = 4;

  bool check() const;  // phi o phi^-1 and phi^-1 o phi are the identity on generators
  bool fixes(const Word& w) const;
};

Automorphism identity_automorphism(int rank);
Automorphism compose(const Automorphism& first, const Automorphism& second);  // second after first
Automorphism invert(const Automorphism& phi);

// throws std::invalid_argument when the inverse check fails
Word apply_automorphism(const Automorphism& phi, const Word& w);
// no check, used once an automorphism has been validated
Word apply_unchecked(const Automorphism& phi, const Word& w);

// Boundary-fixing generators: twist_a(h), twist_b(h) on handle h (1-based),
// swap(h) exchanging handles h and h+1.
Automorphism twist_a(int genus, int handle, int power = 1);
Automorphism twist_b(int genus, int handle, int power = 1);
Automorphism handle_swap(int genus, int handle, int power = 1);

// Names like "Ta1", "Tb2^-1", "S1". A monodromy string is a space separated
// list of such names applied left to right. r_phi = 4 + number of letters.
Automorphism parse_monodromy(int genus, const std::string& text);
std::vector<std::string> registry_letters(int genus);
// every product of at most max_len registry letters, reduced as strings
std::vector<std::string> registry_monodromies(int genus, int max_len);

struct EtaBlock {
  int exponent = 0;
  int start = 0;  // [start, end) in the host word
  int end = 0;
  int offset = 0;  // rotation of eta^sign the block begins with
};

std::vector<EtaBlock> eta_power_decompose(const Word& w, const SurfaceGroup& G);
Word expand_block(const EtaBlock& b, const SurfaceGroup& G);
long long count_long_exponent_sum(const Word& w, const SurfaceGroup& G, int dfrak, int N);

struct LoopSpec {
  int p = 1;
  int n = 1;
  std::vector<Word> B;
  std::vector<Word> O;
  std::vector<int> sigma;  // 0-based permutation
  int o_bound = 64;
  void validate(const SurfaceGroup& G) const;  // throws std::invalid_argument
};

Word build_gamma0(const LoopSpec& spec, const Automorphism& phi, const SurfaceGroup& G);

struct Certificate {
  long long C = 0;
  int dfrak = 1;
  int r_phi = 0;
  int N = 5;
  long long bound = 0;
  bool verdict = false;
  bool oracle_agrees = true;
  bool gamma0_trivial = false;
  int gamma0_length = 0;
};

Certificate certify_noncontractible(const LoopSpec& spec, const Automorphism& phi,
                                    const SurfaceGroup& G, int dfrak, int r_phi, int N);

int estimate_dfrak(const LoopSpec& spec, const Automorphism& phi, const SurfaceGroup& G);

// random reduced word of the given length over rank generators
Word random_word(std::mt19937_64& rng, int rank, int length);

// Random spec for soundness trials: genus in [1, max_genus], p in [1, max_p], a registry
// monodromy of at most monodromy_len letters, n = 6 dfrak + k with k in [1, n_spread].
struct RandomLoop {
  int genus = 1;
  std::string monodromy;
  Automorphism phi;
  LoopSpec spec;
  int dfrak = 1;
};
RandomLoop random_loop(std::mt19937_64& rng, int max_genus, int max_p, int monodromy_len, int n_spread);

}  // namespace htk
