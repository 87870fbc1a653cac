#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <string>
#include <utility>
#include <vector>

#include "htk/freegroup.hpp"

namespace htk::arcs {

using Rational = boost::multiprecision::cpp_rational;

// Darts are signed edge ids +-1..+-E; -d is the same edge the other way.
// Paths are Words of darts, so freegroup::reduce cancels backtracks.
struct FatGraph {
  int vertices = 1;
  int edges = 0;
  std::vector<int> tail_;   // by dart index
  std::vector<int> next_;   // ccw successor at the tail vertex, as a dart
  std::vector<int> boundary;  // boundary cycle h_0 .. h_{L-1}, h_{k+1} = next(-h_k)
  std::vector<int> corner_of_dart;  // k with boundary[k] = dart
  std::vector<std::vector<int>> rotation;  // darts around each vertex, ccw
  std::vector<int> rot_index;              // position of a dart in its rotation

  static int idx(int dart) { return 2 * (std::abs(dart) - 1) + (dart < 0 ? 1 : 0); }
  int tail(int dart) const { return tail_[idx(dart)]; }
  int head(int dart) const { return tail_[idx(-dart)]; }
  int next(int dart) const { return next_[idx(dart)]; }
  int length() const { return (int)boundary.size(); }
  int genus() const { return (1 - vertices + edges) / 2; }
  int corner_vertex(int k) const { return tail(boundary[k]); }
};

// rotation[v] lists the darts leaving v in ccw order. Throws std::invalid_argument
// unless there is exactly one boundary cycle.
FatGraph make_fat_graph(int vertices, const std::vector<std::vector<int>>& rotation);
// one vertex, 2g loops, boundary word equal to eta
FatGraph standard_surface(int genus);

// Boundary positions are reals in [0, L): corner k = floor(x), offset in (0, 1).
struct Arc {
  double start = 0.5;
  double end = 1.5;
  Word path;
};

Arc reversed(const Arc& a);
void check_arc(const FatGraph& G, const Arc& a);  // throws std::invalid_argument
bool same_class(const Arc& a, const Arc& b);      // equal endpoints and homotopic rel endpoints
// forward boundary path from position p to position q as darts
Word boundary_path(const FatGraph& G, double p, double q);

// minimal crossing number rel boundary; throws if the arcs share an endpoint
int geometric_intersection(const FatGraph& G, const Arc& a, const Arc& b);
// classes of crossings between lifts, keyed by the relative translation
std::vector<std::pair<Word, int>> crossing_classes(const FatGraph& G, const Arc& a, const Arc& b);
int self_intersection(const FatGraph& G, const Arc& a);
bool embedded(const FatGraph& G, const Arc& a);
bool non_separating(const FatGraph& G, const Arc& a);
// disjoint arcs with interleaved endpoints cobounding a rectangle
bool parallel(const FatGraph& G, const Arc& a, const Arc& b);

// p, q, r, s met in this order going forward around a circle of length L
bool cyclic_order(double p, double q, double r, double s, double L);
bool endpoint_order_ok(const Arc& a, const Arc& b, double L);

// slide both endpoints forward, half way to the next point of `avoid` or the corner end
Arc push_forward(const Arc& a, const std::vector<double>& avoid);
// per-endpoint direction: +1 forward, -1 backward, 0 stay
Arc push_off(const Arc& a, int start_dir, int end_dir, const std::vector<double>& avoid);
// interior intersection of arcs sharing endpoints: b is pushed off a at each shared
// endpoint toward whichever side gives the fewest crossings
int relative_intersection(const FatGraph& G, const Arc& a, const Arc& b);

// standard surfaces only; phi must fix eta letter for letter
Arc apply_mapping_class(const FatGraph& G, const Automorphism& phi, const Arc& a);

struct GoodSequence {
  Arc alpha;
  std::string monodromy;
  Automorphism phi;
  int sign = +1;  // +1 positive, -1 negative
  std::vector<Arc> arcs;
  int chain_length = 0;  // number of links
  std::string method;    // "surgery", or "factored" when built letter by letter
};

struct BuildOptions {
  int max_chain = 64;
  int node_budget = 20000;
};

GoodSequence build_good_sequence(const FatGraph& G, const Arc& alpha, const Automorphism& phi,
                                 const std::string& monodromy, int sign, BuildOptions opt = {});

struct SequenceReport {
  bool first_is_image = false;   // alpha_0 = phi(alpha)
  bool last_is_alpha = false;    // alpha_n ~ alpha rel endpoints
  bool consecutive_ok = false;   // disjoint, not parallel, ordered
  bool arcs_ok = false;          // every arc embedded and non-separating
  int first_bad = -1;            // first violating index
  std::string detail;
  bool pass() const { return first_is_image && last_is_alpha && consecutive_ok && arcs_ok; }
};

SequenceReport validate_good_sequence(const FatGraph& G, const GoodSequence& seq);

struct BranchLine {
  int annulus = 0;
  int sheet = 0;
  int level = 0;        // 0 bottom (alpha_i on sheet i), 1 top (on sheet i+1)
  int orientation = 1;  // induced boundary orientation relative to alpha_i
  int cusp = 1;         // side the annulus merges toward
};

struct BranchedSurfaceSpec {
  int n = 0;  // sheets
  int sign = +1;
  double boundary_length = 4;
  struct Annulus {
    int index = 0;
    double start = 0, end = 0;  // endpoints of alpha_i on the boundary
  };
  std::vector<Annulus> annuli;
  std::vector<BranchLine> lines;
  std::vector<int> sheet_orientation;
};

BranchedSurfaceSpec branched_surface_from_sequence(const FatGraph& G, const GoodSequence& seq);
BranchedSurfaceSpec fiber_only_spec(int sheets, double boundary_length);
bool orientation_consistent(const BranchedSurfaceSpec& spec, std::string* why = nullptr);

struct WeightSystem {
  bool feasible = false;
  bool fully_carried = false;
  Rational slope = 0;
  std::vector<std::vector<Rational>> pieces;  // per sheet, boundary pieces in order from the reference point
  std::vector<Rational> sheet;                // reference piece of each sheet
  std::vector<Rational> annulus;
  Rational residual = 0;  // sum of |switch equation| over all switches
  std::string reason;
};

WeightSystem lamination_weights(const BranchedSurfaceSpec& spec, const Rational& eps);

struct SlopeInterval {
  Rational lo = 0, hi = 0;
  bool lo_closed = true, hi_closed = true;
  bool contains(const Rational& e) const;
  std::string to_string() const;
};

SlopeInterval slope_interval(const BranchedSurfaceSpec& spec);

// exact rank of a rational matrix; used to certify the dimension of the switch solution space
int rational_rank(std::vector<std::vector<Rational>> A);

}  // namespace htk::arcs
