#pragma once

// Combinatorial sutured manifolds. Pieces are opaque: only the boundary
// surfaces, their sutures and their R+/R- regions are recorded. Topological
// properties that cannot be computed here (irreducibility, tautness,
// pi_1-injectivity) are declared and echoed.

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace htk::sutured {

struct Region {
  std::string id;
  int sign = 1;  // +1 for R+, -1 for R-
  int genus = 0;
  int boundaries = 0;
  bool operator==(const Region&) const = default;
};

// annular suture; the core is recorded as the oriented boundary of R+ when core_sign = +1
struct Suture {
  std::string id;
  int core_sign = 1;
  std::string plus_region, minus_region;
  bool operator==(const Suture&) const = default;
};

struct BoundaryComponent {
  std::string id;
  int genus = 0;
  bool toric = false;  // the whole component is a toric suture
  std::vector<Suture> sutures;
  std::vector<Region> regions;
  bool operator==(const BoundaryComponent&) const = default;
};

struct Piece {
  std::string id;
  std::vector<BoundaryComponent> boundary;
  bool irreducible_declared = false;
  bool taut_declared = false;
  bool operator==(const Piece&) const = default;
};

struct SuturedManifold {
  std::vector<Piece> pieces;
  bool operator==(const SuturedManifold&) const = default;
};

// ---- decomposing surfaces -------------------------------------------------

// one arc of a boundary curve inside an annular suture
struct SutureArc {
  std::string suture;
  int sign = 1;           // +1 runs from R- to R+, -1 from R+ to R-
  double position = 0;    // where it crosses the core, in [0, 1)
  bool separating = false;  // enters and leaves on the same side
  bool operator==(const SutureArc&) const = default;
};

struct BoundaryCurve {
  std::string component;  // boundary component of the piece
  bool transverse = true;
  std::vector<SutureArc> arcs;  // in order along the curve
  // only when arcs is empty: the region or suture containing the curve
  // (left empty on a toric component)
  std::string lies_in;
  int suture_class = 0;     // circle inside a suture, as a multiple of the core
  bool bounds_disk = false; // circle inside R: does it bound a disk there
  bool operator==(const BoundaryCurve&) const = default;
};

struct SurfaceComponent {
  int genus = 0;
  std::vector<BoundaryCurve> curves;
  bool pi1_injective_declared = true;
  bool operator==(const SurfaceComponent&) const = default;
};

// cut `piece` along `surface`; `result` declares the pieces that replace it
struct DecompositionStep {
  std::string piece;
  std::vector<SurfaceComponent> surface;
  std::vector<Piece> result;
  bool operator==(const DecompositionStep&) const = default;
};

// ordered by the precedence used to pick the cited failure
enum class Citation {
  none,
  record,
  orientation,
  annular,
  transverse,       // bullet 1
  separating_arc,   // bullet 2
  circle_class,     // bullet 3
  well_positioned,
  disk_component,   // bullet 4
  disk_boundary,    // bullet 5
  pi1,
  ledger,
  terminal,
};

std::string citation_name(Citation c);
int bullet_number(Citation c);  // 1..5 for the admissibility bullets, 0 otherwise

struct Failure {
  Citation citation = Citation::none;
  std::string detail;
};

class DecompositionError : public std::invalid_argument {
 public:
  DecompositionError(Citation c, const std::string& what) : std::invalid_argument(what), citation(c) {}
  Citation citation;
};

// orientation compatibility, region/suture bookkeeping and Euler characteristics
std::vector<Failure> manifold_problems(const SuturedManifold& M);
bool is_annular(const SuturedManifold& M);
bool is_product_ball(const Piece& p);

const Piece* find_piece(const SuturedManifold& M, const std::string& id);

// every boundary curve meets the sutures in a non-empty family of arcs and none lies in a suture
bool check_well_positioned(const DecompositionStep& step, const SuturedManifold& M);

struct DecompositionLedger {
  int chi_surface = 0;
  int chi_plus_before = 0, chi_minus_before = 0, boundary_chi_before = 0;
  int chi_plus = 0, chi_minus = 0, boundary_chi = 0;  // computed after the cut
  int annular_sutures = 0, toric_sutures = 0;         // computed after the cut
  int declared_chi_plus = 0, declared_chi_minus = 0, declared_boundary_chi = 0;
  int declared_annular = 0, declared_toric = 0;
  bool balanced() const;
};

// the cut piece must exist and the pattern must be admissible
DecompositionLedger decomposition_ledger(const SuturedManifold& M, const DecompositionStep& step);

// every failure of the step against M, in precedence order
std::vector<Failure> step_problems(const SuturedManifold& M, const DecompositionStep& step,
                                   bool require_well_positioned = false);

// throws DecompositionError citing the first failure
SuturedManifold decompose(const SuturedManifold& M, const DecompositionStep& step);

// ---- hierarchies ------------------------------------------------------------

// a closed Reeb orbit class: intersection counts with each decomposing surface
struct OrbitRecord {
  std::string id;
  std::vector<int> crossings;
  std::string carried_by;  // piece carrying the orbit when it meets no surface
  bool operator==(const OrbitRecord&) const = default;
};

struct Hierarchy {
  std::string name;
  SuturedManifold start;
  std::vector<DecompositionStep> steps;
  int annular_from = 0;  // steps from here on must be annular and well positioned
  std::vector<OrbitRecord> orbits;
  bool operator==(const Hierarchy&) const = default;
};

struct StepReport {
  int index = 0;
  bool annular = false;
  bool well_positioned = false;
  bool well_positioned_required = false;
  std::vector<Failure> failures;
  std::optional<DecompositionLedger> ledger;
  bool ok() const { return failures.empty(); }
};

struct OrbitCheck {
  std::string id;
  bool ok = false;
  std::string detail;
};

struct HierarchyReport {
  std::vector<StepReport> steps;
  bool terminal_ok = false;
  std::string terminal_detail;
  std::vector<OrbitCheck> orbits;
  bool taut_declared = false;
  bool irreducible_declared = false;
  int failed_step = -1;  // == steps.size() for a terminal failure
  Citation citation = Citation::none;
  std::string detail;
  bool pass() const { return failed_step < 0; }
};

HierarchyReport hierarchy_validate(const Hierarchy& H);

// ---- convex presentation ---------------------------------------------------

struct DividingCurve {
  std::string id;
  int sign = 1;  // +1: oriented as the boundary of the closure of R+
  std::string plus_region, minus_region;
  bool operator==(const DividingCurve&) const = default;
};

struct ConvexComponent {
  std::string id;
  int genus = 0;
  std::vector<DividingCurve> curves;
  std::vector<Region> regions;
  bool operator==(const ConvexComponent&) const = default;
};

struct ConvexPiece {
  std::string id;
  std::vector<ConvexComponent> boundary;
  bool irreducible_declared = false;
  bool taut_declared = false;
  bool operator==(const ConvexPiece&) const = default;
};

struct ConvexStructure {
  std::vector<ConvexPiece> pieces;
  bool operator==(const ConvexStructure&) const = default;
};

// throws std::invalid_argument on non-annular input
ConvexStructure to_convex(const SuturedManifold& M);
SuturedManifold from_convex(const ConvexStructure& C);

// reverse the ambient orientation: R+ and R- swap
SuturedManifold reversed(const SuturedManifold& M);
ConvexStructure reversed(const ConvexStructure& C);

// ---- adapted pairs -----------------------------------------------------------

struct AdaptedPairChecklist {
  bool transverse_to_regions = false;  // positively to R+, negatively to R-
  bool tangent_on_sutures = false;     // orbits foliate the annuli by intervals
  bool boundary_positive = false;      // each component of d R+ positively transverse to xi
  std::vector<std::string> notes;
  bool adapted() const { return transverse_to_regions && tangent_on_sutures && boundary_positive; }
};

// the ball model D^2 x [-1,1] with alpha = dz + sign r^2 d theta and Reeb field d/dz
AdaptedPairChecklist ball_model_checklist(int sign);

// ---- gluing ledger -------------------------------------------------------------

// one boundary component of S'+ and its partner on S'-: arcs a_i, b_i alternate
struct PolygonBoundary {
  std::string id;
  std::vector<double> a_plus, b_plus, a_minus, b_minus;
};

// boundary pair that becomes a toric suture after gluing
struct ToricPair {
  std::string id;
  double plus_length = 0, minus_length = 0;
};

struct GluingInput {
  double epsilon = 0.1;
  std::vector<PolygonBoundary> polygons;
  std::vector<ToricPair> toric;
  std::optional<double> target;  // common toric length; defaults to the largest
  double a = 2.0;                // t-level of the suture germ, in (pi/2, pi)
  double tol = 1e-12;
};

struct ArcAdjustment {
  std::string arc;
  double from = 0, to = 0;
};

struct Thickening {
  std::string pair;
  double from = 0, to = 0;
  double a = 0, b = 0, h_a = 0, h_b = 0, L0 = 0;
  double measured = 0;  // integrated boundary length of the extension
};

struct GluingLedger {
  bool polygons_matched = true;
  bool stokes_ok = true;
  double common_length = 0;
  std::vector<ArcAdjustment> adjustments;
  std::vector<Thickening> thickenings;
  std::vector<std::string> notes;
  bool noop() const { return adjustments.empty() && thickenings.empty(); }
  bool ok() const { return stokes_ok; }
};

// throws std::domain_error when a length is non-positive or a required thickening is negative
GluingLedger gluing_ledger(const GluingInput& in);

// ---- fixtures ---------------------------------------------------------------------

Piece product_ball(const std::string& id);
Hierarchy fixture_product_ball();
Hierarchy fixture_thickened_torus();
Hierarchy fixture_genus2_handlebody();
std::vector<Hierarchy> hierarchy_fixtures();

}  // namespace htk::sutured
