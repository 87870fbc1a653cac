#pragma once

// JSON schemas (version "v1") for every module, plus the input documents read
// by the command-line tool. Parsers throw SchemaError on anything malformed.

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "htk/contact_models.hpp"
#include "htk/freegroup.hpp"
#include "htk/moser.hpp"
#include "htk/surface_arcs.hpp"
#include "htk/sutured.hpp"
#include "json.hpp"

namespace htk {

using json = nlohmann::ordered_json;

void to_json(json& j, const SurfaceGroup& g);
void from_json(const json& j, SurfaceGroup& g);
void to_json(json& j, const Automorphism& a);
void from_json(const json& j, Automorphism& a);
void to_json(json& j, const LoopSpec& s);
void from_json(const json& j, LoopSpec& s);
void to_json(json& j, const Certificate& c);
void from_json(const json& j, Certificate& c);

void to_json(json& j, const Term& t);
void from_json(const json& j, Term& t);
void to_json(json& j, const Fn1& f);
void from_json(const json& j, Fn1& f);
void to_json(json& j, const TorusProfile& p);
void from_json(const json& j, TorusProfile& p);
void to_json(json& j, const MarginReport& m);
void to_json(json& j, const FillRequest& r);
void from_json(const json& j, FillRequest& r);
void to_json(json& j, const FillCheck& c);

namespace arcs {
void to_json(json& j, const Arc& a);
void from_json(const json& j, Arc& a);
void to_json(json& j, const FatGraph& G);
void from_json(const json& j, FatGraph& G);
void to_json(json& j, const GoodSequence& s);
void from_json(const json& j, GoodSequence& s);
void to_json(json& j, const SequenceReport& r);
void to_json(json& j, const BranchLine& b);
void from_json(const json& j, BranchLine& b);
void to_json(json& j, const BranchedSurfaceSpec& s);
void from_json(const json& j, BranchedSurfaceSpec& s);
void to_json(json& j, const WeightSystem& w);
void from_json(const json& j, WeightSystem& w);
void to_json(json& j, const SlopeInterval& s);
std::string rational_text(const Rational& r);
Rational parse_rational(const std::string& s);  // "p/q", "p" or a decimal like "0.25"
}  // namespace arcs

namespace moser {
void to_json(json& j, const GriddedSurface& g);
void from_json(const json& j, GriddedSurface& g);
void to_json(json& j, const PullbackReport& r);
void to_json(json& j, const ConvergenceStudy& c);
}  // namespace moser

namespace sutured {
void to_json(json& j, const Region& r);
void from_json(const json& j, Region& r);
void to_json(json& j, const Suture& s);
void from_json(const json& j, Suture& s);
void to_json(json& j, const BoundaryComponent& b);
void from_json(const json& j, BoundaryComponent& b);
void to_json(json& j, const Piece& p);
void from_json(const json& j, Piece& p);
void to_json(json& j, const SuturedManifold& m);
void from_json(const json& j, SuturedManifold& m);
void to_json(json& j, const SutureArc& a);
void from_json(const json& j, SutureArc& a);
void to_json(json& j, const BoundaryCurve& c);
void from_json(const json& j, BoundaryCurve& c);
void to_json(json& j, const SurfaceComponent& s);
void from_json(const json& j, SurfaceComponent& s);
void to_json(json& j, const DecompositionStep& s);
void from_json(const json& j, DecompositionStep& s);
void to_json(json& j, const OrbitRecord& o);
void from_json(const json& j, OrbitRecord& o);
void to_json(json& j, const Hierarchy& h);
void from_json(const json& j, Hierarchy& h);
void to_json(json& j, const DecompositionLedger& l);
void to_json(json& j, const HierarchyReport& r);
void to_json(json& j, const PolygonBoundary& p);
void from_json(const json& j, PolygonBoundary& p);
void to_json(json& j, const ToricPair& t);
void from_json(const json& j, ToricPair& t);
void to_json(json& j, const GluingInput& g);
void from_json(const json& j, GluingInput& g);
void to_json(json& j, const GluingLedger& l);
void to_json(json& j, const AdaptedPairChecklist& c);
}  // namespace sutured

namespace io {

inline constexpr const char* kSchema = "v1";

class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// parse text, check {"schema": "v1", "kind": kind}; throws SchemaError
json parse_document(const std::string& text, const std::string& kind);
// wraps nlohmann's type errors into SchemaError
template <class T>
T read(const json& j, const std::string& what) {
  try {
    return j.get<T>();
  } catch (const SchemaError&) {
    throw;
  } catch (const std::exception& e) {
    throw SchemaError(what + ": " + e.what());
  }
}

// ---- closed forms named in documents -------------------------------------

TorusProfile named_profile(const std::string& name, double a, double b);  // "model", "flat"

struct GenFnSpec {
  std::string kind = "const";  // const | cos_x | linear_t
  double h = 1, h0 = 1, amp = 0, slope = 0, t0 = 0;
  GenFn make() const;
};

struct BoundaryFormSpec {
  std::string u = "constant";  // constant | cos_x: u0 + amp cos(2 pi x)
  double u0 = 0.1, amp = 0;
  double period = 1, half_width = 0.25;
  BoundaryTorusForm make() const;
};

struct PrimitiveSpec {
  std::string name = "standard";  // standard | bump | radial
  double amp = 0;
  moser::Primitive make() const;
};

void to_json(json& j, const GenFnSpec& s);
void from_json(const json& j, GenFnSpec& s);
void to_json(json& j, const BoundaryFormSpec& s);
void from_json(const json& j, BoundaryFormSpec& s);
void to_json(json& j, const PrimitiveSpec& s);
void from_json(const json& j, PrimitiveSpec& s);

// ---- command inputs -------------------------------------------------------------

struct LoopInput {
  int genus = 1;
  std::string monodromy;                   // registry letters, empty for the identity
  std::optional<Automorphism> automorphism;  // explicit images instead of a monodromy string
  LoopSpec spec;
  std::optional<int> dfrak, r_phi;
  int N = 5;
  int random_trials = 0;  // extra randomized soundness trials, seeded by --seed
  Automorphism phi() const;
};

struct ArcInput {
  int genus = 1;
  arcs::Arc alpha;
  std::string monodromy;
  int sign = 1;
  std::vector<std::string> slopes;  // rationals to test against the slope interval
};

struct ProfileInput {
  TorusProfile profile;
  std::string registry;  // when set, profile came from named_profile
  int samples = 1000;
};

struct SlopeInput {
  BoundaryFormSpec form;
  std::vector<double> eps;
  int periods = 4000, steps_per_period = 64;
  bool negative_sign = true;
};

struct LengthInput {
  GenFnSpec germ;
  double a = 2.0, b = 2.5, L = 1;
};

struct MoserInput {
  moser::GriddedSurface grid;
  PrimitiveSpec beta, beta_prime;
  int steps = 100;
  double tol = 1e-3;
  std::vector<std::array<double, 2>> convergence_points;  // trajectories for an RK4 order study
  std::vector<int> convergence_steps{25, 50, 100, 200};
};

void to_json(json& j, const LoopInput& in);
void from_json(const json& j, LoopInput& in);
void to_json(json& j, const ArcInput& in);
void from_json(const json& j, ArcInput& in);
void to_json(json& j, const ProfileInput& in);
void from_json(const json& j, ProfileInput& in);
void to_json(json& j, const SlopeInput& in);
void from_json(const json& j, SlopeInput& in);
void to_json(json& j, const LengthInput& in);
void from_json(const json& j, LengthInput& in);
void to_json(json& j, const MoserInput& in);
void from_json(const json& j, MoserInput& in);

// {"schema": "v1", "kind": kind, ...body}
json document(const std::string& kind, const json& body);

// parse an input document by its kind and serialize it again
json normalize(const json& doc);
std::vector<std::string> input_kinds();

}  // namespace io
}  // namespace htk
