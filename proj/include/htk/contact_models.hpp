#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace htk {

// Sum of closed-form terms in one real variable.
struct Term {
  enum Kind { Poly, Cos, Sin } kind = Poly;
  std::vector<double> coeffs;  // Poly: c0 + c1 t + ...
  double amp = 1, freq = 1, phase = 0;  // amp * exp(growth (t - center)) * cos(freq t + phase)
  double growth = 0, center = 0;
};

struct Fn1 {
  std::vector<Term> terms;
  double operator()(double t, int deriv = 0) const;
  bool is_polynomial() const;
  std::vector<double> poly_coeffs() const;  // only when is_polynomial()

  static Fn1 poly(std::vector<double> c);
  static Fn1 cos(double amp = 1, double freq = 1, double phase = 0);
  static Fn1 sin(double amp = 1, double freq = 1, double phase = 0);
  Fn1 operator+(const Fn1& o) const;
};

// alpha = f(t) dx - g(t) dy on T^2 x [a,b]
struct TorusProfile {
  std::string name;
  Fn1 f, g;
  double a = 0, b = 1;
  double delta(double t) const;  // f g' - f' g
};

struct MarginReport {
  double min_delta = 0;
  double at = 0;
  bool exact = false;  // polynomial case: endpoints + critical points
  bool nonvanishing = true;
  bool contact() const { return min_delta > 0 && nonvanishing; }
};

MarginReport contact_margin(const TorusProfile& p, int samples = 4001);

struct Vec3 {
  double x = 0, y = 0, z = 0;
};

// throws std::domain_error on a non-contact point
Vec3 reeb_field(const TorusProfile& p, double t);
// alpha(R) - 1 and |i_R d alpha| at t
std::array<double, 2> reeb_residuals(const TorusProfile& p, double t, const Vec3& R);

// columns [m], [l] as integer vectors in (x,y) coordinates
struct SlopeBasis {
  std::array<int, 2> m{1, 0};
  std::array<int, 2> l{0, 1};
  int det() const { return m[0] * l[1] - m[1] * l[0]; }
  bool unimodular() const { return det() == 1 || det() == -1; }
  // coefficients (q, p) with v = q m + p l
  std::array<double, 2> coords(double vx, double vy) const;
  double slope(double vx, double vy) const;  // p / q, +-inf when q = 0
};

double characteristic_slope(const TorusProfile& p, double t, const SlopeBasis& basis = {});

struct InterpolationResult {
  TorusProfile profile;  // on [a, a+c]
  double c = 0;
  double min_contact = 0;
  double min_transverse = 0;
  double endpoint_error = 0;
};

// f = rho cos(theta), g = rho sin(theta) with theta, log rho linear in t.
// Throws std::runtime_error (with the best margin) when no c in (0, pi) works.
InterpolationResult interpolate_profiles(double u, double v, double a, double resolution = 1e-3,
                                         int samples = 801);
// the four conditions evaluated on a sample grid
struct InterpolationCheck {
  double endpoint_error = 0, min_norm = 0, min_contact = 0, min_transverse = 0;
  bool ok(double tol = 1e-12) const {
    return endpoint_error < tol && min_norm > 0 && min_contact > 0 && min_transverse > 0;
  }
};
InterpolationCheck check_interpolation(const TorusProfile& p, double u, double v, int samples = 2001);

// ---- generating functions on R/Z x [-1,1] x [a,b] --------------------------

struct GenFn {
  std::string name;
  std::function<double(double, double, double)> H, Hx, Hy, Ht;
};

GenFn genfn_const(double h);
GenFn genfn_cos_x(double h0, double amp);         // h0 + amp cos(2 pi x)
GenFn genfn_linear_t(double h0, double slope, double t0);  // h0 + slope (t - t0)

Vec3 reeb_from_generating_function(const GenFn& H, double x, double y, double t);
// alpha(R) - 1 and the three components of i_R d alpha, alpha = (cos t dx - sin t dy)/H
std::array<double, 4> genfn_residuals(const GenFn& H, double x, double y, double t);

struct LengthAdjustment {
  GenFn H;
  double a = 0, b = 0, L = 0, h_b = 0, L0 = 0, flat_until = 0;
};

// extend the t-independent germ H(x,y,a) to [a,b] with H = -cos b / L on t = b
LengthAdjustment length_adjust(const GenFn& germ, double a, double b, double L);
// -integral of alpha_R over {y = yv, t = b}, x in [0,1]
double measured_boundary_length(const GenFn& H, double b, double yv, int n = 2048);
double length_formula(double b, double h) ;

// ---- slope perturbation --------------------------------------------------

struct BoundaryTorusForm {
  std::function<double(double, double)> u;  // u(x, tau), alpha|T = u dx + d tau
  double period = 1;                        // tau period of the [l] circle
  double half_width = 0.25;                 // the collar is tau in [-a, a]
  std::function<double(double)> chi;        // default bump when empty
};

double default_bump(double t, double a);

struct PerturbationResult {
  double slope = 0;
  double slope_error_bound = 0;  // 1/(periods * period)
  double dalpha_residual = 0;
  double reeb_proportionality_residual = 0;
};

// eps < 0; negative_sign=false selects the mirrored construction (eps > 0)
PerturbationResult slope_perturbation(const BoundaryTorusForm& T, double eps, int periods = 4000,
                                      int steps_per_period = 64, bool negative_sign = true);
// slope of the kernel of u dx + w(tau) d tau, w = 1 - chi/eps (w = 1 when eps is 0)
double rotation_slope(const BoundaryTorusForm& T, const std::function<double(double)>& w, int periods,
                      int steps_per_period);

// ---- Dehn filling --------------------------------------------------------

// alpha = f(r) dz + g(r) d theta on D^2 x R/Z
struct SolidTorusProfile {
  Fn1 f, g;
  double u = 0, v = 0;
  double delta(double r) const;  // f g' - g f'
  Vec3 reeb(double r) const;     // (R_r, R_theta, R_z)
};

struct FillRequest {
  double u = 0, v = 1;
  long p = -1, q = 10;
  double threshold = 0.5;
  std::array<int, 2> reeb_direction{0, -1};  // class of R0 in (m, l)
  std::optional<bool> declared_meridian_meets_S_positively;
  std::optional<bool> declared_meridian_meets_reeb_negatively;
};

struct FillCheck {
  bool g0_zero = false, boundary_exact = false, core_smooth = false;
  double min_delta = 0, min_Rz = 0, core_limit = 0;
  long int_S = 0, int_R = 0;
  bool ok() const { return g0_zero && boundary_exact && core_smooth && min_delta > 0 && min_Rz > 0; }
};

// throws std::invalid_argument (threshold, orientation flags) or std::runtime_error (no monotone g)
SolidTorusProfile dehn_fill(const FillRequest& req, FillCheck* check = nullptr);
FillCheck check_solid_profile(const SolidTorusProfile& s, int samples = 2001);

// ---- the R^3 model pair of the adapted-pair checklist ----------------------

struct ModelChecklist {
  bool positive_contact = false;
  bool transverse_to_R = false;    // Reeb transverse to R+ (out) and R- (in)
  bool tangent_on_sutures = false; // Reeb tangent to the suture annulus, orbits are intervals
  bool boundary_positive = false;  // d R+ positively transverse to xi
};
// alpha = dz + sign r^2 d theta on D^2 x [-1,1], Reeb field d/dz
ModelChecklist model_r3_checklist(int sign, int samples = 64);

}  // namespace htk
