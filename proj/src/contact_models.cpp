#include "htk/contact_models.hpp"

#include <Eigen/Dense>
#include <unsupported/Eigen/Polynomials>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace htk {

namespace {
constexpr double kPi = 3.14159265358979323846;
// margins below this are treated as degenerate in the c search
constexpr double kAdmissible = 1e-6;

double poly_eval(const std::vector<double>& c, double t, int k) {
  double s = 0;
  for (int i = (int)c.size() - 1; i >= k; --i) {
    double fall = 1;
    for (int j = 0; j < k; ++j) fall *= (i - j);
    s = s * t + c[i] * fall;
  }
  return s;
}

std::vector<double> poly_mul(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.empty() || b.empty()) return {};
  std::vector<double> r(a.size() + b.size() - 1, 0.0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  return r;
}

std::vector<double> poly_der(const std::vector<double>& a) {
  std::vector<double> r;
  for (size_t i = 1; i < a.size(); ++i) r.push_back(a[i] * i);
  return r;
}

std::vector<double> poly_sub(std::vector<double> a, const std::vector<double>& b) {
  if (a.size() < b.size()) a.resize(b.size(), 0.0);
  for (size_t i = 0; i < b.size(); ++i) a[i] -= b[i];
  return a;
}
}  // namespace

double Fn1::operator()(double t, int k) const {
  double s = 0;
  for (auto& term : terms) {
    switch (term.kind) {
      case Term::Poly:
        s += poly_eval(term.coeffs, t, k);
        break;
      case Term::Cos:
      case Term::Sin: {
        // k-th derivative of exp((growth + i freq) t + i phase)
        std::complex<double> lam(term.growth, term.freq);
        std::complex<double> z = std::pow(lam, k) * std::exp(term.growth * (t - term.center)) *
                                 std::exp(std::complex<double>(0, term.freq * t + term.phase));
        s += term.amp * (term.kind == Term::Cos ? z.real() : z.imag());
        break;
      }
    }
  }
  return s;
}

bool Fn1::is_polynomial() const {
  return std::all_of(terms.begin(), terms.end(), [](const Term& t) { return t.kind == Term::Poly; });
}

std::vector<double> Fn1::poly_coeffs() const {
  std::vector<double> c;
  for (auto& t : terms) {
    if (c.size() < t.coeffs.size()) c.resize(t.coeffs.size(), 0.0);
    for (size_t i = 0; i < t.coeffs.size(); ++i) c[i] += t.coeffs[i];
  }
  return c;
}

Fn1 Fn1::poly(std::vector<double> c) {
  Fn1 f;
  f.terms.push_back({Term::Poly, std::move(c)});
  return f;
}
Fn1 Fn1::cos(double amp, double freq, double phase) {
  Fn1 f;
  f.terms.push_back({Term::Cos, {}, amp, freq, phase});
  return f;
}
Fn1 Fn1::sin(double amp, double freq, double phase) {
  Fn1 f;
  f.terms.push_back({Term::Sin, {}, amp, freq, phase});
  return f;
}
Fn1 Fn1::operator+(const Fn1& o) const {
  Fn1 r = *this;
  r.terms.insert(r.terms.end(), o.terms.begin(), o.terms.end());
  return r;
}

double TorusProfile::delta(double t) const { return f(t) * g(t, 1) - f(t, 1) * g(t); }

MarginReport contact_margin(const TorusProfile& p, int samples) {
  MarginReport rep;
  rep.min_delta = std::numeric_limits<double>::infinity();
  auto consider = [&](double t) {
    double d = p.delta(t);
    if (d < rep.min_delta) {
      rep.min_delta = d;
      rep.at = t;
    }
    if (std::hypot(p.f(t), p.g(t)) == 0) rep.nonvanishing = false;
  };
  if (p.f.is_polynomial() && p.g.is_polynomial()) {
    auto F = p.f.poly_coeffs(), G = p.g.poly_coeffs();
    auto D = poly_sub(poly_mul(F, poly_der(G)), poly_mul(poly_der(F), G));
    while (!D.empty() && D.back() == 0) D.pop_back();
    consider(p.a);
    consider(p.b);
    auto Dp = poly_der(D);
    while (!Dp.empty() && Dp.back() == 0) Dp.pop_back();
    if (Dp.size() >= 2) {
      Eigen::VectorXd c(Dp.size());
      for (size_t i = 0; i < Dp.size(); ++i) c[i] = Dp[i];
      Eigen::PolynomialSolver<double, Eigen::Dynamic> solver(c);
      std::vector<double> roots;
      solver.realRoots(roots, 1e-9);
      for (double r : roots)
        if (r > p.a && r < p.b) consider(r);
    }
    rep.exact = true;
    // the norm can still vanish between samples of a polynomial; sample it too
    for (int i = 0; i < samples; ++i) {
      double t = p.a + (p.b - p.a) * i / (samples - 1);
      if (std::hypot(p.f(t), p.g(t)) == 0) rep.nonvanishing = false;
    }
    return rep;
  }
  for (int i = 0; i < samples; ++i) consider(p.a + (p.b - p.a) * i / (samples - 1));
  // sampled minimum lowered by half a step times the largest observed slope of delta
  double h = (p.b - p.a) / (samples - 1), lip = 0;
  for (int i = 0; i < samples; ++i) {
    double t = p.a + h * i;
    lip = std::max(lip, std::abs(p.f(t) * p.g(t, 2) - p.f(t, 2) * p.g(t)));
  }
  rep.min_delta -= 0.5 * h * lip * 1.1;
  return rep;
}

Vec3 reeb_field(const TorusProfile& p, double t) {
  double d = p.delta(t);
  if (!(d > 0)) {
    std::ostringstream os;
    os << "non-contact profile at t=" << t << " (delta=" << d << ")";
    throw std::domain_error(os.str());
  }
  return {p.g(t, 1) / d, p.f(t, 1) / d, 0.0};
}

std::array<double, 2> reeb_residuals(const TorusProfile& p, double t, const Vec3& R) {
  double f = p.f(t), g = p.g(t), fp = p.f(t, 1), gp = p.g(t, 1);
  double a1 = f * R.x - g * R.y - 1.0;
  // d alpha = f' dt^dx - g' dt^dy
  double ix = fp * R.z, iy = -gp * R.z, it = -fp * R.x + gp * R.y;
  return {std::abs(a1), std::max({std::abs(ix), std::abs(iy), std::abs(it)})};
}

std::array<double, 2> SlopeBasis::coords(double vx, double vy) const {
  double D = det();
  double q = (vx * l[1] - vy * l[0]) / D;
  double pp = (m[0] * vy - m[1] * vx) / D;
  return {q, pp};
}

double SlopeBasis::slope(double vx, double vy) const {
  auto [q, pp] = coords(vx, vy);
  if (q == 0) return pp >= 0 ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
  return pp / q;
}

double characteristic_slope(const TorusProfile& p, double t, const SlopeBasis& basis) {
  if (!basis.unimodular()) throw std::invalid_argument("slope basis is not unimodular");
  // kernel of f dx - g dy
  double vx = p.g(t), vy = p.f(t);
  if (vx == 0 && vy == 0) throw std::domain_error("singular profile");
  double s = basis.slope(vx, vy);
  return std::isinf(s) ? std::numeric_limits<double>::infinity() : s;
}

// ---- interpolation -------------------------------------------------------

InterpolationCheck check_interpolation(const TorusProfile& p, double u, double v, int samples) {
  InterpolationCheck ck;
  double a = p.a, b = p.b;
  ck.endpoint_error = std::abs(p.f(a) - u) + std::abs(p.g(a) - v) + std::abs(p.f(b) - std::cos(b)) +
                      std::abs(p.g(b) - std::sin(b));
  ck.min_norm = ck.min_contact = ck.min_transverse = std::numeric_limits<double>::infinity();
  for (int i = 0; i < samples; ++i) {
    double t = a + (b - a) * i / (samples - 1);
    double f = p.f(t), g = p.g(t), fp = p.f(t, 1), gp = p.g(t, 1);
    double d = f * gp - fp * g;
    ck.min_norm = std::min(ck.min_norm, std::hypot(f, g));
    ck.min_contact = std::min(ck.min_contact, d);
    // (cos a dx - sin a dy)(R), R = (g', f') / delta
    ck.min_transverse = std::min(ck.min_transverse, (std::cos(a) * gp - std::sin(a) * fp) / d);
  }
  return ck;
}

InterpolationResult interpolate_profiles(double u, double v, double a, double resolution, int samples) {
  double r0 = std::hypot(u, v);
  if (r0 == 0) throw std::invalid_argument("(u, v) must be nonzero");
  double th0 = std::atan2(v, u);
  while (th0 <= a - kPi) th0 += 2 * kPi;
  while (th0 > a + kPi) th0 -= 2 * kPi;
  double best = -std::numeric_limits<double>::infinity(), best_c = 0;
  for (int step = 1; step * resolution < kPi; ++step) {
    double c = step * resolution;
    // theta = th0 + w s, log rho = log r0 + k s, s = t - a
    double w = (a + c - th0) / c, k = -std::log(r0) / c;
    double mc = std::numeric_limits<double>::infinity(), mt = mc;
    for (int i = 0; i < samples; ++i) {
      double s = c * i / (samples - 1);
      double th = th0 + w * s, rho = r0 * std::exp(k * s);
      mc = std::min(mc, rho * rho * w);
      // (ln rho)' sin(theta - a) + theta' cos(theta - a), divided by rho theta' > 0
      mt = std::min(mt, w > 0 ? (k * std::sin(th - a) + w * std::cos(th - a)) / (rho * w) : -1.0);
    }
    double margin = std::min(mc, mt);
    if (margin > best) {
      best = margin;
      best_c = c;
    }
    if (margin <= kAdmissible) continue;
    InterpolationResult res;
    res.c = c;
    res.min_contact = mc;
    res.min_transverse = mt;
    auto& p = res.profile;
    p.name = "interpolation";
    p.a = a;
    p.b = a + c;
    Term tf{Term::Cos, {}, r0, w, th0 - w * a, k, a};
    Term tg = tf;
    tg.kind = Term::Sin;
    p.f.terms = {tf};
    p.g.terms = {tg};
    res.endpoint_error = check_interpolation(p, u, v, 2).endpoint_error;
    return res;
  }
  std::ostringstream os;
  os << "no admissible c in (0, pi); best margin " << best << " at c=" << best_c;
  throw std::runtime_error(os.str());
}

// ---- generating functions ------------------------------------------------

GenFn genfn_const(double h) {
  GenFn g;
  g.name = "const";
  g.H = [h](double, double, double) { return h; };
  g.Hx = g.Hy = g.Ht = [](double, double, double) { return 0.0; };
  return g;
}

GenFn genfn_cos_x(double h0, double amp) {
  GenFn g;
  g.name = "cos_x";
  g.H = [=](double x, double, double) { return h0 + amp * std::cos(2 * kPi * x); };
  g.Hx = [=](double x, double, double) { return -2 * kPi * amp * std::sin(2 * kPi * x); };
  g.Hy = g.Ht = [](double, double, double) { return 0.0; };
  return g;
}

GenFn genfn_linear_t(double h0, double slope, double t0) {
  GenFn g;
  g.name = "linear_t";
  g.H = [=](double, double, double t) { return h0 + slope * (t - t0); };
  g.Hx = g.Hy = [](double, double, double) { return 0.0; };
  g.Ht = [=](double, double, double) { return slope; };
  return g;
}

Vec3 reeb_from_generating_function(const GenFn& G, double x, double y, double t) {
  double H = G.H(x, y, t);
  if (!(H > 0)) throw std::domain_error("generating function must be positive");
  double Ht = G.Ht(x, y, t), Hx = G.Hx(x, y, t), Hy = G.Hy(x, y, t);
  double c = std::cos(t), s = std::sin(t);
  return {H * c - Ht * s, -H * s - Ht * c, Hx * s + Hy * c};
}

std::array<double, 4> genfn_residuals(const GenFn& G, double x, double y, double t) {
  Vec3 R = reeb_from_generating_function(G, x, y, t);
  double H = G.H(x, y, t), Ht = G.Ht(x, y, t), Hx = G.Hx(x, y, t), Hy = G.Hy(x, y, t);
  double c = std::cos(t), s = std::sin(t), H2 = H * H;
  // alpha = A dx + B dy, A = cos t / H, B = -sin t / H
  double A = c / H, B = -s / H;
  double Ay = -c * Hy / H2, At = (-s * H - c * Ht) / H2;
  double Bx = s * Hx / H2, Bt = (-c * H + s * Ht) / H2;
  // d alpha = P dx^dy + Q dt^dx + S dt^dy
  double P = Bx - Ay, Q = At, S = Bt;
  double ix = -P * R.y + Q * R.z;
  double iy = P * R.x + S * R.z;
  double it = -Q * R.x - S * R.y;
  return {A * R.x + B * R.y - 1.0, ix, iy, it};
}

double length_formula(double b, double h) { return -std::cos(b) / h; }

LengthAdjustment length_adjust(const GenFn& germ, double a, double b, double L) {
  if (!(kPi / 2 < a && a < b && b < kPi)) throw std::invalid_argument("need pi/2 < a < b < pi");
  double hmin = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 256; ++i)
    for (int j = 0; j <= 32; ++j) hmin = std::min(hmin, germ.H(i / 256.0, -1.0 + j / 16.0, a));
  if (!(hmin > 0)) throw std::invalid_argument("germ must be positive");
  LengthAdjustment out;
  out.a = a;
  out.b = b;
  out.L = L;
  out.L0 = -std::cos(b) / hmin;
  if (!(L > out.L0)) {
    std::ostringstream os;
    os << "L below threshold: L=" << L << " <= L0=" << out.L0;
    throw std::invalid_argument(os.str());
  }
  double h = -std::cos(b) / L;
  out.h_b = h;
  double t1 = a + 0.1 * (b - a);
  out.flat_until = t1;
  double span = b - t1;
  auto mu = [=](double t) {
    if (t <= t1) return 1.0;
    double s = (t - t1) / span;
    return 1.0 - s * s;
  };
  auto dmu = [=](double t) { return t <= t1 ? 0.0 : -2.0 * (t - t1) / (span * span); };
  GenFn g0 = germ;
  out.H.name = "length_adjust(" + germ.name + ")";
  out.H.H = [=](double x, double y, double t) { return h + (g0.H(x, y, a) - h) * mu(t); };
  out.H.Hx = [=](double x, double y, double t) { return g0.Hx(x, y, a) * mu(t); };
  out.H.Hy = [=](double x, double y, double t) { return g0.Hy(x, y, a) * mu(t); };
  out.H.Ht = [=](double x, double y, double t) { return (g0.H(x, y, a) - h) * dmu(t); };
  return out;
}

double measured_boundary_length(const GenFn& G, double b, double yv, int n) {
  // periodic trapezoid rule along the circle oriented by -d/dx
  double s = 0;
  for (int i = 0; i < n; ++i) s += std::cos(b) / G.H((double)i / n, yv, b);
  return -s / n;
}

// ---- slope perturbation --------------------------------------------------

double default_bump(double t, double a) {
  if (std::abs(t) >= a) return 0.0;
  double s = 1.0 - (t / a) * (t / a);
  return s * s;
}

static double wrap(double tau, double period) {
  double r = std::fmod(tau + period / 2, period);
  if (r < 0) r += period;
  return r - period / 2;
}

double rotation_slope(const BoundaryTorusForm& T, const std::function<double(double)>& w, int periods,
                      int steps_per_period) {
  auto rhs = [&](double x, double tau) { return -T.u(x, wrap(tau, T.period)) / w(wrap(tau, T.period)); };
  double tau = 0, x = 0, h = 1.0 / steps_per_period;
  for (int k = 0; k < periods * steps_per_period; ++k) {
    double k1 = rhs(x, tau);
    double k2 = rhs(x + h / 2, tau + h / 2 * k1);
    double k3 = rhs(x + h / 2, tau + h / 2 * k2);
    double k4 = rhs(x + h, tau + h * k3);
    tau += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
    x += h;
  }
  // [m] is the x circle, [l] the tau circle
  return tau / (T.period * periods);
}

PerturbationResult slope_perturbation(const BoundaryTorusForm& T, double eps, int periods, int steps_per_period,
                                      bool negative_sign) {
  if (negative_sign && !(eps < 0)) throw std::invalid_argument("eps must be negative");
  if (!negative_sign && !(eps > 0)) throw std::invalid_argument("eps must be positive for the mirrored variant");
  double a = T.half_width;
  auto chi = T.chi ? T.chi : std::function<double(double)>([a](double t) { return default_bump(t, a); });
  for (int i = 0; i <= 200; ++i)
    if (chi(-a + 2 * a * i / 200.0) < 0) throw std::invalid_argument("bump must be nonnegative");
  // alpha_eps = alpha -+ (1/eps) chi d tau; both variants thicken the d tau part
  double scale = 1.0 / std::abs(eps);
  auto w = [=](double tau) { return 1.0 + scale * chi(tau); };
  PerturbationResult r;
  r.slope = rotation_slope(T, w, periods, steps_per_period);
  r.slope_error_bound = 1.0 / periods;
  // alpha = u dx + d tau, alpha_eps = u dx + w d tau; d of the difference by centered differences
  auto diff_dx = [&](double, double) { return 0.0; };
  auto diff_dtau = [&](double, double tau) { return w(tau) - 1.0; };
  double hh = 1e-4;
  for (int i = 0; i <= 50; ++i) {
    double tau = -a + 2 * a * i / 50.0;
    for (int j = 0; j < 8; ++j) {
      double x = j / 8.0;
      double d = (diff_dtau(x + hh, tau) - diff_dtau(x - hh, tau)) / (2 * hh) -
                 (diff_dx(x, tau + hh) - diff_dx(x, tau - hh)) / (2 * hh);
      r.dalpha_residual = std::max(r.dalpha_residual, std::abs(d));
      // Reeb of alpha is d tau near the collar; alpha_eps(c d tau) = 1 gives c = 1/w
      double Re = 1.0 / w(tau);
      r.reeb_proportionality_residual = std::max(r.reeb_proportionality_residual, std::abs(Re * w(tau) - 1.0));
    }
  }
  return r;
}

// ---- Dehn filling --------------------------------------------------------

double SolidTorusProfile::delta(double r) const { return f(r) * g(r, 1) - g(r) * f(r, 1); }

Vec3 SolidTorusProfile::reeb(double r) const {
  double d = delta(r);
  return {0.0, -f(r, 1) / d, g(r, 1) / d};
}

FillCheck check_solid_profile(const SolidTorusProfile& s, int samples) {
  FillCheck ck;
  ck.g0_zero = s.g(0.0) == 0.0;
  ck.boundary_exact = s.f(1.0) == s.u && s.g(1.0) == s.v;
  if (s.g.is_polynomial() && s.f.is_polynomial()) {
    auto gc = s.g.poly_coeffs(), fc = s.f.poly_coeffs();
    gc.resize(std::max<size_t>(gc.size(), 3), 0.0);
    ck.core_limit = gc[2];
    bool even = true;
    for (size_t i = 1; i < fc.size(); i += 2) even &= fc[i] == 0.0;
    ck.core_smooth = gc[0] == 0.0 && gc[1] == 0.0 && gc[2] > 0 && even;
  } else {
    double r = 1e-4;
    ck.core_limit = s.g(r) / (r * r);
    ck.core_smooth = ck.core_limit > 0;
  }
  ck.min_delta = ck.min_Rz = std::numeric_limits<double>::infinity();
  for (int i = 1; i < samples; ++i) {
    double r = (double)i / (samples - 1);
    ck.min_delta = std::min(ck.min_delta, s.delta(r));
    ck.min_Rz = std::min(ck.min_Rz, s.reeb(r).z);
  }
  return ck;
}

SolidTorusProfile dehn_fill(const FillRequest& req, FillCheck* check) {
  if (req.q == 0) throw std::invalid_argument("slope denominator is zero");
  double slope = (double)req.p / (double)req.q;
  if (!(slope < 0)) throw std::invalid_argument("filling slope must be negative");
  if (std::abs(slope) > req.threshold) {
    std::ostringstream os;
    os << "threshold exceeded: |p/q| = " << std::abs(slope) << " > " << req.threshold;
    throw std::invalid_argument(os.str());
  }
  // oriented meridian class (-q, -p) in the (m, l) basis, [m] = boundary of S
  long mq = -req.q, mp = -req.p;
  long int_S = 1 * mp - 0 * mq;
  long int_R = (long)req.reeb_direction[0] * mp - (long)req.reeb_direction[1] * mq;
  if (req.declared_meridian_meets_S_positively && *req.declared_meridian_meets_S_positively != (int_S > 0))
    throw std::invalid_argument("declared meridian/S intersection sign disagrees with the slope");
  if (req.declared_meridian_meets_reeb_negatively && *req.declared_meridian_meets_reeb_negatively != (int_R < 0))
    throw std::invalid_argument("declared meridian/Reeb intersection sign disagrees with the slope");
  if (!(int_S > 0) || !(int_R < 0)) throw std::invalid_argument("meridian orientation conditions fail");
  if (!(req.v > 0)) throw std::runtime_error("no monotone g: need v > 0 for g = v r^2");
  // g = v r^2, f = u + c (1 - r^2), delta = 2 v r (u + c)
  double c = std::max(0.0, 1.0 - req.u);
  SolidTorusProfile s;
  s.u = req.u;
  s.v = req.v;
  // kept as two terms: (u + c) - c rounds away from u, c (1 - r^2) vanishes exactly at r = 1
  s.f = Fn1::poly({req.u}) + Fn1::poly({c, 0.0, -c});
  s.g = Fn1::poly({0.0, 0.0, req.v});
  if (check) {
    *check = check_solid_profile(s);
    check->int_S = int_S;
    check->int_R = int_R;
  }
  return s;
}

// ---- R^3 model -------------------------------------------------------------

ModelChecklist model_r3_checklist(int sign, int samples) {
  ModelChecklist c;
  c.positive_contact = c.transverse_to_R = c.tangent_on_sutures = c.boundary_positive = true;
  double s = sign;
  for (int i = 0; i < samples; ++i) {
    double th = 2 * kPi * i / samples;
    for (int j = 1; j <= 4; ++j) {
      double r = j / 4.0, x = r * std::cos(th), y = r * std::sin(th);
      // alpha = dz + s (x dy - y dx), d alpha = 2 s dx^dy, alpha ^ d alpha = 2 s vol
      double vol = 2 * s;
      c.positive_contact &= vol > 0;
      // Reeb d/dz: alpha(R) = 1, i_R d alpha = 0
      Vec3 R{0, 0, 1};
      double alphaR = R.z + s * (x * R.y - y * R.x);
      c.positive_contact &= std::abs(alphaR - 1) < 1e-15;
      // top outward normal +z, bottom -z
      c.transverse_to_R &= R.z > 0 && -R.z < 0;
      if (j == 4) {
        // suture annulus r = 1: radial normal
        c.tangent_on_sutures &= std::abs(R.x * std::cos(th) + R.y * std::sin(th)) < 1e-15;
        // boundary of R+ traversed by d/dtheta = (-y, x)
        double at = s * (x * x + y * y);
        c.boundary_positive &= at > 0;
      }
    }
  }
  return c;
}

}  // namespace htk
