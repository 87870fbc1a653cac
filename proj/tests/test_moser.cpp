#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <chrono>
#include <cmath>
#include <stdexcept>

#include "htk/moser.hpp"

using namespace htk::moser;

static const double kBumpAmp = 0.3;

static PrimitivePair pair_of(Primitive b, Primitive bp, int n, Domain d = Domain::Square) {
  PrimitivePair P;
  P.grid.n = n;
  P.grid.domain = d;
  P.beta = std::move(b);
  P.beta_prime = std::move(bp);
  return P;
}

TEST_CASE("discrete d of a discrete gradient vanishes") {
  GriddedSurface G;
  G.n = 33;
  std::vector<double> F(G.n * G.n);
  for (int j = 0; j < G.n; ++j)
    for (int i = 0; i < G.n; ++i) {
      double x = G.coord(i), y = G.coord(j);
      F[G.id(i, j)] = std::sin(2 * x) * std::cos(y) + x * x * y;
    }
  auto d = discrete_d(G, discrete_grad(G, F));
  double m = 0;
  for (int j = 0; j < G.n; ++j)
    for (int i = 0; i < G.n; ++i)
      if (G.interior(i, j) && G.interior(i + 1, j) && G.interior(i - 1, j) && G.interior(i, j + 1) && G.interior(i, j - 1))
        m = std::max(m, std::abs(d[G.id(i, j)]));
  CHECK(m < 1e-12);

  // d of the sampled standard primitive is the unit area density
  std::vector<Covec> w(G.n * G.n);
  auto st = standard_primitive();
  for (int j = 0; j < G.n; ++j)
    for (int i = 0; i < G.n; ++i) w[G.id(i, j)] = st.form(G.coord(i), G.coord(j));
  auto a = discrete_d(G, w);
  for (double v : a) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("pair invariants") {
  auto P = pair_of(standard_primitive(), bump_primitive(kBumpAmp), 64);
  CHECK(P.min_area() > 0);
  CHECK(P.boundary_mismatch() < 1e-15);
  auto R = pair_of(standard_primitive(), radial_primitive(0.3), 64, Domain::Disk);
  CHECK(R.min_area() > 0);
  CHECK(R.boundary_mismatch() < 1e-3);  // masked nodes sit just inside the circle
}

TEST_CASE("field solve") {
  SUBCASE("identical primitives give the zero field") {
    auto P = pair_of(standard_primitive(), standard_primitive(), 16);
    auto F = solve_moser_field(P, 0.4);
    for (auto& y : F.Y) CHECK((y[0] == 0 && y[1] == 0));
    for (double f : F.f) CHECK(f == 0);
  }
  SUBCASE("bump pair: pointwise residual and boundary vanishing at every s sample") {
    auto P = pair_of(standard_primitive(), bump_primitive(kBumpAmp), 64);
    for (int k = 0; k <= 10; ++k) {
      auto F = solve_moser_field(P, k / 10.0);
      CHECK(F.max_residual < 1e-10);
      CHECK(F.boundary_max < 1e-15);
    }
  }
  SUBCASE("rotationally symmetric pair gives a radial field") {
    auto P = pair_of(standard_primitive(), radial_primitive(0.3), 41, Domain::Disk);
    auto F = solve_moser_field(P, 0.5);
    double ang = 0, rad = 0;
    for (int j = 0; j < P.grid.n; ++j)
      for (int i = 0; i < P.grid.n; ++i) {
        if (!P.grid.inside(i, j)) continue;
        double x = P.grid.coord(i), y = P.grid.coord(j);
        auto Y = F.Y[P.grid.id(i, j)];
        ang = std::max(ang, std::abs(-y * Y[0] + x * Y[1]));
        rad = std::max(rad, std::abs(x * Y[0] + y * Y[1]));
      }
    CHECK(ang < 1e-10);
    CHECK(rad > 1e-3);
  }
  SUBCASE("degenerate area is an error") {
    Primitive bad = standard_primitive();
    bad.area = [](double x, double) { return x; };
    auto P = pair_of(standard_primitive(), bad, 9);
    CHECK_THROWS_AS(solve_moser_field(P, 1.0), std::domain_error);
  }
}

TEST_CASE("flow: identity, boundary fixing, displacement bound") {
  auto I = pair_of(standard_primitive(), standard_primitive(), 16);
  auto phi = integrate_flow(I, 20);
  for (int j = 0; j < 16; ++j)
    for (int i = 0; i < 16; ++i) {
      int k = I.grid.id(i, j);
      CHECK(std::abs(phi.phi1[k][0] - I.grid.coord(i)) < 1e-12);
      CHECK(std::abs(phi.phi1[k][1] - I.grid.coord(j)) < 1e-12);
      CHECK(std::abs(phi.tau[k]) < 1e-12);
    }
  CHECK(verify_pullback(phi, I, 1e-12).residual < 1e-15);

  // displacement grows linearly with the size of beta' - beta
  double prev_ratio = -1;
  for (double amp : {0.01, 0.02, 0.04}) {
    auto P = pair_of(standard_primitive(), bump_primitive(amp), 33);
    auto f = integrate_flow(P, 50);
    CHECK(f.max_boundary_displacement < 1e-9);
    // sup |beta' - beta| = amp * sup |d bump|
    double sup = 0;
    for (int j = 0; j < 33; ++j)
      for (int i = 0; i < 33; ++i) {
        double x = P.grid.coord(i), y = P.grid.coord(j);
        auto a = P.beta.form(x, y), b = P.beta_prime.form(x, y);
        sup = std::max(sup, std::hypot(a[0] - b[0], a[1] - b[1]));
      }
    double ratio = f.max_displacement / sup;
    CHECK(ratio < 1.5);
    if (prev_ratio > 0) CHECK(ratio == doctest::Approx(prev_ratio).epsilon(0.1));
    prev_ratio = ratio;
  }
}

TEST_CASE("flow leaving the domain is reported with the node id") {
  // a non-matching pair whose field points outward at the edge
  Primitive out = standard_primitive();
  out.form = [](double x, double y) { return Covec{-0.5 * y + 0.3 * y, 0.5 * x - 0.3 * x}; };
  out.area = [](double, double) { return 0.4; };
  auto P = pair_of(standard_primitive(), out, 9);
  try {
    integrate_flow(P, 10);
    FAIL("expected exit");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find("exits grid at node") != std::string::npos);
  }
}

// radial oracle: area preservation forces k(r1^2) r1^2 = r^2
static double radial_image(double r, double amp) {
  auto g = [&](double q) {
    double b = std::max(0.0, 1 - q * q);
    return (1 + amp * b * b * b) * q * q - r * r;
  };
  double lo = 0, hi = 1;
  for (int it = 0; it < 200; ++it) {
    double mid = (lo + hi) / 2;
    (g(mid) > 0 ? hi : lo) = mid;
  }
  return (lo + hi) / 2;
}

TEST_CASE("radial flow matches the area-preservation oracle") {
  double amp = 0.3;
  auto P = pair_of(standard_primitive(), radial_primitive(amp), 41, Domain::Disk);
  for (double r : {0.1, 0.35, 0.6, 0.85}) {
    double th = 0.7;
    auto z = trajectory(P, r * std::cos(th), r * std::sin(th), 0.0, 200);
    CHECK(std::hypot(z[0], z[1]) == doctest::Approx(radial_image(r, amp)).epsilon(1e-9));
    CHECK(std::atan2(z[1], z[0]) == doctest::Approx(th).epsilon(1e-12));
  }
  auto phi = integrate_flow(P, 100);
  auto rep = verify_pullback(phi, P, 1e-2);
  CHECK(rep.pass);
}

TEST_CASE("bump case on a 64x64 grid") {
  auto t0 = std::chrono::steady_clock::now();
  auto P = pair_of(standard_primitive(), bump_primitive(kBumpAmp), 64);
  auto phi = integrate_flow(P, 100);
  auto rep = verify_pullback(phi, P, 1e-3);
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  MESSAGE("residual " << rep.residual << " boundary " << rep.boundary_displacement << " eq " << rep.equivariance
                      << " time " << secs);
  CHECK(rep.pass);
  CHECK(rep.boundary_displacement < 1e-9);
  CHECK(rep.equivariance < 1e-12);
  CHECK(secs < 10);

  auto par = integrate_flow(P, 100, 4);
  for (size_t k = 0; k < par.tau.size(); ++k) {
    CHECK(par.tau[k] == phi.tau[k]);
    CHECK(par.phi1[k] == phi.phi1[k]);
  }
}

TEST_CASE("RK4 order and grid refinement") {
  auto P = pair_of(standard_primitive(), bump_primitive(kBumpAmp), 64);
  auto st = rk4_convergence(P, 0.3, -0.45);
  MESSAGE("errors " << st.errors[0] << " " << st.errors[1] << " " << st.errors[2] << " " << st.errors[3]);
  CHECK(st.min_order() >= 3.5);

  std::vector<double> res;
  for (int n : {17, 33, 65}) {
    auto Q = pair_of(standard_primitive(), bump_primitive(kBumpAmp), n);
    res.push_back(verify_pullback(integrate_flow(Q, 100), Q, 1.0).residual);
  }
  double o1 = std::log2(res[0] / res[1]), o2 = std::log2(res[1] / res[2]);
  MESSAGE("grid orders " << o1 << " " << o2);
  CHECK(o1 >= 1.0);
  CHECK(o2 >= 1.0);
}
