#include "htk/moser.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <thread>

namespace htk::moser {

Primitive standard_primitive() {
  Primitive p;
  p.name = "standard";
  p.form = [](double x, double y) { return Covec{-0.5 * y, 0.5 * x}; };
  p.area = [](double, double) { return 1.0; };
  return p;
}

Primitive bump_primitive(double amp) {
  Primitive p;
  p.name = "bump";
  p.form = [amp](double x, double y) {
    double bx = 1 - x * x, by = 1 - y * y;
    double Fx = amp * 3 * bx * bx * (-2 * x) * by * by * by;
    double Fy = amp * bx * bx * bx * 3 * by * by * (-2 * y);
    return Covec{-0.5 * y + Fx, 0.5 * x + Fy};
  };
  p.area = [](double, double) { return 1.0; };
  return p;
}

Primitive radial_primitive(double amp) {
  Primitive p;
  p.name = "radial";
  auto k = [amp](double r2) {
    double b = std::max(0.0, 1 - r2);
    return 1 + amp * b * b * b;
  };
  auto dk = [amp](double r2) {
    double b = std::max(0.0, 1 - r2);
    return -3 * amp * b * b;
  };
  p.form = [k](double x, double y) {
    double kk = k(x * x + y * y);
    return Covec{-0.5 * kk * y, 0.5 * kk * x};
  };
  // d(k (x dy - y dx)/2) = (k + r^2 k') dx^dy
  p.area = [k, dk](double x, double y) {
    double r2 = x * x + y * y;
    return k(r2) + r2 * dk(r2);
  };
  return p;
}

bool GriddedSurface::inside(int i, int j) const {
  if (i < 0 || j < 0 || i >= n || j >= n) return false;
  if (domain == Domain::Square) return true;
  double x = coord(i), y = coord(j);
  return x * x + y * y <= 1.0 + 1e-12;
}

bool GriddedSurface::boundary(int i, int j) const {
  if (!inside(i, j)) return false;
  return !inside(i + 1, j) || !inside(i - 1, j) || !inside(i, j + 1) || !inside(i, j - 1);
}

namespace {
// derivative along one axis of nodal values v, centered where possible
template <class Get>
double axis_diff(const GriddedSurface& G, int i, int j, int di, int dj, Get get) {
  double h = G.h();
  bool fwd = G.inside(i + di, j + dj), bwd = G.inside(i - di, j - dj);
  if (fwd && bwd) {
    if (G.inside(i + 2 * di, j + 2 * dj) && G.inside(i - 2 * di, j - 2 * dj))
      return (8 * (get(i + di, j + dj) - get(i - di, j - dj)) - get(i + 2 * di, j + 2 * dj) +
              get(i - 2 * di, j - 2 * dj)) /
             (12 * h);
    // one node from the edge: fourth-order biased stencils
    if (G.inside(i + 3 * di, j + 3 * dj) && G.inside(i + 2 * di, j + 2 * dj))
      return (-3 * get(i - di, j - dj) - 10 * get(i, j) + 18 * get(i + di, j + dj) - 6 * get(i + 2 * di, j + 2 * dj) +
              get(i + 3 * di, j + 3 * dj)) /
             (12 * h);
    if (G.inside(i - 3 * di, j - 3 * dj) && G.inside(i - 2 * di, j - 2 * dj))
      return (3 * get(i + di, j + dj) + 10 * get(i, j) - 18 * get(i - di, j - dj) + 6 * get(i - 2 * di, j - 2 * dj) -
              get(i - 3 * di, j - 3 * dj)) /
             (12 * h);
    return (get(i + di, j + dj) - get(i - di, j - dj)) / (2 * h);
  }
  if (fwd) {
    if (G.inside(i + 2 * di, j + 2 * dj))
      return (-3 * get(i, j) + 4 * get(i + di, j + dj) - get(i + 2 * di, j + 2 * dj)) / (2 * h);
    return (get(i + di, j + dj) - get(i, j)) / h;
  }
  if (bwd) {
    if (G.inside(i - 2 * di, j - 2 * dj))
      return (3 * get(i, j) - 4 * get(i - di, j - dj) + get(i - 2 * di, j - 2 * dj)) / (2 * h);
    return (get(i, j) - get(i - di, j - dj)) / h;
  }
  return 0.0;
}
}  // namespace

std::vector<double> discrete_d(const GriddedSurface& G, const std::vector<Covec>& w) {
  std::vector<double> out(G.n * G.n, 0.0);
  for (int j = 0; j < G.n; ++j)
    for (int i = 0; i < G.n; ++i) {
      if (!G.inside(i, j)) continue;
      double dwy_dx = axis_diff(G, i, j, 1, 0, [&](int a, int b) { return w[G.id(a, b)][1]; });
      double dwx_dy = axis_diff(G, i, j, 0, 1, [&](int a, int b) { return w[G.id(a, b)][0]; });
      out[G.id(i, j)] = dwy_dx - dwx_dy;
    }
  return out;
}

std::vector<Covec> discrete_grad(const GriddedSurface& G, const std::vector<double>& f) {
  std::vector<Covec> out(G.n * G.n, Covec{0, 0});
  for (int j = 0; j < G.n; ++j)
    for (int i = 0; i < G.n; ++i) {
      if (!G.inside(i, j)) continue;
      auto get = [&](int a, int b) { return f[G.id(a, b)]; };
      out[G.id(i, j)] = {axis_diff(G, i, j, 1, 0, get), axis_diff(G, i, j, 0, 1, get)};
    }
  return out;
}

double PrimitivePair::min_area() const {
  double m = std::numeric_limits<double>::infinity();
  for (int j = 0; j < grid.n; ++j)
    for (int i = 0; i < grid.n; ++i)
      if (grid.inside(i, j)) {
        double x = grid.coord(i), y = grid.coord(j);
        m = std::min({m, beta.area(x, y), beta_prime.area(x, y)});
      }
  return m;
}

double PrimitivePair::boundary_mismatch() const {
  double m = 0;
  for (int j = 0; j < grid.n; ++j)
    for (int i = 0; i < grid.n; ++i)
      if (grid.boundary(i, j)) {
        double x = grid.coord(i), y = grid.coord(j);
        auto a = beta.form(x, y), b = beta_prime.form(x, y);
        m = std::max({m, std::abs(a[0] - b[0]), std::abs(a[1] - b[1])});
      }
  return m;
}

void moser_field_at(const PrimitivePair& P, double s, double x, double y, double* Yx, double* Yy, double* f) {
  auto b = P.beta.form(x, y), bp = P.beta_prime.form(x, y);
  double rho = (1 - s) * P.beta.area(x, y) + s * P.beta_prime.area(x, y);
  if (!(rho > 0)) throw std::domain_error("degenerate d beta_s at (" + std::to_string(x) + ", " + std::to_string(y) + ")");
  double cx = bp[0] - b[0], cy = bp[1] - b[1];
  // i_Y (rho dx^dy) = rho (Y_x dy - Y_y dx)
  *Yx = cy / rho;
  *Yy = -cx / rho;
  double bsx = (1 - s) * b[0] + s * bp[0], bsy = (1 - s) * b[1] + s * bp[1];
  *f = -(bsx * *Yx + bsy * *Yy);
}

FieldSample solve_moser_field(const PrimitivePair& P, double s) {
  const auto& G = P.grid;
  FieldSample out;
  out.Y.assign(G.n * G.n, Covec{0, 0});
  out.f.assign(G.n * G.n, 0.0);
  for (int j = 0; j < G.n; ++j)
    for (int i = 0; i < G.n; ++i) {
      if (!G.inside(i, j)) continue;
      double x = G.coord(i), y = G.coord(j), Yx, Yy, f;
      moser_field_at(P, s, x, y, &Yx, &Yy, &f);
      int k = G.id(i, j);
      out.Y[k] = {Yx, Yy};
      out.f[k] = f;
      auto b = P.beta.form(x, y), bp = P.beta_prime.form(x, y);
      double rho = (1 - s) * P.beta.area(x, y) + s * P.beta_prime.area(x, y);
      double rx = -rho * Yy - (bp[0] - b[0]), ry = rho * Yx - (bp[1] - b[1]);
      out.max_residual = std::max({out.max_residual, std::abs(rx), std::abs(ry)});
      if (G.boundary(i, j)) out.boundary_max = std::max({out.boundary_max, std::abs(Yx), std::abs(Yy), std::abs(f)});
    }
  return out;
}

// L_X alpha_s = d alpha_s / ds makes alpha_s the push-forward of alpha_0 by the
// flow of -X_s, so pulling back alpha_1 by that flow at s = 1 gives alpha_0.
std::array<double, 3> trajectory(const PrimitivePair& P, double x, double y, double t, int steps) {
  auto rhs = [&](double s, const std::array<double, 3>& z) {
    double Yx, Yy, f;
    moser_field_at(P, s, z[0], z[1], &Yx, &Yy, &f);
    return std::array<double, 3>{-Yx, -Yy, -f};
  };
  std::array<double, 3> z{x, y, t};
  double ds = 1.0 / steps;
  auto axpy = [](const std::array<double, 3>& a, double c, const std::array<double, 3>& b) {
    return std::array<double, 3>{a[0] + c * b[0], a[1] + c * b[1], a[2] + c * b[2]};
  };
  for (int k = 0; k < steps; ++k) {
    double s = k * ds;
    auto k1 = rhs(s, z);
    auto k2 = rhs(s + ds / 2, axpy(z, ds / 2, k1));
    auto k3 = rhs(s + ds / 2, axpy(z, ds / 2, k2));
    auto k4 = rhs(s + ds, axpy(z, ds, k3));
    for (int c = 0; c < 3; ++c) z[c] += ds / 6 * (k1[c] + 2 * k2[c] + 2 * k3[c] + k4[c]);
  }
  return z;
}

Flow integrate_flow(const PrimitivePair& P, int steps, int jobs) {
  const auto& G = P.grid;
  Flow out;
  out.grid = G;
  out.phi1.assign(G.n * G.n, Covec{0, 0});
  out.tau.assign(G.n * G.n, 0.0);
  std::vector<std::array<double, 3>> end(G.n * G.n);
  // rows are independent; each worker takes every jobs-th row
  auto work = [&](int first) {
    for (int j = first; j < G.n; j += jobs)
      for (int i = 0; i < G.n; ++i)
        if (G.inside(i, j)) end[G.id(i, j)] = trajectory(P, G.coord(i), G.coord(j), 0.0, steps);
  };
  jobs = std::max(1, jobs);
  if (jobs == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < jobs; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }
  for (int j = 0; j < G.n; ++j)
    for (int i = 0; i < G.n; ++i) {
      if (!G.inside(i, j)) continue;
      double x = G.coord(i), y = G.coord(j);
      int k = G.id(i, j);
      const auto& z = end[k];
      bool in = std::abs(z[0]) <= 1 + 1e-12 && std::abs(z[1]) <= 1 + 1e-12;
      if (G.domain == Domain::Disk) in = z[0] * z[0] + z[1] * z[1] <= 1 + 1e-9;
      if (!in) throw std::runtime_error("trajectory exits grid at node " + std::to_string(k));
      out.phi1[k] = {z[0], z[1]};
      out.tau[k] = z[2];
      double disp = std::hypot(z[0] - x, z[1] - y);
      out.max_displacement = std::max(out.max_displacement, disp);
      if (G.boundary(i, j))
        out.max_boundary_displacement = std::max({out.max_boundary_displacement, disp, std::abs(z[2])});
    }
  return out;
}

PullbackReport verify_pullback(const Flow& phi, const PrimitivePair& P, double tol) {
  const auto& G = phi.grid;
  PullbackReport rep;
  auto dtau = discrete_grad(G, phi.tau);
  std::vector<double> p1(G.n * G.n), p2(G.n * G.n);
  for (int k = 0; k < G.n * G.n; ++k) {
    p1[k] = phi.phi1[k][0];
    p2[k] = phi.phi1[k][1];
  }
  auto d1 = discrete_grad(G, p1), d2 = discrete_grad(G, p2);
  for (int j = 0; j < G.n; ++j)
    for (int i = 0; i < G.n; ++i) {
      if (!G.interior(i, j)) continue;
      int k = G.id(i, j);
      auto bp = P.beta_prime.form(phi.phi1[k][0], phi.phi1[k][1]);
      auto b = P.beta.form(G.coord(i), G.coord(j));
      // (phi1^* beta')_a = sum_c beta'_c d phi1^c / d x_a
      for (int a = 0; a < 2; ++a) {
        double r = dtau[k][a] + bp[0] * d1[k][a] + bp[1] * d2[k][a] - b[a];
        rep.residual = std::max(rep.residual, std::abs(r));
      }
    }
  rep.boundary_displacement = phi.max_boundary_displacement;
  // phi2(x, t + t') - phi2(x, t) = t' at a few nodes, integrated from two t offsets
  int steps = 50;
  for (int k = 1; k <= 3; ++k) {
    int i = G.n * k / 4, j = G.n * (4 - k) / 5;
    if (!G.inside(i, j)) continue;
    double x = G.coord(i), y = G.coord(j);
    for (double tp : {0.7, -2.5}) {
      auto z0 = trajectory(P, x, y, 0.3, steps), z1 = trajectory(P, x, y, 0.3 + tp, steps);
      rep.equivariance = std::max(rep.equivariance, std::abs(z1[2] - z0[2] - tp));
      rep.equivariance = std::max({rep.equivariance, std::abs(z1[0] - z0[0]), std::abs(z1[1] - z0[1])});
    }
  }
  rep.pass = rep.residual < tol;
  return rep;
}

double ConvergenceStudy::min_order() const {
  double m = std::numeric_limits<double>::infinity();
  for (double o : orders) m = std::min(m, o);
  return m;
}

ConvergenceStudy rk4_convergence(const PrimitivePair& P, double x, double y, std::vector<int> steps,
                                 int reference_steps) {
  ConvergenceStudy st;
  st.steps = steps;
  auto ref = trajectory(P, x, y, 0.0, reference_steps);
  for (int n : steps) {
    auto z = trajectory(P, x, y, 0.0, n);
    st.errors.push_back(std::max({std::abs(z[0] - ref[0]), std::abs(z[1] - ref[1]), std::abs(z[2] - ref[2])}));
  }
  for (size_t i = 1; i < st.errors.size(); ++i)
    st.orders.push_back(std::log((st.errors[i - 1]) / st.errors[i]) /
                        std::log((double)steps[i] / steps[i - 1]));
  return st;
}

}  // namespace htk::moser
