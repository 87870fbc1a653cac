#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

namespace htk::moser {

using Covec = std::array<double, 2>;  // (dx, dy) components

// closed-form primitive: the 1-form and its area density d(form) = rho dx^dy
struct Primitive {
  std::string name;
  std::function<Covec(double, double)> form;
  std::function<double(double, double)> area;
};

Primitive standard_primitive();                    // (x dy - y dx)/2
Primitive bump_primitive(double amp);              // standard + d(amp (1-x^2)^3 (1-y^2)^3)
Primitive radial_primitive(double amp);            // k(r^2)(x dy - y dx)/2, k = 1 + amp (1-r^2)^3 inside the disk

enum class Domain { Square, Disk };

struct GriddedSurface {
  int n = 64;  // nodes per side on [-1,1]^2
  Domain domain = Domain::Square;
  double h() const { return 2.0 / (n - 1); }
  double coord(int i) const { return -1.0 + h() * i; }
  int id(int i, int j) const { return j * n + i; }
  bool inside(int i, int j) const;
  bool boundary(int i, int j) const;  // inside with a neighbour outside, or on the square's edge
  bool interior(int i, int j) const { return inside(i, j) && !boundary(i, j); }
};

// discrete exterior derivative of a sampled 1-form: fourth-order centered inside,
// biased fourth-order one node from the edge, second-order one-sided on it
std::vector<double> discrete_d(const GriddedSurface& G, const std::vector<Covec>& w);
std::vector<Covec> discrete_grad(const GriddedSurface& G, const std::vector<double>& f);

struct PrimitivePair {
  GriddedSurface grid;
  Primitive beta, beta_prime;
  // invariant checks at the nodes
  double min_area() const;
  double boundary_mismatch() const;
};

struct FieldSample {
  std::vector<Covec> Y;        // vector field on S (components x, y)
  std::vector<double> f;       // d/dt component
  double max_residual = 0;     // |i_Y d beta_s - (beta' - beta)|
  double boundary_max = 0;     // max |Y|, |f| over boundary nodes
};

// i_Y d beta_s = beta' - beta, f = -beta_s(Y); throws std::domain_error on degenerate area
FieldSample solve_moser_field(const PrimitivePair& P, double s);
// pointwise version used by the integrator
void moser_field_at(const PrimitivePair& P, double s, double x, double y, double* Yx, double* Yy, double* f);

struct Flow {
  GriddedSurface grid;
  std::vector<Covec> phi1;   // image of each node on S
  std::vector<double> tau;   // phi2(x, t) = t + tau(x)
  double max_boundary_displacement = 0;
  double max_displacement = 0;
};

// RK4 in s; throws std::runtime_error("trajectory exits grid at node k") when it leaves the domain
Flow integrate_flow(const PrimitivePair& P, int steps = 100, int jobs = 1);
// a single trajectory (x, y, t) -> state at s = 1
std::array<double, 3> trajectory(const PrimitivePair& P, double x, double y, double t, int steps);

struct PullbackReport {
  double residual = 0;       // max over interior nodes of |d tau + Dphi1^T beta'(phi1) - beta|
  double equivariance = 0;   // |phi2(x, t + t') - phi2(x, t) - t'| at spot checks
  double boundary_displacement = 0;
  bool pass = false;
};

PullbackReport verify_pullback(const Flow& phi, const PrimitivePair& P, double tol);

struct ConvergenceStudy {
  std::vector<int> steps;
  std::vector<double> errors;
  std::vector<double> orders;
  double min_order() const;
};

ConvergenceStudy rk4_convergence(const PrimitivePair& P, double x, double y, std::vector<int> steps = {25, 50, 100, 200},
                                 int reference_steps = 3200);

}  // namespace htk::moser
