#pragma once

#include <string>
#include <vector>

#include "ncconvex/ncpoly.hpp"

namespace ncconvex {

// One hermitian linear equality <A, Q> = tr(A* Q) = b, stored sparsely.
struct SdpConstraint {
  struct Entry {
    int row, col;
    Complex value;
  };
  std::vector<Entry> entries;  // sorted by (row, col), both triangles present
  double b = 0.0;
};

// Feasibility problem: find hermitian PSD Q of size dim with <A_i, Q> = b_i.
struct SdpProblem {
  int dim = 0;
  std::vector<SdpConstraint> constraints;
  double tol = 1e-6;
  int max_iters = 10000;
  bool parallel = true;

  explicit SdpProblem(int dim_) : dim(dim_) {}

  // A must be hermitian (to 1e-10 * ||A||) with real b.
  void add_constraint(const Matrix& A, double b);
  // General complex functional sum_{(r,c) in E} Q_rc = z on hermitian Q,
  // split into one or two hermitian constraints.
  void add_complex_constraint(const Matrix& E, Complex z);
};

enum class SdpStatus { Feasible, NotCertified };

struct SdpOutcome {
  SdpStatus status = SdpStatus::NotCertified;
  Matrix Q;
  double constraint_residual = 0.0;  // max_i |<A_i,Q> - b_i|
  double min_eigenvalue = 0.0;
  int iterations = 0;
  std::string diagnostic;
};

// Alternating projections between the PSD cone and the affine constraint set
// with Dykstra correction, started from the least-norm affine solution.
// Near-feasible iterates are rounded onto a face of the cone and re-projected
// onto the affine set, which is what makes high-accuracy Gram matrices cheap.
// Feasible requires constraint_residual <= tol and min_eigenvalue >= -tol.
// NotCertified (never a proof of infeasibility) after max_iters, stall
// (relative progress < 1e-12 over 100 iterations), or an inconsistent
// affine system.
SdpOutcome solve_feasibility(const SdpProblem& prob);

}  // namespace ncconvex
