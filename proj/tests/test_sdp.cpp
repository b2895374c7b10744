#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <stdexcept>

#include "ncconvex/linalg.hpp"
#include "ncconvex/rng.hpp"
#include "ncconvex/sampler.hpp"
#include "ncconvex/sdp.hpp"

using namespace ncconvex;

namespace {

Matrix unit(int d, int r, int c) {
  Matrix m = Matrix::Zero(d, d);
  m(r, c) = 1.0;
  return m;
}

double pairing(const Matrix& a, const Matrix& q) {
  return (a.adjoint() * q).trace().real();
}

}  // namespace

TEST_CASE("diagonal pins solve immediately from the least-norm start") {
  SdpProblem prob(2);
  prob.add_constraint(unit(2, 0, 0), 1.0);
  prob.add_constraint(unit(2, 1, 1), 2.0);
  const SdpOutcome out = solve_feasibility(prob);
  REQUIRE(out.status == SdpStatus::Feasible);
  CHECK(out.iterations == 0);
  CHECK(std::abs(out.Q(0, 0) - 1.0) <= 1e-12);
  CHECK(std::abs(out.Q(1, 1) - 2.0) <= 1e-12);
  CHECK(out.constraint_residual <= prob.tol);
  CHECK(out.min_eigenvalue >= -prob.tol);
}

TEST_CASE("an off-diagonal demand beyond the psd bound is not certified") {
  // Q00 = Q11 = 1 forces |Q01| <= 1, but Q01 + Q10 = 4 needs Re Q01 = 2.
  SdpProblem prob(2);
  prob.add_constraint(unit(2, 0, 0), 1.0);
  prob.add_constraint(unit(2, 1, 1), 1.0);
  Matrix cross = Matrix::Zero(2, 2);
  cross(0, 1) = 1.0;
  cross(1, 0) = 1.0;
  prob.add_constraint(cross, 4.0);
  prob.max_iters = 3000;
  const SdpOutcome out = solve_feasibility(prob);
  CHECK(out.status == SdpStatus::NotCertified);
  CHECK(!out.diagnostic.empty());
}

TEST_CASE("inconsistent affine systems are reported without iterating") {
  SdpProblem prob(2);
  prob.add_constraint(unit(2, 0, 0), 1.0);
  prob.add_constraint(unit(2, 0, 0), 2.0);
  const SdpOutcome out = solve_feasibility(prob);
  CHECK(out.status == SdpStatus::NotCertified);
  CHECK(out.diagnostic.find("inconsistent") != std::string::npos);
  CHECK(out.iterations == 0);
}

TEST_CASE("no constraints yields the zero matrix") {
  SdpProblem prob(3);
  const SdpOutcome out = solve_feasibility(prob);
  REQUIRE(out.status == SdpStatus::Feasible);
  CHECK(out.Q.norm() == 0.0);
}

TEST_CASE("an indefinite least-norm start is pushed into the cone") {
  // single constraint Q01 + Q10 = 2: least-norm solution is the flip matrix
  // with eigenvalues +-1; the feasible psd set contains [[1,1],[1,1]].
  SdpProblem prob(2);
  Matrix cross = Matrix::Zero(2, 2);
  cross(0, 1) = 1.0;
  cross(1, 0) = 1.0;
  prob.add_constraint(cross, 2.0);
  const SdpOutcome out = solve_feasibility(prob);
  REQUIRE(out.status == SdpStatus::Feasible);
  CHECK(std::abs(pairing(cross, out.Q) - 2.0) <= prob.tol);
  CHECK(out.min_eigenvalue >= -prob.tol);
}

TEST_CASE("complex functionals split into hermitian constraints") {
  SdpProblem prob(2);
  prob.add_constraint(unit(2, 0, 0), 7.0);
  prob.add_constraint(unit(2, 1, 1), 7.0);
  Matrix e01 = Matrix::Zero(2, 2);
  e01(0, 1) = 1.0;
  const Complex z(3.0, 4.0);
  prob.add_complex_constraint(e01, z);
  const SdpOutcome out = solve_feasibility(prob);
  REQUIRE(out.status == SdpStatus::Feasible);
  CHECK(std::abs(out.Q(0, 1) - z) <= 10 * prob.tol);
  CHECK(out.min_eigenvalue >= -prob.tol);
}

TEST_CASE("constraint validation") {
  SdpProblem prob(2);
  Matrix nh(2, 2);
  nh << 0, 1, 0, 0;
  CHECK_THROWS_AS(prob.add_constraint(nh, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(prob.add_constraint(Matrix::Identity(3, 3), 1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      prob.add_constraint(Matrix::Identity(2, 2),
                          std::numeric_limits<double>::quiet_NaN()),
      std::invalid_argument);
  SdpProblem bad(0);
  CHECK_THROWS_AS(solve_feasibility(bad), std::invalid_argument);
  SdpProblem badtol(2);
  badtol.tol = 0.0;
  CHECK_THROWS_AS(solve_feasibility(badtol), std::invalid_argument);
}

TEST_CASE("constructed-feasible random problems are solved") {
  CounterRng rng(101, 0);
  for (int rep = 0; rep < 5; ++rep) {
    const int dim = 6 + 2 * rep;
    const Matrix r = random_complex_matrix(dim, dim / 2, rng);
    const Matrix target = r * r.adjoint();
    SdpProblem prob(dim);
    for (int i = 0; i < 2 * dim; ++i) {
      const Matrix a = random_hermitian(dim, rng);
      prob.add_constraint(a, pairing(a, target));
    }
    const SdpOutcome out = solve_feasibility(prob);
    REQUIRE(out.status == SdpStatus::Feasible);
    CHECK(out.constraint_residual <= prob.tol);
    CHECK(out.min_eigenvalue >= -prob.tol);
  }
}

TEST_CASE("parallel and serial constraint passes agree") {
  CounterRng rng(103, 0);
  const int dim = 10;
  const Matrix r = random_complex_matrix(dim, 4, rng);
  const Matrix target = r * r.adjoint();
  SdpProblem base(dim);
  for (int i = 0; i < 30; ++i) {
    const Matrix a = random_hermitian(dim, rng);
    base.add_constraint(a, pairing(a, target));
  }
  SdpProblem ser = base;
  ser.parallel = false;
  SdpProblem par = base;
  par.parallel = true;
  const SdpOutcome a = solve_feasibility(ser);
  const SdpOutcome b = solve_feasibility(par);
  REQUIRE(a.status == b.status);
  CHECK((a.Q - b.Q).norm() <= 1e-12 * (1.0 + b.Q.norm()));
}

TEST_CASE("rank-deficient feasible sets are rounded onto a face") {
  // pin a rank-one projector entrywise except one free phase entry
  SdpProblem prob(3);
  prob.add_constraint(unit(3, 0, 0), 1.0);
  prob.add_constraint(unit(3, 1, 1), 1.0);
  prob.add_constraint(unit(3, 2, 2), 0.0);
  Matrix cross = Matrix::Zero(3, 3);
  cross(0, 1) = 1.0;
  cross(1, 0) = 1.0;
  prob.add_constraint(cross, 2.0);
  const SdpOutcome out = solve_feasibility(prob);
  REQUIRE(out.status == SdpStatus::Feasible);
  CHECK(out.min_eigenvalue >= -prob.tol);
  CHECK(std::abs(out.Q(0, 1) - 1.0) <= 10 * prob.tol);
}
