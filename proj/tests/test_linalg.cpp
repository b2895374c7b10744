#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <stdexcept>

#include "ncconvex/linalg.hpp"
#include "ncconvex/rng.hpp"
#include "ncconvex/sampler.hpp"

using namespace ncconvex;

TEST_CASE("kron layout and values") {
  Matrix a(2, 2), b(2, 2);
  a << 1, 2, 3, 4;
  b << 0, 1, 1, 0;
  const Matrix k = kron(a, b);
  REQUIRE(k.rows() == 4);
  REQUIRE(k.cols() == 4);
  // k(i*p + r, j*q + c) = a(i,j) b(r,c)
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c)
          CHECK(k(2 * i + r, 2 * j + c) == a(i, j) * b(r, c));
}

TEST_CASE("kron is multiplicative") {
  CounterRng rng(1, 0);
  const Matrix a = random_complex_matrix(2, 3, rng);
  const Matrix b = random_complex_matrix(3, 2, rng);
  const Matrix c = random_complex_matrix(2, 2, rng);
  const Matrix d = random_complex_matrix(2, 3, rng);
  const Matrix lhs = kron(a * b, c * d);
  const Matrix rhs = kron(a, c) * kron(b, d);
  CHECK((lhs - rhs).norm() <= 1e-12 * (1.0 + rhs.norm()));
}

TEST_CASE("hermitize and hermitian test") {
  Matrix m(2, 2);
  m << 1, Complex(2, 1), 0, 3;
  const Matrix h = hermitize(m);
  CHECK(is_hermitian_matrix(h, 1e-15));
  CHECK(h(0, 1) == Complex(1, 0.5));
  CHECK_FALSE(is_hermitian_matrix(m, 1e-12));
}

TEST_CASE("eigenvalue bounds") {
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 1.0;
  d(1, 1) = -2.0;
  CHECK(min_eig(d) == doctest::Approx(-2.0));
  CHECK(max_eig(d) == doctest::Approx(1.0));
  Matrix nh(2, 2);
  nh << 0, 1, 0, 0;
  CHECK_THROWS_AS(min_eig(nh), std::invalid_argument);
}

TEST_CASE("psd_project of the symmetric flip") {
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  const Matrix p = psd_project(m);
  const Matrix expected = 0.5 * Matrix::Ones(2, 2);
  CHECK((p - expected).norm() <= 1e-12);
  CHECK(min_eig(p) >= -1e-14);
}

TEST_CASE("psd_project is idempotent and dominates in the psd order") {
  CounterRng rng(2, 0);
  const Matrix h = random_hermitian(4, rng);
  const Matrix p = psd_project(h);
  CHECK(min_eig(p) >= -1e-12);
  CHECK((psd_project(p) - p).norm() <= 1e-12 * (1.0 + p.norm()));
  CHECK(min_eig(p - h) >= -1e-12);
}

TEST_CASE("psd_factor reconstructs with rank rows") {
  Matrix q = Matrix::Zero(2, 2);
  q(0, 0) = 4.0;
  const Matrix f = psd_factor(q);
  REQUIRE(f.rows() == 1);
  CHECK((f.adjoint() * f - q).norm() <= 1e-12);

  Matrix ones = Matrix::Ones(2, 2);
  const Matrix g = psd_factor(ones);
  REQUIRE(g.rows() == 1);
  CHECK((g.adjoint() * g - ones).norm() <= 1e-12);

  CounterRng rng(3, 0);
  const Matrix r = random_complex_matrix(5, 3, rng);
  const Matrix m = r * r.adjoint();
  const Matrix fm = psd_factor(m);
  CHECK(fm.rows() == 3);
  CHECK((fm.adjoint() * fm - m).norm() <= 1e-10 * (1.0 + m.norm()));
}

TEST_CASE("psd_factor rejects genuinely indefinite input") {
  Matrix q = Matrix::Zero(2, 2);
  q(0, 0) = 1.0;
  q(1, 1) = -1.0;
  CHECK_THROWS_AS(psd_factor(q, 1e-8), std::invalid_argument);
  // but clips within the tolerance band
  q(1, 1) = -1e-10;
  const Matrix f = psd_factor(q, 1e-8);
  CHECK(f.rows() == 1);
}

TEST_CASE("psd_factor of zero has zero rows") {
  const Matrix f = psd_factor(Matrix::Zero(3, 3));
  CHECK(f.rows() == 0);
  CHECK(f.cols() == 3);
}

TEST_CASE("pseudo_inverse") {
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 2.0;
  const Matrix pinv = pseudo_inverse(d);
  CHECK(pinv(0, 0).real() == doctest::Approx(0.5));
  CHECK(std::abs(pinv(1, 1)) <= 1e-14);

  CounterRng rng(4, 0);
  const Matrix r = random_complex_matrix(4, 2, rng);
  const Matrix m = r * random_complex_matrix(2, 5, rng);  // rank 2
  const Matrix mp = pseudo_inverse(m);
  CHECK((m * mp * m - m).norm() <= 1e-10 * (1.0 + m.norm()));
  CHECK((mp * m * mp - mp).norm() <= 1e-10 * (1.0 + mp.norm()));
}

TEST_CASE("psd_complete on the scaled identity blocks") {
  const Matrix I = Matrix::Identity(2, 2);
  const Matrix H = 0.5 * I;
  const Matrix q = psd_complete(I, H, I, H, I);
  CHECK((q - 0.25 * I).norm() <= 1e-12);
}

TEST_CASE("psd_complete of a compressed psd master stays psd") {
  CounterRng rng(5, 0);
  for (int rep = 0; rep < 10; ++rep) {
    const Matrix r = random_complex_matrix(6, 6, rng);
    const Matrix master = r * r.adjoint();
    const auto blk = [&](int i, int j) { return master.block(2 * i, 2 * j, 2, 2); };
    const Matrix q = psd_complete(blk(0, 0), blk(0, 1), blk(1, 1), blk(1, 2), blk(2, 2));
    Matrix full(6, 6);
    full << blk(0, 0), blk(0, 1), q, blk(0, 1).adjoint().eval(), blk(1, 1),
        blk(1, 2), q.adjoint().eval(), blk(1, 2).adjoint().eval(), blk(2, 2);
    CHECK(min_eig(hermitize(full)) >= -1e-8 * (1.0 + master.norm()));
  }
}

TEST_CASE("psd_complete rejects blocks that are not jointly psd") {
  const Matrix I = Matrix::Identity(2, 2);
  // [[I, 2I], [2I, I]] has eigenvalue -1
  CHECK_THROWS_AS(psd_complete(I, 2.0 * I, I, Matrix::Zero(2, 2), I),
                  std::invalid_argument);
}
