#include "ncconvex/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "ncconvex/linalg.hpp"

namespace ncconvex {

Matrix random_complex_matrix(int rows, int cols, CounterRng& rng) {
  Matrix m(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) m(r, c) = rng.next_complex_gaussian();
  return m;
}

Matrix random_hermitian(int n, CounterRng& rng) {
  const Matrix g = random_complex_matrix(n, n, rng);
  return (g + g.adjoint()) / 2.0;
}

std::vector<Matrix> random_hermitian_tuple(int mu, int n, CounterRng& rng) {
  std::vector<Matrix> out;
  out.reserve(mu);
  for (int j = 0; j < mu; ++j) out.push_back(random_hermitian(n, rng));
  return out;
}

A2Pair sample_a2_pair(int mu, int n, int m, std::uint64_t seed) {
  if (mu < 1 || n < 1 || m < 1)
    throw std::invalid_argument("sample_a2_pair: mu, n, m must be positive");
  CounterRng rng(seed, 0);
  A2Pair pr;
  pr.n = n;
  pr.m = m;
  pr.A = random_hermitian_tuple(mu, n, rng);
  pr.X = random_hermitian_tuple(mu, n, rng);
  pr.alpha = random_hermitian_tuple(mu, m, rng);
  pr.delta = random_hermitian_tuple(mu, m, rng);
  for (int j = 0; j < mu; ++j) pr.beta.push_back(random_complex_matrix(n, m, rng));
  for (int j = 0; j < mu; ++j) {
    Matrix r = Matrix::Zero(n + m, n + m);
    r.topLeftCorner(n, n) = pr.A[j];
    r.bottomRightCorner(m, m) = pr.alpha[j];
    pr.R.push_back(std::move(r));
    Matrix s(n + m, n + m);
    s.topLeftCorner(n, n) = pr.X[j];
    s.topRightCorner(n, m) = pr.beta[j];
    s.bottomLeftCorner(m, n) = pr.beta[j].adjoint();
    s.bottomRightCorner(m, m) = pr.delta[j];
    pr.S.push_back(std::move(s));
  }
  pr.W = Matrix::Zero(n + m, n);
  pr.W.topLeftCorner(n, n) = Matrix::Identity(n, n);
  return pr;
}

XYPair sample_xy_pair(int mu, int n0, int n1, int n2, std::uint64_t seed) {
  if (mu < 1 || n0 < 1 || n1 < 0 || n2 < 0)
    throw std::invalid_argument("sample_xy_pair: need mu, n0 >= 1 and n1, n2 >= 0");
  CounterRng rng(seed, 0);
  XYPair pr;
  pr.n0 = n0;
  pr.n1 = n1;
  pr.n2 = n2;
  const int n = n0 + n1 + n2;
  for (int j = 0; j < mu; ++j) {
    const Matrix x0 = random_hermitian(n0, rng);
    const Matrix a = random_complex_matrix(n0, n1, rng);
    const Matrix x11 = random_hermitian(n1, rng);
    const Matrix x12 = random_complex_matrix(n1, n2, rng);
    const Matrix x22 = random_hermitian(n2, rng);
    Matrix x = Matrix::Zero(n, n);
    x.block(0, 0, n0, n0) = x0;
    x.block(0, n0, n0, n1) = a;
    x.block(n0, 0, n1, n0) = a.adjoint();
    x.block(n0, n0, n1, n1) = x11;
    x.block(n0, n0 + n1, n1, n2) = x12;
    x.block(n0 + n1, n0, n2, n1) = x12.adjoint();
    x.block(n0 + n1, n0 + n1, n2, n2) = x22;
    pr.X.push_back(std::move(x));
  }
  for (int j = 0; j < mu; ++j) {
    const Matrix y0 = random_hermitian(n0, rng);
    const Matrix c = random_complex_matrix(n0, n2, rng);
    const Matrix y11 = random_hermitian(n1, rng);
    const Matrix y12 = random_complex_matrix(n1, n2, rng);
    const Matrix y22 = random_hermitian(n2, rng);
    Matrix y = Matrix::Zero(n, n);
    y.block(0, 0, n0, n0) = y0;
    y.block(0, n0 + n1, n0, n2) = c;
    y.block(n0 + n1, 0, n2, n0) = c.adjoint();
    y.block(n0, n0, n1, n1) = y11;
    y.block(n0, n0 + n1, n1, n2) = y12;
    y.block(n0 + n1, n0, n2, n1) = y12.adjoint();
    y.block(n0 + n1, n0 + n1, n2, n2) = y22;
    pr.Y.push_back(std::move(y));
  }
  pr.V = Matrix::Zero(n, n0);
  pr.V.topLeftCorner(n0, n0) = Matrix::Identity(n0, n0);
  return pr;
}

namespace {

constexpr double kViolationCutoff = -1e-7;

Matrix midpoint_gap(const FreePolynomial& p, VarClass varied,
                    const std::vector<Matrix>& fixed,
                    const std::vector<Matrix>& left,
                    const std::vector<Matrix>& right, double t) {
  std::vector<Matrix> mid;
  mid.reserve(left.size());
  for (std::size_t i = 0; i < left.size(); ++i)
    mid.push_back(t * left[i] + (1.0 - t) * right[i]);
  auto at = [&](const std::vector<Matrix>& varied_tuple) {
    return varied == VarClass::Second
               ? EvaluationPoint::from_tuples(fixed, varied_tuple)
               : EvaluationPoint::from_tuples(varied_tuple, fixed);
  };
  const Matrix gap = t * evaluate(p, at(left)) +
                     (1.0 - t) * evaluate(p, at(right)) - evaluate(p, at(mid));
  return hermitize(gap);
}

Matrix a2_pair_gap(const FreePolynomial& p, const A2Pair& pr) {
  const int d = p.rows();
  const Matrix big = evaluate(p, EvaluationPoint::from_tuples(pr.R, pr.S));
  const Matrix w = kron(Matrix::Identity(d, d), pr.W);
  const Matrix small = evaluate(p, EvaluationPoint::from_tuples(pr.A, pr.X));
  return hermitize(w.adjoint() * big * w - small);
}

Matrix xy_pair_gap(const FreePolynomial& p, const XYPair& pr) {
  const int d = p.rows();
  const Matrix big = evaluate(p, EvaluationPoint::from_tuples(pr.X, pr.Y));
  const Matrix w = kron(Matrix::Identity(d, d), pr.V);
  std::vector<Matrix> xs, ys;
  for (const Matrix& x : pr.X) xs.push_back(pr.V.adjoint() * x * pr.V);
  for (const Matrix& y : pr.Y) ys.push_back(pr.V.adjoint() * y * pr.V);
  const Matrix small = evaluate(p, EvaluationPoint::from_tuples(xs, ys));
  return hermitize(w.adjoint() * big * w - small);
}

struct XyBlockSizes {
  int n0, n1, n2;
};

constexpr XyBlockSizes kXyBlockCycle[8] = {{1, 1, 1}, {1, 1, 0}, {2, 1, 1},
                                           {1, 2, 2}, {2, 2, 2}, {3, 1, 1},
                                           {1, 0, 1}, {3, 2, 2}};

// One convexity test, fully determined by (seed, t). Pass a Counterexample
// to capture the sampled data; the returned violation is identical either way.
double run_trial(const FreePolynomial& p, Mode mode, std::uint64_t seed,
                 std::uint64_t t, Counterexample* out) {
  const int mu = p.mu();
  CounterRng rng(seed, t);
  const std::uint64_t step = t / 2;
  Matrix gap;
  if (t % 2 == 0) {
    const int n = 1 + static_cast<int>(step % 4);
    const VarClass varied = (mode == Mode::A2 || step % 2 == 0)
                                ? VarClass::Second
                                : VarClass::First;
    const std::vector<Matrix> fixed = random_hermitian_tuple(mu, n, rng);
    const std::vector<Matrix> left = random_hermitian_tuple(mu, n, rng);
    const std::vector<Matrix> right = random_hermitian_tuple(mu, n, rng);
    double weight = rng.next_uniform();
    if (weight == 0.0) weight = 0.5;
    gap = midpoint_gap(p, varied, fixed, left, right, weight);
    if (out) {
      out->kind = WitnessKind::Midpoint;
      out->varied = varied;
      out->t = weight;
      out->fixed = fixed;
      out->left = left;
      out->right = right;
    }
  } else if (mode == Mode::A2) {
    const std::uint64_t pair_seed = rng.next_u64();
    const int n = 1 + static_cast<int>(step % 4);
    const int m = 1 + static_cast<int>((step / 4) % 3);
    const A2Pair pr = sample_a2_pair(mu, n, m, pair_seed);
    gap = a2_pair_gap(p, pr);
    if (out) {
      out->kind = WitnessKind::A2PairTest;
      out->a2 = pr;
    }
  } else {
    const std::uint64_t pair_seed = rng.next_u64();
    const XyBlockSizes sz = kXyBlockCycle[step % 8];
    const XYPair pr = sample_xy_pair(mu, sz.n0, sz.n1, sz.n2, pair_seed);
    gap = xy_pair_gap(p, pr);
    if (out) {
      out->kind = WitnessKind::XYPairTest;
      out->xy = pr;
    }
  }
  const double violation = min_eig(gap);
  if (out) {
    out->mode = mode;
    out->violation = violation;
    out->seed = seed;
    out->trial = t;
  }
  return violation;
}

void require_falsifiable(const FreePolynomial& p) {
  if (p.rows() != p.cols())
    throw std::invalid_argument("falsify: polynomial must be square");
  if (!p.is_hermitian(1e-10 * (1.0 + max_abs_coeff(p))))
    throw std::invalid_argument("falsify: polynomial must be hermitian");
}

double witness_violation(const FreePolynomial& p, const Counterexample& ce) {
  Matrix gap;
  switch (ce.kind) {
    case WitnessKind::Midpoint:
      gap = midpoint_gap(p, ce.varied, ce.fixed, ce.left, ce.right, ce.t);
      break;
    case WitnessKind::A2PairTest:
      if (!ce.a2)
        throw std::invalid_argument("replay_violation: missing a2 pair data");
      gap = a2_pair_gap(p, *ce.a2);
      break;
    case WitnessKind::XYPairTest:
      if (!ce.xy)
        throw std::invalid_argument("replay_violation: missing xy pair data");
      gap = xy_pair_gap(p, *ce.xy);
      break;
  }
  return min_eig(gap);
}

// Rescales the moving part of the test point by c: midpoint endpoints, the
// a2 coupling beta, or the xy coupling blocks. The block patterns survive,
// so the result is again a legitimate convexity test.
Counterexample scaled_witness(const Counterexample& ce, double c) {
  Counterexample s = ce;
  switch (s.kind) {
    case WitnessKind::Midpoint:
      for (Matrix& m : s.left) m *= c;
      for (Matrix& m : s.right) m *= c;
      break;
    case WitnessKind::A2PairTest: {
      A2Pair& pr = *s.a2;
      for (Matrix& b : pr.beta) b *= c;
      for (Matrix& sj : pr.S) {
        sj.block(0, pr.n, pr.n, pr.m) *= c;
        sj.block(pr.n, 0, pr.m, pr.n) *= c;
      }
      break;
    }
    case WitnessKind::XYPairTest: {
      XYPair& pr = *s.xy;
      for (Matrix& x : pr.X) {
        x.block(0, pr.n0, pr.n0, pr.n1) *= c;
        x.block(pr.n0, 0, pr.n1, pr.n0) *= c;
      }
      for (Matrix& y : pr.Y) {
        y.block(0, pr.n0 + pr.n1, pr.n0, pr.n2) *= c;
        y.block(pr.n0 + pr.n1, 0, pr.n2, pr.n0) *= c;
      }
      break;
    }
  }
  return s;
}

// A first hit is often shallow; blowing up the moving part deepens the
// violation (quadratically for class-quadratic polynomials). Deterministic,
// so serial and parallel sweeps still return the same counterexample.
void amplify_counterexample(const FreePolynomial& p, Counterexample& ce) {
  const Counterexample base = ce;
  for (const double c : {2.0, 4.0, 8.0, 16.0}) {
    Counterexample cand = scaled_witness(base, c);
    cand.violation = witness_violation(p, cand);
    if (cand.violation < ce.violation) ce = std::move(cand);
  }
}

FalsifyOutcome falsify_loop(const FreePolynomial& p, Mode mode,
                            std::uint64_t trials, std::uint64_t seed,
                            bool parallel) {
  require_falsifiable(p);
  const std::uint64_t effective = std::max<std::uint64_t>(trials, 6);
  FalsifyOutcome out;
  out.min_gap = std::numeric_limits<double>::infinity();

  const std::uint64_t chunk = parallel ? 32 : 1;
  std::vector<double> violations;
  for (std::uint64_t base = 0; base < effective; base += chunk) {
    const std::uint64_t count = std::min<std::uint64_t>(chunk, effective - base);
    violations.assign(count, 0.0);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (parallel && count > 1)
#endif
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(count); ++i)
      violations[i] = run_trial(p, mode, seed, base + i, nullptr);
    for (std::uint64_t i = 0; i < count; ++i) {
      const std::uint64_t t = base + i;
      out.min_gap = std::min(out.min_gap, violations[i]);
      out.trials_run = t + 1;
      if (violations[i] < kViolationCutoff) {
        Counterexample ce;
        run_trial(p, mode, seed, t, &ce);
        amplify_counterexample(p, ce);
        out.min_gap = std::min(out.min_gap, ce.violation);
        out.counterexample = std::move(ce);
        return out;
      }
    }
  }
  return out;
}

}  // namespace

FalsifyOutcome falsify(const FreePolynomial& p, Mode mode, std::uint64_t trials,
                       std::uint64_t seed, const FalsifyOptions& opts) {
  return falsify_loop(p, mode, trials, seed, opts.parallel);
}

FalsifyOutcome falsify_serial(const FreePolynomial& p, Mode mode,
                              std::uint64_t trials, std::uint64_t seed) {
  return falsify_loop(p, mode, trials, seed, false);
}

double replay_violation(const FreePolynomial& p, const Counterexample& ce) {
  require_falsifiable(p);
  return witness_violation(p, ce);
}

double min_gap_over_samples(const FreePolynomial& p, Mode mode,
                            std::uint64_t count, std::uint64_t seed,
                            bool parallel) {
  require_falsifiable(p);
  if (count == 0) return 0.0;
  double best = std::numeric_limits<double>::infinity();
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) reduction(min : best) if (parallel && count > 1)
#endif
  for (std::int64_t t = 0; t < static_cast<std::int64_t>(count); ++t)
    best = std::min(best, run_trial(p, mode, seed, t, nullptr));
  return best;
}

}  // namespace ncconvex
