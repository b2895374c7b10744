#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ncconvex/ncpoly.hpp"
#include "ncconvex/rng.hpp"

namespace ncconvex {

// Structured pair for the a2 compression test: R_j = A_j (+) alpha_j,
// S_j = [[X_j, beta_j], [beta_j*, delta_j]], W* = (I_n 0). For p convex in
// the Second class, (I (x) W)* p(R,S) (I (x) W) - p(A,X) is PSD.
struct A2Pair {
  int n = 0, m = 0;
  std::vector<Matrix> A, X;          // hermitian n
  std::vector<Matrix> alpha, delta;  // hermitian m
  std::vector<Matrix> beta;          // n x m
  std::vector<Matrix> R, S;          // assembled (n+m)
  Matrix W;                          // (n+m) x n, [I; 0]
};

A2Pair sample_a2_pair(int mu, int n, int m, std::uint64_t seed);

// Structured xy pair: V = [I;0;0] is an isometry with
// V*(X_i Y_j)V = (V*X_i V)(V*Y_j V) by the block pattern
// X_j = [[X0j, A_j, 0], [A_j*, *, *], [0, *, *]],
// Y_k = [[Y0k, 0, C_k], [0, *, *], [C_k*, *, *]].
struct XYPair {
  int n0 = 0, n1 = 0, n2 = 0;
  std::vector<Matrix> X, Y;  // hermitian n0+n1+n2
  Matrix V;                  // (n0+n1+n2) x n0
};

XYPair sample_xy_pair(int mu, int n0, int n1, int n2, std::uint64_t seed);

enum class WitnessKind { Midpoint, A2PairTest, XYPairTest };

// Everything needed to replay the violated convexity inequality.
struct Counterexample {
  WitnessKind kind = WitnessKind::Midpoint;
  Mode mode = Mode::A2;
  double violation = 0.0;  // most negative eigenvalue of the gap matrix
  std::uint64_t seed = 0;
  std::uint64_t trial = 0;

  // Midpoint: fixed holds the untouched class, left/right the two endpoints
  // of the varied class (varied), combined with weight t.
  VarClass varied = VarClass::Second;
  double t = 0.5;
  std::vector<Matrix> fixed, left, right;

  // Pair tests: the sampled pair.
  std::optional<A2Pair> a2;
  std::optional<XYPair> xy;
};

// Recomputes the gap matrix of the stored inequality and returns its most
// negative eigenvalue.
double replay_violation(const FreePolynomial& p, const Counterexample& ce);

struct FalsifyOutcome {
  std::optional<Counterexample> counterexample;
  double min_gap = 0.0;  // most negative eigenvalue seen over all trials run
  std::uint64_t trials_run = 0;
};

struct FalsifyOptions {
  bool parallel = true;
};

// Randomized search for convexity violations, alternating midpoint tests
// (sizes cycling through 1..4) and structured pair tests; a violation below
// -1e-7 is a counterexample. Trials draw from per-trial streams derived from
// (seed, trial), so parallel and serial runs return the same first find
// (deterministic tie-break on trial index). Sizes {1,2,3} and both families
// are always tried before returning empty.
FalsifyOutcome falsify(const FreePolynomial& p, Mode mode, std::uint64_t trials,
                       std::uint64_t seed, const FalsifyOptions& opts = {});

// Serial reference implementation, kept for testing the parallel path.
FalsifyOutcome falsify_serial(const FreePolynomial& p, Mode mode,
                              std::uint64_t trials, std::uint64_t seed);

// Most negative gap eigenvalue over `count` sampled convexity tests of a
// polynomial (used to stress certificates: certified inputs stay >= -1e-7).
double min_gap_over_samples(const FreePolynomial& p, Mode mode,
                            std::uint64_t count, std::uint64_t seed,
                            bool parallel = true);

// Gaussian draws shared with the test suites.
Matrix random_complex_matrix(int rows, int cols, CounterRng& rng);
Matrix random_hermitian(int n, CounterRng& rng);
std::vector<Matrix> random_hermitian_tuple(int mu, int n, CounterRng& rng);

}  // namespace ncconvex
