#pragma once

#include <vector>

#include "ncconvex/ncpoly.hpp"

namespace ncconvex {

// Border-vector / middle-matrix form of a polynomial q that is homogeneous of
// degree two in the Second class:
//
//   q = V* Z V,   V the column of blocks I_d (x) s_k m_t,   s_k Second letters,
//
// where m_1..m_N runs over First-class monomials of degree <= d_a in graded
// lexicographic order and Z is the (mu N) x (mu N) block matrix of d x d
// First-class polynomials collecting the inner factors. Block rows/columns
// are indexed by pairs (j, r) |-> (j-1) N + r with j the Second letter and r
// the monomial index (both 1-based).
struct BorderMiddleForm {
  int d = 1;
  int mu = 1;
  int d_a = 0;
  std::vector<Word> monomials;          // N First-class words
  std::vector<FreePolynomial> middle;   // (mu N)^2 blocks, row-major

  int N() const { return static_cast<int>(monomials.size()); }
  const FreePolynomial& z(int j, int r, int k, int t) const;
  FreePolynomial& z(int j, int r, int k, int t);

  // The full (mu N d) x (mu N d) middle matrix as one polynomial.
  FreePolynomial middle_polynomial() const;
  // The (mu N d) x d border column as one polynomial, linear in Second.
  FreePolynomial border_polynomial() const;
};

// First-class words of degree <= d_a in graded lexicographic order;
// size sum_{j=0}^{d_a} mu^j.
std::vector<Word> enumerate_monomials(int mu, int d_a);

// Exact decomposition; throws unless q is homogeneous of degree two in the
// Second class. d_a is the actual First-class degree of q.
BorderMiddleForm border_middle_decompose(const FreePolynomial& q);

// Exact inverse of border_middle_decompose.
FreePolynomial reconstruct(const BorderMiddleForm& form);

// Border vector with the Second letters replaced by beta_k* and the
// monomials evaluated at A: stacked blocks I_d (x) (beta_k* m_t(A)).
// A: mu hermitian n x n; beta: mu complex n x m. Result (mu N d m) x (d n).
Matrix evaluate_border_vector(const BorderMiddleForm& form,
                              const std::vector<Matrix>& A,
                              const std::vector<Matrix>& beta);

// Middle matrix evaluated at a First-class tuple alpha (m x m hermitian):
// (mu N d m) square.
Matrix evaluate_middle(const BorderMiddleForm& form,
                       const std::vector<Matrix>& alpha);

// Homogeneous degree-two part of p in class c; throws if p has degree > 2
// in c. Evaluating it at direction H reproduces half the second derivative
// of t |-> p(... X + t H ...).
FreePolynomial hessian_part(const FreePolynomial& p, VarClass c);

struct ExclusionReport {
  bool passes = true;
  std::vector<Word> offending_words;
};

// Passes iff every word of p has degree <= 2 in each class and no word is a
// full four-letter (First First Second Second) or (Second Second First First)
// pattern. Polynomials certifiable in the xy sense live inside this span.
ExclusionReport exclusion_check(const FreePolynomial& p);

}  // namespace ncconvex
