#pragma once

#include <vector>

#include "ncconvex/ncpoly.hpp"

namespace ncconvex {

// Shift tuple on the word basis of the free monoid over mu letters, truncated
// at length m: T_j = S_j + S_j* with S_j w = a_j w (0 once length m is hit),
// v the empty-word basis vector. The vectors {w(T) v : deg w <= m} are
// linearly independent, which makes (T, v) a universal nonzero-witness for
// polynomials of degree <= m.
struct ShiftTuple {
  std::vector<Matrix> T;     // mu hermitian N x N, N = sum_{j<=m} mu^j
  Vector v;                  // e_(empty word)
  std::vector<Word> basis;   // the underlying words, graded lex
};

ShiftTuple amitsur_tuple(int mu, int m);

// Numeric rank of the column family {w(A) v : deg w <= kappa} over the
// alphabet {A_1..A_g}; SVD threshold 1e-10 * sigma_max.
int word_vector_rank(const std::vector<Matrix>& A, const Vector& v, int kappa);

// True iff the family above has full column rank sum_{j<=kappa} g^j.
bool independence_check(const std::vector<Matrix>& A, const Vector& v, int kappa);

// Exact syntactic zero test (empty term map).
bool is_zero_poly(const FreePolynomial& p);

// Numeric cross-check: max_gamma || p(T) (e_gamma (x) v) || at the shift
// tuple over the combined 2 mu alphabet with m = deg p. Positive for every
// nonzero p, zero for the zero polynomial.
double shift_witness_norm(const FreePolynomial& p);

}  // namespace ncconvex
