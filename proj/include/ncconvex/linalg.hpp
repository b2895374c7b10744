#pragma once

#include <Eigen/Dense>
#include <complex>

namespace ncconvex {

using Matrix = Eigen::MatrixXcd;

Matrix kron(const Matrix& a, const Matrix& b);

bool is_hermitian_matrix(const Matrix& h, double tol);

// (h + h*)/2
Matrix hermitize(const Matrix& h);

// Throws std::invalid_argument unless h is hermitian to 1e-10 * ||h||_F.
double min_eig(const Matrix& h);
double max_eig(const Matrix& h);

// Nearest PSD matrix in Frobenius norm: eigenvalues clipped at zero.
Matrix psd_project(const Matrix& h);

// F with F* F ~= q, rank(q) rows. Eigenvalues in [-tol, tol] are treated as
// zero; anything below -tol throws. ||F*F - q|| <= 10 * tol * (1 + ||q||).
Matrix psd_factor(const Matrix& q, double tol = 1e-8);

// Moore-Penrose pseudoinverse; singular values below rel_cutoff * sigma_max
// are dropped.
Matrix pseudo_inverse(const Matrix& m, double rel_cutoff = 1e-10);

// Unknown corner of [[A,B,Q],[B*,C,D],[Q*,D*,E]] given that [[A,B],[B*,C]]
// and [[C,D],[D*,E]] are PSD to tol: Q = B C^+ D. Throws if a given block
// pair dips below -tol.
Matrix psd_complete(const Matrix& A, const Matrix& B, const Matrix& C,
                    const Matrix& D, const Matrix& E, double tol = 1e-8);

}  // namespace ncconvex
