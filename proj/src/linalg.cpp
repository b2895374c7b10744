#include "ncconvex/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <stdexcept>

namespace ncconvex {

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

bool is_hermitian_matrix(const Matrix& h, double tol) {
  if (h.rows() != h.cols()) return false;
  return (h - h.adjoint()).norm() <= tol;
}

Matrix hermitize(const Matrix& h) { return 0.5 * (h + h.adjoint()); }

namespace {

Eigen::SelfAdjointEigenSolver<Matrix> hermitian_eigs(const Matrix& h,
                                                     const char* caller) {
  if (h.rows() != h.cols())
    throw std::invalid_argument(std::string(caller) + ": matrix is not square");
  if (!is_hermitian_matrix(h, 1e-10 * std::max(1.0, h.norm())))
    throw std::invalid_argument(std::string(caller) + ": matrix is not hermitian");
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitize(h));
  if (es.info() != Eigen::Success)
    throw std::runtime_error(std::string(caller) + ": eigensolver failed");
  return es;
}

}  // namespace

double min_eig(const Matrix& h) {
  return hermitian_eigs(h, "min_eig").eigenvalues().minCoeff();
}

double max_eig(const Matrix& h) {
  return hermitian_eigs(h, "max_eig").eigenvalues().maxCoeff();
}

Matrix psd_project(const Matrix& h) {
  auto es = hermitian_eigs(h, "psd_project");
  Eigen::VectorXd lam = es.eigenvalues().cwiseMax(0.0);
  return es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().adjoint();
}

Matrix psd_factor(const Matrix& q, double tol) {
  auto es = hermitian_eigs(q, "psd_factor");
  const Eigen::VectorXd lam = es.eigenvalues();
  if (lam.minCoeff() < -tol)
    throw std::invalid_argument("psd_factor: matrix is indefinite beyond tol");
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < lam.size(); ++i)
    if (lam(i) > tol) keep.push_back(i);
  Matrix f(static_cast<Eigen::Index>(keep.size()), q.rows());
  for (std::size_t r = 0; r < keep.size(); ++r)
    f.row(static_cast<Eigen::Index>(r)) =
        std::sqrt(lam(keep[r])) * es.eigenvectors().col(keep[r]).adjoint();
  return f;
}

Matrix pseudo_inverse(const Matrix& m, double rel_cutoff) {
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd sv = svd.singularValues();
  const double cutoff = sv.size() ? rel_cutoff * sv(0) : 0.0;
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(sv.size());
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > cutoff && sv(i) > 0.0) inv(i) = 1.0 / sv(i);
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().adjoint();
}

Matrix psd_complete(const Matrix& A, const Matrix& B, const Matrix& C,
                    const Matrix& D, const Matrix& E, double tol) {
  const auto p = A.rows();
  const auto q = C.rows();
  const auto r = E.rows();
  if (A.cols() != p || C.cols() != q || E.cols() != r || B.rows() != p ||
      B.cols() != q || D.rows() != q || D.cols() != r)
    throw std::invalid_argument("psd_complete: block shapes are inconsistent");

  Matrix top(p + q, p + q);
  top << A, B, B.adjoint(), C;
  Matrix bottom(q + r, q + r);
  bottom << C, D, D.adjoint(), E;
  if (min_eig(top) < -tol)
    throw std::invalid_argument("psd_complete: [[A,B],[B*,C]] is not PSD to tol");
  if (min_eig(bottom) < -tol)
    throw std::invalid_argument("psd_complete: [[C,D],[D*,E]] is not PSD to tol");

  return B * pseudo_inverse(C) * D;
}

}  // namespace ncconvex
