#include "ncconvex/sdp.hpp"

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

namespace {

double dot_with(const SdpConstraint& c, const Matrix& q) {
  Complex acc(0.0, 0.0);
  for (const auto& e : c.entries) acc += std::conj(e.value) * q(e.row, e.col);
  return acc.real();
}

// tr(A* B) for two sorted triplet lists.
double dot_pair(const SdpConstraint& a, const SdpConstraint& b) {
  Complex acc(0.0, 0.0);
  auto i = a.entries.begin();
  auto j = b.entries.begin();
  while (i != a.entries.end() && j != b.entries.end()) {
    const auto ka = std::make_pair(i->row, i->col);
    const auto kb = std::make_pair(j->row, j->col);
    if (ka < kb) {
      ++i;
    } else if (kb < ka) {
      ++j;
    } else {
      acc += std::conj(i->value) * j->value;
      ++i;
      ++j;
    }
  }
  return acc.real();
}

// Pseudoinverse of a real symmetric PSD Gram matrix.
Eigen::MatrixXd gram_pinv(const Eigen::MatrixXd& g) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("constraint Gram eigendecomposition failed");
  const Eigen::VectorXd& lam = es.eigenvalues();
  const double cutoff = 1e-12 * std::max(1.0, lam.cwiseAbs().maxCoeff());
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(lam.size());
  for (Eigen::Index i = 0; i < lam.size(); ++i)
    if (lam(i) > cutoff) inv(i) = 1.0 / lam(i);
  return es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().transpose();
}

// Projection onto the affine set {Q hermitian : <A_i, Q> = b_i}.
class AffineProjector {
 public:
  AffineProjector(const std::vector<SdpConstraint>& cons, int dim, bool parallel)
      : cons_(cons), dim_(dim), parallel_(parallel) {
    const int m = static_cast<int>(cons_.size());
    b_.resize(m);
    for (int i = 0; i < m; ++i) b_(i) = cons_[i].b;
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(m, m);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (parallel_ && m >= 64)
#endif
    for (int i = 0; i < m; ++i)
      for (int j = i; j < m; ++j) {
        const double v = dot_pair(cons_[i], cons_[j]);
        g(i, j) = v;
        g(j, i) = v;
      }
    // Word-matching constraint families have pairwise disjoint supports, so
    // this Gram is often exactly diagonal; skip the eigendecomposition then.
    diagonal_ = true;
    for (int i = 0; i < m && diagonal_; ++i)
      for (int j = i + 1; j < m; ++j)
        if (g(i, j) != 0.0) {
          diagonal_ = false;
          break;
        }
    if (diagonal_) {
      diag_inv_ = Eigen::VectorXd::Zero(m);
      for (int i = 0; i < m; ++i)
        if (g(i, i) > 0.0) diag_inv_(i) = 1.0 / g(i, i);
    } else {
      gram_pinv_ = gram_pinv(g);
    }
  }

  Eigen::VectorXd solve(const Eigen::VectorXd& r) const {
    return diagonal_ ? diag_inv_.cwiseProduct(r).eval()
                     : (gram_pinv_ * r).eval();
  }

  Eigen::VectorXd values(const Matrix& q) const {
    const int m = static_cast<int>(cons_.size());
    Eigen::VectorXd r(m);
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (parallel_ && m >= 64)
#endif
    for (int i = 0; i < m; ++i) r(i) = dot_with(cons_[i], q);
    return r;
  }

  double residual(const Matrix& q) const {
    const int m = static_cast<int>(cons_.size());
    if (m == 0) return 0.0;
    return (values(q) - b_).cwiseAbs().maxCoeff();
  }

  // Kept serial so repeated runs reproduce the same floats.
  Matrix combination(const Eigen::VectorXd& coef) const {
    const int m = static_cast<int>(cons_.size());
    Matrix out = Matrix::Zero(dim_, dim_);
    for (int i = 0; i < m; ++i)
      for (const auto& e : cons_[i].entries)
        out(e.row, e.col) += coef(i) * e.value;
    return out;
  }

  Matrix least_norm() const {
    if (cons_.empty()) return Matrix::Zero(dim_, dim_);
    return combination(solve(b_));
  }

  Matrix project(const Matrix& q) const {
    if (cons_.empty()) return q;
    const Eigen::VectorXd coef = solve(b_ - values(q));
    return q + combination(coef);
  }

  const Eigen::VectorXd& b() const { return b_; }

 private:
  const std::vector<SdpConstraint>& cons_;
  int dim_;
  bool parallel_;
  Eigen::VectorXd b_;
  bool diagonal_ = false;
  Eigen::VectorXd diag_inv_;
  Eigen::MatrixXd gram_pinv_;
};

void collect_entries(const Matrix& h, SdpConstraint* c) {
  for (int r = 0; r < h.rows(); ++r)
    for (int col = 0; col < h.cols(); ++col)
      if (h(r, col) != Complex(0.0, 0.0))
        c->entries.push_back({r, col, h(r, col)});
}

}  // namespace

void SdpProblem::add_constraint(const Matrix& A, double b) {
  if (A.rows() != dim || A.cols() != dim)
    throw std::invalid_argument("constraint matrix has wrong size");
  if (!is_hermitian_matrix(A, 1e-10 * std::max(1.0, A.norm())))
    throw std::invalid_argument("constraint matrix must be hermitian");
  if (!std::isfinite(b)) throw std::invalid_argument("constraint value must be finite");
  SdpConstraint c;
  c.b = b;
  collect_entries(hermitize(A), &c);
  constraints.push_back(std::move(c));
}

void SdpProblem::add_complex_constraint(const Matrix& E, Complex z) {
  if (E.rows() != dim || E.cols() != dim)
    throw std::invalid_argument("constraint matrix has wrong size");
  const Matrix h1 = hermitize(E);
  const Matrix h2 = (E - E.adjoint()) / Complex(0.0, 2.0);
  const double b1 = z.real();
  const double b2 = -z.imag();
  if (h1.norm() != 0.0 || b1 != 0.0) {
    SdpConstraint c;
    c.b = b1;
    collect_entries(h1, &c);
    constraints.push_back(std::move(c));
  }
  if (h2.norm() != 0.0 || b2 != 0.0) {
    SdpConstraint c;
    c.b = b2;
    collect_entries(h2, &c);
    constraints.push_back(std::move(c));
  }
}

namespace {

// Round a near-feasible iterate onto the face spanned by its significant
// eigenvectors, solve the constraints there, and re-project in full space.
bool try_facial_round(const Matrix& x, const AffineProjector& aff,
                      const std::vector<SdpConstraint>& cons, double tol,
                      Matrix* out) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitize(x));
  if (es.info() != Eigen::Success) return false;
  const Eigen::VectorXd& lam = es.eigenvalues();
  const double lmax = std::max(lam.maxCoeff(), 0.0);
  const int n = static_cast<int>(x.rows());
  const int m = static_cast<int>(cons.size());
  for (double rel : {1e-3, 1e-5, 1e-7}) {
    const double theta = rel * std::max(1.0, lmax);
    std::vector<int> keep;
    for (int i = 0; i < n; ++i)
      if (lam(i) > theta) keep.push_back(i);
    if (keep.empty()) continue;
    const int k = static_cast<int>(keep.size());
    Matrix u(n, k);
    for (int i = 0; i < k; ++i) u.col(i) = es.eigenvectors().col(keep[i]);

    // Constraints whose matrices vanish on the face are either free (b ~ 0)
    // or witness that this face is too small.
    std::vector<Matrix> restricted;
    std::vector<double> target;
    restricted.reserve(m);
    bool face_too_small = false;
    for (int i = 0; i < m; ++i) {
      Matrix a = Matrix::Zero(k, k);
      for (const auto& e : cons[i].entries)
        a += e.value * (u.row(e.row).adjoint() * u.row(e.col));
      if (a.norm() <= 1e-13) {
        if (std::abs(cons[i].b) > tol) {
          face_too_small = true;
          break;
        }
        continue;
      }
      restricted.push_back(std::move(a));
      target.push_back(cons[i].b);
    }
    if (face_too_small) continue;
    const int ma = static_cast<int>(restricted.size());
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(ma, ma);
    Eigen::VectorXd rhs(ma);
    Matrix k0 = u.adjoint() * x * u;
    for (int i = 0; i < ma; ++i) {
      for (int j = i; j < ma; ++j) {
        const double v =
            restricted[i].conjugate().cwiseProduct(restricted[j]).sum().real();
        g(i, j) = v;
        g(j, i) = v;
      }
      rhs(i) = target[i] -
               restricted[i].conjugate().cwiseProduct(k0).sum().real();
    }
    Eigen::VectorXd coef = ma > 0 ? (gram_pinv(g) * rhs).eval() : Eigen::VectorXd();
    Matrix kk = k0;
    for (int i = 0; i < ma; ++i) kk += coef(i) * restricted[i];
    Matrix candidate = aff.project(u * kk * u.adjoint());
    if (aff.residual(candidate) <= tol && min_eig(candidate) >= -tol) {
      *out = hermitize(candidate);
      return true;
    }
  }
  return false;
}

}  // namespace

SdpOutcome solve_feasibility(const SdpProblem& prob) {
  if (prob.dim <= 0) throw std::invalid_argument("sdp dimension must be positive");
  if (!(prob.tol > 0.0)) throw std::invalid_argument("sdp tolerance must be positive");
  const int n = prob.dim;
  const double tol = prob.tol;
  AffineProjector aff(prob.constraints, n, prob.parallel);

  auto finish = [&](SdpStatus st, const Matrix& q, int iters, std::string diag) {
    SdpOutcome o;
    o.status = st;
    o.Q = hermitize(q);
    o.constraint_residual = aff.residual(o.Q);
    o.min_eigenvalue = min_eig(o.Q);
    o.iterations = iters;
    o.diagnostic = std::move(diag);
    return o;
  };

  if (prob.constraints.empty())
    return finish(SdpStatus::Feasible, Matrix::Zero(n, n), 0, "no constraints");

  double bmax = 0.0;
  for (const auto& c : prob.constraints) bmax = std::max(bmax, std::abs(c.b));

  const Matrix q0 = aff.least_norm();
  const double r0 = aff.residual(q0);
  if (r0 > std::max(tol, 1e-11 * (1.0 + bmax)))
    return finish(SdpStatus::NotCertified, q0, 0, "inconsistent affine system");
  if (min_eig(q0) >= -tol)
    return finish(SdpStatus::Feasible, q0, 0, "least-norm affine solution is psd");

  Matrix rounded;
  if (try_facial_round(q0, aff, prob.constraints, tol, &rounded))
    return finish(SdpStatus::Feasible, rounded, 0, "facial rounding of affine start");

  Matrix x = q0;
  Matrix p = Matrix::Zero(n, n);
  Matrix qc = Matrix::Zero(n, n);
  double best_delta = std::numeric_limits<double>::infinity();
  int best_iter = 0;
  bool stalled = false;
  int iter = 0;
  while (iter < prob.max_iters) {
    ++iter;
    const Matrix y = psd_project(hermitize(x + p));
    p = x + p - y;
    if (aff.residual(y) <= tol)
      return finish(SdpStatus::Feasible, y, iter, "psd iterate met constraints");
    const Matrix xa = aff.project(y + qc);
    qc = y + qc - xa;
    const double delta = (y - xa).norm();
    if (iter % 500 == 0 &&
        try_facial_round(xa, aff, prob.constraints, tol, &rounded))
      return finish(SdpStatus::Feasible, rounded, iter, "facial rounding");
    if (delta < best_delta * (1.0 - 1e-12)) {
      best_delta = delta;
      best_iter = iter;
    } else if (iter - best_iter > 100) {
      stalled = true;
      x = xa;
      break;
    }
    x = xa;
  }

  if (try_facial_round(x, aff, prob.constraints, tol, &rounded))
    return finish(SdpStatus::Feasible, rounded, iter,
                  stalled ? "facial rounding at stall" : "facial rounding at iteration limit");
  return finish(SdpStatus::NotCertified, x, iter,
                stalled ? "stalled: no progress over a 100-iteration window"
                        : "iteration limit reached");
}

}  // namespace ncconvex
