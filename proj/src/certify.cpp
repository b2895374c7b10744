#include "ncconvex/certify.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <utility>
#include <variant>
#include <vector>

#include "ncconvex/linalg.hpp"
#include "ncconvex/structure.hpp"

namespace ncconvex {

bool certified(const CertifyResult& r) {
  return std::holds_alternative<ConvexityCertificate>(r);
}

const ConvexityCertificate& certificate(const CertifyResult& r) {
  return std::get<ConvexityCertificate>(r);
}

const CertifyFailure& failure(const CertifyResult& r) {
  return std::get<CertifyFailure>(r);
}

namespace {

double input_scale(const FreePolynomial& p) { return 1.0 + max_abs_coeff(p); }

void require_hermitian_input(const FreePolynomial& p, const char* who) {
  if (p.rows() != p.cols())
    throw std::invalid_argument(std::string(who) + ": polynomial must be square");
  if (!p.is_hermitian(1e-10 * input_scale(p)))
    throw std::invalid_argument(std::string(who) + ": polynomial must be hermitian");
}

double sdp_search_tol(const CertifyOptions& opts) {
  return std::min(opts.tol, 1e-10);
}

CertifyFailure make_failure(FailureKind kind, std::string message) {
  CertifyFailure f;
  f.kind = kind;
  f.message = std::move(message);
  return f;
}

Word product_word(const Word& lhs, const Word& rhs) {
  return lhs.reversed().concat(rhs);
}

// Constraints pinning W* G W = target, W the stacked column of blocks
// w_i I_s over the basis words. Conjugate-redundant pins are emitted once;
// product words listed in free_words stay unconstrained. Returns an error
// message when a target word is not a product of two basis words.
std::optional<std::string> build_gram_constraints(
    const FreePolynomial& target, const std::vector<Word>& basis,
    SdpProblem* prob, const std::set<Word>* free_words = nullptr) {
  const int s = target.rows();
  const int nb = static_cast<int>(basis.size());
  std::map<Word, std::vector<std::pair<int, int>>> products;
  for (int i = 0; i < nb; ++i)
    for (int j = 0; j < nb; ++j)
      products[product_word(basis[i], basis[j])].push_back({i, j});
  for (const auto& [w, coeff] : target.terms())
    if (!products.count(w)) {
      std::ostringstream msg;
      msg << "a target word of length " << w.length()
          << " is not a product of two factor-basis words; the basis degree is too small";
      return msg.str();
    }
  for (const auto& [w, pairs] : products) {
    if (free_words && free_words->count(w)) continue;
    const Word ws = w.reversed();
    if (ws < w) continue;
    const bool palindrome = w == ws;
    const Matrix zw = target.coefficient(w);
    for (int r = 0; r < s; ++r)
      for (int c = palindrome ? r : 0; c < s; ++c) {
        Matrix e = Matrix::Zero(prob->dim, prob->dim);
        for (const auto& [i, j] : pairs) e(i * s + r, j * s + c) += 1.0;
        prob->add_complex_constraint(e, zw(r, c));
      }
  }
  return std::nullopt;
}

SdpProblem make_problem(int dim, const CertifyOptions& opts) {
  SdpProblem prob(dim);
  prob.tol = sdp_search_tol(opts);
  prob.max_iters = opts.max_iters;
  return prob;
}

// Emitted certificates have to hold up on their own: reject anything whose
// recomputed residual or Gram spectrum misses the documented bounds.
CertifyResult finalize(const FreePolynomial& p, ConvexityCertificate cert) {
  const double scale = input_scale(p);
  if (cert.residual > 1e-8 * scale || cert.gram_min_eig < -1e-8) {
    std::ostringstream msg;
    msg << "certificate rejected on recheck: residual " << cert.residual
        << ", gram min eigenvalue " << cert.gram_min_eig;
    return make_failure(FailureKind::VerificationFailed, msg.str());
  }
  return cert;
}

FreePolynomial factor_polynomial(const Matrix& f, const std::vector<Word>& basis,
                                 int block, int cols, int mu) {
  Matrix rows = f;
  if (rows.rows() == 0) rows = Matrix::Zero(1, f.cols());
  FreePolynomial out(static_cast<int>(rows.rows()), cols, mu);
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const Matrix coeff = rows.middleCols(static_cast<int>(i) * block, block);
    if (coeff.norm() != 0.0) out.add_term(basis[i], coeff);
  }
  return out;
}

}  // namespace

CertifyResult certify_a2(const FreePolynomial& p, const CertifyOptions& opts) {
  require_hermitian_input(p, "certify_a2");
  const int d = p.rows();
  const int mu = p.mu();
  if (p.degree_in_class(VarClass::Second) > 2)
    return make_failure(
        FailureKind::DegreeBound,
        "degree in the second variable class exceeds two; no certificate of this shape exists");

  const FreePolynomial quad = p.homogeneous_part(VarClass::Second, 2);
  FreePolynomial lambda = p - quad;

  if (quad.is_zero()) {
    ConvexityCertificate cert{Mode::A2, std::move(lambda),
                              FreePolynomial::zero(1, d, mu), Matrix::Zero(1, 1),
                              0.0, 0.0};
    cert.residual = verify_certificate(p, cert);
    return finalize(p, cert);
  }

  const BorderMiddleForm form = border_middle_decompose(quad);
  const FreePolynomial zmat = form.middle_polynomial();
  const int s = mu * form.N() * d;
  const int zdeg = std::max(zmat.degree(), 0);
  const int g = opts.sos_degree >= 0 ? opts.sos_degree : (zdeg + 1) / 2;
  const std::vector<Word> basis = enumerate_monomials(mu, g);

  SdpProblem prob = make_problem(static_cast<int>(basis.size()) * s, opts);
  if (auto err = build_gram_constraints(zmat, basis, &prob))
    return make_failure(FailureKind::NotCertified, "middle matrix: " + *err);
  SdpOutcome out = solve_feasibility(prob);
  if (out.status != SdpStatus::Feasible) {
    CertifyFailure f = make_failure(
        FailureKind::NotCertified,
        "no positive semidefinite factorization of the middle matrix was found");
    f.sdp = std::move(out);
    return f;
  }
  if (out.min_eigenvalue < -1e-8) {
    std::ostringstream msg;
    msg << "certificate rejected on recheck: gram min eigenvalue " << out.min_eigenvalue;
    return make_failure(FailureKind::VerificationFailed, msg.str());
  }

  const double ftol =
      std::max(10.0 * prob.tol, -2.0 * std::min(0.0, out.min_eigenvalue));
  const Matrix f = psd_factor(out.Q, ftol);
  const FreePolynomial factor = factor_polynomial(f, basis, s, s, mu);
  FreePolynomial Lambda = factor * form.border_polynomial();

  ConvexityCertificate cert{Mode::A2,           std::move(lambda),
                            std::move(Lambda),  std::move(out.Q),
                            out.min_eigenvalue, 0.0};
  cert.residual = verify_certificate(p, cert);
  return finalize(p, cert);
}

namespace {

FreePolynomial pencil_part(const FreePolynomial& p) {
  FreePolynomial out(p.rows(), p.cols(), p.mu());
  for (const auto& [w, c] : p.terms())
    if (w.degree(VarClass::First) <= 1 && w.degree(VarClass::Second) <= 1)
      out.add_term(w, c);
  return out;
}

Word letter(VarClass cls, int index) { return Word({{cls, index}}); }

}  // namespace

CertifyResult certify_xy(const FreePolynomial& p, const CertifyOptions& opts) {
  require_hermitian_input(p, "certify_xy");
  const int d = p.rows();
  const int mu = p.mu();

  const ExclusionReport ex = exclusion_check(p);
  if (!ex.passes) {
    CertifyFailure f = make_failure(
        FailureKind::Structural,
        "words outside the jointly certifiable span are present; joint convexity fails");
    f.offending_words = ex.offending_words;
    return f;
  }

  const FreePolynomial pencil = pencil_part(p);
  const FreePolynomial qx = hessian_part(p, VarClass::First);
  const FreePolynomial qy = hessian_part(p, VarClass::Second);

  std::vector<Word> vwords;
  for (int j = 1; j <= mu; ++j)
    for (int k = 1; k <= mu; ++k)
      vwords.push_back(letter(VarClass::First, j).concat(letter(VarClass::Second, k)));
  for (int k = 1; k <= mu; ++k)
    for (int j = 1; j <= mu; ++j)
      vwords.push_back(letter(VarClass::Second, k).concat(letter(VarClass::First, j)));

  std::vector<Word> xbasis;
  for (int j = 1; j <= mu; ++j) xbasis.push_back(letter(VarClass::First, j));
  xbasis.insert(xbasis.end(), vwords.begin(), vwords.end());
  std::vector<Word> ybasis = vwords;
  for (int k = 1; k <= mu; ++k) ybasis.push_back(letter(VarClass::Second, k));

  auto solve_gram = [&](const FreePolynomial& target, const std::vector<Word>& basis,
                        const char* which) -> std::variant<Matrix, CertifyFailure> {
    SdpProblem prob = make_problem(static_cast<int>(basis.size()) * d, opts);
    if (auto err = build_gram_constraints(target, basis, &prob))
      return make_failure(FailureKind::NotCertified, std::string(which) + ": " + *err);
    SdpOutcome out = solve_feasibility(prob);
    if (out.status != SdpStatus::Feasible) {
      CertifyFailure f = make_failure(
          FailureKind::NotCertified,
          std::string(which) + " admits no positive semidefinite factorization");
      f.sdp = std::move(out);
      return f;
    }
    return std::move(out.Q);
  };

  auto gx = solve_gram(qx, xbasis, "first-class quadratic part");
  if (std::holds_alternative<CertifyFailure>(gx))
    return std::get<CertifyFailure>(std::move(gx));
  auto gy = solve_gram(qy, ybasis, "second-class quadratic part");
  if (std::holds_alternative<CertifyFailure>(gy))
    return std::get<CertifyFailure>(std::move(gy));

  const Matrix& Gx = std::get<Matrix>(gx);
  const Matrix& Gy = std::get<Matrix>(gy);
  const int nx = mu * d;
  const int nv = 2 * mu * mu * d;
  const int ny = mu * d;
  const Matrix A = Gx.topLeftCorner(nx, nx);
  const Matrix B = Gx.topRightCorner(nx, nv);
  const Matrix C = Gx.bottomRightCorner(nv, nv);
  const Matrix D = Gy.topRightCorner(nv, ny);
  const Matrix E = Gy.bottomRightCorner(ny, ny);

  Matrix corner;
  try {
    corner = psd_complete(A, B, C, D, E);
  } catch (const std::exception& e) {
    return make_failure(FailureKind::NotCertified,
                        std::string("corner completion failed: ") + e.what());
  }

  const int dim = nx + nv + ny;
  Matrix mhat(dim, dim);
  mhat << A, B, corner, B.adjoint(), C, D, corner.adjoint(), D.adjoint(), E;
  mhat = hermitize(mhat);
  const double gmin = min_eig(mhat);
  if (gmin < -1e-8) {
    std::ostringstream msg;
    msg << "certificate rejected on recheck: gram min eigenvalue " << gmin;
    return make_failure(FailureKind::VerificationFailed, msg.str());
  }

  FreePolynomial lambda = pencil;
  for (int j = 1; j <= mu; ++j)
    for (int k = 1; k <= mu; ++k) {
      const Matrix blk = corner.block((j - 1) * d, (k - 1) * d, d, d);
      lambda.add_term(letter(VarClass::First, j).concat(letter(VarClass::Second, k)),
                      -blk);
      lambda.add_term(letter(VarClass::Second, k).concat(letter(VarClass::First, j)),
                      -blk.adjoint());
    }

  std::vector<Word> wbasis = xbasis;
  for (int k = 1; k <= mu; ++k) wbasis.push_back(letter(VarClass::Second, k));
  const double ftol =
      std::max(10.0 * sdp_search_tol(opts), -2.0 * std::min(0.0, gmin));
  const Matrix f = psd_factor(mhat, ftol);
  FreePolynomial Lambda = factor_polynomial(f, wbasis, d, d, mu);

  ConvexityCertificate cert{Mode::XY, std::move(lambda), std::move(Lambda),
                            std::move(mhat), gmin, 0.0};
  cert.residual = verify_certificate(p, cert);
  return finalize(p, cert);
}

CertifyResult certify_xy_sdp_mu1(const FreePolynomial& p, const CertifyOptions& opts) {
  if (p.mu() != 1)
    throw std::invalid_argument("certify_xy_sdp_mu1: only mu == 1 is supported");
  require_hermitian_input(p, "certify_xy_sdp_mu1");
  const int d = p.rows();

  const ExclusionReport ex = exclusion_check(p);
  if (!ex.passes) {
    CertifyFailure f = make_failure(
        FailureKind::Structural,
        "words outside the jointly certifiable span are present; joint convexity fails");
    f.offending_words = ex.offending_words;
    return f;
  }

  const Word wx = letter(VarClass::First, 1);
  const Word wy = letter(VarClass::Second, 1);
  const Word wxy = wx.concat(wy);
  const Word wyx = wy.concat(wx);
  const std::vector<Word> basis = {wx, wy, wxy, wyx};

  // Words with a class at degree two must come out of the Gram product;
  // the mixed degree-one products stay free and are absorbed into lambda.
  FreePolynomial target(d, d, 1);
  for (const auto& [w, c] : p.terms())
    if (w.degree(VarClass::First) > 1 || w.degree(VarClass::Second) > 1)
      target.add_term(w, c);
  const std::set<Word> free_words = {wxy, wyx};

  SdpProblem prob = make_problem(4 * d, opts);
  if (auto err = build_gram_constraints(target, basis, &prob, &free_words))
    return make_failure(FailureKind::NotCertified, *err);
  SdpOutcome out = solve_feasibility(prob);
  if (out.status != SdpStatus::Feasible) {
    CertifyFailure f = make_failure(
        FailureKind::NotCertified,
        "no positive semidefinite factorization over (x, y, xy, yx) was found");
    f.sdp = std::move(out);
    return f;
  }
  if (out.min_eigenvalue < -1e-8) {
    std::ostringstream msg;
    msg << "certificate rejected on recheck: gram min eigenvalue " << out.min_eigenvalue;
    return make_failure(FailureKind::VerificationFailed, msg.str());
  }

  FreePolynomial quadratic(d, d, 1);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      const Matrix blk = out.Q.block(i * d, j * d, d, d);
      if (blk.norm() != 0.0) quadratic.add_term(product_word(basis[i], basis[j]), blk);
    }
  const FreePolynomial diff = p - quadratic;
  FreePolynomial lambda(d, d, 1);
  double spill = 0.0;
  for (const auto& [w, c] : diff.terms()) {
    if (w.degree(VarClass::First) <= 1 && w.degree(VarClass::Second) <= 1)
      lambda.add_term(w, c);
    else
      spill += c.norm();
  }
  if (spill > 2e-9 * input_scale(p)) {
    std::ostringstream msg;
    msg << "certificate rejected on recheck: residue of mass " << spill
        << " outside the pencil span";
    return make_failure(FailureKind::VerificationFailed, msg.str());
  }

  const double ftol =
      std::max(10.0 * prob.tol, -2.0 * std::min(0.0, out.min_eigenvalue));
  const Matrix f = psd_factor(out.Q, ftol);
  FreePolynomial Lambda = factor_polynomial(f, basis, d, d, 1);

  ConvexityCertificate cert{Mode::XY,           std::move(lambda),
                            std::move(Lambda),  std::move(out.Q),
                            out.min_eigenvalue, 0.0};
  cert.residual = verify_certificate(p, cert);
  return finalize(p, cert);
}

double verify_certificate(const FreePolynomial& p, const ConvexityCertificate& cert) {
  if (p.rows() != p.cols())
    throw std::invalid_argument("verify_certificate: polynomial must be square");
  const int d = p.rows();
  if (cert.lambda.rows() != d || cert.lambda.cols() != d)
    throw std::invalid_argument("verify_certificate: lambda shape mismatch");
  if (cert.Lambda.cols() != d)
    throw std::invalid_argument("verify_certificate: Lambda must have d columns");
  if (cert.lambda.mu() != p.mu() || cert.Lambda.mu() != p.mu())
    throw std::invalid_argument("verify_certificate: variable count mismatch");
  if (cert.mode == Mode::A2) {
    if (cert.lambda.degree_in_class(VarClass::Second) > 1)
      throw std::invalid_argument(
          "verify_certificate: lambda must be affine in the second class");
    for (const auto& [w, c] : cert.Lambda.terms())
      if (w.degree(VarClass::Second) != 1)
        throw std::invalid_argument(
            "verify_certificate: Lambda words must be linear in the second class");
  } else {
    if (cert.lambda.degree_in_class(VarClass::First) > 1 ||
        cert.lambda.degree_in_class(VarClass::Second) > 1)
      throw std::invalid_argument(
          "verify_certificate: lambda must have degree at most one in each class");
    for (const auto& [w, c] : cert.Lambda.terms())
      if (w.empty() || w.degree(VarClass::First) > 1 || w.degree(VarClass::Second) > 1)
        throw std::invalid_argument(
            "verify_certificate: Lambda words must be constant-free of degree at most one in each class");
  }
  const FreePolynomial recon = cert.lambda + cert.Lambda.adjoint() * cert.Lambda;
  return coeff_distance(p, recon);
}

SchurPencil schur_pencil(const ConvexityCertificate& cert) {
  const int n = cert.Lambda.rows();
  const int d = cert.lambda.rows();
  const int mu = cert.lambda.mu();
  FreePolynomial block(n + d, n + d, mu);
  Matrix top = Matrix::Zero(n + d, n + d);
  top.topLeftCorner(n, n) = Matrix::Identity(n, n);
  block.add_term(Word::identity(), top);
  for (const auto& [w, c] : cert.Lambda.terms()) {
    Matrix right = Matrix::Zero(n + d, n + d);
    right.block(0, n, n, d) = c;
    block.add_term(w, right);
    Matrix low = Matrix::Zero(n + d, n + d);
    low.block(n, 0, d, n) = c.adjoint();
    block.add_term(w.reversed(), low);
  }
  for (const auto& [w, c] : cert.lambda.terms()) {
    Matrix corner = Matrix::Zero(n + d, n + d);
    corner.block(n, n, d, d) = -c;
    block.add_term(w, corner);
  }
  return SchurPencil{std::move(block), n, d};
}

}  // namespace ncconvex
