#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ncconvex/ncpoly.hpp"
#include "ncconvex/sdp.hpp"

namespace ncconvex {

enum class FailureKind { DegreeBound, Structural, NotCertified, VerificationFailed };

// Algebraic witness p = lambda + Lambda* Lambda with lambda a pencil of the
// mode's shape and gram the PSD coefficient matrix the factor Lambda came
// from. Wherever the associated Schur pencil is PSD, p is <= 0.
struct ConvexityCertificate {
  Mode mode = Mode::A2;
  FreePolynomial lambda;   // d x d hermitian; affine linear in Second (A2),
                           // degree <= 1 in each class (XY)
  FreePolynomial Lambda;   // N x d; linear in Second (A2), constant-free
                           // words of degree <= 1 in each class (XY)
  Matrix gram;
  double gram_min_eig = 0.0;
  double residual = 0.0;   // max coefficient of p - lambda - Lambda* Lambda
};

struct CertifyFailure {
  FailureKind kind = FailureKind::NotCertified;
  std::string message;
  std::vector<Word> offending_words;     // Structural only
  std::optional<SdpOutcome> sdp;         // NotCertified diagnostics
};

using CertifyResult = std::variant<ConvexityCertificate, CertifyFailure>;

bool certified(const CertifyResult& r);
const ConvexityCertificate& certificate(const CertifyResult& r);
const CertifyFailure& failure(const CertifyResult& r);

struct CertifyOptions {
  // Gram searches run at min(tol, 1e-10) so emitted certificates meet the
  // 1e-8 residual / gram bounds regardless of the caller's feasibility tol.
  double tol = 1e-6;
  int max_iters = 200000;
  int sos_degree = -1;  // middle-matrix Gram basis degree override (A2); -1 = ceil(deg/2)
};

// Convexity in the Second class with the First class frozen. Requires p
// hermitian. DegreeBound if deg_Second p > 2 (a definitive negative);
// otherwise splits p = L + q, puts q in border/middle form and searches a
// Gram factorization Z = W* G W of the middle matrix.
CertifyResult certify_a2(const FreePolynomial& p, const CertifyOptions& opts = {});

// Joint convexity in both classes. Structural failure if the exclusion check
// fails (definitive negative). Otherwise factors both partial Hessians over
// the degree-(1,1) mixed words, completes the missing corner and assembles
// p = lambda + Lambda* Lambda.
CertifyResult certify_xy(const FreePolynomial& p, const CertifyOptions& opts = {});

// mu = 1 only (throws otherwise): one Gram search over the basis
// (x, y, xy, yx) with the cross block left free; lambda is recovered by
// subtraction and must come out with degree <= 1 in each class.
CertifyResult certify_xy_sdp_mu1(const FreePolynomial& p, const CertifyOptions& opts = {});

// Recomputes the residual of p - lambda - Lambda* Lambda and re-checks the
// mode's degree shape; throws std::invalid_argument on shape violations.
double verify_certificate(const FreePolynomial& p, const ConvexityCertificate& cert);

// [[I_N, Lambda], [Lambda*, -lambda]]. PSD at an evaluation point forces
// p <= 0 there (Schur complement).
struct SchurPencil {
  FreePolynomial block;  // (N + d) square
  int N = 0;
  int d = 0;
};

SchurPencil schur_pencil(const ConvexityCertificate& cert);

}  // namespace ncconvex
