#include "ncconvex/structure.hpp"

#include <algorithm>
#include <map>

#include "ncconvex/linalg.hpp"

namespace ncconvex {

std::vector<Word> enumerate_monomials(int mu, int d_a) {
  if (mu <= 0 || d_a < 0)
    throw std::invalid_argument("enumerate_monomials: bad arguments");
  std::vector<Word> out;
  out.push_back(Word::identity());
  std::vector<Word> level = {Word::identity()};
  for (int len = 1; len <= d_a; ++len) {
    std::vector<Word> next;
    next.reserve(level.size() * mu);
    for (const auto& w : level)
      for (int j = 1; j <= mu; ++j)
        next.push_back(w.concat(Word({{VarClass::First, j}})));
    out.insert(out.end(), next.begin(), next.end());
    level = std::move(next);
  }
  return out;
}

const FreePolynomial& BorderMiddleForm::z(int j, int r, int k, int t) const {
  const int n = N();
  const int row = (j - 1) * n + (r - 1);
  const int col = (k - 1) * n + (t - 1);
  return middle[static_cast<std::size_t>(row) * (mu * n) + col];
}

FreePolynomial& BorderMiddleForm::z(int j, int r, int k, int t) {
  const int n = N();
  const int row = (j - 1) * n + (r - 1);
  const int col = (k - 1) * n + (t - 1);
  return middle[static_cast<std::size_t>(row) * (mu * n) + col];
}

FreePolynomial BorderMiddleForm::middle_polynomial() const {
  const int n = N();
  const int s = mu * n * d;
  FreePolynomial big(s, s, mu);
  for (int row = 0; row < mu * n; ++row)
    for (int col = 0; col < mu * n; ++col) {
      const FreePolynomial& blk = middle[static_cast<std::size_t>(row) * (mu * n) + col];
      for (const auto& [w, coeff] : blk.terms()) {
        Matrix c = Matrix::Zero(s, s);
        c.block(row * d, col * d, d, d) = coeff;
        big.add_term(w, c);
      }
    }
  return big;
}

FreePolynomial BorderMiddleForm::border_polynomial() const {
  const int n = N();
  const int s = mu * n * d;
  FreePolynomial border(s, d, mu);
  for (int k = 1; k <= mu; ++k)
    for (int t = 1; t <= n; ++t) {
      Word w = Word({{VarClass::Second, k}}).concat(monomials[t - 1]);
      Matrix c = Matrix::Zero(s, d);
      c.block(((k - 1) * n + (t - 1)) * d, 0, d, d) = Matrix::Identity(d, d);
      border.add_term(w, c);
    }
  return border;
}

namespace {

struct SplitWord {
  Word prefix_reversed, inner, suffix;
  int j, k;
};

SplitWord split_on_second(const Word& w) {
  const auto& ls = w.letters();
  int first = -1, last = -1;
  for (std::size_t i = 0; i < ls.size(); ++i) {
    if (ls[i].cls == VarClass::Second) {
      if (first < 0) first = static_cast<int>(i);
      last = static_cast<int>(i);
    }
  }
  SplitWord s;
  s.j = ls[first].index;
  s.k = ls[last].index;
  s.prefix_reversed =
      Word(std::vector<Variable>(ls.begin(), ls.begin() + first)).reversed();
  s.inner = Word(std::vector<Variable>(ls.begin() + first + 1, ls.begin() + last));
  s.suffix = Word(std::vector<Variable>(ls.begin() + last + 1, ls.end()));
  return s;
}

}  // namespace

BorderMiddleForm border_middle_decompose(const FreePolynomial& q) {
  if (q.rows() != q.cols())
    throw std::invalid_argument("border_middle_decompose: q must be square");
  if (!(q.homogeneous_part(VarClass::Second, 2) == q))
    throw std::invalid_argument(
        "border_middle_decompose: q is not homogeneous of degree two in the "
        "Second class");

  BorderMiddleForm form;
  form.d = q.rows();
  form.mu = q.mu();
  form.d_a = std::max(0, q.degree_in_class(VarClass::First));
  form.monomials = enumerate_monomials(form.mu, form.d_a);

  const int n = form.N();
  std::map<Word, int> index;
  for (int i = 0; i < n; ++i) index[form.monomials[i]] = i + 1;

  form.middle.assign(static_cast<std::size_t>(form.mu) * n * form.mu * n,
                     FreePolynomial(form.d, form.d, form.mu));

  for (const auto& [w, coeff] : q.terms()) {
    const SplitWord s = split_on_second(w);
    form.z(s.j, index.at(s.prefix_reversed), s.k, index.at(s.suffix))
        .add_term(s.inner, coeff);
  }
  return form;
}

FreePolynomial reconstruct(const BorderMiddleForm& form) {
  const int n = form.N();
  FreePolynomial q(form.d, form.d, form.mu);
  for (int j = 1; j <= form.mu; ++j)
    for (int r = 1; r <= n; ++r)
      for (int k = 1; k <= form.mu; ++k)
        for (int t = 1; t <= n; ++t) {
          const FreePolynomial& blk = form.z(j, r, k, t);
          for (const auto& [inner, coeff] : blk.terms()) {
            Word w = form.monomials[r - 1]
                         .reversed()
                         .concat(Word({{VarClass::Second, j}}))
                         .concat(inner)
                         .concat(Word({{VarClass::Second, k}}))
                         .concat(form.monomials[t - 1]);
            q.add_term(w, coeff);
          }
        }
  return q;
}

namespace {

Matrix first_word_value(const Word& w, const std::vector<Matrix>& A, int n) {
  Matrix prod = Matrix::Identity(n, n);
  for (const auto& v : w.letters()) {
    if (v.cls != VarClass::First)
      throw std::invalid_argument("border evaluation: monomial has a Second letter");
    prod = prod * A[static_cast<std::size_t>(v.index) - 1];
  }
  return prod;
}

}  // namespace

Matrix evaluate_border_vector(const BorderMiddleForm& form,
                              const std::vector<Matrix>& A,
                              const std::vector<Matrix>& beta) {
  if (static_cast<int>(A.size()) != form.mu || static_cast<int>(beta.size()) != form.mu)
    throw std::invalid_argument("evaluate_border_vector: tuple sizes must equal mu");
  const int n = static_cast<int>(A.empty() ? 0 : A.front().rows());
  const int m = static_cast<int>(beta.front().cols());
  for (const auto& a : A)
    if (a.rows() != n || a.cols() != n)
      throw std::invalid_argument("evaluate_border_vector: A sizes differ");
  for (const auto& b : beta)
    if (b.rows() != n || b.cols() != m)
      throw std::invalid_argument("evaluate_border_vector: beta must be n x m");

  const int N = form.N();
  const int d = form.d;
  Matrix out = Matrix::Zero(static_cast<Eigen::Index>(form.mu) * N * d * m,
                            static_cast<Eigen::Index>(d) * n);
  const Matrix id = Matrix::Identity(d, d);
  for (int k = 1; k <= form.mu; ++k)
    for (int t = 1; t <= N; ++t) {
      const Matrix block = kron(
          id, beta[static_cast<std::size_t>(k) - 1].adjoint() *
                  first_word_value(form.monomials[t - 1], A, n));
      out.block(((static_cast<Eigen::Index>(k) - 1) * N + (t - 1)) * d * m, 0,
                static_cast<Eigen::Index>(d) * m, static_cast<Eigen::Index>(d) * n) =
          block;
    }
  return out;
}

Matrix evaluate_middle(const BorderMiddleForm& form,
                       const std::vector<Matrix>& alpha) {
  if (static_cast<int>(alpha.size()) != form.mu)
    throw std::invalid_argument("evaluate_middle: tuple size must equal mu");
  const int m = static_cast<int>(alpha.front().rows());
  const int N = form.N();
  const int d = form.d;
  const int block_dim = d * m;
  Matrix out = Matrix::Zero(static_cast<Eigen::Index>(form.mu) * N * block_dim,
                            static_cast<Eigen::Index>(form.mu) * N * block_dim);
  EvaluationPoint pt = EvaluationPoint::from_tuples(alpha, {});
  for (int row = 0; row < form.mu * N; ++row)
    for (int col = 0; col < form.mu * N; ++col) {
      const FreePolynomial& blk =
          form.middle[static_cast<std::size_t>(row) * (form.mu * N) + col];
      if (blk.is_zero()) continue;
      out.block(static_cast<Eigen::Index>(row) * block_dim,
                static_cast<Eigen::Index>(col) * block_dim, block_dim, block_dim) =
          evaluate(blk, pt);
    }
  return out;
}

FreePolynomial hessian_part(const FreePolynomial& p, VarClass c) {
  if (p.degree_in_class(c) > 2)
    throw std::invalid_argument("hessian_part: polynomial has degree > 2 in the class");
  return p.homogeneous_part(c, 2);
}

ExclusionReport exclusion_check(const FreePolynomial& p) {
  ExclusionReport report;
  for (const auto& [w, coeff] : p.terms()) {
    bool offending = w.degree(VarClass::First) > 2 || w.degree(VarClass::Second) > 2;
    if (!offending && w.length() == 4) {
      const auto& ls = w.letters();
      const bool ffss = ls[0].cls == VarClass::First && ls[1].cls == VarClass::First &&
                        ls[2].cls == VarClass::Second && ls[3].cls == VarClass::Second;
      const bool ssff = ls[0].cls == VarClass::Second && ls[1].cls == VarClass::Second &&
                        ls[2].cls == VarClass::First && ls[3].cls == VarClass::First;
      offending = ffss || ssff;
    }
    if (offending) report.offending_words.push_back(w);
  }
  report.passes = report.offending_words.empty();
  return report;
}

}  // namespace ncconvex
