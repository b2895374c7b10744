#include "ncconvex/generic.hpp"

#include <Eigen/SVD>
#include <stdexcept>

namespace ncconvex {

namespace {

// All words over an alphabet of g letters with length <= m, graded lex.
// Encoded over VarClass::First with indices 1..g.
std::vector<Word> words_up_to(int g, int m) {
  std::vector<Word> out;
  out.push_back(Word::identity());
  std::vector<Word> level = {Word::identity()};
  for (int len = 1; len <= m; ++len) {
    std::vector<Word> next;
    next.reserve(level.size() * static_cast<std::size_t>(g));
    for (const auto& w : level)
      for (int j = 1; j <= g; ++j) next.push_back(w.concat(Word({{VarClass::First, j}})));
    out.insert(out.end(), next.begin(), next.end());
    level = std::move(next);
  }
  return out;
}

}  // namespace

ShiftTuple amitsur_tuple(int mu, int m) {
  if (mu <= 0 || m < 0) throw std::invalid_argument("amitsur_tuple: bad arguments");
  ShiftTuple out;
  out.basis = words_up_to(mu, m);
  const int N = static_cast<int>(out.basis.size());

  std::map<Word, int> index;
  for (int i = 0; i < N; ++i) index[out.basis[i]] = i;

  out.T.assign(static_cast<std::size_t>(mu), Matrix::Zero(N, N));
  for (int i = 0; i < N; ++i) {
    const Word& w = out.basis[i];
    if (static_cast<int>(w.length()) == m) continue;  // shift truncates here
    for (int j = 1; j <= mu; ++j) {
      const Word shifted = Word({{VarClass::First, j}}).concat(w);
      const int target = index.at(shifted);
      out.T[static_cast<std::size_t>(j) - 1](target, i) += 1.0;  // S_j
      out.T[static_cast<std::size_t>(j) - 1](i, target) += 1.0;  // S_j*
    }
  }
  out.v = Vector::Zero(N);
  out.v(0) = 1.0;
  return out;
}

int word_vector_rank(const std::vector<Matrix>& A, const Vector& v, int kappa) {
  if (A.empty()) throw std::invalid_argument("word_vector_rank: empty tuple");
  const int g = static_cast<int>(A.size());
  const auto n = v.size();
  for (const auto& a : A)
    if (a.rows() != n || a.cols() != n)
      throw std::invalid_argument("word_vector_rank: size mismatch");

  std::vector<Vector> columns = {v};
  std::vector<Vector> level = {v};
  for (int len = 1; len <= kappa; ++len) {
    std::vector<Vector> next;
    next.reserve(level.size() * static_cast<std::size_t>(g));
    for (const auto& u : level)
      for (int j = 0; j < g; ++j) next.push_back(A[static_cast<std::size_t>(j)] * u);
    columns.insert(columns.end(), next.begin(), next.end());
    level = std::move(next);
  }

  Matrix M(n, static_cast<Eigen::Index>(columns.size()));
  for (std::size_t c = 0; c < columns.size(); ++c)
    M.col(static_cast<Eigen::Index>(c)) = columns[c];

  Eigen::JacobiSVD<Matrix> svd(M);
  const Eigen::VectorXd sv = svd.singularValues();
  if (sv.size() == 0) return 0;
  const double cutoff = 1e-10 * sv(0);
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > cutoff && sv(i) > 0.0) ++rank;
  return rank;
}

bool independence_check(const std::vector<Matrix>& A, const Vector& v, int kappa) {
  const int g = static_cast<int>(A.size());
  long expected = 0, power = 1;
  for (int j = 0; j <= kappa; ++j) {
    expected += power;
    power *= g;
  }
  return word_vector_rank(A, v, kappa) == expected;
}

bool is_zero_poly(const FreePolynomial& p) { return p.is_zero(); }

double shift_witness_norm(const FreePolynomial& p) {
  if (p.is_zero()) return 0.0;
  const int m = p.degree();
  ShiftTuple shift = amitsur_tuple(2 * p.mu(), std::max(m, 0));

  // Combined alphabet: First_i -> T_i, Second_i -> T_{mu+i}.
  std::map<Variable, Matrix> assign;
  for (int i = 1; i <= p.mu(); ++i) {
    assign[{VarClass::First, i}] = shift.T[static_cast<std::size_t>(i) - 1];
    assign[{VarClass::Second, i}] =
        shift.T[static_cast<std::size_t>(p.mu() + i) - 1];
  }
  EvaluationPoint pt(static_cast<int>(shift.v.size()), std::move(assign));
  const Matrix value = evaluate(p, pt);

  const auto N = shift.v.size();
  double best = 0.0;
  for (int gamma = 0; gamma < p.cols(); ++gamma) {
    Vector e = Vector::Zero(static_cast<Eigen::Index>(p.cols()) * N);
    e.segment(gamma * N, N) = shift.v;
    best = std::max(best, (value * e).norm());
  }
  return best;
}

}  // namespace ncconvex
