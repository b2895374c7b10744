#include "ncconvex/ncpoly.hpp"

#include <algorithm>
#include <sstream>

#include "ncconvex/linalg.hpp"

namespace ncconvex {

int Word::degree(VarClass c) const {
  int deg = 0;
  for (const auto& v : letters_)
    if (v.cls == c) ++deg;
  return deg;
}

Word Word::reversed() const {
  std::vector<Variable> rev(letters_.rbegin(), letters_.rend());
  return Word(std::move(rev));
}

Word Word::concat(const Word& rhs) const {
  std::vector<Variable> out = letters_;
  out.insert(out.end(), rhs.letters_.begin(), rhs.letters_.end());
  return Word(std::move(out));
}

std::strong_ordering operator<=>(const Word& a, const Word& b) {
  if (a.length() != b.length()) return a.length() <=> b.length();
  for (std::size_t i = 0; i < a.length(); ++i) {
    auto c = a.letters_[i] <=> b.letters_[i];
    if (c != std::strong_ordering::equal) return c;
  }
  return std::strong_ordering::equal;
}

namespace {

void check_assignment_matrix(const Matrix& m, int n, bool hermitian_required,
                             const Variable& var) {
  if (m.rows() != n || m.cols() != n)
    throw std::invalid_argument("evaluation point: assignment has wrong size");
  if (hermitian_required) {
    const double scale = m.norm();
    if ((m - m.adjoint()).norm() > 1e-10 * std::max(1.0, scale)) {
      std::ostringstream os;
      os << "evaluation point: assignment for "
         << (var.cls == VarClass::First ? "first" : "second") << "-class variable "
         << var.index << " is not hermitian";
      throw std::invalid_argument(os.str());
    }
  }
}

}  // namespace

EvaluationPoint::EvaluationPoint(int n_, std::map<Variable, Matrix> assignments_,
                                 bool hermitian_first_, bool hermitian_second_)
    : n(n_),
      assignments(std::move(assignments_)),
      hermitian_first(hermitian_first_),
      hermitian_second(hermitian_second_) {
  if (n <= 0) throw std::invalid_argument("evaluation point: n must be positive");
  for (const auto& [var, m] : assignments) {
    const bool herm = var.cls == VarClass::First ? hermitian_first : hermitian_second;
    check_assignment_matrix(m, n, herm, var);
  }
}

EvaluationPoint EvaluationPoint::from_tuples(const std::vector<Matrix>& first,
                                             const std::vector<Matrix>& second,
                                             bool hermitian_first,
                                             bool hermitian_second) {
  int n = 0;
  if (!first.empty())
    n = static_cast<int>(first.front().rows());
  else if (!second.empty())
    n = static_cast<int>(second.front().rows());
  std::map<Variable, Matrix> a;
  for (std::size_t j = 0; j < first.size(); ++j)
    a[{VarClass::First, static_cast<int>(j) + 1}] = first[j];
  for (std::size_t k = 0; k < second.size(); ++k)
    a[{VarClass::Second, static_cast<int>(k) + 1}] = second[k];
  return {n, std::move(a), hermitian_first, hermitian_second};
}

FreePolynomial::FreePolynomial(int rows, int cols, int mu)
    : rows_(rows), cols_(cols), mu_(mu) {
  if (rows <= 0 || cols <= 0)
    throw std::invalid_argument("polynomial: rows and cols must be positive");
  if (mu <= 0) throw std::invalid_argument("polynomial: mu must be positive");
}

FreePolynomial FreePolynomial::constant(const Matrix& c, int mu) {
  FreePolynomial p(static_cast<int>(c.rows()), static_cast<int>(c.cols()), mu);
  p.add_term(Word::identity(), c);
  return p;
}

FreePolynomial FreePolynomial::monomial(const Matrix& coeff, const Word& w, int mu) {
  FreePolynomial p(static_cast<int>(coeff.rows()), static_cast<int>(coeff.cols()), mu);
  p.add_term(w, coeff);
  return p;
}

FreePolynomial FreePolynomial::variable(VarClass cls, int index, int mu) {
  FreePolynomial p(1, 1, mu);
  p.add_term(Word({{cls, index}}), Matrix::Ones(1, 1));
  return p;
}

FreePolynomial FreePolynomial::identity(int d, int mu) {
  return constant(Matrix::Identity(d, d), mu);
}

void FreePolynomial::add_term(const Word& w, const Matrix& coeff) {
  if (coeff.rows() != rows_ || coeff.cols() != cols_)
    throw std::invalid_argument("polynomial: coefficient has wrong shape");
  for (const auto& v : w.letters())
    if (v.index < 1 || v.index > mu_)
      throw std::invalid_argument("polynomial: variable index out of range");
  if (coeff.isZero(0.0)) return;
  auto [it, inserted] = terms_.try_emplace(w, coeff);
  if (!inserted) {
    it->second += coeff;
    if (it->second.isZero(0.0)) terms_.erase(it);
  }
}

Matrix FreePolynomial::coefficient(const Word& w) const {
  auto it = terms_.find(w);
  if (it == terms_.end()) return Matrix::Zero(rows_, cols_);
  return it->second;
}

int FreePolynomial::degree() const {
  int deg = kNoDegree;
  for (const auto& [w, c] : terms_) deg = std::max(deg, static_cast<int>(w.length()));
  return deg;
}

int FreePolynomial::degree_in_class(VarClass c) const {
  int deg = kNoDegree;
  for (const auto& [w, coeff] : terms_) deg = std::max(deg, w.degree(c));
  return deg;
}

bool FreePolynomial::is_hermitian(double tol) const {
  if (rows_ != cols_) return false;
  for (const auto& [w, coeff] : terms_) {
    const Matrix mirror = coefficient(w.reversed());
    if ((coeff - mirror.adjoint()).cwiseAbs().maxCoeff() > tol) return false;
  }
  return true;
}

FreePolynomial FreePolynomial::adjoint() const {
  FreePolynomial out(cols_, rows_, mu_);
  for (const auto& [w, coeff] : terms_) out.add_term(w.reversed(), coeff.adjoint());
  return out;
}

FreePolynomial FreePolynomial::homogeneous_part(VarClass c, int k) const {
  FreePolynomial out(rows_, cols_, mu_);
  for (const auto& [w, coeff] : terms_)
    if (w.degree(c) == k) out.add_term(w, coeff);
  return out;
}

FreePolynomial FreePolynomial::scaled(Complex s) const {
  FreePolynomial out(rows_, cols_, mu_);
  if (s == Complex(0.0, 0.0)) return out;
  for (const auto& [w, coeff] : terms_) out.add_term(w, s * coeff);
  return out;
}

FreePolynomial FreePolynomial::normalized(double eps) const {
  FreePolynomial out(rows_, cols_, mu_);
  for (const auto& [w, coeff] : terms_) {
    Matrix c = coeff;
    for (Eigen::Index i = 0; i < c.rows(); ++i)
      for (Eigen::Index j = 0; j < c.cols(); ++j)
        if (std::abs(c(i, j)) < eps) c(i, j) = Complex(0.0, 0.0);
    out.add_term(w, c);
  }
  return out;
}

void FreePolynomial::check_compatible(const FreePolynomial& other, const char* op) const {
  if (mu_ != other.mu_)
    throw std::invalid_argument(std::string("polynomial ") + op + ": mu mismatch");
}

FreePolynomial operator+(const FreePolynomial& a, const FreePolynomial& b) {
  a.check_compatible(b, "add");
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
    throw std::invalid_argument("polynomial add: shape mismatch");
  FreePolynomial out = a;
  for (const auto& [w, coeff] : b.terms_) out.add_term(w, coeff);
  return out;
}

FreePolynomial operator-(const FreePolynomial& a, const FreePolynomial& b) {
  return a + b.scaled(-1.0);
}

FreePolynomial operator*(const FreePolynomial& a, const FreePolynomial& b) {
  a.check_compatible(b, "mul");
  if (a.cols_ != b.rows_)
    throw std::invalid_argument("polynomial mul: inner dimensions differ");
  FreePolynomial out(a.rows_, b.cols_, a.mu_);
  for (const auto& [u, cu] : a.terms_)
    for (const auto& [v, cv] : b.terms_) out.add_term(u.concat(v), cu * cv);
  return out;
}

bool operator==(const FreePolynomial& a, const FreePolynomial& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_ || a.mu_ != b.mu_) return false;
  if (a.terms_.size() != b.terms_.size()) return false;
  auto ia = a.terms_.begin();
  auto ib = b.terms_.begin();
  for (; ia != a.terms_.end(); ++ia, ++ib) {
    if (ia->first != ib->first) return false;
    if (ia->second != ib->second) return false;
  }
  return true;
}

Matrix word_value(const Word& w, const EvaluationPoint& pt) {
  Matrix prod = Matrix::Identity(pt.n, pt.n);
  for (const auto& v : w.letters()) {
    auto it = pt.assignments.find(v);
    if (it == pt.assignments.end())
      throw std::invalid_argument("evaluate: missing assignment for a variable");
    prod = prod * it->second;
  }
  return prod;
}

Matrix evaluate(const FreePolynomial& p, const EvaluationPoint& pt) {
  Matrix out = Matrix::Zero(p.rows() * pt.n, p.cols() * pt.n);
  for (const auto& [w, coeff] : p.terms())
    out += kron(coeff, word_value(w, pt));
  return out;
}

double max_abs_coeff(const FreePolynomial& p) {
  double m = 0.0;
  for (const auto& [w, coeff] : p.terms())
    m = std::max(m, coeff.cwiseAbs().maxCoeff());
  return m;
}

double coeff_distance(const FreePolynomial& a, const FreePolynomial& b) {
  double m = 0.0;
  for (const auto& [w, coeff] : a.terms())
    m = std::max(m, (coeff - b.coefficient(w)).cwiseAbs().maxCoeff());
  for (const auto& [w, coeff] : b.terms())
    m = std::max(m, (coeff - a.coefficient(w)).cwiseAbs().maxCoeff());
  return m;
}

}  // namespace ncconvex
