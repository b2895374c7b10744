#pragma once

#include <Eigen/Dense>
#include <compare>
#include <complex>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace ncconvex {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// Degree of the zero polynomial.
inline constexpr int kNoDegree = -1;

// Two disjoint families of freely noncommuting hermitian variables.
// In "a2" problems First plays the role of the frozen variables and Second
// the ones convexity is asked in; in "xy" problems they are the two classes
// convexity is asked in jointly.
enum class VarClass { First, Second };

// Input/report dialect: controls variable naming and which certification
// pipelines apply.
enum class Mode { A2, XY };

struct Variable {
  VarClass cls;
  int index;  // 1-based, <= mu of the ambient polynomial

  friend bool operator==(const Variable&, const Variable&) = default;
  // Letters are ordered by index, with First before Second at equal index.
  friend std::strong_ordering operator<=>(const Variable& a, const Variable& b) {
    if (a.index != b.index) return a.index <=> b.index;
    return a.cls <=> b.cls;
  }
};

// A word in the free monoid over both variable classes. The empty word is
// the monoid identity.
class Word {
 public:
  Word() = default;
  explicit Word(std::vector<Variable> letters) : letters_(std::move(letters)) {}

  static Word identity() { return Word{}; }

  std::size_t length() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }
  const std::vector<Variable>& letters() const { return letters_; }

  int degree(VarClass c) const;
  // Word reversal, the monoid part of the involution p -> p*.
  Word reversed() const;
  Word concat(const Word& rhs) const;

  friend bool operator==(const Word&, const Word&) = default;
  // Graded lexicographic: by length first, then letterwise.
  friend std::strong_ordering operator<=>(const Word& a, const Word& b);

 private:
  std::vector<Variable> letters_;
};

// Evaluation data: one n x n matrix per variable. Classes flagged hermitian
// are validated on construction.
struct EvaluationPoint {
  int n = 0;
  std::map<Variable, Matrix> assignments;
  bool hermitian_first = true;
  bool hermitian_second = true;

  EvaluationPoint() = default;
  EvaluationPoint(int n_, std::map<Variable, Matrix> assignments_,
                  bool hermitian_first_ = true, bool hermitian_second_ = true);

  // Tuple convenience: first[j] binds (First, j+1), second[k] binds (Second, k+1).
  static EvaluationPoint from_tuples(const std::vector<Matrix>& first,
                                     const std::vector<Matrix>& second,
                                     bool hermitian_first = true,
                                     bool hermitian_second = true);
};

// Matrix-valued polynomial in freely noncommuting variables: a finite sum
// sum_w p_w w with p_w complex rows x cols matrices. Exact-zero coefficients
// are never stored; arithmetic on exact inputs never prunes a nonzero.
class FreePolynomial {
 public:
  FreePolynomial(int rows, int cols, int mu);

  static FreePolynomial zero(int rows, int cols, int mu) { return {rows, cols, mu}; }
  static FreePolynomial constant(const Matrix& c, int mu);
  static FreePolynomial monomial(const Matrix& coeff, const Word& w, int mu);
  // Scalar (1x1, coefficient one) variable polynomial.
  static FreePolynomial variable(VarClass cls, int index, int mu);
  static FreePolynomial identity(int d, int mu);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int mu() const { return mu_; }
  const std::map<Word, Matrix>& terms() const { return terms_; }

  // Accumulates coeff onto the stored coefficient of w; erases exact zeros.
  void add_term(const Word& w, const Matrix& coeff);
  // Stored coefficient, or the zero matrix if w is absent.
  Matrix coefficient(const Word& w) const;

  bool is_zero() const { return terms_.empty(); }
  int degree() const;
  int degree_in_class(VarClass c) const;  // kNoDegree for the zero polynomial
  bool is_hermitian(double tol = 0.0) const;

  FreePolynomial adjoint() const;
  FreePolynomial homogeneous_part(VarClass c, int k) const;
  FreePolynomial scaled(Complex s) const;
  // Drops entries below eps in absolute value. Only meant for polynomials
  // whose coefficients came out of numeric factorizations.
  FreePolynomial normalized(double eps = 1e-12) const;

  friend FreePolynomial operator+(const FreePolynomial& a, const FreePolynomial& b);
  friend FreePolynomial operator-(const FreePolynomial& a, const FreePolynomial& b);
  friend FreePolynomial operator*(const FreePolynomial& a, const FreePolynomial& b);
  friend FreePolynomial operator*(Complex s, const FreePolynomial& p) { return p.scaled(s); }
  friend FreePolynomial operator-(const FreePolynomial& p) { return p.scaled(-1.0); }
  friend bool operator==(const FreePolynomial& a, const FreePolynomial& b);

 private:
  int rows_, cols_, mu_;
  std::map<Word, Matrix> terms_;

  void check_compatible(const FreePolynomial& other, const char* op) const;
};

// p(T) = sum_w p_w  (x)  T^w, a (rows*n) x (cols*n) matrix.
Matrix evaluate(const FreePolynomial& p, const EvaluationPoint& pt);

// Product of the assigned matrices along w (identity for the empty word).
Matrix word_value(const Word& w, const EvaluationPoint& pt);

// Largest absolute value over all coefficient entries; 0 for the zero polynomial.
double max_abs_coeff(const FreePolynomial& p);

// Largest entrywise difference, max over the union of the supports.
double coeff_distance(const FreePolynomial& a, const FreePolynomial& b);

}  // namespace ncconvex
