#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "ncconvex/certify.hpp"
#include "ncconvex/ncpoly.hpp"
#include "ncconvex/sampler.hpp"

namespace ncconvex::cli {

inline constexpr const char* kToolVersion = "0.1.0";

// Exit contract: 0 definitive positive (certificate emitted / check passed),
// 1 definitive negative (counterexample or structural failure), 2
// undetermined, 4 operational failure (I/O, parse, flag validation).
inline constexpr int kExitPositive = 0;
inline constexpr int kExitNegative = 1;
inline constexpr int kExitUndetermined = 2;
inline constexpr int kExitError = 4;

struct ParseError : std::runtime_error {
  int line = 0, col = 0;
  ParseError(const std::string& msg, int line_, int col_)
      : std::runtime_error(msg), line(line_), col(col_) {}
};

struct PolynomialFile {
  FreePolynomial poly{1, 1, 1};
  Mode mode = Mode::A2;
  bool hermitian_declared = false;
};

// JSON polynomial format, canonical word order on output:
//   {"mu":1, "d":1, "mode":"a2", "hermitian":true,
//    "terms":[{"word":"x1*a1*x1", "coeff":[[[1,0]]]}]}
// Words are '*'-joined letters a<i>/x<i> (a2) or x<i>/y<i> (xy); "" is the
// empty word. Coefficients are d x d arrays of [re, im].
PolynomialFile parse_polynomial(const std::string& text);
nlohmann::ordered_json polynomial_to_json(const FreePolynomial& p, Mode mode);

std::string word_to_string(const Word& w, Mode mode);
Word word_from_string(const std::string& s, Mode mode, int mu);

nlohmann::ordered_json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const nlohmann::json& j);

struct CliResult {
  int exit_code = 0;
  nlohmann::ordered_json report;
};

// The whole tool behind a callable interface (main is a thin wrapper):
// args as after argv[0]. Reports go to the returned json and, with --out,
// to a file; run() also prints the report to stdout unless quiet.
CliResult run(const std::vector<std::string>& args, bool quiet = false);

int exit_code_for_certify(const CertifyResult& r);
int exit_code_for_falsify(const FalsifyOutcome& o);

}  // namespace ncconvex::cli
