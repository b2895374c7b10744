#include "ncconvex/cli.hpp"

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "ncconvex/generic.hpp"
#include "ncconvex/linalg.hpp"
#include "ncconvex/structure.hpp"

namespace ncconvex::cli {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string mode_to_string(Mode m) { return m == Mode::A2 ? "a2" : "xy"; }

Mode mode_from_string(const std::string& s) {
  if (s == "a2") return Mode::A2;
  if (s == "xy") return Mode::XY;
  throw std::runtime_error("unknown mode '" + s + "' (expected a2 or xy)");
}

std::string class_label(VarClass c, Mode m) {
  if (m == Mode::A2) return c == VarClass::First ? "a" : "x";
  return c == VarClass::First ? "x" : "y";
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void require_object_keys(const nlohmann::json& j,
                         std::initializer_list<const char*> allowed,
                         const char* what) {
  if (!j.is_object())
    throw std::runtime_error(std::string(what) + " must be a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const char* k : allowed)
      if (it.key() == k) {
        known = true;
        break;
      }
    if (!known)
      throw std::runtime_error("unknown key '" + it.key() + "' in " + what);
  }
}

int require_positive_int(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number_integer() ||
      j.at(key).get<std::int64_t>() < 1)
    throw std::runtime_error(std::string("'") + key + "' must be a positive integer");
  return j.at(key).get<int>();
}

[[noreturn]] void rethrow_with_position(const std::string& text,
                                        const nlohmann::json::parse_error& e) {
  int line = 1, col = 1;
  const std::size_t stop =
      std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
  for (std::size_t i = 0; i < stop; ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  throw ParseError(e.what(), line, col);
}

}  // namespace

std::string word_to_string(const Word& w, Mode mode) {
  std::string out;
  for (const Variable& v : w.letters()) {
    if (!out.empty()) out += '*';
    out += class_label(v.cls, mode) + std::to_string(v.index);
  }
  return out;
}

Word word_from_string(const std::string& s, Mode mode, int mu) {
  if (s.empty()) return Word::identity();
  std::vector<std::string> tokens;
  std::size_t start = 0;
  while (true) {
    const std::size_t star = s.find('*', start);
    tokens.push_back(s.substr(start, star == std::string::npos
                                         ? std::string::npos
                                         : star - start));
    if (star == std::string::npos) break;
    start = star + 1;
  }
  std::vector<Variable> letters;
  for (const std::string& tok : tokens) {
    if (tok.size() < 2)
      throw std::runtime_error("bad letter '" + tok + "' in word '" + s + "'");
    const char head = tok[0];
    VarClass cls;
    if (mode == Mode::A2 && head == 'a') {
      cls = VarClass::First;
    } else if (mode == Mode::A2 && head == 'x') {
      cls = VarClass::Second;
    } else if (mode == Mode::XY && head == 'x') {
      cls = VarClass::First;
    } else if (mode == Mode::XY && head == 'y') {
      cls = VarClass::Second;
    } else {
      throw std::runtime_error("letter '" + tok + "' does not belong to mode " +
                               mode_to_string(mode));
    }
    if (tok[1] == '0')
      throw std::runtime_error("bad letter index in '" + tok + "'");
    long idx = 0;
    for (std::size_t i = 1; i < tok.size(); ++i) {
      const char c = tok[i];
      if (c < '0' || c > '9')
        throw std::runtime_error("bad letter '" + tok + "' in word '" + s + "'");
      idx = idx * 10 + (c - '0');
      if (idx > 1000000)
        throw std::runtime_error("letter index too large in '" + tok + "'");
    }
    if (idx < 1 || idx > mu)
      throw std::runtime_error("letter index out of range in '" + tok +
                               "' (mu = " + std::to_string(mu) + ")");
    letters.push_back({cls, static_cast<int>(idx)});
  }
  return Word(std::move(letters));
}

ordered_json matrix_to_json(const Matrix& m) {
  ordered_json rows = ordered_json::array();
  for (int r = 0; r < m.rows(); ++r) {
    ordered_json row = ordered_json::array();
    for (int c = 0; c < m.cols(); ++c) {
      ordered_json entry = ordered_json::array();
      entry.push_back(m(r, c).real());
      entry.push_back(m(r, c).imag());
      row.push_back(std::move(entry));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.empty())
    throw std::runtime_error("matrix must be a nonempty array of rows");
  const std::size_t nrows = j.size();
  std::size_t ncols = 0;
  for (std::size_t r = 0; r < nrows; ++r) {
    const auto& row = j.at(r);
    if (!row.is_array() || row.empty())
      throw std::runtime_error("matrix row must be a nonempty array");
    if (r == 0)
      ncols = row.size();
    else if (row.size() != ncols)
      throw std::runtime_error("matrix rows have unequal lengths");
  }
  Matrix m(static_cast<int>(nrows), static_cast<int>(ncols));
  for (std::size_t r = 0; r < nrows; ++r)
    for (std::size_t c = 0; c < ncols; ++c) {
      const auto& e = j.at(r).at(c);
      if (!e.is_array() || e.size() != 2 || !e.at(0).is_number() ||
          !e.at(1).is_number())
        throw std::runtime_error("matrix entries must be [re, im] number pairs");
      m(static_cast<int>(r), static_cast<int>(c)) =
          Complex(e.at(0).get<double>(), e.at(1).get<double>());
    }
  return m;
}

PolynomialFile parse_polynomial(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    rethrow_with_position(text, e);
  }
  require_object_keys(j, {"mu", "d", "mode", "hermitian", "terms"},
                      "polynomial file");
  const int mu = require_positive_int(j, "mu");
  const int d = require_positive_int(j, "d");
  if (!j.contains("mode") || !j.at("mode").is_string())
    throw std::runtime_error("'mode' must be \"a2\" or \"xy\"");
  const Mode mode = mode_from_string(j.at("mode").get<std::string>());
  bool hermitian = false;
  if (j.contains("hermitian")) {
    if (!j.at("hermitian").is_boolean())
      throw std::runtime_error("'hermitian' must be a boolean");
    hermitian = j.at("hermitian").get<bool>();
  }
  if (!j.contains("terms") || !j.at("terms").is_array())
    throw std::runtime_error("'terms' must be an array");

  PolynomialFile pf;
  pf.poly = FreePolynomial(d, d, mu);
  pf.mode = mode;
  pf.hermitian_declared = hermitian;
  for (const auto& term : j.at("terms")) {
    require_object_keys(term, {"word", "coeff"}, "term");
    if (!term.contains("word") || !term.at("word").is_string())
      throw std::runtime_error("term 'word' must be a string");
    if (!term.contains("coeff"))
      throw std::runtime_error("term 'coeff' is missing");
    const Word w =
        word_from_string(term.at("word").get<std::string>(), mode, mu);
    const Matrix c = matrix_from_json(term.at("coeff"));
    if (c.rows() != d || c.cols() != d)
      throw std::runtime_error("coefficient of word '" +
                               term.at("word").get<std::string>() +
                               "' is not d x d");
    pf.poly.add_term(w, c);
  }
  if (hermitian &&
      !pf.poly.is_hermitian(1e-10 * (1.0 + max_abs_coeff(pf.poly))))
    throw std::runtime_error("polynomial is declared hermitian but is not");
  return pf;
}

ordered_json polynomial_to_json(const FreePolynomial& p, Mode mode) {
  ordered_json out;
  out["mu"] = p.mu();
  if (p.rows() == p.cols()) {
    out["d"] = p.rows();
  } else {
    out["rows"] = p.rows();
    out["cols"] = p.cols();
  }
  out["mode"] = mode_to_string(mode);
  if (p.rows() == p.cols())
    out["hermitian"] = p.is_hermitian(1e-10 * (1.0 + max_abs_coeff(p)));
  ordered_json terms = ordered_json::array();
  for (const auto& [w, c] : p.terms()) {
    ordered_json t;
    t["word"] = word_to_string(w, mode);
    t["coeff"] = matrix_to_json(c);
    terms.push_back(std::move(t));
  }
  out["terms"] = std::move(terms);
  return out;
}

int exit_code_for_certify(const CertifyResult& r) {
  if (certified(r)) return kExitPositive;
  switch (failure(r).kind) {
    case FailureKind::DegreeBound:
    case FailureKind::Structural:
      return kExitNegative;
    case FailureKind::NotCertified:
    case FailureKind::VerificationFailed:
      return kExitUndetermined;
  }
  return kExitUndetermined;
}

int exit_code_for_falsify(const FalsifyOutcome& o) {
  return o.counterexample ? kExitNegative : kExitUndetermined;
}

namespace {

EvaluationPoint parse_point(const std::string& text, Mode mode, int mu) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    rethrow_with_position(text, e);
  }
  require_object_keys(
      j, {"n", "hermitian_first", "hermitian_second", "assignments"},
      "point file");
  const int n = require_positive_int(j, "n");
  bool hf = true, hs = true;
  if (j.contains("hermitian_first")) {
    if (!j.at("hermitian_first").is_boolean())
      throw std::runtime_error("'hermitian_first' must be a boolean");
    hf = j.at("hermitian_first").get<bool>();
  }
  if (j.contains("hermitian_second")) {
    if (!j.at("hermitian_second").is_boolean())
      throw std::runtime_error("'hermitian_second' must be a boolean");
    hs = j.at("hermitian_second").get<bool>();
  }
  if (!j.contains("assignments") || !j.at("assignments").is_array())
    throw std::runtime_error("'assignments' must be an array");
  std::map<Variable, Matrix> asg;
  for (const auto& a : j.at("assignments")) {
    require_object_keys(a, {"var", "matrix"}, "assignment");
    if (!a.contains("var") || !a.at("var").is_string())
      throw std::runtime_error("assignment 'var' must be a string");
    if (!a.contains("matrix"))
      throw std::runtime_error("assignment 'matrix' is missing");
    const Word w = word_from_string(a.at("var").get<std::string>(), mode, mu);
    if (w.length() != 1)
      throw std::runtime_error("assignment 'var' must be a single letter");
    const Variable v = w.letters().front();
    if (asg.count(v))
      throw std::runtime_error("variable '" + a.at("var").get<std::string>() +
                               "' is assigned twice");
    asg.emplace(v, matrix_from_json(a.at("matrix")));
  }
  return EvaluationPoint(n, std::move(asg), hf, hs);
}

ordered_json make_header(const std::string& command, ordered_json flags) {
  ordered_json tool;
  tool["version"] = kToolVersion;
  tool["command"] = command;
  tool["flags"] = std::move(flags);
  ordered_json rep;
  rep["tool"] = std::move(tool);
  return rep;
}

ordered_json input_summary(const PolynomialFile& pf) {
  ordered_json in;
  in["mu"] = pf.poly.mu();
  in["d"] = pf.poly.rows();
  in["mode"] = mode_to_string(pf.mode);
  in["degree"] = pf.poly.degree();
  in["hermitian"] =
      pf.poly.is_hermitian(1e-10 * (1.0 + max_abs_coeff(pf.poly)));
  return in;
}

ordered_json matrices_to_json(const std::vector<Matrix>& ms) {
  ordered_json out = ordered_json::array();
  for (const Matrix& m : ms) out.push_back(matrix_to_json(m));
  return out;
}

ordered_json sdp_to_json(const SdpOutcome& out) {
  ordered_json j;
  j["status"] =
      out.status == SdpStatus::Feasible ? "feasible" : "not_certified";
  j["constraint_residual"] = out.constraint_residual;
  j["min_eigenvalue"] = out.min_eigenvalue;
  j["iterations"] = out.iterations;
  j["diagnostic"] = out.diagnostic;
  return j;
}

const char* failure_kind_string(FailureKind k) {
  switch (k) {
    case FailureKind::DegreeBound:
      return "degree_bound";
    case FailureKind::Structural:
      return "structural";
    case FailureKind::NotCertified:
      return "not_certified";
    case FailureKind::VerificationFailed:
      return "verification_failed";
  }
  return "not_certified";
}

ordered_json counterexample_to_json(const Counterexample& ce, Mode mode) {
  ordered_json out;
  switch (ce.kind) {
    case WitnessKind::Midpoint:
      out["kind"] = "midpoint";
      break;
    case WitnessKind::A2PairTest:
      out["kind"] = "a2_pair";
      break;
    case WitnessKind::XYPairTest:
      out["kind"] = "xy_pair";
      break;
  }
  out["violation"] = ce.violation;
  out["seed"] = ce.seed;
  out["trial"] = ce.trial;
  if (ce.kind == WitnessKind::Midpoint) {
    out["varied"] = class_label(ce.varied, mode);
    out["t"] = ce.t;
    out["fixed"] = matrices_to_json(ce.fixed);
    out["left"] = matrices_to_json(ce.left);
    out["right"] = matrices_to_json(ce.right);
  } else if (ce.kind == WitnessKind::A2PairTest && ce.a2) {
    const A2Pair& pr = *ce.a2;
    out["n"] = pr.n;
    out["m"] = pr.m;
    out["A"] = matrices_to_json(pr.A);
    out["X"] = matrices_to_json(pr.X);
    out["alpha"] = matrices_to_json(pr.alpha);
    out["delta"] = matrices_to_json(pr.delta);
    out["beta"] = matrices_to_json(pr.beta);
  } else if (ce.kind == WitnessKind::XYPairTest && ce.xy) {
    const XYPair& pr = *ce.xy;
    out["n0"] = pr.n0;
    out["n1"] = pr.n1;
    out["n2"] = pr.n2;
    out["X"] = matrices_to_json(pr.X);
    out["Y"] = matrices_to_json(pr.Y);
  }
  return out;
}

PolynomialFile load_polynomial(const std::string& path,
                               const std::string& mode_flag) {
  PolynomialFile pf = parse_polynomial(read_file(path));
  if (!mode_flag.empty() && mode_from_string(mode_flag) != pf.mode)
    throw std::runtime_error("--mode " + mode_flag +
                             " does not match the file mode " +
                             mode_to_string(pf.mode));
  return pf;
}

CliResult do_check(const PolynomialFile& pf, ordered_json flags) {
  ordered_json rep = make_header("check", std::move(flags));
  ordered_json in = input_summary(pf);
  in["degree_first"] = pf.poly.degree_in_class(VarClass::First);
  in["degree_second"] = pf.poly.degree_in_class(VarClass::Second);
  in["zero"] = pf.poly.is_zero();
  in["hermitian_declared"] = pf.hermitian_declared;
  rep["input"] = std::move(in);
  // The shift-tuple witness grows as (2 mu)^deg; skip it when oversized.
  const int deg = std::max(pf.poly.degree(), 0);
  double dim = 1.0, total = 1.0;
  for (int j = 1; j <= deg; ++j) {
    dim *= 2.0 * pf.poly.mu();
    total += dim;
  }
  if (total <= 20000.0)
    rep["witness_norm"] = shift_witness_norm(pf.poly);
  else
    rep["witness_norm"] = nullptr;
  if (pf.mode == Mode::XY) {
    const ExclusionReport ex = exclusion_check(pf.poly);
    ordered_json e;
    e["passes"] = ex.passes;
    ordered_json words = ordered_json::array();
    for (const Word& w : ex.offending_words)
      words.push_back(word_to_string(w, pf.mode));
    e["offending_words"] = std::move(words);
    rep["exclusion"] = std::move(e);
  }
  return {kExitPositive, std::move(rep)};
}

CliResult do_certify(const std::string& cmd, const PolynomialFile& pf,
                     const CertifyOptions& opts, ordered_json flags) {
  if (cmd == "certify-a2" && pf.mode != Mode::A2)
    throw std::runtime_error("certify-a2 requires an a2-mode polynomial");
  if (cmd != "certify-a2" && pf.mode != Mode::XY)
    throw std::runtime_error(cmd + " requires an xy-mode polynomial");
  CertifyResult res =
      cmd == "certify-a2"   ? certify_a2(pf.poly, opts)
      : cmd == "certify-xy" ? certify_xy(pf.poly, opts)
                            : certify_xy_sdp_mu1(pf.poly, opts);
  ordered_json rep = make_header(cmd, std::move(flags));
  rep["input"] = input_summary(pf);
  if (certified(res)) {
    const ConvexityCertificate& cert = certificate(res);
    rep["outcome"] = "certified";
    ordered_json cj;
    cj["lambda"] = polynomial_to_json(cert.lambda, pf.mode);
    cj["Lambda"] = polynomial_to_json(cert.Lambda, pf.mode);
    cj["gram"] = matrix_to_json(cert.gram);
    cj["gram_min_eig"] = cert.gram_min_eig;
    cj["residual"] = cert.residual;
    rep["certificate"] = std::move(cj);
    const SchurPencil pencil = schur_pencil(cert);
    ordered_json pj;
    pj["N"] = pencil.N;
    pj["d"] = pencil.d;
    pj["block"] = polynomial_to_json(pencil.block, pf.mode);
    rep["schur_pencil"] = std::move(pj);
    return {kExitPositive, std::move(rep)};
  }
  const CertifyFailure& f = failure(res);
  rep["outcome"] = failure_kind_string(f.kind);
  rep["message"] = f.message;
  if (!f.offending_words.empty()) {
    ordered_json words = ordered_json::array();
    for (const Word& w : f.offending_words)
      words.push_back(word_to_string(w, pf.mode));
    rep["offending_words"] = std::move(words);
  }
  if (f.sdp) rep["sdp"] = sdp_to_json(*f.sdp);
  return {exit_code_for_certify(res), std::move(rep)};
}

CliResult do_falsify(const PolynomialFile& pf, std::uint64_t trials,
                     std::uint64_t seed, ordered_json flags) {
  const FalsifyOutcome out = falsify(pf.poly, pf.mode, trials, seed);
  ordered_json rep = make_header("falsify", std::move(flags));
  rep["input"] = input_summary(pf);
  rep["outcome"] = out.counterexample ? "counterexample" : "no_violation_found";
  rep["trials_run"] = out.trials_run;
  rep["min_gap"] = out.min_gap;
  if (out.counterexample)
    rep["counterexample"] = counterexample_to_json(*out.counterexample, pf.mode);
  return {exit_code_for_falsify(out), std::move(rep)};
}

CliResult do_eval(const PolynomialFile& pf, const std::string& point_path,
                  ordered_json flags) {
  const EvaluationPoint pt =
      parse_point(read_file(point_path), pf.mode, pf.poly.mu());
  const Matrix value = evaluate(pf.poly, pt);
  ordered_json rep = make_header("eval", std::move(flags));
  rep["input"] = input_summary(pf);
  rep["n"] = pt.n;
  rep["rows"] = static_cast<int>(value.rows());
  rep["cols"] = static_cast<int>(value.cols());
  rep["value"] = matrix_to_json(value);
  if (value.rows() == value.cols() &&
      is_hermitian_matrix(value, 1e-10 * std::max(1.0, value.norm()))) {
    rep["min_eig"] = min_eig(value);
    rep["max_eig"] = max_eig(value);
  }
  return {kExitPositive, std::move(rep)};
}

CliResult do_amitsur(int mu, int m, ordered_json flags) {
  const ShiftTuple st = amitsur_tuple(mu, m);
  ordered_json rep = make_header("amitsur", std::move(flags));
  rep["mu"] = mu;
  rep["m"] = m;
  rep["N"] = static_cast<int>(st.basis.size());
  ordered_json basis = ordered_json::array();
  for (const Word& w : st.basis) basis.push_back(word_to_string(w, Mode::A2));
  rep["basis"] = std::move(basis);
  rep["T"] = matrices_to_json(st.T);
  rep["v"] = matrix_to_json(Matrix(st.v));
  rep["rank"] = word_vector_rank(st.T, st.v, m);
  rep["independent"] = independence_check(st.T, st.v, m);
  return {kExitPositive, std::move(rep)};
}

void emit(const CliResult& result, const std::string& out_path, bool quiet) {
  const std::string text = result.report.dump(2) + "\n";
  if (!out_path.empty()) {
    std::ofstream f(out_path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write output file: " + out_path);
    f << text;
    if (!f) throw std::runtime_error("short write to output file: " + out_path);
  }
  if (!quiet) std::cout << text;
}

CliResult error_result(const std::string& command, const std::string& message,
                       int line, int col, bool quiet) {
  ordered_json rep = make_header(command.empty() ? "parse" : command,
                                 ordered_json::object());
  ordered_json err;
  err["message"] = message;
  if (line > 0) {
    err["line"] = line;
    err["col"] = col;
  }
  rep["error"] = std::move(err);
  CliResult res{kExitError, std::move(rep)};
  if (!quiet) std::cout << res.report.dump(2) << "\n";
  return res;
}

}  // namespace

CliResult run(const std::vector<std::string>& args, bool quiet) {
  CLI::App app{"certificates and refutations of matrix convexity for free polynomials",
               "ncconvex"};
  app.require_subcommand(1);

  std::string in_path, out_path, point_path, mode_flag;
  double tol = 1e-6;
  std::uint64_t seed = 0, trials = 1000;
  int max_iters = 10000;
  int sos_degree = -1;
  int shift_mu = 1, shift_m = 1;

  auto add_common = [&](CLI::App* s) {
    s->add_option("--in", in_path, "input polynomial JSON file")->required();
    s->add_option("--out", out_path, "also write the JSON report here");
    s->add_option("--mode", mode_flag, "expected variable naming")
        ->check(CLI::IsMember({"a2", "xy"}));
  };
  auto add_solver = [&](CLI::App* s) {
    s->add_option("--tol", tol, "feasibility tolerance")
        ->check(CLI::PositiveNumber);
    s->add_option("--max-iters", max_iters, "projection iteration cap")
        ->check(CLI::PositiveNumber);
  };

  CLI::App* c_check =
      app.add_subcommand("check", "parse a polynomial and report its structure");
  add_common(c_check);

  CLI::App* c_a2 = app.add_subcommand(
      "certify-a2", "certify convexity in the second class with the first frozen");
  add_common(c_a2);
  add_solver(c_a2);
  c_a2->add_option("--sos-degree", sos_degree,
                   "factor basis degree override (-1 picks ceil(deg/2))")
      ->check(CLI::Range(-1, 64));

  CLI::App* c_xy =
      app.add_subcommand("certify-xy", "certify joint convexity in both classes");
  add_common(c_xy);
  add_solver(c_xy);

  CLI::App* c_sdp = app.add_subcommand(
      "certify-xy-sdp", "joint convexity via one Gram search over (x, y, xy, yx); mu = 1");
  add_common(c_sdp);
  add_solver(c_sdp);

  CLI::App* c_falsify =
      app.add_subcommand("falsify", "randomized search for convexity violations");
  add_common(c_falsify);
  c_falsify->add_option("--trials", trials, "number of randomized trials");
  c_falsify->add_option("--seed", seed, "base seed for the trial streams");

  CLI::App* c_eval =
      app.add_subcommand("eval", "evaluate the polynomial at a matrix point");
  add_common(c_eval);
  c_eval->add_option("--point", point_path, "point JSON file")->required();

  CLI::App* c_shift = app.add_subcommand(
      "amitsur", "emit the universal shift-tuple nonzero witness");
  c_shift->add_option("--out", out_path, "also write the JSON report here");
  c_shift->add_option("--mu", shift_mu, "alphabet size")
      ->check(CLI::PositiveNumber);
  c_shift->add_option("--m", shift_m, "truncation length")
      ->check(CLI::Range(0, 32));

  std::vector<const char*> argv;
  argv.push_back("ncconvex");
  for (const std::string& a : args) argv.push_back(a.c_str());

  std::string cmd;
  try {
    try {
      app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
      const std::string text = app.help();
      if (!quiet) std::cout << text;
      ordered_json rep = make_header("help", ordered_json::object());
      rep["help"] = text;
      return {kExitPositive, std::move(rep)};
    } catch (const CLI::ParseError& e) {
      return error_result(cmd, std::string("argument error: ") + e.what(), 0, 0,
                          quiet);
    }
    CLI::App* sub = app.get_subcommands().front();
    cmd = sub->get_name();

    ordered_json flags;
    const CLI::Option* in_opt = sub->get_option_no_throw("--in");
    if (in_opt != nullptr && in_opt->count() > 0) flags["in"] = in_path;
    if (!out_path.empty()) flags["out"] = out_path;
    if (!mode_flag.empty()) flags["mode"] = mode_flag;

    CliResult result{kExitError, ordered_json::object()};
    if (cmd == "check") {
      result = do_check(load_polynomial(in_path, mode_flag), std::move(flags));
    } else if (cmd == "certify-a2" || cmd == "certify-xy" ||
               cmd == "certify-xy-sdp") {
      flags["tol"] = tol;
      flags["max_iters"] = max_iters;
      if (cmd == "certify-a2") flags["sos_degree"] = sos_degree;
      CertifyOptions opts;
      opts.tol = tol;
      opts.max_iters = max_iters;
      opts.sos_degree = sos_degree;
      result = do_certify(cmd, load_polynomial(in_path, mode_flag), opts,
                          std::move(flags));
    } else if (cmd == "falsify") {
      flags["trials"] = trials;
      flags["seed"] = seed;
      result = do_falsify(load_polynomial(in_path, mode_flag), trials, seed,
                          std::move(flags));
    } else if (cmd == "eval") {
      flags["point"] = point_path;
      result = do_eval(load_polynomial(in_path, mode_flag), point_path,
                       std::move(flags));
    } else if (cmd == "amitsur") {
      flags["mu"] = shift_mu;
      flags["m"] = shift_m;
      result = do_amitsur(shift_mu, shift_m, std::move(flags));
    } else {
      throw std::runtime_error("unhandled command " + cmd);
    }
    emit(result, out_path, quiet);
    return result;
  } catch (const ParseError& e) {
    return error_result(cmd, e.what(), e.line, e.col, quiet);
  } catch (const std::exception& e) {
    return error_result(cmd, e.what(), 0, 0, quiet);
  }
}

}  // namespace ncconvex::cli
