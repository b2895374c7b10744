#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "ncconvex/cli.hpp"
#include "test_support.hpp"

using namespace ncconvex;
using namespace nctest;
namespace cli = ncconvex::cli;

namespace {

struct TempFile {
  std::filesystem::path path;
  explicit TempFile(const std::string& name, const std::string& content) {
    path = std::filesystem::temp_directory_path() / name;
    std::ofstream f(path);
    f << content;
  }
  ~TempFile() { std::error_code ec; std::filesystem::remove(path, ec); }
  std::string str() const { return path.string(); }
};

const char* kXax =
    R"({"mu":1,"d":1,"mode":"a2","hermitian":true,
        "terms":[{"word":"x1*a1*x1","coeff":[[[1,0]]]}]})";
const char* kX2 =
    R"({"mu":1,"d":1,"mode":"a2","hermitian":true,
        "terms":[{"word":"x1*x1","coeff":[[[1,0]]]}]})";

}  // namespace

TEST_CASE("word strings round trip in both modes") {
  const Word w = mkword({snd(1), fst(2), fst(1)});
  const std::string a2 = cli::word_to_string(w, Mode::A2);
  CHECK(a2 == "x1*a2*a1");
  CHECK(cli::word_from_string(a2, Mode::A2, 2) == w);
  const std::string xy = cli::word_to_string(w, Mode::XY);
  CHECK(xy == "y1*x2*x1");
  CHECK(cli::word_from_string(xy, Mode::XY, 2) == w);
  CHECK(cli::word_to_string(Word::identity(), Mode::A2) == "");
  CHECK(cli::word_from_string("", Mode::XY, 1) == Word::identity());
}

TEST_CASE("word parsing rejects malformed letters") {
  CHECK_THROWS(cli::word_from_string("y1", Mode::A2, 1));   // wrong alphabet
  CHECK_THROWS(cli::word_from_string("a0", Mode::A2, 1));   // index 0
  CHECK_THROWS(cli::word_from_string("a2", Mode::A2, 1));   // above mu
  CHECK_THROWS(cli::word_from_string("a1*", Mode::A2, 1));  // trailing star
  CHECK_THROWS(cli::word_from_string("a", Mode::A2, 1));    // no index
  CHECK_THROWS(cli::word_from_string("a01", Mode::A2, 1));  // leading zero
  CHECK_THROWS(cli::word_from_string("a1b", Mode::A2, 1));  // stray char
}

TEST_CASE("matrix json round trips complex entries") {
  Matrix m(2, 2);
  m << Complex(1, 2), Complex(0, -3), 4.5, 0.0;
  const auto j = cli::matrix_to_json(m);
  const Matrix back = cli::matrix_from_json(nlohmann::json::parse(j.dump()));
  CHECK((back - m).norm() == 0.0);
  CHECK_THROWS(cli::matrix_from_json(nlohmann::json::parse("[]")));
  CHECK_THROWS(cli::matrix_from_json(nlohmann::json::parse("[[1,2]]")));
  CHECK_THROWS(cli::matrix_from_json(nlohmann::json::parse("[[[1,2]],[[1,2],[3,4]]]")));
}

TEST_CASE("polynomial files parse and accumulate repeated words") {
  const std::string text =
      R"({"mu":2,"d":1,"mode":"xy","hermitian":false,
          "terms":[{"word":"x1*y2","coeff":[[[1,0]]]},
                   {"word":"x1*y2","coeff":[[[2,0]]]}]})";
  const cli::PolynomialFile pf = cli::parse_polynomial(text);
  CHECK(pf.mode == Mode::XY);
  CHECK(pf.poly.mu() == 2);
  CHECK(pf.poly.terms().size() == 1);
  CHECK(pf.poly.coefficient(mkword({fst(1), snd(2)}))(0, 0) == Complex(3.0));
}

TEST_CASE("polynomial json emission is canonical and re-parsable") {
  FreePolynomial p = sterm(1.0, {snd(1), snd(1)}) + sterm(2.0, {fst(1)}) +
                     sterm(1.0, {});
  const auto j = cli::polynomial_to_json(p, Mode::A2);
  CHECK(j.at("d") == 1);
  CHECK(j.at("hermitian") == true);
  // graded lex: "", a1, x1*x1
  CHECK(j.at("terms").at(0).at("word") == "");
  CHECK(j.at("terms").at(1).at("word") == "a1");
  CHECK(j.at("terms").at(2).at("word") == "x1*x1");
  const cli::PolynomialFile back = cli::parse_polynomial(j.dump());
  CHECK(coeff_distance(back.poly, p) == 0.0);
}

TEST_CASE("parse errors carry position, semantic errors carry messages") {
  CHECK_THROWS_AS(cli::parse_polynomial("{\n  \"mu\": oops"), cli::ParseError);
  try {
    cli::parse_polynomial("{\n  \"mu\": oops");
  } catch (const cli::ParseError& e) {
    CHECK(e.line == 2);
    CHECK(e.col > 0);
  }
  // declared hermitian but is not
  CHECK_THROWS_WITH_AS(
      cli::parse_polynomial(
          R"({"mu":1,"d":1,"mode":"a2","hermitian":true,
              "terms":[{"word":"a1*x1","coeff":[[[1,0]]]}]})"),
      doctest::Contains("hermitian"), std::runtime_error);
  // unknown keys are rejected
  CHECK_THROWS(cli::parse_polynomial(
      R"({"mu":1,"d":1,"mode":"a2","terms":[],"extra":1})"));
  // wrong coefficient shape
  CHECK_THROWS(cli::parse_polynomial(
      R"({"mu":1,"d":2,"mode":"a2","terms":[{"word":"x1","coeff":[[[1,0]]]}]})"));
}

TEST_CASE("certify-a2 command on a convex input exits zero") {
  TempFile in("nctest_x2.json", kX2);
  const cli::CliResult r = cli::run({"certify-a2", "--in", in.str()}, true);
  CHECK(r.exit_code == cli::kExitPositive);
  CHECK(r.report.at("outcome") == "certified");
  CHECK(r.report.at("certificate").at("residual").get<double>() <= 1e-8);
  CHECK(r.report.at("schur_pencil").at("N") == 1);
  CHECK(r.report.at("tool").at("command") == "certify-a2");
}

TEST_CASE("certify-a2 on x a x is undetermined, falsify is negative") {
  TempFile in("nctest_xax.json", kXax);
  const cli::CliResult c = cli::run({"certify-a2", "--in", in.str()}, true);
  CHECK(c.exit_code == cli::kExitUndetermined);
  CHECK(c.report.at("outcome") == "not_certified");
  CHECK(c.report.contains("sdp"));

  const cli::CliResult f =
      cli::run({"falsify", "--in", in.str(), "--trials", "500"}, true);
  CHECK(f.exit_code == cli::kExitNegative);
  CHECK(f.report.at("outcome") == "counterexample");
  CHECK(f.report.at("counterexample").at("violation").get<double>() < 0.0);
}

TEST_CASE("falsify on a convex polynomial is undetermined") {
  TempFile in("nctest_x2b.json", kX2);
  const cli::CliResult f =
      cli::run({"falsify", "--in", in.str(), "--trials", "32"}, true);
  CHECK(f.exit_code == cli::kExitUndetermined);
  CHECK(f.report.at("outcome") == "no_violation_found");
}

TEST_CASE("check reports structure and the exclusion verdict") {
  TempFile in("nctest_excl.json",
              R"({"mu":1,"d":1,"mode":"xy","hermitian":true,
                  "terms":[{"word":"x1*x1*y1*y1","coeff":[[[0.5,0]]]},
                           {"word":"y1*y1*x1*x1","coeff":[[[0.5,0]]]}]})");
  const cli::CliResult r = cli::run({"check", "--in", in.str()}, true);
  CHECK(r.exit_code == cli::kExitPositive);
  CHECK(r.report.at("input").at("degree") == 4);
  CHECK(r.report.at("exclusion").at("passes") == false);
  CHECK(r.report.at("exclusion").at("offending_words").size() == 2);
  CHECK(r.report.at("witness_norm").get<double>() > 0.0);
}

TEST_CASE("eval computes the kron evaluation") {
  TempFile in("nctest_xax2.json", kXax);
  TempFile pt("nctest_pt.json",
              R"({"n":2,"assignments":[
                   {"var":"a1","matrix":[[[1,0],[0,0]],[[0,0],[-1,0]]]},
                   {"var":"x1","matrix":[[[0,0],[1,0]],[[1,0],[0,0]]]}]})");
  const cli::CliResult r =
      cli::run({"eval", "--in", in.str(), "--point", pt.str()}, true);
  REQUIRE(r.exit_code == cli::kExitPositive);
  // X A X = diag(-1, 1)
  CHECK(r.report.at("value").at(0).at(0).at(0).get<double>() ==
        doctest::Approx(-1.0));
  CHECK(r.report.at("value").at(1).at(1).at(0).get<double>() ==
        doctest::Approx(1.0));
  CHECK(r.report.at("min_eig").get<double>() == doctest::Approx(-1.0));
}

TEST_CASE("amitsur command emits the frozen tuple") {
  const cli::CliResult r = cli::run({"amitsur", "--mu", "1", "--m", "2"}, true);
  REQUIRE(r.exit_code == cli::kExitPositive);
  CHECK(r.report.at("N") == 3);
  CHECK(r.report.at("independent") == true);
  CHECK(r.report.at("rank") == 3);
  CHECK(r.report.at("T").at(0).at(0).at(1).at(0).get<double>() == 1.0);
}

TEST_CASE("--out writes the same report to a file") {
  TempFile in("nctest_x2c.json", kX2);
  const std::string out =
      (std::filesystem::temp_directory_path() / "nctest_report.json").string();
  const cli::CliResult r =
      cli::run({"check", "--in", in.str(), "--out", out}, true);
  REQUIRE(r.exit_code == cli::kExitPositive);
  std::ifstream f(out);
  REQUIRE(f.good());
  nlohmann::json parsed;
  f >> parsed;
  CHECK(parsed.at("tool").at("command") == "check");
  std::filesystem::remove(out);
}

TEST_CASE("operational failures exit four") {
  SUBCASE("missing input file") {
    const cli::CliResult r =
        cli::run({"certify-a2", "--in", "/nonexistent/p.json"}, true);
    CHECK(r.exit_code == cli::kExitError);
    CHECK(r.report.contains("error"));
  }
  SUBCASE("malformed json carries line and column") {
    TempFile in("nctest_bad.json", "{\n \"mu\": }");
    const cli::CliResult r = cli::run({"check", "--in", in.str()}, true);
    CHECK(r.exit_code == cli::kExitError);
    CHECK(r.report.at("error").at("line").get<int>() == 2);
  }
  SUBCASE("unknown flag") {
    const cli::CliResult r = cli::run({"check", "--frobnicate"}, true);
    CHECK(r.exit_code == cli::kExitError);
  }
  SUBCASE("missing subcommand") {
    CHECK(cli::run({}, true).exit_code == cli::kExitError);
  }
  SUBCASE("mode flag contradicting the file") {
    TempFile in("nctest_x2d.json", kX2);
    const cli::CliResult r =
        cli::run({"check", "--in", in.str(), "--mode", "xy"}, true);
    CHECK(r.exit_code == cli::kExitError);
  }
  SUBCASE("command requiring the other mode") {
    TempFile in("nctest_x2e.json", kX2);
    const cli::CliResult r = cli::run({"certify-xy", "--in", in.str()}, true);
    CHECK(r.exit_code == cli::kExitError);
  }
  SUBCASE("non-hermitian input for certification") {
    TempFile in("nctest_nh.json",
                R"({"mu":1,"d":1,"mode":"a2",
                    "terms":[{"word":"a1*x1","coeff":[[[1,0]]]}]})");
    const cli::CliResult r = cli::run({"certify-a2", "--in", in.str()}, true);
    CHECK(r.exit_code == cli::kExitError);
  }
}

TEST_CASE("help exits zero") {
  const cli::CliResult r = cli::run({"--help"}, true);
  CHECK(r.exit_code == cli::kExitPositive);
  CHECK(r.report.contains("help"));
}

TEST_CASE("exit code mapping") {
  CertifyResult cert = ConvexityCertificate{
      Mode::A2, FreePolynomial(1, 1, 1), FreePolynomial(1, 1, 1),
      Matrix::Identity(1, 1), 1.0, 0.0};
  CHECK(cli::exit_code_for_certify(cert) == cli::kExitPositive);
  CertifyResult neg = CertifyFailure{FailureKind::DegreeBound, "", {}, {}};
  CHECK(cli::exit_code_for_certify(neg) == cli::kExitNegative);
  CertifyResult str = CertifyFailure{FailureKind::Structural, "", {}, {}};
  CHECK(cli::exit_code_for_certify(str) == cli::kExitNegative);
  CertifyResult und = CertifyFailure{FailureKind::NotCertified, "", {}, {}};
  CHECK(cli::exit_code_for_certify(und) == cli::kExitUndetermined);
  CertifyResult ver = CertifyFailure{FailureKind::VerificationFailed, "", {}, {}};
  CHECK(cli::exit_code_for_certify(ver) == cli::kExitUndetermined);

  FalsifyOutcome hit;
  hit.counterexample = Counterexample{};
  CHECK(cli::exit_code_for_falsify(hit) == cli::kExitNegative);
  CHECK(cli::exit_code_for_falsify(FalsifyOutcome{}) == cli::kExitUndetermined);
}
