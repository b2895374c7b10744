// Timing harness for the parallel kernels against their serial references:
// falsifier trial sweeps, certificate gap sampling, and the SDP constraint
// passes. Run with --quick for a smoke-sized configuration.

#include <chrono>
#include <cstdio>
#include <cstring>
#include <string>
#include <vector>

#include "ncconvex/ncpoly.hpp"
#include "ncconvex/rng.hpp"
#include "ncconvex/sampler.hpp"
#include "ncconvex/sdp.hpp"

using namespace ncconvex;

namespace {

double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now() - t0)
      .count();
}

FreePolynomial scalar_monomial(const std::vector<Variable>& letters) {
  Matrix one = Matrix::Identity(1, 1);
  return FreePolynomial::monomial(one, Word(letters), 1);
}

void report_row(const char* name, double serial_ms, double parallel_ms,
                bool match) {
  std::printf("%-22s %10.1f ms %10.1f ms   x%-5.2f %s\n", name, serial_ms,
              parallel_ms, parallel_ms > 0 ? serial_ms / parallel_ms : 0.0,
              match ? "match" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
  bool quick = false;
  for (int i = 1; i < argc; ++i)
    if (std::strcmp(argv[i], "--quick") == 0) quick = true;

  int failures = 0;

  {
    // x a x is midpoint-refutable, so the sweep does real work per trial.
    const Variable a{VarClass::First, 1}, x{VarClass::Second, 1};
    const FreePolynomial p = scalar_monomial({x, a, x});
    const std::uint64_t trials = quick ? 64 : 4096;

    auto t0 = std::chrono::steady_clock::now();
    const FalsifyOutcome s = falsify_serial(p, Mode::A2, trials, 7);
    const double serial_ms = ms_since(t0);

    t0 = std::chrono::steady_clock::now();
    const FalsifyOutcome q = falsify(p, Mode::A2, trials, 7);
    const double parallel_ms = ms_since(t0);

    const bool match = s.trials_run == q.trials_run && s.min_gap == q.min_gap &&
                       s.counterexample.has_value() ==
                           q.counterexample.has_value();
    if (!match) ++failures;
    report_row("falsify sweep", serial_ms, parallel_ms, match);
  }

  {
    const Variable x{VarClass::Second, 1};
    const FreePolynomial p = scalar_monomial({x, x});
    const std::uint64_t count = quick ? 128 : 8192;

    auto t0 = std::chrono::steady_clock::now();
    const double gs = min_gap_over_samples(p, Mode::A2, count, 11, false);
    const double serial_ms = ms_since(t0);

    t0 = std::chrono::steady_clock::now();
    const double gp = min_gap_over_samples(p, Mode::A2, count, 11, true);
    const double parallel_ms = ms_since(t0);

    const bool match = gs == gp;
    if (!match) ++failures;
    report_row("gap sampling", serial_ms, parallel_ms, match);
  }

  {
    const int dim = quick ? 16 : 48;
    const int ncons = quick ? 32 : 140;
    CounterRng rng(3, 0);
    const Matrix r = random_complex_matrix(dim, dim, rng);
    const Matrix target = r * r.adjoint();

    SdpProblem base(dim);
    base.max_iters = 2000;
    for (int i = 0; i < ncons; ++i) {
      const Matrix a = random_hermitian(dim, rng);
      base.add_constraint(a, (a.adjoint() * target).trace().real());
    }

    SdpProblem serial = base;
    serial.parallel = false;
    auto t0 = std::chrono::steady_clock::now();
    const SdpOutcome os = solve_feasibility(serial);
    const double serial_ms = ms_since(t0);

    SdpProblem parallel = base;
    parallel.parallel = true;
    t0 = std::chrono::steady_clock::now();
    const SdpOutcome op = solve_feasibility(parallel);
    const double parallel_ms = ms_since(t0);

    const bool match = os.status == op.status &&
                       (os.Q - op.Q).norm() <= 1e-9 * (1.0 + op.Q.norm());
    if (!match) ++failures;
    report_row("sdp feasibility", serial_ms, parallel_ms, match);
  }

  if (failures) std::printf("%d kernel(s) disagreed with the reference\n", failures);
  return failures == 0 ? 0 : 1;
}
