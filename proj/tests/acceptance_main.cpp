// Release gate: one numbered line per criterion, nonzero exit when any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "nildist/chain.hpp"
#include "nildist/formula.hpp"
#include "nildist/nest.hpp"
#include "nildist/oracle.hpp"
#include "test_support.hpp"

using namespace nildist;

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

int failures = 0;

void report(int id, const char* name, bool ok, const std::string& detail) {
  std::printf("[%s] %d: %s (%s)\n", ok ? "PASS" : "FAIL", id, name,
              detail.c_str());
  if (!ok) ++failures;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

void criterion_closed_form() {
  double worst = 0;
  for (std::size_t n = 1; n <= 8; ++n) {
    const double want = 1.0 / (2.0 * std::cos(kPi / double(n + 2)));
    worst = std::max(worst,
                     std::abs(nu_finite(TraceValue::of_rank(1, n)) - want));
  }
  for (std::size_t n = 2; n <= 8; ++n) {
    const double want =
        1.0 / (2.0 * std::cos(double(n - 1) * kPi / double(3 * n - 2)));
    worst = std::max(
        worst, std::abs(nu_finite(TraceValue::of_rank(n - 1, n)) - want));
  }
  worst = std::max(worst, std::abs(nu_finite(TraceValue::of_real(1.0)) - 1.0));
  report(1, "closed form vs rank-one and corank-one references", worst <= 1e-12,
         "max err " + fmt(worst));
}

void criterion_certificates() {
  double worst_resid = 0, worst_power = 0, worst_excess = 0;
  bool ok = true;
  std::string note;
  for (std::size_t n = 1; n <= 6 && ok; ++n)
    for (std::size_t m = 1; m <= n; ++m) {
      const auto cert = certificate(n, m);
      double resid = 0;
      for (std::size_t k = 1; k <= cert.flag.length(); ++k) {
        const auto corner =
            (ComplexMatrix::identity(n) - cert.flag.p[k - 1].matrix()) *
            cert.nilpotent * cert.flag.p[k].matrix();
        resid = std::max(resid, op_norm(corner));
      }
      ComplexMatrix pw = cert.nilpotent;
      for (std::size_t k = 1; k < n; ++k) pw = pw * cert.nilpotent;
      worst_resid = std::max(worst_resid, resid);
      worst_power = std::max(worst_power, op_norm(pw));
      worst_excess =
          std::max(worst_excess, cert.achieved - cert.reference);
      if (!cert.verified) {
        ok = false;
        note = "unverified at n=" + std::to_string(n) +
               " m=" + std::to_string(m);
      }
    }
  ok = ok && worst_resid <= 1e-9 && worst_power <= 1e-7 &&
       worst_excess <= 1e-7;
  if (note.empty())
    note = "max staircase resid " + fmt(worst_resid) + ", max |N^n| " +
           fmt(worst_power) + ", max excess " + fmt(worst_excess);
  report(2, "certificates for every rank and dimension up to 6", ok, note);
}

void criterion_lower_bound_sampling() {
  std::size_t checked = 0;
  double worst = 1e300;  // least slack nest_distance - nu seen
  bool ok = true;
  for (std::size_t n = 1; n <= 4; ++n)
    for (std::size_t m = 1; m <= n; ++m) {
      const double nu = nu_finite(TraceValue::of_rank(m, n));
      const auto p = ProjectionMatrix::coordinate(n, m).matrix();
      Rng rng(mix_seed(1000 + 10 * n + m, 0));
      for (int rep = 0; rep < 200; ++rep) {
        const Flag f = testsup::random_flag(n, rng);
        const double slack = nest_distance(p, f) - nu;
        worst = std::min(worst, slack);
        ok = ok && slack >= -1e-9;
        ++checked;
      }
    }
  report(3, "random flags never beat the closed form", ok,
         std::to_string(checked) + " flags, min slack " + fmt(worst));
}

void criterion_oracle() {
  const auto t0 = std::chrono::steady_clock::now();
  bool ok = true;
  std::string note;
  double worst_gap = 0;
  for (std::size_t n = 1; n <= 4 && ok; ++n)
    for (std::size_t m = 1; m <= n; ++m) {
      const auto g = oracle_gap(n, m, 32, 42);
      worst_gap = std::max(worst_gap, std::abs(g.gap));
      if (g.gap < -1e-6 || g.gap > 1e-3) {
        ok = false;
        note = "gap " + fmt(g.gap) + " at n=" + std::to_string(n) +
               " m=" + std::to_string(m);
      }
    }
  const struct {
    std::size_t n, m;
    double want;
  } frozen[] = {{2, 1, 0.70711}, {3, 1, 0.61803}, {3, 2, 0.80194}};
  for (const auto& f : frozen) {
    const auto g = oracle_gap(f.n, f.m, 32, 42);
    if (std::abs(g.oracle_value - f.want) > 1e-4) {
      ok = false;
      note = "value " + fmt(g.oracle_value) + " vs " + fmt(f.want) +
             " at n=" + std::to_string(f.n);
    }
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  if (secs >= 120) {
    ok = false;
    note = "took " + fmt(secs) + "s";
  }
  if (note.empty())
    note = "max |gap| " + fmt(worst_gap) + ", " + fmt(secs) + "s";
  report(4, "brute-force flag minimum agrees with the formula", ok, note);
}

void criterion_trace_audit() {
  bool ok = true;
  double worst = 0;
  std::string note;
  for (std::size_t n = 1; n <= 6 && ok; ++n)
    for (std::size_t m = 1; m <= n; ++m) {
      const auto sched = beta_schedule(n, m);
      const auto chain = build_chain(sched);
      const auto bs = bchain_of(chain, sched.angles);
      for (std::size_t k = 1; k <= n; ++k)
        worst = std::max(worst,
                         std::abs(std::real(trace(bs.b[k].matrix())) -
                                  double(k) * sched.angles.theta));
      for (const auto& step : lb_audit(chain, sched.angles)) {
        if (!(step.tau_bound_ok && step.equality && step.equality_rank_ok)) {
          ok = false;
          note = "audit step " + std::to_string(step.k) + " at n=" +
                 std::to_string(n) + " m=" + std::to_string(m);
        }
      }
    }
  ok = ok && worst <= 1e-7;
  if (note.empty()) note = "max trace err " + fmt(worst);
  report(5, "angle traces march by theta with saturated rank bound", ok, note);
}

void criterion_identities() {
  const double thetas[] = {kPi / 8, kPi / 5, kPi / 4, 0.95 * kPi / 3};
  bool ok = true;
  std::size_t total_kept = 0, total_dis = 0;
  std::string note;
  std::uint64_t seed = 500;
  for (std::size_t dim = 2; dim <= 4 && ok; ++dim)
    for (const double theta : thetas) {
      const auto th = ThetaAngles::from_theta(theta);
      const auto ord = sample_ordering_identity(dim, th, 350, seed++, 1e-6);
      const auto bnd = sample_bound_identity(dim, th, 350, seed++, 1e-6);
      const std::size_t kept = ord.samples + bnd.samples;
      total_kept += kept;
      total_dis += ord.disagreements + bnd.disagreements;
      if (kept < 500) {
        ok = false;
        note = "only " + std::to_string(kept) + " usable samples at dim " +
               std::to_string(dim) + ", theta " + fmt(theta);
      }
    }
  ok = ok && total_dis == 0;
  if (note.empty())
    note = std::to_string(total_kept) + " samples, " +
           std::to_string(total_dis) + " disagreements";
  report(6, "both spectral equivalences agree on random non-boundary pairs",
         ok, note);
}

void criterion_completions() {
  Rng rng(mix_seed(7700, 0));
  bool ok = true;
  double worst_norm = 0, worst_gap = 0;
  for (int rep = 0; rep < 100; ++rep) {
    const std::size_t p = 1 + rng.next_u64() % 4;
    const std::size_t q = 1 + rng.next_u64() % 4;
    const std::size_t r = 1 + rng.next_u64() % 4;
    const std::size_t s = 1 + rng.next_u64() % 4;
    const auto c = testsup::random_matrix(p, q, rng);
    const auto a = testsup::random_matrix(r, q, rng);
    const auto b = testsup::random_matrix(r, s, rng);
    ComplexMatrix col(p + r, q), row(r, q + s);
    col.set_block(0, 0, c);
    col.set_block(p, 0, a);
    row.set_block(0, 0, a);
    row.set_block(0, q, b);
    const double mu = std::max(op_norm(col), op_norm(row));
    const auto z = parrott_step(c, a, b, mu);
    ComplexMatrix full(p + r, q + s);
    full.set_block(0, 0, c);
    full.set_block(0, q, z);
    full.set_block(p, 0, a);
    full.set_block(p, q, b);
    const double excess = op_norm(full) - mu;
    worst_norm = std::max(worst_norm, excess);
    ok = ok && excess <= 1e-8;
  }
  for (int rep = 0; rep < 100; ++rep) {
    const std::size_t dim = 2 + rng.next_u64() % 5;
    const auto x = testsup::random_matrix(dim, dim, rng);
    const Flag f = testsup::random_flag(dim, rng);
    const double mu = nest_distance(x, f);
    const auto nil = nearest_in_nest(x, f);
    const double gap = std::abs(op_norm(x - nil) - mu);
    worst_gap = std::max(worst_gap, gap);
    ok = ok && gap <= 1e-7;
  }
  report(7, "norm-preserving completions attain the nest distance", ok,
         "max completion excess " + fmt(worst_norm) + ", max distance gap " +
             fmt(worst_gap));
}

void criterion_kernels() {
  Rng rng(mix_seed(8800, 0));
  double worst = 0;
  for (const std::size_t n : {2, 3, 5, 7}) {
    const auto h = testsup::random_hermitian(n, -1.0, 2.0, rng);
    const auto s = eig_hermitian(h);
    ComplexMatrix d(n, n);
    for (std::size_t i = 0; i < n; ++i) d(i, i) = s.eigenvalues[i];
    worst = std::max(worst, max_abs_diff(mul_adj(s.eigenvectors * d,
                                                 s.eigenvectors),
                                         h.matrix()));

    const auto psd = testsup::random_hermitian(n, 0.0, 3.0, rng);
    const auto root = psd_sqrt(psd);
    worst = std::max(
        worst, max_abs_diff(root.matrix() * root.matrix(), psd.matrix()));

    const auto x = testsup::random_matrix(n, n, rng);
    const auto u = haar_unitary(n, rng);
    const auto v = haar_unitary(n, rng);
    worst = std::max(worst, std::abs(op_norm(u * x * v) - op_norm(x)));
  }
  bool rank_ok = true;
  for (int rep = 0; rep < 20; ++rep) {
    const auto a = testsup::random_matrix(4, 4, rng);
    const auto b = testsup::random_matrix(4, 4, rng);
    rank_ok = rank_ok && rank_eps(a + b, 1e-10) <=
                             rank_eps(a, 1e-10) + rank_eps(b, 1e-10);
  }
  const bool ok = worst <= 1e-10 && rank_ok;
  report(8, "dense kernels: spectra, roots, ranks, invariance", ok,
         "max err " + fmt(worst) + (rank_ok ? "" : ", rank subadditivity broke"));
}

void criterion_monotone() {
  bool ok = true;
  double prev = 0.5;
  for (int i = 1; i <= 10000; ++i) {
    const double v = nu_finite(TraceValue::of_real(double(i) / 10000.0));
    ok = ok && v > prev;
    prev = v;
  }
  report(9, "distance is strictly increasing in the trace", ok,
         "10000-point grid, end " + fmt(prev));
}

}  // namespace

int main() {
  criterion_closed_form();
  criterion_certificates();
  criterion_lower_bound_sampling();
  criterion_oracle();
  criterion_trace_audit();
  criterion_identities();
  criterion_completions();
  criterion_kernels();
  criterion_monotone();
  std::printf("%s\n", failures == 0 ? "ALL CRITERIA PASSED"
                                    : "CRITERIA FAILED");
  return failures == 0 ? 0 : 1;
}
