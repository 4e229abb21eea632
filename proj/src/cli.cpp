#include "nildist/cli.hpp"

#include <cstdint>
#include <fstream>
#include <ostream>
#include <string>

#include "CLI11.hpp"
#include "nildist/errors.hpp"
#include "nildist/formula.hpp"
#include "nildist/json_io.hpp"

namespace nildist {

namespace {

void emit(const json& doc, const std::string& output, std::ostream& out,
          std::ostream& err) {
  const std::string text = doc.dump(2);
  if (output.empty()) {
    out << text << "\n";
    return;
  }
  std::ofstream f(output);
  if (!f) throw InputError("cannot open output file: " + output);
  f << text << "\n";
  err << "wrote " << output << "\n";
}

struct NuArgs {
  double trace = 0;
  std::size_t dim = 0, rank = 0;
  bool infinite = false, coproj_finite = false;
  std::string output;
};

struct RankedArgs {
  std::size_t dim = 0, rank = 0;
  std::string output;
};

struct OracleArgs {
  std::size_t dim = 0, rank = 0, restarts = 32;
  std::uint64_t seed = 42;
  std::string output;
};

struct AuditArgs {
  std::size_t dim = 0, rank = 0;
  bool report_only = false;
  std::string output;
};

struct IdentityArgs {
  std::size_t dim = 0, samples = 250;
  double trace = 0, band = 1e-6;
  std::uint64_t seed = 42;
  std::string output;
};

void check_rank_dim(std::size_t dim, std::size_t rank, std::size_t dim_cap) {
  if (dim == 0 || dim > dim_cap || rank == 0 || rank > dim) {
    std::string msg = "need 1 <= rank <= dim <= ";
    msg += std::to_string(dim_cap);
    throw InputError(msg);
  }
}

int run_nu(const NuArgs& a, bool have_trace, bool have_rank, std::ostream& out,
           std::ostream& err) {
  const int ways = int(have_trace) + int(have_rank) + int(a.infinite);
  if (ways != 1)
    throw InputError(
        "nu: give exactly one of --trace, --dim/--rank, --infinite");
  if (a.infinite) {
    emit(json{{"infinite", true},
              {"coprojection_finite", a.coproj_finite},
              {"nu", nu_infinite(a.coproj_finite)}},
         a.output, out, err);
    return 0;
  }
  const TraceValue tau = have_trace
                             ? TraceValue::of_real(a.trace)
                             : TraceValue::of_rank(a.rank, a.dim);
  const ThetaAngles th = theta_of_trace(tau);
  emit(json{{"tau", tau.value}, {"theta", th.theta}, {"nu", nu_finite(tau)}},
       a.output, out, err);
  return 0;
}

int run_certificate(const RankedArgs& a, std::ostream& out, std::ostream& err) {
  check_rank_dim(a.dim, a.rank, 12);
  const DistanceCertificate cert = certificate(a.dim, a.rank);
  emit(certificate_to_json(cert), a.output, out, err);
  if (!cert.verified) {
    err << "certificate failed verification";
    for (const auto& f : cert.failures) err << ": " << f;
    err << "\n";
    return 3;
  }
  return 0;
}

int run_oracle(const OracleArgs& a, std::ostream& out, std::ostream& err) {
  check_rank_dim(a.dim, a.rank, 5);
  if (a.restarts == 0) throw InputError("oracle: need at least one restart");
  emit(oracle_to_json(oracle_gap(a.dim, a.rank, a.restarts, a.seed)), a.output,
       out, err);
  return 0;
}

int run_audit(const AuditArgs& a, std::ostream& out, std::ostream& err) {
  check_rank_dim(a.dim, a.rank, 12);
  const BetaSchedule sched = beta_schedule(a.dim, a.rank);
  const OperatorChain chain = build_chain(sched);
  const auto steps = lb_audit(chain, sched.angles, !a.report_only);
  emit(json{{"n", a.dim},
            {"m", a.rank},
            {"theta", sched.angles.theta},
            {"nu", nu_finite(TraceValue::of_rank(a.rank, a.dim))},
            {"steps", audit_to_json(steps)}},
       a.output, out, err);
  return 0;
}

int run_identities(const IdentityArgs& a, std::ostream& out,
                   std::ostream& err) {
  if (a.dim == 0 || a.dim > 8)
    throw InputError("identities: need 1 <= dim <= 8");
  if (a.samples == 0) throw InputError("identities: need at least one sample");
  const ThetaAngles th = theta_of_trace(TraceValue::of_real(a.trace));
  const IdentitySuiteReport ord =
      sample_ordering_identity(a.dim, th, a.samples, a.seed, a.band);
  const IdentitySuiteReport bnd =
      sample_bound_identity(a.dim, th, a.samples, a.seed, a.band);
  emit(json{{"dim", a.dim},
            {"theta", th.theta},
            {"band", a.band},
            {"ordering", identity_report_to_json(ord)},
            {"bound", identity_report_to_json(bnd)}},
       a.output, out, err);
  if (ord.disagreements > 0 || bnd.disagreements > 0) {
    err << "identity disagreement: ordering " << ord.disagreements
        << ", bound " << bnd.disagreements << "\n";
    return 4;
  }
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err) {
  CLI::App app{
      "operator-norm distance from a projection to the nilpotent matrices"};
  app.require_subcommand(1);

  NuArgs nu_args;
  auto* nu = app.add_subcommand(
      "nu", "closed-form distance (2 cos theta)^-1, theta = tau pi/(1+2 tau)");
  auto* nu_trace =
      nu->add_option("--trace", nu_args.trace, "normalized trace in (0, 1]");
  auto* nu_dim = nu->add_option("--dim", nu_args.dim, "matrix dimension");
  auto* nu_rank = nu->add_option("--rank", nu_args.rank, "projection rank");
  auto* nu_inf = nu->add_flag("--infinite", nu_args.infinite,
                              "infinite-multiplicity projection");
  nu->add_flag("--coprojection-finite", nu_args.coproj_finite,
               "complement has finite rank")
      ->needs(nu_inf);
  nu->add_option("--output", nu_args.output, "write JSON here instead");
  nu_rank->needs(nu_dim);
  nu_dim->needs(nu_rank);
  nu_trace->excludes(nu_dim)->excludes(nu_inf);
  nu_dim->excludes(nu_inf);

  RankedArgs cert_args;
  auto* cert = app.add_subcommand(
      "certificate", "projection, flag, and nilpotent witness for rank/dim");
  cert->add_option("--dim", cert_args.dim, "matrix dimension (<= 12)")
      ->required();
  cert->add_option("--rank", cert_args.rank, "projection rank")->required();
  cert->add_option("--output", cert_args.output, "write JSON here instead");

  OracleArgs oracle_args;
  auto* orc = app.add_subcommand(
      "oracle", "brute-force flag minimum against the closed form (dim <= 5)");
  orc->add_option("--dim", oracle_args.dim, "matrix dimension (<= 5)")
      ->required();
  orc->add_option("--rank", oracle_args.rank, "projection rank")->required();
  orc->add_option("--restarts", oracle_args.restarts, "multistart count");
  orc->add_option("--seed", oracle_args.seed, "base seed");
  orc->add_option("--output", oracle_args.output, "write JSON here instead");

  AuditArgs audit_args;
  auto* aud = app.add_subcommand(
      "audit", "per-step trace audit of the constructed chain");
  aud->add_option("--dim", audit_args.dim, "matrix dimension (<= 12)")
      ->required();
  aud->add_option("--rank", audit_args.rank, "projection rank")->required();
  aud->add_flag("--report-only", audit_args.report_only,
                "skip the per-step objective gate");
  aud->add_option("--output", audit_args.output, "write JSON here instead");

  IdentityArgs id_args;
  auto* ident = app.add_subcommand(
      "identities", "randomized agreement check of the two equivalences");
  ident->add_option("--dim", id_args.dim, "matrix dimension (<= 8)")
      ->required();
  ident->add_option("--trace", id_args.trace, "normalized trace in (0, 1]")
      ->required();
  ident->add_option("--samples", id_args.samples, "samples per equivalence");
  ident->add_option("--seed", id_args.seed, "base seed");
  ident->add_option("--tol", id_args.band,
                    "discard samples with a margin inside this band");
  ident->add_option("--output", id_args.output, "write JSON here instead");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return 2;
  }

  try {
    if (nu->parsed())
      return run_nu(nu_args, nu_trace->count() > 0, nu_dim->count() > 0, out,
                    err);
    if (cert->parsed()) return run_certificate(cert_args, out, err);
    if (orc->parsed()) return run_oracle(oracle_args, out, err);
    if (aud->parsed()) return run_audit(audit_args, out, err);
    if (ident->parsed()) return run_identities(id_args, out, err);
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace nildist
