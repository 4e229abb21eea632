#include "nildist/json_io.hpp"

#include <cmath>

#include "nildist/errors.hpp"

namespace nildist {

json matrix_to_json(const ComplexMatrix& m) {
  if (!m.is_square()) throw InputError("matrix_to_json: square matrix required");
  json entries = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      entries.push_back({m(i, j).real(), m(i, j).imag()});
  return json{{"dim", m.rows()}, {"entries", std::move(entries)}};
}

ComplexMatrix matrix_from_json(const json& j) {
  if (!j.is_object() || !j.contains("dim") || !j.contains("entries"))
    throw InputError("matrix_from_json: need {dim, entries}");
  if (!j["dim"].is_number_unsigned())
    throw InputError("matrix_from_json: dim must be a nonnegative integer");
  const std::size_t n = j["dim"].get<std::size_t>();
  const json& entries = j["entries"];
  if (!entries.is_array() || entries.size() != n * n)
    throw InputError("matrix_from_json: entries must hold dim*dim pairs");
  ComplexMatrix m(n, n);
  std::size_t idx = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t jj = 0; jj < n; ++jj, ++idx) {
      const json& e = entries[idx];
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() ||
          !e[1].is_number())
        throw InputError("matrix_from_json: each entry is [re, im]");
      const double re = e[0].get<double>(), im = e[1].get<double>();
      if (!std::isfinite(re) || !std::isfinite(im))
        throw InputError("matrix_from_json: non-finite entry");
      m(i, jj) = cdouble{re, im};
    }
  return m;
}

json flag_to_json(const Flag& f) {
  json mats = json::array();
  for (const auto& p : f.p) mats.push_back(matrix_to_json(p.matrix()));
  return json{{"n", f.length()}, {"matrices", std::move(mats)}};
}

Flag flag_from_json(const json& j) {
  if (!j.is_object() || !j.contains("n") || !j.contains("matrices"))
    throw InputError("flag_from_json: need {n, matrices}");
  if (!j["n"].is_number_unsigned())
    throw InputError("flag_from_json: n must be a nonnegative integer");
  const std::size_t n = j["n"].get<std::size_t>();
  const json& mats = j["matrices"];
  if (!mats.is_array() || mats.size() != n + 1)
    throw InputError("flag_from_json: need n+1 projections");
  std::vector<ProjectionMatrix> p;
  p.reserve(n + 1);
  for (const json& jm : mats)
    p.push_back(ProjectionMatrix(HermitianMatrix(matrix_from_json(jm))));
  return make_flag(std::move(p));
}

json certificate_to_json(const DistanceCertificate& c) {
  return json{{"n", c.n},
              {"m", c.m},
              {"reference", c.reference},
              {"achieved", c.achieved},
              {"nil_index", c.nil_index},
              {"P", matrix_to_json(c.p)},
              {"N", matrix_to_json(c.nilpotent)},
              {"flag", flag_to_json(c.flag)},
              {"verified", c.verified},
              {"failures", c.failures}};
}

json oracle_to_json(const OracleGap& g) {
  return json{{"n", g.n},
              {"m", g.m},
              {"nu_formula", g.nu_formula},
              {"oracle_value", g.oracle_value},
              {"gap", g.gap},
              {"restarts", g.restarts},
              {"seed", g.seed}};
}

json audit_to_json(const std::vector<AuditStep>& steps) {
  json arr = json::array();
  for (const auto& st : steps)
    arr.push_back(json{{"k", st.k},
                       {"trace_b", st.trace_b},
                       {"tau_diff", st.tau_diff},
                       {"r", st.r},
                       {"r_theta", st.r_theta},
                       {"tau_bound_ok", st.tau_bound_ok},
                       {"equality", st.equality},
                       {"equality_rank_ok", st.equality_rank_ok}});
  return arr;
}

json identity_report_to_json(const IdentitySuiteReport& rep) {
  json j{{"requested", rep.requested},
         {"samples", rep.samples},
         {"discarded", rep.discarded},
         {"agreements", rep.agreements},
         {"disagreements", rep.disagreements}};
  if (rep.first_disagreement) {
    const IdentitySample& s = *rep.first_disagreement;
    j["first_disagreement"] = json{{"first", matrix_to_json(s.first)},
                                   {"second", matrix_to_json(s.second)},
                                   {"theta", s.theta},
                                   {"lhs_margin", s.lhs_margin},
                                   {"rhs_margin", s.rhs_margin},
                                   {"lhs", s.lhs},
                                   {"rhs", s.rhs}};
  }
  return j;
}

}  // namespace nildist
