#pragma once

#include <vector>

#include "json.hpp"
#include "nildist/chain.hpp"
#include "nildist/nest.hpp"
#include "nildist/oracle.hpp"

namespace nildist {

using json = nlohmann::json;

/* {"dim": n, "entries": [[re, im], ...]} row-major, n*n pairs. */
json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const json& j);

/* {"n": length, "matrices": [P_0 .. P_n]} */
json flag_to_json(const Flag& f);
Flag flag_from_json(const json& j);

json certificate_to_json(const DistanceCertificate& c);
json oracle_to_json(const OracleGap& g);
json audit_to_json(const std::vector<AuditStep>& steps);
json identity_report_to_json(const IdentitySuiteReport& rep);

}  // namespace nildist
