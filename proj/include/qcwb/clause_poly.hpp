#pragma once

#include "qcwb/cnf.hpp"
#include "qcwb/poly.hpp"

namespace qcwb {

// P(x) = (1/m) sum_j Q_j(x), Q_j = 1 - prod_{l in C_j} (1 - x~_l), with
// threshold a = 1 and gap 1/m. Polynomial variables are the CNF variables.
// An empty formula maps to P = 1.
MtpInstance cnf_to_mtp(const CnfFormula& f, unsigned max_width = 3);

// Splits clauses wider than k with link variables z <-> OR(tail); the link
// is functionally determined, so model counts are preserved. Requires k >= 3.
CnfFormula width_reduce(const CnfFormula& f, unsigned k);

}  // namespace qcwb
