#include "qcwb/clause_poly.hpp"

#include "qcwb/errors.hpp"

#include <algorithm>
#include <cstdlib>

namespace qcwb {

MtpInstance cnf_to_mtp(const CnfFormula& f, unsigned max_width) {
  const auto n = f.num_vars();
  const auto m = f.clauses().size();
  if (m == 0) {
    PolyBuilder pb;
    pb.add({}, 1);
    return MtpInstance(pb.build(n, max_width, 1), Rational(1), Rational(1));
  }
  PolyBuilder pb;
  for (const auto& clause : f.clauses()) {
    if (clause.size() > max_width)
      throw InputError("clause of width " + std::to_string(clause.size()) +
                       " exceeds max width " + std::to_string(max_width));
    Clause c = clause;
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
    bool tautology = false;
    for (Lit l : c)
      if (std::binary_search(c.begin(), c.end(), -l)) tautology = true;
    pb.add({}, 1);
    if (tautology) continue;
    // prod (1 - x~_l): positive literal contributes (1 - x), negative contributes x.
    std::vector<std::uint32_t> pos, neg;
    for (Lit l : c) (l > 0 ? pos : neg).push_back(static_cast<std::uint32_t>(std::abs(l)));
    for (std::uint64_t s = 0; s < (std::uint64_t{1} << pos.size()); ++s) {
      VarSet vars = neg;
      int sign = 1;
      for (std::size_t i = 0; i < pos.size(); ++i)
        if ((s >> i) & 1U) {
          vars.push_back(pos[i]);
          sign = -sign;
        }
      pb.add(std::move(vars), -sign);
    }
  }
  return MtpInstance(pb.build(n, max_width, static_cast<std::int64_t>(m)), Rational(1),
                     Rational(BigInt(1), BigInt(static_cast<std::int64_t>(m))));
}

namespace {

void reduce_clause(CnfFormula& out, Clause c, unsigned k) {
  while (c.size() > k) {
    const Lit z = static_cast<Lit>(out.new_aux());
    Clause head(c.begin(), c.begin() + (k - 1));
    Clause tail(c.begin() + (k - 1), c.end());
    head.push_back(z);
    out.add_clause(std::move(head));
    for (Lit t : tail) out.add_clause({z, -t});
    tail.insert(tail.begin(), -z);
    c = std::move(tail);
  }
  out.add_clause(std::move(c));
}

}  // namespace

CnfFormula width_reduce(const CnfFormula& f, unsigned k) {
  if (k < 3) throw InputError("width reduction needs k >= 3");
  CnfFormula out;
  for (std::uint32_t v = 1; v <= f.num_vars(); ++v) {
    if (f.role(v).kind == VarRole::Kind::Original)
      out.new_original(f.role(v).index);
    else
      out.new_aux();
  }
  for (const auto& c : f.clauses()) reduce_clause(out, c, k);
  return out;
}

}  // namespace qcwb
