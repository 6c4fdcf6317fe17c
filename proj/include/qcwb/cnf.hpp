#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace qcwb {

// DIMACS-style literal: +v or -v for variable v >= 1.
using Lit = std::int32_t;
using Clause = std::vector<Lit>;

struct VarRole {
  enum class Kind : std::uint8_t { Original, Aux };
  Kind kind = Kind::Original;
  std::uint32_t index = 0;  // original index, or aux ordinal
  bool operator==(const VarRole&) const = default;
};

class CnfFormula {
 public:
  CnfFormula() = default;
  // Variables 1..n are originals 1..n.
  explicit CnfFormula(std::uint32_t num_original);

  std::uint32_t num_vars() const { return static_cast<std::uint32_t>(roles_.size()); }
  std::uint32_t num_original() const { return num_original_; }
  std::uint32_t num_aux() const { return num_vars() - num_original_; }
  const std::vector<Clause>& clauses() const { return clauses_; }
  const std::vector<VarRole>& roles() const { return roles_; }
  const VarRole& role(std::uint32_t var) const { return roles_.at(var - 1); }

  std::uint32_t new_aux();
  std::uint32_t new_original(std::uint32_t index);
  void add_clause(Clause c);

  // Variable ids of originals, ordered by original index.
  std::vector<std::uint32_t> original_vars() const;
  bool has_empty_clause() const;
  unsigned max_width() const;

  // value[v-1] in {0,1} for every variable.
  bool satisfied_by(const std::vector<std::uint8_t>& value) const;
  std::uint32_t count_satisfied(const std::vector<std::uint8_t>& value) const;

  bool operator==(const CnfFormula&) const = default;

 private:
  std::vector<VarRole> roles_;
  std::vector<Clause> clauses_;
  std::uint32_t num_original_ = 0;
  std::uint32_t next_aux_ = 0;
};

std::string to_dimacs(const CnfFormula& f);
// Sidecar JSON: {"num_vars": V, "original_vars": [[var, index], ...]}.
std::string write_var_map(const CnfFormula& f);
// Without a map every variable is original with index = variable id.
CnfFormula parse_dimacs(const std::string& text, const std::string& var_map_json = "");

CnfFormula load_cnf(const std::string& path, const std::string& map_path = "");
void save_cnf(const std::string& path, const CnfFormula& f);  // also writes path + ".map.json"

}  // namespace qcwb
