#include "qcwb/cnf.hpp"

#include "qcwb/errors.hpp"
#include "qcwb/poly_io.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <sstream>

namespace qcwb {

CnfFormula::CnfFormula(std::uint32_t num_original) : num_original_(num_original) {
  roles_.reserve(num_original);
  for (std::uint32_t i = 1; i <= num_original; ++i)
    roles_.push_back({VarRole::Kind::Original, i});
}

std::uint32_t CnfFormula::new_aux() {
  roles_.push_back({VarRole::Kind::Aux, next_aux_++});
  return num_vars();
}

std::uint32_t CnfFormula::new_original(std::uint32_t index) {
  for (const auto& r : roles_)
    if (r.kind == VarRole::Kind::Original && r.index == index)
      throw InputError("duplicate original index " + std::to_string(index));
  roles_.push_back({VarRole::Kind::Original, index});
  ++num_original_;
  return num_vars();
}

void CnfFormula::add_clause(Clause c) {
  for (Lit l : c)
    if (l == 0 || static_cast<std::uint32_t>(std::abs(l)) > num_vars())
      throw InputError("clause literal out of range: " + std::to_string(l));
  clauses_.push_back(std::move(c));
}

std::vector<std::uint32_t> CnfFormula::original_vars() const {
  std::vector<std::uint32_t> vars;
  for (std::uint32_t v = 1; v <= num_vars(); ++v)
    if (roles_[v - 1].kind == VarRole::Kind::Original) vars.push_back(v);
  std::sort(vars.begin(), vars.end(), [&](std::uint32_t a, std::uint32_t b) {
    return roles_[a - 1].index < roles_[b - 1].index;
  });
  return vars;
}

bool CnfFormula::has_empty_clause() const {
  return std::any_of(clauses_.begin(), clauses_.end(), [](const Clause& c) { return c.empty(); });
}

unsigned CnfFormula::max_width() const {
  std::size_t w = 0;
  for (const auto& c : clauses_) w = std::max(w, c.size());
  return static_cast<unsigned>(w);
}

std::uint32_t CnfFormula::count_satisfied(const std::vector<std::uint8_t>& value) const {
  if (value.size() != num_vars()) throw InputError("assignment length does not match formula");
  std::uint32_t n = 0;
  for (const auto& c : clauses_)
    for (Lit l : c)
      if ((value[std::abs(l) - 1] != 0) == (l > 0)) {
        ++n;
        break;
      }
  return n;
}

bool CnfFormula::satisfied_by(const std::vector<std::uint8_t>& value) const {
  return count_satisfied(value) == clauses_.size();
}

std::string to_dimacs(const CnfFormula& f) {
  std::ostringstream out;
  out << "p cnf " << f.num_vars() << ' ' << f.clauses().size() << '\n';
  for (const auto& c : f.clauses()) {
    for (Lit l : c) out << l << ' ';
    out << "0\n";
  }
  return out.str();
}

std::string write_var_map(const CnfFormula& f) {
  nlohmann::json j;
  j["num_vars"] = f.num_vars();
  auto arr = nlohmann::json::array();
  for (std::uint32_t v = 1; v <= f.num_vars(); ++v)
    if (f.role(v).kind == VarRole::Kind::Original) arr.push_back({v, f.role(v).index});
  j["original_vars"] = arr;
  return j.dump() + "\n";
}

CnfFormula parse_dimacs(const std::string& text, const std::string& var_map_json) {
  std::istringstream in(text);
  std::string line;
  long long nv = -1, nc = -1;
  std::vector<Clause> clauses;
  Clause cur;
  bool in_clause = false;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok)) continue;
    if (tok == "c" || tok[0] == 'c' || tok == "%") continue;
    if (tok == "p") {
      std::string fmt;
      if (!(ls >> fmt >> nv >> nc) || fmt != "cnf" || nv < 0 || nc < 0)
        throw InputError("bad DIMACS header");
      continue;
    }
    if (nv < 0) throw InputError("clause before DIMACS header");
    ls.clear();
    ls.str(line);
    long long x;
    while (ls >> x) {
      if (x == 0) {
        clauses.push_back(cur);
        cur.clear();
        in_clause = false;
      } else {
        if (std::llabs(x) > nv) throw InputError("literal exceeds declared variable count");
        cur.push_back(static_cast<Lit>(x));
        in_clause = true;
      }
    }
    if (!ls.eof()) throw InputError("non-numeric token in clause line");
  }
  if (nv < 0) throw InputError("missing DIMACS header");
  if (in_clause) throw InputError("unterminated clause");
  if (static_cast<long long>(clauses.size()) != nc)
    throw InputError("clause count does not match header");

  CnfFormula f;
  if (var_map_json.empty()) {
    f = CnfFormula(static_cast<std::uint32_t>(nv));
  } else {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(var_map_json);
      if (j.at("num_vars").get<long long>() != nv) throw InputError("variable map size mismatch");
      std::vector<long long> index(nv + 1, -1);
      for (const auto& e : j.at("original_vars")) {
        long long v = e.at(0).get<long long>(), i = e.at(1).get<long long>();
        if (v < 1 || v > nv || i < 1) throw InputError("variable map entry out of range");
        index[v] = i;
      }
      for (long long v = 1; v <= nv; ++v) {
        if (index[v] >= 0)
          f.new_original(static_cast<std::uint32_t>(index[v]));
        else
          f.new_aux();
      }
    } catch (const nlohmann::json::exception& e) {
      throw InputError(std::string("malformed variable map: ") + e.what());
    }
  }
  for (auto& c : clauses) f.add_clause(std::move(c));
  return f;
}

CnfFormula load_cnf(const std::string& path, const std::string& map_path) {
  std::string map;
  if (!map_path.empty()) {
    map = read_text_file(map_path);
  } else if (std::filesystem::exists(path + ".map.json")) {
    map = read_text_file(path + ".map.json");
  }
  return parse_dimacs(read_text_file(path), map);
}

void save_cnf(const std::string& path, const CnfFormula& f) {
  write_text_file(path, to_dimacs(f));
  write_text_file(path + ".map.json", write_var_map(f));
}

}  // namespace qcwb
