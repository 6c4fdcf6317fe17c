#include "qcwb/model_count.hpp"

#include "qcwb/errors.hpp"

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <map>

namespace qcwb {

namespace {

class Dpll {
 public:
  Dpll(const CnfFormula& f, unsigned projection_budget, std::size_t max_full_models = 0)
      : max_models_(max_full_models), f_(f), nv_(f.num_vars()), value_(nv_ + 1, -1), occ_(2 * (nv_ + 1)) {
    const auto& cl = f.clauses();
    sat_.assign(cl.size(), 0);
    false_.assign(cl.size(), 0);
    for (std::size_t c = 0; c < cl.size(); ++c)
      for (Lit l : cl[c]) occ_[slot(l)].push_back(static_cast<std::uint32_t>(c));
    originals_ = f.original_vars();
    if (originals_.size() > 63) throw ResourceError("projection over more than 63 originals");
    if (originals_.size() > projection_budget)
      throw ResourceError("projection budget exceeded");
    position_.assign(nv_ + 1, -1);
    for (std::size_t i = 0; i < originals_.size(); ++i) position_[originals_[i]] = static_cast<int>(i);
  }

  // Assign decisions as units, then search.
  void run(const std::vector<Lit>& assumptions) {
    if (f_.has_empty_clause()) return;
    for (Lit l : assumptions) {
      if (value_of(l) == 0) return;
      if (value_of(l) < 0 && !assign(l)) return;
    }
    // Initial units.
    for (std::size_t c = 0; c < f_.clauses().size(); ++c)
      if (f_.clauses()[c].size() == 1) queue_.push_back(f_.clauses()[c][0]);
    search();
  }

  BigInt total = 0;
  std::map<std::uint64_t, BigInt> per_projection;
  std::vector<std::vector<std::uint8_t>> models;
  bool models_overflow = false;

 private:
  static std::size_t slot(Lit l) { return 2 * static_cast<std::size_t>(std::abs(l)) + (l < 0); }

  // 1 true, 0 false, -1 unassigned.
  int value_of(Lit l) const {
    int v = value_[std::abs(l)];
    if (v < 0) return -1;
    return l > 0 ? v : 1 - v;
  }

  bool assign(Lit l) {
    const auto var = static_cast<std::uint32_t>(std::abs(l));
    value_[var] = l > 0 ? 1 : 0;
    trail_.push_back(var);
    bool ok = true;
    for (auto c : occ_[slot(l)])
      if (sat_[c]++ == 0) ++num_sat_;
    for (auto c : occ_[slot(-l)]) {
      ++false_[c];
      if (sat_[c] == 0) {
        const auto size = f_.clauses()[c].size();
        if (false_[c] == size)
          ok = false;
        else if (false_[c] + 1 == size)
          pending_units_.push_back(c);
      }
    }
    return ok;
  }

  void unassign_to(std::size_t mark) {
    while (trail_.size() > mark) {
      const auto var = trail_.back();
      trail_.pop_back();
      const Lit l = value_[var] == 1 ? static_cast<Lit>(var) : -static_cast<Lit>(var);
      for (auto c : occ_[slot(l)])
        if (--sat_[c] == 0) --num_sat_;
      for (auto c : occ_[slot(-l)]) --false_[c];
      value_[var] = -1;
    }
  }

  bool propagate() {
    for (Lit l : queue_) {
      int v = value_of(l);
      if (v == 0) {
        queue_.clear();
        pending_units_.clear();
        return false;
      }
      if (v < 0 && !assign(l)) {
        queue_.clear();
        pending_units_.clear();
        return false;
      }
    }
    queue_.clear();
    while (!pending_units_.empty()) {
      const auto c = pending_units_.back();
      pending_units_.pop_back();
      if (sat_[c] > 0) continue;
      Lit unit = 0;
      for (Lit l : f_.clauses()[c])
        if (value_of(l) < 0) {
          unit = l;
          break;
        }
      if (unit == 0) {
        pending_units_.clear();
        return false;
      }
      if (!assign(unit)) {
        pending_units_.clear();
        return false;
      }
    }
    return true;
  }

  void leaf() {
    std::vector<std::uint32_t> free_orig;
    unsigned free_aux = 0;
    std::uint64_t base = 0;
    for (std::uint32_t v = 1; v <= nv_; ++v) {
      if (position_[v] >= 0) {
        if (value_[v] < 0)
          free_orig.push_back(static_cast<std::uint32_t>(position_[v]));
        else if (value_[v] == 1)
          base |= std::uint64_t{1} << position_[v];
      } else if (value_[v] < 0) {
        ++free_aux;
      }
    }
    BigInt ext = BigInt(1) << free_aux;
    total += ext << free_orig.size();
    if (free_orig.size() > 30) throw ResourceError("too many free originals to list");
    for (std::uint64_t s = 0; s < (std::uint64_t{1} << free_orig.size()); ++s) {
      std::uint64_t m = base;
      for (std::size_t i = 0; i < free_orig.size(); ++i)
        if ((s >> i) & 1U) m |= std::uint64_t{1} << free_orig[i];
      per_projection[m] += ext;
    }
    if (max_models_ > 0 && !models_overflow) collect_models();
  }

  void collect_models() {
    std::vector<std::uint32_t> free_vars;
    for (std::uint32_t v = 1; v <= nv_; ++v)
      if (value_[v] < 0) free_vars.push_back(v);
    if (free_vars.size() > 20 || models.size() + (std::size_t{1} << free_vars.size()) > max_models_) {
      models_overflow = true;
      models.clear();
      return;
    }
    std::vector<std::uint8_t> base(nv_);
    for (std::uint32_t v = 1; v <= nv_; ++v) base[v - 1] = value_[v] == 1;
    for (std::uint64_t s = 0; s < (std::uint64_t{1} << free_vars.size()); ++s) {
      auto m = base;
      for (std::size_t i = 0; i < free_vars.size(); ++i) m[free_vars[i] - 1] = (s >> i) & 1U;
      models.push_back(std::move(m));
    }
  }

  std::uint32_t pick() const {
    for (auto v : originals_)
      if (value_[v] < 0) return v;
    for (std::uint32_t v = 1; v <= nv_; ++v)
      if (value_[v] < 0) return v;
    return 0;
  }

  void search() {
    if (!propagate()) return;
    if (num_sat_ == f_.clauses().size()) {
      leaf();
      return;
    }
    const auto v = pick();
    if (v == 0) return;  // unreachable when clauses remain unsatisfied
    for (Lit l : {-static_cast<Lit>(v), static_cast<Lit>(v)}) {
      const auto mark = trail_.size();
      if (assign(l)) search();
      pending_units_.clear();
      unassign_to(mark);
    }
  }

  std::size_t max_models_;
  const CnfFormula& f_;
  std::uint32_t nv_;
  std::vector<int> value_;
  std::vector<std::vector<std::uint32_t>> occ_;
  std::vector<std::uint32_t> sat_, false_;
  std::size_t num_sat_ = 0;
  std::vector<std::uint32_t> trail_;
  std::vector<Lit> queue_;
  std::vector<std::uint32_t> pending_units_;
  std::vector<std::uint32_t> originals_;
  std::vector<int> position_;
};

ModelCount finish(BigInt total, const std::map<std::uint64_t, BigInt>& per, std::size_t n) {
  ModelCount r;
  r.total = std::move(total);
  r.max_extensions = 0;
  for (const auto& [m, c] : per) {
    r.projections.push_back(Assignment::from_mask(n, m));
    if (c > r.max_extensions) r.max_extensions = c;
  }
  std::sort(r.projections.begin(), r.projections.end());
  return r;
}

}  // namespace

ModelCount count_models(const CnfFormula& f, unsigned projection_budget,
                        std::size_t max_full_models) {
  Dpll d(f, projection_budget, max_full_models);
  d.run({});
  auto r = finish(d.total, d.per_projection, f.num_original());
  if (max_full_models > 0 && !d.models_overflow) {
    r.models = std::move(d.models);
    std::sort(r.models.begin(), r.models.end());
    r.models_complete = true;
  }
  return r;
}

ModelCount count_models_parallel(const CnfFormula& f, unsigned projection_budget) {
  const auto originals = f.original_vars();
  const unsigned split = static_cast<unsigned>(std::min<std::size_t>(originals.size(), 6));
  const int parts = 1 << split;
  std::vector<BigInt> totals(parts);
  std::vector<std::map<std::uint64_t, BigInt>> maps(parts);
  std::vector<std::exception_ptr> errors(parts);
#pragma omp parallel for schedule(dynamic)
  for (int p = 0; p < parts; ++p) try {
    std::vector<Lit> assumptions;
    for (unsigned i = 0; i < split; ++i) {
      const Lit v = static_cast<Lit>(originals[i]);
      assumptions.push_back(((p >> i) & 1) ? v : -v);
    }
    Dpll d(f, projection_budget);
    d.run(assumptions);
    totals[p] = d.total;
    maps[p] = std::move(d.per_projection);
  } catch (...) {
    errors[p] = std::current_exception();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  BigInt total = 0;
  std::map<std::uint64_t, BigInt> merged;
  for (int p = 0; p < parts; ++p) {
    total += totals[p];
    for (auto& [m, c] : maps[p]) merged[m] += c;
  }
  return finish(total, merged, f.num_original());
}

ModelCount count_models_truth_table(const CnfFormula& f) {
  const auto nv = f.num_vars();
  if (nv > 30) throw ResourceError("truth table above 30 variables");
  const auto originals = f.original_vars();
  std::vector<std::uint8_t> value(nv);
  BigInt total = 0;
  std::map<std::uint64_t, BigInt> per;
  for (std::uint64_t x = 0; x < (std::uint64_t{1} << nv); ++x) {
    for (std::uint32_t v = 0; v < nv; ++v) value[v] = (x >> v) & 1U;
    if (!f.satisfied_by(value)) continue;
    total += 1;
    std::uint64_t m = 0;
    for (std::size_t i = 0; i < originals.size(); ++i)
      if (value[originals[i] - 1]) m |= std::uint64_t{1} << i;
    per[m] += 1;
  }
  return finish(total, per, f.num_original());
}

}  // namespace qcwb
