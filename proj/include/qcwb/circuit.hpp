#pragma once

#include "qcwb/cnf.hpp"
#include "qcwb/poly.hpp"

#include <cstdint>
#include <vector>

namespace qcwb {

// A wire: either a compile-time constant or a CNF literal.
class Signal {
 public:
  static Signal constant(bool v) { return Signal(0, v); }
  static Signal literal(Lit l) { return Signal(l, false); }

  bool is_const() const { return lit_ == 0; }
  bool value() const { return value_; }
  Lit lit() const { return lit_; }
  Signal operator!() const { return is_const() ? constant(!value_) : literal(-lit_); }
  bool operator==(const Signal&) const = default;

  // Value under a full assignment (value[v-1] in {0,1}).
  bool eval(const std::vector<std::uint8_t>& value) const;

 private:
  Signal(Lit l, bool v) : lit_(l), value_(v) {}
  Lit lit_;
  bool value_;
};

// Little-endian bits; two's complement when is_signed.
struct WireBundle {
  std::vector<Signal> bits;
  bool is_signed = false;
  std::size_t width() const { return bits.size(); }
};

std::int64_t bundle_value(const WireBundle& b, const std::vector<std::uint8_t>& value);

// Gate-level Tseytin builder. Gates fold constants and trivially related
// inputs; every allocated gate variable is functionally determined by its inputs.
class CircuitBuilder {
 public:
  explicit CircuitBuilder(CnfFormula base) : f_(std::move(base)) {}

  Signal var(std::uint32_t v) const { return Signal::literal(static_cast<Lit>(v)); }
  Signal and_gate(std::vector<Signal> in);
  Signal or_gate(std::vector<Signal> in);
  Signal xor_gate(Signal a, Signal b);
  Signal maj_gate(Signal a, Signal b, Signal c);

  // Asserts s: unit clause, nothing for constant true, empty clause for constant false.
  void require(Signal s);
  void add_clause(Clause c) { f_.add_clause(std::move(c)); }

  const CnfFormula& formula() const { return f_; }
  CnfFormula take() { return std::move(f_); }

 private:
  CnfFormula f_;
};

// g <-> AND of the given CNF variables; empty set folds to constant true.
Signal encode_monomial(CircuitBuilder& b, const std::vector<std::uint32_t>& vars);
// Bundle equal to v when g holds and 0 otherwise. v >= 0 gives an unsigned
// bundle, v < 0 a two's complement one; width must fit v.
WireBundle scale_by_constant(Signal g, std::int64_t v, unsigned width);
// Ripple-carry sum; one bit wider than the wider (sign-adjusted) operand.
WireBundle add_bundles(CircuitBuilder& b, const WireBundle& x, const WireBundle& y);
// Signal for value(bundle) >= t; folds to a constant when t is out of range.
Signal compare_geq(CircuitBuilder& b, const WireBundle& x, std::int64_t t);

struct SatStats {
  unsigned sum_width = 0;
  bool sum_signed = false;
};

// Circuit "D * P(y) >= ceil(D * a)" asserted true. Originals are variables
// 1..N in order; auxiliaries follow in allocation order.
CnfFormula mtp_to_sat(const MtpInstance& inst, SatStats* stats = nullptr);

}  // namespace qcwb
