#include "qcwb/circuit.hpp"

#include "qcwb/errors.hpp"

#include <algorithm>
#include <cstdlib>

namespace qcwb {

bool Signal::eval(const std::vector<std::uint8_t>& value) const {
  if (is_const()) return value_;
  const bool v = value.at(std::abs(lit_) - 1) != 0;
  return lit_ > 0 ? v : !v;
}

std::int64_t bundle_value(const WireBundle& b, const std::vector<std::uint8_t>& value) {
  std::int64_t s = 0;
  const auto w = b.width();
  for (std::size_t i = 0; i < w; ++i) {
    if (!b.bits[i].eval(value)) continue;
    if (b.is_signed && i + 1 == w)
      s -= std::int64_t{1} << i;
    else
      s += std::int64_t{1} << i;
  }
  return s;
}

namespace {

// Drops neutral constants and duplicates; returns true if the absorbing
// constant (or a complementary pair) is present.
bool normalize(std::vector<Signal>& in, bool neutral) {
  std::vector<Signal> out;
  for (const auto& s : in) {
    if (s.is_const()) {
      if (s.value() == neutral) continue;
      return true;
    }
    if (std::find(out.begin(), out.end(), s) != out.end()) continue;
    if (std::find(out.begin(), out.end(), !s) != out.end()) return true;
    out.push_back(s);
  }
  in = std::move(out);
  return false;
}

}  // namespace

Signal CircuitBuilder::and_gate(std::vector<Signal> in) {
  if (normalize(in, true)) return Signal::constant(false);
  if (in.empty()) return Signal::constant(true);
  if (in.size() == 1) return in[0];
  const Lit g = static_cast<Lit>(f_.new_aux());
  Clause big{g};
  for (const auto& s : in) {
    f_.add_clause({-g, s.lit()});
    big.push_back(-s.lit());
  }
  f_.add_clause(std::move(big));
  return Signal::literal(g);
}

Signal CircuitBuilder::or_gate(std::vector<Signal> in) {
  if (normalize(in, false)) return Signal::constant(true);
  if (in.empty()) return Signal::constant(false);
  if (in.size() == 1) return in[0];
  const Lit g = static_cast<Lit>(f_.new_aux());
  Clause big{-g};
  for (const auto& s : in) {
    f_.add_clause({g, -s.lit()});
    big.push_back(s.lit());
  }
  f_.add_clause(std::move(big));
  return Signal::literal(g);
}

Signal CircuitBuilder::xor_gate(Signal a, Signal b) {
  if (a.is_const()) return a.value() ? !b : b;
  if (b.is_const()) return b.value() ? !a : a;
  if (a == b) return Signal::constant(false);
  if (a == !b) return Signal::constant(true);
  const Lit z = static_cast<Lit>(f_.new_aux());
  const Lit x = a.lit(), y = b.lit();
  f_.add_clause({-z, x, y});
  f_.add_clause({-z, -x, -y});
  f_.add_clause({z, -x, y});
  f_.add_clause({z, x, -y});
  return Signal::literal(z);
}

Signal CircuitBuilder::maj_gate(Signal a, Signal b, Signal c) {
  for (int r = 0; r < 3; ++r) {
    if (a.is_const()) return a.value() ? or_gate({b, c}) : and_gate({b, c});
    std::swap(a, b);
    std::swap(b, c);
  }
  if (a == b || a == c) return a;
  if (b == c) return b;
  if (a == !b) return c;
  if (a == !c) return b;
  if (b == !c) return a;
  const Lit m = static_cast<Lit>(f_.new_aux());
  const Lit x = a.lit(), y = b.lit(), z = c.lit();
  f_.add_clause({-x, -y, m});
  f_.add_clause({-x, -z, m});
  f_.add_clause({-y, -z, m});
  f_.add_clause({x, y, -m});
  f_.add_clause({x, z, -m});
  f_.add_clause({y, z, -m});
  return Signal::literal(m);
}

void CircuitBuilder::require(Signal s) {
  if (s.is_const()) {
    if (!s.value()) f_.add_clause({});
    return;
  }
  f_.add_clause({s.lit()});
}

Signal encode_monomial(CircuitBuilder& b, const std::vector<std::uint32_t>& vars) {
  std::vector<Signal> in;
  for (auto v : vars) in.push_back(b.var(v));
  return b.and_gate(std::move(in));
}

WireBundle scale_by_constant(Signal g, std::int64_t v, unsigned width) {
  if (width == 0 || width > 63) throw InputError("bundle width must be in [1, 63]");
  WireBundle out;
  out.is_signed = v < 0;
  if (v >= 0 && (v >> width) != 0) throw InputError("constant does not fit unsigned width");
  if (v < 0 && v < -(std::int64_t{1} << (width - 1)))
    throw InputError("constant does not fit signed width");
  const auto bits = static_cast<std::uint64_t>(v);
  for (unsigned i = 0; i < width; ++i)
    out.bits.push_back(((bits >> i) & 1U) ? g : Signal::constant(false));
  return out;
}

WireBundle add_bundles(CircuitBuilder& b, const WireBundle& x, const WireBundle& y) {
  const bool sgn = x.is_signed || y.is_signed;
  auto eff = [&](const WireBundle& w) { return w.width() + ((sgn && !w.is_signed) ? 1 : 0); };
  const std::size_t W = std::max(eff(x), eff(y)) + 1;
  if (W > 63) throw ResourceError("sum bundle wider than 63 bits");
  auto bit = [&](const WireBundle& w, std::size_t i) {
    if (i < w.width()) return w.bits[i];
    if (w.is_signed && w.width() > 0) return w.bits.back();
    return Signal::constant(false);
  };
  WireBundle out;
  out.is_signed = sgn;
  Signal carry = Signal::constant(false);
  for (std::size_t i = 0; i < W; ++i) {
    const Signal a = bit(x, i), c = bit(y, i);
    out.bits.push_back(b.xor_gate(b.xor_gate(a, c), carry));
    if (i + 1 < W) carry = b.maj_gate(a, c, carry);
  }
  return out;
}

Signal compare_geq(CircuitBuilder& b, const WireBundle& x, std::int64_t t) {
  const auto w = x.width();
  if (w > 62) throw ResourceError("comparator wider than 62 bits");
  const std::int64_t lo = x.is_signed && w > 0 ? -(std::int64_t{1} << (w - 1)) : 0;
  const std::int64_t hi = w == 0 ? 0 : (x.is_signed ? (std::int64_t{1} << (w - 1)) - 1
                                                    : (std::int64_t{1} << w) - 1);
  if (t <= lo) return Signal::constant(true);
  if (t > hi) return Signal::constant(false);
  // Offset to an unsigned comparison: flip the sign bit, shift t.
  std::vector<Signal> u = x.bits;
  std::uint64_t tt = static_cast<std::uint64_t>(t);
  if (x.is_signed) {
    u.back() = !u.back();
    tt = static_cast<std::uint64_t>(t + (std::int64_t{1} << (w - 1)));
  }
  Signal ge = Signal::constant(true);
  for (std::size_t i = 0; i < w; ++i)
    ge = ((tt >> i) & 1U) ? b.and_gate({u[i], ge}) : b.or_gate({u[i], ge});
  return ge;
}

}  // namespace qcwb
