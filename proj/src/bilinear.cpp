#include "qcwb/bilinear.hpp"

#include "qcwb/errors.hpp"

#include <cmath>
#include <limits>

namespace qcwb {

Piece Piece::full(int d1, int d2) { return Piece{Kind::Full, d1, d2, std::nullopt, {}}; }
Piece Piece::ppt(int d1, int d2) { return Piece{Kind::Ppt, d1, d2, std::nullopt, {}}; }
Piece Piece::hull(int d1, int d2, std::vector<CMat> atoms) {
  if (atoms.empty()) throw InputError("atom hull needs at least one state");
  return Piece{Kind::Atoms, d1, d2, std::nullopt, std::move(atoms)};
}
Piece& Piece::with_parent(const CMat& p) {
  if (p.rows() != d1 || p.cols() != d1) throw InputError("parent state must live on the first register");
  if (kind == Kind::Atoms) throw InputError("atom hulls cannot carry a parent constraint");
  parent = p;
  return *this;
}

int SetRep::dim() const {
  if (mixtures.empty() || mixtures[0].parts.empty()) throw InputError("empty set representation");
  const int d = mixtures[0].parts[0].second.dim();
  for (const auto& m : mixtures)
    for (const auto& [w, p] : m.parts)
      if (p.dim() != d) throw InputError("pieces of one set must share a dimension");
  return d;
}

namespace {

HermExpr scaled(const LinExpr& t, const CMat& m) {
  HermExpr e;
  e.constant = t.constant * m;
  for (const auto& [v, c] : t.terms) e.terms.emplace_back(v, c * m);
  return e;
}

HermExpr max_piece(LmiModel& M, const Piece& p, const LinExpr& tau) {
  const int d = p.dim();
  HermExpr e;
  if (p.kind == Piece::Kind::Atoms) {
    if (p.atoms.size() == 1) return scaled(tau, p.atoms[0]);
    e.constant = CMat::Zero(d, d);
    LinExpr sum = tau;
    sum *= -1.0;
    for (const auto& a : p.atoms) {
      if (a.rows() != d) throw InputError("atom dimension mismatch");
      const int v = M.add_var();
      M.nonneg(M.var(v));
      sum += M.var(v);
      e.terms.emplace_back(v, a);
    }
    M.equal(sum);
    return e;
  }
  if (p.parent) {
    e = scaled(tau, kron(*p.parent, CMat::Identity(p.d2, p.d2) / static_cast<double>(p.d2)));
    const auto b1 = hermitian_basis(p.d1), b2 = hermitian_basis(p.d2);
    for (const auto& x : b1)
      for (std::size_t k = 1; k < b2.size(); ++k) e.terms.emplace_back(M.add_var(), kron(x, b2[k]));
  } else {
    e = M.hermitian_with_trace(d, tau);
  }
  M.psd(e);
  if (p.kind == Piece::Kind::Ppt) {
    const int d1 = p.d1, d2 = p.d2;
    M.psd(e.map([=](const CMat& x) { return partial_transpose_second(x, d1, d2); }));
  }
  return e;
}

struct MinDuals {
  std::vector<int> main;
  std::vector<std::pair<int, CMat>> atoms;
};

LinExpr min_piece(LmiModel& M, const Piece& p, const HermExpr& N, MinDuals& duals) {
  const int d = p.dim();
  if (N.dim() != d) throw InputError("min-player piece dimension mismatch");
  if (p.kind == Piece::Kind::Atoms) {
    const int t = M.add_var();
    for (const auto& a : p.atoms) {
      LinExpr c = trace_with(N, a);
      LinExpr mt = M.var(t);
      mt *= -1.0;
      c += mt;
      duals.atoms.emplace_back(M.nonneg(c), a);
    }
    return M.var(t);
  }
  HermExpr S = N;
  LinExpr val;
  if (p.parent) {
    const HermExpr Y = M.hermitian(p.d1);
    const int d2 = p.d2;
    S -= Y.map([=](const CMat& x) { return kron(x, CMat::Identity(d2, d2)); });
    val = trace_with(Y, *p.parent);
  } else {
    const int t = M.add_var();
    val = M.var(t);
    S -= scaled(val, CMat::Identity(d, d));
  }
  if (p.kind == Piece::Kind::Ppt) {
    const HermExpr Z = M.hermitian(d);
    M.psd(Z);
    const int d1 = p.d1, d2 = p.d2;
    S -= Z.map([=](const CMat& x) { return partial_transpose_second(x, d1, d2); });
  }
  duals.main.push_back(M.psd(S));
  return val;
}

}  // namespace

BilinearSolution solve_maxmin(const CMat& R, const SetRep& A, const SetRep& B, const sdp::Options& opts) {
  const int dA = A.dim(), dB = B.dim();
  if (R.rows() != dA * dB || R.cols() != dA * dB) throw InputError("observable does not match the set dimensions");
  LmiModel M;

  // Max player: rho = sum_u lambda_u sum_c w_c rho_uc.
  const auto nu = A.mixtures.size();
  std::vector<LinExpr> lam(nu);
  if (nu == 1) {
    lam[0].constant = 1;
  } else {
    LinExpr sum;
    sum.constant = -1;
    for (auto& l : lam) {
      l = M.var(M.add_var());
      M.nonneg(l);
      sum += l;
    }
    M.equal(sum);
  }
  HermExpr rho = HermExpr::constant_of(CMat::Zero(dA, dA));
  for (std::size_t u = 0; u < nu; ++u)
    for (const auto& [w, piece] : A.mixtures[u].parts) {
      LinExpr tau = lam[u];
      tau *= w;
      rho += max_piece(M, piece, tau);
    }

  // Min player, dualized.
  const HermExpr N = rho.map([&](const CMat& x) { return reduce_to_second(R, x, dA, dB); });
  MinDuals duals;
  std::vector<LinExpr> values;
  for (const auto& mix : B.mixtures) {
    LinExpr v;
    for (const auto& [w, piece] : mix.parts) {
      LinExpr pv = min_piece(M, piece, N, duals);
      pv *= w;
      v += pv;
    }
    values.push_back(v);
  }
  if (values.size() == 1) {
    M.maximize(values[0]);
  } else {
    const int t = M.add_var();
    for (auto v : values) {
      LinExpr mt = M.var(t);
      mt *= -1.0;
      v += mt;
      M.nonneg(v);
    }
    M.maximize(M.var(t));
  }

  BilinearSolution out;
  out.raw = M.solve(opts);
  out.value = out.raw.value;
  out.bound = out.raw.bound;
  out.rho = hermitize(rho.value(out.raw.y));
  out.sigma = CMat::Zero(dB, dB);
  for (int c : duals.main) out.sigma += out.raw.duals[c];
  for (const auto& [c, a] : duals.atoms) out.sigma += out.raw.duals[c](0, 0).real() * a;
  out.sigma = hermitize(out.sigma);
  return out;
}

BilinearSolution solve_minmax(const CMat& R, const SetRep& A, const SetRep& B, const sdp::Options& opts) {
  const int dA = A.dim(), dB = B.dim();
  const CMat Rs = swap_registers(CMat::Identity(R.rows(), R.cols()) - R, dA, dB);
  const auto s = solve_maxmin(Rs, B, A, opts);
  BilinearSolution out;
  out.raw = s.raw;
  out.value = 1 - s.value;
  out.bound = 1 - s.bound;
  out.rho = s.sigma;
  out.sigma = s.rho;
  return out;
}

CMat ProductOptimum::state() const {
  CVec v(a.size() * b.size());
  for (int i = 0; i < a.size(); ++i) v.segment(i * b.size(), b.size()) = a(i) * b;
  return projector(v);
}

ProductOptimum best_product(const CMat& W, int d1, int d2, std::uint64_t seed, int random_starts) {
  if (W.rows() != d1 * d2) throw InputError("operator does not match the product split");
  Rng rng(derive_seed(seed, 0x736565736177));
  std::vector<CVec> starts;
  for (int i = 0; i < d1; ++i) starts.push_back(CVec::Unit(d1, i));
  for (int s = 0; s < random_starts; ++s) starts.push_back(random_pure(d1, rng));
  std::vector<ProductOptimum> found(starts.size());
#pragma omp parallel for schedule(static)
  for (std::size_t s = 0; s < starts.size(); ++s) {
    CVec a = starts[s], b;
    double val = -std::numeric_limits<double>::infinity();
    for (int it = 0; it < 500; ++it) {
      const auto eb = max_eigenpair(reduce_to_second(W, projector(a), d1, d2));
      b = eb.vector;
      const auto ea = max_eigenpair(reduce_to_first(W, projector(b), d1, d2));
      a = ea.vector;
      const bool done = ea.value <= val + 1e-15;
      val = std::max(val, ea.value);
      if (done) break;
    }
    found[s] = {val, a, b};
  }
  std::size_t best = 0;
  for (std::size_t s = 1; s < found.size(); ++s)
    if (found[s].value > found[best].value + 1e-13) best = s;
  return found[best];
}

}  // namespace qcwb
