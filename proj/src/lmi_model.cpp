#include "qcwb/lmi_model.hpp"

#include "qcwb/errors.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <map>

namespace qcwb {

HermExpr HermExpr::constant_of(const CMat& m) { return HermExpr{m, {}}; }

HermExpr& HermExpr::operator+=(const HermExpr& o) {
  if (constant.size() == 0) constant = CMat::Zero(o.dim(), o.dim());
  if (o.dim() != dim()) throw InputError("expression dimensions differ");
  constant += o.constant;
  terms.insert(terms.end(), o.terms.begin(), o.terms.end());
  return *this;
}

HermExpr& HermExpr::operator-=(const HermExpr& o) {
  HermExpr neg = o;
  neg *= -1.0;
  return *this += neg;
}

HermExpr& HermExpr::operator*=(double s) {
  constant *= s;
  for (auto& [v, m] : terms) m *= s;
  return *this;
}

HermExpr HermExpr::map(const std::function<CMat(const CMat&)>& f) const {
  HermExpr out;
  out.constant = f(constant);
  out.terms.reserve(terms.size());
  for (const auto& [v, m] : terms) out.terms.emplace_back(v, f(m));
  return out;
}

CMat HermExpr::value(const Eigen::VectorXd& y) const {
  CMat out = constant;
  for (const auto& [v, m] : terms) out += y(v) * m;
  return out;
}

LinExpr& LinExpr::operator+=(const LinExpr& o) {
  constant += o.constant;
  terms.insert(terms.end(), o.terms.begin(), o.terms.end());
  return *this;
}

LinExpr& LinExpr::operator*=(double s) {
  constant *= s;
  for (auto& t : terms) t.second *= s;
  return *this;
}

double LinExpr::value(const Eigen::VectorXd& y) const {
  double s = constant;
  for (const auto& [v, c] : terms) s += c * y(v);
  return s;
}

LinExpr trace_with(const HermExpr& e, const CMat& m) {
  LinExpr out;
  out.constant = (e.constant * m).trace().real();
  for (const auto& [v, c] : e.terms) out.terms.emplace_back(v, (c * m).trace().real());
  return out;
}

int LmiModel::add_var() { return nvars_++; }

LinExpr LmiModel::var(int i) const {
  LinExpr e;
  e.terms.emplace_back(i, 1.0);
  return e;
}

HermExpr LmiModel::hermitian(int d) {
  HermExpr e;
  e.constant = CMat::Zero(d, d);
  for (const auto& b : hermitian_basis(d)) e.terms.emplace_back(add_var(), b);
  return e;
}

HermExpr LmiModel::hermitian_with_trace(int d, const LinExpr& t) {
  const auto basis = hermitian_basis(d);
  const CMat unit = CMat::Identity(d, d) / static_cast<double>(d);
  HermExpr e;
  e.constant = t.constant * unit;
  for (const auto& [v, c] : t.terms) e.terms.emplace_back(v, c * unit);
  for (std::size_t k = 1; k < basis.size(); ++k) e.terms.emplace_back(add_var(), basis[k]);
  return e;
}

int LmiModel::psd(const HermExpr& e) {
  if (e.dim() == 0) throw InputError("empty cone");
  cones_.push_back(e);
  return static_cast<int>(cones_.size()) - 1;
}

int LmiModel::nonneg(const LinExpr& e) {
  HermExpr h;
  h.constant = CMat::Constant(1, 1, e.constant);
  for (const auto& [v, c] : e.terms) h.terms.emplace_back(v, CMat::Constant(1, 1, c));
  return psd(h);
}

void LmiModel::equal(const LinExpr& e) { equalities_.push_back(e); }

LmiSolution LmiModel::solve(const sdp::Options& opts) const {
  const int n = nvars_;
  // y = y0 + Z u
  Eigen::VectorXd y0 = Eigen::VectorXd::Zero(n);
  Eigen::MatrixXd Z;
  bool identity = equalities_.empty();
  if (!identity) {
    Eigen::MatrixXd E = Eigen::MatrixXd::Zero(static_cast<int>(equalities_.size()), n);
    Eigen::VectorXd f(static_cast<int>(equalities_.size()));
    for (std::size_t r = 0; r < equalities_.size(); ++r) {
      for (const auto& [v, c] : equalities_[r].terms) E(static_cast<int>(r), v) += c;
      f(static_cast<int>(r)) = -equalities_[r].constant;
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(E, Eigen::ComputeFullU | Eigen::ComputeFullV);
    svd.setThreshold(1e-12);
    const int rank = static_cast<int>(svd.rank());
    y0 = svd.solve(f);
    if ((E * y0 - f).norm() > 1e-9 * (1 + f.norm())) throw InputError("inconsistent linear equalities");
    Z = svd.matrixV().rightCols(n - rank);
  }
  const int m = identity ? n : static_cast<int>(Z.cols());

  sdp::Problem p;
  p.A.resize(m);
  std::vector<bool> complex_block;
  for (const auto& cone : cones_) {
    const int d = cone.dim();
    std::map<int, CMat> coef;
    for (const auto& [v, c] : cone.terms) {
      auto it = coef.find(v);
      if (it == coef.end()) coef.emplace(v, c);
      else it->second += c;
    }
    CMat F0 = cone.constant;
    if (!identity)
      for (const auto& [v, c] : coef) F0 += y0(v) * c;
    std::vector<CMat> G;
    std::vector<int> idx;
    if (identity) {
      for (const auto& [v, c] : coef) {
        G.push_back(c);
        idx.push_back(v);
      }
    } else {
      for (int u = 0; u < m; ++u) {
        CMat g = CMat::Zero(d, d);
        bool any = false;
        for (const auto& [v, c] : coef) {
          const double z = Z(v, u);
          if (std::abs(z) < 1e-15) continue;
          g += z * c;
          any = true;
        }
        if (!any || g.cwiseAbs().maxCoeff() < 1e-14) continue;
        G.push_back(std::move(g));
        idx.push_back(u);
      }
    }
    double imag = F0.imag().cwiseAbs().maxCoeff();
    for (const auto& g : G) imag = std::max(imag, g.imag().cwiseAbs().maxCoeff());
    const bool cx = imag > 1e-14;
    complex_block.push_back(cx);
    auto embed = [&](const CMat& h) -> Eigen::MatrixXd {
      const CMat hh = hermitize(h);
      return cx ? real_embedding(hh) : Eigen::MatrixXd(hh.real());
    };
    const int block = static_cast<int>(p.block_sizes.size());
    p.block_sizes.push_back(cx ? 2 * d : d);
    p.C.push_back(embed(F0));
    for (std::size_t k = 0; k < G.size(); ++k) p.A[idx[k]].push_back({block, -embed(G[k])});
  }
  Eigen::VectorXd c = Eigen::VectorXd::Zero(n);
  for (const auto& [v, w] : objective_.terms) c(v) += w;
  p.b = identity ? c : Eigen::VectorXd(Z.transpose() * c);
  const double offset = objective_.constant + c.dot(y0);

  const auto s = sdp::solve(p, opts);
  LmiSolution out;
  out.status = s.status;
  out.iterations = s.iterations;
  out.rel_gap = s.rel_gap;
  out.infeasibility = std::max(s.primal_infeas, s.dual_infeas);
  out.y = identity ? s.y : Eigen::VectorXd(y0 + Z * s.y);
  out.value = objective_.value(out.y);
  out.bound = s.bound + offset;
  for (std::size_t k = 0; k < cones_.size(); ++k) {
    const auto& X = s.X[k];
    const int d = cones_[k].dim();
    CMat dual;
    if (complex_block[k]) {
      dual = (X.topLeftCorner(d, d) + X.bottomRightCorner(d, d)).cast<cplx>() +
             cplx(0, 1) * (X.bottomLeftCorner(d, d) - X.topRightCorner(d, d)).cast<cplx>();
    } else {
      dual = X.cast<cplx>();
    }
    out.duals.push_back(hermitize(dual));
  }
  return out;
}

}  // namespace qcwb
