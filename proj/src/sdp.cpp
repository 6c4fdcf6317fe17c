#include "qcwb/sdp.hpp"

#include "qcwb/errors.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>

namespace qcwb::sdp {

const char* to_string(Status s) {
  switch (s) {
    case Status::Optimal: return "optimal";
    case Status::MaxIterations: return "max_iterations";
    case Status::NumericalFailure: return "numerical_failure";
  }
  return "?";
}

namespace {

using Mat = Eigen::MatrixXd;
using Blocks = std::vector<Mat>;

double inner(const Blocks& a, const Blocks& b) {
  double s = 0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k].cwiseProduct(b[k]).sum();
  return s;
}

double fro(const Blocks& a) { return std::sqrt(inner(a, a)); }

Mat sym(const Mat& m) { return (m + m.transpose()) / 2; }

// Largest step t with M + t D >= 0 (capped at a large value).
double max_step(const Mat& M, const Mat& D) {
  Eigen::LLT<Mat> llt(M);
  if (llt.info() != Eigen::Success) return 0;
  const Mat L = llt.matrixL();
  const Mat Li = L.triangularView<Eigen::Lower>().solve(Mat::Identity(M.rows(), M.cols()));
  const Mat W = sym(Li * D * Li.transpose());
  Eigen::SelfAdjointEigenSolver<Mat> es(W, Eigen::EigenvaluesOnly);
  const double lmin = es.eigenvalues()(0);
  return lmin >= 0 ? 1e30 : -1.0 / lmin;
}

class Solver {
 public:
  Solver(const Problem& p, const Options& o) : p_(p), o_(o), m_(p.num_vars()), nb_(p.block_sizes.size()) {
    if (p.C.size() != nb_) throw InputError("SDP: one C block per block size required");
    if (p.b.size() != m_) throw InputError("SDP: b has wrong length");
    by_block_.resize(nb_);
    for (int i = 0; i < m_; ++i)
      for (std::size_t e = 0; e < p.A[i].size(); ++e) {
        const auto& be = p.A[i][e];
        if (be.block < 0 || static_cast<std::size_t>(be.block) >= nb_) throw InputError("SDP: bad block index");
        if (be.m.rows() != p.block_sizes[be.block] || be.m.cols() != p.block_sizes[be.block])
          throw InputError("SDP: block size mismatch");
        by_block_[be.block].push_back({i, static_cast<int>(e)});
      }
    for (std::size_t k = 0; k < nb_; ++k)
      if (p.C[k].rows() != p.block_sizes[k] || p.C[k].cols() != p.block_sizes[k])
        throw InputError("SDP: C block size mismatch");
    n_ = 0;
    for (int s : p.block_sizes) n_ += s;
  }

  Solution run() {
    Solution sol;
    init();
    const double nb = 1 + p_.b.norm();
    const double nc = 1 + fro(p_.C);
    for (int it = 0; it < o_.max_iter; ++it) {
      sol.iterations = it;
      const Eigen::VectorXd rp = p_.b - apply_A(X_);
      const Blocks Rd = dual_residual();
      const double pobj = inner(p_.C, X_), dobj = p_.b.dot(y_);
      sol.rel_gap = std::abs(pobj - dobj) / (1 + std::abs(pobj) + std::abs(dobj));
      sol.primal_infeas = rp.norm() / nb;
      sol.dual_infeas = fro(Rd) / nc;
      if (sol.rel_gap < o_.tol && sol.primal_infeas < o_.tol && sol.dual_infeas < o_.tol) {
        sol.status = Status::Optimal;
        return finish(sol);
      }
      const double mu = inner(X_, S_) / n_;
      Blocks Sinv(nb_);
      for (std::size_t k = 0; k < nb_; ++k) {
        Eigen::LLT<Mat> llt(S_[k]);
        if (llt.info() != Eigen::Success) return fail(sol);
        Sinv[k] = sym(llt.solve(Mat::Identity(S_[k].rows(), S_[k].cols())));
      }
      const Mat M = schur(Sinv);
      Eigen::LLT<Mat> fact(M);
      Eigen::LDLT<Mat> ldlt;
      bool use_ldlt = fact.info() != Eigen::Success;
      if (use_ldlt) {
        ldlt.compute(M + 1e-14 * (1 + M.diagonal().cwiseAbs().maxCoeff()) * Mat::Identity(m_, m_));
        if (ldlt.info() != Eigen::Success) return fail(sol);
      }
      auto solve_M = [&](const Eigen::VectorXd& r) -> Eigen::VectorXd {
        return use_ldlt ? Eigen::VectorXd(ldlt.solve(r)) : Eigen::VectorXd(fact.solve(r));
      };

      // Predictor
      Blocks rc(nb_);
      for (std::size_t k = 0; k < nb_; ++k) rc[k] = -X_[k] * S_[k];
      Blocks dX, dS;
      Eigen::VectorXd dy;
      direction(rc, rp, Rd, Sinv, solve_M, dX, dy, dS);
      double ap = step(X_, dX), ad = step(S_, dS);
      Blocks Xn(nb_), Sn(nb_);
      for (std::size_t k = 0; k < nb_; ++k) {
        Xn[k] = X_[k] + ap * dX[k];
        Sn[k] = S_[k] + ad * dS[k];
      }
      const double sigma = std::min(1.0, std::pow(inner(Xn, Sn) / inner(X_, S_), 3));

      // Corrector
      for (std::size_t k = 0; k < nb_; ++k)
        rc[k] = sigma * mu * Mat::Identity(X_[k].rows(), X_[k].cols()) - X_[k] * S_[k] - dX[k] * dS[k];
      direction(rc, rp, Rd, Sinv, solve_M, dX, dy, dS);
      ap = step(X_, dX);
      ad = step(S_, dS);
      if (!(ap > 0) || !(ad > 0)) return fail(sol);
      for (std::size_t k = 0; k < nb_; ++k) {
        X_[k] = sym(X_[k] + ap * dX[k]);
        S_[k] = sym(S_[k] + ad * dS[k]);
      }
      y_ += ad * dy;
    }
    sol.status = Status::MaxIterations;
    sol.iterations = o_.max_iter;
    return finish(sol);
  }

 private:
  void init() {
    X_.resize(nb_);
    S_.resize(nb_);
    y_ = Eigen::VectorXd::Zero(m_);
    double xi = std::max(10.0, std::sqrt(static_cast<double>(n_)));
    double eta = std::max(10.0, std::sqrt(static_cast<double>(n_)));
    for (int i = 0; i < m_; ++i) {
      double na = 0;
      for (const auto& be : p_.A[i]) na += be.m.squaredNorm();
      na = std::sqrt(na);
      xi = std::max(xi, n_ * (1 + std::abs(p_.b(i))) / (1 + na));
      eta = std::max(eta, na);
    }
    eta = std::max(eta, fro(p_.C));
    for (std::size_t k = 0; k < nb_; ++k) {
      const int s = p_.block_sizes[k];
      X_[k] = xi * Mat::Identity(s, s);
      S_[k] = eta * Mat::Identity(s, s);
    }
  }

  Eigen::VectorXd apply_A(const Blocks& X) const {
    Eigen::VectorXd r = Eigen::VectorXd::Zero(m_);
    for (int i = 0; i < m_; ++i)
      for (const auto& be : p_.A[i]) r(i) += be.m.cwiseProduct(X[be.block]).sum();
    return r;
  }

  // A(G) for non-symmetric G: <A_i, G> = trace(A_i G).
  Eigen::VectorXd apply_A_trace(const Blocks& G) const {
    Eigen::VectorXd r = Eigen::VectorXd::Zero(m_);
    for (int i = 0; i < m_; ++i)
      for (const auto& be : p_.A[i]) r(i) += be.m.cwiseProduct(G[be.block].transpose()).sum();
    return r;
  }

  Blocks apply_At(const Eigen::VectorXd& y) const {
    Blocks out(nb_);
    for (std::size_t k = 0; k < nb_; ++k) out[k] = Mat::Zero(p_.block_sizes[k], p_.block_sizes[k]);
    for (int i = 0; i < m_; ++i)
      for (const auto& be : p_.A[i]) out[be.block] += y(i) * be.m;
    return out;
  }

  Blocks dual_residual() const {
    Blocks at = apply_At(y_);
    for (std::size_t k = 0; k < nb_; ++k) at[k] = p_.C[k] - S_[k] - at[k];
    return at;
  }

  Mat schur(const Blocks& Sinv) const {
    Mat M = Mat::Zero(m_, m_);
    for (std::size_t k = 0; k < nb_; ++k) {
      const auto& touching = by_block_[k];
      for (const auto& [j, ej] : touching) {
        const Mat G = X_[k] * p_.A[j][ej].m * Sinv[k];
        for (const auto& [i, ei] : touching) {
          if (i > j) continue;
          M(i, j) += p_.A[i][ei].m.cwiseProduct(G.transpose()).sum();
        }
      }
    }
    for (int j = 0; j < m_; ++j)
      for (int i = j + 1; i < m_; ++i) M(i, j) = M(j, i);
    return M;
  }

  template <class SolveM>
  void direction(const Blocks& rc, const Eigen::VectorXd& rp, const Blocks& Rd, const Blocks& Sinv,
                 const SolveM& solve_M, Blocks& dX, Eigen::VectorXd& dy, Blocks& dS) const {
    Blocks t1(nb_), t2(nb_);
    for (std::size_t k = 0; k < nb_; ++k) {
      t1[k] = rc[k] * Sinv[k];
      t2[k] = X_[k] * Rd[k] * Sinv[k];
    }
    const Eigen::VectorXd rhs = rp - apply_A_trace(t1) + apply_A_trace(t2);
    dy = solve_M(rhs);
    const Blocks aty = apply_At(dy);
    dS.assign(nb_, Mat());
    dX.assign(nb_, Mat());
    for (std::size_t k = 0; k < nb_; ++k) {
      dS[k] = Rd[k] - aty[k];
      dX[k] = sym((rc[k] - X_[k] * dS[k]) * Sinv[k]);
    }
  }

  double step(const Blocks& M, const Blocks& D) const {
    double t = 1e30;
    for (std::size_t k = 0; k < nb_; ++k) t = std::min(t, max_step(M[k], D[k]));
    return std::min(1.0, 0.98 * t);
  }

  Solution& finish(Solution& sol) {
    sol.y = y_;
    sol.X = X_;
    sol.S = S_;
    sol.value = p_.b.dot(y_);
    sol.bound = inner(p_.C, X_);
    return sol;
  }

  Solution& fail(Solution& sol) {
    finish(sol);
    // A stalled iterate that already meets a looser tolerance is still reported as optimal.
    if (sol.rel_gap < 1e3 * o_.tol && sol.primal_infeas < 1e3 * o_.tol && sol.dual_infeas < 1e3 * o_.tol)
      sol.status = Status::Optimal;
    else
      sol.status = Status::NumericalFailure;
    return sol;
  }

  const Problem& p_;
  Options o_;
  int m_;
  std::size_t nb_;
  int n_ = 0;
  std::vector<std::vector<std::pair<int, int>>> by_block_;  // (variable, entry)
  Blocks X_, S_;
  Eigen::VectorXd y_;
};

}  // namespace

Solution solve(const Problem& p, const Options& opts) { return Solver(p, opts).run(); }

}  // namespace qcwb::sdp
