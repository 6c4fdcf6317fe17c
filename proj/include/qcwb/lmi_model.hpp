#pragma once

// Affine Hermitian expressions in real variables, compiled to a real SDP.
// Complex blocks go through the real embedding; linear equalities are
// eliminated by a nullspace parameterization before solving.

#include "qcwb/quantum.hpp"
#include "qcwb/sdp.hpp"

#include <functional>
#include <utility>
#include <vector>

namespace qcwb {

struct HermExpr {
  CMat constant;
  std::vector<std::pair<int, CMat>> terms;  // variable index, coefficient matrix

  static HermExpr constant_of(const CMat& m);
  int dim() const { return static_cast<int>(constant.rows()); }
  HermExpr& operator+=(const HermExpr& o);
  HermExpr& operator-=(const HermExpr& o);
  HermExpr& operator*=(double s);
  friend HermExpr operator+(HermExpr a, const HermExpr& b) { return a += b; }
  friend HermExpr operator-(HermExpr a, const HermExpr& b) { return a -= b; }
  friend HermExpr operator*(double s, HermExpr a) { return a *= s; }
  // Applies a real-linear map to the constant and every coefficient.
  HermExpr map(const std::function<CMat(const CMat&)>& f) const;
  CMat value(const Eigen::VectorXd& y) const;
};

// Real affine scalar: constant + sum coeff * y_var.
struct LinExpr {
  double constant = 0;
  std::vector<std::pair<int, double>> terms;
  LinExpr& operator+=(const LinExpr& o);
  LinExpr& operator*=(double s);
  double value(const Eigen::VectorXd& y) const;
};
// Re Tr(expr * m) as a scalar expression.
LinExpr trace_with(const HermExpr& e, const CMat& m);

struct LmiSolution {
  sdp::Status status = sdp::Status::NumericalFailure;
  double value = 0;  // objective at y
  double bound = 0;  // dual bound
  double rel_gap = 0, infeasibility = 0;
  int iterations = 0;
  Eigen::VectorXd y;          // original variables
  std::vector<CMat> duals;    // one Hermitian dual per psd() constraint
  bool ok() const { return status == sdp::Status::Optimal; }
};

class LmiModel {
 public:
  int add_var();
  LinExpr var(int i) const;
  // Free Hermitian d x d matrix with d^2 variables.
  HermExpr hermitian(int d);
  // Hermitian with trace fixed to t (affine in variables).
  HermExpr hermitian_with_trace(int d, const LinExpr& t);
  // Constrained psd; returns the constraint index for duals.
  int psd(const HermExpr& e);
  int nonneg(const LinExpr& e);
  void equal(const LinExpr& e);  // e == 0
  void maximize(const LinExpr& obj) { objective_ = obj; }
  int num_vars() const { return nvars_; }

  LmiSolution solve(const sdp::Options& opts = {}) const;

 private:
  int nvars_ = 0;
  std::vector<HermExpr> cones_;
  std::vector<LinExpr> equalities_;
  LinExpr objective_;
};

}  // namespace qcwb
