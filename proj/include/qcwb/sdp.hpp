#pragma once

// Dense primal-dual interior point method for block-diagonal real SDPs.
//   maximize   b^T y   subject to   S = C - sum_i y_i A_i  >= 0
//   minimize   <C, X>  subject to   <A_i, X> = b_i,  X >= 0
// HKM search direction with Mehrotra predictor-corrector steps.

#include <Eigen/Dense>

#include <vector>

namespace qcwb::sdp {

struct BlockEntry {
  int block = 0;
  Eigen::MatrixXd m;  // symmetric
};

struct Problem {
  std::vector<int> block_sizes;
  std::vector<Eigen::MatrixXd> C;               // one symmetric matrix per block
  std::vector<std::vector<BlockEntry>> A;       // per variable, nonzero blocks only
  Eigen::VectorXd b;
  int num_vars() const { return static_cast<int>(A.size()); }
};

struct Options {
  double tol = 1e-10;  // relative gap and relative infeasibilities
  int max_iter = 120;
};

enum class Status { Optimal, MaxIterations, NumericalFailure };
const char* to_string(Status s);

struct Solution {
  Status status = Status::NumericalFailure;
  Eigen::VectorXd y;
  std::vector<Eigen::MatrixXd> X, S;
  double value = 0;  // b^T y
  double bound = 0;  // <C, X>
  double rel_gap = 0, primal_infeas = 0, dual_infeas = 0;
  int iterations = 0;
};

Solution solve(const Problem& p, const Options& opts = {});

}  // namespace qcwb::sdp
