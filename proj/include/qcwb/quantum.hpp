#pragma once

#include "qcwb/rng.hpp"

#include <Eigen/Dense>

#include <complex>
#include <vector>

namespace qcwb {

using cplx = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;

inline constexpr double kHermitianTol = 1e-10;
inline constexpr double kPsdTol = 1e-9;
inline constexpr double kTraceTol = 1e-10;

struct DensityMatrix {
  CMat m;
  int dim() const { return static_cast<int>(m.rows()); }
};

struct Observable {
  CMat m;
  int dim() const { return static_cast<int>(m.rows()); }
};

// Throw InputError when the invariants fail.
DensityMatrix make_state(const CMat& m);
Observable make_observable(const CMat& m);

bool is_hermitian(const CMat& m, double tol = kHermitianTol);
CMat hermitize(const CMat& m);
// Hermitize, clip negative eigenvalues, renormalize. *residual gets the
// Frobenius distance moved.
CMat project_to_state(const CMat& m, double* residual = nullptr);

CMat kron(const CMat& a, const CMat& b);
// M on A (x) B. ptrace_first removes A, ptrace_second removes B.
CMat ptrace_first(const CMat& m, int dA, int dB);
CMat ptrace_second(const CMat& m, int dA, int dB);
CMat partial_transpose_second(const CMat& m, int dA, int dB);
// Reorders A (x) B into B (x) A.
CMat swap_registers(const CMat& m, int dA, int dB);

// Tr_A(R (rho (x) I_B)) and Tr_B(R (I_A (x) sigma)).
CMat reduce_to_second(const CMat& R, const CMat& rho, int dA, int dB);
CMat reduce_to_first(const CMat& R, const CMat& sigma, int dA, int dB);

// Hilbert-Schmidt orthonormal Hermitian basis; element 0 is I / sqrt(d),
// the rest are traceless.
std::vector<CMat> hermitian_basis(int d);
// [[Re, -Im], [Im, Re]]
RMat real_embedding(const CMat& m);

struct Eigenpair {
  double value;
  CVec vector;
};
// Smallest eigenvalue; within a degenerate eigenspace the vector with the
// lexicographically largest real parts is chosen, phase fixed so the first
// nonzero entry is real positive.
Eigenpair min_eigenpair(const CMat& h);
Eigenpair max_eigenpair(const CMat& h);
double lambda_min(const CMat& h);

// S(rho || sigma) in nats; +infinity when supp(rho) is not inside supp(sigma).
double rel_entropy(const CMat& rho, const CMat& sigma);
double von_neumann_entropy(const CMat& rho);

CVec random_pure(int d, Rng& rng);
CMat random_state(int d, Rng& rng);         // Hilbert-Schmidt measure
CMat random_observable(int d, Rng& rng);    // Haar eigenbasis, uniform spectrum in [0, 1]
CMat projector(const CVec& v);
CMat maximally_entangled(int d);            // |Phi+><Phi+| on d (x) d

}  // namespace qcwb
