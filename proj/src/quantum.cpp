#include "qcwb/quantum.hpp"

#include "qcwb/errors.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <limits>

namespace qcwb {

namespace {

constexpr double kSupportTol = 1e-12;

void require_square(const CMat& m, const char* what) {
  if (m.rows() == 0 || m.rows() != m.cols()) throw InputError(std::string(what) + " must be square and nonempty");
}

void require_dims(const CMat& m, int dA, int dB) {
  if (dA <= 0 || dB <= 0 || m.rows() != dA * dB || m.cols() != dA * dB)
    throw InputError("matrix does not match register dimensions");
}

double std_normal(Rng& rng) {
  double u = rng.uniform();
  while (u <= 0) u = rng.uniform();
  return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * M_PI * rng.uniform());
}

CMat ginibre(int d, Rng& rng) {
  CMat g(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) g(i, j) = cplx(std_normal(rng), std_normal(rng));
  return g;
}

void fix_phase(CVec& v) {
  for (int i = 0; i < v.size(); ++i)
    if (std::abs(v(i)) > 1e-12) {
      v *= std::conj(v(i)) / std::abs(v(i));
      return;
    }
}

bool lex_greater(const CVec& a, const CVec& b) {
  for (int i = 0; i < a.size(); ++i) {
    if (a(i).real() > b(i).real() + 1e-12) return true;
    if (a(i).real() < b(i).real() - 1e-12) return false;
  }
  return false;
}

Eigenpair extreme_eigenpair(const CMat& h, bool smallest) {
  require_square(h, "matrix");
  Eigen::SelfAdjointEigenSolver<CMat> es(hermitize(h));
  const auto& ev = es.eigenvalues();
  const int d = static_cast<int>(ev.size());
  const int pick = smallest ? 0 : d - 1;
  const double lam = ev(pick);
  const double scale = std::max(1.0, ev.cwiseAbs().maxCoeff());
  std::vector<int> group;
  for (int i = 0; i < d; ++i)
    if (std::abs(ev(i) - lam) <= 1e-10 * scale) group.push_back(i);
  if (group.size() == 1) {
    CVec v = es.eigenvectors().col(pick);
    fix_phase(v);
    return {lam, v};
  }
  CMat basis(d, static_cast<int>(group.size()));
  for (std::size_t k = 0; k < group.size(); ++k) basis.col(static_cast<int>(k)) = es.eigenvectors().col(group[k]);
  // Projections of the standard basis are independent of the eigensolver's choice of basis.
  CVec best;
  for (int i = 0; i < d; ++i) {
    CVec v = basis * basis.row(i).adjoint();
    const double n = v.norm();
    if (n < 1e-8) continue;
    v /= n;
    fix_phase(v);
    if (best.size() == 0 || lex_greater(v, best)) best = v;
  }
  return {lam, best};
}

}  // namespace

bool is_hermitian(const CMat& m, double tol) {
  return m.rows() == m.cols() && (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

CMat hermitize(const CMat& m) { return (m + m.adjoint()) / 2.0; }

DensityMatrix make_state(const CMat& m) {
  require_square(m, "state");
  if (!is_hermitian(m)) throw InputError("state is not Hermitian");
  if (std::abs(m.trace().real() - 1.0) > kTraceTol) throw InputError("state trace is not 1");
  if (lambda_min(m) < -kPsdTol) throw InputError("state is not positive semidefinite");
  return {m};
}

Observable make_observable(const CMat& m) {
  require_square(m, "observable");
  if (!is_hermitian(m)) throw InputError("observable is not Hermitian");
  Eigen::SelfAdjointEigenSolver<CMat> es(hermitize(m), Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -kPsdTol || es.eigenvalues().maxCoeff() > 1 + kPsdTol)
    throw InputError("observable spectrum leaves [0, 1]");
  return {m};
}

CMat project_to_state(const CMat& m, double* residual) {
  require_square(m, "matrix");
  const CMat h = hermitize(m);
  Eigen::SelfAdjointEigenSolver<CMat> es(h);
  Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0);
  const double tr = ev.sum();
  if (tr <= 0) throw InputError("cannot project a matrix without positive spectrum");
  ev /= tr;
  CMat out = es.eigenvectors() * ev.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
  out = hermitize(out);
  if (residual) *residual = (out - m).norm();
  return out;
}

CMat kron(const CMat& a, const CMat& b) {
  CMat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

CMat ptrace_first(const CMat& m, int dA, int dB) {
  require_dims(m, dA, dB);
  CMat out = CMat::Zero(dB, dB);
  for (int a = 0; a < dA; ++a) out += m.block(a * dB, a * dB, dB, dB);
  return out;
}

CMat ptrace_second(const CMat& m, int dA, int dB) {
  require_dims(m, dA, dB);
  CMat out(dA, dA);
  for (int i = 0; i < dA; ++i)
    for (int j = 0; j < dA; ++j) out(i, j) = m.block(i * dB, j * dB, dB, dB).trace();
  return out;
}

CMat partial_transpose_second(const CMat& m, int dA, int dB) {
  require_dims(m, dA, dB);
  CMat out(m.rows(), m.cols());
  for (int i = 0; i < dA; ++i)
    for (int j = 0; j < dA; ++j) out.block(i * dB, j * dB, dB, dB) = m.block(i * dB, j * dB, dB, dB).transpose();
  return out;
}

CMat swap_registers(const CMat& m, int dA, int dB) {
  require_dims(m, dA, dB);
  const int n = dA * dB;
  std::vector<int> perm(n);  // index in B (x) A -> index in A (x) B
  for (int b = 0; b < dB; ++b)
    for (int a = 0; a < dA; ++a) perm[b * dA + a] = a * dB + b;
  CMat out(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out(i, j) = m(perm[i], perm[j]);
  return out;
}

CMat reduce_to_second(const CMat& R, const CMat& rho, int dA, int dB) {
  require_dims(R, dA, dB);
  // sum_a,a' rho(a', a) R(a b, a' b')
  CMat out = CMat::Zero(dB, dB);
  for (int a = 0; a < dA; ++a)
    for (int ap = 0; ap < dA; ++ap) {
      const cplx w = rho(ap, a);
      if (w == cplx(0)) continue;
      out += w * R.block(a * dB, ap * dB, dB, dB);
    }
  return hermitize(out);
}

CMat reduce_to_first(const CMat& R, const CMat& sigma, int dA, int dB) {
  require_dims(R, dA, dB);
  CMat out(dA, dA);
  for (int a = 0; a < dA; ++a)
    for (int ap = 0; ap < dA; ++ap)
      out(a, ap) = (R.block(a * dB, ap * dB, dB, dB) * sigma).trace();
  return hermitize(out);
}

std::vector<CMat> hermitian_basis(int d) {
  if (d <= 0) throw InputError("dimension must be positive");
  std::vector<CMat> basis;
  basis.push_back(CMat::Identity(d, d) / std::sqrt(static_cast<double>(d)));
  for (int l = 1; l < d; ++l) {
    CMat g = CMat::Zero(d, d);
    for (int j = 0; j < l; ++j) g(j, j) = 1;
    g(l, l) = -static_cast<double>(l);
    basis.push_back(g / std::sqrt(static_cast<double>(l * (l + 1))));
  }
  const double r = 1 / std::sqrt(2.0);
  for (int j = 0; j < d; ++j)
    for (int k = j + 1; k < d; ++k) {
      CMat s = CMat::Zero(d, d), a = CMat::Zero(d, d);
      s(j, k) = s(k, j) = r;
      a(j, k) = cplx(0, -r);
      a(k, j) = cplx(0, r);
      basis.push_back(s);
      basis.push_back(a);
    }
  return basis;
}

RMat real_embedding(const CMat& m) {
  const auto n = m.rows();
  RMat out(2 * n, 2 * n);
  out.topLeftCorner(n, n) = m.real();
  out.topRightCorner(n, n) = -m.imag();
  out.bottomLeftCorner(n, n) = m.imag();
  out.bottomRightCorner(n, n) = m.real();
  return out;
}

Eigenpair min_eigenpair(const CMat& h) { return extreme_eigenpair(h, true); }
Eigenpair max_eigenpair(const CMat& h) { return extreme_eigenpair(h, false); }

double lambda_min(const CMat& h) {
  Eigen::SelfAdjointEigenSolver<CMat> es(hermitize(h), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

double von_neumann_entropy(const CMat& rho) {
  Eigen::SelfAdjointEigenSolver<CMat> es(hermitize(rho), Eigen::EigenvaluesOnly);
  double s = 0;
  for (int i = 0; i < es.eigenvalues().size(); ++i) {
    const double l = es.eigenvalues()(i);
    if (l > kSupportTol) s -= l * std::log(l);
  }
  return s;
}

double rel_entropy(const CMat& rho, const CMat& sigma) {
  make_state(rho);
  make_state(sigma);
  if (rho.rows() != sigma.rows()) throw InputError("state dimensions differ");
  Eigen::SelfAdjointEigenSolver<CMat> er(hermitize(rho)), es(hermitize(sigma));
  const auto& lr = er.eigenvalues();
  const auto& ls = es.eigenvalues();
  const RMat overlap = (er.eigenvectors().adjoint() * es.eigenvectors()).cwiseAbs2();
  double value = 0;
  for (int i = 0; i < lr.size(); ++i)
    if (lr(i) > kSupportTol) value += lr(i) * std::log(lr(i));
  for (int j = 0; j < ls.size(); ++j) {
    double w = 0;
    for (int i = 0; i < lr.size(); ++i)
      if (lr(i) > kSupportTol) w += lr(i) * overlap(i, j);
    if (w <= kSupportTol) continue;
    if (ls(j) <= kSupportTol) return std::numeric_limits<double>::infinity();
    value -= w * std::log(ls(j));
  }
  return std::max(0.0, value);
}

CVec random_pure(int d, Rng& rng) {
  CVec v(d);
  for (int i = 0; i < d; ++i) v(i) = cplx(std_normal(rng), std_normal(rng));
  return v / v.norm();
}

CMat random_state(int d, Rng& rng) {
  const CMat g = ginibre(d, rng);
  CMat rho = g * g.adjoint();
  return hermitize(rho / rho.trace().real());
}

CMat random_observable(int d, Rng& rng) {
  Eigen::HouseholderQR<CMat> qr(ginibre(d, rng));
  CMat q = qr.householderQ();
  const CMat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < d; ++i) q.col(i) *= r(i, i) / std::abs(r(i, i));
  Eigen::VectorXd spec(d);
  for (int i = 0; i < d; ++i) spec(i) = rng.uniform();
  return hermitize(q * spec.cast<cplx>().asDiagonal() * q.adjoint());
}

CMat projector(const CVec& v) { return v * v.adjoint(); }

CMat maximally_entangled(int d) {
  CVec v = CVec::Zero(d * d);
  for (int i = 0; i < d; ++i) v(i * d + i) = 1 / std::sqrt(static_cast<double>(d));
  return projector(v);
}

}  // namespace qcwb
