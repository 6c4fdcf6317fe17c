#include "qcwb/ree.hpp"

#include "qcwb/errors.hpp"

#include <ceres/ceres.h>

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace qcwb {

const char* to_string(ReeCertificate c) {
  return c == ReeCertificate::ExactZero ? "exact_zero" : "upper_bound";
}

bool is_ppt(const CMat& rho, int dA, int dB, double tol) {
  return lambda_min(partial_transpose_second(rho, dA, dB)) >= -tol;
}

double max_entanglement(int dA, int dB) { return std::log(static_cast<double>(std::min(dA, dB))); }

namespace {

constexpr double kEigClamp = 1e-14;
constexpr double kZeroCertificate = 1e-10;

CVec kron_vec(const CVec& a, const CVec& b) {
  CVec out(a.size() * b.size());
  for (int i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

// Mixture of K product pure states. Parameters per component: logit, then
// Re/Im pairs of a (dA entries) and b (dB entries).
struct Ansatz {
  int dA, dB, K;
  int stride() const { return 1 + 2 * dA + 2 * dB; }
  int size() const { return K * stride(); }

  struct Parts {
    std::vector<double> p, na, nb;
    std::vector<CVec> a, b;  // normalized
  };

  Parts unpack(const double* x) const {
    Parts s;
    double mx = -std::numeric_limits<double>::infinity();
    for (int j = 0; j < K; ++j) mx = std::max(mx, x[j * stride()]);
    double z = 0;
    for (int j = 0; j < K; ++j) {
      const double* q = x + j * stride();
      s.p.push_back(std::exp(q[0] - mx));
      z += s.p.back();
      CVec a(dA), b(dB);
      for (int i = 0; i < dA; ++i) a(i) = cplx(q[1 + 2 * i], q[2 + 2 * i]);
      for (int i = 0; i < dB; ++i) b(i) = cplx(q[1 + 2 * dA + 2 * i], q[2 + 2 * dA + 2 * i]);
      s.na.push_back(std::max(a.norm(), 1e-150));
      s.nb.push_back(std::max(b.norm(), 1e-150));
      s.a.push_back(a / s.na.back());
      s.b.push_back(b / s.nb.back());
    }
    for (auto& v : s.p) v /= z;
    return s;
  }

  CMat sigma(const Parts& s) const {
    CMat out = CMat::Zero(dA * dB, dA * dB);
    for (int j = 0; j < K; ++j) out += s.p[j] * projector(kron_vec(s.a[j], s.b[j]));
    return out;
  }

  void pack(std::vector<double>& x, int j, double logit, const CVec& a, const CVec& b) const {
    double* q = x.data() + j * stride();
    q[0] = logit;
    for (int i = 0; i < dA; ++i) {
      q[1 + 2 * i] = a(i).real();
      q[2 + 2 * i] = a(i).imag();
    }
    for (int i = 0; i < dB; ++i) {
      q[1 + 2 * dA + 2 * i] = b(i).real();
      q[2 + 2 * dA + 2 * i] = b(i).imag();
    }
  }
};

class ReeCost final : public ceres::FirstOrderFunction {
 public:
  ReeCost(const CMat& rho, Ansatz an, int* counter)
      : rho_(rho), an_(an), neg_entropy_(-von_neumann_entropy(rho)), counter_(counter) {}

  int NumParameters() const override { return an_.size(); }

  bool Evaluate(const double* x, double* cost, double* grad) const override {
    ++*counter_;
    const auto s = an_.unpack(x);
    const CMat sigma = an_.sigma(s);
    Eigen::SelfAdjointEigenSolver<CMat> es(hermitize(sigma));
    const auto& V = es.eigenvectors();
    Eigen::VectorXd lam = es.eigenvalues();
    const CMat rp = V.adjoint() * rho_ * V;
    const int d = static_cast<int>(lam.size());
    double c = neg_entropy_;
    for (int j = 0; j < d; ++j) {
      if (lam(j) < kEigClamp && rp(j, j).real() > 1e-10) return false;
      lam(j) = std::max(lam(j), kEigClamp);
      c -= rp(j, j).real() * std::log(lam(j));
    }
    *cost = c;
    if (!grad) return true;

    CMat Gt(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        const double li = lam(i), lj = lam(j);
        const double g = std::abs(li - lj) > 1e-12 * std::max(li, lj) ? (std::log(li) - std::log(lj)) / (li - lj)
                                                                         : 2.0 / (li + lj);
        Gt(i, j) = -g * rp(i, j);
      }
    const CMat G = V * Gt * V.adjoint();
    std::vector<double> gp(an_.K);
    double mean = 0;
    for (int j = 0; j < an_.K; ++j) {
      const CVec v = kron_vec(s.a[j], s.b[j]);
      gp[j] = (v.adjoint() * G * v)(0, 0).real();
      mean += s.p[j] * gp[j];
    }
    for (int j = 0; j < an_.K; ++j) {
      double* q = grad + j * an_.stride();
      q[0] = s.p[j] * (gp[j] - mean);
      const CMat HA = s.p[j] * reduce_to_first(G, projector(s.b[j]), an_.dA, an_.dB);
      const CMat HB = s.p[j] * reduce_to_second(G, projector(s.a[j]), an_.dA, an_.dB);
      const CVec da = (HA * s.a[j] - (s.a[j].adjoint() * HA * s.a[j])(0, 0) * s.a[j]) / s.na[j];
      const CVec db = (HB * s.b[j] - (s.b[j].adjoint() * HB * s.b[j])(0, 0) * s.b[j]) / s.nb[j];
      for (int i = 0; i < an_.dA; ++i) {
        q[1 + 2 * i] = 2 * da(i).real();
        q[2 + 2 * i] = 2 * da(i).imag();
      }
      for (int i = 0; i < an_.dB; ++i) {
        q[1 + 2 * an_.dA + 2 * i] = 2 * db(i).real();
        q[2 + 2 * an_.dA + 2 * i] = 2 * db(i).imag();
      }
    }
    return true;
  }

 private:
  CMat rho_;
  Ansatz an_;
  double neg_entropy_;
  int* counter_;
};

double safe_rel_entropy(const CMat& rho, const CMat& sigma) {
  try {
    return rel_entropy(rho, sigma);
  } catch (const InputError&) {
    return std::numeric_limits<double>::infinity();
  }
}

}  // namespace

ReeResult ree_upper(const CMat& rho_in, int dA, int dB, const ReeOptions& opts) {
  const CMat rho = make_state(rho_in).m;
  if (rho.rows() != dA * dB) throw InputError("state does not match the register split");
  ReeResult best;
  best.ppt = is_ppt(rho, dA, dB);
  best.value = std::numeric_limits<double>::infinity();
  auto offer = [&](const CMat& s) {
    const CMat sig = hermitize(s / s.trace().real());
    const double v = safe_rel_entropy(rho, sig);
    if (v < best.value) {
      best.value = v;
      best.sigma = sig;
    }
  };

  const CMat rA = ptrace_second(rho, dA, dB), rB = ptrace_first(rho, dA, dB);
  const CMat prod = kron(rA, rB);
  if ((prod - rho).norm() <= 1e-12) {
    best.value = 0;
    best.sigma = prod;
    best.certificate = ReeCertificate::ExactZero;
    return best;
  }
  offer(prod);
  const CMat dephased = CMat(rho.diagonal().asDiagonal());
  offer(dephased);

  const int n = dA * dB;
  const int K = opts.components > 0 ? opts.components : std::min(16, n * n);
  const Ansatz an{dA, dB, K};
  Rng rng(derive_seed(opts.seed, 0x726565));

  std::vector<std::vector<double>> starts;
  {
    // Computational product basis weighted by the diagonal of rho.
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int x, int y) { return rho(x, x).real() > rho(y, y).real(); });
    std::vector<double> x(an.size());
    for (int j = 0; j < K; ++j) {
      CVec a = CVec::Zero(dA), b = CVec::Zero(dB);
      double logit = -12;
      if (j < n) {
        const int idx = order[j];
        a(idx / dB) = 1;
        b(idx % dB) = 1;
        logit = std::log(std::max(rho(idx, idx).real(), 1e-6));
      }
      a += 1e-3 * random_pure(dA, rng);
      b += 1e-3 * random_pure(dB, rng);
      an.pack(x, j, logit, a, b);
    }
    starts.push_back(std::move(x));
  }
  for (int s = 0; s < opts.starts; ++s) {
    std::vector<double> x(an.size());
    for (int j = 0; j < K; ++j) an.pack(x, j, 0.5 * (rng.uniform() - 0.5), random_pure(dA, rng), random_pure(dB, rng));
    starts.push_back(std::move(x));
  }

  ceres::GradientProblemSolver::Options o;
  o.line_search_direction_type = ceres::LBFGS;
  o.max_num_iterations = opts.max_iterations;
  o.function_tolerance = 1e-14;
  o.gradient_tolerance = 1e-12;
  o.parameter_tolerance = 1e-14;
  o.logging_type = ceres::SILENT;
  int evaluations = 0;
  for (auto& x : starts) {
    ceres::GradientProblem problem(new ReeCost(rho, an, &evaluations));
    ceres::GradientProblemSolver::Summary summary;
    ceres::Solve(o, problem, x.data(), &summary);
    offer(an.sigma(an.unpack(x.data())));
  }
  best.evaluations = evaluations;
  if (best.ppt && best.value <= kZeroCertificate) {
    best.value = 0;
    best.certificate = ReeCertificate::ExactZero;
  }
  return best;
}

}  // namespace qcwb
