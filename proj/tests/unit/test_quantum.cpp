#include "qcwb/errors.hpp"
#include "qcwb/lmi_model.hpp"
#include "qcwb/quantum.hpp"
#include "qcwb/ree.hpp"
#include "qcwb/sdp.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>

using namespace qcwb;

namespace {

CVec ket(std::initializer_list<cplx> v) {
  CVec out(static_cast<int>(v.size()));
  int i = 0;
  for (auto x : v) out(i++) = x;
  return out.normalized();
}

CMat bell() { return maximally_entangled(2); }

CMat werner(double p) { return p * bell() + (1 - p) * CMat::Identity(4, 4) / 4.0; }

double binary_entropy(double f) { return -f * std::log(f) - (1 - f) * std::log(1 - f); }

}  // namespace

TEST_SUITE("quantum") {
  TEST_CASE("partial traces of a product return the factors") {
    Rng rng(3);
    const CMat a = random_state(2, rng), b = random_state(3, rng);
    const CMat ab = kron(a, b);
    CHECK((ptrace_second(ab, 2, 3) - a).norm() < 1e-12);
    CHECK((ptrace_first(ab, 2, 3) - b).norm() < 1e-12);
    CHECK((swap_registers(ab, 2, 3) - kron(b, a)).norm() < 1e-12);
  }

  TEST_CASE("partial transpose of a Bell state has eigenvalue -1/2") {
    const CMat pt = partial_transpose_second(bell(), 2, 2);
    CHECK(lambda_min(pt) == doctest::Approx(-0.5).epsilon(1e-12));
  }

  TEST_CASE("reduced operators match the definition") {
    Rng rng(5);
    const CMat R = random_observable(6, rng);
    const CMat rho = random_state(2, rng), sigma = random_state(3, rng);
    const CMat n = ptrace_first(R * kron(rho, CMat::Identity(3, 3)), 2, 3);
    const CMat m = ptrace_second(R * kron(CMat::Identity(2, 2), sigma), 2, 3);
    CHECK((reduce_to_second(R, rho, 2, 3) - n).norm() < 1e-12);
    CHECK((reduce_to_first(R, sigma, 2, 3) - m).norm() < 1e-12);
    CHECK((R * kron(rho, sigma)).trace().real() == doctest::Approx((n * sigma).trace().real()).epsilon(1e-12));
  }

  TEST_CASE("Hermitian basis is orthonormal with a scaled identity first") {
    for (int d : {1, 2, 3, 4}) {
      const auto B = hermitian_basis(d);
      REQUIRE(B.size() == static_cast<std::size_t>(d * d));
      CHECK((B[0] - CMat::Identity(d, d) / std::sqrt(double(d))).norm() < 1e-12);
      for (std::size_t i = 0; i < B.size(); ++i)
        for (std::size_t j = 0; j < B.size(); ++j)
          CHECK(std::abs((B[i] * B[j]).trace() - cplx(i == j ? 1.0 : 0.0)) < 1e-12);
    }
  }

  TEST_CASE("state and observable validation") {
    CMat bad = CMat::Identity(2, 2);
    CHECK_THROWS_AS(make_state(bad), InputError);
    CHECK_NOTHROW(make_state(bad / 2.0));
    CHECK_THROWS_AS(make_observable(2.0 * bad), InputError);
    CMat nonherm = CMat::Zero(2, 2);
    nonherm(0, 1) = 0.5;
    CHECK_THROWS_AS(make_observable(nonherm), InputError);
    double residual = 0;
    CMat m = CMat::Zero(2, 2);
    m(0, 0) = 1.2;
    m(1, 1) = -0.2;
    const CMat p = project_to_state(m, &residual);
    CHECK(p(0, 0).real() == doctest::Approx(1.0));
    CHECK(residual > 0.2);
  }

  TEST_CASE("degenerate eigenvectors use the lexicographic tie-break") {
    CMat h = CMat::Zero(3, 3);
    h(2, 2) = 2;
    const auto e = min_eigenpair(h);
    CHECK(e.value == doctest::Approx(0.0));
    CHECK(std::abs(e.vector(0) - cplx(1.0)) < 1e-12);
    CHECK(std::abs(e.vector(1)) < 1e-12);
  }

  TEST_CASE("relative entropy closed forms") {
    Rng rng(9);
    const CMat r = random_state(3, rng);
    CHECK(rel_entropy(r, r) == doctest::Approx(0.0).epsilon(1e-10));
    const CMat pure = projector(ket({1.0, cplx(0, 1)}));
    CHECK(rel_entropy(pure, CMat::Identity(2, 2) / 2.0) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
    CHECK(rel_entropy(CMat::Identity(2, 2) / 2.0, projector(ket({1.0, 0.0}))) ==
          std::numeric_limits<double>::infinity());
  }

  TEST_CASE("random observables have spectrum in [0, 1]") {
    Rng rng(11);
    for (int i = 0; i < 5; ++i) {
      const CMat R = random_observable(4, rng);
      Eigen::SelfAdjointEigenSolver<CMat> es(R);
      CHECK(es.eigenvalues().minCoeff() >= -1e-12);
      CHECK(es.eigenvalues().maxCoeff() <= 1 + 1e-12);
    }
  }
}

TEST_SUITE("sdp") {
  TEST_CASE("scalar program: max y with diag(1, 2) - y I psd") {
    sdp::Problem p;
    p.block_sizes = {2};
    p.C = {RMat::Zero(2, 2)};
    p.C[0](0, 0) = 1;
    p.C[0](1, 1) = 2;
    p.A = {{sdp::BlockEntry{0, RMat::Identity(2, 2)}}};
    p.b = Eigen::VectorXd::Ones(1);
    const auto s = sdp::solve(p);
    CHECK(s.status == sdp::Status::Optimal);
    CHECK(s.value == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(s.bound == doctest::Approx(1.0).epsilon(1e-8));
  }

  TEST_CASE("LMI model recovers lambda_min and its eigenvector as the dual") {
    Rng rng(13);
    for (int d : {2, 3, 4}) {
      const CMat H = random_observable(d, rng);
      LmiModel M;
      const int t = M.add_var();
      HermExpr e = HermExpr::constant_of(H);
      e.terms.emplace_back(t, -CMat::Identity(d, d));
      const int cone = M.psd(e);
      M.maximize(M.var(t));
      const auto s = M.solve();
      REQUIRE(s.ok());
      CHECK(s.value == doctest::Approx(lambda_min(H)).epsilon(1e-8));
      CHECK(s.duals[cone].trace().real() == doctest::Approx(1.0).epsilon(1e-7));
      CHECK((H * s.duals[cone]).trace().real() == doctest::Approx(lambda_min(H)).epsilon(1e-7));
    }
  }
}

TEST_SUITE("ree") {
  TEST_CASE("product state has zero entanglement") {
    Rng rng(17);
    const auto r = ree_upper(kron(random_state(2, rng), random_state(2, rng)), 2, 2);
    CHECK(r.value == 0.0);
    CHECK(r.certificate == ReeCertificate::ExactZero);
  }

  TEST_CASE("Bell state is ln 2") {
    const auto r = ree_upper(bell(), 2, 2);
    CHECK(r.value >= std::log(2.0) - 0.05);
    CHECK(r.value <= std::log(2.0) + 0.05);
    // An upper bound can never undercut the closed form.
    CHECK(r.value >= std::log(2.0) - 1e-9);
    CHECK_FALSE(r.ppt);
  }

  TEST_CASE("separable Werner state: explicit product decomposition then ree") {
    // The six Pauli eigenstates form a 2-design, so the average of
    // |psi><psi| (x) |psi*><psi*| is the Werner state at p = 1/3.
    const cplx i(0, 1);
    const std::vector<CVec> design = {ket({1.0, 0.0}), ket({0.0, 1.0}), ket({1.0, 1.0}),
                                      ket({1.0, -1.0}), ket({1.0, i}),   ket({1.0, -i})};
    CMat third = CMat::Zero(4, 4);
    for (const auto& v : design) third += kron(projector(v), projector(v.conjugate())) / 6.0;
    CHECK((third - werner(1.0 / 3)).norm() < 1e-12);
    const double p = 0.3;
    CMat sep = 3 * p * third;
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        sep += (1 - 3 * p) / 4.0 * kron(projector(CVec::Unit(2, a)), projector(CVec::Unit(2, b)));
    REQUIRE((sep - werner(p)).norm() < 1e-12);
    const auto r = ree_upper(werner(p), 2, 2);
    CHECK(r.ppt);
    CHECK(r.value <= 0.02);
  }

  TEST_CASE("entangled Werner state matches ln 2 - h(F)") {
    for (double p : {0.5, 0.8}) {
      const double F = p + (1 - p) / 4;
      const double exact = std::log(2.0) - binary_entropy(F);
      const auto r = ree_upper(werner(p), 2, 2);
      CHECK(r.value >= exact - 1e-9);
      CHECK(r.value <= exact + 1e-4);
      CHECK(r.certificate == ReeCertificate::UpperBound);
    }
  }

  TEST_CASE("max entanglement is ln of the smaller side") {
    CHECK(max_entanglement(2, 3) == doctest::Approx(std::log(2.0)));
    CHECK(max_entanglement(4, 3) == doctest::Approx(std::log(3.0)));
  }
}
