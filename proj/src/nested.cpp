#include "qcwb/nested.hpp"

#include "qcwb/bilinear.hpp"
#include "qcwb/errors.hpp"
#include "qcwb/ree.hpp"

#include <boost/math/special_functions/erf.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace qcwb {

namespace {

SetRep extension_set(const NestedDims& d, const CMat& rho1, double b2) {
  if (b2 >= max_entanglement(d.a1, d.a2)) return SetRep::of(Piece::full(d.a1, d.a2).with_parent(rho1));
  if (b2 == 0) return SetRep::of(Piece::ppt(d.a1, d.a2).with_parent(rho1));
  // Entanglement is convex and never exceeds ln min(a1, a2), so this blend
  // of separable and arbitrary extensions respects the bound.
  const double t = b2 / max_entanglement(d.a1, d.a2);
  return SetRep{{Mixture{{{1 - t, Piece::ppt(d.a1, d.a2).with_parent(rho1)},
                          {t, Piece::full(d.a1, d.a2).with_parent(rho1)}}}}};
}

bool ppt_is_separable(const NestedDims& d) { return d.a1 * d.a2 <= 6; }

// rho1 = G G^dagger / Tr, G read row-major from Re/Im pairs.
CMat state_from_params(const std::vector<double>& x, int d) {
  CMat G(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) G(i, j) = cplx(x[2 * (i * d + j)], x[2 * (i * d + j) + 1]);
  CMat r = G * G.adjoint();
  const double tr = r.trace().real();
  if (!(tr > 1e-300)) return CMat::Identity(d, d) / static_cast<double>(d);
  return hermitize(r / tr);
}

double radical_inverse(std::uint64_t n, int base) {
  double inv = 1.0 / base, f = inv, out = 0;
  while (n > 0) {
    out += static_cast<double>(n % base) * f;
    n /= base;
    f *= inv;
  }
  return out;
}

constexpr int kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61};

// Shifted Halton point mapped to standard normals.
std::vector<double> net_point(std::uint64_t index, const std::vector<double>& shift) {
  std::vector<double> x(shift.size());
  for (std::size_t k = 0; k < shift.size(); ++k) {
    double u = radical_inverse(index, kPrimes[k]) + shift[k];
    u -= std::floor(u);
    u = std::clamp(u, 1e-12, 1 - 1e-12);
    x[k] = std::sqrt(2.0) * boost::math::erf_inv(2 * u - 1);
  }
  return x;
}

}  // namespace

InnerValue nested_inner(const CMat& R, const NestedDims& d, const CMat& rho1, double b2, const sdp::Options& opts) {
  const int dA = d.a1 * d.a2;
  const auto s = solve_maxmin(R, extension_set(d, rho1, b2), SetRep::of(Piece::full(d.b1)), opts);
  InnerValue out;
  out.rho2 = hermitize(s.rho);
  const auto e = min_eigenpair(reduce_to_second(R, out.rho2, dA, d.b1));
  out.value = e.value;
  out.sigma1 = projector(e.vector);
  return out;
}

NestedResult solve_nested_level3(const CMat& R, const NestedDims& d, double b2, const NestedOptions& opts) {
  for (int x : {d.a1, d.a2, d.b1})
    if (x < 1 || x > 3) throw InputError("nested evaluation supports register dimensions 1..3");
  if (!(b2 >= 0) || !std::isfinite(b2)) throw InputError("entanglement bound must be finite and non-negative");
  make_observable(R);
  if (R.rows() != d.a1 * d.a2 * d.b1) throw InputError("observable does not match a1 * a2 * b1");
  if (opts.net_points < 1) throw InputError("net needs at least one point");
  if (opts.net_points > opts.max_net_points) throw ResourceError("net resolution exceeds the configured budget");

  const int np = 2 * d.a1 * d.a1;
  Rng rng(derive_seed(opts.seed, 0x6e6574));
  std::vector<double> shift(np);
  for (auto& s : shift) s = rng.uniform();

  auto eval = [&](const std::vector<double>& x) {
    try {
      return nested_inner(R, d, state_from_params(x, d.a1), b2, opts.sdp).value;
    } catch (const std::exception&) {
      return -std::numeric_limits<double>::infinity();
    }
  };

  const int n = opts.net_points;
  std::vector<std::vector<double>> pts(n);
  std::vector<double> vals(n);
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < n; ++i) {
    pts[i] = net_point(static_cast<std::uint64_t>(i) + 1, shift);
    vals[i] = eval(pts[i]);
  }
  NestedResult res;
  res.evaluations = n;
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return vals[a] > vals[b]; });
  res.net_value = vals[order[0]];

  // Compass search polish: poll all 2 np directions, move to the best.
  std::vector<double> best_x = pts[order[0]];
  double best = res.net_value;
  const int starts = std::min(opts.refine_starts, n);
  for (int s = 0; s < starts; ++s) {
    std::vector<double> x = pts[order[s]];
    double fx = vals[order[s]];
    double step = 0.25;
    int used = 0;
    for (int poll = 0; step > 1e-5 && poll < opts.refine_polls; ++poll) {
      std::vector<double> fv(2 * np);
#pragma omp parallel for schedule(dynamic)
      for (int k = 0; k < 2 * np; ++k) {
        std::vector<double> y = x;
        y[k / 2] += (k % 2 ? -step : step);
        fv[k] = eval(y);
      }
      used += 2 * np;
      int arg = -1;
      for (int k = 0; k < 2 * np; ++k)
        if (fv[k] > fx + 1e-13 && (arg < 0 || fv[k] > fv[arg])) arg = k;
      if (arg < 0) {
        step /= 2;
        continue;
      }
      x[arg / 2] += (arg % 2 ? -step : step);
      fx = fv[arg];
    }
    res.evaluations += used;
    if (fx > best) {
      best = fx;
      best_x = x;
    }
  }

  res.rho1 = state_from_params(best_x, d.a1);
  auto inner = nested_inner(R, d, res.rho1, b2, opts.sdp);
  CMat rho2 = inner.rho2;
  rho2 += kron(res.rho1 - ptrace_second(rho2, d.a1, d.a2), CMat::Identity(d.a2, d.a2) / static_cast<double>(d.a2));
  res.rho2 = hermitize(rho2);
  res.consistency_residual = (ptrace_second(res.rho2, d.a1, d.a2) - res.rho1).cwiseAbs().maxCoeff();
  const auto e = min_eigenpair(reduce_to_second(R, res.rho2, d.a1 * d.a2, d.b1));
  res.value = e.value;
  res.sigma1 = projector(e.vector);
  res.inner_exact = b2 >= max_entanglement(d.a1, d.a2) || ppt_is_separable(d);
  return res;
}

}  // namespace qcwb
