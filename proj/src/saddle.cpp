#include "qcwb/saddle.hpp"

#include "qcwb/errors.hpp"

#include <json.hpp>

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <sstream>

namespace qcwb {

FeasibleSetSpec FeasibleSetSpec::full(std::vector<int> regs) {
  FeasibleSetSpec s;
  s.kind = Kind::Full;
  s.registers = std::move(regs);
  return s;
}

FeasibleSetSpec FeasibleSetSpec::separable(std::vector<int> regs) {
  FeasibleSetSpec s;
  s.kind = Kind::Separable;
  s.registers = std::move(regs);
  return s;
}

FeasibleSetSpec FeasibleSetSpec::ent_bounded(std::vector<int> regs, double b) {
  FeasibleSetSpec s;
  s.kind = Kind::EntBounded;
  s.registers = std::move(regs);
  s.bound = b;
  return s;
}

FeasibleSetSpec FeasibleSetSpec::consistent(const CMat& parent, std::vector<int> regs) {
  FeasibleSetSpec s;
  s.kind = Kind::Consistent;
  s.registers = std::move(regs);
  s.parent = parent;
  return s;
}

int FeasibleSetSpec::dim() const { return rest() * last(); }

int FeasibleSetSpec::rest() const {
  if (registers.empty()) throw InputError("feasible set needs at least one register");
  return std::accumulate(registers.begin(), registers.end() - 1, 1, std::multiplies<>());
}

int FeasibleSetSpec::last() const {
  if (registers.empty()) throw InputError("feasible set needs at least one register");
  return registers.back();
}

void FeasibleSetSpec::validate() const {
  if (registers.empty()) throw InputError("feasible set needs at least one register");
  for (int r : registers)
    if (r < 1) throw InputError("register dimensions must be positive");
  if (kind != Kind::Full && registers.size() < 2)
    throw InputError(std::string(to_string(kind)) + " set needs at least two registers");
  if (kind == Kind::EntBounded && !(bound >= 0 && std::isfinite(bound)))
    throw InputError("entanglement bound must be a finite non-negative number");
  if (kind == Kind::Consistent) {
    if (parent.rows() != rest() || parent.cols() != rest())
      throw InputError("parent state does not match the reduced dimension");
    make_state(parent);
  }
}

bool FeasibleSetSpec::nonbinding() const {
  return kind == Kind::EntBounded && bound >= max_entanglement(rest(), last());
}

bool FeasibleSetSpec::product_forcing() const {
  return kind == Kind::Separable || (kind == Kind::EntBounded && bound == 0);
}

bool FeasibleSetSpec::operator==(const FeasibleSetSpec& o) const {
  if (kind != o.kind || registers != o.registers) return false;
  if (kind == Kind::EntBounded && bound != o.bound) return false;
  if (kind == Kind::Consistent && (parent.rows() != o.parent.rows() || (parent - o.parent).norm() > 0)) return false;
  return true;
}

const char* to_string(FeasibleSetSpec::Kind k) {
  switch (k) {
    case FeasibleSetSpec::Kind::Full: return "FULL";
    case FeasibleSetSpec::Kind::Separable: return "SEPARABLE";
    case FeasibleSetSpec::Kind::EntBounded: return "ENT_BOUNDED";
    case FeasibleSetSpec::Kind::Consistent: return "CONSISTENT";
  }
  return "?";
}

std::string to_string(const FeasibleSetSpec& s) {
  std::ostringstream os;
  os << to_string(s.kind) << "[";
  for (std::size_t i = 0; i < s.registers.size(); ++i) os << (i ? "x" : "") << s.registers[i];
  os << "]";
  if (s.kind == FeasibleSetSpec::Kind::EntBounded) os << "(b=" << s.bound << ")";
  return os.str();
}

FeasibleSetSpec parse_set_spec(const std::string& text) {
  std::vector<std::string> fields;
  std::stringstream ss(text);
  for (std::string f; std::getline(ss, f, ':');) fields.push_back(f);
  if (fields.size() < 2) throw InputError("set spec must look like kind:dims[:bound]");
  std::vector<int> regs;
  std::stringstream ds(fields[1]);
  for (std::string f; std::getline(ds, f, 'x');) {
    try {
      std::size_t used = 0;
      regs.push_back(std::stoi(f, &used));
      if (used != f.size()) throw std::invalid_argument(f);
    } catch (const std::exception&) {
      throw InputError("bad register dimension '" + f + "'");
    }
  }
  FeasibleSetSpec s;
  const auto& k = fields[0];
  if (k == "full" && fields.size() == 2) s = FeasibleSetSpec::full(regs);
  else if (k == "sep" && fields.size() == 2) s = FeasibleSetSpec::separable(regs);
  else if (k == "ent" && fields.size() == 3) {
    double b = 0;
    try {
      std::size_t used = 0;
      b = std::stod(fields[2], &used);
      if (used != fields[2].size()) throw std::invalid_argument(fields[2]);
    } catch (const std::exception&) {
      throw InputError("bad entanglement bound '" + fields[2] + "'");
    }
    s = FeasibleSetSpec::ent_bounded(regs, b);
  } else {
    throw InputError("unknown set spec '" + text + "'");
  }
  s.validate();
  return s;
}

const char* to_string(Certificate c) {
  switch (c) {
    case Certificate::ExactSdp: return "EXACT_SDP";
    case Certificate::PptRelaxation: return "PPT_RELAXATION";
    case Certificate::SeesawBound: return "SEESAW_BOUND";
  }
  return "?";
}

double payoff(const CMat& R, const CMat& rho, const CMat& sigma) { return (R * kron(rho, sigma)).trace().real(); }

SaddleResult solve_level2(const CMat& R, int dA, int dB, const SaddleOptions& opts) {
  make_observable(R);
  if (R.rows() != dA * dB) throw InputError("observable does not match dA * dB");
  const auto A = SetRep::of(Piece::full(dA)), B = SetRep::of(Piece::full(dB));
  const auto mm = solve_maxmin(R, A, B, opts.sdp);
  const auto xm = solve_minmax(R, A, B, opts.sdp);
  SaddleResult r;
  r.rho = project_to_state(mm.rho);
  r.sigma = project_to_state(xm.sigma);
  r.maxmin = lambda_min(reduce_to_second(R, r.rho, dA, dB));
  r.minmax = max_eigenpair(reduce_to_first(R, r.sigma, dA, dB)).value;
  r.value_lower = r.maxmin;
  r.value_upper = r.minmax;
  r.iterations = mm.raw.iterations + xm.raw.iterations;
  r.certificate = Certificate::ExactSdp;
  r.converged = mm.ok() && xm.ok();
  if (!r.converged)
    r.note = std::string("interior point solver stopped: ") + sdp::to_string(mm.raw.status) + "/" +
             sdp::to_string(xm.raw.status);
  return r;
}

namespace {

// Euclidean projection of a vector onto the probability simplex.
Eigen::VectorXd simplex_projection(const Eigen::VectorXd& v) {
  std::vector<double> u(v.data(), v.data() + v.size());
  std::sort(u.begin(), u.end(), std::greater<>());
  double css = 0, theta = 0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    css += u[i];
    const double t = (css - 1) / static_cast<double>(i + 1);
    if (u[i] - t > 0) theta = t;
  }
  return (v.array() - theta).cwiseMax(0.0);
}

CMat project_density(const CMat& m) {
  Eigen::SelfAdjointEigenSolver<CMat> es(hermitize(m));
  const Eigen::VectorXd p = simplex_projection(es.eigenvalues());
  return hermitize(es.eigenvectors() * p.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint());
}

}  // namespace

SubgradientResult solve_level2_subgradient(const CMat& R, int dA, int dB, int iterations) {
  make_observable(R);
  if (R.rows() != dA * dB) throw InputError("observable does not match dA * dB");
  CMat rho = CMat::Identity(dA, dA) / static_cast<double>(dA);
  CMat avg = CMat::Zero(dA, dA);
  double wsum = 0;
  SubgradientResult best;
  best.value = -1;
  for (int t = 1; t <= iterations; ++t) {
    const auto e = min_eigenpair(reduce_to_second(R, rho, dA, dB));
    if (e.value > best.value) {
      best.value = e.value;
      best.rho = rho;
    }
    const CMat g = reduce_to_first(R, projector(e.vector), dA, dB);
    const double eta = 0.5 / std::sqrt(static_cast<double>(t));
    rho = project_density(rho + eta * g);
    avg += eta * rho;
    wsum += eta;
  }
  const CMat mean = hermitize(avg / wsum);
  const double v = lambda_min(reduce_to_second(R, mean, dA, dB));
  if (v > best.value) {
    best.value = v;
    best.rho = mean;
  }
  best.iterations = iterations;
  return best;
}

namespace {

bool exact_set(const FeasibleSetSpec& s) {
  return s.kind == FeasibleSetSpec::Kind::Full || s.kind == FeasibleSetSpec::Kind::Consistent || s.nonbinding();
}

bool intermediate(const FeasibleSetSpec& s) { return !exact_set(s) && !s.product_forcing(); }

// Ppt equals separability on 2 x 2 and 2 x 3.
bool ppt_exact(const FeasibleSetSpec& s) { return s.rest() * s.last() <= 6; }

SetRep exact_rep(const FeasibleSetSpec& s) {
  if (s.kind == FeasibleSetSpec::Kind::Consistent) return SetRep::of(Piece::full(s.rest(), s.last()).with_parent(s.parent));
  return SetRep::of(Piece::full(s.rest(), s.last()));
}

SetRep outer_rep(const FeasibleSetSpec& s) {
  if (exact_set(s)) return exact_rep(s);
  if (s.product_forcing()) return SetRep::of(Piece::ppt(s.rest(), s.last()));
  return SetRep::of(Piece::full(s.rest(), s.last()));
}

SetRep inner_rep(const FeasibleSetSpec& s, const std::vector<CMat>& products, const std::vector<CMat>& certified) {
  if (exact_set(s)) return exact_rep(s);
  if (s.product_forcing()) return SetRep::of(Piece::hull(s.rest(), s.last(), products));
  // Any state has entanglement at most ln min(rest, last) and entanglement is
  // convex, so (1 - t) Sep + t D stays inside the bound for t = b / ln min.
  const double t = std::min(1.0, s.bound / max_entanglement(s.rest(), s.last()));
  Piece sep = ppt_exact(s) ? Piece::ppt(s.rest(), s.last()) : Piece::hull(s.rest(), s.last(), products);
  Mixture blend{{{1 - t, sep}, {t, Piece::full(s.rest(), s.last())}}};
  std::vector<CMat> atoms = products;
  atoms.insert(atoms.end(), certified.begin(), certified.end());
  return SetRep{{Mixture::of(Piece::hull(s.rest(), s.last(), atoms)), blend}};
}

std::vector<CMat> basis_products(int d1, int d2) {
  std::vector<CMat> out;
  for (int i = 0; i < d1 * d2; ++i) {
    CMat e = CMat::Zero(d1 * d2, d1 * d2);
    e(i, i) = 1;
    out.push_back(e);
  }
  return out;
}

bool known(const std::vector<CMat>& atoms, const CMat& a) {
  for (const auto& x : atoms)
    if ((x - a).norm() < 1e-9) return true;
  return false;
}

// Largest step along rho_from -> rho_to that ree_upper certifies within the bound.
std::optional<CMat> certified_step(const CMat& from, const CMat& to, const FeasibleSetSpec& s,
                                   const SaddleOptions& opts) {
  for (double t = 1.0; t >= 1.0 / 16; t /= 2) {
    const CMat cand = project_to_state((1 - t) * from + t * to);
    const auto r = ree_upper(cand, s.rest(), s.last(), opts.ree);
    if (r.value <= s.bound - opts.ree_margin) return cand;
  }
  return std::nullopt;
}

}  // namespace

SaddleResult solve_reduced(const CMat& R, const FeasibleSetSpec& setA, const FeasibleSetSpec& setB,
                           const SaddleOptions& opts) {
  setA.validate();
  setB.validate();
  make_observable(R);
  const int dA = setA.dim(), dB = setB.dim();
  if (R.rows() != dA * dB) throw InputError("observable dimension must equal dim(setA) * dim(setB)");
  SaddleResult r;
  for (const auto* s : {&setA, &setB})
    if (s->kind == FeasibleSetSpec::Kind::EntBounded && s->nonbinding())
      r.note += "bound " + std::to_string(s->bound) + " reaches the maximal entanglement of " + to_string(*s) +
                "; constraint inactive. ";

  if (exact_set(setA) && exact_set(setB)) {
    const auto A = exact_rep(setA), B = exact_rep(setB);
    const auto mm = solve_maxmin(R, A, B, opts.sdp);
    const auto xm = solve_minmax(R, A, B, opts.sdp);
    r.maxmin = mm.value;
    r.minmax = xm.value;
    r.value_lower = std::min(mm.value, xm.value);
    r.value_upper = std::max(mm.value, xm.value);
    r.rho = mm.rho;
    r.sigma = xm.sigma;
    r.iterations = mm.raw.iterations + xm.raw.iterations;
    r.certificate = Certificate::ExactSdp;
    r.converged = mm.ok() && xm.ok();
    if (!r.converged) r.note += "interior point solver did not reach tolerance. ";
    return r;
  }

  std::vector<CMat> prodA = basis_products(setA.rest(), setA.last());
  std::vector<CMat> prodB = basis_products(setB.rest(), setB.last());
  std::vector<CMat> certA, certB;
  const bool needA = !exact_set(setA), needB = !exact_set(setB);
  double lower = -std::numeric_limits<double>::infinity(), upper = std::numeric_limits<double>::infinity();
  int stale = 0;
  int round = 0;
  for (; round < opts.max_rounds; ++round) {
    const auto U = solve_maxmin(R, outer_rep(setA), inner_rep(setB, prodB, certB), opts.sdp);
    const auto L = solve_maxmin(R, inner_rep(setA, prodA, certA), outer_rep(setB), opts.sdp);
    const double prev_lower = lower, prev_upper = upper;
    if (L.ok() && L.value > lower) {
      lower = L.value;
      r.rho = L.rho;
    }
    if (U.ok() && U.bound < upper) {
      upper = U.bound;
      r.sigma = U.sigma;
    }
    if (upper - lower <= opts.tol) {
      r.converged = true;
      break;
    }
    stale = lower > prev_lower + 1e-10 || upper < prev_upper - 1e-10 ? 0 : stale + 1;
    if (stale >= 6) break;

    bool added = false;
    if (needA) {
      const CMat W = reduce_to_first(R, project_to_state(L.sigma), dA, dB);
      const auto po = best_product(W, setA.rest(), setA.last(), opts.seed + round);
      if (po.value > L.value + 1e-10 && !known(prodA, po.state())) {
        prodA.push_back(po.state());
        added = true;
      }
      if (intermediate(setA))
        if (auto c = certified_step(project_to_state(L.rho), project_to_state(U.rho), setA, opts)) {
          if (!known(certA, *c)) {
            certA.push_back(*c);
            added = true;
          }
        }
    }
    if (needB) {
      const CMat V = reduce_to_second(R, project_to_state(U.rho), dA, dB);
      const auto po = best_product(-V, setB.rest(), setB.last(), opts.seed + round);
      if (-po.value < U.value - 1e-10 && !known(prodB, po.state())) {
        prodB.push_back(po.state());
        added = true;
      }
      if (intermediate(setB))
        if (auto c = certified_step(project_to_state(U.sigma), project_to_state(L.sigma), setB, opts)) {
          if (!known(certB, *c)) {
            certB.push_back(*c);
            added = true;
          }
        }
    }
    if (!added) break;
  }
  r.iterations = round + 1;
  r.value_lower = lower;
  r.value_upper = upper;
  r.maxmin = lower;
  r.minmax = upper;
  r.certificate = intermediate(setA) || intermediate(setB) ? Certificate::SeesawBound : Certificate::PptRelaxation;
  if (!r.converged)
    r.note += "bracket width " + std::to_string(upper - lower) + " after " + std::to_string(r.iterations) + " rounds. ";
  return r;
}

std::string observable_to_json(const CMat& m) {
  nlohmann::json j;
  j["dim"] = m.rows();
  nlohmann::json e = nlohmann::json::array();
  for (int i = 0; i < m.rows(); ++i)
    for (int k = 0; k < m.cols(); ++k) e.push_back({m(i, k).real(), m(i, k).imag()});
  j["entries"] = e;
  return j.dump() + "\n";
}

CMat observable_from_json(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    const int d = j.at("dim").get<int>();
    const auto& e = j.at("entries");
    if (d <= 0 || e.size() != static_cast<std::size_t>(d) * d) throw InputError("entry count does not match dim");
    CMat m(d, d);
    for (int i = 0; i < d; ++i)
      for (int k = 0; k < d; ++k) {
        const auto& p = e.at(static_cast<std::size_t>(i) * d + k);
        m(i, k) = cplx(p.at(0).get<double>(), p.at(1).get<double>());
      }
    return m;
  } catch (const nlohmann::json::exception& ex) {
    throw InputError(std::string("observable JSON: ") + ex.what());
  }
}

}  // namespace qcwb
