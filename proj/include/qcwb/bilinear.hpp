#pragma once

// max_{rho in A} min_{sigma in B} Tr(R (rho (x) sigma)) for convex sets that
// are SDP-representable. The max player's set enters as constraints; the min
// player's set is dualized, so one SDP gives the value, the max player's
// state (primal) and the min player's state (dual).

#include "qcwb/lmi_model.hpp"
#include "qcwb/quantum.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace qcwb {

struct Piece {
  enum class Kind { Full, Ppt, Atoms };
  Kind kind = Kind::Full;
  int d1 = 1, d2 = 1;          // split for the partial transpose and the parent marginal
  std::optional<CMat> parent;  // trace over the d2 register equals (weight) * parent
  std::vector<CMat> atoms;     // Kind::Atoms: fixed states; the piece is their convex hull

  static Piece full(int d1, int d2 = 1);
  static Piece ppt(int d1, int d2);
  static Piece hull(int d1, int d2, std::vector<CMat> atoms);
  Piece& with_parent(const CMat& p);
  int dim() const { return d1 * d2; }
};

// Minkowski combination sum_c w_c K_c with fixed weights summing to 1.
struct Mixture {
  std::vector<std::pair<double, Piece>> parts;
  static Mixture of(Piece p) { return Mixture{{{1.0, std::move(p)}}}; }
};

// Convex hull of the union of the mixtures.
struct SetRep {
  std::vector<Mixture> mixtures;
  static SetRep of(Piece p) { return SetRep{{Mixture::of(std::move(p))}}; }
  int dim() const;
};

struct BilinearSolution {
  double value = 0;  // primal objective at the returned strategies
  double bound = 0;  // dual bound (an upper bound on the program value)
  CMat rho, sigma;
  LmiSolution raw;
  bool ok() const { return raw.ok(); }
};

BilinearSolution solve_maxmin(const CMat& R, const SetRep& A, const SetRep& B,
                              const sdp::Options& opts = {});

// min_{sigma in B} max_{rho in A} via 1 - maxmin of swap(I - R) with the roles exchanged.
BilinearSolution solve_minmax(const CMat& R, const SetRep& A, const SetRep& B,
                              const sdp::Options& opts = {});

// max over product pure states a (x) b of <a b| W |a b>, alternating top
// eigenvectors from several deterministic and seeded starts.
struct ProductOptimum {
  double value = 0;
  CVec a, b;
  CMat state() const;
};
ProductOptimum best_product(const CMat& W, int d1, int d2, std::uint64_t seed, int random_starts = 6);

}  // namespace qcwb
