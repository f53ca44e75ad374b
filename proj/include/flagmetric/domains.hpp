#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "flagmetric/grassmann.hpp"

namespace flagmetric {

// Membership oracle over p-planes. margin() is the signed distance-like
// quantity driving boundary refinement: positive inside, negative outside,
// smooth near a generic boundary point.
class Domain {
 public:
  explicit Domain(GrassmannContext ctx) : ctx_(std::move(ctx)) { ctx_.validate(); }
  virtual ~Domain() = default;

  const GrassmannContext& ctx() const { return ctx_; }

  virtual double margin(const Plane& x) const = 0;
  virtual double inside_threshold() const { return ctx_.tol.geom_abs; }
  bool contains(const Plane& x) const { return margin(x) > inside_threshold(); }

  virtual bool dual_contains(const Plane& xi) const = 0;
  // true when dual_contains is a sampled best-effort verdict
  virtual bool dual_check_is_heuristic() const { return false; }

  // Smooth feasibility margin for dual membership (values > -geom_abs count
  // as feasible); nullopt when the domain has no cheap dual oracle, which
  // disables local optimization over dual pairs.
  virtual std::optional<double> dual_margin(const Plane& xi) const {
    (void)xi;
    return std::nullopt;
  }

  virtual Plane sample_interior(SplitMix64& rng) const = 0;
  virtual std::string kind() const = 0;

 private:
  GrassmannContext ctx_;
};

// Realization of the noncompact dual: {x : form|_x positive definite} for a
// symmetric form of signature (p, q). Membership margin is the smallest
// eigenvalue of the restricted Gram matrix.
class SymmetricDomain : public Domain {
 public:
  SymmetricDomain(GrassmannContext ctx, Eigen::MatrixXd form);

  const Eigen::MatrixXd& form() const { return form_; }
  // columns E+ with E+^T F E+ = I_p, and E- with E-^T F E- = -I_q
  const Eigen::MatrixXd& positive_frame() const { return pos_frame_; }
  const Eigen::MatrixXd& negative_frame() const { return neg_frame_; }
  const Plane& base_point() const { return base_; }

  // plane spanned by E+ + E- B for a q x p graph matrix B (needs ||B|| < 1
  // only for membership, not for construction)
  Plane graph_plane(const Eigen::MatrixXd& b) const;

  double margin(const Plane& x) const override;
  bool dual_contains(const Plane& xi) const override;
  std::optional<double> dual_margin(const Plane& xi) const override;
  Plane sample_interior(SplitMix64& rng) const override;
  std::string kind() const override { return "symmetric"; }

 private:
  Eigen::MatrixXd form_;
  Eigen::MatrixXd pos_frame_;
  Eigen::MatrixXd neg_frame_;
  Plane base_;
};

// Sign-cell over-approximation of a connected component of the complement of
// finitely many dual hypersurfaces Z_xi. Membership compares the vector of
// det[x | xi_i] signs with the reference cell, modulo a global flip (the
// Pluecker sign of a plane representative is only canonical up to that flip).
class HyperplaneComplementDomain : public Domain {
 public:
  HyperplaneComplementDomain(GrassmannContext ctx, std::vector<Plane> duals,
                             Plane reference);

  const std::vector<Plane>& duals() const { return duals_; }
  const Plane& reference() const { return reference_; }
  const std::vector<int>& signs() const { return signs_; }

  double margin(const Plane& x) const override;
  double inside_threshold() const override { return 0.0; }
  bool dual_contains(const Plane& xi) const override;
  bool dual_check_is_heuristic() const override { return true; }
  Plane sample_interior(SplitMix64& rng) const override;
  std::string kind() const override { return "complement"; }

 private:
  std::vector<Plane> duals_;
  Plane reference_;
  std::vector<int> signs_;
};

// Connected component of a photon's trace in a domain. The circle coordinate
// theta (period pi) satisfies t = tan(theta); the component is the open arc
// (theta_lo, theta_hi) with theta_hi - theta_lo < pi unless whole_line.
struct PhotonInterval {
  ProjParam pp;
  bool whole_line = false;
  double theta_lo = 0.0;
  double theta_hi = 0.0;
  ExtReal lo;
  ExtReal hi;

  bool contains_angle(double theta) const;
};

// Ray-cast the photon against the domain: 1024-point scan of the circle plus
// bisection refinement of the endpoints (two passes of 50 iterations each).
// The component containing seed_angle is returned when given, otherwise the
// first component found. nullopt when the photon misses the domain.
std::optional<PhotonInterval> photon_intersection(const Domain& dom, const ProjParam& pp,
                                                  std::optional<double> seed_angle = {});

// Hilbert length between two parameters inside one interval; 0 on whole lines.
double hilbert_length(const PhotonInterval& interval, double theta_x, double theta_y);

// Hilbert length of the segment [x, y] of the photon through x and y.
// Requires arithmetic distance <= 1 and both points in one component.
double segment_hilbert_length(const Domain& dom, const Plane& x, const Plane& y);

struct ProbeReport {
  std::string probe;
  std::uint64_t seed = 0;
  int samples = 0;
  int passes = 0;
  int fails = 0;
  int skipped = 0;
  int max_components = 0;
  bool heuristic = false;
  std::optional<Photon> witness;
};

// Photon through x leaving in a random rank-one direction; x sits at theta=0.
ProjParam random_photon_at(const GrassmannContext& ctx, const Plane& x, SplitMix64& rng);

// Samples photons through interior points and checks that the photon is not
// contained in the domain up to at most one point. Heuristic evidence only.
ProbeReport r_proper_probe(const Domain& dom, int sample_count, SplitMix64 rng,
                           std::uint64_t seed_label = 0);

// Counts connected components of photon traces on a 1024-point scan and
// reports the maximum seen.
ProbeReport photon_convexity_probe(const Domain& dom, int sample_count, SplitMix64 rng,
                                   std::uint64_t seed_label = 0);

}  // namespace flagmetric
