#pragma once

#include "flagmetric/domains.hpp"

namespace flagmetric {

// Scaling factor between the flag cross ratio and the projective cross ratio
// along photons: the highest weight of the minor embedding evaluates to 1 on
// its own coroot.
inline constexpr double kCrossRatioWeight = 1.0;

// Piecewise-photon path. Consecutive points are photon-related inside the
// domain; segment_lengths[i] is the Hilbert length of (points[i], points[i+1]).
struct Chain {
  std::vector<Plane> points;
  std::vector<double> segment_lengths;

  double total() const {
    double s = 0.0;
    for (double v : segment_lengths) s += v;
    return s;
  }
};

// Cartan data of an ordered pair in a symmetric domain: graph-matrix singular
// values sigma_i (nonincreasing, < 1) and flat coordinates
// t_i = log((1+sigma_i)/(1-sigma_i)), so sigma_i = tanh(t_i/2).
struct RelativePosition {
  Eigen::VectorXd sigmas;
  Eigen::VectorXd flat_coords;
  // frame diagonalizing the pair: columns are a form-orthonormal basis
  // adapted to x, plus the SVD rotations of the graph matrix of y
  Eigen::MatrixXd frame;  // n x n, [X' | Y'] with X'^T F X' = I, Y'^T F Y' = -I
  Eigen::MatrixXd u;      // q x q
  Eigen::MatrixXd v;      // p x p
};

// Form-preserving g (g^T F g = F) mapping the base point (span of the form's
// positive eigenvectors) to x.
Eigen::MatrixXd normalize_to_base(const SymmetricDomain& dom, const Plane& x);

RelativePosition relative_position(const SymmetricDomain& dom, const Plane& x,
                                   const Plane& y);

// Sum of flat coordinates: the exact chain-infimum distance on the domain.
double kobayashi_closed_form(const SymmetricDomain& dom, const Plane& x, const Plane& y);

// Explicit geodesic chain with at most min(p, q) segments whose total length
// equals the closed form; the i-th point is the graph of
// diag(sigma_1, ..., sigma_i, 0, ..., 0) in the diagonalizing frame.
Chain geodesic_r_chain(const SymmetricDomain& dom, const Plane& x, const Plane& y);

struct DualPair {
  Plane xi;
  Plane eta;
};

struct CaratheodoryResult {
  double value = 0.0;
  DualPair witness;
};

// max over dual pairs of |log |cross_ratio_flag(xi, x, y, eta)||; a certified
// lower bound for the chain metric. With optimize set, a derivative-free
// refinement over local charts of the dual pair runs from the discrete max.
CaratheodoryResult caratheodory_lower(const Domain& dom, const Plane& x, const Plane& y,
                                      const std::vector<Plane>& duals, bool optimize,
                                      SplitMix64 rng);

struct ChainSearchConfig {
  int max_segments = 4;
  int restarts = 3;
  int budget = 400;  // evaluation budget for intermediate-point refinement
};

struct UpperBoundResult {
  double value = 0.0;
  Chain chain;
};

// Best chain found with at most max_segments segments: the geodesic chain on
// symmetric domains, sampled multi-leg chains elsewhere, plus local
// refinement of intermediate points. Always an upper bound.
UpperBoundResult kobayashi_upper(const Domain& dom, const Plane& x, const Plane& y,
                                 const ChainSearchConfig& cfg, SplitMix64 rng);

struct MetricReport {
  double lower = 0.0;
  double upper = 0.0;
  std::optional<double> exact;
  Chain chain_witness;
  DualPair dual_witness;
  std::uint64_t seed = 0;
};

struct SandwichConfig {
  ChainSearchConfig chain;
  int dual_samples = 1000;
  bool optimize = true;
};

// Assembles lower bound, upper bound and (on symmetric domains) the closed
// form, with domain-appropriate dual sampling.
MetricReport sandwich(const Domain& dom, const Plane& x, const Plane& y,
                      const SandwichConfig& cfg, SplitMix64 rng,
                      std::uint64_t seed_label = 0);

// Negative-definite q-planes built by form-Gram-Schmidt of random vectors
// projected into the negative cone.
std::vector<Plane> sample_negative_duals(const SymmetricDomain& dom, int count,
                                         SplitMix64& rng);

// Domain-appropriate dual family: sampled negative q-planes on symmetric
// domains, the defining duals on complement domains.
std::vector<Plane> default_duals(const Domain& dom, int dual_samples, SplitMix64& rng);

// Boundary duals supporting the flat through x and y; the flag cross ratio at
// this pair attains the chain metric. Used to seed the dual optimization.
DualPair supporting_dual_pair(const SymmetricDomain& dom, const Plane& x, const Plane& y);

struct HyperbolicityRow {
  double scale = 0.0;
  double delta = 0.0;               // max sampled four-point defect
  std::optional<double> flat_delta; // explicit flat quadruple (symmetric, rank >= 2)
  double gap = 0.0;                 // max upper-lower gap of distances used
  std::uint64_t seed = 0;
};

struct HyperbolicityConfig {
  std::vector<double> scales{2.0, 4.0, 8.0, 16.0};
  int quadruples_per_scale = 200;
  SandwichConfig sandwich;  // used when no closed form is available
};

// Four-point hyperbolicity defect per scale. Distances are exact on symmetric
// domains; otherwise the sandwich midpoint is used and the gap recorded.
std::vector<HyperbolicityRow> hyperbolicity_probe(const Domain& dom,
                                                  const HyperbolicityConfig& cfg,
                                                  SplitMix64 rng,
                                                  std::uint64_t seed_label = 0);

// (largest pair sum - middle pair sum) / 2 of the three pairings
double four_point_delta(double d12, double d13, double d14, double d23, double d24,
                        double d34);

// Haar-distributed orthogonal matrix (QR with sign fix).
Eigen::MatrixXd random_orthogonal(int dim, SplitMix64& rng);

}  // namespace flagmetric
