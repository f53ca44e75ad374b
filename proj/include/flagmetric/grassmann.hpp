#pragma once

#include <optional>
#include <vector>

#include "flagmetric/numerics.hpp"

namespace flagmetric {

// Ambient data for Gr_p(R^n), n = p + q. Dual points are q-planes.
struct GrassmannContext {
  int p = 1;
  int q = 1;
  Tolerance tol;

  int n() const { return p + q; }
  void validate() const {
    if (p < 1 || q < 1) fail("InvalidContext", "need p >= 1 and q >= 1");
    tol.validate();
  }
};

// Point of R u {inf}. Infinity is a tag, never a float sentinel, so the
// cross-ratio limits come out exact.
struct ExtReal {
  bool is_inf = false;
  double value = 0.0;

  static ExtReal of(double t) { return {false, t}; }
  static ExtReal inf() { return {true, 0.0}; }
  bool operator==(const ExtReal& o) const {
    return is_inf ? o.is_inf : (!o.is_inf && value == o.value);
  }
  // homogeneous representative [a : b], t = b / a
  double h0() const { return is_inf ? 0.0 : 1.0; }
  double h1() const { return is_inf ? 1.0 : value; }
};

// Classical cross ratio with the normalization (0 : 1 : t : inf) = t.
// Affine form ((c-a)(d-b)) / ((b-a)(d-c)), with the standard limits at inf.
ExtReal cross_ratio_proj(const ExtReal& a, const ExtReal& b, const ExtReal& c,
                         const ExtReal& d);

// A k-dimensional linear subspace of R^n, stored as an orthonormal basis in
// canonical form: column-pivoted orthonormalization, global sign fixed by the
// first robustly nonzero Pluecker coordinate being positive. Two Plane values
// are equal iff their spans coincide (rank test on stacked bases).
class Plane {
 public:
  Plane() = default;

  // Orthonormalizes the column span; requires full column rank at tolerance.
  static Plane from_span(const Eigen::MatrixXd& span, const Tolerance& tol);

  // Accepts an already orthonormal basis (validated), then canonicalizes sign.
  static Plane from_orthonormal(const Eigen::MatrixXd& basis, const Tolerance& tol);

  int n() const { return static_cast<int>(basis_.rows()); }
  int k() const { return static_cast<int>(basis_.cols()); }
  const Eigen::MatrixXd& basis() const { return basis_; }

 private:
  Eigen::MatrixXd basis_;
};

bool spans_equal(const Plane& a, const Plane& b, const Tolerance& tol);

// dim(x cap y) = 2p - rank[basis(x) | basis(y)]
int intersect_dim(const GrassmannContext& ctx, const Plane& x, const Plane& y);

// p - dim(x cap y): 0 iff equal, 1 iff the two planes share a photon
int arithmetic_distance(const GrassmannContext& ctx, const Plane& x, const Plane& y);

// det[basis(x) | basis(xi)] != 0 at tolerance (rank n)
bool is_transverse(const GrassmannContext& ctx, const Plane& x, const Plane& xi);

// The pencil {V : v0 subset V subset v1}, dim v0 = p-1, dim v1 = p+1.
struct Photon {
  Plane v0;
  Plane v1;
};

// Projective parametrization of a photon: an orthonormal frame (u, w) of the
// complement of v0 inside v1. Parameter t maps to span(v0, u + t w); the
// circle coordinate theta (period pi) maps to span(v0, cos(theta) u + sin(theta) w),
// so t = tan(theta).
struct ProjParam {
  Photon photon;
  Eigen::VectorXd u;
  Eigen::VectorXd w;
  Tolerance tol;

  Plane at(const ExtReal& t) const;
  Plane at_angle(double theta) const;
  // Parameter of a plane lying on the photon.
  ExtReal param_of(const Plane& x) const;
  double angle_of(const Plane& x) const;  // in [0, pi)
};

// Unique photon through two planes at arithmetic distance 1: v0 = x cap y,
// v1 = x + y. nullopt when the distance exceeds 1.
std::optional<Photon> photon_through(const GrassmannContext& ctx, const Plane& x,
                                     const Plane& y);

// Canonical parametrization frame for a photon; x (when given) sits at t = 0.
ProjParam parametrize(const GrassmannContext& ctx, const Photon& ph);
ProjParam parametrize_through(const GrassmannContext& ctx, const Plane& x, const Plane& y);

// Parameter at which the photon meets Z_xi (the non-transversality locus of a
// dual plane). det[plane(t) | xi] is affine in t, so the hit is unique unless
// the photon lies inside Z_xi entirely (nullopt).
std::optional<ExtReal> photon_dual_parameter(const GrassmannContext& ctx,
                                             const ProjParam& pp, const Plane& xi);

// Vector of all p x p minors in lexicographic row-subset order, unit norm,
// sign fixed by the first robustly nonzero coordinate.
struct PluckerVector {
  Eigen::VectorXd coords;
};

PluckerVector plucker(const GrassmannContext& ctx, const Plane& x);

// Third singular value of the stacked Pluecker images of the photon at
// t in {0, 1, inf}; near zero certifies the image is a projective line.
double photon_collinearity_residual(const GrassmannContext& ctx, const Photon& ph);

// (det[x|xi] det[y|eta]) / (det[y|xi] det[x|eta]) over orthonormal
// representatives. Basis-independent given the canonical sign convention.
double cross_ratio_flag(const GrassmannContext& ctx, const Plane& xi, const Plane& x,
                        const Plane& y, const Plane& eta);

// n x n determinant of the stacked orthonormal bases [x | xi].
double flag_pairing(const GrassmannContext& ctx, const Plane& x, const Plane& xi);

// Orthonormal basis of the orthogonal complement within R^n.
Eigen::MatrixXd orthogonal_complement(const Eigen::MatrixXd& basis, const Tolerance& tol);

// Haar-ish random k-plane (QR of a Gaussian matrix).
Plane random_plane(const GrassmannContext& ctx, int k, SplitMix64& rng);

}  // namespace flagmetric
