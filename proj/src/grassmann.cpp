#include "flagmetric/grassmann.hpp"

#include <cmath>

namespace flagmetric {

namespace {

// Orthonormal basis of the column span (SVD-based); checks full column rank.
Eigen::MatrixXd orthonormal_range(const Eigen::MatrixXd& m, const Tolerance& tol,
                                  int expected_rank) {
  if (expected_rank == 0) return Eigen::MatrixXd(m.rows(), 0);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  int r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > tol.rank_rel * sv(0)) ++r;
  if (r < expected_rank)
    fail("RankDeficient", "span has rank " + std::to_string(r) + ", expected " +
                              std::to_string(expected_rank));
  return svd.matrixU().leftCols(expected_rank);
}

void lex_first_subset(std::vector<int>& idx, int k) {
  idx.resize(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
}

bool lex_next_subset(std::vector<int>& idx, int n) {
  const int k = static_cast<int>(idx.size());
  for (int i = k - 1; i >= 0; --i) {
    if (idx[i] < n - k + i) {
      ++idx[i];
      for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
      return true;
    }
  }
  return false;
}

Eigen::Index binom(int n, int k) {
  if (k < 0 || k > n) return 0;
  Eigen::Index r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

Eigen::VectorXd plucker_raw(const Eigen::MatrixXd& basis) {
  const int n = static_cast<int>(basis.rows());
  const int k = static_cast<int>(basis.cols());
  Eigen::VectorXd coords(binom(n, k));
  if (k == 0) {
    coords(0) = 1.0;
    return coords;
  }
  std::vector<int> rows;
  lex_first_subset(rows, k);
  Eigen::MatrixXd minor(k, k);
  Eigen::Index pos = 0;
  do {
    for (int i = 0; i < k; ++i) minor.row(i) = basis.row(rows[i]);
    coords(pos++) = minor.determinant();
  } while (lex_next_subset(rows, n));
  return coords;
}

// +1/-1 so that the first coordinate with |c_i| >= 0.5 max|c| becomes positive.
double canonical_sign(const Eigen::VectorXd& coords) {
  const double peak = coords.cwiseAbs().maxCoeff();
  if (peak == 0.0) return 1.0;
  for (Eigen::Index i = 0; i < coords.size(); ++i)
    if (std::abs(coords(i)) >= 0.5 * peak) return coords(i) >= 0.0 ? 1.0 : -1.0;
  return 1.0;
}

Eigen::MatrixXd canonicalize(Eigen::MatrixXd basis) {
  if (basis.cols() > 0 && canonical_sign(plucker_raw(basis)) < 0.0)
    basis.col(0) = -basis.col(0);
  return basis;
}

}  // namespace

ExtReal cross_ratio_proj(const ExtReal& a, const ExtReal& b, const ExtReal& c,
                         const ExtReal& d) {
  const ExtReal pts[4] = {a, b, c, d};
  int distinct = 0;
  for (int i = 0; i < 4; ++i) {
    bool seen = false;
    for (int j = 0; j < i; ++j) seen = seen || (pts[i] == pts[j]);
    if (!seen) ++distinct;
  }
  if (distinct < 3)
    fail("DegenerateQuadruple", "cross_ratio_proj: fewer than 3 distinct points");
  auto det2 = [](const ExtReal& x, const ExtReal& y) {
    return x.h0() * y.h1() - x.h1() * y.h0();
  };
  const double num = det2(a, c) * det2(b, d);
  const double den = det2(a, b) * det2(c, d);
  if (den == 0.0) {
    if (num == 0.0)
      fail("DegenerateQuadruple", "cross_ratio_proj: indeterminate 0/0");
    return ExtReal::inf();
  }
  return ExtReal::of(num / den);
}

Plane Plane::from_span(const Eigen::MatrixXd& span, const Tolerance& tol) {
  Plane out;
  out.basis_ = canonicalize(orthonormal_range(span, tol, static_cast<int>(span.cols())));
  return out;
}

Plane Plane::from_orthonormal(const Eigen::MatrixXd& basis, const Tolerance& tol) {
  const int k = static_cast<int>(basis.cols());
  if (k > 0) {
    const double err =
        (basis.transpose() * basis - Eigen::MatrixXd::Identity(k, k)).cwiseAbs().maxCoeff();
    if (err > 1e3 * tol.geom_abs) return from_span(basis, tol);
  }
  Plane out;
  out.basis_ = canonicalize(basis);
  return out;
}

bool spans_equal(const Plane& a, const Plane& b, const Tolerance& tol) {
  if (a.n() != b.n() || a.k() != b.k()) return false;
  if (a.k() == 0) return true;
  Eigen::MatrixXd stacked(a.n(), a.k() + b.k());
  stacked << a.basis(), b.basis();
  return rank_with_tol(stacked, tol) == a.k();
}

namespace {
void require_dim(const GrassmannContext& ctx, const Plane& x, int k, const char* what) {
  if (x.n() != ctx.n() || x.k() != k)
    fail("DimensionMismatch", std::string(what) + ": expected a " + std::to_string(k) +
                                  "-plane in R^" + std::to_string(ctx.n()));
}
}  // namespace

int intersect_dim(const GrassmannContext& ctx, const Plane& x, const Plane& y) {
  require_dim(ctx, x, ctx.p, "intersect_dim");
  require_dim(ctx, y, ctx.p, "intersect_dim");
  Eigen::MatrixXd stacked(ctx.n(), 2 * ctx.p);
  stacked << x.basis(), y.basis();
  return 2 * ctx.p - rank_with_tol(stacked, ctx.tol);
}

int arithmetic_distance(const GrassmannContext& ctx, const Plane& x, const Plane& y) {
  return ctx.p - intersect_dim(ctx, x, y);
}

bool is_transverse(const GrassmannContext& ctx, const Plane& x, const Plane& xi) {
  require_dim(ctx, x, ctx.p, "is_transverse");
  require_dim(ctx, xi, ctx.q, "is_transverse");
  Eigen::MatrixXd stacked(ctx.n(), ctx.n());
  stacked << x.basis(), xi.basis();
  return rank_with_tol(stacked, ctx.tol) == ctx.n();
}

std::optional<Photon> photon_through(const GrassmannContext& ctx, const Plane& x,
                                     const Plane& y) {
  require_dim(ctx, x, ctx.p, "photon_through");
  require_dim(ctx, y, ctx.p, "photon_through");
  if (spans_equal(x, y, ctx.tol))
    fail("IdenticalPlanes", "photon_through: x and y span the same plane");
  const int p = ctx.p;
  Eigen::MatrixXd m(ctx.n(), 2 * p);
  m << x.basis(), -y.basis();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > ctx.tol.rank_rel * sv(0)) ++rank;
  if (rank != p + 1) return std::nullopt;  // arithmetic distance >= 2

  // kernel vectors (alpha; beta) with X alpha = Y beta give the intersection
  Eigen::MatrixXd kernel = svd.matrixV().rightCols(2 * p - rank);
  Photon ph;
  ph.v0 = Plane::from_span(x.basis() * kernel.topRows(p), ctx.tol);
  ph.v1 = Plane::from_span(svd.matrixU().leftCols(p + 1), ctx.tol);
  return ph;
}

Plane ProjParam::at(const ExtReal& t) const {
  return at_angle(std::atan2(t.h1(), t.h0()));
}

Plane ProjParam::at_angle(double theta) const {
  const Eigen::VectorXd dir = std::cos(theta) * u + std::sin(theta) * w;
  Eigen::MatrixXd basis(u.size(), photon.v0.k() + 1);
  basis << photon.v0.basis(), dir;
  return Plane::from_orthonormal(basis, tol);
}

double ProjParam::angle_of(const Plane& x) const {
  // direction of x beyond v0, read off in the (u, w) frame
  const Eigen::MatrixXd& v0b = photon.v0.basis();
  Eigen::MatrixXd extra = x.basis() - v0b * (v0b.transpose() * x.basis());
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(extra, Eigen::ComputeThinU);
  const Eigen::VectorXd dir = svd.matrixU().col(0);
  const double a = u.dot(dir);
  const double b = w.dot(dir);
  double theta = std::atan2(b, a);
  if (theta < 0.0) theta += M_PI;
  if (theta >= M_PI) theta -= M_PI;
  return theta;
}

ExtReal ProjParam::param_of(const Plane& x) const {
  const double theta = angle_of(x);
  if (std::abs(std::cos(theta)) < 1e-14) return ExtReal::inf();
  return ExtReal::of(std::tan(theta));
}

ProjParam parametrize(const GrassmannContext& ctx, const Photon& ph) {
  const Eigen::MatrixXd& v0b = ph.v0.basis();
  Eigen::MatrixXd c = ph.v1.basis() - v0b * (v0b.transpose() * ph.v1.basis());
  Eigen::MatrixXd frame = orthonormal_range(c, ctx.tol, 2);
  return ProjParam{ph, frame.col(0), frame.col(1), ctx.tol};
}

ProjParam parametrize_through(const GrassmannContext& ctx, const Plane& x, const Plane& y) {
  auto ph = photon_through(ctx, x, y);
  if (!ph) fail("NotPhotonRelated", "parametrize_through: planes are not on one photon");
  const Eigen::MatrixXd& v0b = ph->v0.basis();
  auto extra_dir = [&](const Plane& z) {
    Eigen::MatrixXd e = z.basis() - v0b * (v0b.transpose() * z.basis());
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(e, Eigen::ComputeThinU);
    return Eigen::VectorXd(svd.matrixU().col(0));
  };
  Eigen::VectorXd u = extra_dir(x);
  Eigen::VectorXd wy = extra_dir(y);
  Eigen::VectorXd w = wy - u.dot(wy) * u;
  const double norm = w.norm();
  if (norm < ctx.tol.geom_abs)
    fail("IdenticalPlanes", "parametrize_through: degenerate frame");
  w /= norm;
  return ProjParam{*ph, u, w, ctx.tol};
}

std::optional<ExtReal> photon_dual_parameter(const GrassmannContext& ctx,
                                             const ProjParam& pp, const Plane& xi) {
  require_dim(ctx, xi, ctx.q, "photon_dual_parameter");
  const int n = ctx.n();
  Eigen::MatrixXd m(n, n);
  m.leftCols(ctx.p - 1) = pp.photon.v0.basis();
  m.rightCols(ctx.q) = xi.basis();
  m.col(ctx.p - 1) = pp.u;
  const double d0 = m.determinant();
  m.col(ctx.p - 1) = pp.w;
  const double d1 = m.determinant();
  // det along the photon is d0 + t d1
  if (std::abs(d0) <= ctx.tol.geom_abs && std::abs(d1) <= ctx.tol.geom_abs)
    return std::nullopt;  // photon contained in Z_xi
  if (std::abs(d1) <= ctx.tol.geom_abs) return ExtReal::inf();
  return ExtReal::of(-d0 / d1);
}

PluckerVector plucker(const GrassmannContext& ctx, const Plane& x) {
  require_dim(ctx, x, ctx.p, "plucker");
  Eigen::VectorXd coords = plucker_raw(x.basis());
  const double norm = coords.norm();
  if (norm > 0.0) coords /= norm;
  coords *= canonical_sign(coords);
  return PluckerVector{coords};
}

double photon_collinearity_residual(const GrassmannContext& ctx, const Photon& ph) {
  ProjParam pp = parametrize(ctx, ph);
  Eigen::MatrixXd rows(3, binom(ctx.n(), ctx.p));
  rows.row(0) = plucker(ctx, pp.at(ExtReal::of(0.0))).coords;
  rows.row(1) = plucker(ctx, pp.at(ExtReal::of(1.0))).coords;
  rows.row(2) = plucker(ctx, pp.at(ExtReal::inf())).coords;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(rows);
  return svd.singularValues()(2);
}

double flag_pairing(const GrassmannContext& ctx, const Plane& x, const Plane& xi) {
  require_dim(ctx, x, ctx.p, "flag_pairing");
  require_dim(ctx, xi, ctx.q, "flag_pairing");
  Eigen::MatrixXd m(ctx.n(), ctx.n());
  m << x.basis(), xi.basis();
  return m.determinant();
}

double cross_ratio_flag(const GrassmannContext& ctx, const Plane& xi, const Plane& x,
                        const Plane& y, const Plane& eta) {
  struct Entry {
    const char* name;
    double det;
  };
  const Entry dets[4] = {{"x|xi", flag_pairing(ctx, x, xi)},
                         {"y|xi", flag_pairing(ctx, y, xi)},
                         {"x|eta", flag_pairing(ctx, x, eta)},
                         {"y|eta", flag_pairing(ctx, y, eta)}};
  for (const auto& e : dets)
    if (std::abs(e.det) <= ctx.tol.geom_abs)
      fail("NonTransverseConfiguration",
           std::string("cross_ratio_flag: pair ") + e.name + " is not transverse");
  return (dets[0].det * dets[3].det) / (dets[1].det * dets[2].det);
}

Eigen::MatrixXd orthogonal_complement(const Eigen::MatrixXd& basis, const Tolerance& tol) {
  const int n = static_cast<int>(basis.rows());
  const int k = static_cast<int>(basis.cols());
  if (k == 0) return Eigen::MatrixXd::Identity(n, n);
  (void)tol;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(basis, Eigen::ComputeFullU);
  return svd.matrixU().rightCols(n - k);
}

Plane random_plane(const GrassmannContext& ctx, int k, SplitMix64& rng) {
  Eigen::MatrixXd m(ctx.n(), k);
  for (int i = 0; i < ctx.n(); ++i)
    for (int j = 0; j < k; ++j) m(i, j) = rng.normal();
  return Plane::from_span(m, ctx.tol);
}

}  // namespace flagmetric
