#include "flagmetric/domains.hpp"

#include <algorithm>
#include <cmath>

namespace flagmetric {

namespace {

constexpr int kGridSize = 1024;
constexpr double kGridStep = M_PI / kGridSize;

double op_norm(const Eigen::MatrixXd& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  return svd.singularValues()(0);
}

}  // namespace

SymmetricDomain::SymmetricDomain(GrassmannContext ctx, Eigen::MatrixXd form)
    : Domain(std::move(ctx)), form_(std::move(form)) {
  const int n = this->ctx().n();
  if (form_.rows() != n || form_.cols() != n)
    fail("DimensionMismatch", "SymmetricDomain: form must be n x n");
  if ((form_ - form_.transpose()).cwiseAbs().maxCoeff() > 1e-9 * (1.0 + form_.cwiseAbs().maxCoeff()))
    fail("InvalidForm", "SymmetricDomain: form must be symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(form_);
  const auto& vals = eig.eigenvalues();
  const double scale = vals.cwiseAbs().maxCoeff();
  int pos = 0, neg = 0;
  for (int i = 0; i < n; ++i) {
    if (vals(i) > 1e-12 * scale)
      ++pos;
    else if (vals(i) < -1e-12 * scale)
      ++neg;
  }
  if (pos != this->ctx().p || neg != this->ctx().q)
    fail("InvalidForm", "SymmetricDomain: signature is (" + std::to_string(pos) + "," +
                            std::to_string(neg) + "), expected (" +
                            std::to_string(this->ctx().p) + "," + std::to_string(this->ctx().q) +
                            ")");
  // eigenvalues come sorted ascending: negatives first
  neg_frame_.resize(n, this->ctx().q);
  pos_frame_.resize(n, this->ctx().p);
  for (int i = 0; i < neg; ++i)
    neg_frame_.col(i) = eig.eigenvectors().col(i) / std::sqrt(-vals(i));
  for (int i = 0; i < pos; ++i)
    pos_frame_.col(i) = eig.eigenvectors().col(neg + i) / std::sqrt(vals(neg + i));
  base_ = Plane::from_span(pos_frame_, this->ctx().tol);
}

Plane SymmetricDomain::graph_plane(const Eigen::MatrixXd& b) const {
  if (b.rows() != ctx().q || b.cols() != ctx().p)
    fail("DimensionMismatch", "graph_plane: expected a q x p matrix");
  return Plane::from_span(pos_frame_ + neg_frame_ * b, ctx().tol);
}

double SymmetricDomain::margin(const Plane& x) const {
  if (x.n() != ctx().n() || x.k() != ctx().p)
    fail("DimensionMismatch", "margin: expected a p-plane");
  Eigen::MatrixXd gram = x.basis().transpose() * form_ * x.basis();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
  return eig.eigenvalues()(0);
}

bool SymmetricDomain::dual_contains(const Plane& xi) const {
  return *dual_margin(xi) > -ctx().tol.geom_abs;
}

std::optional<double> SymmetricDomain::dual_margin(const Plane& xi) const {
  if (xi.n() != ctx().n() || xi.k() != ctx().q)
    fail("DimensionMismatch", "dual_margin: expected a q-plane");
  Eigen::MatrixXd gram = xi.basis().transpose() * form_ * xi.basis();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
  // negative definite at tolerance; semidefinite boundary duals still satisfy
  // Z_xi cap domain = empty, so they sit at margin ~ 0
  return -eig.eigenvalues()(ctx().q - 1);
}

Plane SymmetricDomain::sample_interior(SplitMix64& rng) const {
  Eigen::MatrixXd b(ctx().q, ctx().p);
  for (int i = 0; i < b.rows(); ++i)
    for (int j = 0; j < b.cols(); ++j) b(i, j) = rng.normal();
  const double norm = op_norm(b);
  const double target = rng.uniform(0.05, 0.9);
  if (norm > 0.0) b *= target / norm;
  return graph_plane(b);
}

HyperplaneComplementDomain::HyperplaneComplementDomain(GrassmannContext ctx,
                                                       std::vector<Plane> duals,
                                                       Plane reference)
    : Domain(std::move(ctx)), duals_(std::move(duals)), reference_(std::move(reference)) {
  for (const auto& xi : duals_)
    if (xi.n() != this->ctx().n() || xi.k() != this->ctx().q)
      fail("DimensionMismatch", "HyperplaneComplementDomain: duals must be q-planes");
  if (reference_.n() != this->ctx().n() || reference_.k() != this->ctx().p)
    fail("DimensionMismatch", "HyperplaneComplementDomain: reference must be a p-plane");
  signs_.reserve(duals_.size());
  for (const auto& xi : duals_) {
    const double d = flag_pairing(this->ctx(), reference_, xi);
    if (std::abs(d) <= this->ctx().tol.geom_abs)
      fail("NonTransverseConfiguration",
           "HyperplaneComplementDomain: reference point lies on a dual hypersurface");
    signs_.push_back(d > 0.0 ? 1 : -1);
  }
}

double HyperplaneComplementDomain::margin(const Plane& x) const {
  if (x.n() != ctx().n() || x.k() != ctx().p)
    fail("DimensionMismatch", "margin: expected a p-plane");
  if (duals_.empty()) return 1.0;  // whole Grassmannian
  // sign vector matches modulo a global flip; at most one orientation can win
  double direct = std::numeric_limits<double>::infinity();
  double flipped = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < duals_.size(); ++i) {
    const double d = signs_[i] * flag_pairing(ctx(), x, duals_[i]);
    direct = std::min(direct, d);
    flipped = std::min(flipped, -d);
  }
  return std::max(direct, flipped);
}

bool HyperplaneComplementDomain::dual_contains(const Plane& xi) const {
  if (xi.n() != ctx().n() || xi.k() != ctx().q)
    fail("DimensionMismatch", "dual_contains: expected a q-plane");
  for (const auto& d : duals_)
    if (spans_equal(d, xi, ctx().tol)) return true;
  // best-effort: 500 seeded membership samples, all must be transverse to xi
  SplitMix64 rng(0x5eedu);
  for (int i = 0; i < 500; ++i) {
    Plane x = sample_interior(rng);
    if (std::abs(flag_pairing(ctx(), x, xi)) <= ctx().tol.geom_abs) return false;
  }
  return true;
}

Plane HyperplaneComplementDomain::sample_interior(SplitMix64& rng) const {
  // random step in the reference chart, halved until membership holds
  const Eigen::MatrixXd comp = orthogonal_complement(reference_.basis(), ctx().tol);
  Eigen::MatrixXd a(comp.cols(), ctx().p);
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) a(i, j) = rng.normal();
  double scale = rng.uniform(0.0, 2.0);
  for (int tries = 0; tries < 60; ++tries) {
    Plane cand = Plane::from_span(reference_.basis() + comp * (scale * a), ctx().tol);
    if (contains(cand)) return cand;
    scale *= 0.5;
  }
  return reference_;
}

bool PhotonInterval::contains_angle(double theta) const {
  if (whole_line) return true;
  double t = std::fmod(theta - theta_lo, M_PI);
  if (t < 0.0) t += M_PI;
  return t > 0.0 && theta_lo + t < theta_hi;
}

namespace {

ExtReal angle_to_ext(double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  if (std::abs(c) < 1e-14) return ExtReal::inf();
  return ExtReal::of(s / c);
}

// Two bisection passes of 50 iterations on the signed margin; inside/outside
// bracket endpoints, returns the crossing angle.
double refine_endpoint(const Domain& dom, const ProjParam& pp, double theta_in,
                       double theta_out) {
  auto f = [&](double th) { return dom.margin(pp.at_angle(th)); };
  const double fin = f(theta_in), fout = f(theta_out);
  if (fin <= 0.0) return theta_in;   // already at the transition
  if (fout > 0.0) return theta_out;  // margin never crosses zero at resolution
  double a = theta_in, b = theta_out;
  for (int pass = 0; pass < 2; ++pass) {
    for (int it = 0; it < 50; ++it) {
      const double mid = 0.5 * (a + b);
      if (mid == a || mid == b) break;
      if (f(mid) > 0.0)
        a = mid;
      else
        b = mid;
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

std::optional<PhotonInterval> photon_intersection(const Domain& dom, const ProjParam& pp,
                                                  std::optional<double> seed_angle) {
  const double thr = dom.inside_threshold();
  auto inside = [&](double th) { return dom.margin(pp.at_angle(th)) > thr; };

  double anchor;
  if (seed_angle) {
    // the component around the seed; no full scan needed
    if (!inside(*seed_angle)) return std::nullopt;
    anchor = *seed_angle;
  } else {
    int first = -1;
    for (int k = 0; k < kGridSize; ++k) {
      if (inside(k * kGridStep)) {
        first = k;
        break;
      }
    }
    if (first < 0) return std::nullopt;
    anchor = first * kGridStep;
  }

  PhotonInterval out;
  out.pp = pp;

  // expand from the anchor one grid step at a time, then refine
  double left_in = anchor, right_in = anchor;
  bool crossed = false;
  double left_out = anchor, right_out = anchor;
  for (int k = 1; k <= kGridSize; ++k) {
    const double th = anchor - k * kGridStep;
    if (!inside(th)) {
      left_out = th;
      crossed = true;
      break;
    }
    left_in = th;
  }
  if (!crossed) {  // a full period inside: no boundary crossing
    out.whole_line = true;
    out.theta_lo = anchor - M_PI;
    out.theta_hi = anchor;
    return out;
  }
  for (int k = 1; k <= kGridSize; ++k) {
    const double th = anchor + k * kGridStep;
    if (!inside(th)) {
      right_out = th;
      break;
    }
    right_in = th;
  }
  out.theta_lo = refine_endpoint(dom, pp, left_in, left_out);
  out.theta_hi = refine_endpoint(dom, pp, right_in, right_out);
  out.lo = angle_to_ext(out.theta_lo);
  out.hi = angle_to_ext(out.theta_hi);
  return out;
}

double hilbert_length(const PhotonInterval& interval, double theta_x, double theta_y) {
  if (interval.whole_line) return 0.0;
  if (theta_x == theta_y) return 0.0;
  auto det2 = [](double tha, double thb) {
    return std::cos(tha) * std::sin(thb) - std::sin(tha) * std::cos(thb);
  };
  const double num = det2(interval.theta_lo, theta_y) * det2(theta_x, interval.theta_hi);
  const double den = det2(interval.theta_lo, theta_x) * det2(theta_y, interval.theta_hi);
  if (den == 0.0 || num == 0.0 || !std::isfinite(num / den))
    fail("DegenerateQuadruple", "hilbert_length: endpoint collision");
  return std::abs(std::log(std::abs(num / den)));
}

double segment_hilbert_length(const Domain& dom, const Plane& x, const Plane& y) {
  if (!dom.contains(x) || !dom.contains(y))
    fail("NotInDomain", "segment_hilbert_length: endpoints must lie in the domain");
  if (spans_equal(x, y, dom.ctx().tol)) return 0.0;
  const int d = arithmetic_distance(dom.ctx(), x, y);
  if (d > 1) fail("NotPhotonRelated", "segment_hilbert_length: arithmetic distance exceeds 1");
  ProjParam pp = parametrize_through(dom.ctx(), x, y);
  const double theta_x = pp.angle_of(x);
  const double theta_y = pp.angle_of(y);
  auto interval = photon_intersection(dom, pp, theta_x);
  if (!interval)
    fail("DifferentComponents", "segment_hilbert_length: no component around x");
  if (interval->whole_line) return 0.0;
  if (!interval->contains_angle(theta_y))
    fail("DifferentComponents", "segment_hilbert_length: y lies in a different component");
  // place both parameters on the interval's unwrapped branch
  auto unwrap = [&](double th) {
    double t = std::fmod(th - interval->theta_lo, M_PI);
    if (t < 0.0) t += M_PI;
    return interval->theta_lo + t;
  };
  return hilbert_length(*interval, unwrap(theta_x), unwrap(theta_y));
}

ProjParam random_photon_at(const GrassmannContext& ctx, const Plane& x, SplitMix64& rng) {
  // direction leaving x
  Eigen::VectorXd coeff(ctx.p);
  for (int i = 0; i < ctx.p; ++i) coeff(i) = rng.normal();
  coeff.normalize();
  Eigen::VectorXd a = x.basis() * coeff;
  // v0 = orthogonal complement of a inside x
  Plane v0;
  if (ctx.p == 1) {
    v0 = Plane::from_span(Eigen::MatrixXd(ctx.n(), 0), ctx.tol);
  } else {
    Eigen::MatrixXd inside = x.basis() - a * (a.transpose() * x.basis());
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(inside, Eigen::ComputeThinU);
    v0 = Plane::from_span(svd.matrixU().leftCols(ctx.p - 1), ctx.tol);
  }
  // new direction outside x
  Eigen::VectorXd w(ctx.n());
  for (int tries = 0;; ++tries) {
    for (int i = 0; i < ctx.n(); ++i) w(i) = rng.normal();
    w -= x.basis() * (x.basis().transpose() * w);
    if (w.norm() > 1e-8 || tries > 32) break;
  }
  w.normalize();
  Eigen::MatrixXd v1b(ctx.n(), ctx.p + 1);
  v1b << x.basis(), w;
  Photon ph{v0, Plane::from_span(v1b, ctx.tol)};
  return ProjParam{ph, a, w, ctx.tol};
}

namespace {

int count_circular_components(const std::vector<bool>& flag) {
  const int n = static_cast<int>(flag.size());
  int runs = 0;
  for (int k = 0; k < n; ++k)
    if (flag[k] && !flag[(k + n - 1) % n]) ++runs;
  return runs;
}

}  // namespace

ProbeReport r_proper_probe(const Domain& dom, int sample_count, SplitMix64 rng,
                           std::uint64_t seed_label) {
  ProbeReport rep;
  rep.probe = "r_proper";
  rep.seed = seed_label;
  rep.samples = sample_count;
  rep.heuristic = true;
  const double thr = dom.inside_threshold();
  for (int s = 0; s < sample_count; ++s) {
    Plane x = dom.sample_interior(rng);
    if (!dom.contains(x)) {
      ++rep.skipped;
      continue;
    }
    ProjParam pp = random_photon_at(dom.ctx(), x, rng);
    int outside = 0;
    for (int k = 0; k < kGridSize && outside < 2; ++k)
      if (!(dom.margin(pp.at_angle(k * kGridStep)) > thr)) ++outside;
    // the complement of the photon trace needs at least two parameter points
    if (outside >= 2) {
      ++rep.passes;
    } else {
      ++rep.fails;
      if (!rep.witness) rep.witness = pp.photon;
    }
  }
  return rep;
}

ProbeReport photon_convexity_probe(const Domain& dom, int sample_count, SplitMix64 rng,
                                   std::uint64_t seed_label) {
  ProbeReport rep;
  rep.probe = "photon_convexity";
  rep.seed = seed_label;
  rep.samples = sample_count;
  rep.heuristic = true;
  const double thr = dom.inside_threshold();
  std::vector<bool> flag(kGridSize);
  for (int s = 0; s < sample_count; ++s) {
    Plane x = dom.sample_interior(rng);
    if (!dom.contains(x)) {
      ++rep.skipped;
      continue;
    }
    ProjParam pp = random_photon_at(dom.ctx(), x, rng);
    int inside = 0;
    for (int k = 0; k < kGridSize; ++k) {
      flag[k] = dom.margin(pp.at_angle(k * kGridStep)) > thr;
      if (flag[k]) ++inside;
    }
    if (inside == 0) {
      ++rep.skipped;  // photon misses the domain at scan resolution
      continue;
    }
    const int comps = inside == kGridSize ? 1 : count_circular_components(flag);
    if (comps > rep.max_components) {
      rep.max_components = comps;
      rep.witness = pp.photon;
    }
    if (comps == 1)
      ++rep.passes;
    else
      ++rep.fails;
  }
  return rep;
}

}  // namespace flagmetric
