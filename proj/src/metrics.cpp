#include "flagmetric/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace flagmetric {

namespace {

// Gram-Schmidt for an indefinite form; every pivot must have sign `s`.
std::optional<Eigen::MatrixXd> form_gram_schmidt(const Eigen::MatrixXd& cols,
                                                 const Eigen::MatrixXd& form, double s) {
  Eigen::MatrixXd out(cols.rows(), cols.cols());
  for (int i = 0; i < cols.cols(); ++i) {
    Eigen::VectorXd v = cols.col(i);
    for (int j = 0; j < i; ++j) {
      const double c = s * out.col(j).dot(form * v);
      v -= c * out.col(j);
    }
    const double nrm = v.dot(form * v);
    if (s * nrm <= 1e-14) return std::nullopt;
    out.col(i) = v / std::sqrt(s * nrm);
  }
  return out;
}

// Form-orthonormal frame [X' | Y'] adapted to x: X' spans x with
// X'^T F X' = I, Y' spans the F-orthocomplement with Y'^T F Y' = -I.
Eigen::MatrixXd adapted_frame(const SymmetricDomain& dom, const Plane& x) {
  if (!dom.contains(x))
    fail("NotInDomain", "adapted_frame: point is outside the domain");
  const int n = dom.ctx().n();
  const int p = dom.ctx().p;
  auto pos = form_gram_schmidt(x.basis(), dom.form(), +1.0);
  if (!pos) fail("NotInDomain", "adapted_frame: restricted form is not positive definite");
  // F-orthocomplement of x: kernel of X^T F
  Eigen::MatrixXd xtf = x.basis().transpose() * dom.form();  // p x n
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(xtf, Eigen::ComputeFullV);
  Eigen::MatrixXd w = svd.matrixV().rightCols(n - p);
  auto neg = form_gram_schmidt(w, dom.form(), -1.0);
  if (!neg) fail("InvalidForm", "adapted_frame: orthocomplement is not negative definite");
  Eigen::MatrixXd frame(n, n);
  frame << *pos, *neg;
  return frame;
}

Eigen::MatrixXd sigma_matrix(const Eigen::VectorXd& sigmas, int q, int p, int upto) {
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(q, p);
  for (int i = 0; i < upto; ++i) s(i, i) = sigmas(i);
  return s;
}

}  // namespace

Eigen::MatrixXd random_orthogonal(int dim, SplitMix64& rng) {
  Eigen::MatrixXd m(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) m(i, j) = rng.normal();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
  Eigen::MatrixXd qmat = qr.householderQ();
  Eigen::MatrixXd rmat = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < dim; ++j)
    if (rmat(j, j) < 0.0) qmat.col(j) = -qmat.col(j);
  return qmat;
}

Eigen::MatrixXd normalize_to_base(const SymmetricDomain& dom, const Plane& x) {
  const int n = dom.ctx().n();
  Eigen::MatrixXd frame = adapted_frame(dom, x);
  Eigen::MatrixXd e(n, n);
  e << dom.positive_frame(), dom.negative_frame();
  return frame * e.partialPivLu().solve(Eigen::MatrixXd::Identity(n, n));
}

RelativePosition relative_position(const SymmetricDomain& dom, const Plane& x,
                                   const Plane& y) {
  if (!dom.contains(y))
    fail("NotInDomain", "relative_position: y is outside the domain");
  const int p = dom.ctx().p;
  const int q = dom.ctx().q;
  RelativePosition rp;
  rp.frame = adapted_frame(dom, x);
  Eigen::MatrixXd c = rp.frame.partialPivLu().solve(y.basis());
  Eigen::MatrixXd top = c.topRows(p);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(top);
  lu.setThreshold(1e-12);
  if (!lu.isInvertible())
    fail("ChartDegeneracy", "relative_position: chart block is singular");
  Eigen::MatrixXd b = c.bottomRows(q) * lu.inverse();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(b, Eigen::ComputeFullU | Eigen::ComputeFullV);
  rp.sigmas = svd.singularValues();
  rp.u = svd.matrixU();
  rp.v = svd.matrixV();
  if (rp.sigmas(0) >= 1.0 - 1e-12)
    fail("BoundaryProximity", "relative_position: singular value within 1e-12 of 1");
  rp.flat_coords.resize(rp.sigmas.size());
  for (Eigen::Index i = 0; i < rp.sigmas.size(); ++i)
    rp.flat_coords(i) = std::log1p(rp.sigmas(i)) - std::log1p(-rp.sigmas(i));
  return rp;
}

double kobayashi_closed_form(const SymmetricDomain& dom, const Plane& x, const Plane& y) {
  return relative_position(dom, x, y).flat_coords.sum();
}

Chain geodesic_r_chain(const SymmetricDomain& dom, const Plane& x, const Plane& y) {
  Chain chain;
  chain.points.push_back(x);
  if (spans_equal(x, y, dom.ctx().tol)) return chain;

  RelativePosition rp = relative_position(dom, x, y);
  const int p = dom.ctx().p;
  const int q = dom.ctx().q;
  int segments = 0;
  for (Eigen::Index i = 0; i < rp.sigmas.size(); ++i)
    if (rp.sigmas(i) > dom.ctx().tol.geom_abs) ++segments;

  for (int i = 1; i < segments; ++i) {
    Eigen::MatrixXd d = rp.u * sigma_matrix(rp.sigmas, q, p, i) * rp.v.transpose();
    Eigen::MatrixXd span = rp.frame.leftCols(p) + rp.frame.rightCols(q) * d;
    chain.points.push_back(Plane::from_span(span, dom.ctx().tol));
  }
  chain.points.push_back(y);

  chain.segment_lengths.reserve(chain.points.size() - 1);
  for (std::size_t i = 0; i + 1 < chain.points.size(); ++i)
    chain.segment_lengths.push_back(
        segment_hilbert_length(dom, chain.points[i], chain.points[i + 1]));
  return chain;
}

namespace {

struct DualScore {
  double rho = 0.0;
  bool usable = false;
};

DualScore score_dual(const Domain& dom, const Plane& x, const Plane& y, const Plane& xi) {
  const double dx = flag_pairing(dom.ctx(), x, xi);
  const double dy = flag_pairing(dom.ctx(), y, xi);
  if (std::abs(dx) <= dom.ctx().tol.geom_abs || std::abs(dy) <= dom.ctx().tol.geom_abs)
    return {};
  return {std::log(std::abs(dx)) - std::log(std::abs(dy)), true};
}

}  // namespace

CaratheodoryResult caratheodory_lower(const Domain& dom, const Plane& x, const Plane& y,
                                      const std::vector<Plane>& duals, bool optimize,
                                      SplitMix64 rng) {
  if (!dom.contains(x) || !dom.contains(y))
    fail("NotInDomain", "caratheodory_lower: points must lie in the domain");
  if (duals.empty()) fail("EmptyDualSample", "caratheodory_lower: no duals given");

  int best_hi = -1, best_lo = -1;
  double rho_hi = 0.0, rho_lo = 0.0;
  for (std::size_t i = 0; i < duals.size(); ++i) {
    DualScore s = score_dual(dom, x, y, duals[i]);
    if (!s.usable) continue;
    if (best_hi < 0 || s.rho > rho_hi) {
      best_hi = static_cast<int>(i);
      rho_hi = s.rho;
    }
    if (best_lo < 0 || s.rho < rho_lo) {
      best_lo = static_cast<int>(i);
      rho_lo = s.rho;
    }
  }
  if (best_hi < 0)
    fail("EmptyDualSample", "caratheodory_lower: no dual is transverse to both points");

  CaratheodoryResult result;
  // the chain metric dominates |log CR| / chi(h_alpha)
  result.value = (rho_hi - rho_lo) / kCrossRatioWeight;
  result.witness = {duals[best_hi], duals[best_lo]};

  if (!optimize || !dom.dual_margin(duals[best_hi]).has_value()) return result;

  // Local chart refinement of the dual pair. Seeds: the discrete max, plus the
  // constructed supporting pair on symmetric domains (a seed, not asserted
  // optimal). The returned value always comes from a feasible evaluated pair.
  const GrassmannContext& ctx = dom.ctx();
  const int q = ctx.q;
  const int chart_dim = (ctx.n() - q) * q;

  std::vector<DualPair> seeds;
  if (const auto* sym = dynamic_cast<const SymmetricDomain*>(&dom)) {
    try {
      seeds.push_back(supporting_dual_pair(*sym, x, y));
    } catch (const Error&) {
    }
  }
  seeds.push_back(result.witness);

  double best_value = result.value;
  DualPair best_pair = result.witness;

  auto build = [&](const Plane& base, const Eigen::MatrixXd& comp,
                   const Eigen::VectorXd& flat) {
    Eigen::MatrixXd a = Eigen::Map<const Eigen::MatrixXd>(flat.data(), ctx.n() - q, q);
    return Plane::from_span(base.basis() + comp * a, ctx.tol);
  };

  const int budget = 4000 / static_cast<int>(seeds.size());
  for (const DualPair& seed : seeds) {
    const Eigen::MatrixXd comp_xi = orthogonal_complement(seed.xi.basis(), ctx.tol);
    const Eigen::MatrixXd comp_eta = orthogonal_complement(seed.eta.basis(), ctx.tol);
    auto objective = [&](const Eigen::VectorXd& z) {
      Plane xi, eta;
      try {
        xi = build(seed.xi, comp_xi, z.head(chart_dim));
        eta = build(seed.eta, comp_eta, z.tail(chart_dim));
      } catch (const Error&) {
        return 1e6;
      }
      const double m_xi = dom.dual_margin(xi).value();
      const double m_eta = dom.dual_margin(eta).value();
      DualScore sx = score_dual(dom, x, y, xi);
      DualScore se = score_dual(dom, x, y, eta);
      if (!sx.usable || !se.usable) return 1e6;
      const double value = std::abs(sx.rho - se.rho) / kCrossRatioWeight;
      const double penalty = 100.0 * (std::max(0.0, -m_xi) + std::max(0.0, -m_eta));
      if (m_xi > -ctx.tol.geom_abs && m_eta > -ctx.tol.geom_abs && value > best_value) {
        best_value = value;
        best_pair = sx.rho >= se.rho ? DualPair{xi, eta} : DualPair{eta, xi};
      }
      return -value + penalty;
    };
    minimize(objective, Eigen::VectorXd::Zero(2 * chart_dim), budget, rng.split());
  }
  result.value = best_value;
  result.witness = best_pair;
  return result;
}

namespace {

// Common subspace of x and y (dimension p - arithmetic distance).
Plane common_subspace(const GrassmannContext& ctx, const Plane& x, const Plane& y, int d) {
  const int p = ctx.p;
  if (d >= p) return Plane::from_span(Eigen::MatrixXd(ctx.n(), 0), ctx.tol);
  Eigen::MatrixXd m(ctx.n(), 2 * p);
  m << x.basis(), -y.basis();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullV);
  Eigen::MatrixXd kernel = svd.matrixV().rightCols(p - d);
  return Plane::from_span(x.basis() * kernel.topRows(p), ctx.tol);
}

// Orthonormal basis of z beyond the common part w.
Eigen::MatrixXd extra_basis(const Plane& z, const Plane& w, int count) {
  Eigen::MatrixXd e = z.basis();
  if (w.k() > 0) e -= w.basis() * (w.basis().transpose() * z.basis());
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(e, Eigen::ComputeThinU);
  return svd.matrixU().leftCols(count);
}

std::optional<Chain> evaluate_chain(const Domain& dom, std::vector<Plane> points) {
  Chain chain;
  chain.points = std::move(points);
  try {
    for (std::size_t i = 1; i + 1 < chain.points.size(); ++i)
      if (!dom.contains(chain.points[i])) return std::nullopt;
    for (std::size_t i = 0; i + 1 < chain.points.size(); ++i)
      chain.segment_lengths.push_back(
          segment_hilbert_length(dom, chain.points[i], chain.points[i + 1]));
  } catch (const Error&) {
    return std::nullopt;
  }
  return chain;
}

// Nearest plane of the form span(w, a in x, b in y) to a free chart point;
// keeps two-segment chains photon-related by construction.
std::optional<Plane> project_intermediate(const GrassmannContext& ctx, const Plane& w,
                                          const Eigen::MatrixXd& xe,
                                          const Eigen::MatrixXd& ye, const Plane& m) {
  auto principal = [&](const Eigen::MatrixXd& cols) {
    Eigen::MatrixXd corr = m.basis().transpose() * cols;  // p x dim
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(corr, Eigen::ComputeFullV);
    return Eigen::VectorXd(cols * svd.matrixV().col(0));
  };
  Eigen::MatrixXd span(ctx.n(), ctx.p);
  if (w.k() > 0) span.leftCols(w.k()) = w.basis();
  span.col(ctx.p - 2) = principal(xe);
  span.col(ctx.p - 1) = principal(ye);
  try {
    return Plane::from_span(span, ctx.tol);
  } catch (const Error&) {
    return std::nullopt;
  }
}

}  // namespace

UpperBoundResult kobayashi_upper(const Domain& dom, const Plane& x, const Plane& y,
                                 const ChainSearchConfig& cfg, SplitMix64 rng) {
  if (!dom.contains(x) || !dom.contains(y))
    fail("NotInDomain", "kobayashi_upper: points must lie in the domain");
  const GrassmannContext& ctx = dom.ctx();

  if (spans_equal(x, y, ctx.tol)) {
    Chain trivial;
    trivial.points.push_back(x);
    return {0.0, trivial};
  }

  const int d = arithmetic_distance(ctx, x, y);
  if (d == 1) {
    // the 1-chain is a geodesic between photon-related points
    try {
      Chain one;
      one.points = {x, y};
      one.segment_lengths = {segment_hilbert_length(dom, x, y)};
      return {one.segment_lengths[0], one};
    } catch (const Error&) {
      // different components of the photon trace: fall through to the search
    }
  }

  std::optional<Chain> best;
  auto consider = [&](const std::optional<Chain>& cand) {
    if (cand && (!best || cand->total() < best->total())) best = *cand;
  };

  const auto* sym = dynamic_cast<const SymmetricDomain*>(&dom);
  if (sym) {
    try {
      Chain geo = geodesic_r_chain(*sym, x, y);
      if (static_cast<int>(geo.segment_lengths.size()) <= cfg.max_segments)
        consider(geo);
    } catch (const Error&) {
    }
  }

  if (d >= 2 && d <= cfg.max_segments) {
    // multi-leg chains: swap x-directions for y-directions one at a time
    Plane w = common_subspace(ctx, x, y, d);
    Eigen::MatrixXd xe = extra_basis(x, w, d);
    Eigen::MatrixXd ye = extra_basis(y, w, d);
    const int samples = 16 * std::max(1, cfg.restarts);
    for (int s = 0; s < samples; ++s) {
      Eigen::MatrixXd ra = random_orthogonal(d, rng);
      Eigen::MatrixXd rb = random_orthogonal(d, rng);
      Eigen::MatrixXd a = xe * ra;
      Eigen::MatrixXd b = ye * rb;
      std::vector<Plane> pts;
      pts.push_back(x);
      bool ok = true;
      for (int i = 1; i < d; ++i) {
        Eigen::MatrixXd span(ctx.n(), ctx.p);
        if (w.k() > 0) span.leftCols(w.k()) = w.basis();
        span.middleCols(w.k(), i) = b.leftCols(i);
        span.rightCols(d - i) = a.rightCols(d - i);
        try {
          pts.push_back(Plane::from_span(span, ctx.tol));
        } catch (const Error&) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      pts.push_back(y);
      consider(evaluate_chain(dom, pts));
    }

    // refine the intermediate point of two-segment chains in its chart
    if (d == 2 && best && best->points.size() == 3 && cfg.budget > 0) {
      const Plane m0 = best->points[1];
      const Eigen::MatrixXd comp = orthogonal_complement(m0.basis(), ctx.tol);
      const int chart_dim = static_cast<int>(comp.cols()) * ctx.p;
      double best_len = best->total();
      std::optional<Plane> best_mid;

      auto objective = [&](const Eigen::VectorXd& z) {
        Eigen::MatrixXd a = Eigen::Map<const Eigen::MatrixXd>(z.data(), comp.cols(), ctx.p);
        Plane raw;
        bool inside = false;
        for (int half = 0; half < 40; ++half) {  // backtrack into the domain
          try {
            raw = Plane::from_span(m0.basis() + comp * a, ctx.tol);
          } catch (const Error&) {
            a *= 0.5;
            continue;
          }
          if (dom.contains(raw)) {
            inside = true;
            break;
          }
          a *= 0.5;
        }
        if (!inside) return 1e6;
        auto mid = project_intermediate(ctx, w, xe, ye, raw);
        if (!mid || !dom.contains(*mid)) return 1e6;
        double len;
        try {
          len = segment_hilbert_length(dom, x, *mid) + segment_hilbert_length(dom, *mid, y);
        } catch (const Error&) {
          return 1e6;
        }
        if (len < best_len) {
          best_len = len;
          best_mid = *mid;
        }
        return len;
      };
      minimize(objective, Eigen::VectorXd::Zero(chart_dim), cfg.budget, rng.split());
      if (best_mid) consider(evaluate_chain(dom, {x, *best_mid, y}));
    }
  }

  if (!best)
    fail("NoChainFound",
         "kobayashi_upper: no admissible chain within budget (search failure)");
  return {best->total(), *best};
}

std::vector<Plane> sample_negative_duals(const SymmetricDomain& dom, int count,
                                         SplitMix64& rng) {
  // Frame-paired sampling: each plane mixes an orthonormal positive frame into
  // an orthonormal negative frame with per-vector ratios biased toward the
  // cone boundary, where the dual supremum is approached. The pairing keeps
  // the restricted form diagonal, so the Gram-Schmidt negativity check cannot
  // reject a draw.
  const GrassmannContext& ctx = dom.ctx();
  const int r = std::min(ctx.p, ctx.q);
  std::vector<Plane> out;
  out.reserve(count);
  while (static_cast<int>(out.size()) < count) {
    Eigen::MatrixXd v = random_orthogonal(ctx.p, rng);
    Eigen::MatrixXd u = random_orthogonal(ctx.q, rng);
    Eigen::MatrixXd cols(ctx.n(), ctx.q);
    for (int j = 0; j < r; ++j) {
      const double ratio = 1.0 - 0.1 * std::pow(rng.uniform01(), 3.0);
      cols.col(j) =
          ratio * dom.positive_frame() * v.col(j) + dom.negative_frame() * u.col(j);
    }
    for (int j = r; j < ctx.q; ++j) cols.col(j) = dom.negative_frame() * u.col(j);
    auto gs = form_gram_schmidt(cols, dom.form(), -1.0);
    if (!gs) continue;
    out.push_back(Plane::from_orthonormal(*gs, ctx.tol));
  }
  return out;
}

DualPair supporting_dual_pair(const SymmetricDomain& dom, const Plane& x, const Plane& y) {
  // Boundary duals supporting the flat through the pair: in the frame
  // diagonalizing the relative position, mix each positive direction fully
  // into its paired negative direction, with both orientations. Both planes
  // are negative semidefinite, hence genuine duals of the open domain, and the
  // flag cross ratio at this pair attains the chain metric.
  const GrassmannContext& ctx = dom.ctx();
  RelativePosition rp = relative_position(dom, x, y);
  const int r = std::min(ctx.p, ctx.q);
  Eigen::MatrixXd pos = rp.frame.leftCols(ctx.p) * rp.v;
  Eigen::MatrixXd neg = rp.frame.rightCols(ctx.q) * rp.u;
  Eigen::MatrixXd xi(ctx.n(), ctx.q), eta(ctx.n(), ctx.q);
  for (int j = 0; j < r; ++j) {
    xi.col(j) = pos.col(j) - neg.col(j);
    eta.col(j) = pos.col(j) + neg.col(j);
  }
  for (int j = r; j < ctx.q; ++j) {
    xi.col(j) = neg.col(j);
    eta.col(j) = neg.col(j);
  }
  return {Plane::from_span(xi, ctx.tol), Plane::from_span(eta, ctx.tol)};
}

std::vector<Plane> default_duals(const Domain& dom, int dual_samples, SplitMix64& rng) {
  if (const auto* sym = dynamic_cast<const SymmetricDomain*>(&dom)) {
    SplitMix64 dual_rng = rng.split();
    return sample_negative_duals(*sym, dual_samples, dual_rng);
  }
  if (const auto* comp = dynamic_cast<const HyperplaneComplementDomain*>(&dom))
    return comp->duals();
  fail("EmptyDualSample", "no dual sampling strategy for this domain kind");
}

MetricReport sandwich(const Domain& dom, const Plane& x, const Plane& y,
                      const SandwichConfig& cfg, SplitMix64 rng,
                      std::uint64_t seed_label) {
  const auto* sym = dynamic_cast<const SymmetricDomain*>(&dom);
  std::vector<Plane> duals = default_duals(dom, cfg.dual_samples, rng);

  MetricReport report;
  report.seed = seed_label;
  CaratheodoryResult lower = caratheodory_lower(dom, x, y, duals, cfg.optimize, rng.split());
  UpperBoundResult upper = kobayashi_upper(dom, x, y, cfg.chain, rng.split());
  report.lower = lower.value;
  report.upper = upper.value;
  report.chain_witness = upper.chain;
  report.dual_witness = lower.witness;
  if (sym) report.exact = kobayashi_closed_form(*sym, x, y);

  const double slack = dom.ctx().tol.metric_abs;
  if (report.lower > report.upper + slack)
    fail("ReportInvariantViolated", "sandwich: lower bound exceeds upper bound");
  if (report.exact &&
      (report.lower > *report.exact + slack || *report.exact > report.upper + slack))
    fail("ReportInvariantViolated", "sandwich: closed form escapes the bracket");
  return report;
}

double four_point_delta(double d12, double d13, double d14, double d23, double d24,
                        double d34) {
  double sums[3] = {d12 + d34, d13 + d24, d14 + d23};
  std::sort(sums, sums + 3);
  return 0.5 * (sums[2] - sums[1]);
}

std::vector<HyperbolicityRow> hyperbolicity_probe(const Domain& dom,
                                                  const HyperbolicityConfig& cfg,
                                                  SplitMix64 rng,
                                                  std::uint64_t seed_label) {
  const auto* sym = dynamic_cast<const SymmetricDomain*>(&dom);
  const GrassmannContext& ctx = dom.ctx();
  const int r = std::min(ctx.p, ctx.q);

  std::vector<HyperbolicityRow> rows;
  for (double scale : cfg.scales) {
    HyperbolicityRow row;
    row.scale = scale;
    row.seed = seed_label;

    auto sample_point = [&]() {
      if (!sym) return dom.sample_interior(rng);
      Eigen::VectorXd t(r);
      for (int i = 0; i < r; ++i) t(i) = rng.uniform(0.0, scale);
      Eigen::MatrixXd u = random_orthogonal(ctx.q, rng);
      Eigen::MatrixXd v = random_orthogonal(ctx.p, rng);
      Eigen::MatrixXd b = Eigen::MatrixXd::Zero(ctx.q, ctx.p);
      for (int i = 0; i < r; ++i) b(i, i) = std::tanh(0.5 * t(i));
      return sym->graph_plane(u * b * v.transpose());
    };

    auto distance = [&](const Plane& a, const Plane& b) {
      if (sym) return kobayashi_closed_form(*sym, a, b);
      MetricReport rep = sandwich(dom, a, b, cfg.sandwich, rng.split(), seed_label);
      row.gap = std::max(row.gap, rep.upper - rep.lower);
      return 0.5 * (rep.lower + rep.upper);
    };

    for (int s = 0; s < cfg.quadruples_per_scale; ++s) {
      Plane pts[4];
      for (auto& pt : pts) pt = sample_point();
      try {
        const double delta =
            four_point_delta(distance(pts[0], pts[1]), distance(pts[0], pts[2]),
                             distance(pts[0], pts[3]), distance(pts[1], pts[2]),
                             distance(pts[1], pts[3]), distance(pts[2], pts[3]));
        row.delta = std::max(row.delta, delta);
      } catch (const Error&) {
        continue;  // boundary-proximal quadruple at this scale
      }
    }

    if (sym && r >= 2) {
      // explicit flat quadruple (0,0), (D,D), (D,0), (0,D) in flat coordinates
      const double a = std::tanh(0.5 * scale);
      auto diag_pt = [&](double s1, double s2) {
        Eigen::MatrixXd b = Eigen::MatrixXd::Zero(ctx.q, ctx.p);
        b(0, 0) = s1;
        b(1, 1) = s2;
        return sym->graph_plane(b);
      };
      const Plane fx = sym->base_point();
      const Plane fy = diag_pt(a, a);
      const Plane fz = diag_pt(a, 0.0);
      const Plane fw = diag_pt(0.0, a);
      row.flat_delta = four_point_delta(
          kobayashi_closed_form(*sym, fx, fy), kobayashi_closed_form(*sym, fx, fz),
          kobayashi_closed_form(*sym, fx, fw), kobayashi_closed_form(*sym, fy, fz),
          kobayashi_closed_form(*sym, fy, fw), kobayashi_closed_form(*sym, fz, fw));
      row.delta = std::max(row.delta, *row.flat_delta);
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace flagmetric
