#include <doctest.h>

#include "flagmetric/domains.hpp"
#include "helpers.hpp"

using namespace flagmetric;
using testutil::span_of;

TEST_CASE("symmetric domain membership") {
  SUBCASE("signature (2,1)") {
    auto dom = testutil::standard_domain(2, 1);
    CHECK(dom.contains(span_of({{1, 0, 0}, {0, 1, 0}}, 3)));
    CHECK(!dom.contains(span_of({{0, 1, 0}, {0, 0, 1}}, 3)));
  }
  SUBCASE("signature (1,2): line with small mixing") {
    auto dom = testutil::standard_domain(1, 2);
    CHECK(dom.contains(span_of({{1, 0.5, 0}}, 3)));   // 1 - 0.25 > 0
    CHECK(!dom.contains(span_of({{1, 1.5, 0}}, 3)));  // 1 - 2.25 < 0
    CHECK(!dom.contains(span_of({{0, 0, 1}}, 3)));
  }
  SUBCASE("signature validation") {
    GrassmannContext ctx{2, 1, Tolerance{}};
    Eigen::MatrixXd wrong = Eigen::Vector3d(1, -1, -1).asDiagonal();
    CHECK_THROWS_AS(SymmetricDomain(ctx, wrong), Error);
  }
}

TEST_CASE("symmetric domain dual membership") {
  SUBCASE("signature (2,1)") {
    auto dom = testutil::standard_domain(2, 1);
    CHECK(dom.dual_contains(span_of({{0, 0, 1}}, 3)));   // negative line
    CHECK(!dom.dual_contains(span_of({{1, 0, 0}}, 3)));  // positive line
    CHECK_THROWS_AS(dom.dual_contains(span_of({{1, 0, 0}, {0, 1, 0}}, 3)), Error);
  }
  SUBCASE("signature (1,2): negative 2-plane") {
    auto dom = testutil::standard_domain(1, 2);
    CHECK(dom.dual_contains(span_of({{0, 1, 0}, {0, 0, 1}}, 3)));
    CHECK(!dom.dual_contains(span_of({{1, 0, 0}, {0, 1, 0}}, 3)));
  }
  SUBCASE("dual membership implies transversality to every interior point") {
    auto dom = testutil::standard_domain(2, 2);
    SplitMix64 rng(17);
    std::vector<Plane> duals = sample_negative_duals(dom, 20, rng);
    for (const auto& xi : duals) {
      REQUIRE(dom.dual_contains(xi));
      for (int s = 0; s < 10; ++s) {
        Plane x = dom.sample_interior(rng);
        CHECK(is_transverse(dom.ctx(), x, xi));
      }
    }
  }
}

TEST_CASE("hyperplane complement domain") {
  GrassmannContext ctx{2, 2, Tolerance{}};
  SplitMix64 rng(4);
  auto dom_ptr = [&]() {
    std::vector<Plane> duals;
    for (int i = 0; i < 4; ++i) duals.push_back(random_plane(ctx, 2, rng));
    Plane ref = random_plane(ctx, 2, rng);
    return std::make_unique<HyperplaneComplementDomain>(ctx, duals, ref);
  }();
  const auto& dom = *dom_ptr;

  CHECK(dom.contains(dom.reference()));
  CHECK(dom.margin(dom.reference()) > 0.0);
  SUBCASE("membership is stable under the representative sign flip") {
    // flipping the sign of a basis column must not change membership
    Plane x = dom.sample_interior(rng);
    Eigen::MatrixXd flipped = x.basis();
    flipped.col(0) = -flipped.col(0);
    Plane x_flipped = Plane::from_orthonormal(flipped, ctx.tol);
    CHECK(dom.contains(x) == dom.contains(x_flipped));
  }
  SUBCASE("defining duals are recognized") {
    for (const auto& xi : dom.duals()) CHECK(dom.dual_contains(xi));
    CHECK(dom.dual_check_is_heuristic());
  }
}

TEST_CASE("photon intersection on the rank-one model") {
  // Gr_1(R^2) with form diag(1,-1): the graph coordinate interval is (-1, 1)
  auto dom = testutil::standard_domain(1, 1);
  GrassmannContext ctx = dom.ctx();
  Photon whole{Plane::from_span(Eigen::MatrixXd(2, 0), ctx.tol),
               Plane::from_span(Eigen::MatrixXd::Identity(2, 2), ctx.tol)};
  ProjParam pp{whole, testutil::unit(2, 0), testutil::unit(2, 1), ctx.tol};

  auto interval = photon_intersection(dom, pp, 0.0);
  REQUIRE(interval.has_value());
  CHECK(!interval->whole_line);
  REQUIRE(!interval->lo.is_inf);
  REQUIRE(!interval->hi.is_inf);
  CHECK(interval->lo.value == doctest::Approx(-1.0).epsilon(1e-10));
  CHECK(interval->hi.value == doctest::Approx(1.0).epsilon(1e-10));

  SUBCASE("endpoints sit on the membership transition") {
    CHECK(std::abs(dom.margin(pp.at_angle(interval->theta_lo))) < 1e-9);
    CHECK(std::abs(dom.margin(pp.at_angle(interval->theta_hi))) < 1e-9);
  }
}

TEST_CASE("photon intersection edge cases") {
  GrassmannContext ctx{1, 2, Tolerance{}};
  SUBCASE("no duals: the whole line") {
    HyperplaneComplementDomain everything(ctx, {}, span_of({{1, 0, 0}}, 3));
    SplitMix64 rng(12);
    Plane x = everything.sample_interior(rng);
    ProjParam pp = random_photon_at(ctx, x, rng);
    auto interval = photon_intersection(everything, pp, pp.angle_of(x));
    REQUIRE(interval.has_value());
    CHECK(interval->whole_line);
  }
  SUBCASE("photon entirely outside is empty") {
    auto dom = testutil::standard_domain(1, 2);
    // all lines inside span(e2, e3) are negative
    Photon ph{Plane::from_span(Eigen::MatrixXd(3, 0), ctx.tol),
              span_of({{0, 1, 0}, {0, 0, 1}}, 3)};
    ProjParam pp{ph, testutil::unit(3, 1), testutil::unit(3, 2), ctx.tol};
    CHECK(!photon_intersection(dom, pp).has_value());
  }
}

TEST_CASE("segment hilbert length") {
  SUBCASE("explicit value log 3 on the interval (-1,1)") {
    auto dom = testutil::standard_domain(1, 1);
    Plane x = span_of({{1, 0}}, 2);
    Plane y = span_of({{1, 0.5}}, 2);
    CHECK(segment_hilbert_length(dom, x, y) ==
          doctest::Approx(std::log(3.0)).epsilon(1e-12));
  }
  SUBCASE("coincident points have zero length") {
    auto dom = testutil::standard_domain(2, 2);
    SplitMix64 rng(5);
    Plane x = dom.sample_interior(rng);
    CHECK(segment_hilbert_length(dom, x, x) == 0.0);
  }
  SUBCASE("whole-line photons contribute zero") {
    GrassmannContext ctx{1, 2, Tolerance{}};
    HyperplaneComplementDomain everything(ctx, {}, span_of({{1, 0, 0}}, 3));
    Plane x = span_of({{1, 0, 0}}, 3);
    Plane y = span_of({{1, 1, 0}}, 3);
    CHECK(segment_hilbert_length(everything, x, y) == 0.0);
  }
  SUBCASE("errors") {
    auto dom = testutil::standard_domain(2, 2);
    Plane x = dom.graph_plane(Eigen::MatrixXd::Zero(2, 2));
    Eigen::MatrixXd far(2, 2);
    far << 0.5, 0, 0, 0.5;
    Plane y = dom.graph_plane(far);  // distance two from x
    CHECK_THROWS_AS(segment_hilbert_length(dom, x, y), Error);
    Eigen::MatrixXd outside(2, 2);
    outside << 2.0, 0, 0, 0;
    CHECK_THROWS_AS(segment_hilbert_length(dom, x, dom.graph_plane(outside)), Error);
  }
}

TEST_CASE("segment length is symmetric and reparametrization invariant") {
  auto dom = testutil::standard_domain(2, 2);
  SplitMix64 rng(21);
  int checked = 0;
  for (int trial = 0; trial < 40 && checked < 15; ++trial) {
    Plane x = dom.sample_interior(rng);
    // photon-related partner: rank-one bump in a random graph direction
    ProjParam pp = random_photon_at(dom.ctx(), x, rng);
    auto interval = photon_intersection(dom, pp, pp.angle_of(x));
    if (!interval || interval->whole_line) continue;
    const double theta_y =
        0.5 * (pp.angle_of(x) + interval->theta_hi);  // inside the same component
    Plane y = pp.at_angle(theta_y);
    if (!dom.contains(y) || spans_equal(x, y, dom.ctx().tol)) continue;

    const double xy = segment_hilbert_length(dom, x, y);
    const double yx = segment_hilbert_length(dom, y, x);
    CHECK(xy == doctest::Approx(yx).epsilon(1e-10));

    // independent frame: parametrize the same photon from scratch
    ProjParam other = parametrize(dom.ctx(), pp.photon);
    auto interval2 = photon_intersection(dom, other, other.angle_of(x));
    REQUIRE(interval2.has_value());
    auto unwrap = [&](double th) {
      double t = std::fmod(th - interval2->theta_lo, M_PI);
      if (t < 0.0) t += M_PI;
      return interval2->theta_lo + t;
    };
    const double again =
        hilbert_length(*interval2, unwrap(other.angle_of(x)), unwrap(other.angle_of(y)));
    CHECK(again == doctest::Approx(xy).epsilon(1e-9));
    ++checked;
  }
  CHECK(checked >= 10);
}

TEST_CASE("form-orthogonal maps preserve membership and segment lengths") {
  auto dom = testutil::standard_domain(2, 2);
  SplitMix64 rng(33);
  int checked = 0;
  for (int trial = 0; trial < 40 && checked < 10; ++trial) {
    Eigen::MatrixXd g = testutil::random_form_orthogonal(2, 2, rng);
    Plane x = dom.sample_interior(rng);
    CHECK(dom.contains(testutil::apply(g, x, dom.ctx().tol)) == dom.contains(x));

    ProjParam pp = random_photon_at(dom.ctx(), x, rng);
    auto interval = photon_intersection(dom, pp, pp.angle_of(x));
    if (!interval || interval->whole_line) continue;
    const double theta_y = 0.7 * pp.angle_of(x) + 0.3 * interval->theta_hi;
    Plane y = pp.at_angle(theta_y);
    if (!dom.contains(y) || spans_equal(x, y, dom.ctx().tol)) continue;
    const double before = segment_hilbert_length(dom, x, y);
    const double after = segment_hilbert_length(dom, testutil::apply(g, x, dom.ctx().tol),
                                                testutil::apply(g, y, dom.ctx().tol));
    CHECK(after == doctest::Approx(before).epsilon(1e-8));
    ++checked;
  }
  CHECK(checked >= 5);
}

TEST_CASE("additivity along photons") {
  auto dom = testutil::standard_domain(2, 2);
  Eigen::MatrixXd b1 = Eigen::MatrixXd::Zero(2, 2);
  Eigen::MatrixXd b2 = b1, b3 = b1;
  b2(0, 0) = 0.3;
  b3(0, 0) = 0.7;
  Plane x = dom.graph_plane(b1);
  Plane y = dom.graph_plane(b2);
  Plane z = dom.graph_plane(b3);
  CHECK(segment_hilbert_length(dom, x, z) ==
        doctest::Approx(segment_hilbert_length(dom, x, y) +
                        segment_hilbert_length(dom, y, z))
            .epsilon(1e-10));
}

namespace {

// Adversarial fixture: two disjoint sign-cell-like strips on the rank-one
// model, to exercise the component counting of the convexity probe.
class TwoStripDomain : public flagmetric::Domain {
 public:
  TwoStripDomain()
      : Domain(flagmetric::GrassmannContext{1, 1, flagmetric::Tolerance{}}) {}

  double margin(const flagmetric::Plane& x) const override {
    const double a = x.basis()(0, 0);
    const double b = x.basis()(1, 0);
    if (std::abs(a) < 1e-12) return -1.0;
    const double t = b / a;
    const double strip1 = std::min(t - 0.1, 0.4 - t);
    const double strip2 = std::min(t - 0.6, 0.9 - t);
    return std::max(strip1, strip2);
  }
  double inside_threshold() const override { return 0.0; }
  bool dual_contains(const flagmetric::Plane&) const override { return false; }
  flagmetric::Plane sample_interior(flagmetric::SplitMix64& rng) const override {
    const double t = rng.uniform01() < 0.5 ? 0.25 : 0.75;
    Eigen::MatrixXd m(2, 1);
    m << 1.0, t;
    return flagmetric::Plane::from_span(m, ctx().tol);
  }
  std::string kind() const override { return "custom"; }
};

}  // namespace

TEST_CASE("r-properness probe") {
  SUBCASE("symmetric domains pass every photon") {
    for (auto [p, q] : {std::pair{1, 2}, std::pair{2, 2}}) {
      auto dom = testutil::standard_domain(p, q);
      ProbeReport rep = r_proper_probe(dom, 50, SplitMix64(7), 7);
      CHECK(rep.passes == 50);
      CHECK(rep.fails == 0);
      CHECK(rep.seed == 7);
    }
  }
  SUBCASE("the whole Grassmannian fails every photon") {
    GrassmannContext ctx{1, 2, Tolerance{}};
    HyperplaneComplementDomain everything(ctx, {}, span_of({{1, 0, 0}}, 3));
    ProbeReport rep = r_proper_probe(everything, 20, SplitMix64(8), 8);
    CHECK(rep.fails == 20);
    CHECK(rep.witness.has_value());
  }
  SUBCASE("complement domain with several duals reports a pass rate") {
    GrassmannContext ctx{2, 2, Tolerance{}};
    SplitMix64 rng(9);
    std::vector<Plane> duals;
    for (int i = 0; i < 3; ++i) duals.push_back(random_plane(ctx, 2, rng));
    HyperplaneComplementDomain dom(ctx, duals, random_plane(ctx, 2, rng));
    ProbeReport rep = r_proper_probe(dom, 30, SplitMix64(10), 10);
    CHECK(rep.passes + rep.fails + rep.skipped == 30);
    CHECK(rep.heuristic);
  }
}

TEST_CASE("photon convexity probe") {
  SUBCASE("symmetric domains have connected traces") {
    auto dom = testutil::standard_domain(2, 2);
    ProbeReport rep = photon_convexity_probe(dom, 50, SplitMix64(77), 77);
    CHECK(rep.max_components == 1);
    CHECK(rep.fails == 0);
  }
  SUBCASE("a two-strip fixture is caught") {
    TwoStripDomain dom;
    ProbeReport rep = photon_convexity_probe(dom, 10, SplitMix64(5), 5);
    CHECK(rep.max_components > 1);
    CHECK(rep.witness.has_value());
  }
}
