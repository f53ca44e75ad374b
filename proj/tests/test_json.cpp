#include <doctest.h>

#include "flagmetric/json_io.hpp"
#include "helpers.hpp"

using namespace flagmetric;

TEST_CASE("plane serialization") {
  Tolerance tol;
  GrassmannContext ctx{2, 3, tol};
  SplitMix64 rng(42);
  SUBCASE("round trip preserves the span") {
    for (int trial = 0; trial < 10; ++trial) {
      Plane x = random_plane(ctx, 2, rng);
      Plane back = plane_from_json(plane_to_json(x), tol);
      CHECK(spans_equal(x, back, tol));
    }
  }
  SUBCASE("reader re-orthonormalizes raw spans") {
    Json j;
    j["n"] = 3;
    j["k"] = 1;
    j["basis"] = std::vector<double>{2.0, 0.0, 0.0};  // not unit length
    Plane x = plane_from_json(j, tol);
    CHECK(std::abs(x.basis().col(0).norm() - 1.0) < 1e-12);
  }
  SUBCASE("zero-dimensional planes travel") {
    Plane v0 = Plane::from_span(Eigen::MatrixXd(4, 0), tol);
    Plane back = plane_from_json(plane_to_json(v0), tol);
    CHECK(back.k() == 0);
    CHECK(back.n() == 4);
  }
  SUBCASE("rank-deficient and malformed payloads are rejected") {
    Json j;
    j["n"] = 3;
    j["k"] = 2;
    j["basis"] = std::vector<double>{1, 2, 0, 0, 0, 0};  // two parallel columns
    CHECK_THROWS_AS(plane_from_json(j, tol), Error);
    Json bad;
    bad["n"] = 2;
    CHECK_THROWS_AS(plane_from_json(bad, tol), Error);
  }
}

TEST_CASE("domain serialization") {
  Tolerance tol;
  SplitMix64 rng(43);
  SUBCASE("symmetric: signature is recovered from the form") {
    auto dom = testutil::standard_domain(2, 3);
    auto back = domain_from_json(domain_to_json(dom), tol);
    CHECK(back->kind() == "symmetric");
    CHECK(back->ctx().p == 2);
    CHECK(back->ctx().q == 3);
    for (int trial = 0; trial < 10; ++trial) {
      Plane x = dom.sample_interior(rng);
      CHECK(back->contains(x) == dom.contains(x));
      CHECK(std::abs(back->margin(x) - dom.margin(x)) < 1e-12);
    }
  }
  SUBCASE("complement: duals and reference round trip") {
    GrassmannContext ctx{2, 2, tol};
    std::vector<Plane> duals;
    for (int i = 0; i < 3; ++i) duals.push_back(random_plane(ctx, 2, rng));
    HyperplaneComplementDomain dom(ctx, duals, random_plane(ctx, 2, rng));
    auto back = domain_from_json(domain_to_json(dom), tol);
    CHECK(back->kind() == "complement");
    for (int trial = 0; trial < 20; ++trial) {
      Plane x = dom.sample_interior(rng);
      CHECK(back->contains(x) == dom.contains(x));
    }
  }
  SUBCASE("degenerate forms are rejected") {
    Json j;
    j["kind"] = "symmetric";
    j["form"] = std::vector<double>{1, 0, 0, 0};  // singular 2x2
    CHECK_THROWS_AS(domain_from_json(j, tol), Error);
    Json unknown;
    unknown["kind"] = "wedge";
    CHECK_THROWS_AS(domain_from_json(unknown, tol), Error);
  }
}

TEST_CASE("report serialization") {
  auto dom = testutil::standard_domain(2, 2);
  SplitMix64 rng(44);
  auto [x, y] = testutil::random_pair(dom, rng);
  SandwichConfig cfg;
  cfg.dual_samples = 100;
  MetricReport rep = sandwich(dom, x, y, cfg, rng.split(), 777);
  Json j = metric_report_to_json(rep);
  CHECK(j.at("seed") == 777);
  CHECK(j.at("lower").get<double>() == rep.lower);
  CHECK(j.at("chain_witness").at("points").size() == rep.chain_witness.points.size());
  CHECK(j.at("chain_witness").at("total").get<double>() ==
        doctest::Approx(rep.upper).epsilon(1e-12));

  SUBCASE("csv uses 12 significant digits") {
    HyperbolicityRow row;
    row.scale = 2.0;
    row.delta = 1.0 / 3.0;
    row.gap = 0.0;
    row.seed = 9;
    const std::string csv = hyperbolicity_rows_to_csv({row});
    CHECK(csv == "scale,delta,gap,seed\n2,0.333333333333,0,9\n");
  }
}
