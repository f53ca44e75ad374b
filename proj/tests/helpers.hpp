#pragma once

#include <Eigen/Dense>

#include "flagmetric/domains.hpp"
#include "flagmetric/metrics.hpp"

namespace testutil {

using namespace flagmetric;

inline Plane span_of(std::initializer_list<std::initializer_list<double>> cols, int n,
                     const Tolerance& tol = Tolerance{}) {
  Eigen::MatrixXd m(n, static_cast<int>(cols.size()));
  int c = 0;
  for (const auto& col : cols) {
    int r = 0;
    for (double v : col) m(r++, c) = v;
    ++c;
  }
  return Plane::from_span(m, tol);
}

inline Eigen::VectorXd unit(int n, int i) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
  v(i) = 1.0;
  return v;
}

// standard (p, q) domain: form diag(+1 x p, -1 x q)
inline SymmetricDomain standard_domain(int p, int q) {
  GrassmannContext ctx{p, q, Tolerance{}};
  Eigen::VectorXd diag(p + q);
  for (int i = 0; i < p + q; ++i) diag(i) = i < p ? 1.0 : -1.0;
  return SymmetricDomain(ctx, diag.asDiagonal());
}

// graph plane over the standard domain: span of columns of [I; B]
inline Plane graph_of(const SymmetricDomain& dom, const Eigen::MatrixXd& b) {
  return dom.graph_plane(b);
}

// random element of the form's orthogonal group for diag(+1^p, -1^q):
// product of plane rotations inside the positive and negative blocks and
// hyperbolic rotations mixing one positive with one negative direction
inline Eigen::MatrixXd random_form_orthogonal(int p, int q, SplitMix64& rng) {
  const int n = p + q;
  Eigen::MatrixXd g = Eigen::MatrixXd::Identity(n, n);
  auto rotate = [&](int i, int j, double angle) {
    Eigen::MatrixXd r = Eigen::MatrixXd::Identity(n, n);
    r(i, i) = std::cos(angle);
    r(j, j) = std::cos(angle);
    r(i, j) = -std::sin(angle);
    r(j, i) = std::sin(angle);
    g = r * g;
  };
  auto boost = [&](int i, int j, double rapidity) {
    Eigen::MatrixXd r = Eigen::MatrixXd::Identity(n, n);
    r(i, i) = std::cosh(rapidity);
    r(j, j) = std::cosh(rapidity);
    r(i, j) = std::sinh(rapidity);
    r(j, i) = std::sinh(rapidity);
    g = r * g;
  };
  for (int a = 0; a < p; ++a)
    for (int b = a + 1; b < p; ++b) rotate(a, b, rng.uniform(0.0, 2.0 * M_PI));
  for (int a = 0; a < q; ++a)
    for (int b = a + 1; b < q; ++b) rotate(p + a, p + b, rng.uniform(0.0, 2.0 * M_PI));
  for (int a = 0; a < std::min(p, q); ++a) boost(a, p + a, rng.uniform(-1.0, 1.0));
  return g;
}

inline Plane apply(const Eigen::MatrixXd& g, const Plane& x, const Tolerance& tol) {
  return Plane::from_span(g * x.basis(), tol);
}

// pair of interior points with prescribed graph matrices
inline std::pair<Plane, Plane> graph_pair(const SymmetricDomain& dom,
                                          const Eigen::MatrixXd& bx,
                                          const Eigen::MatrixXd& by) {
  return {dom.graph_plane(bx), dom.graph_plane(by)};
}

// random pair in the domain with singular values bounded away from 1
inline std::pair<Plane, Plane> random_pair(const SymmetricDomain& dom, SplitMix64& rng) {
  return {dom.sample_interior(rng), dom.sample_interior(rng)};
}

}  // namespace testutil
