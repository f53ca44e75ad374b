#include "flagmetric/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace flagmetric {

double SplitMix64::normal() {
  // Box-Muller; draws two uniforms per call so copies of the generator stay
  // in lockstep regardless of call pattern.
  double u1 = uniform01();
  double u2 = uniform01();
  while (u1 <= 0.0) u1 = uniform01();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

int rank_with_tol(const Eigen::MatrixXd& m, const Tolerance& tol) {
  if (m.rows() == 0 || m.cols() == 0)
    fail("DimensionMismatch", "rank_with_tol: empty matrix");
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& sv = svd.singularValues();
  const double cutoff = tol.rank_rel * sv(0);
  int r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > cutoff && sv(i) > 0.0) ++r;
  return r;
}

double bracketed_root(const std::function<double(double)>& f, double lo, double hi,
                      const Tolerance& tol, int max_iter) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0))
    fail("NoSignChange", "bracketed_root: f(lo) and f(hi) have the same sign");
  double a = lo, b = hi, fa = flo;
  for (int it = 0; it < max_iter; ++it) {
    const double mid = 0.5 * (a + b);
    if (mid == a || mid == b) break;  // bracket at ulp resolution
    const double fm = f(mid);
    if (std::abs(fm) <= tol.geom_abs) return mid;
    if ((fm > 0.0) == (fa > 0.0)) {
      a = mid;
      fa = fm;
    } else {
      b = mid;
    }
    if (b - a <= tol.geom_abs) break;
  }
  return 0.5 * (a + b);
}

namespace {

struct SimplexPoint {
  Eigen::VectorXd x;
  double value;
};

// One Nelder-Mead run; returns when the evaluation budget is exhausted or the
// simplex has collapsed. Updates `best` as a side effect.
void nelder_mead_run(const std::function<double(const Eigen::VectorXd&)>& f,
                     const Eigen::VectorXd& start, double scale, int budget,
                     int* evals_used, SimplexPoint* best) {
  const int n = static_cast<int>(start.size());
  auto eval = [&](const Eigen::VectorXd& x) {
    ++*evals_used;
    double v = f(x);
    if (!std::isfinite(v)) v = std::numeric_limits<double>::max();
    if (v < best->value) *best = {x, v};
    return v;
  };

  std::vector<SimplexPoint> s;
  s.reserve(n + 1);
  s.push_back({start, eval(start)});
  for (int i = 0; i < n && *evals_used < budget; ++i) {
    Eigen::VectorXd xi = start;
    xi(i) += scale * std::max(1.0, std::abs(start(i)));
    s.push_back({xi, eval(xi)});
  }
  if (static_cast<int>(s.size()) < n + 1) return;

  const double alpha = 1.0, gamma = 2.0, rho = 0.5, sigma = 0.5;
  while (*evals_used < budget) {
    std::sort(s.begin(), s.end(),
              [](const SimplexPoint& a, const SimplexPoint& b) { return a.value < b.value; });
    double spread = 0.0;
    for (int i = 0; i < n; ++i) spread = std::max(spread, (s[i].x - s[n].x).norm());
    if (spread < 1e-14 && std::abs(s[0].value - s[n].value) < 1e-15) break;

    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < n; ++i) centroid += s[i].x;
    centroid /= n;

    Eigen::VectorXd xr = centroid + alpha * (centroid - s[n].x);
    double fr = eval(xr);
    if (fr < s[0].value) {
      Eigen::VectorXd xe = centroid + gamma * (xr - centroid);
      double fe = eval(xe);
      s[n] = fe < fr ? SimplexPoint{xe, fe} : SimplexPoint{xr, fr};
    } else if (fr < s[n - 1].value) {
      s[n] = {xr, fr};
    } else {
      Eigen::VectorXd xc = centroid + rho * (s[n].x - centroid);
      double fc = eval(xc);
      if (fc < s[n].value) {
        s[n] = {xc, fc};
      } else {
        for (int i = 1; i <= n && *evals_used < budget; ++i) {
          s[i].x = s[0].x + sigma * (s[i].x - s[0].x);
          s[i].value = eval(s[i].x);
        }
      }
    }
  }
}

}  // namespace

MinimizeResult minimize(const std::function<double(const Eigen::VectorXd&)>& f,
                        const Eigen::VectorXd& x0, int budget, SplitMix64 rng) {
  int evals = 0;
  double v0 = f(x0);
  ++evals;
  if (!std::isfinite(v0)) v0 = std::numeric_limits<double>::max();
  SimplexPoint best{x0, v0};
  if (x0.size() == 0 || budget <= 1) return {best.x, best.value, evals};

  const int kRestarts = 3;
  const int per_run = std::max(1, (budget - 1) / (kRestarts + 1));

  nelder_mead_run(f, x0, 0.1, std::min(budget, evals + per_run), &evals, &best);
  for (int r = 0; r < kRestarts && evals < budget; ++r) {
    Eigen::VectorXd start = best.x;
    for (Eigen::Index i = 0; i < start.size(); ++i)
      start(i) += 0.25 * rng.uniform(-1.0, 1.0) * std::max(1.0, std::abs(start(i)));
    nelder_mead_run(f, start, 0.05, std::min(budget, evals + per_run), &evals, &best);
  }
  return {best.x, best.value, evals};
}

}  // namespace flagmetric
