#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>

namespace flagmetric {

// Error with a stable machine-readable code ("DimensionMismatch", ...).
// The CLI maps these to {code, message} JSON on the error stream.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

[[noreturn]] inline void fail(std::string code, const std::string& message) {
  throw Error(std::move(code), message);
}

// Numerical thresholds shared across the library.
//   rank_rel   relative singular-value cutoff for rank decisions
//   geom_abs   absolute tolerance for geometric predicates (memberships, roots)
//   metric_abs absolute tolerance for metric comparisons
struct Tolerance {
  double rank_rel = 1e-10;
  double geom_abs = 1e-12;
  double metric_abs = 1e-8;

  void validate() const {
    if (!(rank_rel > 0.0) || !(geom_abs > 0.0) || !(metric_abs > 0.0))
      fail("InvalidTolerance", "tolerances must be strictly positive");
    if (rank_rel > 1e-6)
      fail("InvalidTolerance", "rank_rel must be <= 1e-6");
  }
};

// Splittable counter-based generator (SplitMix64). Value semantics: copies
// advance independently, split() hands out a decorrelated child stream so
// batch drivers can partition seed space.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed, std::uint64_t gamma = kDefaultGamma)
      : state_(seed), gamma_(gamma | 1u) {}

  std::uint64_t next() {
    state_ += gamma_;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // uniform in [0, 1), 53 bits
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * uniform01(); }

  int uniform_int(int lo, int hi) {  // inclusive bounds
    return lo + static_cast<int>(next() % static_cast<std::uint64_t>(hi - lo + 1));
  }

  double normal();

  SplitMix64 split() {
    std::uint64_t s = next();
    std::uint64_t g = next() | 1u;
    return SplitMix64(s, g);
  }

  static constexpr std::uint64_t kDefaultGamma = 0x9e3779b97f4a7c15ULL;

 private:
  std::uint64_t state_;
  std::uint64_t gamma_;
};

// Number of singular values above rank_rel * sigma_max; 0 for the zero matrix.
int rank_with_tol(const Eigen::MatrixXd& m, const Tolerance& tol);

// Bisection on [lo, hi]; requires a sign change (or a zero endpoint).
// Stops when |f(t)| <= geom_abs or the bracket width is <= geom_abs, and
// always after max_iter halvings. The result stays inside [lo, hi].
double bracketed_root(const std::function<double(double)>& f, double lo, double hi,
                      const Tolerance& tol, int max_iter = 200);

struct MinimizeResult {
  Eigen::VectorXd x;
  double value = 0.0;
  int evaluations = 0;
};

// Derivative-free descent: Nelder-Mead with 3 random restarts drawn from the
// caller's RNG handle. Never returns a value above f(x0); deterministic given
// (x0, budget, rng state). Best effort, no failure mode.
MinimizeResult minimize(const std::function<double(const Eigen::VectorXd&)>& f,
                        const Eigen::VectorXd& x0, int budget, SplitMix64 rng);

}  // namespace flagmetric
