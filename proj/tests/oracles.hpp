#pragma once

// Test-only oracles kept independent of the library's numerical paths:
// exact rational rank / determinant sign via Gaussian elimination over GMP
// rationals, and the exterior-power matrix of minors.

#include <gmpxx.h>

#include <Eigen/Dense>

#include <vector>

namespace oracle {

using Rational = mpq_class;
using RatMatrix = std::vector<std::vector<Rational>>;

// rank by fraction-free Gaussian elimination
int exact_rank(RatMatrix m);

// sign of det (square input): -1, 0, +1
int det_sign(RatMatrix m);

// integer matrix scaled by 1/8, as exact rationals
RatMatrix from_eighths(const Eigen::MatrixXi& numerators);

Eigen::MatrixXd to_double(const RatMatrix& m);

// matrix of all p x p minors of g (rows and columns in lexicographic
// subset order): the action induced on the coordinates of p-vectors
Eigen::MatrixXd wedge_power(const Eigen::MatrixXd& g, int p);

}  // namespace oracle
