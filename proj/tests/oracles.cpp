#include "oracles.hpp"

namespace oracle {

int exact_rank(RatMatrix m) {
  if (m.empty()) return 0;
  const std::size_t rows = m.size();
  const std::size_t cols = m[0].size();
  std::size_t rank = 0;
  for (std::size_t col = 0; col < cols && rank < rows; ++col) {
    std::size_t pivot = rank;
    while (pivot < rows && m[pivot][col] == 0) ++pivot;
    if (pivot == rows) continue;
    std::swap(m[rank], m[pivot]);
    for (std::size_t r = rank + 1; r < rows; ++r) {
      if (m[r][col] == 0) continue;
      const Rational factor = m[r][col] / m[rank][col];
      for (std::size_t c = col; c < cols; ++c) m[r][c] -= factor * m[rank][c];
    }
    ++rank;
  }
  return static_cast<int>(rank);
}

int det_sign(RatMatrix m) {
  const std::size_t n = m.size();
  int sign = 1;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && m[pivot][col] == 0) ++pivot;
    if (pivot == n) return 0;
    if (pivot != col) {
      std::swap(m[col], m[pivot]);
      sign = -sign;
    }
    if (m[col][col] < 0) sign = -sign;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (m[r][col] == 0) continue;
      const Rational factor = m[r][col] / m[col][col];
      for (std::size_t c = col; c < n; ++c) m[r][c] -= factor * m[col][c];
    }
  }
  return sign;
}

RatMatrix from_eighths(const Eigen::MatrixXi& numerators) {
  RatMatrix out(numerators.rows(), std::vector<Rational>(numerators.cols()));
  for (Eigen::Index i = 0; i < numerators.rows(); ++i)
    for (Eigen::Index j = 0; j < numerators.cols(); ++j) {
      out[i][j] = Rational(numerators(i, j), 8);
      out[i][j].canonicalize();
    }
  return out;
}

Eigen::MatrixXd to_double(const RatMatrix& m) {
  Eigen::MatrixXd out(m.size(), m.empty() ? 0 : m[0].size());
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m[i].size(); ++j) out(i, j) = m[i][j].get_d();
  return out;
}

namespace {

std::vector<std::vector<int>> subsets_lex(int n, int p) {
  std::vector<std::vector<int>> out;
  std::vector<int> idx(p);
  for (int i = 0; i < p; ++i) idx[i] = i;
  while (true) {
    out.push_back(idx);
    int i = p - 1;
    while (i >= 0 && idx[i] == n - p + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < p; ++j) idx[j] = idx[j - 1] + 1;
  }
  return out;
}

}  // namespace

Eigen::MatrixXd wedge_power(const Eigen::MatrixXd& g, int p) {
  const int n = static_cast<int>(g.rows());
  const auto subs = subsets_lex(n, p);
  Eigen::MatrixXd out(subs.size(), subs.size());
  Eigen::MatrixXd minor(p, p);
  for (std::size_t a = 0; a < subs.size(); ++a)
    for (std::size_t b = 0; b < subs.size(); ++b) {
      for (int i = 0; i < p; ++i)
        for (int j = 0; j < p; ++j) minor(i, j) = g(subs[a][i], subs[b][j]);
      out(a, b) = minor.determinant();
    }
  return out;
}

}  // namespace oracle
