#ifndef ELA_LINALG_HPP
#define ELA_LINALG_HPP

#include <cstddef>
#include <vector>

#include "ela/errors.hpp"

namespace ela {

using Vec = std::vector<double>;

// Dense row-major matrix, just big enough for the toy stacks here.
struct Mat {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;

  Mat() = default;
  Mat(int r, int c) : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, 0.0) {}

  double& at(int r, int c) { return data[static_cast<std::size_t>(r) * cols + c]; }
  double at(int r, int c) const { return data[static_cast<std::size_t>(r) * cols + c]; }
};

inline Vec matvec(const Mat& m, const Vec& x) {
  if (x.size() != static_cast<std::size_t>(m.cols)) {
    throw StructuralError("matvec dimension mismatch");
  }
  Vec y(static_cast<std::size_t>(m.rows), 0.0);
  for (int r = 0; r < m.rows; ++r) {
    double sum = 0.0;
    const double* row = &m.data[static_cast<std::size_t>(r) * m.cols];
    for (int c = 0; c < m.cols; ++c) sum += row[c] * x[static_cast<std::size_t>(c)];
    y[static_cast<std::size_t>(r)] = sum;
  }
  return y;
}

// y += M^T x
inline void add_matvec_transposed(const Mat& m, const Vec& x, Vec& y) {
  for (int r = 0; r < m.rows; ++r) {
    const double xr = x[static_cast<std::size_t>(r)];
    if (xr == 0.0) continue;
    const double* row = &m.data[static_cast<std::size_t>(r) * m.cols];
    for (int c = 0; c < m.cols; ++c) y[static_cast<std::size_t>(c)] += row[c] * xr;
  }
}

// M += g x^T
inline void add_outer(Mat& m, const Vec& g, const Vec& x) {
  for (int r = 0; r < m.rows; ++r) {
    const double gr = g[static_cast<std::size_t>(r)];
    if (gr == 0.0) continue;
    double* row = &m.data[static_cast<std::size_t>(r) * m.cols];
    for (int c = 0; c < m.cols; ++c) row[c] += gr * x[static_cast<std::size_t>(c)];
  }
}

inline double dot(const double* a, const double* b, int n) {
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += a[i] * b[i];
  return sum;
}

}  // namespace ela

#endif  // ELA_LINALG_HPP
