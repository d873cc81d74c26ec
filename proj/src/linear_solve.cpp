#include "eit/linear_solve.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

namespace eit {

template <std::size_t N>
Vector<N> solve_dense(SquareMatrix<N> a, Vector<N> b, double pivot_floor) {
  double scale = 0.0;
  for (const auto& row : a)
    for (double v : row) scale = std::max(scale, std::abs(v));
  if (!(scale > 0.0) || !std::isfinite(scale)) throw SingularSystem("matrix is zero or not finite");
  const double tiny = pivot_floor * scale;

  for (std::size_t k = 0; k < N; ++k) {
    std::size_t p = k;
    for (std::size_t i = k + 1; i < N; ++i)
      if (std::abs(a[i][k]) > std::abs(a[p][k])) p = i;
    if (std::abs(a[p][k]) <= tiny) throw SingularSystem("zero pivot in column " + std::to_string(k));
    if (p != k) {
      std::swap(a[p], a[k]);
      std::swap(b[p], b[k]);
    }
    for (std::size_t i = k + 1; i < N; ++i) {
      const double m = a[i][k] / a[k][k];
      if (m == 0.0) continue;
      for (std::size_t j = k; j < N; ++j) a[i][j] -= m * a[k][j];
      b[i] -= m * b[k];
    }
  }

  Vector<N> x{};
  for (std::size_t i = N; i-- > 0;) {
    double s = b[i];
    for (std::size_t j = i + 1; j < N; ++j) s -= a[i][j] * x[j];
    x[i] = s / a[i][i];
  }
  return x;
}

template Vector<9> solve_dense<9>(SquareMatrix<9>, Vector<9>, double);
template Vector<3> solve_dense<3>(SquareMatrix<3>, Vector<3>, double);

}  // namespace eit
