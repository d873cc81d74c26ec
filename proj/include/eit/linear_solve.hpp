#pragma once

#include <array>
#include <cstddef>

#include "eit/errors.hpp"

namespace eit {

template <std::size_t N>
using SquareMatrix = std::array<std::array<double, N>, N>;

template <std::size_t N>
using Vector = std::array<double, N>;

/// Solves a * x = b by Gaussian elimination with partial pivoting.
/// Throws SingularSystem when a pivot falls below `pivot_floor` times the
/// largest absolute entry of `a`.
template <std::size_t N>
Vector<N> solve_dense(SquareMatrix<N> a, Vector<N> b, double pivot_floor = 1e-14);

template <std::size_t N>
Vector<N> multiply(const SquareMatrix<N>& a, const Vector<N>& x) {
  Vector<N> y{};
  for (std::size_t i = 0; i < N; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < N; ++j) s += a[i][j] * x[j];
    y[i] = s;
  }
  return y;
}

extern template Vector<9> solve_dense<9>(SquareMatrix<9>, Vector<9>, double);

}  // namespace eit
