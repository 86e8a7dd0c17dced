#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "holgeo/result.hpp"

namespace holgeo::detail {

/// Dense complex matrix just big enough for metric work (N <= 8 or so).
struct CMatrix {
  int n = 0;
  std::vector<Cx> a;

  explicit CMatrix(int size) : n(size), a(static_cast<size_t>(size) * size, Cx{}) {}
  Cx& at(int i, int j) { return a[static_cast<size_t>(i) * n + j]; }
  Cx at(int i, int j) const { return a[static_cast<size_t>(i) * n + j]; }
};

struct LuInverse {
  Cx det{0.0, 0.0};
  CMatrix inverse;
};

/// LU with partial pivoting; returns nullopt when a pivot is numerically
/// zero (|pivot| < 1e-300).
inline std::optional<LuInverse> invert(const CMatrix& m) {
  const int n = m.n;
  CMatrix lu = m;
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
  Cx det{1.0, 0.0};

  for (int col = 0; col < n; ++col) {
    int pivot = col;
    double best = std::abs(lu.at(col, col));
    for (int r = col + 1; r < n; ++r) {
      double v = std::abs(lu.at(r, col));
      if (v > best) {
        best = v;
        pivot = r;
      }
    }
    if (best < 1e-300) return std::nullopt;
    if (pivot != col) {
      for (int j = 0; j < n; ++j) std::swap(lu.at(pivot, j), lu.at(col, j));
      std::swap(perm[pivot], perm[col]);
      det = -det;
    }
    det *= lu.at(col, col);
    for (int r = col + 1; r < n; ++r) {
      Cx f = lu.at(r, col) / lu.at(col, col);
      lu.at(r, col) = f;
      for (int j = col + 1; j < n; ++j) lu.at(r, j) -= f * lu.at(col, j);
    }
  }

  // Solve A X = I column by column.
  LuInverse out{det, CMatrix(n)};
  std::vector<Cx> x(n), y(n);
  for (int col = 0; col < n; ++col) {
    for (int i = 0; i < n; ++i) y[i] = perm[i] == col ? Cx{1.0, 0.0} : Cx{};
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < i; ++j) y[i] -= lu.at(i, j) * y[j];
    for (int i = n - 1; i >= 0; --i) {
      x[i] = y[i];
      for (int j = i + 1; j < n; ++j) x[i] -= lu.at(i, j) * x[j];
      x[i] /= lu.at(i, i);
    }
    for (int i = 0; i < n; ++i) out.inverse.at(i, col) = x[i];
  }
  return out;
}

/// Determinant alone (same elimination, no solves).
inline std::optional<Cx> determinant(const CMatrix& m) {
  const int n = m.n;
  CMatrix lu = m;
  Cx det{1.0, 0.0};
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    double best = std::abs(lu.at(col, col));
    for (int r = col + 1; r < n; ++r) {
      double v = std::abs(lu.at(r, col));
      if (v > best) {
        best = v;
        pivot = r;
      }
    }
    if (best == 0.0) return Cx{0.0, 0.0};
    if (pivot != col) {
      for (int j = 0; j < n; ++j) std::swap(lu.at(pivot, j), lu.at(col, j));
      det = -det;
    }
    det *= lu.at(col, col);
    for (int r = col + 1; r < n; ++r) {
      Cx f = lu.at(r, col) / lu.at(col, col);
      for (int j = col + 1; j < n; ++j) lu.at(r, j) -= f * lu.at(col, j);
    }
  }
  return det;
}

}  // namespace holgeo::detail
