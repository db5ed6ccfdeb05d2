// Copyright 2026 The LabelDP Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "labeldp/linalg.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace labeldp {

SquareMatrix SquareMatrix::identity(int k) {
  SquareMatrix m(k);
  for (int i = 0; i < k; ++i) m.at(i, i) = 1.0;
  return m;
}

SquareMatrix invert(const SquareMatrix& m) {
  const int k = m.size;
  SquareMatrix a = m;                      // working copy, reduced in place
  SquareMatrix inv = SquareMatrix::identity(k);

  for (int col = 0; col < k; ++col) {
    int pivot = col;
    double best = std::fabs(a.at(col, col));
    for (int row = col + 1; row < k; ++row) {
      const double v = std::fabs(a.at(row, col));
      if (v > best) {
        best = v;
        pivot = row;
      }
    }
    if (!(best > 0.0) || !std::isfinite(best)) {
      throw std::runtime_error("invert: matrix is numerically singular");
    }
    if (pivot != col) {
      for (int j = 0; j < k; ++j) {
        std::swap(a.at(pivot, j), a.at(col, j));
        std::swap(inv.at(pivot, j), inv.at(col, j));
      }
    }
    const double inv_pivot = 1.0 / a.at(col, col);
    for (int j = 0; j < k; ++j) {
      a.at(col, j) *= inv_pivot;
      inv.at(col, j) *= inv_pivot;
    }
    for (int row = 0; row < k; ++row) {
      if (row == col) continue;
      const double factor = a.at(row, col);
      if (factor == 0.0) continue;
      for (int j = 0; j < k; ++j) {
        a.at(row, j) -= factor * a.at(col, j);
        inv.at(row, j) -= factor * inv.at(col, j);
      }
    }
  }
  return inv;
}

SquareMatrix multiply(const SquareMatrix& a, const SquareMatrix& b) {
  if (a.size != b.size) throw std::invalid_argument("multiply: size mismatch");
  const int k = a.size;
  SquareMatrix out(k);
  for (int i = 0; i < k; ++i) {
    for (int l = 0; l < k; ++l) {
      const double v = a.at(i, l);
      if (v == 0.0) continue;
      for (int j = 0; j < k; ++j) out.at(i, j) += v * b.at(l, j);
    }
  }
  return out;
}

double identity_residual(const SquareMatrix& a) {
  double worst = 0.0;
  for (int i = 0; i < a.size; ++i) {
    for (int j = 0; j < a.size; ++j) {
      const double target = i == j ? 1.0 : 0.0;
      worst = std::fmax(worst, std::fabs(a.at(i, j) - target));
    }
  }
  return worst;
}

double max_column_abs_sum(const SquareMatrix& a) {
  double worst = 0.0;
  for (int j = 0; j < a.size; ++j) {
    double sum = 0.0;
    for (int i = 0; i < a.size; ++i) sum += std::fabs(a.at(i, j));
    worst = std::fmax(worst, sum);
  }
  return worst;
}

}  // namespace labeldp
