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

#ifndef LABELDP_LINALG_HPP
#define LABELDP_LINALG_HPP

#include <vector>

namespace labeldp {

// Dense square matrix, row-major. Only the small K x K label-space matrices
// go through here; K is at most a few hundred.
struct SquareMatrix {
  int size = 0;
  std::vector<double> data;  // size*size, row-major

  SquareMatrix() = default;
  explicit SquareMatrix(int k) : size(k), data(static_cast<size_t>(k) * k, 0.0) {}

  double& at(int row, int col) { return data[static_cast<size_t>(row) * size + col]; }
  double at(int row, int col) const { return data[static_cast<size_t>(row) * size + col]; }

  static SquareMatrix identity(int k);
};

// Gaussian elimination with partial pivoting. Throws std::runtime_error on a
// numerically singular input.
SquareMatrix invert(const SquareMatrix& m);

SquareMatrix multiply(const SquareMatrix& a, const SquareMatrix& b);

// Largest entrywise deviation from the identity, used for Q * Q^-1 residual
// checks.
double identity_residual(const SquareMatrix& a);

// max over columns y of sum_{y'} |a[y', y]|  (the induced 1-norm).
double max_column_abs_sum(const SquareMatrix& a);

}  // namespace labeldp

#endif  // LABELDP_LINALG_HPP
