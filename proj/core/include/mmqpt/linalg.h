// Copyright 2026 The mmqpt Authors
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

#ifndef MMQPT_LINALG_H
#define MMQPT_LINALG_H

#include <vector>

#include "mmqpt/fock.h"

namespace mmqpt {

/// max_ij |A_ij - conj(A_ji)|
double hermiticity_defect(const CMatrix &a);

/// (A + A^dagger) / 2
CMatrix hermitian_part(const CMatrix &a);

/// Principal square root of a Hermitian matrix. Eigenvalues at or below relative_cutoff times the
/// largest one are set to zero.
CMatrix hermitian_sqrt(const CMatrix &a, double relative_cutoff = 0.0);

/// A^{-1/2} for Hermitian PSD A. Eigenvalues below relative_floor * max are replaced by the floor.
CMatrix hermitian_inverse_sqrt(const CMatrix &a, double relative_floor);

/// Index sets of the decoupled diagonal blocks of a: i and j share a block when a(i, j) or a(j, i)
/// is exactly nonzero, transitively.
std::vector<std::vector<int>> decoupled_blocks(const CMatrix &a);

/// hermitian_inverse_sqrt applied to each decoupled block separately, so that the floor and the
/// eigensolver accuracy are relative to each block's own scale.
CMatrix blockwise_inverse_sqrt(const CMatrix &a, double relative_floor);

/// Clips negative eigenvalues of a Hermitian matrix to zero.
CMatrix clip_negative_eigenvalues(const CMatrix &a);

struct EigenRange {
    double min = 0;
    double max = 0;
};
EigenRange eigen_range(const CMatrix &hermitian);

/// Largest |eigenvalue| of a Hermitian matrix.
double hermitian_operator_norm(const CMatrix &a);

/// Tr over the second (less significant) factor of a (dh*dk) x (dh*dk) operator.
CMatrix partial_trace_second(const CMatrix &a, int dh, int dk);

/// (G (x) I_dk) A (G (x) I_dk)^dagger for a dh x dh matrix G.
CMatrix conjugate_by_first_factor(const CMatrix &a, const CMatrix &g, int dk);

}  // namespace mmqpt

#endif  // MMQPT_LINALG_H
