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

#include "mmqpt/linalg.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace mmqpt {

double hermiticity_defect(const CMatrix &a) {
    if (a.size() == 0) {
        return 0;
    }
    return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

CMatrix hermitian_part(const CMatrix &a) { return 0.5 * (a + a.adjoint()); }

namespace {

template <typename F>
CMatrix spectral_map(const CMatrix &a, F f) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(a);
    if (es.info() != Eigen::Success) {
        throw std::runtime_error("Hermitian eigendecomposition failed");
    }
    Eigen::VectorXd w = es.eigenvalues();
    double wmax = w.size() ? w.cwiseAbs().maxCoeff() : 0.0;
    for (Eigen::Index i = 0; i < w.size(); i++) {
        w(i) = f(w(i), wmax);
    }
    const CMatrix &v = es.eigenvectors();
    return v * w.asDiagonal() * v.adjoint();
}

}  // namespace

CMatrix hermitian_sqrt(const CMatrix &a, double relative_cutoff) {
    return spectral_map(a, [relative_cutoff](double w, double wmax) {
        return w > std::max(relative_cutoff * wmax, 0.0) ? std::sqrt(w) : 0.0;
    });
}

CMatrix hermitian_inverse_sqrt(const CMatrix &a, double relative_floor) {
    return spectral_map(a, [relative_floor](double w, double wmax) {
        double floor = relative_floor * wmax;
        if (floor <= 0) {
            floor = relative_floor;
        }
        return 1.0 / std::sqrt(std::max(w, floor));
    });
}

std::vector<std::vector<int>> decoupled_blocks(const CMatrix &a) {
    const auto n = static_cast<int>(a.rows());
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int i) {
        while (parent[i] != i) {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        return i;
    };
    for (int i = 0; i < n; i++) {
        for (int j = 0; j < n; j++) {
            if (a(i, j) != Complex(0)) {
                parent[find(i)] = find(j);
            }
        }
    }
    std::vector<std::vector<int>> blocks;
    std::vector<int> slot(n, -1);
    for (int i = 0; i < n; i++) {
        const int root = find(i);
        if (slot[root] < 0) {
            slot[root] = static_cast<int>(blocks.size());
            blocks.emplace_back();
        }
        blocks[slot[root]].push_back(i);
    }
    return blocks;
}

CMatrix blockwise_inverse_sqrt(const CMatrix &a, double relative_floor) {
    CMatrix out = CMatrix::Zero(a.rows(), a.cols());
    for (const auto &idx : decoupled_blocks(a)) {
        out(idx, idx) = hermitian_inverse_sqrt(a(idx, idx), relative_floor);
    }
    return out;
}

CMatrix clip_negative_eigenvalues(const CMatrix &a) {
    return spectral_map(a, [](double w, double) { return std::max(w, 0.0); });
}

EigenRange eigen_range(const CMatrix &hermitian) {
    if (hermitian.size() == 0) {
        return {};
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian, Eigen::EigenvaluesOnly);
    const auto &w = es.eigenvalues();
    return {w.minCoeff(), w.maxCoeff()};
}

double hermitian_operator_norm(const CMatrix &a) {
    auto r = eigen_range(a);
    return std::max(std::abs(r.min), std::abs(r.max));
}

CMatrix partial_trace_second(const CMatrix &a, int dh, int dk) {
    CMatrix out = CMatrix::Zero(dh, dh);
    for (int n = 0; n < dh; n++) {
        for (int m = 0; m < dh; m++) {
            out(n, m) = a.block(n * dk, m * dk, dk, dk).trace();
        }
    }
    return out;
}

CMatrix conjugate_by_first_factor(const CMatrix &a, const CMatrix &g, int dk) {
    const Eigen::Index dh = g.rows();
    const Eigen::Index d = dh * dk;
    using StridedMap = Eigen::Map<const CMatrix, 0, Eigen::Stride<Eigen::Dynamic, Eigen::Dynamic>>;
    using StridedMapMut = Eigen::Map<CMatrix, 0, Eigen::Stride<Eigen::Dynamic, Eigen::Dynamic>>;
    // Column-major storage: rows j, j+dk, j+2dk, ... form a strided dh x d view.
    CMatrix left(d, d);
    for (int j = 0; j < dk; j++) {
        StridedMap src(a.data() + j, dh, d, Eigen::Stride<Eigen::Dynamic, Eigen::Dynamic>(d, dk));
        StridedMapMut dst(left.data() + j, dh, d, Eigen::Stride<Eigen::Dynamic, Eigen::Dynamic>(d, dk));
        dst.noalias() = g * src;
    }
    CMatrix out(d, d);
    const CMatrix gh = g.adjoint();
    for (int k = 0; k < dk; k++) {
        StridedMap src(left.data() + k * d, d, dh, Eigen::Stride<Eigen::Dynamic, Eigen::Dynamic>(d * dk, 1));
        StridedMapMut dst(out.data() + k * d, d, dh, Eigen::Stride<Eigen::Dynamic, Eigen::Dynamic>(d * dk, 1));
        dst.noalias() = src * gh;
    }
    return out;
}

}  // namespace mmqpt
