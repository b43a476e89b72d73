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

#include "mmqpt/process_tensor.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "mmqpt/linalg.h"

namespace mmqpt {

namespace {

void require_same_space(const FockSpace &a, const FockSpace &b, const char *what) {
    if (!(a == b)) {
        throw ConfigMismatch(std::string(what) + ": Fock spaces differ (modes " + std::to_string(a.modes()) +
                             "/" + std::to_string(b.modes()) + ", cutoff " + std::to_string(a.cutoff()) + "/" +
                             std::to_string(b.cutoff()) + ")");
    }
}

double binomial(int n, int k) {
    double r = 1;
    for (int i = 1; i <= k; i++) {
        r = r * (n - k + i) / i;
    }
    return r;
}

Complex ipow(Complex base, int e) {
    Complex r = 1.0;
    for (int i = 0; i < e; i++) {
        r *= base;
    }
    return r;
}

double factorial(int n) {
    double r = 1;
    for (int i = 2; i <= n; i++) {
        r *= i;
    }
    return r;
}

}  // namespace

DensityMatrix pure_density(const CVector &ket, const FockSpace &space) {
    if (ket.size() != space.total_dim()) {
        throw ConfigMismatch("pure_density: ket length does not match the Fock space");
    }
    return {ket * ket.adjoint(), space};
}

DensityMatrix fock_density(std::span<const int> photons, const FockSpace &space) {
    CVector ket = CVector::Zero(space.total_dim());
    ket(flat_index(photons, space)) = 1.0;
    return pure_density(ket, space);
}

DensityMatrix coherent_density(const CoherentProbe &probe, const FockSpace &space) {
    return pure_density(multimode_coherent(probe, space).coefficients, space);
}

ProcessTensor::ProcessTensor(FockSpace space, CMatrix jamiolkowski)
    : space_(space), jamiolkowski_(std::move(jamiolkowski)) {
    const Eigen::Index d = static_cast<Eigen::Index>(space_.total_dim()) * space_.total_dim();
    if (jamiolkowski_.rows() != d || jamiolkowski_.cols() != d) {
        throw ConfigMismatch("ProcessTensor: Jamiolkowski operator must be " + std::to_string(d) + " x " +
                             std::to_string(d));
    }
}

BeamSplitterModel BeamSplitterModel::with_transmittance(double t, double global_phase) {
    if (!(t >= 0 && t <= 1)) {
        throw std::invalid_argument("BeamSplitterModel: transmittance must lie in [0, 1]");
    }
    const double quarter = std::numbers::pi / 4;
    const Complex a = std::polar(std::sqrt(t), quarter);
    const Complex b = std::polar(std::sqrt(1 - t), -quarter);
    Eigen::Matrix2cd m;
    m << a, b, b, a;
    return {m, t, global_phase};
}

BeamSplitterModel BeamSplitterModel::identity() {
    return {Eigen::Matrix2cd::Identity(), 1.0, 0.0};
}

BeamSplitterModel BeamSplitterModel::from_matrix(const Eigen::Matrix2cd &m, double global_phase) {
    double err = (m.adjoint() * m - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff();
    if (err > 1e-12) {
        throw std::invalid_argument("BeamSplitterModel: mode matrix is not unitary (defect " + std::to_string(err) +
                                    ")");
    }
    return {m, std::norm(m(0, 0)), global_phase};
}

Eigen::Matrix2cd BeamSplitterModel::effective_matrix() const {
    return std::polar(1.0, global_phase) * mode_matrix;
}

DensityMatrix apply_process(const ProcessTensor &e, const DensityMatrix &rho_in) {
    require_same_space(e.space(), rho_in.space, "apply_process");
    const int d = e.state_dim();
    CMatrix out = CMatrix::Zero(d, d);
    const CMatrix &jam = e.jamiolkowski();
    for (int n = 0; n < d; n++) {
        for (int m = 0; m < d; m++) {
            const Complex r = rho_in.matrix(n, m);
            if (r != Complex(0)) {
                out += r * jam.block(n * d, m * d, d, d);
            }
        }
    }
    return {std::move(out), e.space()};
}

CMatrix output_partial_trace(const ProcessTensor &e) {
    return partial_trace_second(e.jamiolkowski(), e.state_dim(), e.state_dim());
}

double trace_preservation_defect(const ProcessTensor &e) {
    CMatrix g = output_partial_trace(e);
    g -= CMatrix::Identity(g.rows(), g.cols());
    return hermitian_operator_norm(hermitian_part(g));
}

bool phase_allowed(std::span<const int> n, std::span<const int> m, std::span<const int> j,
                   std::span<const int> k) {
    auto sum = [](std::span<const int> v) {
        int s = 0;
        for (int x : v) {
            s += x;
        }
        return s;
    };
    return sum(j) - sum(k) == sum(n) - sum(m);
}

std::vector<std::vector<int>> phase_blocks(const FockSpace &space) {
    const auto totals = photon_totals(space);
    const int d = space.total_dim();
    std::map<int, std::vector<int>> groups;
    for (int n = 0; n < d; n++) {
        for (int j = 0; j < d; j++) {
            groups[totals[n] - totals[j]].push_back(n * d + j);
        }
    }
    std::vector<std::vector<int>> out;
    out.reserve(groups.size());
    for (auto &[charge, rows] : groups) {
        out.push_back(std::move(rows));
    }
    return out;
}

Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> phase_mask(const FockSpace &space) {
    const auto totals = photon_totals(space);
    const int d = space.total_dim();
    std::vector<int> charge(static_cast<std::size_t>(d) * d);
    for (int n = 0; n < d; n++) {
        for (int j = 0; j < d; j++) {
            charge[n * d + j] = totals[n] - totals[j];
        }
    }
    const int dd = d * d;
    Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> mask(dd, dd);
    for (int c = 0; c < dd; c++) {
        for (int r = 0; r < dd; r++) {
            mask(r, c) = charge[r] == charge[c];
        }
    }
    return mask;
}

std::size_t count_phase_allowed(const FockSpace &space) {
    std::size_t count = 0;
    for (const auto &block : phase_blocks(space)) {
        count += block.size() * block.size();
    }
    return count;
}

CMatrix phase_twirl(const CMatrix &jamiolkowski, const FockSpace &space) {
    const int d = space.total_dim();
    if (jamiolkowski.rows() != d * d || jamiolkowski.cols() != d * d) {
        throw ConfigMismatch("phase_twirl: operator size does not match the Fock space");
    }
    const auto mask = phase_mask(space);
    return mask.select(jamiolkowski, CMatrix::Zero(d * d, d * d));
}

ProcessTensor phase_twirl(const ProcessTensor &e) {
    return ProcessTensor(e.space(), phase_twirl(e.jamiolkowski(), e.space()));
}

ProcessTensor truncate_tensor(const ProcessTensor &e, int new_cutoff) {
    const FockSpace &from = e.space();
    if (new_cutoff > from.cutoff()) {
        throw std::invalid_argument("truncate_tensor: new cutoff " + std::to_string(new_cutoff) +
                                    " exceeds current cutoff " + std::to_string(from.cutoff()));
    }
    FockSpace to(from.modes(), new_cutoff);
    const int d_to = to.total_dim();
    const int d_from = from.total_dim();
    std::vector<int> embed(d_to);
    for (int f = 0; f < d_to; f++) {
        embed[f] = static_cast<int>(flat_index(multi_index(f, to), from));
    }
    std::vector<int> rows(static_cast<std::size_t>(d_to) * d_to);
    for (int n = 0; n < d_to; n++) {
        for (int j = 0; j < d_to; j++) {
            rows[n * d_to + j] = embed[n] * d_from + embed[j];
        }
    }
    CMatrix out = e.jamiolkowski()(rows, rows);
    return ProcessTensor(to, std::move(out));
}

const char *to_string(FidelityConvention c) {
    return c == FidelityConvention::kSquared ? "squared" : "unsquared";
}

double process_fidelity(const ProcessTensor &e1, const ProcessTensor &e2, FidelityConvention convention) {
    require_same_space(e1.space(), e2.space(), "process_fidelity");
    const double t1 = e1.jamiolkowski().trace().real();
    const double t2 = e2.jamiolkowski().trace().real();
    if (t1 <= 0 || t2 <= 0) {
        throw std::invalid_argument("process_fidelity: Jamiolkowski operator has non-positive trace");
    }
    // Eigenvalues at rounding level are dropped before taking roots; otherwise each contributes
    // about sqrt(eps) and near-pure tensors lose half their digits.
    auto root = [](const CMatrix &r) { return hermitian_sqrt(r, r.rows() * std::numeric_limits<double>::epsilon()); };
    const CMatrix prod = root(hermitian_part(e1.jamiolkowski()) / t1) * root(hermitian_part(e2.jamiolkowski()) / t2);
    Eigen::BDCSVD<CMatrix> svd(prod);
    double f = svd.singularValues().sum();
    f = std::clamp(f, 0.0, 1.0);
    return convention == FidelityConvention::kSquared ? f * f : f;
}

CMatrix fock_unitary(const BeamSplitterModel &model, const FockSpace &space) {
    if (space.modes() != 2) {
        throw std::invalid_argument("fock_unitary: beam splitter acts on exactly 2 modes");
    }
    const Eigen::Matrix2cd m = model.effective_matrix();
    double defect = (m.adjoint() * m - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff();
    if (defect > 1e-12) {
        throw std::invalid_argument("fock_unitary: mode matrix is not unitary");
    }
    const int cut = space.cutoff();
    const int d = space.total_dim();
    CMatrix u = CMatrix::Zero(d, d);
    // a_i^dagger -> sum_k m(k, i) a_k^dagger; k1 (k2) photons of input mode 0 (1) exit in output mode 0.
    for (int n1 = 0; n1 <= cut; n1++) {
        for (int n2 = 0; n2 <= cut; n2++) {
            const int col = n1 * (cut + 1) + n2;
            const double in_norm = std::sqrt(factorial(n1) * factorial(n2));
            for (int k1 = 0; k1 <= n1; k1++) {
                for (int k2 = 0; k2 <= n2; k2++) {
                    const int j1 = k1 + k2;
                    const int j2 = n1 + n2 - j1;
                    if (j1 > cut || j2 > cut) {
                        continue;
                    }
                    Complex c = binomial(n1, k1) * binomial(n2, k2) * ipow(m(0, 0), k1) * ipow(m(1, 0), n1 - k1) *
                                ipow(m(0, 1), k2) * ipow(m(1, 1), n2 - k2);
                    c *= std::sqrt(factorial(j1) * factorial(j2)) / in_norm;
                    u(j1 * (cut + 1) + j2, col) += c;
                }
            }
        }
    }
    return u;
}

ProcessTensor unitary_tensor(const CMatrix &u, const FockSpace &space) {
    const int d = space.total_dim();
    if (u.rows() != d || u.cols() != d) {
        throw ConfigMismatch("unitary_tensor: matrix size does not match the Fock space");
    }
    CVector w(static_cast<Eigen::Index>(d) * d);
    for (int n = 0; n < d; n++) {
        w.segment(n * d, d) = u.col(n);
    }
    return ProcessTensor(space, w * w.adjoint());
}

ProcessTensor build_bs_tensor(const BeamSplitterModel &model, const FockSpace &space) {
    return unitary_tensor(fock_unitary(model, space), space);
}

ProcessTensor identity_tensor(const FockSpace &space) {
    return unitary_tensor(CMatrix::Identity(space.total_dim(), space.total_dim()), space);
}

}  // namespace mmqpt
