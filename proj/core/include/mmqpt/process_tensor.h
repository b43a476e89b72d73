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

#ifndef MMQPT_PROCESS_TENSOR_H
#define MMQPT_PROCESS_TENSOR_H

#include <stdexcept>
#include <vector>

#include "mmqpt/fock.h"

namespace mmqpt {

/// Raised when two artifacts live on different Fock spaces.
class ConfigMismatch : public std::invalid_argument {
   public:
    using std::invalid_argument::invalid_argument;
};

struct DensityMatrix {
    CMatrix matrix;
    FockSpace space;
};

DensityMatrix pure_density(const CVector &ket, const FockSpace &space);
DensityMatrix fock_density(std::span<const int> photons, const FockSpace &space);
DensityMatrix coherent_density(const CoherentProbe &probe, const FockSpace &space);

/// Jamiolkowski operator of a process on a truncated Fock space.
///
/// The operator acts on H (input) (x) K (output), both equal to `space`. Row
/// index n * d + j and column index m * d + k hold the tensor element
/// E^{n,m}_{j,k}, so that rho_out[j,k] = sum_{n,m} E^{n,m}_{j,k} rho_in[n,m].
class ProcessTensor {
   public:
    ProcessTensor(FockSpace space, CMatrix jamiolkowski);

    const FockSpace &space() const { return space_; }
    const CMatrix &jamiolkowski() const { return jamiolkowski_; }
    int state_dim() const { return space_.total_dim(); }

    Complex element(std::size_t n, std::size_t m, std::size_t j, std::size_t k) const {
        const auto d = static_cast<std::size_t>(state_dim());
        return jamiolkowski_(n * d + j, m * d + k);
    }

   private:
    FockSpace space_;
    CMatrix jamiolkowski_;
};

/// Two-mode linear-optics element acting on annihilation operators as
/// a_out = e^{i global_phase} mode_matrix a_in.
struct BeamSplitterModel {
    Eigen::Matrix2cd mode_matrix;
    double transmittance = 0.5;
    double global_phase = 0.0;

    /// [[sqrt(t) e^{i pi/4}, sqrt(1-t) e^{-i pi/4}], [sqrt(1-t) e^{-i pi/4}, sqrt(t) e^{i pi/4}]].
    /// t = 1/2 gives (1/2)[[1+i, 1-i], [1-i, 1+i]].
    static BeamSplitterModel with_transmittance(double t, double global_phase = 0.0);
    static BeamSplitterModel symmetric() { return with_transmittance(0.5); }
    static BeamSplitterModel identity();
    /// Throws std::invalid_argument when the matrix is not unitary within 1e-12.
    static BeamSplitterModel from_matrix(const Eigen::Matrix2cd &m, double global_phase = 0.0);

    Eigen::Matrix2cd effective_matrix() const;
};

/// ~(E, rho): rho_out[j,k] = sum E^{n,m}_{j,k} rho_in[n,m].
DensityMatrix apply_process(const ProcessTensor &e, const DensityMatrix &rho_in);

/// Tr_K[E]: the dh x dh partial trace over the output space.
CMatrix output_partial_trace(const ProcessTensor &e);

/// || Tr_K[E] - I_H || in operator norm.
double trace_preservation_defect(const ProcessTensor &e);

/// Global phase invariance selection rule: sum(j) - sum(k) == sum(n) - sum(m).
bool phase_allowed(std::span<const int> n, std::span<const int> m, std::span<const int> j,
                   std::span<const int> k);

/// Jamiolkowski row indices grouped by the charge sum(n) - sum(j). A phase-invariant
/// operator is block diagonal in these groups.
std::vector<std::vector<int>> phase_blocks(const FockSpace &space);

/// Boolean mask over Jamiolkowski entries, true where the selection rule allows a value.
Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> phase_mask(const FockSpace &space);

std::size_t count_phase_allowed(const FockSpace &space);

/// Zeroes every element forbidden by the selection rule (average over global phase rotations).
ProcessTensor phase_twirl(const ProcessTensor &e);
CMatrix phase_twirl(const CMatrix &jamiolkowski, const FockSpace &space);

/// Keeps the elements whose indices all lie within new_cutoff. No renormalization.
ProcessTensor truncate_tensor(const ProcessTensor &e, int new_cutoff);

enum class FidelityConvention { kUnsquared, kSquared };

const char *to_string(FidelityConvention c);

/// Tr[sqrt(sqrt(r1) r2 sqrt(r1))] (optionally squared) of the trace-normalized Jamiolkowski
/// operators; negative eigenvalues are clipped to zero.
double process_fidelity(const ProcessTensor &e1, const ProcessTensor &e2,
                        FidelityConvention convention = FidelityConvention::kUnsquared);

/// Fock-basis matrix <j1 j2|U|n1 n2> of the two-mode unitary induced by the model.
CMatrix fock_unitary(const BeamSplitterModel &model, const FockSpace &space);

/// |U>><<U| for the unitary induced by the model. Requires space.modes() == 2.
ProcessTensor build_bs_tensor(const BeamSplitterModel &model, const FockSpace &space);

/// Jamiolkowski operator of a unitary process on the truncated space.
ProcessTensor unitary_tensor(const CMatrix &u, const FockSpace &space);

ProcessTensor identity_tensor(const FockSpace &space);

}  // namespace mmqpt

#endif  // MMQPT_PROCESS_TENSOR_H
