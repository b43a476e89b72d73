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

#ifndef MMQPT_MAXLIK_H
#define MMQPT_MAXLIK_H

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "mmqpt/fock.h"
#include "mmqpt/process_tensor.h"

namespace mmqpt {

/// The data cannot be explained by any tensor in the model space (e.g. every outcome
/// has probability below the floor).
class DataModelMismatch : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

struct QuadratureRecord {
    std::uint32_t probe_id = 0;
    std::vector<double> thetas;
    std::vector<double> xs;
    double weight = 1.0;
};

/// Homodyne records stored column-wise; record i owns thetas/xs[i*modes .. (i+1)*modes).
class QuadratureDataset {
   public:
    QuadratureDataset() = default;
    QuadratureDataset(int modes, std::vector<CoherentProbe> probes);

    int modes() const { return modes_; }
    const std::vector<CoherentProbe> &probes() const { return probes_; }
    std::size_t size() const { return probe_ids_.size(); }
    bool empty() const { return probe_ids_.empty(); }
    bool binned() const { return binned_; }
    void set_binned(bool b) { binned_ = b; }

    void reserve(std::size_t n);
    /// Throws std::invalid_argument on length mismatch, unknown probe or non-positive weight.
    void add(std::uint32_t probe_id, std::span<const double> thetas, std::span<const double> xs, double weight = 1.0);
    void add(const QuadratureRecord &r) { add(r.probe_id, r.thetas, r.xs, r.weight); }

    std::uint32_t probe_id(std::size_t i) const { return probe_ids_[i]; }
    std::span<const double> thetas(std::size_t i) const {
        return {thetas_.data() + i * modes_, static_cast<std::size_t>(modes_)};
    }
    std::span<const double> xs(std::size_t i) const {
        return {xs_.data() + i * modes_, static_cast<std::size_t>(modes_)};
    }
    double weight(std::size_t i) const { return weights_[i]; }
    QuadratureRecord record(std::size_t i) const;

    double total_weight() const;

    bool operator==(const QuadratureDataset &) const = default;

   private:
    int modes_ = 0;
    std::vector<CoherentProbe> probes_;
    std::vector<std::uint32_t> probe_ids_;
    std::vector<double> thetas_;
    std::vector<double> xs_;
    std::vector<double> weights_;
    bool binned_ = false;
};

bool operator==(const CoherentProbe &a, const CoherentProbe &b);

struct ReconstructionOptions {
    int max_iterations = 200;
    double loglik_rel_tol = 1e-8;
    /// Relative eigenvalue floor for the Lagrange operator inverse.
    double eigenvalue_floor = 1e-12;
    /// Probability-density floor in the likelihood operator denominators.
    double probability_floor = 1e-12;
    bool enforce_phase_invariance = true;
    int working_cutoff = 4;
    int report_cutoff = 2;
    /// 0 selects MMQPT_THREADS or the hardware concurrency.
    int threads = 0;
    /// Records per reduction chunk; fixes the summation order independently of threads.
    int chunk_size = 2048;

    void validate() const;
};

struct IterationDiagnostics {
    int iteration = 0;
    double log_likelihood = 0;
    double tp_defect = 0;
    double hermiticity_defect = 0;
    /// Largest |A - A^dagger| removed by the re-Hermitization of this step.
    double rehermitization_drift = 0;
    double min_eigenvalue = 0;
    double max_eigenvalue = 0;
    std::size_t clamped_probabilities = 0;
    double wall_seconds = 0;
};

struct PhysicalityLimits {
    double hermiticity = 1e-10;
    /// min eigenvalue >= -relative_min_eigenvalue * max eigenvalue
    double relative_min_eigenvalue = 1e-8;
    double tp_defect = 1e-6;
};

bool is_physical(const IterationDiagnostics &d, const PhysicalityLimits &limits = {});

struct ReconstructionResult {
    ProcessTensor tensor;
    ProcessTensor working_tensor;
    /// Data log-likelihood of E^(0), E^(1), ..., E^(iterations_run).
    std::vector<double> loglik_trace;
    int iterations_run = 0;
    double final_tp_defect = 0;
    bool converged = false;
    std::vector<IterationDiagnostics> iterations;
};

/// Tr[E |a*><a*| (x) |v><v|] = <a* (x) v| E |a* (x) v>.
double outcome_probability(const ProcessTensor &e, const StateVector &probe, const StateVector &projector);

struct LikelihoodOperator {
    CMatrix r;
    double log_likelihood = 0;
    std::size_t clamped = 0;
};

/// R = sum_i w_i |a_i*><a_i*| (x) |v_i><v_i| / p_i at the tensor E.
LikelihoodOperator accumulate_R(const ProcessTensor &e, const QuadratureDataset &data,
                                const ReconstructionOptions &opts = {});

struct LambdaOperator {
    /// Tr_K[R E R]
    CMatrix g;
    CMatrix sqrt_g;
    CMatrix inv_sqrt_g;
    int output_dim = 0;

    /// sqrt(G) (x) I_K
    CMatrix full() const;
    /// G^{-1/2} (x) I_K
    CMatrix full_inverse() const;
};

/// Throws std::logic_error when Tr_K[RER] is not Hermitian within 1e-8 (relative).
LambdaOperator lambda_operator(const CMatrix &r, const ProcessTensor &e, double eigenvalue_floor = 1e-12);

/// Sum of w ln max(p, floor) over the records.
double log_likelihood(const ProcessTensor &e, const QuadratureDataset &data, const ReconstructionOptions &opts = {});

/// One fixed-point update E -> Lambda^-1 R E R Lambda^-1. With phase invariance enforced the
/// likelihood operator is projected onto the allowed elements before the update.
ProcessTensor maxlik_step(const ProcessTensor &e, const QuadratureDataset &data,
                          const ReconstructionOptions &opts = {});

using IterationObserver = std::function<void(const IterationDiagnostics &, const ProcessTensor &)>;

/// Iterates from E^(0) = I / dim K at the working cutoff, then truncates to the report cutoff.
/// `seed` replaces E^(0) when given (must live at the working cutoff).
ReconstructionResult reconstruct(const QuadratureDataset &data, const ReconstructionOptions &opts = {},
                                 const IterationObserver &observer = {},
                                 const std::optional<ProcessTensor> &seed = std::nullopt);

/// Merges records with equal (probe, theta bins, x bins) into weighted bin centers. A zero
/// width leaves that axis unbinned.
QuadratureDataset bin_dataset(const QuadratureDataset &data, double x_bin_width, double theta_bin_width);

/// Resolves ReconstructionOptions::threads.
int resolve_thread_count(int requested);

}  // namespace mmqpt

#endif  // MMQPT_MAXLIK_H
