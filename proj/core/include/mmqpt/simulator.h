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

#ifndef MMQPT_SIMULATOR_H
#define MMQPT_SIMULATOR_H

#include <array>
#include <cstdint>
#include <random>
#include <vector>

#include "mmqpt/maxlik.h"
#include "mmqpt/process_tensor.h"

namespace mmqpt {

/// Common LO phases (radians) of the three default phase settings.
inline constexpr std::array<double, 3> kDefaultLoPhases = {0.67, 2.64, 5.29};

struct ProbeSchedule {
    std::vector<CoherentProbe> probes;
    /// One LO phase per mode for every setting.
    std::vector<std::vector<double>> lo_phase_sets;
    int samples_per_setting = 30000;
    double total_energy = 0.9;
};

struct SimulationRun {
    BeamSplitterModel model = BeamSplitterModel::symmetric();
    ProbeSchedule schedule;
    std::uint64_t seed = 1;
    double phase_noise_sigma = 0.0;
};

/// e^{i global_phase} M alpha.
std::array<Complex, 2> bs_transform(const std::array<Complex, 2> &alphas_in, const BeamSplitterModel &model);

/// n draws of the quadrature at LO phase theta for the coherent state |alpha>:
/// Normal(sqrt(2) Re(alpha e^{-i theta}), 1/2).
std::vector<double> sample_quadratures(Complex alpha, double theta, int n, std::mt19937_64 &rng);

/// n_pairs probes (sqrt(E) cos g, sqrt(E) sin g e^{i d}) on a square grid of g, d in [0, 90] degrees,
/// plus the vacuum. An empty lo_phase_sets selects the three default common phases on both modes.
ProbeSchedule default_probe_schedule(double total_energy = 0.9, int n_pairs = 16,
                                     std::vector<std::vector<double>> lo_phase_sets = {});

/// Random stream for one (probe, phase-set) cell; independent of how cells are scheduled.
std::mt19937_64 cell_stream(std::uint64_t seed, std::uint64_t cell);

/// Records ordered by probe, then phase set, then sample.
QuadratureDataset generate_dataset(const SimulationRun &run);

/// arcsin(mean_x / (sqrt(2) amplitude)) with the argument clamped to [-1, 1]. The result lies in
/// [-pi/2, pi/2]; the complementary solution pi - phi has to be excluded with a second LO phase.
double estimate_phase_offset(double mean_x, double amplitude);

struct FidelityStats {
    std::vector<double> values;
    double mean = 0;
    double stddev = 0;
    double min = 0;
    double max = 0;
};

FidelityStats summarize(std::vector<double> values);

struct BootstrapOptions {
    int replicas = 5;
    std::uint64_t seed = 1;
    /// Overrides the seeds derived from `seed` when non-empty (size must equal `replicas`).
    std::vector<std::uint64_t> replica_seeds;
    double x_bin_width = 0.1;
    double phase_noise_sigma = 0.0;
};

struct BootstrapResult {
    FidelityStats to_truth;
    FidelityStats pairwise;
    double mean_tensor_fidelity = 0;
    std::vector<std::uint64_t> seeds;
    std::vector<int> iterations;
};

std::uint64_t replica_seed(std::uint64_t seed, int replica);

/// Simulate-and-reconstruct replication. Fidelities are taken at the report cutoff against the
/// model's ideal tensor; the mean replica tensor is re-Hermitized and clipped before comparison.
/// `observer` sees every iteration of every replica.
BootstrapResult bootstrap(const BeamSplitterModel &model, const ProbeSchedule &schedule,
                          const ReconstructionOptions &opts, const BootstrapOptions &boot,
                          FidelityConvention convention = FidelityConvention::kUnsquared,
                          const IterationObserver &observer = {});

}  // namespace mmqpt

#endif  // MMQPT_SIMULATOR_H
