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

#include "mmqpt/simulator.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "mmqpt/linalg.h"

namespace mmqpt {

std::array<Complex, 2> bs_transform(const std::array<Complex, 2> &alphas_in, const BeamSplitterModel &model) {
    const Eigen::Matrix2cd m = model.effective_matrix();
    return {m(0, 0) * alphas_in[0] + m(0, 1) * alphas_in[1], m(1, 0) * alphas_in[0] + m(1, 1) * alphas_in[1]};
}

std::vector<double> sample_quadratures(Complex alpha, double theta, int n, std::mt19937_64 &rng) {
    if (n < 1) {
        throw std::invalid_argument("sample_quadratures: n must be >= 1");
    }
    const double mean = std::numbers::sqrt2 * (alpha * std::polar(1.0, -theta)).real();
    std::normal_distribution<double> dist(mean, std::sqrt(0.5));
    std::vector<double> out(n);
    for (auto &x : out) {
        x = dist(rng);
    }
    return out;
}

ProbeSchedule default_probe_schedule(double total_energy, int n_pairs, std::vector<std::vector<double>> lo_phase_sets) {
    if (total_energy < 0) {
        throw std::invalid_argument("default_probe_schedule: total energy must be >= 0");
    }
    const int side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n_pairs))));
    if (n_pairs < 1 || side * side != n_pairs) {
        throw std::invalid_argument("default_probe_schedule: n_pairs must be a positive perfect square");
    }
    ProbeSchedule s;
    s.total_energy = total_energy;
    const double amp = std::sqrt(total_energy);
    const double step = side > 1 ? 90.0 / (side - 1) : 0.0;
    for (int a = 0; a < side; a++) {
        for (int b = 0; b < side; b++) {
            const double gamma_deg = a * step;
            const double delta_deg = b * step;
            const double gamma = gamma_deg * std::numbers::pi / 180;
            const double delta = delta_deg * std::numbers::pi / 180;
            CoherentProbe p;
            p.amplitudes = {Complex(amp * std::cos(gamma), 0), std::polar(amp * std::sin(gamma), delta)};
            p.label = "g" + std::to_string(static_cast<int>(std::lround(gamma_deg))) + "_d" +
                      std::to_string(static_cast<int>(std::lround(delta_deg)));
            s.probes.push_back(std::move(p));
        }
    }
    s.probes.push_back({{Complex(0), Complex(0)}, "vacuum"});
    if (lo_phase_sets.empty()) {
        for (double phi : kDefaultLoPhases) {
            lo_phase_sets.push_back({phi, phi});
        }
    }
    s.lo_phase_sets = std::move(lo_phase_sets);
    return s;
}

std::mt19937_64 cell_stream(std::uint64_t seed, std::uint64_t cell) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(cell), static_cast<std::uint32_t>(cell >> 32)};
    return std::mt19937_64(seq);
}

QuadratureDataset generate_dataset(const SimulationRun &run) {
    const auto &sched = run.schedule;
    if (sched.samples_per_setting < 1) {
        throw std::invalid_argument("generate_dataset: samples_per_setting must be >= 1");
    }
    constexpr int kModes = 2;
    for (const auto &set : sched.lo_phase_sets) {
        if (set.size() != kModes) {
            throw std::invalid_argument("generate_dataset: every LO phase set needs 2 phases");
        }
    }
    QuadratureDataset data(kModes, sched.probes);
    const std::size_t n = sched.samples_per_setting;
    data.reserve(sched.probes.size() * sched.lo_phase_sets.size() * n);

    std::uint64_t cell = 0;
    std::vector<double> xs(kModes);
    for (std::uint32_t p = 0; p < sched.probes.size(); p++) {
        const auto &amps = sched.probes[p].amplitudes;
        const auto out = bs_transform({amps[0], amps[1]}, run.model);
        for (const auto &thetas : sched.lo_phase_sets) {
            auto rng = cell_stream(run.seed, cell++);
            double jitter = 0;
            if (run.phase_noise_sigma > 0) {
                jitter = std::normal_distribution<double>(0.0, run.phase_noise_sigma)(rng);
            }
            std::array<std::vector<double>, kModes> samples;
            for (int m = 0; m < kModes; m++) {
                samples[m] = sample_quadratures(out[m], thetas[m] + jitter, static_cast<int>(n), rng);
            }
            for (std::size_t i = 0; i < n; i++) {
                for (int m = 0; m < kModes; m++) {
                    xs[m] = samples[m][i];
                }
                data.add(p, thetas, xs, 1.0);
            }
        }
    }
    return data;
}

double estimate_phase_offset(double mean_x, double amplitude) {
    if (!(amplitude > 0)) {
        throw std::invalid_argument("estimate_phase_offset: phase is undefined for zero amplitude");
    }
    return std::asin(std::clamp(mean_x / (std::numbers::sqrt2 * amplitude), -1.0, 1.0));
}

FidelityStats summarize(std::vector<double> values) {
    FidelityStats s;
    s.values = std::move(values);
    if (s.values.empty()) {
        return s;
    }
    double sum = 0;
    for (double v : s.values) {
        sum += v;
    }
    s.mean = sum / s.values.size();
    double var = 0;
    for (double v : s.values) {
        var += (v - s.mean) * (v - s.mean);
    }
    s.stddev = s.values.size() > 1 ? std::sqrt(var / (s.values.size() - 1)) : 0.0;
    auto [lo, hi] = std::minmax_element(s.values.begin(), s.values.end());
    s.min = *lo;
    s.max = *hi;
    return s;
}

std::uint64_t replica_seed(std::uint64_t seed, int replica) {
    // splitmix64 step
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(replica + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

BootstrapResult bootstrap(const BeamSplitterModel &model, const ProbeSchedule &schedule,
                          const ReconstructionOptions &opts, const BootstrapOptions &boot,
                          FidelityConvention convention, const IterationObserver &observer) {
    if (boot.replicas < 2) {
        throw std::invalid_argument("bootstrap: need at least 2 replicas");
    }
    if (!boot.replica_seeds.empty() && boot.replica_seeds.size() != static_cast<std::size_t>(boot.replicas)) {
        throw std::invalid_argument("bootstrap: replica_seeds must have one entry per replica");
    }
    BootstrapResult result;
    const ProcessTensor truth = build_bs_tensor(model, FockSpace(2, opts.report_cutoff));
    std::vector<ProcessTensor> estimates;
    for (int i = 0; i < boot.replicas; i++) {
        const std::uint64_t seed = boot.replica_seeds.empty() ? replica_seed(boot.seed, i) : boot.replica_seeds[i];
        SimulationRun run{model, schedule, seed, boot.phase_noise_sigma};
        QuadratureDataset data = generate_dataset(run);
        if (boot.x_bin_width > 0) {
            data = bin_dataset(data, boot.x_bin_width, 0.0);
        }
        auto rec = reconstruct(data, opts, observer);
        result.seeds.push_back(seed);
        result.iterations.push_back(rec.iterations_run);
        estimates.push_back(std::move(rec.tensor));
    }
    std::vector<double> to_truth, pairwise;
    for (const auto &e : estimates) {
        to_truth.push_back(process_fidelity(truth, e, convention));
    }
    for (std::size_t i = 0; i < estimates.size(); i++) {
        for (std::size_t j = i + 1; j < estimates.size(); j++) {
            pairwise.push_back(process_fidelity(estimates[i], estimates[j], convention));
        }
    }
    CMatrix mean = CMatrix::Zero(truth.jamiolkowski().rows(), truth.jamiolkowski().cols());
    for (const auto &e : estimates) {
        mean += e.jamiolkowski();
    }
    mean /= static_cast<double>(estimates.size());
    const ProcessTensor mean_tensor(truth.space(), clip_negative_eigenvalues(hermitian_part(mean)));
    result.to_truth = summarize(std::move(to_truth));
    result.pairwise = summarize(std::move(pairwise));
    result.mean_tensor_fidelity = process_fidelity(mean_tensor, truth, convention);
    return result;
}

}  // namespace mmqpt
