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

#include "mmqpt/maxlik.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <map>
#include <thread>
#include <tuple>

#include <Eigen/Eigenvalues>

#include "mmqpt/linalg.h"

namespace mmqpt {

bool operator==(const CoherentProbe &a, const CoherentProbe &b) {
    return a.amplitudes == b.amplitudes && a.label == b.label;
}

QuadratureDataset::QuadratureDataset(int modes, std::vector<CoherentProbe> probes)
    : modes_(modes), probes_(std::move(probes)) {
    if (modes < 1) {
        throw std::invalid_argument("QuadratureDataset: modes must be >= 1");
    }
    for (const auto &p : probes_) {
        if (static_cast<int>(p.amplitudes.size()) != modes) {
            throw std::invalid_argument("QuadratureDataset: probe '" + p.label + "' has wrong mode count");
        }
    }
}

void QuadratureDataset::reserve(std::size_t n) {
    probe_ids_.reserve(n);
    thetas_.reserve(n * modes_);
    xs_.reserve(n * modes_);
    weights_.reserve(n);
}

void QuadratureDataset::add(std::uint32_t probe_id, std::span<const double> thetas, std::span<const double> xs,
                            double weight) {
    if (thetas.size() != static_cast<std::size_t>(modes_) || xs.size() != static_cast<std::size_t>(modes_)) {
        throw std::invalid_argument("QuadratureDataset::add: expected " + std::to_string(modes_) +
                                    " phases and quadratures");
    }
    if (probe_id >= probes_.size()) {
        throw std::invalid_argument("QuadratureDataset::add: unknown probe id " + std::to_string(probe_id));
    }
    if (!(weight > 0)) {
        throw std::invalid_argument("QuadratureDataset::add: weight must be positive");
    }
    probe_ids_.push_back(probe_id);
    thetas_.insert(thetas_.end(), thetas.begin(), thetas.end());
    xs_.insert(xs_.end(), xs.begin(), xs.end());
    weights_.push_back(weight);
}

QuadratureRecord QuadratureDataset::record(std::size_t i) const {
    auto t = thetas(i);
    auto x = xs(i);
    return {probe_ids_[i], {t.begin(), t.end()}, {x.begin(), x.end()}, weights_[i]};
}

double QuadratureDataset::total_weight() const {
    double s = 0;
    for (double w : weights_) {
        s += w;
    }
    return s;
}

void ReconstructionOptions::validate() const {
    if (max_iterations < 1) {
        throw std::invalid_argument("max_iterations must be >= 1");
    }
    if (!(loglik_rel_tol > 0)) {
        throw std::invalid_argument("loglik_rel_tol must be > 0");
    }
    if (working_cutoff < 0 || report_cutoff < 0 || report_cutoff > working_cutoff) {
        throw std::invalid_argument("cutoffs must satisfy 0 <= report_cutoff <= working_cutoff");
    }
    if (chunk_size < 1) {
        throw std::invalid_argument("chunk_size must be >= 1");
    }
    if (!(eigenvalue_floor > 0) || !(probability_floor > 0)) {
        throw std::invalid_argument("floors must be positive");
    }
}

int resolve_thread_count(int requested) {
    if (requested > 0) {
        return requested;
    }
    if (const char *env = std::getenv("MMQPT_THREADS")) {
        int n = std::atoi(env);
        if (n > 0) {
            return n;
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

double outcome_probability(const ProcessTensor &e, const StateVector &probe, const StateVector &projector) {
    const int d = e.state_dim();
    if (probe.coefficients.size() != d || projector.coefficients.size() != d) {
        throw ConfigMismatch("outcome_probability: vector dimensions do not match the tensor");
    }
    const CVector w = kron(probe.coefficients.conjugate(), projector.coefficients);
    return (w.adjoint() * e.jamiolkowski() * w)(0, 0).real();
}

namespace {

CMatrix kron_identity(const CMatrix &a, int dk) {
    const Eigen::Index dh = a.rows();
    CMatrix out = CMatrix::Zero(dh * dk, dh * dk);
    for (Eigen::Index n = 0; n < dh; n++) {
        for (Eigen::Index m = 0; m < dh; m++) {
            for (int j = 0; j < dk; j++) {
                out(n * dk + j, m * dk + j) = a(n, m);
            }
        }
    }
    return out;
}

template <typename F>
void parallel_for(std::size_t count, int threads, F f) {
    threads = static_cast<int>(std::min<std::size_t>(threads, count));
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; i++) {
            f(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; t++) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) {
                f(i);
            }
        });
    }
    for (auto &th : pool) {
        th.join();
    }
}

struct Chunk {
    std::uint32_t probe;
    std::vector<std::uint32_t> records;
};

struct ChunkResult {
    CMatrix s;
    double loglik = 0;
    std::size_t clamped = 0;
};

/// Precomputed per-dataset state shared by every iteration at one working cutoff.
class Engine {
   public:
    Engine(const QuadratureDataset &data, const ReconstructionOptions &opts)
        : data_(data), opts_(opts), space_(data.modes(), opts.working_cutoff), threads_(resolve_thread_count(opts.threads)) {
        opts_.validate();
        if (data.empty()) {
            throw std::invalid_argument("reconstruct: dataset is empty");
        }
        for (const auto &p : data.probes()) {
            probe_vectors_.push_back(multimode_coherent(p, space_).coefficients);
        }
        std::vector<std::vector<std::uint32_t>> by_probe(data.probes().size());
        for (std::size_t i = 0; i < data.size(); i++) {
            by_probe[data.probe_id(i)].push_back(static_cast<std::uint32_t>(i));
        }
        for (std::uint32_t p = 0; p < by_probe.size(); p++) {
            const auto &recs = by_probe[p];
            for (std::size_t start = 0; start < recs.size(); start += opts_.chunk_size) {
                std::size_t stop = std::min(recs.size(), start + static_cast<std::size_t>(opts_.chunk_size));
                chunks_.push_back({p, {recs.begin() + start, recs.begin() + stop}});
            }
        }
        if (opts_.enforce_phase_invariance) {
            blocks_ = phase_blocks(space_);
        } else {
            std::vector<int> all(static_cast<std::size_t>(jam_dim()));
            for (int i = 0; i < jam_dim(); i++) {
                all[i] = i;
            }
            blocks_.push_back(std::move(all));
        }
    }

    const FockSpace &space() const { return space_; }
    int state_dim() const { return space_.total_dim(); }
    int jam_dim() const { return state_dim() * state_dim(); }

    /// Per-probe output-space sums S_p = sum w v v^dagger / p, plus the log-likelihood.
    struct Accumulation {
        std::vector<CMatrix> s;
        double loglik = 0;
        std::size_t clamped = 0;
    };

    Accumulation accumulate(const ProcessTensor &e, bool want_s) const {
        const int d = state_dim();
        std::vector<CMatrix> sigma(probe_vectors_.size());
        for (std::size_t p = 0; p < probe_vectors_.size(); p++) {
            sigma[p] = propagate(e, probe_vectors_[p]);
        }
        std::vector<ChunkResult> partial(chunks_.size());
        parallel_for(chunks_.size(), threads_, [&](std::size_t c) {
            partial[c] = process_chunk(chunks_[c], sigma[chunks_[c].probe], want_s);
        });
        Accumulation acc;
        if (want_s) {
            acc.s.assign(probe_vectors_.size(), CMatrix::Zero(d, d));
        }
        for (std::size_t c = 0; c < chunks_.size(); c++) {
            acc.loglik += partial[c].loglik;
            acc.clamped += partial[c].clamped;
            if (want_s) {
                acc.s[chunks_[c].probe] += partial[c].s;
            }
        }
        return acc;
    }

    /// apply_process(E, |a><a|) restricted to the stored blocks of E.
    CMatrix propagate(const ProcessTensor &e, const CVector &a) const {
        if (blocks_.size() == 1) {
            return apply_process(e, pure_density(a, space_)).matrix;
        }
        const int d = state_dim();
        const CMatrix &jam = e.jamiolkowski();
        CMatrix sigma = CMatrix::Zero(d, d);
        for (const auto &idx : blocks_) {
            for (int c : idx) {
                const Complex am = std::conj(a(c / d));
                const int k = c % d;
                for (int r : idx) {
                    sigma(r % d, k) += a(r / d) * am * jam(r, c);
                }
            }
        }
        return sigma;
    }

    CMatrix assemble_r(const std::vector<CMatrix> &s) const {
        const int d = state_dim();
        CMatrix r = CMatrix::Zero(jam_dim(), jam_dim());
        for (std::size_t p = 0; p < s.size(); p++) {
            const CVector a = probe_vectors_[p].conjugate();
            for (int n = 0; n < d; n++) {
                for (int m = 0; m < d; m++) {
                    const Complex c = a(n) * std::conj(a(m));
                    if (c != Complex(0)) {
                        r.block(n * d, m * d, d, d) += c * s[p];
                    }
                }
            }
        }
        return r;
    }

    /// Block b of R = sum_p |a_p*><a_p*| (x) S_p.
    CMatrix r_block(const std::vector<CMatrix> &s, const std::vector<int> &idx) const {
        const int d = state_dim();
        const auto nb = static_cast<Eigen::Index>(idx.size());
        CMatrix rb = CMatrix::Zero(nb, nb);
        for (std::size_t p = 0; p < s.size(); p++) {
            const CVector &a = probe_vectors_[p];
            for (Eigen::Index c = 0; c < nb; c++) {
                const int m = idx[c] / d;
                const int k = idx[c] % d;
                for (Eigen::Index r = 0; r < nb; r++) {
                    const int n = idx[r] / d;
                    rb(r, c) += std::conj(a(n)) * a(m) * s[p](idx[r] % d, k);
                }
            }
        }
        return rb;
    }

    /// Tr_K of an operator given by its diagonal blocks.
    CMatrix partial_trace_blocks(const std::vector<CMatrix> &xb) const {
        const int d = state_dim();
        CMatrix g = CMatrix::Zero(d, d);
        for (std::size_t b = 0; b < blocks_.size(); b++) {
            const auto &idx = blocks_[b];
            for (std::size_t r = 0; r < idx.size(); r++) {
                for (std::size_t c = 0; c < idx.size(); c++) {
                    if (idx[r] % d == idx[c] % d) {
                        g(idx[r] / d, idx[c] / d) += xb[b](r, c);
                    }
                }
            }
        }
        return g;
    }

    /// (H (x) I) X (H (x) I)^dagger block by block; H (x) I never couples different blocks.
    void conjugate_blocks(std::vector<CMatrix> &xb, const CMatrix &h) const {
        const int d = state_dim();
        if (blocks_.size() == 1) {
            xb[0] = conjugate_by_first_factor(xb[0], h, d);
            return;
        }
        for (std::size_t b = 0; b < blocks_.size(); b++) {
            const auto &idx = blocks_[b];
            const auto nb = static_cast<Eigen::Index>(idx.size());
            CMatrix l = CMatrix::Zero(nb, nb);
            for (Eigen::Index r = 0; r < nb; r++) {
                for (Eigen::Index c = 0; c < nb; c++) {
                    if (idx[r] % d == idx[c] % d) {
                        l(r, c) = h(idx[r] / d, idx[c] / d);
                    }
                }
            }
            xb[b] = l * xb[b] * l.adjoint();
        }
    }

    struct StepOutcome {
        CMatrix next;
        double loglik_before = 0;
        std::size_t clamped = 0;
        double drift = 0;
    };

    /// E -> Lambda^-1 R E R Lambda^-1 with R restricted to the allowed blocks, followed by an
    /// exact renormalization of Tr_K against rounding.
    StepOutcome step(const ProcessTensor &e) const {
        Accumulation acc = accumulate(e, true);
        if (acc.clamped == data_.size()) {
            throw DataModelMismatch("every outcome probability is below the floor; the data cannot be explained "
                                    "by the model space");
        }
        std::vector<CMatrix> xb(blocks_.size());
        for (std::size_t b = 0; b < blocks_.size(); b++) {
            const CMatrix rb = r_block(acc.s, blocks_[b]);
            xb[b] = rb * e.jamiolkowski()(blocks_[b], blocks_[b]) * rb;
        }
        const CMatrix g = partial_trace_blocks(xb);
        check_hermitian_g(g);
        const CMatrix h = blockwise_inverse_sqrt(hermitian_part(g), opts_.eigenvalue_floor);
        const CMatrix h2 = blockwise_inverse_sqrt(hermitian_part(h * g * h.adjoint()), opts_.eigenvalue_floor);
        conjugate_blocks(xb, h2 * h);

        StepOutcome out;
        out.next = CMatrix::Zero(jam_dim(), jam_dim());
        for (std::size_t b = 0; b < blocks_.size(); b++) {
            out.drift = std::max(out.drift, hermiticity_defect(xb[b]));
            out.next(blocks_[b], blocks_[b]) = hermitian_part(xb[b]);
        }
        out.loglik_before = acc.loglik;
        out.clamped = acc.clamped;
        return out;
    }

    EigenRange spectrum(const CMatrix &e) const {
        EigenRange out{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
        for (const auto &idx : blocks_) {
            auto r = eigen_range(e(idx, idx));
            out.min = std::min(out.min, r.min);
            out.max = std::max(out.max, r.max);
        }
        return out;
    }

    static void check_hermitian_g(const CMatrix &g) {
        const double scale = std::max(g.cwiseAbs().maxCoeff(), std::numeric_limits<double>::min());
        if (hermiticity_defect(g) > 1e-8 * scale) {
            throw std::logic_error("lambda_operator: Tr_K[R E R] is not Hermitian");
        }
    }

    static LambdaOperator lambda_from_sandwich(const CMatrix &x, double floor, int dk) {
        const int dh = static_cast<int>(x.rows()) / dk;
        LambdaOperator lam;
        lam.output_dim = dk;
        lam.g = partial_trace_second(x, dh, dk);
        check_hermitian_g(lam.g);
        lam.g = hermitian_part(lam.g);
        lam.sqrt_g = hermitian_sqrt(lam.g);
        lam.inv_sqrt_g = blockwise_inverse_sqrt(lam.g, floor);
        return lam;
    }

   private:
    ChunkResult process_chunk(const Chunk &chunk, const CMatrix &sigma, bool want_s) const {
        const int modes = data_.modes();
        const int dm = space_.per_mode_dim();
        const int d = state_dim();
        const auto rows = static_cast<Eigen::Index>(chunk.records.size());
        CMatrix v(rows, d);
        std::vector<double> psi(dm);
        CVector factor(dm);
        CVector acc;
        for (Eigen::Index i = 0; i < rows; i++) {
            const std::uint32_t rec = chunk.records[i];
            auto th = data_.thetas(rec);
            auto xs = data_.xs(rec);
            for (int m = 0; m < modes; m++) {
                hermite_gauss_all(xs[m], psi);
                for (int n = 0; n < dm; n++) {
                    factor(n) = std::polar(psi[n], n * th[m]);
                }
                acc = m == 0 ? factor : kron(acc, factor);
            }
            v.row(i) = acc.transpose();
        }
        const CMatrix y = v.conjugate() * sigma;
        Eigen::VectorXd scale(rows);
        ChunkResult out;
        for (Eigen::Index i = 0; i < rows; i++) {
            double p = (y.row(i).cwiseProduct(v.row(i))).sum().real();
            if (p < opts_.probability_floor) {
                p = opts_.probability_floor;
                out.clamped++;
            }
            const double w = data_.weight(chunk.records[i]);
            out.loglik += w * std::log(p);
            scale(i) = w / p;
        }
        if (want_s) {
            const CMatrix weighted = scale.asDiagonal() * v;
            out.s = weighted.transpose() * v.conjugate();
        }
        return out;
    }

    const QuadratureDataset &data_;
    ReconstructionOptions opts_;
    FockSpace space_;
    int threads_;
    std::vector<CVector> probe_vectors_;
    std::vector<Chunk> chunks_;
    std::vector<std::vector<int>> blocks_;
};

ReconstructionOptions at_cutoff(ReconstructionOptions opts, const ProcessTensor &e) {
    opts.working_cutoff = e.space().cutoff();
    opts.report_cutoff = std::min(opts.report_cutoff, opts.working_cutoff);
    return opts;
}

void check_modes(const ProcessTensor &e, const QuadratureDataset &data) {
    if (e.space().modes() != data.modes()) {
        throw ConfigMismatch("tensor has " + std::to_string(e.space().modes()) + " modes, dataset has " +
                             std::to_string(data.modes()));
    }
}

}  // namespace

CMatrix LambdaOperator::full() const { return kron_identity(sqrt_g, output_dim); }

CMatrix LambdaOperator::full_inverse() const { return kron_identity(inv_sqrt_g, output_dim); }

LikelihoodOperator accumulate_R(const ProcessTensor &e, const QuadratureDataset &data,
                                const ReconstructionOptions &opts) {
    check_modes(e, data);
    Engine engine(data, at_cutoff(opts, e));
    auto acc = engine.accumulate(e, true);
    return {engine.assemble_r(acc.s), acc.loglik, acc.clamped};
}

LambdaOperator lambda_operator(const CMatrix &r, const ProcessTensor &e, double eigenvalue_floor) {
    const auto &jam = e.jamiolkowski();
    if (r.rows() != jam.rows() || r.cols() != jam.cols()) {
        throw ConfigMismatch("lambda_operator: R and E differ in size");
    }
    const CMatrix x = r * jam * r;
    return Engine::lambda_from_sandwich(x, eigenvalue_floor, e.state_dim());
}

double log_likelihood(const ProcessTensor &e, const QuadratureDataset &data, const ReconstructionOptions &opts) {
    check_modes(e, data);
    Engine engine(data, at_cutoff(opts, e));
    return engine.accumulate(e, false).loglik;
}

ProcessTensor maxlik_step(const ProcessTensor &e, const QuadratureDataset &data, const ReconstructionOptions &opts) {
    check_modes(e, data);
    Engine engine(data, at_cutoff(opts, e));
    return ProcessTensor(e.space(), engine.step(e).next);
}

ReconstructionResult reconstruct(const QuadratureDataset &data, const ReconstructionOptions &opts,
                                 const IterationObserver &observer, const std::optional<ProcessTensor> &seed) {
    using Clock = std::chrono::steady_clock;
    Engine engine(data, opts);
    const FockSpace &space = engine.space();
    const int dk = space.total_dim();

    CMatrix start = CMatrix::Identity(engine.jam_dim(), engine.jam_dim()) / static_cast<double>(dk);
    if (seed) {
        if (!(seed->space() == space)) {
            throw ConfigMismatch("reconstruct: seed tensor must live at the working cutoff");
        }
        start = seed->jamiolkowski();
    }
    ProcessTensor current(space, std::move(start));

    std::vector<double> trace;
    std::vector<IterationDiagnostics> diags;
    bool converged = false;
    int iterations = 0;
    for (int it = 0; it < opts.max_iterations; it++) {
        auto t0 = Clock::now();
        auto outcome = engine.step(current);
        trace.push_back(outcome.loglik_before);
        if (it > 0) {
            const double prev = trace[trace.size() - 2];
            if (std::abs(outcome.loglik_before - prev) < opts.loglik_rel_tol * std::abs(outcome.loglik_before)) {
                converged = true;
                break;
            }
        }
        current = ProcessTensor(space, std::move(outcome.next));
        iterations++;

        IterationDiagnostics d;
        d.iteration = iterations;
        d.log_likelihood = outcome.loglik_before;
        d.tp_defect = trace_preservation_defect(current);
        d.hermiticity_defect = hermiticity_defect(current.jamiolkowski());
        d.rehermitization_drift = outcome.drift;
        auto range = engine.spectrum(current.jamiolkowski());
        d.min_eigenvalue = range.min;
        d.max_eigenvalue = range.max;
        d.clamped_probabilities = outcome.clamped;
        d.wall_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
        diags.push_back(d);
        if (observer) {
            observer(d, current);
        }
    }
    if (!converged) {
        trace.push_back(engine.accumulate(current, false).loglik);
    }

    ProcessTensor report = truncate_tensor(current, opts.report_cutoff);
    const double defect = trace_preservation_defect(current);
    return {std::move(report), std::move(current), std::move(trace), iterations, defect, converged, std::move(diags)};
}

bool is_physical(const IterationDiagnostics &d, const PhysicalityLimits &limits) {
    return d.hermiticity_defect <= limits.hermiticity && d.tp_defect <= limits.tp_defect &&
           d.min_eigenvalue >= -limits.relative_min_eigenvalue * std::abs(d.max_eigenvalue);
}

QuadratureDataset bin_dataset(const QuadratureDataset &data, double x_bin_width, double theta_bin_width) {
    if (x_bin_width < 0 || theta_bin_width < 0) {
        throw std::invalid_argument("bin_dataset: widths must be non-negative");
    }
    const int modes = data.modes();
    // Key: probe id, then per-mode theta keys, then per-mode x keys. Unbinned axes use the raw value.
    using Key = std::vector<double>;
    std::map<Key, double> bins;
    auto key_of = [](double v, double w) { return w > 0 ? std::floor(v / w) : v; };
    for (std::size_t i = 0; i < data.size(); i++) {
        Key k;
        k.reserve(1 + 2 * modes);
        k.push_back(data.probe_id(i));
        for (double t : data.thetas(i)) {
            k.push_back(key_of(t, theta_bin_width));
        }
        for (double x : data.xs(i)) {
            k.push_back(key_of(x, x_bin_width));
        }
        bins[k] += data.weight(i);
    }
    QuadratureDataset out(modes, data.probes());
    out.reserve(bins.size());
    std::vector<double> th(modes), xs(modes);
    auto center = [](double key, double w) { return w > 0 ? (key + 0.5) * w : key; };
    for (const auto &[k, w] : bins) {
        for (int m = 0; m < modes; m++) {
            th[m] = center(k[1 + m], theta_bin_width);
            xs[m] = center(k[1 + modes + m], x_bin_width);
        }
        out.add(static_cast<std::uint32_t>(k[0]), th, xs, w);
    }
    out.set_binned(true);
    return out;
}

}  // namespace mmqpt
