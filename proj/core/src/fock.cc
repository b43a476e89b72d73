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

#include "mmqpt/fock.h"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mmqpt {

FockSpace::FockSpace(int modes, int cutoff) : modes_(modes), cutoff_(cutoff), total_dim_(1) {
    if (modes < 1) {
        throw std::invalid_argument("FockSpace: modes must be >= 1");
    }
    if (cutoff < 0) {
        throw std::invalid_argument("FockSpace: cutoff must be >= 0");
    }
    for (int m = 0; m < modes; m++) {
        total_dim_ *= cutoff + 1;
    }
}

std::size_t flat_index(std::span<const int> idx, const FockSpace &space) {
    if (static_cast<int>(idx.size()) != space.modes()) {
        throw std::out_of_range("flat_index: multi-index length does not match mode count");
    }
    std::size_t flat = 0;
    for (int i : idx) {
        if (i < 0 || i > space.cutoff()) {
            throw std::out_of_range("flat_index: photon number " + std::to_string(i) + " outside [0, " +
                                    std::to_string(space.cutoff()) + "]");
        }
        flat = flat * space.per_mode_dim() + i;
    }
    return flat;
}

MultiIndex multi_index(std::size_t flat, const FockSpace &space) {
    if (flat >= static_cast<std::size_t>(space.total_dim())) {
        throw std::out_of_range("multi_index: flat index out of range");
    }
    MultiIndex idx(space.modes());
    for (int m = space.modes() - 1; m >= 0; m--) {
        idx[m] = static_cast<int>(flat % space.per_mode_dim());
        flat /= space.per_mode_dim();
    }
    return idx;
}

std::vector<int> photon_totals(const FockSpace &space) {
    std::vector<int> totals(space.total_dim());
    for (int f = 0; f < space.total_dim(); f++) {
        int t = 0;
        for (int i : multi_index(f, space)) {
            t += i;
        }
        totals[f] = t;
    }
    return totals;
}

double CoherentProbe::energy() const {
    double e = 0;
    for (const auto &a : amplitudes) {
        e += std::norm(a);
    }
    return e;
}

CVector coherent_fock_coeffs(Complex alpha, int cutoff) {
    CVector c(cutoff + 1);
    Complex term = std::exp(-0.5 * std::norm(alpha));
    c(0) = term;
    for (int n = 1; n <= cutoff; n++) {
        term *= alpha / std::sqrt(static_cast<double>(n));
        c(n) = term;
    }
    return c;
}

CVector kron(const CVector &a, const CVector &b) {
    CVector out(a.size() * b.size());
    for (Eigen::Index i = 0; i < a.size(); i++) {
        out.segment(i * b.size(), b.size()) = a(i) * b;
    }
    return out;
}

StateVector multimode_coherent(const CoherentProbe &probe, const FockSpace &space) {
    if (static_cast<int>(probe.amplitudes.size()) != space.modes()) {
        throw std::invalid_argument("multimode_coherent: probe has " + std::to_string(probe.amplitudes.size()) +
                                    " amplitudes, space has " + std::to_string(space.modes()) + " modes");
    }
    CVector v = coherent_fock_coeffs(probe.amplitudes[0], space.cutoff());
    for (int m = 1; m < space.modes(); m++) {
        v = kron(v, coherent_fock_coeffs(probe.amplitudes[m], space.cutoff()));
    }
    v /= v.norm();
    return {std::move(v), true};
}

void hermite_gauss_all(double x, std::span<double> out) {
    if (out.empty()) {
        return;
    }
    out[0] = std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * x * x);
    if (out.size() > 1) {
        out[1] = std::numbers::sqrt2 * x * out[0];
    }
    for (std::size_t n = 1; n + 1 < out.size(); n++) {
        double nn = static_cast<double>(n);
        out[n + 1] = x * std::sqrt(2.0 / (nn + 1)) * out[n] - std::sqrt(nn / (nn + 1)) * out[n - 1];
    }
}

double hermite_gauss(int n, double x) {
    if (n < 0) {
        throw std::invalid_argument("hermite_gauss: negative order");
    }
    std::vector<double> buf(n + 1);
    hermite_gauss_all(x, buf);
    return buf[n];
}

CVector quadrature_eigenvector(double theta, double x, int cutoff) {
    std::vector<double> psi(cutoff + 1);
    hermite_gauss_all(x, psi);
    CVector v(cutoff + 1);
    for (int n = 0; n <= cutoff; n++) {
        v(n) = std::polar(psi[n], n * theta);
    }
    return v;
}

StateVector multimode_projector_vector(std::span<const double> thetas, std::span<const double> xs,
                                       const FockSpace &space) {
    auto m = static_cast<std::size_t>(space.modes());
    if (thetas.size() != m || xs.size() != m) {
        throw std::invalid_argument("multimode_projector_vector: expected " + std::to_string(m) +
                                    " phases and quadratures");
    }
    CVector v = quadrature_eigenvector(thetas[0], xs[0], space.cutoff());
    for (std::size_t k = 1; k < m; k++) {
        v = kron(v, quadrature_eigenvector(thetas[k], xs[k], space.cutoff()));
    }
    return {std::move(v), false};
}

}  // namespace mmqpt
