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

#ifndef MMQPT_FOCK_H
#define MMQPT_FOCK_H

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace mmqpt {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

/// A truncated M-mode Fock space: every mode keeps the photon numbers 0..cutoff.
///
/// Flat indices are row-major over the per-mode photon numbers with mode 0 as the
/// most significant digit in base (cutoff + 1).
class FockSpace {
   public:
    FockSpace(int modes, int cutoff);

    int modes() const { return modes_; }
    int cutoff() const { return cutoff_; }
    int per_mode_dim() const { return cutoff_ + 1; }
    int total_dim() const { return total_dim_; }

    bool operator==(const FockSpace &other) const = default;

   private:
    int modes_;
    int cutoff_;
    int total_dim_;
};

/// Photon numbers (i_1, ..., i_M) of a multimode Fock state.
using MultiIndex = std::vector<int>;

/// Throws std::out_of_range if an entry exceeds the cutoff or the length mismatches.
std::size_t flat_index(std::span<const int> idx, const FockSpace &space);
MultiIndex multi_index(std::size_t flat, const FockSpace &space);

/// Total photon number of every flat index, in flat order.
std::vector<int> photon_totals(const FockSpace &space);

struct CoherentProbe {
    std::vector<Complex> amplitudes;
    std::string label;

    double energy() const;
};

struct StateVector {
    CVector coefficients;
    bool normalized = false;
};

/// Fock coefficients e^{-|a|^2/2} a^n / sqrt(n!) for n = 0..cutoff. Not renormalized.
CVector coherent_fock_coeffs(Complex alpha, int cutoff);

/// Tensor product of per-mode truncated coherent vectors, renormalized to unit norm.
StateVector multimode_coherent(const CoherentProbe &probe, const FockSpace &space);

/// Oscillator eigenfunction psi_n(x) with vacuum quadrature variance 1/2.
double hermite_gauss(int n, double x);

/// psi_0(x) .. psi_cutoff(x) from the normalized three-term recurrence.
void hermite_gauss_all(double x, std::span<double> out);

/// <n|x, theta> = e^{i n theta} psi_n(x), n = 0..cutoff.
CVector quadrature_eigenvector(double theta, double x, int cutoff);

/// Tensor product of per-mode quadrature eigenvectors. Improper eigenvector: not normalized.
StateVector multimode_projector_vector(std::span<const double> thetas, std::span<const double> xs,
                                       const FockSpace &space);

/// Kronecker product of vectors, first factor most significant.
CVector kron(const CVector &a, const CVector &b);

}  // namespace mmqpt

#endif  // MMQPT_FOCK_H
