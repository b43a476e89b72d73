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

#include <gtest/gtest.h>

#include <array>
#include <numbers>
#include <random>

#include "oracles.h"

using namespace mmqpt;

TEST(FockSpace, Dimensions) {
    FockSpace s(2, 4);
    EXPECT_EQ(s.per_mode_dim(), 5);
    EXPECT_EQ(s.total_dim(), 25);
    EXPECT_EQ(FockSpace(3, 2).total_dim(), 27);
    EXPECT_EQ(FockSpace(1, 0).total_dim(), 1);
    EXPECT_THROW(FockSpace(0, 4), std::invalid_argument);
    EXPECT_THROW(FockSpace(2, -1), std::invalid_argument);
}

TEST(FockIndex, Examples) {
    FockSpace s(2, 4);
    EXPECT_EQ(flat_index(std::array{0, 0}, s), 0u);
    EXPECT_EQ(flat_index(std::array{1, 2}, s), 7u);
    EXPECT_EQ(flat_index(std::array{4, 4}, s), 24u);
}

TEST(FockIndex, Bijection) {
    for (auto [modes, cutoff] : {std::pair{2, 4}, std::pair{3, 2}, std::pair{1, 6}}) {
        FockSpace s(modes, cutoff);
        for (int i = 0; i < s.total_dim(); i++) {
            const MultiIndex idx = multi_index(i, s);
            ASSERT_EQ(static_cast<int>(idx.size()), modes);
            for (int v : idx) {
                EXPECT_LE(v, cutoff);
            }
            EXPECT_EQ(flat_index(idx, s), static_cast<std::size_t>(i));
        }
    }
}

TEST(FockIndex, Rejects) {
    FockSpace s(2, 4);
    EXPECT_THROW(flat_index(std::array{5, 0}, s), std::out_of_range);
    EXPECT_THROW(flat_index(std::array{0, -1}, s), std::out_of_range);
    EXPECT_THROW(flat_index(std::array{0, 0, 0}, s), std::out_of_range);
    EXPECT_THROW(multi_index(25, s), std::out_of_range);
}

TEST(FockIndex, PhotonTotals) {
    FockSpace s(2, 2);
    const std::vector<int> expected = {0, 1, 2, 1, 2, 3, 2, 3, 4};
    EXPECT_EQ(photon_totals(s), expected);
}

TEST(Coherent, Vacuum) {
    CVector c = coherent_fock_coeffs(0.0, 4);
    ASSERT_EQ(c.size(), 5);
    EXPECT_EQ(c(0), Complex(1));
    for (int n = 1; n < 5; n++) {
        EXPECT_EQ(c(n), Complex(0));
    }
}

TEST(Coherent, MatchesHighPrecisionValues) {
    // e^{-|a|^2/2} a^n / sqrt(n!) for a = sqrt(0.9), 40-digit evaluation.
    const double expected[] = {0.63762815162177329314, 0.60490717781039695702, 0.4057840708984799964,
                               0.22225708910737311304, 0.10542579415474482553};
    CVector c = coherent_fock_coeffs(std::sqrt(0.9), 4);
    for (int n = 0; n < 5; n++) {
        EXPECT_NEAR(c(n).real(), expected[n], 1e-15) << n;
        EXPECT_EQ(c(n).imag(), 0.0);
    }
    EXPECT_NEAR(c(0).real(), std::exp(-0.45), 1e-15);
}

TEST(Coherent, TruncatedNorm) {
    // sum_{n<=4} e^{-0.9} 0.9^n / n!
    EXPECT_NEAR(coherent_fock_coeffs(std::sqrt(0.9), 4).squaredNorm(), 0.99765587743372237321, 1e-14);
    // Equal split over two modes keeps more than 0.999 of the norm.
    EXPECT_GT(coherent_fock_coeffs(std::sqrt(0.45), 4).squaredNorm(), 0.999);
}

TEST(Coherent, PhaseOfAmplitude) {
    const Complex a = std::polar(0.8, 1.1);
    CVector c = coherent_fock_coeffs(a, 6);
    for (int n = 1; n <= 6; n++) {
        EXPECT_NEAR(std::arg(c(n) / c(n - 1)), std::arg(a), 1e-12);
    }
}

TEST(Multimode, VacuumIsFirstBasisVector) {
    FockSpace s(2, 4);
    StateVector v = multimode_coherent({{0.0, 0.0}, ""}, s);
    EXPECT_TRUE(v.normalized);
    EXPECT_EQ(v.coefficients(0), Complex(1));
    EXPECT_NEAR(v.coefficients.tail(24).norm(), 0.0, 0.0);
}

TEST(Multimode, ProductWithVacuum) {
    FockSpace s(2, 4);
    const Complex a(0.6, -0.5);
    StateVector v = multimode_coherent({{a, 0.0}, ""}, s);
    CVector e0 = CVector::Zero(5);
    e0(0) = 1;
    CVector expected = kron(coherent_fock_coeffs(a, 4), e0);
    expected.normalize();
    EXPECT_NEAR((v.coefficients - expected).norm(), 0.0, 1e-14);
}

TEST(Multimode, UnitNorm) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-1.2, 1.2);
    FockSpace s(2, 4);
    for (int i = 0; i < 50; i++) {
        StateVector v = multimode_coherent({{Complex(u(rng), u(rng)), Complex(u(rng), u(rng))}, ""}, s);
        EXPECT_NEAR(v.coefficients.norm(), 1.0, 1e-12);
    }
    EXPECT_THROW(multimode_coherent({{0.1}, ""}, s), std::invalid_argument);
}

TEST(Multimode, CoherentOverlap) {
    FockSpace s(1, 4);
    auto overlap = [&](Complex a, Complex b) {
        const CVector va = multimode_coherent({{a}, ""}, s).coefficients;
        const CVector vb = multimode_coherent({{b}, ""}, s).coefficients;
        return std::norm(vb.dot(va));
    };
    double worst_small = 0;
    double worst_unit = 0;
    for (double r1 : {0.0, 0.25, 0.5, 0.75, 1.0}) {
        for (double r2 : {0.0, 0.25, 0.5, 0.75, 1.0}) {
            for (int p1 = 0; p1 < 12; p1++) {
                for (int p2 = 0; p2 < 12; p2++) {
                    const Complex a = std::polar(r1, p1 * std::numbers::pi / 6);
                    const Complex b = std::polar(r2, p2 * std::numbers::pi / 6);
                    const double dev = std::abs(overlap(a, b) - std::exp(-std::norm(a - b)));
                    worst_unit = std::max(worst_unit, dev);
                    const Complex as = a * 0.7, bs = b * 0.7;
                    worst_small =
                        std::max(worst_small, std::abs(overlap(as, bs) - std::exp(-std::norm(as - bs))));
                }
            }
        }
    }
    EXPECT_LT(worst_small, 1e-3);
    // Truncation error on the unit disc, frozen from an independent numpy evaluation.
    EXPECT_NEAR(worst_unit, 0.009386736990423583, 1e-12);
}

TEST(HermiteGauss, ClosedForms) {
    EXPECT_EQ(hermite_gauss(1, 0.0), 0.0);
    EXPECT_NEAR(hermite_gauss(0, 0.0), 0.75112554446494248286, 1e-16);
    EXPECT_NEAR(hermite_gauss(0, 1.3), std::pow(std::numbers::pi, -0.25) * std::exp(-0.845), 1e-16);
}

TEST(HermiteGauss, MatchesExplicitPolynomial) {
    for (int n = 0; n <= 12; n++) {
        for (double x = -6; x <= 6; x += 0.37) {
            EXPECT_NEAR(hermite_gauss(n, x), oracle::hermite_function(n, x), 1e-13) << n << " " << x;
        }
    }
    std::array<double, 13> all{};
    hermite_gauss_all(2.1, all);
    for (int n = 0; n <= 12; n++) {
        EXPECT_EQ(all[n], hermite_gauss(n, 2.1));
    }
}

TEST(HermiteGauss, Orthonormal) {
    for (int n = 0; n <= 8; n++) {
        for (int m = 0; m <= n; m++) {
            const double v =
                oracle::trapezoid([&](double x) { return hermite_gauss(n, x) * hermite_gauss(m, x); }, -8, 8, 2001);
            EXPECT_NEAR(v, n == m ? 1.0 : 0.0, 1e-8) << n << " " << m;
        }
    }
}

TEST(Quadrature, PhaseConvention) {
    const CVector v0 = quadrature_eigenvector(0.0, 0.4, 4);
    const CVector vpi = quadrature_eigenvector(std::numbers::pi, 0.4, 4);
    for (int n = 0; n <= 4; n++) {
        EXPECT_EQ(v0(n).imag(), 0.0);
        EXPECT_NEAR(v0(n).real(), hermite_gauss(n, 0.4), 1e-16);
        EXPECT_NEAR(std::abs(vpi(n) - (n % 2 ? -1.0 : 1.0) * hermite_gauss(n, 0.4)), 0.0, 1e-15);
    }
    const CVector v = quadrature_eigenvector(0.7, -0.2, 3);
    EXPECT_NEAR(std::abs(v(2) - std::polar(hermite_gauss(2, -0.2), 1.4)), 0.0, 1e-16);
}

namespace {

struct Moments {
    double mass, mean, variance;
};

Moments quadrature_moments(Complex alpha, double theta) {
    const CVector c = coherent_fock_coeffs(alpha, 20);
    auto density = [&](double x) { return std::norm(quadrature_eigenvector(theta, x, 20).dot(c)); };
    const double mass = oracle::trapezoid(density, -10, 10, 4001);
    const double mean = oracle::trapezoid([&](double x) { return x * density(x); }, -10, 10, 4001) / mass;
    const double second = oracle::trapezoid([&](double x) { return x * x * density(x); }, -10, 10, 4001) / mass;
    return {mass, mean, second - mean * mean};
}

}  // namespace

TEST(Quadrature, CoherentStatistics) {
    for (Complex alpha : {Complex(0.9, 0), Complex(0, 0), std::polar(1.0, 0.8), std::polar(0.5, -2.0)}) {
        for (double theta : {0.0, 0.67, 2.64, 5.29}) {
            const Moments m = quadrature_moments(alpha, theta);
            EXPECT_NEAR(m.mass, 1.0, 1e-3);
            EXPECT_NEAR(m.mean, std::numbers::sqrt2 * std::abs(alpha) * std::cos(theta - std::arg(alpha)), 1e-3);
            EXPECT_NEAR(m.variance, 0.5, 1e-3);
        }
    }
}

TEST(Quadrature, FockStateVariance) {
    for (int n = 0; n <= 4; n++) {
        const double var = oracle::trapezoid([&](double x) { return x * x * std::pow(hermite_gauss(n, x), 2); },
                                             -10, 10, 4001);
        EXPECT_NEAR(var, n + 0.5, 1e-8);
    }
}

TEST(Quadrature, Completeness) {
    const int cutoff = 4;
    CMatrix sum = CMatrix::Zero(cutoff + 1, cutoff + 1);
    const double dx = 0.01;
    for (int i = 0; i <= 1600; i++) {
        const double x = -8 + i * dx;
        const CVector v = quadrature_eigenvector(1.1, x, cutoff);
        sum += v * v.adjoint() * dx;
    }
    EXPECT_LT((sum - CMatrix::Identity(cutoff + 1, cutoff + 1)).cwiseAbs().maxCoeff(), 1e-3);
}

TEST(Projector, SingleModeReducesToQuadratureEigenvector) {
    FockSpace s(1, 4);
    const std::array th{0.3};
    const std::array xs{-0.9};
    StateVector v = multimode_projector_vector(th, xs, s);
    EXPECT_FALSE(v.normalized);
    EXPECT_EQ((v.coefficients - quadrature_eigenvector(0.3, -0.9, 4)).norm(), 0.0);
}

TEST(Projector, ModeSwapPermutesFactors) {
    FockSpace s(2, 3);
    const std::array th{0.3, 2.2};
    const std::array xs{-0.9, 0.4};
    const std::array th_s{2.2, 0.3};
    const std::array xs_s{0.4, -0.9};
    const CVector a = multimode_projector_vector(th, xs, s).coefficients;
    const CVector b = multimode_projector_vector(th_s, xs_s, s).coefficients;
    for (int j1 = 0; j1 <= 3; j1++) {
        for (int j2 = 0; j2 <= 3; j2++) {
            EXPECT_EQ(a(flat_index(std::array{j1, j2}, s)), b(flat_index(std::array{j2, j1}, s)));
        }
    }
    EXPECT_NEAR((a - kron(quadrature_eigenvector(0.3, -0.9, 3), quadrature_eigenvector(2.2, 0.4, 3))).norm(), 0,
                1e-15);
}

TEST(Projector, Rejects) {
    FockSpace s(2, 3);
    const std::array one{0.1};
    const std::array two{0.1, 0.2};
    EXPECT_THROW(multimode_projector_vector(one, two, s), std::invalid_argument);
}
