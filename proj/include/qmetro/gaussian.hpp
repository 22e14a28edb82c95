// Copyright 2026 The qmetro Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QMETRO_GAUSSIAN_HPP_
#define QMETRO_GAUSSIAN_HPP_

#include <vector>

#include "qmetro/types.hpp"

// Covariance-matrix representation of bosonic Gaussian states in shot-noise
// 1/2 units ([q,p] = i): the vacuum quadrature variance is 1/2 and a thermal
// state of mean photon number n has variance mu = n + 1/2 per quadrature.

namespace qmetro {

// Numerical tolerances shared by the validation predicates.
inline constexpr double kSymmetryTol = 1e-12;    // max abs asymmetry of a CM
inline constexpr double kPhysicalityTol = 1e-10; // slack on nu >= 1/2

// A Gaussian state: first moments, covariance matrix, and quadrature layout.
// States produced by this library are stored mode-major; reorder() converts.
struct GaussianState {
    Eigen::VectorXd mean;
    Eigen::MatrixXd cov;
    int n_modes = 0;
    Ordering ordering = Ordering::ModeMajor;

    // Validates dimensions, symmetry (1e-12) and physicality (nu >= 1/2 - 1e-10).
    static GaussianState make(Eigen::VectorXd mean, Eigen::MatrixXd cov,
                              Ordering ordering = Ordering::ModeMajor);
};

// Parameters of a correlated-thermal two-mode source: a thermal state of mean
// photon number n_high and one of n_low mixed on a beam splitter of
// transmissivity eta.
struct SourceSpec {
    double eta;
    double n_high;
    double n_low;

    // Signal energy on mode A: eta*n_high + (1-eta)*n_low.
    double n_signal() const { return eta * n_high + (1.0 - eta) * n_low; }
};

// A two-mode CM of the block form
//   [[a, 0, c1, 0 ],
//    [0, a, 0,  c2],
//    [c1,0, b,  0 ],
//    [0, c2,0,  b ]]   (mode-major),
// i.e. equal q/p variances per mode and diagonal cross-covariance (qq = c1,
// pp = c2). Sources have c1 = c2; evolved states may not.
struct TwoModeCov {
    double a;
    double b;
    double c1;
    double c2;
};

// Symplectic form for n modes in the requested ordering: direct sum of
// [[0,1],[-1,0]] blocks (mode-major) or [[0,I],[-I,0]] (quadrature-major).
Eigen::MatrixXd symplectic_form(int n_modes, Ordering ordering);

// Single-mode thermal state: zero mean, cov (n_bar + 1/2) I.
GaussianState thermal_state(double n_bar);

// Single-mode coherent state: cov I/2 and mean of squared length 2*n_bar
// pointing along `phase`, i.e. mean = sqrt(2 n_bar) (cos phase, sin phase).
GaussianState coherent_state(double n_bar, double phase);

// Two-mode beam splitter of transmissivity eta, mode-major 4x4:
//   S = [[ sqrt(eta) I,   sqrt(1-eta) I],
//        [-sqrt(1-eta) I, sqrt(eta) I  ]].
// The sign convention makes the correlated-thermal cross-covariance
// c = sqrt(eta(1-eta)) (mu_L - mu_H) <= 0.
Eigen::MatrixXd beam_splitter(double eta);

// Correlated-thermal source as a closed-form block CM:
//   a = eta mu_H + (1-eta) mu_L,  b = eta mu_L + (1-eta) mu_H,
//   c1 = c2 = sqrt(eta(1-eta)) (mu_L - mu_H),   mu_X = n_X + 1/2.
TwoModeCov source_cov(const SourceSpec& spec);

// The same source as a zero-mean two-mode GaussianState (mode-major).
GaussianState make_source(const SourceSpec& spec);

// Solves eta*n_high + (1-eta)*n_low = n_signal for n_high.
SourceSpec source_for_signal(double n_signal, double eta, double n_low);

// The n symplectic eigenvalues of a 2n x 2n CM, ascending: the absolute
// values of the eigenvalues of i Omega V (each appears twice; pairs are
// averaged). Physical states have all values >= 1/2.
std::vector<double> symplectic_eigenvalues(const Eigen::MatrixXd& cov,
                                           Ordering ordering);

// Smallest symplectic eigenvalue squared of a block CM, from the two-mode
// closed form nu^2 = (Delta - sqrt(Delta^2 - 4 det V))/2 with
// Delta = a^2 + b^2 + 2 c1 c2. NaN if the discriminant is negative
// (impossible for a valid CM).
double nu_min_squared(const TwoModeCov& v);

// Same quantity for the partial transpose (Delta~ = a^2 + b^2 - 2 c1 c2);
// >= 1/4 iff the state is separable.
double nu_tilde_squared(const TwoModeCov& v);

// Physicality diagnostics for a block CM.
struct PhysicalityReport {
    double nu_min_sq;     // smallest symplectic eigenvalue squared
    double cross_bound;   // sqrt(a*b), the bound on |c1| and |c2|
    bool qq_ok;           // |c1| < sqrt(a*b)
    bool pp_ok;           // |c2| < sqrt(a*b)
    bool nu_ok;           // nu_min_sq >= 1/4 - 1e-10

    bool physical() const { return qq_ok && pp_ok && nu_ok; }
};

// True (with diagnostics) iff |c1| < sqrt(ab), |c2| < sqrt(ab) and
// nu^2 >= 1/4 within 1e-10.
PhysicalityReport check_physical(const TwoModeCov& v);

// True iff nu~^2 >= 1/4 within 1e-10. The input must be physical.
bool check_separable(const TwoModeCov& v);

// Permutes a CM (or a mean vector) between the two canonical orderings.
// A pure permutation: round trips are exact to the bit.
Eigen::MatrixXd reorder(const Eigen::MatrixXd& cov, Ordering from, Ordering to);
Eigen::VectorXd reorder(const Eigen::VectorXd& mean, Ordering from, Ordering to);

// Extracts the block form (a, b, c1, c2) of a two-mode mode-major CM,
// rejecting matrices that are not of that shape.
TwoModeCov block_form(const GaussianState& state);

// Expands a block CM back into a zero-mean mode-major GaussianState.
GaussianState from_block(const TwoModeCov& v);

}  // namespace qmetro

#endif  // QMETRO_GAUSSIAN_HPP_
