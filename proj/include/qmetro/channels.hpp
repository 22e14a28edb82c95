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

#ifndef QMETRO_CHANNELS_HPP_
#define QMETRO_CHANNELS_HPP_

#include <cmath>

#include "qmetro/gaussian.hpp"
#include "qmetro/types.hpp"

// The estimation channel: an unknown lossy channel of transmissivity tau on
// mode A (vacuum environment), followed by a joint Gaussian decoherence
// channel coupling modes A and B through beam splitters of known
// transmissivity t0 to a possibly-correlated thermal environment (E1, E2).

namespace qmetro {

// Decoherence channel parameters. omega1/omega2 are the environment
// quadrature variances (omega = n_env + 1/2 >= 1/2); g and gprime are the qq
// and pp cross-covariances between E1 and E2.
struct EnvironmentSpec {
    double t0;
    double omega1;
    double omega2;
    double g;
    double gprime;

    TwoModeCov cov() const { return TwoModeCov{omega1, omega2, g, gprime}; }

    // Validates t0 in (0,1], omega >= 1/2 and physicality of the
    // environment CM. t0 = 0 is rejected: the output carries no signal.
    static EnvironmentSpec make(double t0, double omega1, double omega2,
                                double g, double gprime);

    // Uncorrelated symmetric environment (omega1 = omega2, g = g' = 0).
    static EnvironmentSpec isotropic(double t0, double omega);
};

struct ChannelParams {
    double tau;
    EnvironmentSpec env;

    static ChannelParams make(double tau, EnvironmentSpec env);
};

namespace detail {

// Closed-form action of the composed channel on a block CM with source
// cross-covariance c (qq = pp = c). Templated so QFI differencing can run
// in extended precision.
template <typename Scalar>
struct BlockCov {
    Scalar a, b, c1, c2;
};

template <typename Scalar>
BlockCov<Scalar> evolve_block(Scalar a, Scalar b, Scalar c, Scalar tau,
                              Scalar t0, Scalar omega1, Scalar omega2,
                              Scalar g, Scalar gprime) {
    using std::sqrt;
    const Scalar half = Scalar(1) / Scalar(2);
    BlockCov<Scalar> out;
    out.a = t0 * tau * a + t0 * (Scalar(1) - tau) * half +
            (Scalar(1) - t0) * omega1;
    out.b = t0 * b + (Scalar(1) - t0) * omega2;
    const Scalar ct = t0 * sqrt(tau) * c;
    out.c1 = ct + (Scalar(1) - t0) * g;
    out.c2 = ct + (Scalar(1) - t0) * gprime;
    return out;
}

}  // namespace detail

// Closed-form channel action on a source block CM (requires c1 == c2).
TwoModeCov evolve_block(const TwoModeCov& source, const ChannelParams& params);

// Channel action on a zero-mean two-mode source state of block form:
//   a~ = t0 tau a + t0 (1-tau)/2 + (1-t0) omega1
//   b~ = t0 b + (1-t0) omega2
//   c1 = t0 sqrt(tau) c + (1-t0) g,   c2 = t0 sqrt(tau) c + (1-t0) g'.
GaussianState evolve_source(const GaussianState& source,
                            const ChannelParams& params);

// Channel action on a single-mode coherent probe on A (no ancilla):
// mean -> sqrt(t0 tau) mean, cov -> a' I with a' = t0/2 + (1-t0) omega.
GaussianState evolve_coherent(double n_bar, double tau, double t0,
                              double omega, double phase = 0.0);

// Verification oracle: realizes the same channel as explicit 10x10
// symplectics on the five modes (A, B, V, E1, E2) - V a vacuum ancilla for
// the tau loss, (E1, E2) in the environment state - then discards V, E1, E2.
// Must agree with evolve_source entrywise.
GaussianState evolve_dilation_oracle(const GaussianState& source,
                                     const ChannelParams& params);

// Single-mode marginal of one mode of a multimode state.
GaussianState reduced_state(const GaussianState& state, int mode_index);

}  // namespace qmetro

#endif  // QMETRO_CHANNELS_HPP_
