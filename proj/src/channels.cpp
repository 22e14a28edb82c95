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

#include "qmetro/channels.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

namespace qmetro {

EnvironmentSpec EnvironmentSpec::make(double t0, double omega1, double omega2,
                                      double g, double gprime) {
    if (!(t0 > 0.0 && t0 <= 1.0)) {
        throw ValidationError(
            "EnvironmentSpec: t0 must lie in (0,1] (t0 = 0 carries no signal)");
    }
    if (!(omega1 >= 0.5) || !(omega2 >= 0.5)) {
        throw ValidationError(
            "EnvironmentSpec: omega1 and omega2 must be >= 1/2 "
            "(omega = n_env + 1/2)");
    }
    EnvironmentSpec env{t0, omega1, omega2, g, gprime};
    if (!check_physical(env.cov()).physical()) {
        throw ValidationError(
            "EnvironmentSpec: environment CM is unphysical "
            "(requires |g|, |g'| < sqrt(omega1 omega2) and nu >= 1/2)");
    }
    return env;
}

EnvironmentSpec EnvironmentSpec::isotropic(double t0, double omega) {
    return make(t0, omega, omega, 0.0, 0.0);
}

ChannelParams ChannelParams::make(double tau, EnvironmentSpec env) {
    if (!(tau >= 0.0 && tau <= 1.0)) {
        throw ValidationError("ChannelParams: tau must lie in [0,1]");
    }
    return ChannelParams{tau, std::move(env)};
}

namespace {

// Shared precondition of the closed form and the oracle: a zero-mean
// two-mode block CM with equal qq and pp cross-covariances.
TwoModeCov source_block(const GaussianState& source) {
    if (source.mean.cwiseAbs().maxCoeff() > 1e-12) {
        throw ValidationError("evolve_source: source must have zero mean");
    }
    TwoModeCov blk = block_form(source);
    const double tol =
        1e-9 * std::max({1.0, std::abs(blk.c1), std::abs(blk.c2)});
    if (std::abs(blk.c1 - blk.c2) > tol) {
        throw ValidationError(
            "evolve_source: source must have equal qq and pp "
            "cross-covariances (c1 = c2)");
    }
    return blk;
}

void validate_params(const ChannelParams& params) {
    if (!(params.tau >= 0.0 && params.tau <= 1.0)) {
        throw ValidationError("ChannelParams: tau must lie in [0,1]");
    }
    // Re-validates in case the spec was aggregate-initialized.
    EnvironmentSpec::make(params.env.t0, params.env.omega1, params.env.omega2,
                          params.env.g, params.env.gprime);
}

}  // namespace

TwoModeCov evolve_block(const TwoModeCov& source, const ChannelParams& params) {
    validate_params(params);
    const auto out = detail::evolve_block<double>(
        source.a, source.b, source.c1, params.tau, params.env.t0,
        params.env.omega1, params.env.omega2, params.env.g, params.env.gprime);
    return TwoModeCov{out.a, out.b, out.c1, out.c2};
}

GaussianState evolve_source(const GaussianState& source,
                            const ChannelParams& params) {
    TwoModeCov blk = source_block(source);
    blk.c2 = blk.c1;
    return from_block(evolve_block(blk, params));
}

GaussianState evolve_coherent(double n_bar, double tau, double t0,
                              double omega, double phase) {
    if (!(tau >= 0.0 && tau <= 1.0)) {
        throw ValidationError("evolve_coherent: tau must lie in [0,1]");
    }
    EnvironmentSpec::make(t0, omega, omega, 0.0, 0.0);
    GaussianState probe = coherent_state(n_bar, phase);
    const double aprime = t0 / 2.0 + (1.0 - t0) * omega;
    return GaussianState::make(std::sqrt(t0 * tau) * probe.mean,
                               aprime * Eigen::MatrixXd::Identity(2, 2));
}

namespace {

// Beam splitter acting on modes (i, j) of an n-mode system, mode-major.
Eigen::MatrixXd embedded_beam_splitter(int n_modes, int i, int j, double eta) {
    Eigen::MatrixXd s =
        Eigen::MatrixXd::Identity(2 * n_modes, 2 * n_modes);
    const double t = std::sqrt(eta);
    const double r = std::sqrt(1.0 - eta);
    for (int k = 0; k < 2; ++k) {
        s(2 * i + k, 2 * i + k) = t;
        s(2 * i + k, 2 * j + k) = r;
        s(2 * j + k, 2 * i + k) = -r;
        s(2 * j + k, 2 * j + k) = t;
    }
    return s;
}

}  // namespace

GaussianState evolve_dilation_oracle(const GaussianState& source,
                                     const ChannelParams& params) {
    validate_params(params);
    const TwoModeCov blk = source_block(source);
    const EnvironmentSpec& env = params.env;

    // Modes: 0 = A, 1 = B, 2 = V (vacuum for the tau loss), 3 = E1, 4 = E2.
    Eigen::MatrixXd v0 = Eigen::MatrixXd::Zero(10, 10);
    v0(0, 0) = v0(1, 1) = blk.a;
    v0(2, 2) = v0(3, 3) = blk.b;
    v0(0, 2) = v0(2, 0) = blk.c1;
    v0(1, 3) = v0(3, 1) = blk.c1;
    v0(4, 4) = v0(5, 5) = 0.5;
    v0(6, 6) = v0(7, 7) = env.omega1;
    v0(8, 8) = v0(9, 9) = env.omega2;
    v0(6, 8) = v0(8, 6) = env.g;
    v0(7, 9) = v0(9, 7) = env.gprime;

    const Eigen::MatrixXd s = embedded_beam_splitter(5, 1, 4, env.t0) *
                              embedded_beam_splitter(5, 0, 3, env.t0) *
                              embedded_beam_splitter(5, 0, 2, params.tau);
    const Eigen::MatrixXd v10 = s * v0 * s.transpose();

    Eigen::MatrixXd out(4, 4);
    out = v10.topLeftCorner(4, 4);
    // Exact symmetrization: the congruence rounds asymmetrically at ulp level.
    out = 0.5 * (out + out.transpose());
    return GaussianState::make(Eigen::VectorXd::Zero(4), std::move(out));
}

GaussianState reduced_state(const GaussianState& state, int mode_index) {
    if (mode_index < 0 || mode_index >= state.n_modes) {
        throw ValidationError("reduced_state: mode index out of range");
    }
    const Eigen::MatrixXd cov =
        reorder(state.cov, state.ordering, Ordering::ModeMajor);
    const Eigen::VectorXd mean =
        reorder(state.mean, state.ordering, Ordering::ModeMajor);
    return GaussianState::make(mean.segment(2 * mode_index, 2),
                               cov.block(2 * mode_index, 2 * mode_index, 2, 2));
}

}  // namespace qmetro
