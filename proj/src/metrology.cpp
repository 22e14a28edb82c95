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

#include "qmetro/metrology.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include <boost/multiprecision/eigen.hpp>
#include <boost/multiprecision/float128.hpp>

namespace qmetro {

namespace {

void require_physical_qmajor(const Eigen::MatrixXd& v, const char* who) {
    const auto nus = symplectic_eigenvalues(v, Ordering::QuadratureMajor);
    if (nus.front() < 0.5 - kPhysicalityTol) {
        throw ValidationError(std::string(who) +
                              ": covariance matrix is not physical");
    }
}

}  // namespace

double fidelity_zero_mean(const Eigen::MatrixXd& v1,
                          const Eigen::MatrixXd& v2) {
    if (v1.rows() != v2.rows() || v1.cols() != v2.cols()) {
        throw ValidationError("fidelity_zero_mean: dimension mismatch");
    }
    require_physical_qmajor(v1, "fidelity_zero_mean");
    require_physical_qmajor(v2, "fidelity_zero_mean");
    return detail::fidelity_zero_mean_kernel<double>(v1, v2);
}

double fidelity_displaced(const Eigen::MatrixXd& v,
                          const Eigen::VectorXd& delta) {
    require_physical_qmajor(v, "fidelity_displaced");
    return detail::displacement_factor<double>(2.0 * v, delta);
}

double fidelity_general(const GaussianState& s1, const GaussianState& s2) {
    if (s1.n_modes != s2.n_modes) {
        throw ValidationError("fidelity_general: mode counts differ");
    }
    const Eigen::MatrixXd v1 =
        reorder(s1.cov, s1.ordering, Ordering::QuadratureMajor);
    const Eigen::MatrixXd v2 =
        reorder(s2.cov, s2.ordering, Ordering::QuadratureMajor);
    // For bit-identical CMs the zero-mean factor is exactly 1 (the formula's
    // V_aux then has symplectic spectrum matching a self-overlap).
    const double f0 = (v1 == v2)
                          ? 1.0
                          : detail::fidelity_zero_mean_kernel<double>(v1, v2);
    const Eigen::VectorXd d1 =
        reorder(s1.mean, s1.ordering, Ordering::QuadratureMajor);
    const Eigen::VectorXd d2 =
        reorder(s2.mean, s2.ordering, Ordering::QuadratureMajor);
    if (d1 == d2) return f0;
    return f0 * detail::displacement_factor<double>(v1 + v2, d1 - d2);
}

Eigen::MatrixXd matrix_sqrt_principal(const Eigen::MatrixXd& m) {
    return detail::matrix_sqrt_principal_t<double>(m);
}

namespace {

// The differencing loop resolves 1-F down to ~1e-12 (H dtau^2/8 at the step
// floor). Near-boundary evolved states (nu within ~1e-3 of 1/2) push the
// kernel's (V_aux Omega)^-2 conditioning past what double or long double can
// carry through that cancellation, so the loop's kernel runs in quadruple
// precision.
using Quad = boost::multiprecision::float128;
using MatrixQ = Matrix<Quad>;
using VectorQ = Vector<Quad>;
using Matrix2Q = Eigen::Matrix<Quad, 2, 2>;

Matrix2Q q_block(const detail::BlockCov<Quad>& v) {
    Matrix2Q m;
    m << v.a, v.c1, v.c1, v.b;
    return m;
}

Matrix2Q p_block(const detail::BlockCov<Quad>& v) {
    Matrix2Q m;
    m << v.a, v.c2, v.c2, v.b;
    return m;
}

Matrix2Q inverse_2x2(const Matrix2Q& m, Quad det) {
    Matrix2Q r;
    r << m(1, 1), -m(0, 1), -m(1, 0), m(0, 0);
    return r / det;
}

// Fidelity kernel for two block-form two-mode CMs, where the general
// auxiliary-matrix formula collapses to closed 2x2 algebra: with
// S = Q1 + Q2 and T = P1 + P2, V_aux is block diagonal with blocks
// Y = T^{-1}(I/4 + P2 Q1) and X = S^{-1}(I/4 + Q2 P1), so
//   F^4 = 16 det(YX) prod_i (sqrt(lambda_i) + 1)^2 / (det S det T),
// where lambda_i = 1 - 1/(4 mu_i) and mu_i are the two eigenvalues of YX
// (the quadratic formula; the smaller root via det/mu to avoid
// cancellation). No iteration and no 4x4 inversion, and boundary states
// (mu = 1/4, a pure mode common to both states) land on lambda = 0 exactly
// where the Denman-Beavers iteration has a singular input it cannot handle.
Quad fidelity_block_kernel(const detail::BlockCov<Quad>& u,
                           const detail::BlockCov<Quad>& v) {
    using std::pow;
    using std::sqrt;
    const Matrix2Q id = Matrix2Q::Identity();
    const Matrix2Q s = q_block(u) + q_block(v);
    const Matrix2Q t = p_block(u) + p_block(v);
    const Quad det_s = s.determinant();
    const Quad det_t = t.determinant();
    if (!(det_s > Quad(0)) || !(det_t > Quad(0))) {
        throw NumericalError("fidelity: covariance sum is singular");
    }
    const Matrix2Q y = inverse_2x2(t, det_t) * (id / 4 + p_block(v) * q_block(u));
    const Matrix2Q x = inverse_2x2(s, det_s) * (id / 4 + q_block(v) * p_block(u));
    const Matrix2Q yx = y * x;
    const Quad tr = yx.trace();
    const Quad det_yx = yx.determinant();
    if (!(det_yx > Quad(0)) || !(tr > Quad(0))) {
        throw NumericalError("fidelity: auxiliary spectrum is not positive");
    }
    Quad disc = tr * tr - 4 * det_yx;
    if (disc < Quad(0)) {
        if (!(disc > Quad(-1e-30) * tr * tr)) {
            throw NumericalError("fidelity: auxiliary spectrum is not real");
        }
        disc = 0;
    }
    const Quad mu_big = (tr + sqrt(disc)) / 2;
    Quad prod = 1;
    for (const Quad& mu : {mu_big, det_yx / mu_big}) {
        Quad lambda = (4 * mu - 1) / (4 * mu);
        if (lambda < Quad(0)) {
            if (!(lambda > Quad(-1e-20))) {
                throw NumericalError(
                    "fidelity: auxiliary spectrum below the pure-state bound");
            }
            lambda = 0;
        }
        prod *= sqrt(lambda) + 1;
    }
    const Quad ratio = Quad(16) * det_yx * prod * prod / (det_s * det_t);
    Quad f = pow(ratio, Quad(1) / Quad(4));
    if (f > Quad(1)) {
        if (f - Quad(1) < Quad(kFidelityClampTol)) return Quad(1);
        throw NumericalError("fidelity exceeded 1 beyond tolerance");
    }
    return f;
}

struct ChannelLine {
    Quad t0, omega1, omega2, g, gprime;

    explicit ChannelLine(const EnvironmentSpec& env)
        : t0(env.t0),
          omega1(env.omega1),
          omega2(env.omega2),
          g(env.g),
          gprime(env.gprime) {}
};

// H(d) evaluator for a block-form source probe, extended precision.
class SourceCurvature {
  public:
    SourceCurvature(const TwoModeCov& blk, const EnvironmentSpec& env,
                    double tau)
        : ch_(env), a_(blk.a), b_(blk.b), c_(blk.c1), tau_(tau) {
        blk_tau_ = evolve(tau_);
    }

    Quad operator()(Quad d) const {
        const Quad tau2 = tau_ + d;
        const Quad d_eff = tau2 - tau_;
        const Quad f = fidelity_block_kernel(blk_tau_, evolve(tau2));
        return Quad(8) * (Quad(1) - f) / (d_eff * d_eff);
    }

  private:
    detail::BlockCov<Quad> evolve(Quad tau) const {
        return detail::evolve_block<Quad>(a_, b_, c_, tau, ch_.t0, ch_.omega1,
                                          ch_.omega2, ch_.g, ch_.gprime);
    }

    ChannelLine ch_;
    Quad a_, b_, c_, tau_;
    detail::BlockCov<Quad> blk_tau_;
};

// H(d) evaluator for a coherent probe on mode A; the CM factor cancels
// exactly (same a' at both taus), leaving the displacement factor
// exp(-delta^T (V1+V2)^{-1} delta / 4).
class CoherentCurvature {
  public:
    CoherentCurvature(const CoherentProbe& probe, const EnvironmentSpec& env,
                      double tau)
        : t0_(env.t0), tau_(tau) {
        using std::cos;
        using std::sin;
        using std::sqrt;
        const Quad aprime =
            t0_ / 2 + (Quad(1) - Quad(env.t0)) * Quad(env.omega1);
        vsum_ = 2 * aprime * MatrixQ::Identity(2, 2);
        const Quad r = sqrt(2 * Quad(probe.n_bar));
        xbar_.resize(2);
        xbar_ << r * cos(Quad(probe.phase)), r * sin(Quad(probe.phase));
    }

    Quad operator()(Quad d) const {
        using std::sqrt;
        const Quad tau2 = tau_ + d;
        const Quad d_eff = tau2 - tau_;
        const VectorQ delta = (sqrt(t0_ * tau_) - sqrt(t0_ * tau2)) * xbar_;
        const Quad f = detail::displacement_factor<Quad>(vsum_, delta);
        return Quad(8) * (Quad(1) - f) / (d_eff * d_eff);
    }

  private:
    Quad t0_, tau_;
    MatrixQ vsum_;
    VectorQ xbar_;
};

double initial_step(double tau, const QfiOptions& opts) {
    if (!(tau > 0.0 && tau < 1.0)) {
        throw ValidationError(
            "qfi: tau must lie strictly inside (0,1); the QFI diverges as "
            "1/tau and tau = 1 leaves no room for a forward step");
    }
    if (!(opts.dtau > 0.0)) {
        throw ValidationError("qfi: dtau must be > 0");
    }
    // Forward difference never crosses tau + dtau > 1.
    return std::min(opts.dtau, (1.0 - tau) / 2.0);
}

QfiResult halve_until_converged(const std::function<Quad(Quad)>& h,
                                double tau, double d0) {
    using std::abs;
    Quad d = d0;
    Quad h_prev = h(d);
    Quad rel = std::numeric_limits<Quad>::infinity();
    while (true) {
        const Quad d_half = d / 2;
        if (d_half < Quad(kQfiStepFloor)) {
            return QfiResult{tau, static_cast<double>(h_prev),
                             static_cast<double>(d), false,
                             static_cast<double>(rel)};
        }
        const Quad h_half = h(d_half);
        rel = abs(h_half - h_prev) / std::max(abs(h_half), Quad(1e-300));
        if (rel < Quad(kQfiRelTol)) {
            return QfiResult{tau, static_cast<double>(h_half),
                             static_cast<double>(d_half), true,
                             static_cast<double>(rel)};
        }
        d = d_half;
        h_prev = h_half;
    }
}

TwoModeCov validated_source_block(const GaussianState& probe) {
    if (probe.mean.cwiseAbs().maxCoeff() > 1e-12) {
        throw ValidationError("qfi: source probes must have zero mean");
    }
    TwoModeCov blk = block_form(probe);
    const double tol =
        1e-9 * std::max({1.0, std::abs(blk.c1), std::abs(blk.c2)});
    if (std::abs(blk.c1 - blk.c2) > tol) {
        throw ValidationError("qfi: source probe requires c1 = c2");
    }
    return blk;
}

}  // namespace

QfiResult qfi_numeric(const GaussianState& probe, const EnvironmentSpec& env,
                      double tau, const QfiOptions& opts) {
    EnvironmentSpec::make(env.t0, env.omega1, env.omega2, env.g, env.gprime);
    const TwoModeCov blk = validated_source_block(probe);
    const double d0 = initial_step(tau, opts);
    const SourceCurvature h(blk, env, tau);
    return halve_until_converged(h, tau, d0);
}

QfiResult qfi_numeric(const CoherentProbe& probe, const EnvironmentSpec& env,
                      double tau, const QfiOptions& opts) {
    EnvironmentSpec::make(env.t0, env.omega1, env.omega2, env.g, env.gprime);
    if (!(probe.n_bar >= 0.0)) {
        throw ValidationError("qfi: coherent probe requires n_bar >= 0");
    }
    const double d0 = initial_step(tau, opts);
    const CoherentCurvature h(probe, env, tau);
    return halve_until_converged(h, tau, d0);
}

double qfi_fixed_step(const GaussianState& probe, const EnvironmentSpec& env,
                      double tau, double dtau) {
    EnvironmentSpec::make(env.t0, env.omega1, env.omega2, env.g, env.gprime);
    const TwoModeCov blk = validated_source_block(probe);
    const double d = initial_step(tau, QfiOptions{dtau});
    return static_cast<double>(SourceCurvature(blk, env, tau)(d));
}

double qfi_fixed_step(const CoherentProbe& probe, const EnvironmentSpec& env,
                      double tau, double dtau) {
    EnvironmentSpec::make(env.t0, env.omega1, env.omega2, env.g, env.gprime);
    const double d = initial_step(tau, QfiOptions{dtau});
    return static_cast<double>(CoherentCurvature(probe, env, tau)(d));
}

double qfi_coherent_analytic(const BenchmarkParams& p) {
    if (!(p.tau > 0.0 && p.tau <= 1.0)) {
        throw ValidationError(
            "qfi_coherent_analytic: tau must lie in (0,1] (H diverges as "
            "1/tau at tau = 0)");
    }
    if (!(p.n_bar >= 0.0)) {
        throw ValidationError("qfi_coherent_analytic: n_bar must be >= 0");
    }
    EnvironmentSpec::make(p.t0, p.omega, p.omega, 0.0, 0.0);
    const double gamma_dec = p.t0 / (p.t0 + 2.0 * (1.0 - p.t0) * p.omega);
    return gamma_dec * p.n_bar / p.tau;
}

double qcr_error_bound(double h, long n_probes) {
    if (!(h > 0.0)) {
        throw ValidationError("qcr_error_bound: QFI must be > 0");
    }
    if (n_probes < 1) {
        throw ValidationError("qcr_error_bound: n_probes must be >= 1");
    }
    return 1.0 / (static_cast<double>(n_probes) * h);
}

}  // namespace qmetro
