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

#ifndef QMETRO_METROLOGY_HPP_
#define QMETRO_METROLOGY_HPP_

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

#include "qmetro/channels.hpp"
#include "qmetro/gaussian.hpp"
#include "qmetro/types.hpp"

// Gaussian fidelity (auxiliary-matrix formula), numerical quantum Fisher
// information H = 8(1-F)/dtau^2 with adaptive step halving, the analytic
// coherent-probe benchmark H = gamma_dec n/tau, and the Cramer-Rao bound.
//
// F here is the square-root fidelity: F(rho1, rho2) = |<psi1|psi2>| for pure
// states, consistent with the H = 8(1-F)/dtau^2 extraction rule.

namespace qmetro {

inline constexpr double kSqrtImagTol = 1e-9;     // imaginary residue cutoff
inline constexpr double kSqrtResidualTol = 1e-9; // ||R^2 - m|| guard
inline constexpr double kFidelityClampTol = 1e-9;
inline constexpr double kQfiDefaultStep = 1e-4;
inline constexpr double kQfiStepFloor = 1e-6;
inline constexpr double kQfiRelTol = 1e-5;

namespace detail {

// Principal square root of a real matrix similar to a positive one, via
// complex eigendecomposition. Eigenvalues of magnitude <= 1e-12 * scale are
// snapped to zero (boundary states produce mathematically-zero eigenvalues
// whose rounding would otherwise land on the branch cut); genuine
// negative-real-axis eigenvalues are an error. The imaginary part of the
// reconstruction is checked against kSqrtImagTol and discarded, and the
// residual R^2 - m is verified. The fidelity kernel falls back to the
// Denman-Beavers iteration below when the eigenvector basis is too
// ill-conditioned for these checks to pass.
template <typename Scalar>
Matrix<Scalar> matrix_sqrt_principal_t(const Matrix<Scalar>& m) {
    using Complex = std::complex<Scalar>;
    using MatrixC = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic>;
    if (m.rows() != m.cols() || m.rows() == 0) {
        throw ValidationError("matrix_sqrt_principal: square matrix required");
    }
    Eigen::ComplexEigenSolver<MatrixC> es(m.template cast<Complex>());
    if (es.info() != Eigen::Success) {
        throw NumericalError("matrix_sqrt_principal: eigendecomposition failed");
    }
    Eigen::Matrix<Complex, Eigen::Dynamic, 1> lambda = es.eigenvalues();
    Scalar scale = Scalar(1);
    for (Eigen::Index i = 0; i < lambda.size(); ++i) {
        scale = std::max(scale, std::abs(lambda(i)));
    }
    const Scalar zero_tol = Scalar(1e-12) * scale;
    for (Eigen::Index i = 0; i < lambda.size(); ++i) {
        if (std::abs(lambda(i)) <= zero_tol) {
            lambda(i) = Complex(0);
            continue;
        }
        if (lambda(i).real() < Scalar(0) &&
            std::abs(lambda(i).imag()) <= zero_tol) {
            throw NumericalError(
                "matrix_sqrt_principal: eigenvalue on the negative real axis");
        }
        lambda(i) = std::sqrt(lambda(i));
    }
    MatrixC rc = es.eigenvectors() * lambda.asDiagonal() *
                 es.eigenvectors().inverse();
    const Scalar rscale = std::max(Scalar(1), rc.real().cwiseAbs().maxCoeff());
    if (rc.imag().cwiseAbs().maxCoeff() > Scalar(kSqrtImagTol) * rscale) {
        throw NumericalError("matrix_sqrt_principal: imaginary residue");
    }
    Matrix<Scalar> r = rc.real();
    const Scalar mnorm = std::max(Scalar(1), m.cwiseAbs().maxCoeff());
    if ((r * r - m).cwiseAbs().maxCoeff() > Scalar(kSqrtResidualTol) * mnorm) {
        throw NumericalError("matrix_sqrt_principal: residual check failed");
    }
    return r;
}

// Denman-Beavers square root with determinant scaling: X -> (X + Y^-1)/2,
// Y -> (Y + X^-1)/2 converges quadratically to (sqrt(m), sqrt(m)^-1) for any
// matrix with no eigenvalues on the closed negative real axis. Free of
// complex arithmetic and of eigenvector conditioning; the iteration may
// stall at a rounding floor above the nominal target, so acceptance is
// decided by the residual check, not the step size.
template <typename Scalar>
Matrix<Scalar> matrix_sqrt_denman_beavers(const Matrix<Scalar>& m) {
    using std::abs;
    using std::pow;
    const Eigen::Index n = m.rows();
    const Matrix<Scalar> id = Matrix<Scalar>::Identity(n, n);
    const Scalar target = Scalar(100) * std::numeric_limits<Scalar>::epsilon();
    Matrix<Scalar> x = m;
    Matrix<Scalar> y = id;
    Scalar rel = 1;
    for (int it = 0; it < 80; ++it) {
        Eigen::PartialPivLU<Matrix<Scalar>> lux(x);
        Eigen::PartialPivLU<Matrix<Scalar>> luy(y);
        Scalar scale = 1;
        if (rel > Scalar(0.01)) {
            const Scalar dets = abs(lux.determinant() * luy.determinant());
            if (dets > Scalar(0)) {
                scale = pow(dets, Scalar(-1) / Scalar(2 * n));
            }
        }
        const Matrix<Scalar> xn = (scale * x + luy.solve(id) / scale) / Scalar(2);
        const Matrix<Scalar> yn = (scale * y + lux.solve(id) / scale) / Scalar(2);
        rel = (xn - x).cwiseAbs().maxCoeff() /
              std::max(xn.cwiseAbs().maxCoeff(), Scalar(1e-300));
        x = xn;
        y = yn;
        if (rel < target) break;
    }
    const Scalar mnorm = std::max(Scalar(1), m.cwiseAbs().maxCoeff());
    const Scalar resid = (x * x - m).cwiseAbs().maxCoeff();
    if (!(resid <= Scalar(kSqrtResidualTol) * mnorm)) {
        throw NumericalError("matrix sqrt (Denman-Beavers) failed to converge");
    }
    return x;
}

// Square root used inside the fidelity kernel: the eigendecomposition path
// first, with the Denman-Beavers iteration as the fallback when the
// eigenvector basis is too ill-conditioned to pass the reconstruction checks.
template <typename Scalar>
Matrix<Scalar> kernel_matrix_sqrt(const Matrix<Scalar>& m) {
    try {
        return matrix_sqrt_principal_t<Scalar>(m);
    } catch (const NumericalError&) {
        return matrix_sqrt_denman_beavers<Scalar>(m);
    }
}

// Symplectic form [[0, I], [-I, 0]] (quadrature-major), generic scalar.
template <typename Scalar>
Matrix<Scalar> omega_qmajor(Eigen::Index n_modes) {
    Matrix<Scalar> omega = Matrix<Scalar>::Zero(2 * n_modes, 2 * n_modes);
    omega.topRightCorner(n_modes, n_modes) =
        Matrix<Scalar>::Identity(n_modes, n_modes);
    omega.bottomLeftCorner(n_modes, n_modes) =
        -Matrix<Scalar>::Identity(n_modes, n_modes);
    return omega;
}

// Fidelity of two zero-mean Gaussian states with quadrature-major CMs:
//   V_aux = Omega^T (V1+V2)^{-1} (Omega/4 + V2 Omega V1)
//   F = [ det( 2 (sqrt(I + (V_aux Omega)^{-2}/4) + I) V_aux ) / det(V1+V2) ]^{1/4}
// Excursions above 1 smaller than kFidelityClampTol are clamped; anything
// larger is a numerical error, not a rounding artifact.
template <typename Scalar>
Scalar fidelity_zero_mean_kernel(const Matrix<Scalar>& v1,
                                 const Matrix<Scalar>& v2) {
    const Eigen::Index dim = v1.rows();
    const Eigen::Index n = dim / 2;
    const Matrix<Scalar> omega = omega_qmajor<Scalar>(n);
    const Matrix<Scalar> id = Matrix<Scalar>::Identity(dim, dim);

    const Matrix<Scalar> sum = v1 + v2;
    Eigen::PartialPivLU<Matrix<Scalar>> lu(sum);
    const Scalar den = lu.determinant();
    if (!(den > Scalar(0))) {
        throw NumericalError("fidelity: covariance sum is singular");
    }
    const Matrix<Scalar> vaux =
        omega.transpose() * lu.solve(omega / Scalar(4) + v2 * omega * v1);
    const Matrix<Scalar> w = vaux * omega;
    const Matrix<Scalar> w2inv =
        (w * w).partialPivLu().solve(id);
    const Matrix<Scalar> root =
        kernel_matrix_sqrt<Scalar>(id + w2inv / Scalar(4));
    const Scalar num = (Scalar(2) * (root + id) * vaux).determinant();
    const Scalar ratio = num / den;
    if (!(ratio > Scalar(0))) {
        if (ratio > Scalar(-1e-12)) return Scalar(0);
        throw NumericalError("fidelity: negative determinant ratio");
    }
    using std::pow;
    Scalar f = pow(ratio, Scalar(1) / Scalar(4));
    if (f > Scalar(1)) {
        if (f - Scalar(1) < Scalar(kFidelityClampTol)) return Scalar(1);
        throw NumericalError("fidelity exceeded 1 beyond tolerance");
    }
    return f;
}

// Displacement factor exp(-delta^T (V1+V2)^{-1} delta / 4) given the summed
// CM. Any quadrature ordering, as long as vsum and delta agree.
template <typename Scalar>
Scalar displacement_factor(const Matrix<Scalar>& vsum,
                           const Vector<Scalar>& delta) {
    if (vsum.rows() != delta.size()) {
        throw ValidationError("displacement factor: dimension mismatch");
    }
    const Vector<Scalar> x = vsum.partialPivLu().solve(delta);
    using std::exp;
    return exp(-delta.dot(x) / Scalar(4));
}

}  // namespace detail

// Fidelity of two zero-mean states given quadrature-major CMs.
double fidelity_zero_mean(const Eigen::MatrixXd& v1, const Eigen::MatrixXd& v2);

// Displacement-only fidelity of two states sharing the CM v:
// exp(-delta^T (2v)^{-1} delta / 4).
double fidelity_displaced(const Eigen::MatrixXd& v,
                          const Eigen::VectorXd& delta);

// General Gaussian fidelity: zero-mean factor times displacement factor.
double fidelity_general(const GaussianState& s1, const GaussianState& s2);

// Principal square root of a real matrix (see detail::matrix_sqrt_principal_t).
Eigen::MatrixXd matrix_sqrt_principal(const Eigen::MatrixXd& m);

// One numerical QFI evaluation.
struct QfiResult {
    double tau;                   // evaluation point
    double h;                     // QFI, units 1/tau^2
    double dtau;                  // final finite-difference step
    bool converged;               // step-halving met kQfiRelTol before floor
    double relative_step_change;  // |H(d) - H(d/2)|/H at the final step
};

struct QfiOptions {
    double dtau = kQfiDefaultStep;  // starting step for the halving loop
};

// Coherent probe of the benchmark: signal energy n_bar at `phase`.
struct CoherentProbe {
    double n_bar;
    double phase = 0.0;
};

// Analytic benchmark inputs (Eq. H = gamma_dec n/tau).
struct BenchmarkParams {
    double n_bar;
    double tau;
    double t0;
    double omega;
};

// Numerical QFI of a two-mode block-form source probe: evolves the probe at
// tau and tau+dtau, H = 8(1-F)/dtau^2, halving dtau until the relative change
// is below kQfiRelTol or the floor kQfiStepFloor is reached. tau endpoints
// are excluded; steps crossing tau+dtau > 1 are shrunk automatically.
QfiResult qfi_numeric(const GaussianState& probe, const EnvironmentSpec& env,
                      double tau, const QfiOptions& opts = {});

// Same for a coherent probe on mode A alone. An asymmetric environment acts
// on it through omega1 (the signal-mode branch).
QfiResult qfi_numeric(const CoherentProbe& probe, const EnvironmentSpec& env,
                      double tau, const QfiOptions& opts = {});

// Single fixed-step evaluation H(dtau), no convergence loop (diagnostic).
double qfi_fixed_step(const GaussianState& probe, const EnvironmentSpec& env,
                      double tau, double dtau);
double qfi_fixed_step(const CoherentProbe& probe, const EnvironmentSpec& env,
                      double tau, double dtau);

// Analytic coherent benchmark H = gamma_dec n/tau with
// gamma_dec = t0 / (t0 + 2(1-t0) omega).
double qfi_coherent_analytic(const BenchmarkParams& p);

// Quantum Cramer-Rao bound: minimal error variance 1/(N H).
double qcr_error_bound(double h, long n_probes);

}  // namespace qmetro

#endif  // QMETRO_METROLOGY_HPP_
