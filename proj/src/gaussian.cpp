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

#include "qmetro/gaussian.hpp"

#include <algorithm>
#include <cmath>

namespace qmetro {

namespace {

// Mode-major index -> quadrature-major index for n modes.
inline Eigen::Index qmajor_index(Eigen::Index mode_major, Eigen::Index n) {
    return (mode_major % 2 == 0) ? mode_major / 2 : n + mode_major / 2;
}

void require_even_square(const Eigen::MatrixXd& cov, const char* who) {
    if (cov.rows() != cov.cols() || cov.rows() < 2 || cov.rows() % 2 != 0) {
        throw ValidationError(std::string(who) +
                              ": covariance must be square 2n x 2n");
    }
}

void require_symmetric(const Eigen::MatrixXd& cov, const char* who) {
    if ((cov - cov.transpose()).cwiseAbs().maxCoeff() > kSymmetryTol) {
        throw ValidationError(std::string(who) +
                              ": covariance must be symmetric within 1e-12");
    }
}

}  // namespace

Eigen::MatrixXd symplectic_form(int n_modes, Ordering ordering) {
    if (n_modes < 1) throw ValidationError("symplectic_form: n_modes must be >= 1");
    const Eigen::Index n = n_modes;
    Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    if (ordering == Ordering::QuadratureMajor) {
        omega.topRightCorner(n, n) = Eigen::MatrixXd::Identity(n, n);
        omega.bottomLeftCorner(n, n) = -Eigen::MatrixXd::Identity(n, n);
    } else {
        for (Eigen::Index k = 0; k < n; ++k) {
            omega(2 * k, 2 * k + 1) = 1.0;
            omega(2 * k + 1, 2 * k) = -1.0;
        }
    }
    return omega;
}

GaussianState GaussianState::make(Eigen::VectorXd mean, Eigen::MatrixXd cov,
                                  Ordering ordering) {
    require_even_square(cov, "GaussianState");
    if (mean.size() != cov.rows()) {
        throw ValidationError("GaussianState: mean length must be 2 n_modes");
    }
    require_symmetric(cov, "GaussianState");
    GaussianState state;
    state.mean = std::move(mean);
    state.cov = std::move(cov);
    state.n_modes = static_cast<int>(state.cov.rows() / 2);
    state.ordering = ordering;
    const auto nu = symplectic_eigenvalues(state.cov, ordering);
    if (nu.front() < 0.5 - kPhysicalityTol) {
        throw ValidationError(
            "GaussianState: unphysical covariance (symplectic eigenvalue " +
            std::to_string(nu.front()) + " < 1/2)");
    }
    return state;
}

GaussianState thermal_state(double n_bar) {
    if (!(n_bar >= 0.0)) {
        throw ValidationError("thermal_state: n_bar must be >= 0");
    }
    return GaussianState::make(
        Eigen::VectorXd::Zero(2),
        (n_bar + 0.5) * Eigen::MatrixXd::Identity(2, 2));
}

GaussianState coherent_state(double n_bar, double phase) {
    if (!(n_bar >= 0.0)) {
        throw ValidationError("coherent_state: n_bar must be >= 0");
    }
    Eigen::VectorXd mean(2);
    const double r = std::sqrt(2.0 * n_bar);
    mean << r * std::cos(phase), r * std::sin(phase);
    return GaussianState::make(mean, 0.5 * Eigen::MatrixXd::Identity(2, 2));
}

Eigen::MatrixXd beam_splitter(double eta) {
    if (!(eta >= 0.0 && eta <= 1.0)) {
        throw ValidationError("beam_splitter: eta must lie in [0,1]");
    }
    const double t = std::sqrt(eta);
    const double r = std::sqrt(1.0 - eta);
    Eigen::MatrixXd s = Eigen::MatrixXd::Zero(4, 4);
    const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(2, 2);
    s.topLeftCorner(2, 2) = t * id;
    s.topRightCorner(2, 2) = r * id;
    s.bottomLeftCorner(2, 2) = -r * id;
    s.bottomRightCorner(2, 2) = t * id;
    return s;
}

namespace {

void validate_spec(const SourceSpec& spec) {
    if (!(spec.eta > 0.0 && spec.eta <= 1.0)) {
        throw ValidationError("SourceSpec: eta must lie in (0,1]");
    }
    if (!(spec.n_low >= 0.0) || !(spec.n_high >= spec.n_low)) {
        throw ValidationError("SourceSpec: require n_high >= n_low >= 0");
    }
}

}  // namespace

TwoModeCov source_cov(const SourceSpec& spec) {
    validate_spec(spec);
    const double mu_h = spec.n_high + 0.5;
    const double mu_l = spec.n_low + 0.5;
    const double a = spec.eta * mu_h + (1.0 - spec.eta) * mu_l;
    const double b = spec.eta * mu_l + (1.0 - spec.eta) * mu_h;
    const double c = std::sqrt(spec.eta * (1.0 - spec.eta)) * (mu_l - mu_h);
    return TwoModeCov{a, b, c, c};
}

GaussianState make_source(const SourceSpec& spec) {
    return from_block(source_cov(spec));
}

SourceSpec source_for_signal(double n_signal, double eta, double n_low) {
    if (!(eta > 0.0 && eta <= 1.0)) {
        throw ValidationError("source_for_signal: eta must lie in (0,1]");
    }
    if (!(n_low >= 0.0) || !(n_signal >= 0.0)) {
        throw ValidationError("source_for_signal: photon numbers must be >= 0");
    }
    const double n_high = (n_signal - (1.0 - eta) * n_low) / eta;
    if (!(n_high >= n_low)) {
        throw ValidationError(
            "source_for_signal: infeasible, requires n_high >= n_low (n_high = " +
            std::to_string(n_high) + ")");
    }
    return SourceSpec{eta, n_high, n_low};
}

std::vector<double> symplectic_eigenvalues(const Eigen::MatrixXd& cov,
                                           Ordering ordering) {
    require_even_square(cov, "symplectic_eigenvalues");
    require_symmetric(cov, "symplectic_eigenvalues");
    const Eigen::Index n = cov.rows() / 2;
    const Eigen::MatrixXd omega =
        symplectic_form(static_cast<int>(n), ordering);
    Eigen::EigenSolver<Eigen::MatrixXd> es(omega * cov, false);
    if (es.info() != Eigen::Success) {
        throw NumericalError("symplectic_eigenvalues: eigensolver failed");
    }
    std::vector<double> mods(2 * n);
    for (Eigen::Index i = 0; i < 2 * n; ++i) {
        mods[static_cast<size_t>(i)] = std::abs(es.eigenvalues()(i));
    }
    std::sort(mods.begin(), mods.end());
    // The spectrum of i Omega V is {+-nu_k}; average each +- pair.
    std::vector<double> nus(n);
    for (Eigen::Index k = 0; k < n; ++k) {
        nus[static_cast<size_t>(k)] =
            0.5 * (mods[static_cast<size_t>(2 * k)] +
                   mods[static_cast<size_t>(2 * k + 1)]);
    }
    return nus;
}

double nu_min_squared(const TwoModeCov& v) {
    const double delta = v.a * v.a + v.b * v.b + 2.0 * v.c1 * v.c2;
    const double det = (v.a * v.b - v.c1 * v.c1) * (v.a * v.b - v.c2 * v.c2);
    const double disc = delta * delta - 4.0 * det;
    if (disc < 0.0) return std::nan("");
    return 0.5 * (delta - std::sqrt(disc));
}

double nu_tilde_squared(const TwoModeCov& v) {
    const double delta = v.a * v.a + v.b * v.b - 2.0 * v.c1 * v.c2;
    const double det = (v.a * v.b - v.c1 * v.c1) * (v.a * v.b - v.c2 * v.c2);
    const double disc = delta * delta - 4.0 * det;
    if (disc < 0.0) return std::nan("");
    return 0.5 * (delta - std::sqrt(disc));
}

PhysicalityReport check_physical(const TwoModeCov& v) {
    PhysicalityReport report;
    report.cross_bound = (v.a > 0.0 && v.b > 0.0) ? std::sqrt(v.a * v.b) : 0.0;
    report.qq_ok = v.a >= 0.5 && v.b >= 0.5 &&
                   std::abs(v.c1) < report.cross_bound;
    report.pp_ok = v.a >= 0.5 && v.b >= 0.5 &&
                   std::abs(v.c2) < report.cross_bound;
    report.nu_min_sq = nu_min_squared(v);
    report.nu_ok = report.nu_min_sq >= 0.25 - kPhysicalityTol;
    return report;
}

bool check_separable(const TwoModeCov& v) {
    if (!check_physical(v).physical()) {
        throw ValidationError("check_separable: input CM is not physical");
    }
    return nu_tilde_squared(v) >= 0.25 - kPhysicalityTol;
}

Eigen::MatrixXd reorder(const Eigen::MatrixXd& cov, Ordering from,
                        Ordering to) {
    require_even_square(cov, "reorder");
    if (from == to) return cov;
    const Eigen::Index dim = cov.rows();
    const Eigen::Index n = dim / 2;
    // Positions such that out(pos[i], pos[j]) = in(i, j).
    std::vector<Eigen::Index> pos(static_cast<size_t>(dim));
    for (Eigen::Index m = 0; m < dim; ++m) {
        const Eigen::Index q = qmajor_index(m, n);
        if (to == Ordering::QuadratureMajor) {
            pos[static_cast<size_t>(m)] = q;  // input is mode-major
        } else {
            pos[static_cast<size_t>(q)] = m;  // input is quadrature-major
        }
    }
    Eigen::MatrixXd out(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
        for (Eigen::Index j = 0; j < dim; ++j) {
            out(pos[static_cast<size_t>(i)], pos[static_cast<size_t>(j)]) =
                cov(i, j);
        }
    }
    return out;
}

Eigen::VectorXd reorder(const Eigen::VectorXd& mean, Ordering from,
                        Ordering to) {
    if (mean.size() < 2 || mean.size() % 2 != 0) {
        throw ValidationError("reorder: mean length must be 2n");
    }
    if (from == to) return mean;
    const Eigen::Index dim = mean.size();
    const Eigen::Index n = dim / 2;
    Eigen::VectorXd out(dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
        const Eigen::Index q = qmajor_index(i, n);
        if (to == Ordering::QuadratureMajor) {
            out(q) = mean(i);
        } else {
            out(i) = mean(q);
        }
    }
    return out;
}

TwoModeCov block_form(const GaussianState& state) {
    if (state.n_modes != 2) {
        throw ValidationError("block_form: two-mode state required");
    }
    const Eigen::MatrixXd cov =
        reorder(state.cov, state.ordering, Ordering::ModeMajor);
    const double tol = 1e-9 * std::max(1.0, cov.cwiseAbs().maxCoeff());
    const bool shaped =
        std::abs(cov(0, 0) - cov(1, 1)) <= tol &&
        std::abs(cov(2, 2) - cov(3, 3)) <= tol &&
        std::abs(cov(0, 1)) <= tol && std::abs(cov(0, 3)) <= tol &&
        std::abs(cov(1, 2)) <= tol && std::abs(cov(2, 3)) <= tol;
    if (!shaped) {
        throw ValidationError(
            "block_form: CM is not of the block form diag(a,a,b,b) with "
            "diagonal cross-covariance");
    }
    return TwoModeCov{cov(0, 0), cov(2, 2), cov(0, 2), cov(1, 3)};
}

GaussianState from_block(const TwoModeCov& v) {
    Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(4, 4);
    cov(0, 0) = cov(1, 1) = v.a;
    cov(2, 2) = cov(3, 3) = v.b;
    cov(0, 2) = cov(2, 0) = v.c1;
    cov(1, 3) = cov(3, 1) = v.c2;
    return GaussianState::make(Eigen::VectorXd::Zero(4), std::move(cov));
}

}  // namespace qmetro
