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

#ifndef QMETRO_TYPES_HPP_
#define QMETRO_TYPES_HPP_

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace qmetro {

// Dense dynamic-size aliases, templated on the scalar so the numeric kernels
// can be instantiated in extended precision while the public API stays double.
template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

// Thrown when an argument violates a documented precondition (domain error).
struct ValidationError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Thrown when a numerically computed quantity fails a residual or range
// check that a valid input could not have produced.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Quadrature layout of a mean vector / covariance matrix.
//   ModeMajor:       (q_1, p_1, q_2, p_2, ...)
//   QuadratureMajor: (q_1, q_2, ..., p_1, p_2, ...)
enum class Ordering { ModeMajor, QuadratureMajor };

}  // namespace qmetro

#endif  // QMETRO_TYPES_HPP_
