// SPDX-License-Identifier: Apache-2.0
//
// nfwpt: near-field wireless power transfer waveform and beam-focusing design
// Copyright (C) 2026 The nfwpt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef NFWPT_LINEARIZE_HPP
#define NFWPT_LINEARIZE_HPP

#include "nfwpt/rectenna.hpp"

namespace nfwpt
{

// First-order model of v_o around x0: v_o(x0 + d) ~ base + 2 Re{coeff^H d}.
// coeff is the conjugate-coordinate derivative dv_o/dx*. Because v_o is convex in x,
// the model is a global underestimator.
struct LinearizedVoltage
{
    double base = 0.0;
    CVector coeff;

    double action(const CVector &delta) const;

    // Gradient in interleaved real coordinates (Re x_0, Im x_0, Re x_1, ...)
    Eigen::VectorXd real_gradient() const;
};

// A spectral linear map s = R x with R of size n_f x P
// Returns dv_o/ds* for spectrum s
CVector voltage_sensitivity(const CVector &s, double K2, double K4, double G);

// Exact voltage of x under the map R
double voltage_at(const CMatrix &R, const CVector &x, const DeviceParams &device);

LinearizedVoltage linearize_spectral(const CMatrix &R, const CVector &x0, double K2, double K4, double G);

// Same coefficient obtained by expanding every product in the quadruple sum term-by-term.
// Costs O(n_f^3 P); kept as an independent cross-check.
LinearizedVoltage linearize_spectral_expanded(const CMatrix &R, const CVector &x0, double K2, double K4, double G);

// Map from the chain-major stacked digital weights to the spectrum, given reduced rows B (n_f x n_rf)
CMatrix digital_weight_map(const CMatrix &B);

// Linearization in the digital weights (variables ordered as Waveform::flatten)
LinearizedVoltage linearize_vo_in_w(const CMatrix &B, const Waveform &w0, const DeviceParams &device);

// Linearization in the metamaterial weights, with a_hat rows (n_f x N)
LinearizedVoltage linearize_vo_in_q(const CMatrix &a_hat, const CVector &q0, const DeviceParams &device);

// Conversions between complex vectors and interleaved real vectors
Eigen::VectorXd to_real(const CVector &x);
CVector to_complex(const Eigen::VectorXd &x);

} // namespace nfwpt

#endif
