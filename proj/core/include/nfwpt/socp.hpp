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

#ifndef NFWPT_SOCP_HPP
#define NFWPT_SOCP_HPP

#include <string>
#include <vector>

#include <Eigen/Core>

#include "nfwpt/linearize.hpp"

namespace nfwpt
{

// ---------------------------------------------------------------------------
// Modelling layer. A ConeProgram over a real vector x of fixed dimension:
//
//   minimize    linear^T x + sum_j scale_j ||x[idx_j]|| + squared_weight ||x[squared_indices]||^2
//   subject to  a_k^T x <= b_k                       (affine_le)
//               ||x[idx_r] - center_r|| <= radius_r  (balls)
//               e_k^T x  = f_k                       (equalities)
// ---------------------------------------------------------------------------

struct NormTerm
{
    std::vector<int> indices;
    double scale = 1.0;
};

struct AffineRow
{
    Eigen::VectorXd coeffs; // length dim
    double rhs = 0.0;
};

struct Ball
{
    std::vector<int> indices;
    Eigen::VectorXd center;
    double radius = 1.0;
};

struct ConeProgram
{
    int dim = 0;
    Eigen::VectorXd linear;
    std::vector<NormTerm> norms;
    std::vector<int> squared_indices;
    double squared_weight = 0.0;
    std::vector<AffineRow> affine_le;
    std::vector<Ball> balls;
    std::vector<AffineRow> equalities;

    explicit ConeProgram(int dimension = 0);

    double objective(const Eigen::VectorXd &x) const;
    // Worst violation over every constraint, evaluated on the original expressions
    double max_violation(const Eigen::VectorXd &x) const;
    // Throws when an index is out of range, a scale is negative, or a row has the wrong length
    void check() const;
};

// Plain-text dump, one directive per line (format documented in the README)
std::string dump_program(const ConeProgram &program);
ConeProgram parse_program(const std::string &text);

// ---------------------------------------------------------------------------
// Standard conic form and interior-point solver
//
//   minimize c^T x  subject to  A x = b,  G x + s = h,  s in K
//   K = R_+^orthant x Q^{soc[0]} x Q^{soc[1]} x ...
// ---------------------------------------------------------------------------

struct ConicForm
{
    Eigen::VectorXd c;
    Eigen::MatrixXd A;
    Eigen::VectorXd b;
    Eigen::MatrixXd G;
    Eigen::VectorXd h;
    int orthant = 0;
    std::vector<int> soc;
    int program_dim = 0; // leading entries of x that belong to the ConeProgram variable
};

ConicForm compile(const ConeProgram &program);

enum class ConeStatus
{
    Optimal,
    Infeasible,
    Unbounded,
    IterLimit
};

std::string to_string(ConeStatus status);

struct SolverOptions
{
    double tolerance = 1e-9; // feasibility and relative gap
    int max_iters = 100;
    int refinement_steps = 3;
};

struct ConicSolution
{
    ConeStatus status = ConeStatus::IterLimit;
    Eigen::VectorXd x, y, z, s;
    double primal_cost = 0.0;
    double dual_cost = 0.0;
    double primal_residual = 0.0;
    double dual_residual = 0.0;
    double gap = 0.0; // s^T z
    int iterations = 0;
    std::string detail;
};

ConicSolution solve_conic(const ConicForm &form, const SolverOptions &options);

struct ConeSolution
{
    ConeStatus status = ConeStatus::IterLimit;
    Eigen::VectorXd x;              // program variable
    double objective = 0.0;         // program objective at x
    double kkt_residual = 0.0;      // max(primal residual, dual residual, relative gap)
    double duality_gap = 0.0;       // |primal cost - dual cost|
    double constraint_violation = 0.0;
    int iterations = 0;
    std::vector<double> affine_duals; // multiplier of each affine_le row
    std::string detail;             // violated-constraint report when infeasible
};

ConeSolution solve(const ConeProgram &program, const SolverOptions &options);

// ---------------------------------------------------------------------------
// SCA subproblems
// ---------------------------------------------------------------------------

// Minimum-power digital-weight program in the reduced variables (interleaved
// real coordinates of Waveform::flatten). chain_weight_i multiplies ||omega_i||;
// each receiver m gets base_m + grad_m^T (x - x0) >= target_m.
ConeProgram assemble_w_subproblem(const Eigen::VectorXd &chain_weight, const std::vector<LinearizedVoltage> &lins,
                                  const std::vector<double> &targets, const Waveform &w0);

// Convenience overload deriving weights and targets from the scenario
ConeProgram assemble_w_subproblem(const ScenarioConfig &scenario, const DmaState *dma,
                                  const std::vector<LinearizedVoltage> &lins, const Waveform &w0);

// Max-min linearized voltage over metamaterial weights. Variables are the interleaved
// coordinates of q followed by R (last entry); every q lies in its Lorentzian disk.
ConeProgram assemble_q_subproblem(const std::vector<LinearizedVoltage> &lins, const CVector &q0);

} // namespace nfwpt

#endif
