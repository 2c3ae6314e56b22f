// Stationary-distribution solvers over a RateMatrix.
#pragma once

#include "model.hpp"

#include <cstdint>
#include <vector>

namespace laacoex {

struct Solution {
    std::vector<double> pi;        // state order of the matrix; transients are 0
    double p_block_laa = 0.0;      // arriving LAA packet is lost
    double p_block_laa_held = 0.0; // lost while LAA also holds every server
    double p_block_wifi = 0.0;     // LAA holds every server
    double residual = 0.0;         // max absolute balance violation
    uint64_t iterations = 0;       // sweeps (0 for the direct method)
};

struct SolveOptions {
    double tolerance = 1e-12;        // iterative stop: max relative change
    uint64_t max_iterations = 1000000;
};

// Throws StructuralError unless the chain has exactly one closed
// communicating class and the states reachable from `initial_state` are
// strongly connected.
Structure require_solvable(const RateMatrix& matrix, int initial_state = 0);

// Gaussian elimination on the balance equations of the closed class, with one
// equation replaced by normalization. Transient states get probability 0.
Solution solve_direct(const RateMatrix& matrix, const Params& params);

// Gauss-Seidel sweeps pi_i <- inflow_i / exit_i with per-sweep
// renormalization; throws ConvergenceError past max_iterations.
Solution solve_iterative(const RateMatrix& matrix, const Params& params,
                         const SolveOptions& options = {});

// max_j |sum_i pi_i q_ij - pi_j exit_j|
double balance_residual(const RateMatrix& matrix, const std::vector<double>& pi);

} // namespace laacoex
