#pragma once

#include <optional>
#include <vector>

#include "llsrpca/core.hpp"

namespace llsrpca {

enum class SolverVariant { LlsRpca, RpcaL1, RpcaL21 };

const char* variant_name(SolverVariant v);
std::optional<SolverVariant> variant_from_name(const std::string& name);

struct SolverConfig {
    /// Balancing parameter. Unset means 1/sqrt(max(rows, cols)) of the input.
    std::optional<double> lambda{};
    double rho0 = 1e-2;
    double kappa = 1.2;
    double tol = 1e-7;
    int max_iter = 500;
    SolverVariant variant = SolverVariant::LlsRpca;

    /// Throws std::invalid_argument on out-of-range parameters.
    void validate() const;
    double lambda_for(Index rows, Index cols) const;
};

/// Lagrange multiplier and penalty weight carried across ALM iterations.
/// rho grows by a factor kappa > 1 every iteration.
struct MultiplierState {
    DataMatrix theta;
    double rho = 0.0;
};

struct Decomposition {
    DataMatrix low_rank;   // L, same shape as the input
    DataMatrix sparse;     // S, same shape as the input
    int iterations = 0;
    double final_residual = 0.0;
    bool converged = false;
    std::vector<double> objective_trace;  // variant's surrogate objective per iteration
    std::vector<double> rho_trace;        // rho after each iteration: rho0 * kappa^t
};

/// Relative feasibility gap ||X - L - S||_F / max(||X||_F, tiny).
double residual(const DataMatrix& x, const DataMatrix& l, const DataMatrix& s);

/// Inexact-ALM decomposition X = L + S with the log-det rank surrogate and
/// the l2,log column-sparsity surrogate.
Decomposition solve_lls_rpca(const DataMatrix& x, const SolverConfig& config);

/// Baseline: nuclear norm + entrywise l1.
Decomposition solve_rpca_l1(const DataMatrix& x, const SolverConfig& config);

/// Baseline: nuclear norm + column-wise l2,1.
Decomposition solve_rpca_l21(const DataMatrix& x, const SolverConfig& config);

/// Dispatch on config.variant.
Decomposition solve(const DataMatrix& x, const SolverConfig& config);

}  // namespace llsrpca
