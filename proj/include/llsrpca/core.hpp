#pragma once

#include <Eigen/Core>
#include <stdexcept>
#include <string>
#include <vector>

namespace llsrpca {

/// Dense real matrix used throughout: patch matrices X, components L and S,
/// multipliers, noise residuals. Column i of a patch matrix holds band i.
using DataMatrix = Eigen::MatrixXd;
using Index = Eigen::Index;

/// Numerical failure (SVD did not converge, ...). Distinct from bad input so
/// callers can map it to its own exit code.
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// File / format error for cube and report I/O.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Throws std::invalid_argument if any entry of `m` is NaN or infinite.
void require_finite(const DataMatrix& m, const std::string& what);

/// Rank by the reporting convention: number of singular values above
/// 1e-12 * sigma_max. Values are never clipped anywhere else.
Index rank_from_singulars(const Eigen::VectorXd& singulars);

/// Columns whose l2 norm exceeds `rel_tol` times the largest column norm.
/// Used for column-support diagnostics of the sparse component.
std::vector<Index> nonzero_columns(const DataMatrix& m, double rel_tol = 1e-6);

}  // namespace llsrpca
