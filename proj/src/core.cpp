#include "llsrpca/core.hpp"

namespace llsrpca {

void require_finite(const DataMatrix& m, const std::string& what) {
    if (!m.allFinite())
        throw std::invalid_argument(what + ": matrix contains NaN or infinite entries");
}

Index rank_from_singulars(const Eigen::VectorXd& singulars) {
    if (singulars.size() == 0) return 0;
    const double cutoff = 1e-12 * singulars(0);
    if (!(cutoff > 0.0)) return 0;
    Index r = 0;
    while (r < singulars.size() && singulars(r) > cutoff) ++r;
    return r;
}

std::vector<Index> nonzero_columns(const DataMatrix& m, double rel_tol) {
    std::vector<Index> cols;
    const Eigen::VectorXd norms = m.colwise().norm();
    const double max_norm = norms.size() ? norms.maxCoeff() : 0.0;
    if (max_norm == 0.0) return cols;
    for (Index j = 0; j < norms.size(); ++j)
        if (norms(j) > rel_tol * max_norm) cols.push_back(j);
    return cols;
}

}  // namespace llsrpca
