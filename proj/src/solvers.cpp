#include "llsrpca/solvers.hpp"

#include <cmath>
#include <limits>

#include "llsrpca/operators.hpp"

namespace llsrpca {

const char* variant_name(SolverVariant v) {
    switch (v) {
        case SolverVariant::LlsRpca: return "lls";
        case SolverVariant::RpcaL1: return "l1";
        case SolverVariant::RpcaL21: return "l21";
    }
    return "?";
}

std::optional<SolverVariant> variant_from_name(const std::string& name) {
    if (name == "lls") return SolverVariant::LlsRpca;
    if (name == "l1") return SolverVariant::RpcaL1;
    if (name == "l21") return SolverVariant::RpcaL21;
    return std::nullopt;
}

void SolverConfig::validate() const {
    if (lambda && !(*lambda > 0.0 && std::isfinite(*lambda)))
        throw std::invalid_argument("SolverConfig: lambda must be positive");
    if (!(rho0 > 0.0 && std::isfinite(rho0)))
        throw std::invalid_argument("SolverConfig: rho0 must be positive");
    if (!(kappa > 1.0 && std::isfinite(kappa)))
        throw std::invalid_argument("SolverConfig: kappa must be greater than 1");
    if (!(tol > 0.0 && std::isfinite(tol)))
        throw std::invalid_argument("SolverConfig: tol must be positive");
    if (max_iter < 1) throw std::invalid_argument("SolverConfig: max_iter must be at least 1");
}

double SolverConfig::lambda_for(Index rows, Index cols) const {
    if (lambda) return *lambda;
    return 1.0 / std::sqrt(static_cast<double>(std::max(rows, cols)));
}

double residual(const DataMatrix& x, const DataMatrix& l, const DataMatrix& s) {
    if (l.rows() != x.rows() || l.cols() != x.cols() || s.rows() != x.rows() ||
        s.cols() != x.cols())
        throw std::invalid_argument("residual: shape mismatch between X, L, S");
    const double denom = std::max(x.norm(), std::numeric_limits<double>::min());
    return (x - l - s).norm() / denom;
}

namespace {

Decomposition run_alm(const DataMatrix& x, const SolverConfig& config) {
    config.validate();
    if (x.size() == 0) throw std::invalid_argument("solve: input matrix is empty");
    require_finite(x, "solve");

    const double lambda = config.lambda_for(x.rows(), x.cols());
    const bool log_rank = config.variant == SolverVariant::LlsRpca;

    Decomposition dec;
    dec.low_rank = DataMatrix::Zero(x.rows(), x.cols());
    dec.sparse = DataMatrix::Zero(x.rows(), x.cols());
    MultiplierState mult{DataMatrix::Zero(x.rows(), x.cols()), config.rho0};

    for (int iter = 1; iter <= config.max_iter; ++iter) {
        const double rho = mult.rho;
        try {
            const SpectralShrinkage step =
                log_rank ? logdet_svt_with_spectrum(x - dec.sparse + mult.theta / rho,
                                                    ShrinkageThreshold(1.0 / rho))
                         : nuclear_svt_with_spectrum(x - dec.sparse + mult.theta / rho,
                                                     ShrinkageThreshold(1.0 / rho));
            dec.low_rank = step.matrix;

            const DataMatrix target = x - dec.low_rank + mult.theta / rho;
            const ShrinkageThreshold tau_s(lambda / rho);
            switch (config.variant) {
                case SolverVariant::LlsRpca: dec.sparse = l2log_shrink(target, tau_s); break;
                case SolverVariant::RpcaL1: dec.sparse = soft_threshold(target, tau_s); break;
                case SolverVariant::RpcaL21: dec.sparse = group_shrink_l21(target, tau_s); break;
            }

            double rank_term = 0.0;
            for (Index i = 0; i < step.singulars.size(); ++i)
                rank_term += log_rank ? std::log1p(step.singulars(i)) : step.singulars(i);
            double sparse_term = 0.0;
            switch (config.variant) {
                case SolverVariant::LlsRpca: sparse_term = l2log_norm(dec.sparse); break;
                case SolverVariant::RpcaL1: sparse_term = dec.sparse.array().abs().sum(); break;
                case SolverVariant::RpcaL21: sparse_term = dec.sparse.colwise().norm().sum(); break;
            }
            dec.objective_trace.push_back(rank_term + lambda * sparse_term);
        } catch (const NumericError& e) {
            throw NumericError(std::string(e.what()) + " (iteration " + std::to_string(iter) +
                               ")");
        }

        mult.theta += rho * (x - dec.low_rank - dec.sparse);
        mult.rho = rho * config.kappa;
        dec.rho_trace.push_back(mult.rho);

        dec.iterations = iter;
        dec.final_residual = residual(x, dec.low_rank, dec.sparse);
        if (dec.final_residual <= config.tol) {
            dec.converged = true;
            break;
        }
    }
    return dec;
}

}  // namespace

Decomposition solve_lls_rpca(const DataMatrix& x, const SolverConfig& config) {
    SolverConfig c = config;
    c.variant = SolverVariant::LlsRpca;
    return run_alm(x, c);
}

Decomposition solve_rpca_l1(const DataMatrix& x, const SolverConfig& config) {
    SolverConfig c = config;
    c.variant = SolverVariant::RpcaL1;
    return run_alm(x, c);
}

Decomposition solve_rpca_l21(const DataMatrix& x, const SolverConfig& config) {
    SolverConfig c = config;
    c.variant = SolverVariant::RpcaL21;
    return run_alm(x, c);
}

Decomposition solve(const DataMatrix& x, const SolverConfig& config) {
    return run_alm(x, config);
}

}  // namespace llsrpca
