#include "llsrpca/operators.hpp"

#include <Eigen/SVD>
#include <cmath>

namespace llsrpca {

SvdFactors thin_svd(const DataMatrix& m) {
    Eigen::BDCSVD<DataMatrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (svd.info() != Eigen::Success)
        throw NumericError("thin_svd: singular value decomposition did not converge");
    return SvdFactors{svd.matrixU(), svd.singularValues(), svd.matrixV()};
}

double log_shrink_scalar(double a, double tau) {
    if (tau == 0.0) return a;
    const double one_plus = 1.0 + a;
    if (!(one_plus * one_plus > 4.0 * tau)) return 0.0;
    const double xi = 0.5 * (a - 1.0) + std::sqrt(0.25 * one_plus * one_plus - tau);
    if (!(xi > 0.0)) return 0.0;
    const double f_xi = 0.5 * (xi - a) * (xi - a) + tau * std::log1p(xi);
    const double f_zero = 0.5 * a * a;
    return f_xi <= f_zero ? xi : 0.0;
}

DataMatrix soft_threshold(const DataMatrix& y, ShrinkageThreshold tau) {
    require_finite(y, "soft_threshold");
    const double t = tau.value();
    return y.unaryExpr([t](double v) {
        const double mag = std::abs(v) - t;
        return mag > 0.0 ? (v > 0.0 ? mag : -mag) : 0.0;
    });
}

DataMatrix group_shrink_l21(const DataMatrix& y, ShrinkageThreshold tau) {
    require_finite(y, "group_shrink_l21");
    DataMatrix out = DataMatrix::Zero(y.rows(), y.cols());
    for (Index j = 0; j < y.cols(); ++j) {
        const double norm = y.col(j).norm();
        if (norm > tau.value()) out.col(j) = (1.0 - tau.value() / norm) * y.col(j);
    }
    return out;
}

namespace {

SpectralShrinkage shrink_spectrum(const DataMatrix& d, double tau, bool log_penalty) {
    require_finite(d, log_penalty ? "logdet_svt" : "nuclear_svt");
    SvdFactors f = thin_svd(d);
    Eigen::VectorXd shrunk(f.singulars.size());
    for (Index i = 0; i < f.singulars.size(); ++i)
        shrunk(i) = log_penalty ? log_shrink_scalar(f.singulars(i), tau)
                                : std::max(f.singulars(i) - tau, 0.0);
    return SpectralShrinkage{f.left * shrunk.asDiagonal() * f.right.transpose(), shrunk};
}

}  // namespace

SpectralShrinkage logdet_svt_with_spectrum(const DataMatrix& d, ShrinkageThreshold tau) {
    return shrink_spectrum(d, tau.value(), true);
}

DataMatrix logdet_svt(const DataMatrix& d, ShrinkageThreshold tau) {
    return logdet_svt_with_spectrum(d, tau).matrix;
}

SpectralShrinkage nuclear_svt_with_spectrum(const DataMatrix& d, ShrinkageThreshold tau) {
    return shrink_spectrum(d, tau.value(), false);
}

DataMatrix nuclear_svt(const DataMatrix& d, ShrinkageThreshold tau) {
    return nuclear_svt_with_spectrum(d, tau).matrix;
}

DataMatrix l2log_shrink(const DataMatrix& y, ShrinkageThreshold tau) {
    require_finite(y, "l2log_shrink");
    DataMatrix out = DataMatrix::Zero(y.rows(), y.cols());
    for (Index j = 0; j < y.cols(); ++j) {
        const double norm = y.col(j).norm();
        if (norm == 0.0) continue;
        const double shrunk = log_shrink_scalar(norm, tau.value());
        if (shrunk > 0.0) out.col(j) = (shrunk / norm) * y.col(j);
    }
    return out;
}

double l2log_norm(const DataMatrix& s) {
    double sum = 0.0;
    for (Index j = 0; j < s.cols(); ++j) sum += std::log1p(s.col(j).norm());
    return sum;
}

double logdet_surrogate(const DataMatrix& l) {
    const SvdFactors f = thin_svd(l);
    double sum = 0.0;
    for (Index i = 0; i < f.singulars.size(); ++i) sum += std::log1p(f.singulars(i));
    return sum;
}

double scalar_prox_oracle(double a, double tau, ScalarPenalty penalty) {
    if (!(a >= 0.0) || !std::isfinite(a))
        throw std::invalid_argument("scalar_prox_oracle: a must be finite and nonnegative");
    if (!(tau >= 0.0) || !std::isfinite(tau))
        throw std::invalid_argument("scalar_prox_oracle: tau must be finite and nonnegative");
    if (a == 0.0) return 0.0;

    const auto objective = [&](double x) {
        const double d = x - a;
        const double pen = penalty == ScalarPenalty::Log1p ? std::log1p(x) : x;  // x >= 0, |x| = x
        return 0.5 * d * d + tau * pen;
    };

    constexpr int kGridPoints = 1'000'001;
    const double h = a / (kGridPoints - 1);
    double best_x = 0.0;
    double best_f = objective(0.0);
    for (int i = 1; i < kGridPoints; ++i) {
        const double x = i * h;
        const double f = objective(x);
        if (f < best_f) {
            best_f = f;
            best_x = x;
        }
    }

    // Ternary refinement inside the bracketing cells.
    double lo = std::max(0.0, best_x - h);
    double hi = std::min(a, best_x + h);
    for (int it = 0; it < 200 && hi - lo > 1e-14; ++it) {
        const double m1 = lo + (hi - lo) / 3.0;
        const double m2 = hi - (hi - lo) / 3.0;
        if (objective(m1) < objective(m2))
            hi = m2;
        else
            lo = m1;
    }
    const double refined = 0.5 * (lo + hi);
    return objective(refined) < best_f ? refined : best_x;
}

}  // namespace llsrpca
