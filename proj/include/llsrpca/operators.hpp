#pragma once

#include "llsrpca/core.hpp"

namespace llsrpca {

/// Nonnegative shrinkage parameter tau. The ALM loop passes 1/rho for the
/// low-rank step and lambda/rho for the sparse step.
class ShrinkageThreshold {
  public:
    explicit ShrinkageThreshold(double tau) : tau_(tau) {
        if (!(tau >= 0.0) || !std::isfinite(tau))
            throw std::invalid_argument("ShrinkageThreshold: tau must be finite and nonnegative");
    }
    double value() const noexcept { return tau_; }

  private:
    double tau_;
};

/// Thin SVD of a matrix: left/right factors are column-orthonormal, singular
/// values are sorted nonincreasing.
struct SvdFactors {
    DataMatrix left;
    Eigen::VectorXd singulars;
    DataMatrix right;
};

/// Computes the thin SVD; throws NumericError if the decomposition fails.
SvdFactors thin_svd(const DataMatrix& m);

/// A singular-value shrinkage together with the shrunk spectrum, so callers
/// can evaluate rank surrogates without a second decomposition.
struct SpectralShrinkage {
    DataMatrix matrix;
    Eigen::VectorXd singulars;
};

/// argmin over x >= 0 of  0.5*(x - a)^2 + tau*log(1 + x).
///
/// The minimizer is xi = (a-1)/2 + sqrt((1+a)^2/4 - tau) whenever
/// (1+a)^2 > 4*tau, xi > 0 and f(xi) <= f(0); otherwise 0. The same scalar
/// rule drives both the singular-value and the column-norm shrinkages.
double log_shrink_scalar(double a, double tau);

/// Entrywise soft threshold: y -> sign(y) * max(|y| - tau, 0).
DataMatrix soft_threshold(const DataMatrix& y, ShrinkageThreshold tau);

/// Column-wise group shrinkage for the l2,1 penalty:
/// y_j -> max(1 - tau/||y_j||, 0) * y_j. Zero columns stay zero.
DataMatrix group_shrink_l21(const DataMatrix& y, ShrinkageThreshold tau);

/// Singular value thresholding with the log penalty: each singular value is
/// replaced by log_shrink_scalar(sigma, tau) and the matrix reassembled.
SpectralShrinkage logdet_svt_with_spectrum(const DataMatrix& d, ShrinkageThreshold tau);
DataMatrix logdet_svt(const DataMatrix& d, ShrinkageThreshold tau);

/// Classic nuclear-norm SVT: soft threshold applied to the singular values.
SpectralShrinkage nuclear_svt_with_spectrum(const DataMatrix& d, ShrinkageThreshold tau);
DataMatrix nuclear_svt(const DataMatrix& d, ShrinkageThreshold tau);

/// Column-wise shrinkage for the l2,log penalty: column y_j is rescaled to
/// norm log_shrink_scalar(||y_j||, tau); columns shrunk to zero are zeroed.
DataMatrix l2log_shrink(const DataMatrix& y, ShrinkageThreshold tau);

/// l2,log norm: sum over columns of log(1 + ||s_j||_2).
double l2log_norm(const DataMatrix& s);

/// Low-rank surrogate: sum over singular values of log(1 + sigma_i).
double logdet_surrogate(const DataMatrix& l);

enum class ScalarPenalty { Log1p, Abs };

/// Brute-force ground truth for argmin over x in [0, a] of
/// 0.5*(x - a)^2 + tau*penalty(x): dense grid of 1e6+1 points followed by
/// ternary refinement around the grid minimum. Accurate to 1e-6 absolute.
/// Kept free of the closed forms above so it can validate them.
double scalar_prox_oracle(double a, double tau, ScalarPenalty penalty);

}  // namespace llsrpca
