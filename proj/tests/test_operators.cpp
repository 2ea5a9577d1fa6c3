#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "llsrpca/operators.hpp"
#include "llsrpca/rng.hpp"
#include "test_support.hpp"

using namespace llsrpca;
using llsrpca::testing::random_matrix;
using llsrpca::testing::random_orthogonal;

namespace {
DataMatrix column(std::initializer_list<double> values) {
    DataMatrix m(static_cast<Index>(values.size()), 1);
    Index i = 0;
    for (double v : values) m(i++, 0) = v;
    return m;
}
}  // namespace

TEST_CASE("soft threshold shrinks entries toward zero") {
    DataMatrix y = column({3.0, -0.5});
    DataMatrix out = soft_threshold(y, ShrinkageThreshold(1.0));
    CHECK(out(0, 0) == doctest::Approx(2.0));
    CHECK(out(1, 0) == 0.0);

    Rng rng(1);
    DataMatrix any = random_matrix(rng, 7, 5, -4.0, 4.0);
    CHECK((soft_threshold(any, ShrinkageThreshold(0.0)) - any).norm() == 0.0);

    DataMatrix z = column({0.1, -2.7, 1.0});
    DataMatrix shrunk = soft_threshold(z, ShrinkageThreshold(1.0));
    CHECK(shrunk(0, 0) == 0.0);
    CHECK(shrunk(1, 0) == doctest::Approx(-1.7));
    CHECK(shrunk(2, 0) == 0.0);
    // entrywise ground truth from the brute-force minimizer of 0.5(x-|y|)^2 + tau*x
    for (Index i = 0; i < z.rows(); ++i) {
        const double want =
            scalar_prox_oracle(std::abs(z(i, 0)), 1.0, ScalarPenalty::Abs) * (z(i, 0) < 0 ? -1 : 1);
        CHECK(shrunk(i, 0) == doctest::Approx(want).epsilon(1e-6));
    }
}

TEST_CASE("operators reject non-finite input and negative tau") {
    DataMatrix bad = column({1.0, std::nan("")});
    CHECK_THROWS_AS(soft_threshold(bad, ShrinkageThreshold(1.0)), std::invalid_argument);
    CHECK_THROWS_AS(group_shrink_l21(bad, ShrinkageThreshold(1.0)), std::invalid_argument);
    CHECK_THROWS_AS(l2log_shrink(bad, ShrinkageThreshold(1.0)), std::invalid_argument);
    CHECK_THROWS_AS(logdet_svt(bad, ShrinkageThreshold(1.0)), std::invalid_argument);
    CHECK_THROWS_AS(ShrinkageThreshold(-0.1), std::invalid_argument);
}

TEST_CASE("group l21 shrinkage acts column-wise") {
    DataMatrix y = column({3.0, 4.0});  // norm 5
    DataMatrix out = group_shrink_l21(y, ShrinkageThreshold(1.0));
    CHECK(out(0, 0) == doctest::Approx(2.4));
    CHECK(out(1, 0) == doctest::Approx(3.2));

    DataMatrix zeros = DataMatrix::Zero(4, 2);
    CHECK(group_shrink_l21(zeros, ShrinkageThreshold(3.0)).norm() == 0.0);

    DataMatrix small = column({0.3, 0.4});  // norm 0.5 below tau
    CHECK(group_shrink_l21(small, ShrinkageThreshold(1.0)).norm() == 0.0);
    CHECK(scalar_prox_oracle(0.5, 1.0, ScalarPenalty::Abs) == doctest::Approx(0.0).epsilon(1e-6));
}

TEST_CASE("logdet SVT keeps large singular values and kills small ones") {
    DataMatrix d = DataMatrix::Zero(2, 2);
    d(0, 0) = 3.0;
    d(1, 1) = 0.5;
    DataMatrix out = logdet_svt(d, ShrinkageThreshold(1.0));
    CHECK(out(0, 0) == doctest::Approx(1.0 + std::sqrt(3.0)).epsilon(1e-12));
    CHECK(std::abs(out(1, 1)) < 1e-12);
    CHECK(std::abs(out(0, 1)) < 1e-12);

    Rng rng(2);
    DataMatrix any = random_matrix(rng, 9, 6, -2.0, 2.0);
    CHECK((logdet_svt(any, ShrinkageThreshold(0.0)) - any).norm() / any.norm() < 1e-10);

    for (double tau : {0.1, 0.25, 1.0, 5.0})
        CHECK(logdet_svt(DataMatrix::Zero(5, 4), ShrinkageThreshold(tau)).norm() == 0.0);
}

TEST_CASE("logdet SVT spectrum stays nonnegative") {
    Rng rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        DataMatrix d = random_matrix(rng, 6, 5, -0.3, 0.3);  // small singular values
        const auto result = logdet_svt_with_spectrum(d, ShrinkageThreshold(0.1));
        CHECK(result.singulars.minCoeff() >= 0.0);
    }
}

TEST_CASE("l2log shrinkage acts column-wise with the log rule") {
    DataMatrix y = column({0.0, 3.0});
    DataMatrix out = l2log_shrink(y, ShrinkageThreshold(1.0));
    CHECK(out(0, 0) == 0.0);
    CHECK(out(1, 0) == doctest::Approx(1.0 + std::sqrt(3.0)).epsilon(1e-12));

    Rng rng(4);
    DataMatrix any = random_matrix(rng, 8, 5, -2.0, 2.0);
    CHECK((l2log_shrink(any, ShrinkageThreshold(0.0)) - any).norm() / any.norm() < 1e-10);

    DataMatrix small = column({0.12, 0.16});  // norm 0.2: (1.2)^2/4 = 0.36 < tau
    CHECK(l2log_shrink(small, ShrinkageThreshold(1.0)).norm() == 0.0);

    DataMatrix with_zero(3, 2);
    with_zero.col(0).setZero();
    with_zero.col(1) << 1.0, 2.0, 2.0;
    DataMatrix shrunk = l2log_shrink(with_zero, ShrinkageThreshold(0.5));
    CHECK(shrunk.col(0).norm() == 0.0);
}

TEST_CASE("scalar prox oracle endpoints and closed-form cross-check") {
    CHECK(scalar_prox_oracle(3.0, 0.0, ScalarPenalty::Log1p) == doctest::Approx(3.0).epsilon(1e-9));
    CHECK(scalar_prox_oracle(0.0, 1.0, ScalarPenalty::Log1p) == 0.0);
    CHECK(scalar_prox_oracle(3.0, 1.0, ScalarPenalty::Log1p) ==
          doctest::Approx(1.0 + std::sqrt(3.0)).epsilon(1e-6));
    CHECK_THROWS_AS(scalar_prox_oracle(-1.0, 1.0, ScalarPenalty::Log1p), std::invalid_argument);
    CHECK_THROWS_AS(scalar_prox_oracle(1.0, -1.0, ScalarPenalty::Log1p), std::invalid_argument);
}

TEST_CASE("l2log norm sums log(1 + column norm)") {
    CHECK(l2log_norm(DataMatrix::Zero(3, 4)) == 0.0);

    DataMatrix one_col = column({std::exp(1.0) - 1.0});
    CHECK(l2log_norm(one_col) == doctest::Approx(1.0).epsilon(1e-12));

    DataMatrix two(2, 2);
    two.col(0) << 1.0, 0.0;
    two.col(1) << 0.0, 3.0;
    const double direct = std::log1p(two.col(0).norm()) + std::log1p(two.col(1).norm());
    CHECK(l2log_norm(two) == doctest::Approx(std::log(2.0) + std::log(4.0)).epsilon(1e-12));
    CHECK(l2log_norm(two) == doctest::Approx(direct).epsilon(1e-14));
}

TEST_CASE("logdet surrogate sums log(1 + singular value)") {
    CHECK(logdet_surrogate(DataMatrix::Zero(4, 3)) == 0.0);

    DataMatrix d = DataMatrix::Zero(2, 2);
    d(0, 0) = std::exp(1.0) - 1.0;
    CHECK(logdet_surrogate(d) == doctest::Approx(1.0).epsilon(1e-12));

    d(0, 0) = 1.0;
    d(1, 1) = 3.0;
    CHECK(logdet_surrogate(d) == doctest::Approx(std::log(2.0) + std::log(4.0)).epsilon(1e-12));
}

TEST_CASE("thin SVD factors reconstruct the input") {
    Rng rng(5);
    for (Index rows : {3, 10, 17})
        for (Index cols : {8, 4}) {
            DataMatrix m = random_matrix(rng, rows, cols, -3.0, 3.0);
            const SvdFactors f = thin_svd(m);
            CHECK((f.left * f.singulars.asDiagonal() * f.right.transpose() - m).norm() / m.norm() <
                  1e-10);
            for (Index i = 0; i + 1 < f.singulars.size(); ++i)
                CHECK(f.singulars(i) >= f.singulars(i + 1));
            CHECK(f.singulars.minCoeff() >= 0.0);
        }
}

TEST_CASE("nuclear SVT soft-thresholds the spectrum") {
    DataMatrix d = DataMatrix::Zero(3, 3);
    d(0, 0) = 5.0;
    d(1, 1) = 1.5;
    d(2, 2) = 0.5;
    DataMatrix out = nuclear_svt(d, ShrinkageThreshold(1.0));
    CHECK(out(0, 0) == doctest::Approx(4.0));
    CHECK(out(1, 1) == doctest::Approx(0.5));
    CHECK(std::abs(out(2, 2)) < 1e-12);
}

TEST_CASE("closed forms match the brute-force oracle") {
    Rng rng(20240);
    double max_dev = 0.0;
    for (int trial = 0; trial < 120; ++trial) {
        const double a = rng.uniform(0.0, 10.0);
        const double tau = rng.uniform(0.0, 5.0);
        const double want = scalar_prox_oracle(a, tau, ScalarPenalty::Log1p);

        Eigen::Vector3d dir(rng.next_gaussian(), rng.next_gaussian(), rng.next_gaussian());
        dir.normalize();
        DataMatrix col = a * dir;
        const double got_col = l2log_shrink(col, ShrinkageThreshold(tau)).col(0).norm();
        max_dev = std::max(max_dev, std::abs(got_col - want));

        DataMatrix diag = DataMatrix::Zero(2, 2);
        diag(0, 0) = a;
        diag(1, 1) = 0.3 * a;
        DataMatrix svt = logdet_svt(diag, ShrinkageThreshold(tau));
        max_dev = std::max(max_dev, std::abs(svt(0, 0) - want));
    }
    CHECK(max_dev < 1e-5);
}

TEST_CASE("every output column is a nonnegative multiple of its input") {
    Rng rng(6);
    DataMatrix y = random_matrix(rng, 10, 12, -3.0, 3.0);
    for (double tau : {0.0, 0.2, 1.0, 4.0}) {
        DataMatrix w = l2log_shrink(y, ShrinkageThreshold(tau));
        for (Index j = 0; j < y.cols(); ++j) {
            const double in_norm = y.col(j).norm();
            const double out_norm = w.col(j).norm();
            const double scale = out_norm / in_norm;
            CHECK(scale >= 0.0);
            CHECK(scale <= 1.0 + 1e-12);
            // direction preserved: w = scale * y exactly
            CHECK((w.col(j) - scale * y.col(j)).norm() < 1e-9 * (1.0 + in_norm));
        }
    }
}

TEST_CASE("norm surrogates are unitarily invariant") {
    Rng rng(7);
    DataMatrix s = random_matrix(rng, 9, 7, -2.0, 2.0);
    DataMatrix q = random_orthogonal(rng, 9);
    CHECK(l2log_norm(q * s) == doctest::Approx(l2log_norm(s)).epsilon(1e-10));

    // column permutation
    DataMatrix permuted = s;
    permuted.col(0).swap(permuted.col(5));
    permuted.col(2).swap(permuted.col(6));
    CHECK(l2log_norm(permuted) == doctest::Approx(l2log_norm(s)).epsilon(1e-12));

    DataMatrix r = random_orthogonal(rng, 7);
    CHECK(logdet_surrogate(q * s * r.transpose()) ==
          doctest::Approx(logdet_surrogate(s)).epsilon(1e-10));
}

TEST_CASE("l2log shrinkage is monotone in tau") {
    Rng rng(8);
    DataMatrix y = random_matrix(rng, 8, 10, -2.0, 2.0);
    double prev_total = -1.0;
    std::size_t prev_survivors = y.cols() + 1;
    bool first = true;
    for (double tau : {0.0, 0.1, 0.3, 0.8, 1.5, 3.0, 6.0}) {
        DataMatrix w = l2log_shrink(y, ShrinkageThreshold(tau));
        std::size_t survivors = 0;
        double total = 0.0;
        for (Index j = 0; j < w.cols(); ++j) {
            const double n = w.col(j).norm();
            total += n;
            if (n > 0.0) ++survivors;
        }
        if (!first) {
            CHECK(total <= prev_total + 1e-12);
            CHECK(survivors <= prev_survivors);
        }
        prev_total = total;
        prev_survivors = survivors;
        first = false;
    }
}

TEST_CASE("shrinkage output certifies its minimization problem") {
    Rng rng(9);
    DataMatrix y = random_matrix(rng, 6, 15, -3.0, 3.0);
    for (double tau : {0.05, 0.5, 2.0}) {
        DataMatrix w = l2log_shrink(y, ShrinkageThreshold(tau));
        for (Index j = 0; j < y.cols(); ++j) {
            const auto objective = [&](const Eigen::VectorXd& cand) {
                return 0.5 * (y.col(j) - cand).squaredNorm() + tau * std::log1p(cand.norm());
            };
            const double at_w = objective(w.col(j));
            CHECK(at_w <= objective(Eigen::VectorXd::Zero(y.rows())) + 1e-10);
            CHECK(at_w <= objective(y.col(j)) + 1e-10);
        }
    }
}
