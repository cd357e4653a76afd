#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "conc/errors.hpp"
#include "conc/subweibull.hpp"

using namespace conc;
using namespace conc::subweibull;

namespace {

// Reference values computed once at 30 digits.
struct ConstantFixture {
    double alpha, c1, c3;
};
constexpr ConstantFixture kFixtures[] = {
    {0.5, 35.536489876546376005, 299.85819089145371151},
    {1.0, 6.5493038901317706272, 10.448648243567901932},
    {2.0, 3.5592324598646795131, 5.2750738656235848489},
    {3.0, 3.0972517740429602966, 4.4997312062109925161},
};

std::vector<double> exponential_sample(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::exponential_distribution<double> exp1(1.0);
    std::vector<double> xs(n);
    for (auto& x : xs) x = exp1(rng);
    return xs;
}

}  // namespace

TEST(PsiAlpha, MatchesDefinition) {
    EXPECT_DOUBLE_EQ(psi_alpha(0.0, 2.0), 0.0);
    EXPECT_NEAR(psi_alpha(1.0, 1.0), std::numbers::e - 1.0, 1e-15);
    EXPECT_NEAR(psi_alpha(2.0, 0.5), std::exp(std::sqrt(2.0)) - 1.0, 1e-13);
    EXPECT_THROW(psi_alpha(1.0, 0.0), DomainError);
    EXPECT_THROW(psi_alpha(-1.0, 2.0), DomainError);
}

TEST(PsiNorm, ZeroSampleHasZeroNorm) {
    std::vector<double> zeros(10, 0.0);
    EXPECT_EQ(estimate_psi_norm(zeros, 2.0).norm, 0.0);
}

TEST(PsiNorm, PointMassClosedForm) {
    // exp((a/c)^alpha) - 1 = 1  =>  c = a / (log 2)^{1/alpha}
    for (double alpha : {0.5, 1.0, 2.0}) {
        std::vector<double> x{3.0};
        const double expected = 3.0 / std::pow(std::numbers::ln2, 1.0 / alpha);
        EXPECT_NEAR(estimate_psi_norm(x, alpha).norm, expected, 1e-8 * expected) << alpha;
    }
}

TEST(PsiNorm, ExponentialSampleNearTwo) {
    const auto xs = exponential_sample(100000, 7);
    EXPECT_NEAR(estimate_psi_norm(xs, 1.0).norm, 2.0, 0.1);
}

TEST(PsiNorm, WeightedMatchesSymmetricTwoPoint) {
    // +-1 with equal weight is the point mass at 1 after taking |x|.
    std::vector<double> v{-1.0, 1.0}, w{0.5, 0.5};
    EXPECT_NEAR(estimate_psi_norm(v, w, 2.0).norm, 1.0 / std::sqrt(std::numbers::ln2), 1e-8);
}

TEST(PsiNorm, WeightedRejectsBadWeights) {
    std::vector<double> v{1.0, 2.0};
    std::vector<double> bad{0.7, 0.7};
    std::vector<double> short_w{1.0};
    EXPECT_THROW(estimate_psi_norm(v, bad, 2.0), InvalidArgument);
    EXPECT_THROW(estimate_psi_norm(v, short_w, 2.0), InvalidArgument);
}

TEST(PsiNorm, SmallAlphaWidensBracket) {
    std::vector<double> x{1.0, 2.0};
    const double c = estimate_psi_norm(x, 0.1).norm;
    double mean = 0.0;
    for (double v : x) mean += std::expm1(std::pow(v / c, 0.1));
    EXPECT_NEAR(mean / 2.0, 1.0, 1e-6);
}

TEST(TailBound, Formula) {
    SubWeibullParams p{2.0, 1.5};
    EXPECT_NEAR(tail_bound(3.0, p), 2.0 * std::exp(-4.0), 1e-15);
    EXPECT_EQ(tail_bound(0.0, p), 1.0);
    EXPECT_EQ(tail_bound(1.0, {2.0, 0.0}), 0.0);
}

TEST(Constants, C2AndC4Exact) {
    EXPECT_EQ(sum_const_c2(0.5), 4.0);
    EXPECT_EQ(sum_const_c2(2.0), 1.0);
    EXPECT_EQ(latala_const_c4(1.0), 4.0 * std::numbers::e);
    EXPECT_EQ(latala_const_c4(3.0), 4.0 * std::numbers::e);
}

TEST(Constants, C1AndC3Fixtures) {
    for (const auto& f : kFixtures) {
        EXPECT_NEAR(moment_const_c1(f.alpha), f.c1, 1e-12 * f.c1) << f.alpha;
        EXPECT_NEAR(centering_const_c3(f.alpha), f.c3, 1e-12 * f.c3) << f.alpha;
    }
}

TEST(Constants, C4SmallAlphaFixture) {
    EXPECT_NEAR(latala_const_c4(0.5), 4621.1071616975672087, 1e-12 * 4621.1);
}

TEST(LpBound, DominatesExponentialMoments) {
    const auto xs = exponential_sample(100000, 11);
    const auto params = estimate_psi_norm(xs, 1.0);
    for (int p = 1; p <= 6; ++p) {
        double m = 0.0;
        for (double x : xs) m += std::pow(x, p);
        const double lp = std::pow(m / static_cast<double>(xs.size()), 1.0 / p);
        EXPECT_LE(lp, lp_bound_from_psi(p, params)) << "p=" << p;
    }
    EXPECT_THROW(lp_bound_from_psi(0, params), DomainError);
}

TEST(LatalaBound, RequiresPAtLeastTwo) {
    EXPECT_THROW(latala_sum_lp_bound(1.0, 10, 1.5), DomainError);
    const double c4 = latala_const_c4(2.0);
    EXPECT_NEAR(latala_sum_lp_bound(2.0, 16, 4.0), c4 * (2.0 * 4.0 + 8.0), 1e-12);
    EXPECT_NEAR(latala_sum_lp_bound(0.5, 4, 2.0), latala_const_c4(0.5) * (4.0 + std::sqrt(8.0)), 1e-9);
}

TEST(TailFromLp, Composition) {
    const auto t = tail_from_lp(2.0, 3.0, 1.0, 4.0);
    EXPECT_NEAR(t.threshold, std::numbers::e * (2.0 * 2.0 + 3.0 * 4.0), 1e-12);
    EXPECT_NEAR(t.prob, std::numbers::e * std::exp(-4.0), 1e-15);
    EXPECT_EQ(tail_from_lp(1.0, 1.0, 1.0, 0.5).prob, 1.0);
}

TEST(SumConcentration, ConstantsComposeAsDocumented) {
    const double e = std::numbers::e;
    // alpha = 1: k = 2, m = 2.
    auto k = sum_concentration_constants(1.0);
    EXPECT_NEAR(k.lp_sqrt, 2.0 * (4.0 * e * 2.0 + std::numbers::ln2), 1e-12);
    EXPECT_NEAR(k.lp_power, 2.0 * 4.0 * e * 2.0, 1e-12);
    EXPECT_NEAR(k.tail_sqrt, e * k.lp_sqrt, 1e-12);
    // alpha = 2: k = sqrt 2, m = sqrt 2.
    k = sum_concentration_constants(2.0);
    EXPECT_NEAR(k.lp_sqrt, 2.0 * (4.0 * e + std::sqrt(std::numbers::ln2)), 1e-12);
    EXPECT_NEAR(k.lp_power, 2.0 * std::sqrt(2.0) * 4.0 * e, 1e-12);
}

TEST(SumConcentration, ThresholdScaling) {
    const auto k = sum_concentration_constants(2.0);
    const auto t = sum_concentration_bound(2.0, 1.5, 100, 3.0);
    const double expected = std::numbers::e * (k.lp_sqrt * 1.5 * 10.0 * std::sqrt(3.0) +
                                                k.lp_power * 1.5 * std::sqrt(100.0) * std::sqrt(3.0));
    EXPECT_NEAR(t.threshold, expected, 1e-9 * expected);
    EXPECT_THROW(sum_concentration_bound(2.0, 1.0, 0, 3.0), DomainError);
}

TEST(SumConcentration, DominatesGaussianSums) {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> normal;
    const long long n = 50;
    const double cx = std::sqrt(8.0 / 3.0);  // exact psi_2 norm of N(0, 1)
    const double eps = 3.0;
    const auto bound = sum_concentration_bound(2.0, cx, n, eps);
    int exceed = 0;
    const int reps = 20000;
    for (int r = 0; r < reps; ++r) {
        double s = 0.0;
        for (long long i = 0; i < n; ++i) s += normal(rng);
        exceed += std::abs(s) >= bound.threshold;
    }
    EXPECT_LE(static_cast<double>(exceed) / reps, bound.prob);
}
