#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "conc/bounds.hpp"
#include "conc/errors.hpp"
#include "conc/subweibull.hpp"

using namespace conc;
using namespace conc::bounds;

namespace {

BoundInputs golden_inputs() {
    BoundInputs in;
    in.alpha = 1.0;
    in.C_Theta = 1.0;
    in.C_Z = 1.0;
    in.gamma2 = 1.0;
    in.gamma_alpha = 1.0;
    in.T = 1000;
    in.n = 50;
    in.eps1 = 4.0;
    in.eps2 = 1.0;
    in.r = 2.0;
    in.s = 2.0;
    in.beta = beta_from_envelope(mixing::MixingEnvelope::polynomial(10.0));
    return in;
}

BoundInputs random_inputs(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    BoundInputs in;
    in.alpha = 0.5 + 2.5 * u(rng);
    in.C_Theta = 0.1 + 5 * u(rng);
    in.C_Z = 0.1 + 5 * u(rng);
    in.gamma2 = 3 * u(rng);
    in.gamma_alpha = 3 * u(rng);
    in.T = 100 + static_cast<long long>(5000 * u(rng));
    in.n = 1 + static_cast<long long>(40 * u(rng));
    in.eps1 = 2.0 + 10 * u(rng);
    in.eps2 = 0.01 + 2 * u(rng);
    in.r = 1.0 + 2 * u(rng);
    in.s = 0.5 + 8 * u(rng);
    in.beta = beta_from_envelope(mixing::MixingEnvelope::polynomial(5.0 + 5 * u(rng)));
    return in;
}

bool feasible(const BoundInputs& in) {
    return (in.T / in.n) * (in.n + 1) > in.T;
}

}  // namespace

TEST(EffectiveSampleSize, Examples) {
    auto a = effective_sample_size(10000, 10.0);
    EXPECT_DOUBLE_EQ(a.eta, 0.5);
    EXPECT_EQ(a.n, 100);
    auto b = effective_sample_size(2, 5.0);
    EXPECT_DOUBLE_EQ(b.eta, 1.0 / 7.0);
    EXPECT_EQ(b.n, 2);
    EXPECT_THROW(effective_sample_size(10, 4.0), DomainError);
    EXPECT_EQ(effective_sample_size(1000000, 10.0).n, 1000);
    EXPECT_EQ(effective_sample_size(2000, 10.0).n, 45);
}

TEST(TheoremBound, GoldenValue) {
    const auto r = theorem_bound(golden_inputs());
    // Reference values evaluated at 30 digits from the composed formula.
    EXPECT_NEAR(r.terms[0], 43.962889680445803294, 1e-12 * 44);
    EXPECT_NEAR(r.terms[1], 427.36705189661628468, 1e-12 * 427);
    EXPECT_NEAR(r.terms[2], 1.0, 1e-15);
    EXPECT_NEAR(r.threshold, 472.32994157706208797, 1e-12 * 472);
    EXPECT_NEAR(r.compact_threshold, 1459.4994457143394176, 1e-12 * 1459);
    EXPECT_NEAR(r.raw_prob, 1.9332439925279606403, 1e-12 * 2);
    EXPECT_EQ(r.failure_prob, 1.0);
    EXPECT_TRUE(r.vacuous);
}

TEST(TheoremBound, TermsSumToThreshold) {
    std::mt19937_64 rng(1);
    for (int i = 0; i < 200; ++i) {
        auto in = random_inputs(rng);
        if (!feasible(in)) continue;
        const auto r = theorem_bound(in);
        EXPECT_EQ(r.threshold, r.terms[0] + r.terms[1] + r.terms[2]);
        EXPECT_GE(r.failure_prob, 0.0);
        EXPECT_LE(r.failure_prob, 1.0);
    }
}

TEST(TheoremBound, IidReduction) {
    BoundInputs in;
    in.alpha = 2.0;
    in.C_Theta = 1.3;
    in.C_Z = 0.7;
    in.T = 500;
    in.n = 500;
    in.eps1 = 3.0;
    in.eps2 = 0.5;
    in.beta = beta_zero();
    const auto r = theorem_bound(in);
    const auto c = tail_constants(2.0);
    const double expected =
        c.c_alpha * 1.3 * (std::sqrt(3.0) / std::sqrt(500.0) + std::sqrt(3.0) / std::sqrt(500.0)) + 0.7 * 0.5;
    EXPECT_NEAR(r.compact_threshold, expected, 1e-12);
    EXPECT_NEAR(r.raw_prob, 5.0 * std::exp(-3.0), 1e-15);
    EXPECT_EQ(r.terms[1], 0.0);
}

TEST(TheoremBound, CompactDominatesDecomposed) {
    std::mt19937_64 rng(2);
    for (int i = 0; i < 500; ++i) {
        auto in = random_inputs(rng);
        if (!feasible(in)) continue;
        const auto r = theorem_bound(in);
        EXPECT_LE(r.threshold, r.compact_threshold * (1 + 1e-12));
    }
}

TEST(TheoremBound, Monotonicity) {
    std::mt19937_64 rng(3);
    int checked = 0;
    while (checked < 500) {
        auto in = random_inputs(rng);
        if (!feasible(in)) continue;
        const auto base = theorem_bound(in);
        auto bump = [&](auto mutate) {
            BoundInputs j = in;
            mutate(j);
            return theorem_bound(j);
        };
        EXPECT_GE(bump([](BoundInputs& j) { j.C_Theta *= 1.5; }).threshold, base.threshold);
        EXPECT_GE(bump([](BoundInputs& j) { j.C_Z *= 1.5; }).threshold, base.threshold);
        EXPECT_GE(bump([](BoundInputs& j) { j.gamma2 += 0.5; }).threshold, base.threshold);
        EXPECT_GE(bump([](BoundInputs& j) { j.gamma_alpha += 0.5; }).threshold, base.threshold);
        EXPECT_GE(bump([](BoundInputs& j) { j.eps1 += 1.0; }).threshold, base.threshold);
        EXPECT_GE(bump([](BoundInputs& j) { j.eps2 += 1.0; }).threshold, base.threshold);
        EXPECT_LE(bump([](BoundInputs& j) { j.eps1 += 1.0; }).raw_prob, base.raw_prob);
        EXPECT_LE(bump([](BoundInputs& j) { j.eps2 += 1.0; }).raw_prob, base.raw_prob);
        BoundInputs bigger_n = in;
        bigger_n.n += 1;
        if (bigger_n.n <= in.T && feasible(bigger_n)) {
            EXPECT_LE(theorem_bound(bigger_n).threshold, base.threshold * (1 + 1e-12));
        }
        BoundInputs bigger_T = in;
        bigger_T.T += in.n + 1;
        if (feasible(bigger_T)) {
            // Lag floor(T/(n+1)) grows with T, so only the exponential term is monotone by itself.
            bigger_T.beta = beta_zero();
            BoundInputs same = in;
            same.beta = beta_zero();
            EXPECT_GE(theorem_bound(bigger_T).raw_prob, theorem_bound(same).raw_prob);
        }
        ++checked;
    }
}

TEST(TheoremBound, Validation) {
    auto in = golden_inputs();
    in.eps1 = 1.9;
    EXPECT_THROW(theorem_bound(in), DomainError);
    in = golden_inputs();
    in.eps2 = 0.0;
    EXPECT_THROW(theorem_bound(in), DomainError);
    in = golden_inputs();
    in.r = 0.5;
    EXPECT_THROW(theorem_bound(in), DomainError);
    in = golden_inputs();
    in.n = 0;
    EXPECT_THROW(theorem_bound(in), InvalidArgument);
    in = golden_inputs();
    in.T = 5;
    in.n = 3;
    EXPECT_THROW(theorem_bound(in), BlockingInfeasible);
}

TEST(SimplifiedBound, ProbabilityAndCouplingTerm) {
    BoundInputs in;
    in.alpha = 2.0;
    in.beta = beta_zero();
    const auto r = simplified_bound(100, 10, 5.0, in);
    EXPECT_NEAR(r.raw_prob, 130.0 * std::exp(-5.0), 1e-12);
    EXPECT_NEAR(r.failure_prob, 0.876, 1e-3);
    EXPECT_EQ(r.terms[2], 0.0);
    EXPECT_THROW(simplified_bound(100, 10, 1.5, in), DomainError);
}

TEST(SimplifiedBound, NondecreasingInEps) {
    BoundInputs in;
    in.alpha = 1.0;
    in.gamma2 = 1.0;
    in.gamma_alpha = 1.0;
    in.beta = beta_from_envelope(mixing::MixingEnvelope::polynomial(6.0));
    double prev = 0.0;
    for (double eps = 2.0; eps < 20.0; eps += 0.5) {
        const double t = simplified_bound(1000, 30, eps, in).threshold;
        EXPECT_GE(t, prev);
        prev = t;
    }
}

TEST(OracleBound, Fixtures) {
    const auto r = oracle_inequality_bound(1000000, 10.0, 1.0, 0.0, 1.0, 0.0);
    EXPECT_EQ(r.n, 1000);
    EXPECT_NEAR(r.bound, 0.083112906813455496252, 1e-12 * 0.0831);
    const auto full = oracle_inequality_bound(1000000, 10.0, 2.0, 3.0, 1.5, 0.5);
    const double expected = 1.5 * (2.0 * 0.083112906813455496252 + 3.0 * 0.0069077552789821370521 +
                                   0.5 * 0.03162277660168379332);
    EXPECT_NEAR(full.bound, expected, 1e-12 * expected);
    EXPECT_NEAR(full.prob, 1.0 - 13.0 / 1000.0, 1e-15);
    EXPECT_EQ(oracle_inequality_bound(1000, 10.0, 0.0, 0.0, 1.0, 0.0).bound, 0.0);
    const auto small = oracle_inequality_bound(100, 10.0, 1.0, 1.0, 1.0, 1.0);
    EXPECT_EQ(small.n, 10);
    EXPECT_EQ(small.prob, 0.0);
    EXPECT_TRUE(small.vacuous);
    EXPECT_THROW(oracle_inequality_bound(100, 3.0, 1.0, 1.0, 1.0, 1.0), DomainError);
}

TEST(NNBound, Fixtures) {
    const auto r = nn_bound(1000000, 10.0, 4, 2.0);
    EXPECT_EQ(r.n, 1000);
    const double expected = 2.0 * (0.1662258136269109925 + 0.027631021115928548208 + 0.037232974110590341328);
    EXPECT_NEAR(r.bound, expected, 1e-12 * expected);
    const auto d1 = nn_bound(1000000, 10.0, 1, 1.0);
    EXPECT_NEAR(d1.bound, 0.083112906813455496252 + 0.0069077552789821370521, 1e-12);
    EXPECT_THROW(nn_bound(7, 10.0, 1, 1.0), DomainError);
    EXPECT_THROW(nn_bound(100, 10.0, 0, 1.0), DomainError);
}

TEST(NNBound, NondecreasingInD) {
    std::mt19937_64 rng(4);
    std::uniform_int_distribution<long long> T(8, 1000000);
    std::uniform_real_distribution<double> z(4.5, 20.0);
    for (int i = 0; i < 500; ++i) {
        const long long t = T(rng);
        const double zeta = z(rng);
        double prev = 0.0;
        for (long long d = 1; d <= 10; ++d) {
            const double b = nn_bound(t, zeta, d, 1.0).bound;
            EXPECT_GE(b, prev);
            prev = b;
        }
    }
}
