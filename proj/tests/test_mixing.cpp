#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "conc/errors.hpp"
#include "conc/mixing.hpp"

using namespace conc;
using namespace conc::mixing;

namespace {

MarkovChainSpec random_chain(std::size_t m, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.05, 1.0);
    std::vector<std::vector<double>> rows(m, std::vector<double>(m));
    for (auto& r : rows) {
        double s = 0.0;
        for (auto& v : r) s += (v = u(rng));
        for (auto& v : r) v /= s;
        // Force exact row sums.
        double t = 0.0;
        for (std::size_t y = 0; y + 1 < m; ++y) t += r[y];
        r[m - 1] = 1.0 - t;
    }
    return MarkovChainSpec::from_matrix(rows);
}

// Joint-law enumeration: P(Z_0 = x, Z_l = y) by summing over every path of
// length l, independent of matrix powers.
double beta_by_paths(const MarkovChainSpec& spec, std::size_t l) {
    const std::size_t m = spec.m;
    double total = 0.0;
    for (std::size_t x = 0; x < m; ++x) {
        std::vector<double> joint(m, 0.0);
        if (l == 0) {
            joint[x] = spec.pi[x];
        } else {
            std::vector<std::size_t> path(l, 0);
            for (;;) {
                double p = spec.pi[x];
                std::size_t prev = x;
                for (std::size_t k = 0; k < l; ++k) {
                    p *= spec.p(prev, path[k]);
                    prev = path[k];
                }
                joint[path[l - 1]] += p;
                std::size_t pos = 0;
                while (pos < l && ++path[pos] == m) path[pos++] = 0;
                if (pos == l) break;
            }
        }
        for (std::size_t y = 0; y < m; ++y) total += std::abs(joint[y] - spec.pi[x] * spec.pi[y]);
    }
    return 0.5 * total;
}

}  // namespace

TEST(ChainSpec, ValidatesInvariants) {
    EXPECT_THROW(MarkovChainSpec::from_matrix({{0.5, 0.6}, {0.5, 0.5}}), InvalidArgument);
    EXPECT_THROW(MarkovChainSpec::from_matrix({{1.2, -0.2}, {0.5, 0.5}}), InvalidArgument);
    EXPECT_THROW(MarkovChainSpec::from_matrix({{0.7, 0.3}, {0.3, 0.7}}, {0.9, 0.1}), InvalidArgument);
    EXPECT_THROW(MarkovChainSpec::from_matrix({{1.0, 0.0}, {0.0, 1.0}}), InvalidArgument);  // pi not unique
    EXPECT_THROW(MarkovChainSpec::from_matrix({{0.5, 0.5}}), InvalidArgument);
}

TEST(ChainSpec, StationarySolve) {
    auto s = MarkovChainSpec::from_matrix({{0.9, 0.1}, {0.4, 0.6}});
    EXPECT_NEAR(s.pi[0], 0.8, 1e-14);
    EXPECT_NEAR(s.pi[1], 0.2, 1e-14);
}

TEST(Simulate, IdentityChainIsConstant) {
    auto s = MarkovChainSpec::from_matrix({{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}}, {0.2, 0.3, 0.5});
    const auto path = simulate_markov_chain(s, 5, 99);
    for (auto z : path) EXPECT_EQ(z, path[0]);
}

TEST(Simulate, Deterministic) {
    auto s = MarkovChainSpec::two_state(0.3, 0.3);
    EXPECT_EQ(simulate_markov_chain(s, 1000, 5), simulate_markov_chain(s, 1000, 5));
    EXPECT_NE(simulate_markov_chain(s, 1000, 5), simulate_markov_chain(s, 1000, 6));
}

TEST(Simulate, IidChainPairsFactorize) {
    // Rows equal pi: consecutive pairs should pass a chi-square independence
    // test at the 1% level (df = 4, critical value 13.28).
    auto s = MarkovChainSpec::from_matrix({{0.2, 0.3, 0.5}, {0.2, 0.3, 0.5}, {0.2, 0.3, 0.5}});
    const std::size_t T = 100001;
    const auto path = simulate_markov_chain(s, T, 17);
    double counts[3][3] = {};
    for (std::size_t t = 0; t + 1 < T; t += 2) counts[path[t]][path[t + 1]] += 1.0;
    const double N = static_cast<double>(T / 2);
    double row[3] = {}, col[3] = {};
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
            row[a] += counts[a][b];
            col[b] += counts[a][b];
        }
    double chi2 = 0.0;
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
            const double e = row[a] * col[b] / N;
            chi2 += (counts[a][b] - e) * (counts[a][b] - e) / e;
        }
    EXPECT_LT(chi2, 13.28);
}

TEST(Ar1, IndependentCase) {
    const std::size_t T = 100000;
    auto x = simulate_ar1(0.0, 1.0, 1, T, 3);
    double m = 0.0, c = 0.0, v = 0.0;
    for (std::size_t t = 0; t < T; ++t) m += x(t, 0);
    m /= T;
    for (std::size_t t = 0; t < T; ++t) v += (x(t, 0) - m) * (x(t, 0) - m);
    for (std::size_t t = 0; t + 1 < T; ++t) c += (x(t, 0) - m) * (x(t + 1, 0) - m);
    EXPECT_NEAR(c / v, 0.0, 3.0 / std::sqrt(static_cast<double>(T)));
}

TEST(Ar1, LagOneAutocorrelation) {
    const std::size_t T = 100000;
    auto x = simulate_ar1(0.6, 1.0, 2, T, 4);
    for (std::size_t comp = 0; comp < 2; ++comp) {
        double m = 0.0, c = 0.0, v = 0.0;
        for (std::size_t t = 0; t < T; ++t) m += x(t, comp);
        m /= T;
        for (std::size_t t = 0; t < T; ++t) v += (x(t, comp) - m) * (x(t, comp) - m);
        for (std::size_t t = 0; t + 1 < T; ++t) c += (x(t, comp) - m) * (x(t + 1, comp) - m);
        EXPECT_NEAR(c / v, 0.6, 0.01);
    }
}

TEST(Ar1, StationaryStart) {
    const int reps = 100000;
    double s2 = 0.0;
    for (int r = 0; r < reps; ++r) {
        const double x0 = simulate_ar1(0.6, 1.0, 1, 1, static_cast<std::uint64_t>(r))(0, 0);
        s2 += x0 * x0;
    }
    const double target = 1.0 / (1.0 - 0.36);
    EXPECT_NEAR(s2 / reps, target, 0.02 * target);
    EXPECT_THROW(simulate_ar1(1.0, 1.0, 1, 10, 1), DomainError);
}

TEST(Beta, TwoStateClosedForm) {
    auto s = MarkovChainSpec::two_state(0.3, 0.3);
    for (std::size_t l = 0; l <= 20; ++l) {
        EXPECT_NEAR(beta_coefficient_exact(s, l), 0.5 * std::pow(0.4, static_cast<double>(l)), 1e-15) << l;
    }
    EXPECT_NEAR(beta_coefficient_exact(s, 1), 0.2, 1e-15);
}

TEST(Beta, IndependentAndIdentityChains) {
    auto iid = MarkovChainSpec::from_matrix({{0.2, 0.8}, {0.2, 0.8}});
    for (std::size_t l = 1; l <= 5; ++l) EXPECT_NEAR(beta_coefficient_exact(iid, l), 0.0, 1e-15);

    auto id = MarkovChainSpec::two_state(0.0, 0.0);
    for (std::size_t l = 1; l <= 5; ++l) EXPECT_NEAR(beta_coefficient_exact(id, l), 0.5, 1e-15);
}

TEST(Beta, MatchesPathEnumerationOracle) {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 40; ++trial) {
        auto s = random_chain(2 + trial % 3, rng);
        for (std::size_t l = 0; l <= 6; ++l) {
            EXPECT_NEAR(beta_coefficient_exact(s, l), beta_by_paths(s, l), 1e-12);
        }
    }
}

TEST(Beta, SequenceNonincreasing) {
    std::mt19937_64 rng(22);
    for (int trial = 0; trial < 200; ++trial) {
        auto s = random_chain(2 + trial % 4, rng);
        const auto b = beta_sequence(s, 30);
        for (std::size_t l = 1; l < b.size(); ++l) EXPECT_LE(b[l], b[l - 1] + 1e-15);
    }
}

TEST(Beta, EigenvalueEnvelopeOnReversibleChains) {
    // Symmetric stochastic matrices are reversible w.r.t. the uniform law.
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t m = 2 + trial % 3;
        std::vector<std::vector<double>> A(m, std::vector<double>(m, 0.0));
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = i + 1; j < m; ++j) A[i][j] = A[j][i] = u(rng) / static_cast<double>(m);
        for (std::size_t i = 0; i < m; ++i) {
            double off = 0.0;
            for (std::size_t j = 0; j < m; ++j) off += i == j ? 0.0 : A[i][j];
            A[i][i] = 1.0 - off;
        }
        auto s = MarkovChainSpec::from_matrix(A, std::vector<double>(m, 1.0 / static_cast<double>(m)));
        const double lambda = second_eigenvalue_modulus(s);
        const double b1 = beta_coefficient_exact(s, 1);
        if (lambda < 1e-9 || b1 < 1e-12) continue;
        const double C = b1 / lambda;
        for (std::size_t l = 2; l <= 15; ++l) {
            EXPECT_LE(beta_coefficient_exact(s, l), C * std::pow(lambda, static_cast<double>(l)) * (1.0 + 1e-9) + 1e-14);
        }
    }
}

TEST(Envelope, Values) {
    auto p = MixingEnvelope::polynomial(10.0);
    EXPECT_NEAR(beta_envelope(p, 2), std::pow(2.0, -10.0), 1e-18);
    EXPECT_EQ(beta_envelope(p, 1), 1.0);
    EXPECT_EQ(beta_envelope(p, 0), 1.0);
    auto g = MixingEnvelope::geometric(0.5, 2.0);
    EXPECT_EQ(beta_envelope(g, 3), 0.25);
    EXPECT_THROW(MixingEnvelope::polynomial(4.0), DomainError);
    EXPECT_THROW(MixingEnvelope::geometric(1.0, 1.0), DomainError);
}

TEST(Envelope, FittedZetaByScan) {
    auto s = MarkovChainSpec::two_state(0.3, 0.3);
    const double zeta = fit_polynomial_zeta(s, 50);
    // Grid-scan oracle: largest zeta on a 1e-4 grid with 0.5*0.4^l <= l^-zeta.
    double scan = 0.0;
    for (double z = 0.0; z < 10.0; z += 1e-4) {
        bool ok = true;
        for (int l = 1; l <= 50 && ok; ++l) ok = 0.5 * std::pow(0.4, l) <= std::pow(l, -z);
        if (!ok) break;
        scan = z;
    }
    EXPECT_NEAR(zeta, scan, 2e-4);
    EXPECT_LT(zeta, 4.0);
}
