#include "impcomp/eigen.hpp"
#include "impcomp/eigen_oracle.hpp"
#include "impcomp/tridiagonal.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

using namespace impcomp;

namespace {

constexpr double kPi = std::numbers::pi;

// Frozen from lambda_star(1, 1, 1); the oracle tests below pin it
// independently.
constexpr double kLambdaD1A1L1 = 1.6085328764616389;
constexpr double kRootD1A1L1 = 2.3311223704144224;

std::vector<double> log_grid(double lo, double hi, int n) {
    std::vector<double> out;
    for (int i = 0; i < n; ++i) out.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1)));
    return out;
}

}  // namespace

TEST(LambdaStar, AlphaZeroClosedForm) {
    const EigenResult r = lambda_star(1.0, 0.0, 1.0);
    EXPECT_EQ(r.case_tag, EigenCase::alpha_zero);
    EXPECT_NEAR(r.value, kPi * kPi / 4.0, 1e-14);
    EXPECT_NEAR(r.value, 2.4674011, 1e-7);
    EXPECT_NEAR(lambda_star(2.0, 0.0, 3.0).value, 2.0 * kPi * kPi / 36.0, 1e-14);
}

TEST(LambdaStar, CriticalCase) {
    const EigenResult r = lambda_star(1.0, 2.0, 1.0);
    EXPECT_EQ(r.case_tag, EigenCase::critical);
    EXPECT_NEAR(r.value, 1.0, 1e-14);
    EXPECT_FALSE(r.root.has_value());
    EXPECT_EQ(lambda_star(1.5, 1.0, 3.0).case_tag, EigenCase::critical);
}

TEST(LambdaStar, TangentBranchFrozenValue) {
    const EigenResult r = lambda_star(1.0, 1.0, 1.0);
    EXPECT_EQ(r.case_tag, EigenCase::subcritical_or_negative);
    EXPECT_NEAR(r.value, kLambdaD1A1L1, 1e-12);
    ASSERT_TRUE(r.root.has_value());
    EXPECT_NEAR(*r.root, kRootD1A1L1, 1e-12);
    // tan(z/2) = z is the D = alpha = l = 1 tangent equation.
    EXPECT_NEAR(std::tan(*r.root / 2.0), *r.root, 1e-9);
    EXPECT_NEAR(r.value, (1.0 + *r.root * *r.root) / 4.0, 1e-14);
    EXPECT_LT(r.residual, 1e-10);
}

TEST(LambdaStar, FrozenValueAgreesWithOracle) {
    // Second-order oracle: Richardson on N, 2N removes the h^2 term.
    const double a = eigen_oracle(1.0, 1.0, 1.0, 4000);
    const double b = eigen_oracle(1.0, 1.0, 1.0, 8000);
    EXPECT_NEAR((4.0 * b - a) / 3.0, kLambdaD1A1L1, 1e-8);
    EXPECT_NEAR(eigen_oracle(1.0, 1.0, 1.0, 2000), kLambdaD1A1L1, 1e-3);
}

TEST(LambdaStar, CaseTags) {
    EXPECT_EQ(lambda_star(1.0, 3.0, 1.0).case_tag, EigenCase::supercritical);
    EXPECT_EQ(lambda_star(1.0, 1.0, 1.0).case_tag, EigenCase::subcritical_or_negative);
    EXPECT_EQ(lambda_star(1.0, -1.0, 1.0).case_tag, EigenCase::subcritical_or_negative);
    EXPECT_EQ(lambda_star(1.0, 0.0, 1.0).case_tag, EigenCase::alpha_zero);
}

TEST(LambdaStar, SupercriticalRootSolvesExponentialEquation) {
    for (double alpha : {2.5, 4.0, 10.0, 20.0}) {
        const EigenResult r = lambda_star(1.0, alpha, 1.0);
        ASSERT_EQ(r.case_tag, EigenCase::supercritical);
        const double z = *r.root;
        ASSERT_GT(z, 0.0);
        ASSERT_LT(z, alpha);
        // e^{l z / D} = (alpha + z) / (alpha - z), compared in log form.
        EXPECT_NEAR(z, std::log((alpha + z) / (alpha - z)), 1e-9 * alpha);
        // z carries one ulp of alpha, so alpha - z has relative error ~ alpha ulp / (alpha - z).
        EXPECT_NEAR(r.value, (alpha - z) * (alpha + z) / 4.0, 1e-6 * r.value);
        EXPECT_GT(r.value, 0.0);
    }
}

TEST(LambdaStar, SupercriticalFarFromCriticalStaysPositive) {
    // alpha - z ~ 2 alpha e^{-l alpha/D} is below one ulp of alpha here.
    const EigenResult r = lambda_star(1.0, 40.0, 1.0);
    EXPECT_GT(r.value, 0.0);
    EXPECT_NEAR(r.value / (40.0 * 40.0 * std::exp(-40.0)), 1.0, 1e-6);
}

TEST(LambdaStar, InvalidInput) {
    EXPECT_THROW(lambda_star(0.0, 1.0, 1.0), ValidationError);
    EXPECT_THROW(lambda_star(1.0, 1.0, 0.0), ValidationError);
    EXPECT_THROW(lambda_star(1.0, NAN, 1.0), ValidationError);
}

TEST(LambdaStarProperty, StrictlyDecreasingInLength) {
    for (double D : {0.5, 1.0, 2.0}) {
        for (double alpha : {-2.0, -0.5, 0.0, 0.5, 1.0, 2.5}) {
            double prev = INFINITY;
            for (double l : log_grid(0.05, 20.0, 20)) {
                const double v = lambda_star(D, alpha, l).value;
                EXPECT_LT(v, prev) << "D=" << D << " alpha=" << alpha << " l=" << l;
                EXPECT_GT(v, 0.0);
                prev = v;
            }
        }
    }
}

TEST(LambdaStarProperty, LongHabitatWithUpstreamAdvection) {
    // exp(alpha x / 2D) underflows across the domain here.
    const EigenResult r = lambda_star(1.0, -2.0, 1000.0);
    EXPECT_NEAR(r.value, 1.0, 1e-5);
    EXPECT_GT(r.value, 1.0);
}

TEST(LambdaStarProperty, BlowsUpAsLengthShrinks) {
    for (double alpha : {-2.0, 0.0, 2.5}) EXPECT_GT(lambda_star(1.0, alpha, 1e-4).value, 1e6);
}

TEST(LambdaStarProperty, HalfLineLimitForNonpositiveAdvection) {
    for (double D : {0.5, 1.0, 1.2}) {
        for (double alpha : {-2.0, -0.8, -0.1, 0.0}) {
            const double l = 1e3 * D / std::max(std::abs(alpha), 1.0);
            EXPECT_NEAR(lambda_star(D, alpha, l).value, alpha * alpha / (4.0 * D), 1e-4);
            EXPECT_DOUBLE_EQ(lambda_star_limit(D, alpha), alpha * alpha / (4.0 * D));
        }
    }
}

TEST(LambdaStarProperty, HalfLineLimitForPositiveAdvectionIsZero) {
    // Both routes agree the large-l value tends to 0, not alpha^2/(4D).
    for (double alpha : {0.5, 0.8, 2.5}) {
        const double root = lambda_star(1.0, alpha, 50.0).value;
        const double oracle = eigen_oracle(1.0, alpha, 50.0, 8000);
        EXPECT_LT(root, 1e-6);
        EXPECT_LT(oracle, 1e-4);
        EXPECT_GT(alpha * alpha / 4.0 - oracle, 0.05);
        EXPECT_EQ(lambda_star_limit(1.0, alpha), 0.0);
    }
}

TEST(LambdaStarProperty, ContinuousAsAlphaVanishes) {
    for (double l : {0.5, 1.0, 3.0}) {
        const double base = kPi * kPi / (4.0 * l * l);
        EXPECT_NEAR(lambda_star(1.0, 1e-6, l).value, base, 1e-5);
        EXPECT_NEAR(lambda_star(1.0, -1e-6, l).value, base, 1e-5);
    }
}

TEST(LambdaStarProperty, ContinuousAcrossCriticalAdvection) {
    for (double D : {0.5, 1.0, 2.0}) {
        for (double l : {0.5, 1.0, 4.0}) {
            const double ac = 2.0 * D / l;
            const double crit = ac * ac / (4.0 * D);
            const EigenResult above = lambda_star(D, ac * (1.0 + 1e-7), l);
            const EigenResult below = lambda_star(D, ac * (1.0 - 1e-7), l);
            EXPECT_EQ(above.case_tag, EigenCase::supercritical);
            EXPECT_EQ(below.case_tag, EigenCase::subcritical_or_negative);
            EXPECT_NEAR(above.value, crit, 1e-6);
            EXPECT_NEAR(below.value, crit, 1e-6);
        }
    }
}

TEST(LambdaStarProperty, OracleAgreementGrid) {
    for (double alpha : {-2.0, -0.5, 0.0, 0.5, 2.5}) {
        for (double l : {0.5, 1.0, 2.0, 5.0, 10.0}) {
            const double v = lambda_star(1.0, alpha, l).value;
            EXPECT_NEAR(v, eigen_oracle(1.0, alpha, l, 4000), 1e-3 * std::max(1.0, v))
                << "alpha=" << alpha << " l=" << l;
        }
    }
}

TEST(LambdaStarProperty, ResidualSmallEverywhere) {
    for (double D : {0.3, 1.0, 3.0}) {
        for (double alpha : {-5.0, -1.0, 0.2, 1.0, 4.0}) {
            for (double l : {0.2, 1.0, 7.0}) EXPECT_LT(lambda_star(D, alpha, l).residual, 1e-10);
        }
    }
}

TEST(EigenOracle, Examples) {
    EXPECT_NEAR(eigen_oracle(1.0, 0.0, 1.0, 2000), 2.4674, 5e-4);
    EXPECT_NEAR(eigen_oracle(1.0, 2.0, 1.0, 2000), 1.0, 1e-3);
}

TEST(EigenOracle, SecondOrderConvergence) {
    const double exact = kPi * kPi / 4.0;
    const double e1 = std::abs(eigen_oracle(1.0, 0.0, 1.0, 500) - exact);
    const double e2 = std::abs(eigen_oracle(1.0, 0.0, 1.0, 1000) - exact);
    EXPECT_NEAR(e1 / e2, 4.0, 0.2);
}

TEST(EigenOracle, RejectsBadGrids) {
    EXPECT_THROW(eigen_oracle(1.0, 0.0, 1.0, 50), ValidationError);
    EXPECT_THROW(eigen_oracle(0.01, 10.0, 10.0, 100), ValidationError);
}

TEST(LambdaOne, Examples) {
    const Length inf = Length::half_line();
    // Half-line value with alpha <= 0: alpha^2/(4D) - ln(slope)/tau - gamma*a.
    EXPECT_NEAR(lambda_one(1.2, -0.8, 1.5, 1.0, 1.0, 2.0, inf), 0.64 / 4.8 - 1.5, 1e-14);
    // alpha > 0: the half-line eigenvalue is 0.
    EXPECT_NEAR(lambda_one(1.2, 0.8, 1.5, 1.0, 1.0, 2.0, inf), -1.5, 1e-14);
    for (double l : {0.3, 1.0, 9.0}) {
        EXPECT_DOUBLE_EQ(lambda_one(1.2, 0.8, 1.5, 0.0, 1.0, 2.0, Length::finite(l)),
                         lambda_star(1.2, 0.8, l).value);
    }
    const double tau = 1.7;
    const double slope = std::exp(tau * (kPi * kPi / 4.0 - 1.0));
    EXPECT_NEAR(lambda_one(1.0, 0.0, 1.0, 1.0, slope, tau, Length::finite(1.0)), 0.0, 1e-12);
    EXPECT_THROW(lambda_one(1.0, 0.0, 1.0, 1.0, 0.0, 1.0, inf), ValidationError);
}

TEST(LambdaOne, StrictlyDecreasingInSlopeAndLength) {
    for (double alpha : {-1.0, 0.0, 0.8}) {
        double prev = INFINITY;
        for (double slope : log_grid(0.05, 20.0, 25)) {
            const double v = lambda_one(1.2, alpha, 1.5, 1.0, slope, 2.0, Length::finite(1.0));
            EXPECT_LT(v, prev);
            prev = v;
        }
        prev = INFINITY;
        for (double l : log_grid(0.1, 50.0, 25)) {
            const double v = lambda_one(1.2, alpha, 1.5, 1.0, 0.5, 2.0, Length::finite(l));
            EXPECT_LT(v, prev);
            prev = v;
        }
    }
}

TEST(InvertLength, Examples) {
    // No finite threshold when the half-line value is nonnegative.
    EXPECT_FALSE(invert_length(1.0, 0.0, 1.0, 1.0, std::exp(-3.0), 1.0).has_value());
    for (double tau : {0.5, 2.0, 7.0}) {
        const auto l = invert_length(1.0, 0.0, 1.0, 1.0, 1.0, tau);
        ASSERT_TRUE(l.has_value());
        EXPECT_NEAR(*l, kPi / 2.0, 1e-8 * kPi / 2.0);
    }
    const auto r = invert_length(1.2, 0.8, 1.5, 1.0, 1.0, 2.0);
    ASSERT_TRUE(r.has_value());
    EXPECT_NEAR(lambda_one(1.2, 0.8, 1.5, 1.0, 1.0, 2.0, Length::finite(*r)), 0.0, 1e-7);
}

TEST(InvertLength, ThresholdGrowsAsPulseWeakens) {
    double prev = 0.0;
    for (double slope : {2.0, 1.0, 0.5, 0.25, 0.12}) {
        const auto l = invert_length(1.2, 0.8, 1.5, 1.0, slope, 2.0);
        ASSERT_TRUE(l.has_value()) << slope;
        EXPECT_GT(*l, prev);
        prev = *l;
    }
}

TEST(ThresholdPulse, Examples) {
    // With alpha <= 0 the half-line value is alpha^2/(4D).
    EXPECT_NEAR(threshold_pulse(1.2, -0.8, 1.5, 1.0, 2.0, Length::half_line()), std::exp(2.0 * (0.64 / 4.8 - 1.5)),
                1e-14);
    EXPECT_NEAR(threshold_pulse(1.2, -0.8, 1.5, 1.0, 2.0, Length::half_line()), 0.065002, 1e-6);
    EXPECT_NEAR(threshold_pulse(1.2, 0.8, 1.5, 1.0, 2.0, Length::half_line()), std::exp(-3.0), 1e-15);
    EXPECT_DOUBLE_EQ(threshold_pulse(1.0, 0.0, 1.0, 0.0, 3.0, Length::half_line()), 1.0);
}

TEST(ThresholdPulse, RoundTrip) {
    for (double alpha : {-1.0, 0.0, 0.8, 3.0}) {
        for (double l : {0.4, 1.0, 6.0}) {
            const double g = threshold_pulse(1.2, alpha, 1.5, 0.7, 2.0, Length::finite(l));
            EXPECT_NEAR(lambda_one(1.2, alpha, 1.5, 0.7, g, 2.0, Length::finite(l)), 0.0, 1e-10);
        }
    }
}

TEST(Tridiagonal, MatchesDenseElimination) {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    for (int n : {1, 2, 5, 40}) {
        std::vector<double> lo(n), di(n), up(n), b(n);
        for (int i = 0; i < n; ++i) {
            lo[i] = i > 0 ? U(rng) : 0.0;
            up[i] = i + 1 < n ? U(rng) : 0.0;
            di[i] = 3.0 + U(rng);
            b[i] = U(rng);
        }
        std::vector<std::vector<double>> A(n, std::vector<double>(n + 1, 0.0));
        for (int i = 0; i < n; ++i) {
            A[i][i] = di[i];
            if (i > 0) A[i][i - 1] = lo[i];
            if (i + 1 < n) A[i][i + 1] = up[i];
            A[i][n] = b[i];
        }
        for (int c = 0; c < n; ++c) {
            for (int r = c + 1; r < n; ++r) {
                const double f = A[r][c] / A[c][c];
                for (int k = c; k <= n; ++k) A[r][k] -= f * A[c][k];
            }
        }
        std::vector<double> x(n);
        for (int r = n - 1; r >= 0; --r) {
            double s = A[r][n];
            for (int k = r + 1; k < n; ++k) s -= A[r][k] * x[k];
            x[r] = s / A[r][r];
        }
        std::vector<double> y = b;
        solve_tridiagonal(lo, di, up, y);
        for (int i = 0; i < n; ++i) EXPECT_NEAR(y[i], x[i], 1e-13);
    }
}

TEST(Tridiagonal, ZeroPivotThrows) {
    std::vector<double> lo{0.0, 1.0}, di{0.0, 1.0}, up{1.0, 0.0}, b{1.0, 1.0};
    EXPECT_THROW(solve_tridiagonal(lo, di, up, b), NumericalError);
}
