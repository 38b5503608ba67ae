#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "slln/error.hpp"
#include "slln/models.hpp"
#include "slln/rational.hpp"
#include "slln/scaled.hpp"
#include "slln/sequences.hpp"

using namespace slln;

namespace {

Sequence seq(std::string id, std::function<double(Index)> f) { return Sequence::from_function(std::move(id), f); }

}  // namespace

TEST(ExactRationalType, LowestTermsPositiveDenominator) {
    const ExactRational r(6, 4);
    EXPECT_EQ(r.to_string(), "3/2");
    const ExactRational s(1, -2);
    EXPECT_EQ(s.to_string(), "-1/2");
    EXPECT_EQ((ExactRational(1, 3) + ExactRational(1, 6)).to_string(), "1/2");
    EXPECT_THROW(ExactRational(1, 0), Error);
    EXPECT_EQ(ExactRational::pow2(100) / ExactRational::pow2(98), ExactRational(4));
}

TEST(ScaledType, RoundTripsDoublesAndSurvivesHugeExponents) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-300.0, 300.0);
    for (int i = 0; i < 1000; ++i) {
        const double x = std::pow(10.0, u(rng)) * (i % 2 ? -1.0 : 1.0);
        ASSERT_EQ(Scaled(x).to_double(), x);
    }
    const NormingSequence a = make_norming("exp2:half");
    const Scaled big = a(4000);
    EXPECT_TRUE(big.is_finite());
    EXPECT_NEAR(big.log(), 2000.0 * std::numbers::ln2, 1e-9);
    EXPECT_DOUBLE_EQ((a(4002) / a(4000)).to_double(), 2.0);
    EXPECT_EQ(Scaled::pow2(5000).to_double(), INFINITY);
}

TEST(Doubling, LinearIsExactlyTwo) {
    const auto r = doubling_ratio(make_norming("poly:p=1"), 10'000);
    EXPECT_EQ(r.witness_C, 2.0);
    EXPECT_EQ(r.trend, Trend::Bounded);
    EXPECT_EQ(r.ratio_trace.size(), 5000U);
}

TEST(Doubling, ExponentialNormingGrows) {
    const auto r = doubling_ratio(make_norming("exp2:half"), 60);
    EXPECT_EQ(r.witness_C, 32768.0);
    EXPECT_EQ(r.witness_index, 30);
    for (Index n = 1; n <= 30; ++n) {
        EXPECT_DOUBLE_EQ(r.ratio_trace[static_cast<std::size_t>(n - 1)], std::pow(2.0, n / 2.0));
    }
    EXPECT_EQ(r.trend, Trend::GrowingTrend);
}

TEST(Doubling, NLogNeedsTheLargeNCutoff) {
    const NormingSequence a = make_norming("nlog");
    const auto all = doubling_ratio(a, 10'000);
    // n = 1 gives 2 log 3 / log 2.
    EXPECT_NEAR(all.witness_C, 2.0 * std::log(3.0) / std::log(2.0), 1e-12);
    EXPECT_EQ(all.trend, Trend::Bounded);
    const auto late = doubling_ratio(a, 10'000, 100);
    EXPECT_LT(late.witness_C, 2.3);
    EXPECT_LT(late.tail_witness_C, 2.2);
    EXPECT_GT(late.tail_witness_C, 2.0);
}

TEST(Doubling, PowerLawWitnessIsTwoToTheP) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 40; ++i) {
        const double p = 0.05 + 3.0 * u(rng);
        const double c = 0.01 + 100.0 * u(rng);
        const auto r = doubling_ratio(make_norming("poly:p=" + std::to_string(p) + ",c=" + std::to_string(c)), 2000);
        const double expected = std::pow(2.0, std::stod(std::to_string(p)));
        EXPECT_NEAR(r.witness_C, expected, 1e-13 * expected) << "p=" << p;
    }
}

TEST(BigO, TrivialCases) {
    const auto r = big_o_witness(seq("n", [](Index n) { return double(n); }),
                                 seq("n2", [](Index n) { return double(n) * double(n); }), 1000);
    EXPECT_EQ(r.witness_C, 1.0);
    EXPECT_EQ(r.trend, Trend::Bounded);
    const auto g = big_o_witness(seq("nlogn", [](Index n) { return double(n) * std::log(double(n)); }),
                                 seq("n", [](Index n) { return double(n); }), 10'000);
    EXPECT_EQ(g.trend, Trend::GrowingTrend);
}

TEST(BigO, ScaleEquivariant) {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const Sequence g = seq("g", [](Index n) { return std::sqrt(double(n)) + 1.0; });
    for (int i = 0; i < 20; ++i) {
        const double lambda = std::ldexp(1.0, static_cast<int>(u(rng) * 40) - 20);
        const double shift = u(rng);
        const auto f = [shift](Index n) { return std::sin(double(n) + shift) + 2.0; };
        const auto base = big_o_witness(seq("f", f), g, 500);
        const auto scaled = big_o_witness(seq("lf", [&](Index n) { return lambda * f(n); }), g, 500);
        EXPECT_EQ(scaled.witness_C, lambda * base.witness_C);
    }
}

TEST(BigO, WitnessIsTheMaxAndTrendFollowsTheBlockRule) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 200; ++i) {
        std::vector<double> ratios(1 + static_cast<std::size_t>(u(rng) * 300));
        const double slope = 4.0 * u(rng);
        for (std::size_t k = 0; k < ratios.size(); ++k) {
            ratios[k] = u(rng) + slope * std::log1p(double(k));
        }
        const auto r = make_report("r", 1, static_cast<Index>(ratios.size()), ratios);
        EXPECT_EQ(r.witness_C, *std::max_element(ratios.begin(), ratios.end()));
        if (r.trend == Trend::GrowingTrend) {
            EXPECT_GT(r.tail_witness_C, 4.0 * r.first_block_max);
        }
    }
}

TEST(BigO, ExampleOneVarianceAgainstPetrovScale) {
    // Var(S_n) = 2^n/n against a_n^2/psi(n) = 2^n/n for psi(x) = x.
    const NormingSequence a = example1_norming();
    Sequence f;
    f.id = "VarS";
    f.eval = [](Index n) { return n <= 2 ? Scaled(double(n)) : Scaled::pow2(n) / Scaled(double(n)); };
    Sequence g;
    g.id = "a2/psi";
    g.eval = [a](Index n) { return a.squared(n) / Scaled(double(n)); };
    const auto r = big_o_witness(f, g, 1000, 3);
    for (double v : r.ratio_trace) {
        ASSERT_DOUBLE_EQ(v, 1.0);
    }
    EXPECT_EQ(r.witness_C, 1.0);
    for (Index n = 3; n <= 200; ++n) {
        EXPECT_EQ(example1_var_S_exact(n) * ExactRational(n) / ExactRational::pow2(static_cast<unsigned>(n)),
                  ExactRational(1));
    }
}

TEST(Kolmogorov, UnitVariance) {
    const auto t = kolmogorov_series(make_sequence("const:c=1"), 1'000'000);
    EXPECT_NEAR(t.total(), std::numbers::pi * std::numbers::pi / 6.0, 1.1e-6);
    EXPECT_EQ(t.verdict, Verdict::ConvergingTrend);
}

TEST(Kolmogorov, LinearVarianceIsHarmonic) {
    const auto t = kolmogorov_series(make_sequence("poly:p=1"), 10'000);
    EXPECT_EQ(t.verdict, Verdict::DivergingTrend);
}

TEST(Kolmogorov, ExampleOneIncrementsDiverge) {
    Sequence v;
    v.id = "example1-var";
    v.eval = [](Index n) {
        return n <= 2 ? Scaled(1.0) : Scaled::pow2(n) / Scaled(double(n)) - Scaled::pow2(n - 1) / Scaled(double(n - 1));
    };
    const auto t = kolmogorov_series(v, 60);
    EXPECT_EQ(t.verdict, Verdict::DivergingTrend);
    // Exact oracle for a few terms.
    for (Index n = 3; n <= 60; n += 19) {
        const ExactRational exact =
            ExactRational::pow2(static_cast<unsigned>(n)) / ExactRational(n) -
            ExactRational::pow2(static_cast<unsigned>(n - 1)) / ExactRational(n - 1);
        EXPECT_NEAR(v.value(n), exact.to_double(), 1e-14 * exact.to_double());
    }
}

TEST(Kolmogorov, NegativeVarianceRejected) {
    EXPECT_THROW(kolmogorov_series(seq("neg", [](Index n) { return n == 7 ? -1.0 : 1.0; }), 100), Error);
}

TEST(IncrementGrowth, Linear) {
    const auto r = increment_growth_check([](Index n) { return double(n); }, 500);
    EXPECT_DOUBLE_EQ(r.report.witness_C, 1.0);
    EXPECT_EQ(r.report.trend, Trend::Bounded);
}

TEST(IncrementGrowth, LinearPlusSqrtMatchesPairwiseOracle) {
    const auto ES = [](Index n) { return 2.0 * double(n) + std::sqrt(double(n)); };
    const auto r = increment_growth_check(ES, 1000, 1);
    double oracle = 0.0;
    for (Index n = 1; n <= 1000; ++n) {
        for (Index m = 0; m < n; ++m) {
            oracle = std::max(oracle, (ES(n) - (m == 0 ? 0.0 : ES(m))) / double(n - m));
        }
    }
    EXPECT_DOUBLE_EQ(r.report.witness_C, oracle);
    EXPECT_LE(r.report.witness_C, 3.0);
    EXPECT_EQ(r.report.trend, Trend::Bounded);
    EXPECT_LT(r.asymptotic_C, r.report.witness_C);
    EXPECT_EQ(r.asymptotic_window, 100);
}

TEST(IncrementGrowth, QuadraticGrows) {
    const auto r = increment_growth_check([](Index n) { return double(n) * double(n); }, 1000);
    EXPECT_EQ(r.report.trend, Trend::GrowingTrend);
}

TEST(Remark2, FirstValues) {
    EXPECT_EQ(remark2_b(1), ExactRational(1));
    EXPECT_EQ(remark2_b(2), ExactRational(1));
    EXPECT_EQ(remark2_b(3), ExactRational(2, 3));
    EXPECT_EQ(remark2_b(1) + remark2_b(2) + remark2_b(3), ExactRational(8, 3));
}

TEST(Remark2, PrefixAndTermIdentitiesExactly) {
    ExactRational sum(0);
    for (Index n = 1; n <= 200; ++n) {
        sum += remark2_b(n);
        if (n >= 3) {
            const ExactRational two_n = ExactRational::pow2(static_cast<unsigned>(n));
            ASSERT_EQ(sum, two_n / ExactRational(n)) << n;
            ASSERT_EQ(remark2_b(n) / two_n, ExactRational(n - 2, 2 * n * (n - 1))) << n;
        }
    }
}

TEST(Theorem5, RemarkTwoPremiseHoldsConclusionDiverges) {
    Theorem5Options options;
    options.conclusion_first = 3;
    const auto r = theorem5_check(remark2_sequence(), make_norming("exp2:half"), make_psi("pow:delta=1"), 10'000,
                                  options);
    ASSERT_EQ(r.exact_premise.size(), 200U);
    for (Index n = 3; n <= 200; ++n) {
        EXPECT_EQ(r.exact_premise[static_cast<std::size_t>(n - 1)], ExactRational(1));
    }
    EXPECT_EQ(r.premise.trend, Trend::Bounded);
    EXPECT_EQ(r.premise.witness_C, 1.0);
    for (std::size_t i = 0; i < r.conclusion.indices.size(); ++i) {
        const double n = double(r.conclusion.indices[i]);
        ASSERT_NEAR(r.conclusion.terms[i], (n - 2.0) / (2.0 * n * (n - 1.0)), 1e-16);
    }
    EXPECT_EQ(r.conclusion.verdict, Verdict::DivergingTrend);
    EXPECT_DOUBLE_EQ(conclusion_growth_estimate(r.conclusion, 3), 1.0 / 12.0);
    double h = 0.0;
    for (Index k = 9999; k >= 1; --k) {
        h += 1.0 / double(k);
    }
    EXPECT_NEAR(conclusion_growth_estimate(r.conclusion, 10'000), h + 1e-4 - 0.5 * h - 1.0, 1e-12);
    EXPECT_NEAR(conclusion_growth_estimate(r.conclusion, 10'000), 3.894, 0.001);
}

TEST(Theorem5, BaselCase) {
    const auto r = theorem5_check(make_sequence("const:c=1"), make_norming("poly:p=1"), make_psi("pow:delta=0.5"),
                                  100'000);
    for (std::size_t i = 0; i < 100; ++i) {
        const double n = double(r.premise.first_index) + double(i);
        EXPECT_NEAR(r.premise.ratio_trace[i], 1.0 / std::sqrt(n), 1e-15);
    }
    EXPECT_EQ(r.premise.trend, Trend::Bounded);
    EXPECT_NEAR(r.conclusion.total(), std::numbers::pi * std::numbers::pi / 6.0, 1.1e-5);
    EXPECT_EQ(r.conclusion.verdict, Verdict::ConvergingTrend);
}

TEST(Theorem5, ZeroSequence) {
    const auto r = theorem5_check(make_sequence("const:c=0"), make_norming("poly:p=1"), make_psi("pow:delta=1"), 1000);
    EXPECT_EQ(r.premise.witness_C, 0.0);
    EXPECT_EQ(r.conclusion.total(), 0.0);
}

TEST(Theorem5, BundledPositiveCasesConverge) {
    const auto cases = bundled_theorem5_cases();
    ASSERT_EQ(cases.size(), 20U);
    for (const auto& c : cases) {
        const NormingSequence a = make_norming(c.a);
        EXPECT_EQ(doubling_ratio(a, 10'000).trend, Trend::Bounded) << c.a;
        const auto r = theorem5_check(make_sequence(c.b), a, make_psi(c.psi), 100'000);
        EXPECT_EQ(r.premise.trend, Trend::Bounded) << c.b << " " << c.a << " " << c.psi;
        EXPECT_EQ(r.conclusion.verdict, Verdict::ConvergingTrend) << c.b << " " << c.a << " " << c.psi;
    }
}

TEST(Norming, ContractChecks) {
    EXPECT_GT(check_norming(make_norming("poly:p=1"), 100), 10.0);
    EXPECT_THROW(check_norming(make_norming("const:c=1"), 100), Error);
    EXPECT_THROW(check_norming(make_norming("poly:p=-1"), 100), Error);
    EXPECT_EQ(make_norming("poly:p=1.5").doubling_Q.value_or(0.0), std::pow(2.0, 1.5));
}

TEST(Weights, PrefixSums) {
    const WeightScheme ones = make_weights(make_sequence("const:c=1"), 100);
    for (Index n = 1; n <= 100; ++n) {
        ASSERT_EQ(ones.W[static_cast<std::size_t>(n)], double(n));
    }
    const WeightScheme lin = make_weights(make_sequence("poly:p=1"), 100);
    const NormingSequence W = lin.as_norming();
    EXPECT_EQ(W.value(100), 5050.0);
    for (Index n = 2; n <= 100; ++n) {
        ASSERT_GT(lin.W[static_cast<std::size_t>(n)], lin.W[static_cast<std::size_t>(n - 1)]);
    }
    EXPECT_THROW(make_weights(make_sequence("const:c=0"), 10), Error);
}

TEST(SequenceCatalog, IdsResolve) {
    EXPECT_EQ(make_sequence("exp2:half").value(4), 4.0);
    EXPECT_NEAR(make_sequence("exp2:half").value(3), std::pow(2.0, 1.5), 1e-15);
    EXPECT_EQ(make_sequence("poly:p=2,c=3").value(5), 75.0);
    EXPECT_THROW(make_sequence("exp2:third"), Error);
    EXPECT_THROW(make_sequence("wavy:p=1"), Error);
    const auto ids = sequence_catalog_ids();
    EXPECT_TRUE(std::is_sorted(ids.begin(), ids.end()));
}
