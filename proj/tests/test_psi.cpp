#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "slln/error.hpp"
#include "slln/psi.hpp"

using namespace slln;

namespace {

ErrorCategory category_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.category();
    }
    ADD_FAILURE() << "expected slln::Error";
    return ErrorCategory::Io;
}

}  // namespace

TEST(PsiCatalog, ClassTagsFollowTheDefinitions) {
    EXPECT_EQ(make_psi("pow:delta=0.5").claimed_class, PsiClass::Cc);
    EXPECT_EQ(make_psi("logpow:delta=1").claimed_class, PsiClass::Cc);
    EXPECT_EQ(make_psi("log").claimed_class, PsiClass::Cd);
    EXPECT_EQ(make_psi("loglog").claimed_class, PsiClass::Cd);
    EXPECT_EQ(make_psi("const:c=3").claimed_class, PsiClass::Unknown);
    EXPECT_EQ(make_psi(std::string("table:") + SLLN_TEST_DATA + "/psi_table.csv").claimed_class, PsiClass::Unknown);
}

TEST(PsiCatalog, DefaultThresholds) {
    EXPECT_EQ(make_psi("pow:delta=2").x0, 1.0);
    EXPECT_EQ(make_psi("log").x0, 2.0);
    EXPECT_EQ(make_psi("logpow:delta=0.5").x0, 2.0);
    EXPECT_EQ(make_psi("loglog").x0, 16.0);
    EXPECT_EQ(make_psi("loglog").n_start(), 16);
    EXPECT_EQ(make_psi("log:x0=5.5").n_start(), 6);
}

TEST(PsiCatalog, PositiveAndNondecreasingOnGrid) {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (const auto& id : bundled_psi_ids()) {
        const PsiSpec psi = make_psi(id);
        for (int i = 0; i < 2000; ++i) {
            // Pairs on a geometric grid above x0.
            const double x = psi.x0 * std::pow(10.0, 12.0 * u(rng)) + 1e-9;
            const double y = x * std::pow(10.0, 3.0 * u(rng));
            ASSERT_GT(psi(x), 0.0) << id << " at " << x;
            ASSERT_LE(psi(x), psi(y)) << id << " at " << x << ", " << y;
        }
    }
}

TEST(PsiCatalog, LogEvalMatchesEvalWhereBothExist) {
    for (const auto& id : bundled_psi_ids()) {
        const PsiSpec psi = make_psi(id);
        for (double x : {20.0, 1e3, 1e8, 1e15}) {
            EXPECT_NEAR(psi.log_eval(std::log(x)), std::log(psi(x)), 1e-12 * std::fabs(std::log(psi(x))) + 1e-12)
                << id << " at " << x;
        }
    }
}

TEST(PsiCatalog, CatalogIdsSortedAndComplete) {
    const auto ids = psi_catalog_ids();
    EXPECT_TRUE(std::is_sorted(ids.begin(), ids.end()));
    for (const char* want : {"pow:delta", "logpow:delta", "log", "loglog"}) {
        EXPECT_NE(std::find(ids.begin(), ids.end(), want), ids.end()) << want;
    }
}

TEST(PsiCatalog, BadIdsAreRejected) {
    EXPECT_EQ(category_of([] { make_psi("cubic:delta=1"); }), ErrorCategory::UnknownId);
    EXPECT_EQ(category_of([] { make_psi("pow"); }), ErrorCategory::ConfigParse);
    EXPECT_EQ(category_of([] { make_psi("pow:delta=abc"); }), ErrorCategory::ConfigParse);
    EXPECT_THROW(make_psi("pow:delta=-1"), Error);
    EXPECT_THROW(make_psi("table:/nonexistent/psi.csv"), Error);
}

TEST(PsiCatalog, TableIsPiecewiseLinearAndHeldBeyondTheLastPoint) {
    const PsiSpec psi = make_psi(std::string("table:") + SLLN_TEST_DATA + "/psi_table.csv");
    EXPECT_DOUBLE_EQ(psi(55.0), 55.0);
    EXPECT_DOUBLE_EQ(psi(1000.0), 1000.0);
    EXPECT_DOUBLE_EQ(psi(5000.0), 1000.0);
}

TEST(PsiSeries, PowerOneIsTheBaselProblem) {
    const SeriesTrace t = psi_series_partial(make_psi("pow:delta=1"), 1'000'000);
    // Direct summation oracle: pi^2/6 minus a tail in (1/(N+1), 1/N).
    const double tail = std::numbers::pi * std::numbers::pi / 6.0 - t.total();
    EXPECT_GT(tail, 1.0 / 1'000'001.0 - 1e-12);
    EXPECT_LT(tail, 1e-6 + 1e-12);
    EXPECT_EQ(t.verdict, Verdict::ConvergingTrend);
}

TEST(PsiSeries, LogSeriesDivergesAtAMillion) {
    const SeriesTrace t = psi_series_partial(make_psi("log"), 1'000'000);
    EXPECT_EQ(t.verdict, Verdict::DivergingTrend);
    // Independent long double oracle for sum_{n=2}^{N} 1/(n log n).
    long double oracle = 0.0L;
    for (Index n = 2; n <= 1'000'000; ++n) {
        oracle += 1.0L / (static_cast<long double>(n) * std::log(static_cast<long double>(n)));
    }
    EXPECT_NEAR(t.total(), static_cast<double>(oracle), 1e-10);
    EXPECT_EQ(psi_series_partial(make_psi("loglog"), 1'000'000).verdict, Verdict::DivergingTrend);
}

TEST(PsiSeries, ConvergentCatalogEntriesTrendToConverge) {
    for (const auto& id : bundled_psi_ids()) {
        const PsiSpec psi = make_psi(id);
        const SeriesTrace t = psi_series_partial(psi, 1'000'000);
        if (psi.claimed_class == PsiClass::Cc) {
            EXPECT_EQ(t.verdict, Verdict::ConvergingTrend) << id;
        } else {
            EXPECT_EQ(t.verdict, Verdict::DivergingTrend) << id;
        }
    }
}

TEST(PsiSeries, TraceInvariants) {
    const SeriesTrace t = psi_series_partial(make_psi("logpow:delta=0.5"), 5000);
    ASSERT_TRUE(t.dense());
    EXPECT_EQ(t.n_start, 2);
    for (std::size_t i = 1; i < t.partial_sums.size(); ++i) {
        ASSERT_GE(t.partial_sums[i], t.partial_sums[i - 1]);
    }
    for (const auto& s : t.slices) {
        EXPECT_GE(Index{1} << s.k, t.n_start);
        EXPECT_LE((Index{2} << s.k) - 1, t.n_end);
    }
    ASSERT_EQ(t.tail_slice_ratios.size() + 1, t.slices.size());
    for (std::size_t i = 0; i < t.tail_slice_ratios.size(); ++i) {
        EXPECT_DOUBLE_EQ(t.tail_slice_ratios[i], t.slices[i + 1].sum / t.slices[i].sum);
    }
}

TEST(Diagnostics, GeometricSeriesConverges) {
    const SeriesTrace t = sum_series(1, 200, [](Index n) { return std::ldexp(1.0, -static_cast<int>(n)); });
    EXPECT_EQ(t.verdict, Verdict::ConvergingTrend);
    // Slice [1,2) against [2,4) is 3/4; every later ratio is at most 1/2.
    ASSERT_GE(t.tail_slice_ratios.size(), 5U);
    EXPECT_DOUBLE_EQ(t.tail_slice_ratios.front(), 0.75);
    for (std::size_t i = 1; i < t.tail_slice_ratios.size(); ++i) {
        EXPECT_LE(t.tail_slice_ratios[i], 0.5);
    }
    EXPECT_NEAR(t.total(), 1.0, 1e-15);
}

TEST(Diagnostics, HarmonicSeriesDiverges) {
    const SeriesTrace t = sum_series(1, 100'000, [](Index n) { return 1.0 / static_cast<double>(n); });
    EXPECT_EQ(t.verdict, Verdict::DivergingTrend);
}

TEST(Diagnostics, TooFewSlicesIsInsufficientData) {
    const SeriesTrace t = sum_series(1, 20, [](Index n) { return 1.0 / static_cast<double>(n * n); });
    EXPECT_EQ(t.verdict, Verdict::Inconclusive);
    EXPECT_EQ(category_of([&] { classify_diagnostic(t); }), ErrorCategory::InsufficientData);
}

TEST(Diagnostics, CompensatedSummationBeatsNaive) {
    const SeriesTrace t = sum_series(1, 10'000'000, [](Index) { return 0.1; });
    EXPECT_NEAR(t.total(), 1'000'000.0, 1e-8);
    EXPECT_FALSE(t.dense());
    EXPECT_EQ(t.partial_sum_at(1 << 22).value_or(-1.0), 0.1 * (1 << 22));
    EXPECT_TRUE(t.partial_sum_at(1'000'000).has_value());
    EXPECT_TRUE(t.partial_sum_at(10'000'000).has_value());
    EXPECT_FALSE(t.partial_sum_at(1'234'567).has_value());
}

TEST(GeometricTail, PowerOneBaseTwo) {
    const SeriesTrace t = geometric_tail_partial(make_psi("pow:delta=1"), 2.0, 50);
    EXPECT_NEAR(t.total(), 1.0 - std::ldexp(1.0, -50), 2.0 * std::numeric_limits<double>::epsilon());
}

TEST(GeometricTail, ConvergentClassForEveryBase) {
    for (const auto& id : bundled_psi_ids()) {
        const PsiSpec psi = make_psi(id);
        if (psi.claimed_class != PsiClass::Cc) {
            continue;
        }
        for (double b : {1.5, 2.0, std::numbers::e, 10.0}) {
            EXPECT_EQ(geometric_tail_partial(psi, b, 200).verdict, Verdict::ConvergingTrend) << id << " b=" << b;
        }
    }
}

TEST(GeometricTail, LargeArgumentsStayFinite) {
    // 10^5000 is far past the double range; evaluation goes through log psi.
    const SeriesTrace t = geometric_tail_partial(make_psi("logpow:delta=1"), 10.0, 5000);
    EXPECT_TRUE(std::isfinite(t.total()));
    EXPECT_EQ(t.verdict, Verdict::ConvergingTrend);
    const SeriesTrace d = geometric_tail_partial(make_psi("log"), 10.0, 5000);
    EXPECT_TRUE(std::isfinite(d.total()));
    EXPECT_EQ(d.verdict, Verdict::DivergingTrend);
}

TEST(GeometricTail, StartsAtFirstPowerAboveThreshold) {
    const SeriesTrace t = geometric_tail_partial(make_psi("loglog"), 2.0, 100);
    EXPECT_EQ(t.n_start, 4);  // 2^4 = 16 = x0
}
