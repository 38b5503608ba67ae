// Acceptance run: one PASS/FAIL line per criterion, tolerances fixed below.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "slln/config.hpp"
#include "slln/experiment.hpp"
#include "slln/mc_lab.hpp"
#include "slln/models.hpp"
#include "slln/parallel.hpp"
#include "slln/psi.hpp"
#include "slln/sequences.hpp"

using namespace slln;

namespace {

constexpr std::uint64_t kSeed = 20240611;

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void check(bool ok, const std::string& what) {
        pass = pass && ok;
        detail << (ok ? "ok " : "FAILED ") << what << "; ";
    }
};

std::string num(double v, int digits = 6) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

// 1 ------------------------------------------------------------------------
void remark2_exactness(Outcome& o) {
    ExactRational sum(0);
    int sum_ok = 0;
    int term_ok = 0;
    for (Index n = 1; n <= 200; ++n) {
        const ExactRational b = remark2_b(n);
        sum += b;
        if (n < 3) {
            continue;
        }
        const ExactRational two_n = ExactRational::pow2(static_cast<unsigned>(n));
        sum_ok += sum == two_n / ExactRational(n) ? 1 : 0;
        term_ok += b / two_n == ExactRational(n - 2, 2 * n * (n - 1)) ? 1 : 0;
    }
    o.check(sum_ok == 198, "prefix sum = 2^n/n for " + std::to_string(sum_ok) + "/198 n");
    o.check(term_ok == 198, "b_n/a_n^2 = (n-2)/(2n(n-1)) for " + std::to_string(term_ok) + "/198 n");
}

// 2 ------------------------------------------------------------------------
void theorem5_remark2(Outcome& o) {
    Theorem5Options options;
    options.exact_horizon = 200;
    options.conclusion_first = 3;
    const auto r = theorem5_check(remark2_sequence(), make_norming("exp2:half"), make_psi("pow:delta=1"),
                                  100'000'000, options);
    bool exact_one = r.exact_premise.size() == 200;
    for (Index n = 3; n <= 200 && exact_one; ++n) {
        exact_one = r.exact_premise[static_cast<std::size_t>(n - 1)] == ExactRational(1);
    }
    o.check(exact_one, "exact premise ratio == 1 for 3 <= n <= 200");
    o.check(r.premise.trend == Trend::Bounded, "premise " + std::string(to_string(r.premise.trend)) +
                                                   ", witness " + num(r.premise.witness_C));
    const double s4 = conclusion_growth_estimate(r.conclusion, 10'000);
    const double s8 = conclusion_growth_estimate(r.conclusion, 100'000'000);
    o.check(std::fabs(s4 - 3.894) <= 0.001, "partial sum at 1e4 = " + num(s4, 10) + " (3.894 +- 0.001)");
    o.check(std::fabs((s8 - s4) - 4.605) <= 0.01, "growth 1e4 -> 1e8 = " + num(s8 - s4, 10) + " (4.605 +- 0.01)");
    o.check(r.conclusion.verdict == Verdict::DivergingTrend,
            "conclusion " + std::string(to_string(r.conclusion.verdict)));
}

// 3 ------------------------------------------------------------------------
void theorem5_positive(Outcome& o) {
    const Index N = 1'000'000;
    int converging = 0;
    int premises = 0;
    int doublings = 0;
    std::string failures;
    const auto cases = bundled_theorem5_cases();
    for (const auto& c : cases) {
        const NormingSequence a = make_norming(c.a);
        const auto dbl = doubling_ratio(a, 10'000);
        const auto r = theorem5_check(make_sequence(c.b), a, make_psi(c.psi), N);
        doublings += dbl.trend == Trend::Bounded ? 1 : 0;
        premises += r.premise.trend == Trend::Bounded ? 1 : 0;
        if (r.conclusion.verdict == Verdict::ConvergingTrend) {
            ++converging;
        } else {
            failures += " [" + c.b + " | " + c.a + " | " + c.psi + "]";
        }
    }
    const auto n_cases = std::to_string(cases.size());
    o.check(cases.size() == 20, n_cases + " bundled triples");
    o.check(doublings == 20, "doubling Bounded " + std::to_string(doublings) + "/" + n_cases);
    o.check(premises == 20, "premise Bounded " + std::to_string(premises) + "/" + n_cases);
    o.check(converging == 20, "conclusion ConvergingTrend " + std::to_string(converging) + "/" + n_cases + failures);
    const auto basel =
        theorem5_check(make_sequence("const:c=1"), make_norming("poly:p=1"), make_psi("pow:delta=0.5"), N);
    const double err = std::fabs(basel.conclusion.total() - std::numbers::pi * std::numbers::pi / 6.0);
    o.check(err <= 1.1e-6, "b=1, a=n, psi=sqrt(x): |S - pi^2/6| = " + num(err) + " (<= 1.1e-6)");
}

// 4 ------------------------------------------------------------------------
void example1_analytics(Outcome& o) {
    int mass = 0;
    int var = 0;
    int ratio = 0;
    for (Index n = 1; n <= 200; ++n) {
        mass += example1_pmf(n).total_mass() == ExactRational(1) ? 1 : 0;
        if (n >= 3) {
            const ExactRational two_n = ExactRational::pow2(static_cast<unsigned>(n));
            const ExactRational v = example1_var_S_exact(n);
            var += v == two_n / ExactRational(n) ? 1 : 0;
            // Var(S_n) psi(n) / a_n^2 with psi(x) = x and a_n^2 = 2^n.
            ratio += v * make_psi("pow:delta=1").exact(n) / two_n == ExactRational(1) ? 1 : 0;
        }
    }
    o.check(mass == 200, "pmf masses sum to 1 for " + std::to_string(mass) + "/200 n");
    o.check(var == 198, "Var(S_n) = 2^n/n for " + std::to_string(var) + "/198 n");
    o.check(ratio == 198, "Var(S_n) psi(n)/a_n^2 = 1 for " + std::to_string(ratio) + "/198 n");
    const auto dbl = doubling_ratio(example1_norming(), 60);
    o.check(dbl.trend == Trend::GrowingTrend,
            "doubling on 2^{n/2}: " + std::string(to_string(dbl.trend)) + ", witness " + num(dbl.witness_C));
}

// 5 ------------------------------------------------------------------------
void example1_stochastics(Outcome& o, unsigned threads) {
    const HitSummary hits = example1_hit_ensemble(10'000, 10'000, kSeed, threads);
    o.check(std::fabs(hits.mean_hits - 3.894) <= 0.06,
            "mean hits " + num(hits.mean_hits) + " (3.894 +- 0.06, sigma_mean " + num(hits.sigma_mean, 4) + ")");
    o.check(std::fabs(hits.window_fraction - 0.29) <= 0.02,
            "window [5000,1e4] hit fraction " + num(hits.window_fraction) + " (0.29 +- 0.02)");
    const auto s = tail_sup_estimate(make_model("example1"), example1_norming(), {1000, 10'000}, 10'000, kSeed, threads);
    const double m3 = s.tail_sup_quantiles[0][0];
    const double m4 = s.tail_sup_quantiles[1][0];
    o.check(!(m4 < m3), "tail-sup median not decreasing: " + num(m3) + " -> " + num(m4) + " (q90 " +
                            num(s.tail_sup_quantiles[0][1]) + " -> " + num(s.tail_sup_quantiles[1][1]) + ")");
}

// 6 ------------------------------------------------------------------------
void slln_positive(Outcome& o, unsigned threads) {
    const std::vector<Index> horizons{1000, 10'000, 100'000};
    const auto s = tail_sup_estimate(make_model("iid-uniform:lo=0,hi=2"), make_norming("poly:p=1"), horizons, 200,
                                     kSeed, threads);
    const double sigma = 1.0 / std::sqrt(3.0);
    for (std::size_t h = 0; h < horizons.size(); ++h) {
        const double n = static_cast<double>(horizons[h]);
        const double oracle = sigma * std::sqrt(2.0 * std::log(std::log(n)) / n);
        const double median = s.tail_sup_quantiles[h][0];
        o.check(median < 3.0 * oracle, "N=" + std::to_string(horizons[h]) + " median " + num(median, 4) +
                                           " < 3 x " + num(oracle, 4));
        if (h > 0) {
            o.check(median < s.tail_sup_quantiles[h - 1][0], "strictly below previous horizon");
        }
    }
}

// 7 ------------------------------------------------------------------------
void lemma1_desk(Outcome& o) {
    const auto tail = geometric_tail_partial(make_psi("pow:delta=1"), 2.0, 50);
    const double expected = 1.0 - std::ldexp(1.0, -50);
    const double err = std::fabs(tail.total() - expected);
    o.check(err <= 2.0 * std::numeric_limits<double>::epsilon(), "psi=x, b=2, N=50: |S - (1 - 2^-50)| = " + num(err));
    int converging = 0;
    int total = 0;
    for (const auto& id : bundled_psi_ids()) {
        const PsiSpec psi = make_psi(id);
        if (psi.claimed_class != PsiClass::Cc) {
            continue;
        }
        for (double b : {1.5, 2.0, std::numbers::e, 10.0}) {
            ++total;
            const auto t = geometric_tail_partial(psi, b, 200);
            if (t.verdict == Verdict::ConvergingTrend) {
                ++converging;
            } else {
                o.detail << "[" << id << " b=" << b << " " << to_string(t.verdict) << "] ";
            }
        }
    }
    o.check(total > 0 && converging == total,
            "Cc geometric tails ConvergingTrend " + std::to_string(converging) + "/" + std::to_string(total));
}

// 8 ------------------------------------------------------------------------
std::string random_nonnegative_model(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    auto iid = [&] {
        if (u(rng) < 0.5) {
            const double lo = 3.0 * u(rng);
            return "iid-uniform:lo=" + num(lo, 17) + ",hi=" + num(lo + 0.1 + 4.0 * u(rng), 17);
        }
        return "iid-exp:mean=" + num(0.1 + 5.0 * u(rng), 17);
    };
    const double pick = u(rng);
    if (pick < 0.4) {
        return iid();
    }
    if (pick < 0.7) {
        return "ma:q=" + std::to_string(1 + static_cast<int>(u(rng) * 8)) + ",base=" + iid();
    }
    return "weighted:w=poly:p=" + num(2.0 * u(rng), 17) + ",base=" + iid();
}

std::string random_norming(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double pick = u(rng);
    if (pick < 0.6) {
        return "poly:p=" + num(0.6 + 1.4 * u(rng), 17) + ",c=" + num(0.2 + 3.0 * u(rng), 17);
    }
    if (pick < 0.8) {
        return "nlog";
    }
    return "poly:p=1";
}

void sandwich_property(Outcome& o, unsigned threads) {
    std::mt19937_64 rng(kSeed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Index checked = 0;
    Index violations = 0;
    for (int m = 0; m < 100; ++m) {
        const ModelSpec model = make_model(random_nonnegative_model(rng));
        const NormingSequence a = make_norming(random_norming(rng));
        const double alpha = 4.0 - 3.0 * u(rng);  // (1, 4]
        const double eps = 1.0 - u(rng);          // (0, 1]
        const Index N = 100 + static_cast<Index>(u(rng) * 9900.0);
        const std::uint64_t seed = rng();
        const MomentTable mom = moments(model, N);
        const BlockingScheme scheme = build_blocking(a, mom.ES, alpha, eps, N);
        const auto results = parallel_map<SandwichResult>(10, threads, [&](std::int64_t i) {
            return sandwich_check(sample_path(model, N, seed, static_cast<std::uint64_t>(i)), a, scheme);
        });
        for (const auto& r : results) {
            checked += r.checked;
            if (r.violations > 0) {
                o.detail << "[" << model.id << " | " << a.id << " alpha=" << alpha << " eps=" << eps
                         << " first violation n=" << r.first_violation << "] ";
            }
            violations += r.violations;
        }
    }
    o.check(violations == 0, std::to_string(violations) + " violations over " + std::to_string(checked) +
                                 " checked indices (100 models x 10 seeds)");
}

// 9 ------------------------------------------------------------------------
void dyadic_maximal(Outcome& o, unsigned threads) {
    int models = 0;
    for (const auto& id : bundled_model_ids()) {
        const ModelSpec model = make_model(id);
        if (!model.independent()) {
            continue;
        }
        ++models;
        // Weighted sums are normed by W_n, Example 1 by its own 2^{n/2}.
        NormingSequence a = make_norming("poly:p=1");
        if (model.kind == ModelKind::Example1) {
            a = example1_norming();
        } else if (model.kind == ModelKind::Weighted) {
            a = make_weights(*model.weights, Index{1} << 13).as_norming();
        }
        for (double eps : {0.5, 1.0}) {
            const auto levels = dyadic_max_check(model, a, make_psi("pow:delta=1"), eps, {8, 10, 12}, 2000, kSeed, threads);
            for (const auto& r : levels) {
                o.check(r.within, id + " eps=" + num(eps, 2) + " level " + std::to_string(r.level) + ": " +
                                      num(r.frequency, 4) + " <= " + num(r.kolmogorov_bound, 4) + " + 3 x " +
                                      num(r.binomial_sigma, 3));
            }
        }
    }
    o.check(models >= 5, std::to_string(models) + " independent models");
}

// 10 -----------------------------------------------------------------------
void determinism(Outcome& o) {
    const std::vector<std::string> configs{
        "experiment = classify-psi\nhorizon = 65536\nformat = both\n",
        "experiment = check-conditions\nhorizon = 2000\nmodel = ma:q=2,base=iid-exp:mean=1\nformat = both\n",
        "experiment = theorem5\nbundled_cases = true\nhorizon = 4096\n",
        "experiment = remark2\nformat = both\n",
        "experiment = example1\nseed = 5\npaths = 300\nhorizon = 3000\nhorizons = 300; 3000\nformat = both\n",
        "experiment = simulate\nseed = 9\npaths = 120\nhorizons = 500; 5000\nformat = csv\n",
        "experiment = blocking\nseed = 4\npaths = 5\nalpha = 1.5; 3\neps = 0.2\nhorizon = 2000\nformat = both\n",
        "experiment = dyadic\nseed = 8\npaths = 200\nlevels = 5; 7\nformat = both\n",
        "experiment = list\n",
    };
    for (const auto& text : configs) {
        const ExperimentConfig config = resolve_config(parse_config_text(text));
        const auto one = render(config, 1);
        const auto again = render(config, 1);
        const auto many = render(config, 4);
        o.check(one == again && one == many,
                std::string(to_string(config.kind)) + " (" + std::to_string(one.size()) + " artifacts)");
    }
}

}  // namespace

int main() {
    const unsigned threads = std::max(2U, std::thread::hardware_concurrency());
    struct Criterion {
        int id;
        std::string name;
        double budget_s;
        std::function<void(Outcome&)> body;
    };
    const std::vector<Criterion> criteria{
        {1, "Remark 2 exactness", 1.0, remark2_exactness},
        {2, "Theorem 5 premise/conclusion on Remark 2 data", 5.0, theorem5_remark2},
        {3, "Positive Theorem 5 shadow", 0.0, theorem5_positive},
        {4, "Example 1 analytics", 0.0, example1_analytics},
        {5, "Example 1 stochastics", 60.0, [&](Outcome& o) { example1_stochastics(o, threads); }},
        {6, "SLLN positive case", 120.0, [&](Outcome& o) { slln_positive(o, threads); }},
        {7, "Lemma 1 desk check", 0.0, lemma1_desk},
        {8, "Sandwich property", 60.0, [&](Outcome& o) { sandwich_property(o, threads); }},
        {9, "Dyadic maximal check", 60.0, [&](Outcome& o) { dyadic_maximal(o, threads); }},
        {10, "Determinism", 0.0, determinism},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        Outcome o;
        const auto start = std::chrono::steady_clock::now();
        try {
            c.body(o);
        } catch (const std::exception& e) {
            o.check(false, std::string("exception: ") + e.what());
        }
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (c.budget_s > 0.0) {
            o.check(seconds < c.budget_s, "runtime " + num(seconds, 3) + " s < " + num(c.budget_s, 3) + " s");
        }
        failed += o.pass ? 0 : 1;
        std::printf("criterion %2d %s  %s | %s(%.2f s)\n", c.id, o.pass ? "PASS" : "FAIL", c.name.c_str(),
                    o.detail.str().c_str(), seconds);
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
