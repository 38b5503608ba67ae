#include "slln/mc_lab.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <string>

#include "slln/error.hpp"
#include "slln/parallel.hpp"

namespace slln {

namespace {

constexpr std::string_view kModule = "mc_lab";

/// Per-index factors turning a path into (S_n - ES_n)/a_n, shared by every
/// path of an ensemble.
struct CenteringPlan {
    std::vector<double> shrink;     // c_{n-1}/c_n (normalized paths)
    std::vector<double> scale;      // c_n/a_n (normalized) or 1/a_n (raw)
    std::vector<double> es_over_a;  // ES_n/a_n
    std::vector<double> es;
    bool normalized = false;

    CenteringPlan(const Sequence* normalizer, const MomentTable& moments, const NormingSequence& a, Index N) {
        const auto size = static_cast<std::size_t>(N) + 1;
        shrink.assign(size, 0.0);
        scale.assign(size, 0.0);
        es_over_a.assign(size, 0.0);
        es.assign(moments.ES.begin(), moments.ES.begin() + static_cast<std::ptrdiff_t>(size));
        normalized = normalizer != nullptr;
        Scaled prev_c(0.0);
        for (Index n = 1; n <= N; ++n) {
            const auto i = static_cast<std::size_t>(n);
            const Scaled an = a(n);
            if (!(an.sign() > 0)) {
                fail(ErrorCategory::NumericDomain, std::string(kModule), a.id,
                     "norming '" + a.id + "' is not positive at n = " + std::to_string(n));
            }
            es_over_a[i] = (Scaled(es[i]) / an).to_double();
            if (normalized) {
                const Scaled cn = (*normalizer)(n);
                shrink[i] = n == 1 ? 0.0 : (prev_c / cn).to_double();
                scale[i] = (cn / an).to_double();
                prev_c = cn;
            } else {
                scale[i] = (Scaled(1.0) / an).to_double();
            }
        }
    }

    /// Writes (S_n - ES_n)/a_n into out[1..N].
    void apply(const Path& path, std::vector<double>& out) const {
        const auto size = scale.size();
        out.assign(size, 0.0);
        if (normalized) {
            double u = 0.0;
            for (std::size_t i = 1; i < size; ++i) {
                u = u * shrink[i] + path.x[i];
                out[i] = u * scale[i] - es_over_a[i];
            }
        } else {
            for (std::size_t i = 1; i < size; ++i) {
                out[i] = (path.s[i] - es[i]) * scale[i];
            }
        }
    }
};

std::int64_t floor_level(const Scaled& value, double alpha) {
    const double log_alpha = std::log(alpha);
    auto m = static_cast<std::int64_t>(std::floor(value.log() / log_alpha));
    const double v = value.to_double();
    if (std::isfinite(v) && v > 0.0) {
        while (std::pow(alpha, static_cast<double>(m + 1)) <= v) {
            ++m;
        }
        while (std::pow(alpha, static_cast<double>(m)) > v) {
            --m;
        }
    }
    return m;
}

}  // namespace

unsigned threads_from_env() {
    if (const char* env = std::getenv("SLLN_LAB_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v >= 1) {
            return static_cast<unsigned>(std::min<long>(v, 1024));
        }
        fail(ErrorCategory::ConfigParse, "cli", "SLLN_LAB_THREADS",
             "SLLN_LAB_THREADS must be a positive integer, got '" + std::string(env) + "'");
    }
    return std::max(1U, std::thread::hardware_concurrency());
}

std::vector<double> centered_normalized(const Path& path, const MomentTable& moments, const NormingSequence& a) {
    if (moments.horizon() < path.N) {
        fail(ErrorCategory::Validation, std::string(kModule), "moments", "moment table shorter than the path");
    }
    CenteringPlan plan(path.normalizer.get(), moments, a, path.N);
    std::vector<double> out;
    plan.apply(path, out);
    return out;
}

double nearest_rank_quantile(std::span<const double> sorted, double q) {
    if (sorted.empty()) {
        fail(ErrorCategory::InsufficientData, std::string(kModule), "values", "quantile of an empty sample");
    }
    const auto M = static_cast<double>(sorted.size());
    auto rank = static_cast<std::size_t>(std::ceil(q * M));
    rank = std::clamp<std::size_t>(rank, 1, sorted.size());
    return sorted[rank - 1];
}

EnsembleSummary tail_sup_estimate(const ModelSpec& model, const NormingSequence& a, const std::vector<Index>& horizons,
                                  std::int64_t M, std::uint64_t master_seed, unsigned threads) {
    if (horizons.empty()) {
        fail(ErrorCategory::Validation, std::string(kModule), "horizons", "tail_sup_estimate needs horizons");
    }
    for (std::size_t h = 0; h < horizons.size(); ++h) {
        if (horizons[h] < 2 || (h > 0 && horizons[h] <= horizons[h - 1])) {
            fail(ErrorCategory::Validation, std::string(kModule), "horizons",
                 "horizons must be increasing and >= 2");
        }
    }
    if (M < 100) {
        fail(ErrorCategory::Validation, std::string(kModule), "paths",
             "tail_sup_estimate needs M >= 100 paths, got " + std::to_string(M));
    }
    const Index N = horizons.back();
    const MomentTable mom = moments(model, N);
    const Path probe = sample_path(model, 1, master_seed, 0);
    const CenteringPlan plan(probe.normalizer.get(), mom, a, N);

    auto per_path = parallel_map<std::vector<double>>(M, threads, [&](std::int64_t i) {
        const Path path = sample_path(model, N, master_seed, static_cast<std::uint64_t>(i));
        std::vector<double> centered;
        plan.apply(path, centered);
        std::vector<double> sups(horizons.size(), 0.0);
        for (std::size_t h = 0; h < horizons.size(); ++h) {
            const Index hi = horizons[h];
            const Index lo = (hi + 1) / 2;
            double best = 0.0;
            for (Index n = lo; n <= hi; ++n) {
                best = std::max(best, std::fabs(centered[static_cast<std::size_t>(n)]));
            }
            sups[h] = best;
        }
        return sups;
    });

    EnsembleSummary summary;
    summary.model_id = model.id;
    summary.norming_id = a.id;
    summary.horizons = horizons;
    summary.path_count = M;
    summary.master_seed = master_seed;
    std::vector<double> column(static_cast<std::size_t>(M));
    for (std::size_t h = 0; h < horizons.size(); ++h) {
        for (std::size_t i = 0; i < column.size(); ++i) {
            column[i] = per_path[i][h];
        }
        std::sort(column.begin(), column.end());
        std::array<double, 3> q{};
        for (std::size_t k = 0; k < q.size(); ++k) {
            q[k] = nearest_rank_quantile(column, EnsembleSummary::kLevels[k]);
        }
        summary.tail_sup_quantiles.push_back(q);
    }
    return summary;
}

BlockCell BlockingScheme::cell(std::size_t level, std::int64_t band) const {
    const BlockLevel& lv = levels.at(level);
    auto it = lv.cells.find(band);
    if (it != lv.cells.end()) {
        return it->second;
    }
    return BlockCell{lv.first, lv.first, false};
}

std::vector<std::int64_t> BlockingScheme::m_levels() const {
    std::vector<std::int64_t> out;
    out.reserve(levels.size());
    for (const auto& lv : levels) {
        out.push_back(lv.m);
    }
    return out;
}

BlockingScheme build_blocking(const NormingSequence& a, std::span<const double> ES, double alpha, double eps,
                              Index horizon, std::optional<double> A) {
    if (!(alpha > 1.0)) {
        fail(ErrorCategory::NumericDomain, std::string(kModule), "alpha", "blocking needs alpha > 1");
    }
    if (!(eps > 0.0)) {
        fail(ErrorCategory::NumericDomain, std::string(kModule), "eps", "blocking needs eps > 0");
    }
    if (horizon < 1 || static_cast<Index>(ES.size()) < horizon + 1) {
        fail(ErrorCategory::Validation, std::string(kModule), "horizon", "ES must cover [1, horizon]");
    }
    BlockingScheme scheme;
    scheme.alpha = alpha;
    scheme.eps = eps;
    scheme.horizon = horizon;
    const auto size = static_cast<std::size_t>(horizon) + 1;
    scheme.ES.assign(ES.begin(), ES.begin() + static_cast<std::ptrdiff_t>(size));
    scheme.a_values.assign(size, Scaled(0.0));
    std::vector<double> ratio(size, 0.0);
    double sup = 0.0;
    for (Index n = 1; n <= horizon; ++n) {
        const auto i = static_cast<std::size_t>(n);
        const Scaled an = a(n);
        if (!(an.sign() > 0) || (n > 1 && an < scheme.a_values[i - 1])) {
            fail(ErrorCategory::NumericDomain, std::string(kModule), a.id,
                 "norming '" + a.id + "' is not positive nondecreasing at n = " + std::to_string(n));
        }
        scheme.a_values[i] = an;
        ratio[i] = (Scaled(scheme.ES[i]) / an).to_double();
        if (ratio[i] < 0.0) {
            fail(ErrorCategory::Validation, std::string(kModule), "ES",
                 "ES_n/a_n < 0 at n = " + std::to_string(n) + " (nonnegative models only)");
        }
        sup = std::max(sup, ratio[i]);
    }
    scheme.A = A.value_or(sup);
    for (Index n = 1; n <= horizon; ++n) {
        if (ratio[static_cast<std::size_t>(n)] > scheme.A) {
            fail(ErrorCategory::Validation, std::string(kModule), "A",
                 "ES_n/a_n exceeds the witness A = " + std::to_string(scheme.A) + " at n = " + std::to_string(n));
        }
    }
    scheme.L = static_cast<std::int64_t>(std::floor(scheme.A / eps));

    scheme.level_of.assign(size, -1);
    scheme.band_of.assign(size, -1);
    for (Index n = 1; n <= horizon; ++n) {
        const auto i = static_cast<std::size_t>(n);
        const std::int64_t m = floor_level(scheme.a_values[i], alpha);
        if (m < 0) {
            continue;
        }
        if (scheme.levels.empty() || scheme.levels.back().m != m) {
            scheme.levels.push_back(BlockLevel{m, n, n, false, {}});
        }
        BlockLevel& lv = scheme.levels.back();
        lv.last = n;
        auto s = static_cast<std::int64_t>(std::floor(ratio[i] / eps));
        if (static_cast<double>(s) * eps > ratio[i]) {
            --s;
        }
        if (static_cast<double>(s + 1) * eps <= ratio[i]) {
            ++s;
        }
        s = std::clamp<std::int64_t>(s, 0, scheme.L);
        scheme.level_of[i] = static_cast<int>(scheme.levels.size()) - 1;
        scheme.band_of[i] = s;
        auto [it, inserted] = lv.cells.try_emplace(s, BlockCell{n, n, true});
        if (!inserted) {
            it->second.k_minus = std::min(it->second.k_minus, n);
            it->second.k_plus = std::max(it->second.k_plus, n);
        }
    }
    // Nothing past the horizon is inspected, so the last level may continue.
    if (!scheme.levels.empty()) {
        scheme.levels.back().truncated = true;
    }
    return scheme;
}

SandwichResult sandwich_check(const Path& path, const NormingSequence& a, const BlockingScheme& scheme,
                              const SandwichOptions& options) {
    (void)a;
    if (path.N < scheme.horizon) {
        fail(ErrorCategory::Validation, std::string(kModule), "horizon",
             "path horizon " + std::to_string(path.N) + " is shorter than the scheme's " +
                 std::to_string(scheme.horizon));
    }
    if (path.normalizer) {
        fail(ErrorCategory::UnsupportedModel, std::string(kModule), "path",
             "sandwich_check needs raw values from a nonnegative model");
    }
    const auto size = static_cast<std::size_t>(scheme.horizon) + 1;
    std::vector<double> centered(size, 0.0);
    for (std::size_t i = 1; i < size; ++i) {
        if (path.x[i] < 0.0) {
            fail(ErrorCategory::Validation, std::string(kModule), "path",
                 "sandwich_check needs a nonnegative path; x < 0 at n = " + std::to_string(i));
        }
        centered[i] = (Scaled(path.s[i] - scheme.ES[i]) / scheme.a_values[i]).to_double();
    }

    SandwichResult result;
    result.max_upper_excess = -std::numeric_limits<double>::infinity();
    result.max_lower_excess = -std::numeric_limits<double>::infinity();
    const double alpha = scheme.alpha;
    int last_full = -1;
    for (int l = static_cast<int>(scheme.levels.size()) - 1; l >= 0; --l) {
        if (!scheme.levels[static_cast<std::size_t>(l)].truncated) {
            last_full = l;
            break;
        }
    }
    bool observed = false;
    for (std::size_t i = 1; i < size; ++i) {
        const int l = scheme.level_of[i];
        if (l < 0) {
            continue;
        }
        const auto level = static_cast<std::size_t>(l);
        if (options.exclude_truncated_levels && scheme.levels[level].truncated) {
            continue;
        }
        const BlockCell cell = scheme.cell(level, scheme.band_of[i]);
        const double lhs = centered[i];
        const double upper = alpha * centered[static_cast<std::size_t>(cell.k_plus)] + scheme.upper_constant();
        const double lower = centered[static_cast<std::size_t>(cell.k_minus)] / alpha - scheme.lower_constant();
        const double up_excess = lhs - upper;
        const double low_excess = lower - lhs;
        result.max_upper_excess = std::max(result.max_upper_excess, up_excess);
        result.max_lower_excess = std::max(result.max_lower_excess, low_excess);
        const double tol_up = options.tolerance * (1.0 + std::fabs(lhs) + std::fabs(upper));
        const double tol_low = options.tolerance * (1.0 + std::fabs(lhs) + std::fabs(lower));
        ++result.checked;
        if (up_excess > tol_up || low_excess > tol_low) {
            if (result.violations == 0) {
                result.first_violation = static_cast<Index>(i);
            }
            ++result.violations;
        }
        if (l == last_full) {
            result.observed_max = observed ? std::max(result.observed_max, lhs) : lhs;
            result.observed_min = observed ? std::min(result.observed_min, lhs) : lhs;
            observed = true;
        }
    }
    return result;
}

std::vector<DyadicLevelResult> dyadic_max_check(const ModelSpec& model, const NormingSequence& a, const PsiSpec& psi,
                                                double eps, const std::vector<int>& levels, std::int64_t M,
                                                std::uint64_t master_seed, unsigned threads) {
    if (!(eps > 0.0)) {
        fail(ErrorCategory::NumericDomain, std::string(kModule), "eps", "dyadic_max_check needs eps > 0");
    }
    if (levels.empty() || M < 1) {
        fail(ErrorCategory::Validation, std::string(kModule), "levels", "dyadic_max_check needs levels and M >= 1");
    }
    for (int level : levels) {
        if (level < 0 || level > 26) {
            fail(ErrorCategory::Validation, std::string(kModule), "levels", "dyadic levels must lie in [0, 26]");
        }
    }
    if (!model.independent()) {
        fail(ErrorCategory::UnsupportedModel, std::string(kModule), model.id,
             "dyadic_max_check needs an independent model");
    }
    const int top = *std::max_element(levels.begin(), levels.end());
    const Index N = Index{1} << (top + 1);
    const MomentTable mom = moments(model, N);
    if (!mom.var_X || !mom.var_S) {
        fail(ErrorCategory::UnsupportedModel, std::string(kModule), model.id, "model has no per-term variances");
    }
    const Path probe = sample_path(model, 1, master_seed, 0);
    const Sequence* normalizer = probe.normalizer.get();

    // C = sup_k Var(S_k) psi(k) / a_k^2 over the simulated range.
    Scaled C(0.0);
    for (Index k = std::max<Index>(psi.n_start(), 1); k <= N; ++k) {
        const Scaled r = (*mom.var_S)[static_cast<std::size_t>(k)] * Scaled(psi.eval(static_cast<double>(k))) /
                         a.squared(k);
        if (C < r) {
            C = r;
        }
    }

    struct LevelPlan {
        Index lo = 0;  // first index of the block, 2^n + 1
        Index hi = 0;  // 2^{n+1}
        std::vector<double> scale;  // multiplies x_i
        std::vector<double> mean;   // EX_i / a(2^{n+1})
    };
    std::vector<LevelPlan> plans;
    std::vector<DyadicLevelResult> results;
    for (int level : levels) {
        LevelPlan plan;
        plan.lo = (Index{1} << level) + 1;
        plan.hi = Index{1} << (level + 1);
        const Scaled target = a(plan.hi);
        Scaled var_sum(0.0);
        for (Index i = plan.lo; i <= plan.hi; ++i) {
            const auto ii = static_cast<std::size_t>(i);
            const Scaled raw_scale = normalizer ? (*normalizer)(i) / target : Scaled(1.0) / target;
            plan.scale.push_back(raw_scale.to_double());
            plan.mean.push_back((Scaled(mom.ES[ii] - mom.ES[ii - 1]) / target).to_double());
            var_sum += (*mom.var_X)[ii];
        }
        plans.push_back(std::move(plan));

        DyadicLevelResult r;
        r.level = level;
        r.paths = M;
        r.kolmogorov_bound = (var_sum / (Scaled(eps * eps) * a.squared(Index{1} << (level + 1)))).to_double();
        const double psi_top = psi.eval(static_cast<double>(Index{1} << (level + 1)));
        r.psi_rate_bound = psi_top > 0.0 ? (C / Scaled(eps * eps * psi_top)).to_double()
                                         : std::numeric_limits<double>::infinity();
        results.push_back(r);
    }

    auto exceed = parallel_map<std::vector<char>>(M, threads, [&](std::int64_t idx) {
        const Path path = sample_path(model, N, master_seed, static_cast<std::uint64_t>(idx));
        std::vector<char> hit(plans.size(), 0);
        for (std::size_t p = 0; p < plans.size(); ++p) {
            const LevelPlan& plan = plans[p];
            double acc = 0.0;
            for (Index i = plan.lo; i <= plan.hi; ++i) {
                const auto j = static_cast<std::size_t>(i - plan.lo);
                acc += path.x[static_cast<std::size_t>(i)] * plan.scale[j] - plan.mean[j];
                if (std::fabs(acc) > eps) {
                    hit[p] = 1;
                    break;
                }
            }
        }
        return hit;
    });

    for (std::size_t p = 0; p < results.size(); ++p) {
        DyadicLevelResult& r = results[p];
        for (const auto& row : exceed) {
            r.exceedances += row[p];
        }
        r.frequency = static_cast<double>(r.exceedances) / static_cast<double>(M);
        const double b = std::min(r.kolmogorov_bound, 1.0);
        r.binomial_sigma = std::sqrt(b * (1.0 - b) / static_cast<double>(M));
        r.within = r.frequency <= r.kolmogorov_bound + 3.0 * r.binomial_sigma;
    }
    return results;
}

LedgerResult borel_cantelli_ledger(const std::function<ExactRational(Index)>& p, Index first, Index N,
                                   const DiagnosticOptions& options) {
    const ExactRational zero(0);
    const ExactRational one(1);
    return borel_cantelli_ledger(
        std::function<double(Index)>([&](Index n) {
            const ExactRational v = p(n);
            if (v < zero || v > one) {
                fail(ErrorCategory::NumericDomain, std::string(kModule), "p",
                     "probability out of [0,1] at n = " + std::to_string(n) + ": " + v.to_string());
            }
            return v.to_double();
        }),
        first, N, options);
}

LedgerResult borel_cantelli_ledger(const std::function<double(Index)>& p, Index first, Index N,
                                   const DiagnosticOptions& options) {
    if (first < 1 || N < first) {
        fail(ErrorCategory::Validation, std::string(kModule), "N", "borel_cantelli_ledger needs 1 <= first <= N");
    }
    SeriesAccumulator acc(first, N);
    for (Index n = first; n <= N; ++n) {
        const double v = p(n);
        if (!(v >= 0.0 && v <= 1.0)) {
            fail(ErrorCategory::NumericDomain, std::string(kModule), "p",
                 "probability out of [0,1] at n = " + std::to_string(n));
        }
        acc.add(n, v);
    }
    LedgerResult out;
    out.trace = std::move(acc).finish(options);
    out.verdict = out.trace.verdict;
    return out;
}

namespace {

struct HitCount {
    std::int64_t hits = 0;
    bool window_hit = false;
};

HitCount count_hits(const Path& path, Index window_lo) {
    if (path.model_id != "example1" || !path.normalizer) {
        fail(ErrorCategory::UnsupportedModel, std::string(kModule), "paths",
             "example1_hit_counter needs Example 1 paths, got '" + path.model_id + "'");
    }
    HitCount c;
    for (Index n = 3; n <= path.N; ++n) {
        if (std::fabs(path.x[static_cast<std::size_t>(n)]) == 1.0) {
            ++c.hits;
            if (n >= window_lo) {
                c.window_hit = true;
            }
        }
    }
    return c;
}

HitSummary summarize_hits(Index N, const std::vector<HitCount>& counts) {
    HitSummary s;
    s.horizon = N;
    s.paths = static_cast<std::int64_t>(counts.size());
    s.window_lo = (N + 1) / 2;
    s.window_hi = N;
    double var_sum = 0.0;
    double miss = 1.0;
    for (Index n = 3; n <= N; ++n) {
        const double p = example1_hit_probability_double(n);
        s.expected_hits += p;
        var_sum += p * (1.0 - p);
        if (n >= s.window_lo) {
            miss *= 1.0 - p;
        }
    }
    std::int64_t total = 0;
    std::int64_t windows = 0;
    for (const auto& c : counts) {
        total += c.hits;
        windows += c.window_hit ? 1 : 0;
    }
    const auto M = static_cast<double>(std::max<std::int64_t>(s.paths, 1));
    s.mean_hits = static_cast<double>(total) / M;
    s.sigma_mean = std::sqrt(var_sum / M);
    s.z = s.sigma_mean > 0.0 ? (s.mean_hits - s.expected_hits) / s.sigma_mean : 0.0;
    s.window_expected = 1.0 - miss;
    s.window_fraction = static_cast<double>(windows) / M;
    s.window_sigma = std::sqrt(s.window_expected * (1.0 - s.window_expected) / M);
    s.window_z = s.window_sigma > 0.0 ? (s.window_fraction - s.window_expected) / s.window_sigma : 0.0;
    return s;
}

}  // namespace

HitSummary example1_hit_counter(std::span<const Path> paths) {
    if (paths.empty()) {
        fail(ErrorCategory::InsufficientData, std::string(kModule), "paths", "example1_hit_counter needs paths");
    }
    const Index N = paths.front().N;
    std::vector<HitCount> counts;
    counts.reserve(paths.size());
    for (const Path& path : paths) {
        if (path.N != N) {
            fail(ErrorCategory::Validation, std::string(kModule), "paths", "paths must share one horizon");
        }
        counts.push_back(count_hits(path, (N + 1) / 2));
    }
    return summarize_hits(N, counts);
}

HitSummary example1_hit_ensemble(Index N, std::int64_t M, std::uint64_t master_seed, unsigned threads) {
    if (M < 1) {
        fail(ErrorCategory::Validation, std::string(kModule), "paths", "example1_hit_ensemble needs M >= 1");
    }
    const ModelSpec model = make_model("example1");
    auto counts = parallel_map<HitCount>(M, threads, [&](std::int64_t i) {
        return count_hits(sample_path(model, N, master_seed, static_cast<std::uint64_t>(i)), (N + 1) / 2);
    });
    return summarize_hits(N, counts);
}

}  // namespace slln
