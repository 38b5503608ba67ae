#include "slln/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "slln/error.hpp"
#include "slln/ids.hpp"
#include "slln/mc_lab.hpp"
#include "slln/models.hpp"
#include "slln/parallel.hpp"
#include "slln/psi.hpp"
#include "slln/sequences.hpp"

namespace slln {

namespace {

class Artifacts {
public:
    Artifacts(std::string prefix, const std::string& format)
        : prefix_(std::move(prefix)), traces_(format != "json"), summary_json_(format != "csv") {}

    /// Registers a CSV trace and returns its relative name (null when traces
    /// are not emitted).
    Json add(const std::string& name, const CsvTable& table) {
        if (!traces_) {
            return nullptr;
        }
        std::string file = prefix_ + "_" + name + ".csv";
        files_.emplace_back(file, table.text());
        return file;
    }

    std::vector<std::pair<std::string, std::string>> finish(Json& summary) {
        Json names = Json::array();
        for (const auto& f : files_) {
            names.push_back(f.first);
        }
        if (!summary_json_) {
            names.push_back(prefix_ + "_summary.csv");
        }
        summary["artifacts"] = names;
        std::vector<std::pair<std::string, std::string>> out;
        if (summary_json_) {
            out.emplace_back(prefix_ + ".json", to_json_text(summary));
        } else {
            CsvTable flat({"key", "value"});
            for (const auto& [k, v] : flatten_json(summary)) {
                flat.add_row(std::vector<std::string>{k, v});
            }
            files_.emplace_back(prefix_ + "_summary.csv", flat.text());
        }
        out.insert(out.end(), files_.begin(), files_.end());
        return out;
    }

private:
    std::string prefix_;
    bool traces_;
    bool summary_json_;
    std::vector<std::pair<std::string, std::string>> files_;
};

bool is_checkpoint(Index n) {
    if (n > 0 && (n & (n - 1)) == 0) {
        return true;
    }
    while (n >= 10 && n % 10 == 0) {
        n /= 10;
    }
    return n == 1;
}

/// n, term, partial_sum; every row for short traces, checkpoints otherwise.
CsvTable series_table(const SeriesTrace& trace) {
    CsvTable table({"n", "term", "partial_sum"});
    const bool all = trace.indices.size() <= 10'000;
    for (std::size_t i = 0; i < trace.indices.size(); ++i) {
        const Index n = trace.indices[i];
        if (all || n == trace.n_start || n == trace.n_end || is_checkpoint(n)) {
            table.add_row(std::vector<double>{static_cast<double>(n), trace.terms[i], trace.partial_sums[i]});
        }
    }
    return table;
}

CsvTable ratio_table(const ConditionReport& report) {
    CsvTable table({"n", "ratio"});
    for (std::size_t i = 0; i < report.ratio_trace.size(); ++i) {
        table.add_row(
            std::vector<double>{static_cast<double>(report.first_index + static_cast<Index>(i)), report.ratio_trace[i]});
    }
    return table;
}

Json report_json(const ConditionReport& r, Json trace_path) {
    return Json{{"id", r.id},
                {"first_index", r.first_index},
                {"horizon", r.horizon},
                {"witness_C", r.witness_C},
                {"witness_index", r.witness_index},
                {"first_block_max", r.first_block_max},
                {"tail_witness_C", r.tail_witness_C},
                {"trend", std::string(to_string(r.trend))},
                {"trace_path", std::move(trace_path)}};
}

Json series_json(const SeriesTrace& t, Json trace_path) {
    Json ratios = Json::array();
    const std::size_t keep = 8;
    const std::size_t from = t.tail_slice_ratios.size() > keep ? t.tail_slice_ratios.size() - keep : 0;
    for (std::size_t i = from; i < t.tail_slice_ratios.size(); ++i) {
        ratios.push_back(t.tail_slice_ratios[i]);
    }
    return Json{{"n_start", t.n_start},
                {"n_end", t.n_end},
                {"partial_sum", t.total()},
                {"last_slice_ratios", ratios},
                {"verdict", std::string(to_string(t.verdict))},
                {"trace_path", std::move(trace_path)}};
}

Json quantiles_json(const EnsembleSummary& s) {
    Json rows = Json::array();
    for (std::size_t h = 0; h < s.horizons.size(); ++h) {
        Json q;
        for (std::size_t k = 0; k < EnsembleSummary::kLevels.size(); ++k) {
            q["q" + std::to_string(static_cast<int>(std::lround(EnsembleSummary::kLevels[k] * 100)))] =
                s.tail_sup_quantiles[h][k];
        }
        rows.push_back(Json{{"horizon", s.horizons[h]}, {"quantiles", q}});
    }
    return rows;
}

CsvTable quantile_table(const EnsembleSummary& s) {
    CsvTable table({"horizon", "q50", "q90", "q99"});
    for (std::size_t h = 0; h < s.horizons.size(); ++h) {
        const auto& q = s.tail_sup_quantiles[h];
        table.add_row(std::vector<double>{static_cast<double>(s.horizons[h]), q[0], q[1], q[2]});
    }
    return table;
}

DiagnosticOptions diagnostic_options(const ExperimentConfig& c) {
    DiagnosticOptions o;
    if (c.has("k")) {
        o.k = static_cast<int>(c.integer("k"));
    }
    if (c.has("margin")) {
        o.margin = c.real("margin");
    }
    return o;
}

ConditionOptions condition_options(const ExperimentConfig& c) {
    ConditionOptions o;
    if (c.has("growth_factor")) {
        o.growth_factor = c.real("growth_factor");
    }
    return o;
}

Sequence scaled_sequence(std::string id, std::function<Scaled(Index)> f) {
    Sequence s;
    s.id = std::move(id);
    s.eval = std::move(f);
    return s;
}

bool is_pow2(Index n) { return n > 0 && (n & (n - 1)) == 0; }

// ---------------------------------------------------------------------------

void classify_psi(const ExperimentConfig& c, Json& out, Artifacts& art) {
    const auto options = diagnostic_options(c);
    const Index N = c.integer("horizon");
    const Index G = c.integer("geometric_horizon");
    Json rows = Json::array();
    CsvTable slices({"psi", "k", "slice_sum", "ratio"});
    std::size_t idx = 0;
    for (const auto& id : c.texts("psi")) {
        const PsiSpec psi = make_psi(id);
        const SeriesTrace trace = psi_series_partial(psi, N, options);
        for (std::size_t i = 0; i < trace.slices.size(); ++i) {
            slices.add_row(std::vector<std::string>{
                id, std::to_string(trace.slices[i].k), format_real(trace.slices[i].sum),
                i == 0 ? std::string() : format_real(trace.tail_slice_ratios[i - 1])});
        }
        Json geometric = Json::array();
        for (double b : c.reals("bases")) {
            const SeriesTrace g = geometric_tail_partial(psi, b, G, options);
            geometric.push_back(Json{{"base", b},
                                     {"horizon", G},
                                     {"partial_sum", g.total()},
                                     {"verdict", std::string(to_string(g.verdict))}});
        }
        Json consistent = nullptr;
        if (psi.claimed_class == PsiClass::Cc) {
            consistent = trace.verdict == Verdict::ConvergingTrend;
        } else if (psi.claimed_class == PsiClass::Cd) {
            consistent = trace.verdict == Verdict::DivergingTrend;
        }
        rows.push_back(Json{{"id", id},
                            {"claimed_class", std::string(to_string(psi.claimed_class))},
                            {"x0", psi.x0},
                            {"series", series_json(trace, art.add("trace_" + std::to_string(idx), series_table(trace)))},
                            {"consistent_with_class", consistent},
                            {"geometric_tails", geometric}});
        ++idx;
    }
    out["psi"] = rows;
    out["slices_path"] = art.add("slices", slices);
}

void check_conditions(const ExperimentConfig& c, Json& out, Artifacts& art) {
    const auto copt = condition_options(c);
    const Index N = c.integer("horizon");
    const NormingSequence a = make_norming(c.text("norming"));
    const ModelSpec model = make_model(c.text("model"));
    const PsiSpec psi = make_psi(c.text("psi"));

    out["norming"] = a.id;
    out["model"] = model.id;
    out["psi"] = psi.id;
    out["unbounded_witness"] = Json{{"horizon", N}, {"a_N_over_a_1", check_norming(a, N)}};

    const Index n_min = c.integer("n_min");
    const ConditionReport doubling = doubling_ratio(a, N, n_min, copt);
    Json sensitivity = Json::array();
    std::set<Index> cutoffs{1, 10, 100, 1000, n_min};
    for (Index cut : cutoffs) {
        if (cut <= N / 2) {
            const auto r = doubling_ratio(a, N, cut, copt);
            sensitivity.push_back(Json{{"n_min", cut}, {"witness_C", r.witness_C}, {"trend", std::string(to_string(r.trend))}});
        }
    }
    Json reports;
    reports["doubling"] = report_json(doubling, art.add("doubling", ratio_table(doubling)));
    reports["doubling"]["n_min"] = n_min;
    reports["doubling"]["cutoff_sensitivity"] = sensitivity;
    if (a.doubling_Q) {
        reports["doubling"]["analytic_Q"] = *a.doubling_Q;
    }

    const MomentTable mom = moments(model, N);
    const auto ES = std::make_shared<std::vector<double>>(mom.ES);
    const Sequence es_seq = scaled_sequence("ES", [ES](Index n) { return Scaled((*ES)[static_cast<std::size_t>(n)]); });
    const ConditionReport es_report = big_o_witness(es_seq, a, N, 1, copt);
    reports["mean_growth"] = report_json(es_report, art.add("mean_growth", ratio_table(es_report)));

    if (mom.var_S) {
        const auto var = std::make_shared<std::vector<Scaled>>(*mom.var_S);
        const Sequence f = scaled_sequence("VarS*psi", [var, psi](Index n) {
            return (*var)[static_cast<std::size_t>(n)] * Scaled(psi.eval(static_cast<double>(n)));
        });
        const Sequence g = scaled_sequence("a^2", [a](Index n) { return a.squared(n); });
        const ConditionReport petrov = big_o_witness(f, g, N, psi.n_start(), copt);
        reports["variance_growth"] = report_json(petrov, art.add("variance_growth", ratio_table(petrov)));
    } else {
        reports["variance_growth"] = nullptr;
    }

    const IncrementReport inc = increment_growth_check(
        [ES](Index n) { return (*ES)[static_cast<std::size_t>(n)]; }, N, c.integer("window_min"), copt);
    reports["increment_growth"] = report_json(inc.report, art.add("increment_growth", ratio_table(inc.report)));
    reports["increment_growth"]["window_min"] = inc.window_min;
    reports["increment_growth"]["asymptotic_window"] = inc.asymptotic_window;
    reports["increment_growth"]["asymptotic_C"] = inc.asymptotic_C;

    if (mom.var_X) {
        const auto vx = std::make_shared<std::vector<Scaled>>(*mom.var_X);
        const Sequence v = scaled_sequence("VarX", [vx](Index n) { return (*vx)[static_cast<std::size_t>(n)]; });
        const SeriesTrace ks = kolmogorov_series(v, N);
        reports["kolmogorov_series"] = series_json(ks, art.add("kolmogorov_series", series_table(ks)));
    } else {
        reports["kolmogorov_series"] = nullptr;
    }
    out["reports"] = reports;
}

Theorem5Options theorem5_options(const ExperimentConfig& c) {
    Theorem5Options o;
    o.exact_horizon = c.has("exact_horizon") ? c.integer("exact_horizon") : o.exact_horizon;
    o.condition = condition_options(c);
    o.diagnostic = diagnostic_options(c);
    o.conclusion_first = c.has("conclusion_first") ? c.integer("conclusion_first") : 1;
    return o;
}

Json exact_premise_json(const Theorem5Result& r) {
    if (r.exact_premise.empty()) {
        return nullptr;
    }
    ExactRational lo = r.exact_premise.front();
    ExactRational hi = lo;
    for (const auto& v : r.exact_premise) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    const Index first = r.premise.first_index;
    const Index last = first + static_cast<Index>(r.exact_premise.size()) - 1;
    // Longest suffix on which the exact ratio is constant.
    std::size_t from = r.exact_premise.size() - 1;
    while (from > 0 && r.exact_premise[from - 1] == r.exact_premise.back()) {
        --from;
    }
    return Json{{"first_index", first},
                {"last_index", last},
                {"min", lo.to_string()},
                {"max", hi.to_string()},
                {"witness", hi.to_string()},
                {"constant_from", first + static_cast<Index>(from)},
                {"constant_value", r.exact_premise.back().to_string()}};
}

void theorem5(const ExperimentConfig& c, Json& out, Artifacts& art) {
    const Index N = c.integer("horizon");
    const auto options = theorem5_options(c);
    const Index doubling_N = std::min<Index>(N, 2000);
    if (c.flag("bundled_cases")) {
        Json rows = Json::array();
        for (const auto& tc : bundled_theorem5_cases()) {
            const Sequence b = make_sequence(tc.b);
            const NormingSequence a = make_norming(tc.a);
            const PsiSpec psi = make_psi(tc.psi);
            const auto dbl = doubling_ratio(a, doubling_N, 1, options.condition);
            const auto r = theorem5_check(b, a, psi, N, options);
            rows.push_back(Json{{"b", tc.b},
                                {"norming", tc.a},
                                {"psi", tc.psi},
                                {"doubling_trend", std::string(to_string(dbl.trend))},
                                {"doubling_witness_C", dbl.witness_C},
                                {"premise_trend", std::string(to_string(r.premise.trend))},
                                {"premise_witness_C", r.premise.witness_C},
                                {"conclusion_partial_sum", r.conclusion.total()},
                                {"conclusion_verdict", std::string(to_string(r.conclusion.verdict))}});
        }
        out["cases"] = rows;
        return;
    }
    const Sequence b = make_sequence(c.text("b"));
    const NormingSequence a = make_norming(c.text("norming"));
    const PsiSpec psi = make_psi(c.text("psi"));
    const auto dbl = doubling_ratio(a, doubling_N, 1, options.condition);
    const auto r = theorem5_check(b, a, psi, N, options);
    out["b"] = b.id;
    out["norming"] = a.id;
    out["psi"] = psi.id;
    out["doubling"] = report_json(dbl, art.add("doubling", ratio_table(dbl)));
    out["premise"] = report_json(r.premise, art.add("premise", ratio_table(r.premise)));
    out["exact_premise"] = exact_premise_json(r);
    out["conclusion"] = series_json(r.conclusion, art.add("conclusion", series_table(r.conclusion)));
}

void remark2(const ExperimentConfig& c, Json& out, Artifacts& art) {
    const Index N = c.integer("horizon");
    const Index E = c.integer("exact_horizon");
    const Index G = c.integer("growth_horizon");

    ExactRational sum(0);
    Index sum_ok = 0;
    Index term_ok = 0;
    Index first_sum_failure = 0;
    Index first_term_failure = 0;
    for (Index n = 1; n <= E; ++n) {
        const ExactRational bn = remark2_b(n);
        sum += bn;
        if (n < 3) {
            continue;
        }
        const ExactRational two_n = ExactRational::pow2(static_cast<unsigned>(n));
        if (sum == two_n / ExactRational(n)) {
            ++sum_ok;
        } else if (first_sum_failure == 0) {
            first_sum_failure = n;
        }
        if (bn / two_n == ExactRational(n - 2, 2 * n * (n - 1))) {
            ++term_ok;
        } else if (first_term_failure == 0) {
            first_term_failure = n;
        }
    }
    out["exact"] = Json{{"horizon", E},
                        {"checked", E - 2},
                        {"prefix_sum_identity_holds", sum_ok},
                        {"term_identity_holds", term_ok},
                        {"first_prefix_sum_failure", first_sum_failure == 0 ? Json(nullptr) : Json(first_sum_failure)},
                        {"first_term_failure", first_term_failure == 0 ? Json(nullptr) : Json(first_term_failure)}};

    Theorem5Options options;
    options.exact_horizon = E;
    options.conclusion_first = 3;
    const Index run_to = std::max(N, G);
    if (run_to > kDenseTraceLimit && !is_pow2(N) && !is_checkpoint(N)) {
        fail(ErrorCategory::Validation, "cli", "horizon",
             "with growth_horizon beyond 2^20 the horizon must be a power of 2 or 10");
    }
    const Sequence b = remark2_sequence();
    const NormingSequence a = make_norming("exp2:half");
    const PsiSpec psi = make_psi("pow:delta=1");
    const auto r = theorem5_check(b, a, psi, run_to, options);
    out["premise"] = report_json(r.premise, art.add("premise", ratio_table(r.premise)));
    out["exact_premise"] = exact_premise_json(r);

    // Closed form of the conclusion partial sum: H_N - H_{N-1}/2 - 1.
    double h = 0.0;
    double carry = 0.0;
    for (Index k = N - 1; k >= 1; --k) {
        const double t = 1.0 / static_cast<double>(k);
        const double s = h + t;
        carry += std::fabs(h) >= std::fabs(t) ? (h - s) + t : (t - s) + h;
        h = s;
    }
    const double h_prev = h + carry;
    const double closed = h_prev + 1.0 / static_cast<double>(N) - 0.5 * h_prev - 1.0;

    Json conclusion = series_json(r.conclusion, art.add("conclusion", series_table(r.conclusion)));
    conclusion["partial_sum_at_horizon"] = conclusion_growth_estimate(r.conclusion, N);
    conclusion["closed_form_at_horizon"] = closed;
    conclusion["horizon"] = N;
    if (G > 0) {
        const double at_g = conclusion_growth_estimate(r.conclusion, G);
        conclusion["growth_horizon"] = G;
        conclusion["partial_sum_at_growth_horizon"] = at_g;
        conclusion["growth"] = at_g - conclusion_growth_estimate(r.conclusion, N);
        conclusion["half_log_ratio"] = 0.5 * std::log(static_cast<double>(G) / static_cast<double>(N));
    }
    out["conclusion"] = conclusion;
    const auto dbl = doubling_ratio(a, 60);
    out["doubling"] = report_json(dbl, art.add("doubling", ratio_table(dbl)));
}

void example1(const ExperimentConfig& c, Json& out, Artifacts& art, unsigned threads) {
    const Index N = c.integer("horizon");
    const Index E = c.integer("exact_horizon");
    const std::int64_t M = c.integer("paths");
    const std::uint64_t seed = c.seed();

    Index mass_ok = 0;
    Index var_ok = 0;
    Index ratio_ok = 0;
    for (Index n = 1; n <= E; ++n) {
        if (example1_pmf(n).total_mass() == ExactRational(1)) {
            ++mass_ok;
        }
        if (n >= 3) {
            const ExactRational two_n = ExactRational::pow2(static_cast<unsigned>(n));
            const ExactRational var = example1_var_S_exact(n);
            var_ok += var == two_n / ExactRational(n) ? 1 : 0;
            ratio_ok += var * ExactRational(n) / two_n == ExactRational(1) ? 1 : 0;
        }
    }
    out["exact"] = Json{{"horizon", E},
                        {"pmf_mass_one", mass_ok},
                        {"variance_identity_holds", var_ok},
                        {"variance_ratio_one", ratio_ok},
                        {"checked_from_3", E - 2}};

    const NormingSequence a = example1_norming();
    const auto dbl = doubling_ratio(a, 60);
    out["doubling"] = report_json(dbl, art.add("doubling", ratio_table(dbl)));

    const LedgerResult ledger = borel_cantelli_ledger(
        std::function<ExactRational(Index)>([](Index n) { return example1_hit_probability(n); }), 3, N);
    out["ledger"] = series_json(ledger.trace, art.add("ledger", series_table(ledger.trace)));

    const HitSummary hits = example1_hit_ensemble(N, M, seed, threads);
    out["hits"] = Json{{"horizon", hits.horizon},
                       {"paths", hits.paths},
                       {"mean_hits", hits.mean_hits},
                       {"expected_hits", hits.expected_hits},
                       {"sigma_mean", hits.sigma_mean},
                       {"z", hits.z},
                       {"window_lo", hits.window_lo},
                       {"window_hi", hits.window_hi},
                       {"window_fraction", hits.window_fraction},
                       {"window_expected", hits.window_expected},
                       {"window_sigma", hits.window_sigma},
                       {"window_z", hits.window_z}};

    const EnsembleSummary s = tail_sup_estimate(make_model("example1"), a, c.integers("horizons"), M, seed, threads);
    Json tail{{"horizons", s.horizons}, {"rows", quantiles_json(s)}, {"trace_path", art.add("tail_sup", quantile_table(s))}};
    Json decreases = Json::array();
    for (std::size_t h = 1; h < s.horizons.size(); ++h) {
        decreases.push_back(s.tail_sup_quantiles[h][0] < s.tail_sup_quantiles[h - 1][0]);
    }
    tail["median_decreases"] = decreases;
    out["tail_sup"] = tail;
}

void simulate(const ExperimentConfig& c, Json& out, Artifacts& art, unsigned threads) {
    const ModelSpec model = make_model(c.text("model"));
    const auto& horizons = c.integers("horizons");
    const NormingSequence a = c.text("norming") == "W"
                                  ? make_weights(*model.weights, horizons.back()).as_norming()
                                  : make_norming(c.text("norming"));
    const EnsembleSummary s = tail_sup_estimate(model, a, horizons, c.integer("paths"), c.seed(), threads);
    out["model"] = model.id;
    out["norming"] = c.text("norming");
    out["paths"] = s.path_count;
    out["horizons"] = s.horizons;
    out["quantiles"] = quantiles_json(s);
    out["trace_path"] = art.add("tail_sup", quantile_table(s));
    Json lil = Json::array();
    bool decreasing = true;
    for (std::size_t h = 0; h < s.horizons.size(); ++h) {
        const double n = static_cast<double>(s.horizons[h]);
        lil.push_back(n > std::exp(1.0) ? Json(std::sqrt(2.0 * std::log(std::log(n)) / n)) : Json(nullptr));
        if (h > 0 && !(s.tail_sup_quantiles[h][0] < s.tail_sup_quantiles[h - 1][0])) {
            decreasing = false;
        }
    }
    out["lil_scale"] = lil;
    out["median_strictly_decreasing"] = decreasing;
}

void blocking(const ExperimentConfig& c, Json& out, Artifacts& art, unsigned threads) {
    const ModelSpec model = make_model(c.text("model"));
    const NormingSequence a = make_norming(c.text("norming"));
    const Index N = c.integer("horizon");
    const std::int64_t M = c.integer("paths");
    const std::uint64_t seed = c.seed();
    std::optional<double> A;
    if (c.text("A") != "auto") {
        A = parse_double(c.text("A"), "cli", "A");
    }
    SandwichOptions options;
    options.exclude_truncated_levels = c.flag("exclude_truncated");

    const MomentTable mom = moments(model, N);
    std::vector<BlockingScheme> schemes;
    for (double alpha : c.reals("alpha")) {
        for (double eps : c.reals("eps")) {
            schemes.push_back(build_blocking(a, mom.ES, alpha, eps, N, A));
        }
    }
    auto per_path = parallel_map<std::vector<SandwichResult>>(M, threads, [&](std::int64_t i) {
        const Path path = sample_path(model, N, seed, static_cast<std::uint64_t>(i));
        std::vector<SandwichResult> r;
        for (const auto& scheme : schemes) {
            r.push_back(sandwich_check(path, a, scheme, options));
        }
        return r;
    });

    Json grid = Json::array();
    for (std::size_t g = 0; g < schemes.size(); ++g) {
        const auto& s = schemes[g];
        Index checked = 0;
        Index violations = 0;
        double upper_excess = -INFINITY;
        double lower_excess = -INFINITY;
        double limsup = -INFINITY;
        double liminf = INFINITY;
        for (const auto& row : per_path) {
            checked += row[g].checked;
            violations += row[g].violations;
            upper_excess = std::max(upper_excess, row[g].max_upper_excess);
            lower_excess = std::max(lower_excess, row[g].max_lower_excess);
            limsup = std::max(limsup, row[g].observed_max);
            liminf = std::min(liminf, row[g].observed_min);
        }
        std::size_t populated = 0;
        for (const auto& lv : s.levels) {
            populated += lv.cells.size();
        }
        grid.push_back(Json{{"alpha", s.alpha},
                            {"eps", s.eps},
                            {"A", s.A},
                            {"L", s.L},
                            {"levels", s.levels.size()},
                            {"populated_cells", populated},
                            {"upper_bound_constant", s.upper_constant()},
                            {"lower_bound_constant", s.lower_constant()},
                            {"checked", checked},
                            {"violations", violations},
                            {"max_upper_excess", upper_excess},
                            {"max_lower_excess", lower_excess},
                            {"observed_max_last_level", limsup},
                            {"observed_min_last_level", liminf}});
    }
    if (!schemes.empty()) {
        CsvTable cells({"level", "m", "first", "last", "truncated", "band", "k_minus", "k_plus"});
        const auto& s = schemes.front();
        for (std::size_t l = 0; l < s.levels.size(); ++l) {
            const auto& lv = s.levels[l];
            for (const auto& [band, cell] : lv.cells) {
                cells.add_row(std::vector<double>{static_cast<double>(l), static_cast<double>(lv.m),
                                                  static_cast<double>(lv.first), static_cast<double>(lv.last),
                                                  lv.truncated ? 1.0 : 0.0, static_cast<double>(band),
                                                  static_cast<double>(cell.k_minus), static_cast<double>(cell.k_plus)});
            }
        }
        out["cells_path"] = art.add("cells", cells);
    }
    out["model"] = model.id;
    out["norming"] = a.id;
    out["horizon"] = N;
    out["paths"] = M;
    out["grid"] = grid;
}

void dyadic(const ExperimentConfig& c, Json& out, Artifacts& art, unsigned threads) {
    const ModelSpec model = make_model(c.text("model"));
    const NormingSequence a = make_norming(c.text("norming"));
    const PsiSpec psi = make_psi(c.text("psi"));
    std::vector<int> levels;
    for (auto l : c.integers("levels")) {
        levels.push_back(static_cast<int>(l));
    }
    const auto results = dyadic_max_check(model, a, psi, c.real("eps"), levels, c.integer("paths"), c.seed(), threads);
    Json rows = Json::array();
    CsvTable table({"level", "exceedances", "paths", "frequency", "kolmogorov_bound", "binomial_sigma", "psi_rate_bound"});
    bool all_within = true;
    for (const auto& r : results) {
        rows.push_back(Json{{"level", r.level},
                            {"exceedances", r.exceedances},
                            {"paths", r.paths},
                            {"frequency", r.frequency},
                            {"kolmogorov_bound", r.kolmogorov_bound},
                            {"binomial_sigma", r.binomial_sigma},
                            {"psi_rate_bound", r.psi_rate_bound},
                            {"within", r.within}});
        table.add_row(std::vector<double>{static_cast<double>(r.level), static_cast<double>(r.exceedances),
                                          static_cast<double>(r.paths), r.frequency, r.kolmogorov_bound,
                                          r.binomial_sigma, r.psi_rate_bound});
        all_within = all_within && r.within;
    }
    out["model"] = model.id;
    out["norming"] = a.id;
    out["psi"] = psi.id;
    out["eps"] = c.real("eps");
    out["levels"] = rows;
    out["all_within"] = all_within;
    out["trace_path"] = art.add("levels", table);
}

Json config_json(const ExperimentConfig& c) {
    Json j = Json::object();
    for (const auto& [k, v] : c.canonical()) {
        j[k] = v;
    }
    return j;
}

}  // namespace

std::vector<std::pair<std::string, std::string>> render(const ExperimentConfig& config, unsigned threads,
                                                        Json* summary_out) {
    const std::string name(to_string(config.kind));
    Artifacts art(name, config.text("format"));
    Json summary = Json::object();
    summary["experiment"] = name;
    summary["config"] = config_json(config);
    if (config.has("seed")) {
        summary["seed"] = config.seed();
    }
    Json results = Json::object();
    switch (config.kind) {
        case ExperimentKind::ClassifyPsi: classify_psi(config, results, art); break;
        case ExperimentKind::CheckConditions: check_conditions(config, results, art); break;
        case ExperimentKind::Theorem5: theorem5(config, results, art); break;
        case ExperimentKind::Remark2: remark2(config, results, art); break;
        case ExperimentKind::Example1: example1(config, results, art, threads); break;
        case ExperimentKind::Simulate: simulate(config, results, art, threads); break;
        case ExperimentKind::Blocking: blocking(config, results, art, threads); break;
        case ExperimentKind::Dyadic: dyadic(config, results, art, threads); break;
        case ExperimentKind::List: results = list_catalogs(); break;
    }
    summary["results"] = results;
    auto files = art.finish(summary);
    if (summary_out) {
        *summary_out = summary;
    }
    return files;
}

RunOutput run(const ExperimentConfig& config, const std::filesystem::path& out_dir, unsigned threads) {
    RunOutput out;
    const auto files = render(config, threads, &out.summary);
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) {
        fail(ErrorCategory::Io, "cli", "out", "cannot create '" + out_dir.string() + "': " + ec.message());
    }
    for (const auto& [name, bytes] : files) {
        write_text_file(out_dir / name, bytes);
        out.files.push_back(name);
    }
    return out;
}

Json list_catalogs() {
    auto sorted = [](std::vector<std::string> v) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
        return v;
    };
    return Json{{"experiments", sorted(experiment_kind_names())},
                {"models", sorted(model_catalog_ids())},
                {"psi", sorted(psi_catalog_ids())},
                {"sequences", sorted(sequence_catalog_ids())}};
}

}  // namespace slln
