#include "slln/sequences.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <numbers>

#include "slln/error.hpp"
#include "slln/ids.hpp"
#include "slln/tables.hpp"

namespace slln {

namespace {

constexpr std::string_view kModule = "sequences";

int floor_log2(Index n) { return static_cast<int>(std::bit_width(static_cast<std::uint64_t>(n))) - 1; }

bool is_integer(double x) { return std::isfinite(x) && x == std::floor(x); }

ExactRational int_power(Index n, int p) {
    ExactRational out(1);
    for (int i = 0; i < p; ++i) {
        out = out * ExactRational(n);
    }
    return out;
}

Sequence make_poly(const ParsedId& parsed, std::string id) {
    const double p = parsed.number("p", kModule);
    const double c = parsed.number_or("c", 1.0, kModule);
    if (!(c > 0.0)) {
        fail(ErrorCategory::NumericDomain, std::string(kModule), "c", "poly needs c > 0");
    }
    Sequence s;
    s.id = std::move(id);
    s.eval = [p, c](Index n) { return Scaled(c * std::pow(static_cast<double>(n), p)); };
    s.square = [p, c](Index n) { return Scaled(c * c * std::pow(static_cast<double>(n), 2.0 * p)); };
    if (is_integer(c) && c <= 1e6) {
        const auto ci = static_cast<std::int64_t>(c);
        if (is_integer(p) && p >= 0 && p <= 64) {
            const int pi = static_cast<int>(p);
            s.exact = [ci, pi](Index n) { return ExactRational(ci) * int_power(n, pi); };
        }
        if (is_integer(2.0 * p) && p >= 0 && p <= 32) {
            const int p2 = static_cast<int>(2.0 * p);
            s.exact_square = [ci, p2](Index n) { return ExactRational(ci * ci) * int_power(n, p2); };
        }
    }
    return s;
}

Sequence make_table_sequence(std::string_view id) {
    const std::string path(id.substr(id.find(':') + 1));
    auto rows = read_table_csv(path, kModule);
    auto values = std::make_shared<std::map<Index, double>>();
    for (const auto& [x, v] : rows) {
        if (!is_integer(x) || x < 1) {
            fail(ErrorCategory::Validation, std::string(kModule), path, "sequence tables are indexed by n >= 1");
        }
        (*values)[static_cast<Index>(x)] = v;
    }
    Sequence s;
    s.id = std::string(id);
    s.eval = [values, path](Index n) {
        auto it = values->find(n);
        if (it == values->end()) {
            fail(ErrorCategory::Validation, std::string(kModule), path,
                 "table '" + path + "' has no entry for n = " + std::to_string(n));
        }
        return Scaled(it->second);
    };
    return s;
}

}  // namespace

Scaled Sequence::squared(Index n) const {
    if (square) {
        return square(n);
    }
    const Scaled v = eval(n);
    return v * v;
}

Sequence Sequence::from_function(std::string id, std::function<double(Index)> f) {
    Sequence s;
    s.id = std::move(id);
    s.eval = [f = std::move(f)](Index n) { return Scaled(f(n)); };
    return s;
}

Sequence make_sequence(std::string_view id) {
    const auto family = id_family(id);
    if (family == "table") {
        return make_table_sequence(id);
    }
    if (family == "remark2-b" && id == "remark2-b") {
        return remark2_sequence();
    }
    if (family == "exp2") {
        if (id != "exp2:half") {
            fail(ErrorCategory::UnknownId, std::string(kModule), std::string(id),
                 "only exp2:half (a_n = 2^{n/2}) is supported");
        }
        Sequence s;
        s.id = std::string(id);
        s.eval = [](Index n) { return Scaled(n % 2 == 1 ? std::numbers::sqrt2 : 1.0) * Scaled::pow2(n / 2); };
        s.square = [](Index n) { return Scaled::pow2(n); };
        s.exact_square = [](Index n) { return ExactRational::pow2(static_cast<unsigned>(n)); };
        return s;
    }
    const ParsedId parsed = parse_id(id, {"p", "q", "c"}, {}, kModule);
    if (family == "poly") {
        return make_poly(parsed, std::string(id));
    }
    Sequence s;
    s.id = std::string(id);
    if (family == "polylog") {
        const double p = parsed.number("p", kModule);
        const double q = parsed.number("q", kModule);
        const double c = parsed.number_or("c", 1.0, kModule);
        if (!(c > 0.0)) {
            fail(ErrorCategory::NumericDomain, std::string(kModule), "c", "polylog needs c > 0");
        }
        s.eval = [p, q, c](Index n) {
            const double x = static_cast<double>(n);
            return Scaled(c * std::pow(x, p) * std::pow(std::log(x + 1.0), q));
        };
    } else if (family == "nlog" && id == "nlog") {
        s.eval = [](Index n) {
            const double x = static_cast<double>(n);
            return Scaled(x * std::log(x + 1.0));
        };
    } else if (family == "const") {
        const double c = parsed.number_or("c", 1.0, kModule);
        if (!(c >= 0.0)) {
            fail(ErrorCategory::NumericDomain, std::string(kModule), "c", "const needs c >= 0");
        }
        s.eval = [c](Index) { return Scaled(c); };
        if (is_integer(c) && c <= 1e9) {
            const auto ci = static_cast<std::int64_t>(c);
            s.exact = [ci](Index) { return ExactRational(ci); };
            s.exact_square = [ci](Index) { return ExactRational(ci * ci); };
        }
    } else {
        fail(ErrorCategory::UnknownId, std::string(kModule), std::string(id),
             "unknown sequence id '" + std::string(id) + "'");
    }
    return s;
}

NormingSequence make_norming(std::string_view id) {
    NormingSequence a;
    static_cast<Sequence&>(a) = make_sequence(id);
    const auto family = id_family(id);
    if (family == "poly") {
        a.doubling_Q = std::pow(2.0, parse_id(id, {"p", "q", "c"}, {}, kModule).number("p", kModule));
    } else if (family == "const") {
        a.doubling_Q = 1.0;
    }
    return a;
}

std::vector<std::string> sequence_catalog_ids() {
    return {"const:c", "exp2:half", "nlog", "poly:p,c", "polylog:p,q,c", "remark2-b", "table:<path>"};
}

double check_norming(const NormingSequence& a, Index N) {
    if (N < 1) {
        fail(ErrorCategory::Validation, std::string(kModule), "N", "norming check needs N >= 1");
    }
    Scaled prev(0.0);
    for (Index n = 1; n <= N; ++n) {
        const Scaled v = a(n);
        if (!(v.sign() > 0) || !v.is_finite()) {
            fail(ErrorCategory::NumericDomain, std::string(kModule), a.id,
                 "norming '" + a.id + "' is not positive at n = " + std::to_string(n));
        }
        if (v < prev) {
            fail(ErrorCategory::NumericDomain, std::string(kModule), a.id,
                 "norming '" + a.id + "' decreases at n = " + std::to_string(n));
        }
        prev = v;
    }
    const double growth = (a(N) / a(1)).to_double();
    if (!(growth > 10.0)) {
        fail(ErrorCategory::Validation, std::string(kModule), a.id,
             "norming '" + a.id + "' has a(N)/a(1) = " + std::to_string(growth) +
                 " <= 10 at N = " + std::to_string(N) + " (no unboundedness witness)");
    }
    return growth;
}

WeightScheme make_weights(const Sequence& w, Index N) {
    WeightScheme scheme;
    scheme.w = w;
    scheme.W.assign(static_cast<std::size_t>(N) + 1, 0.0);
    for (Index n = 1; n <= N; ++n) {
        const double v = w.value(n);
        if (!(v > 0.0) || !std::isfinite(v)) {
            fail(ErrorCategory::NumericDomain, std::string(kModule), w.id,
                 "weight '" + w.id + "' is not positive at n = " + std::to_string(n));
        }
        scheme.W[static_cast<std::size_t>(n)] = scheme.W[static_cast<std::size_t>(n) - 1] + v;
    }
    return scheme;
}

NormingSequence WeightScheme::as_norming() const {
    NormingSequence a;
    a.id = "W[" + w.id + "]";
    auto prefix = std::make_shared<const std::vector<double>>(W);
    a.eval = [prefix](Index n) {
        if (n < 1 || n >= static_cast<Index>(prefix->size())) {
            fail(ErrorCategory::Validation, "sequences", "n", "W_n requested outside the weight horizon");
        }
        return Scaled((*prefix)[static_cast<std::size_t>(n)]);
    };
    return a;
}

std::string_view to_string(Trend trend) {
    switch (trend) {
        case Trend::Bounded:
            return "Bounded";
        case Trend::GrowingTrend:
            return "GrowingTrend";
        case Trend::Inconclusive:
            return "Inconclusive";
    }
    return "Inconclusive";
}

ConditionReport make_report(std::string id, Index first_index, Index horizon, std::vector<double> ratios,
                            const ConditionOptions& options) {
    ConditionReport r;
    r.id = std::move(id);
    r.first_index = first_index;
    r.horizon = horizon;
    r.ratio_trace = std::move(ratios);
    if (r.ratio_trace.empty()) {
        return r;
    }
    bool finite = true;
    r.witness_C = -std::numeric_limits<double>::infinity();
    int first_block = -1;
    int last_block = -1;
    double first_max = 0.0;
    double last_max = 0.0;
    for (std::size_t i = 0; i < r.ratio_trace.size(); ++i) {
        const double v = r.ratio_trace[i];
        const Index n = first_index + static_cast<Index>(i);
        if (!std::isfinite(v)) {
            finite = false;
        }
        if (v > r.witness_C) {
            r.witness_C = v;
            r.witness_index = n;
        }
        const int block = floor_log2(n);
        if (first_block < 0) {
            first_block = block;
        }
        if (block == first_block) {
            first_max = std::max(first_max, std::fabs(v));
        }
        if (block != last_block) {
            last_block = block;
            last_max = 0.0;
        }
        last_max = std::max(last_max, std::fabs(v));
    }
    r.first_block_max = first_max;
    r.tail_witness_C = last_max;
    if (!finite || first_block == last_block) {
        r.trend = Trend::Inconclusive;
    } else if (last_max > options.growth_factor * first_max) {
        r.trend = Trend::GrowingTrend;
    } else {
        r.trend = Trend::Bounded;
    }
    return r;
}

ConditionReport doubling_ratio(const NormingSequence& a, Index N, Index n_min, const ConditionOptions& options) {
    if (N < 2) {
        fail(ErrorCategory::Validation, std::string(kModule), "N", "doubling_ratio needs N >= 2");
    }
    n_min = std::max<Index>(n_min, 1);
    std::vector<double> ratios;
    for (Index n = n_min; n <= N / 2; ++n) {
        const Scaled lo = a(n);
        if (!(lo.sign() > 0)) {
            fail(ErrorCategory::NumericDomain, std::string(kModule), a.id,
                 "norming '" + a.id + "' is not positive at n = " + std::to_string(n));
        }
        ratios.push_back((a(2 * n) / lo).to_double());
    }
    return make_report("doubling:" + a.id, n_min, N, std::move(ratios), options);
}

ConditionReport big_o_witness(const Sequence& f, const Sequence& g, Index N, Index first,
                              const ConditionOptions& options) {
    first = std::max<Index>(first, 1);
    std::vector<double> ratios;
    ratios.reserve(static_cast<std::size_t>(std::max<Index>(N - first + 1, 0)));
    for (Index n = first; n <= N; ++n) {
        const Scaled denom = g(n);
        if (!(denom.sign() > 0)) {
            fail(ErrorCategory::NumericDomain, std::string(kModule), g.id,
                 "big_o_witness: g(" + std::to_string(n) + ") <= 0 for '" + g.id + "'");
        }
        ratios.push_back((f(n) / denom).to_double());
    }
    return make_report(f.id + "/" + g.id, first, N, std::move(ratios), options);
}

SeriesTrace kolmogorov_series(const Sequence& variances, Index N, const DiagnosticOptions& options) {
    SeriesAccumulator acc(1, N);
    for (Index n = 1; n <= N; ++n) {
        const Scaled v = variances(n);
        if (v.sign() < 0 || !v.is_finite()) {
            fail(ErrorCategory::NumericDomain, std::string(kModule), variances.id,
                 "negative or non-finite variance at n = " + std::to_string(n));
        }
        const double nn = static_cast<double>(n);
        acc.add(n, (v / Scaled(nn * nn)).to_double());
    }
    return std::move(acc).finish(options);
}

IncrementReport increment_growth_check(const std::function<double(Index)>& ES, Index N, Index window_min,
                                       const ConditionOptions& options) {
    if (window_min < 1) {
        fail(ErrorCategory::Validation, std::string(kModule), "window_min", "window_min must be >= 1");
    }
    std::vector<double> es(static_cast<std::size_t>(N) + 1, 0.0);
    for (Index n = 1; n <= N; ++n) {
        es[static_cast<std::size_t>(n)] = ES(n);
        if (es[static_cast<std::size_t>(n)] < es[static_cast<std::size_t>(n) - 1]) {
            fail(ErrorCategory::Validation, std::string(kModule), "ES",
                 "ES must be nondecreasing (nonnegative summands); fails at n = " + std::to_string(n));
        }
    }
    IncrementReport out;
    out.window_min = window_min;
    out.asymptotic_window = std::max<Index>(window_min, N / 10);
    out.asymptotic_C = 0.0;
    std::vector<double> ratios;
    for (Index n = window_min; n <= N; ++n) {
        double best = -std::numeric_limits<double>::infinity();
        for (Index m = 0; m <= n - window_min; ++m) {
            const double r = (es[static_cast<std::size_t>(n)] - es[static_cast<std::size_t>(m)]) /
                             static_cast<double>(n - m);
            best = std::max(best, r);
            if (n - m >= out.asymptotic_window) {
                out.asymptotic_C = std::max(out.asymptotic_C, r);
            }
        }
        ratios.push_back(best);
    }
    out.report = make_report("increment", window_min, N, std::move(ratios), options);
    return out;
}

ExactRational remark2_b(Index n) {
    if (n < 1) {
        fail(ErrorCategory::Validation, std::string(kModule), "n", "remark2_b needs n >= 1");
    }
    if (n <= 2) {
        return ExactRational(1);
    }
    const auto un = static_cast<unsigned>(n);
    return ExactRational::pow2(un) / ExactRational(n) - ExactRational::pow2(un - 1) / ExactRational(n - 1);
}

Sequence remark2_sequence() {
    Sequence s;
    s.id = "remark2-b";
    s.eval = [](Index n) {
        if (n <= 2) {
            return Scaled(1.0);
        }
        // 2^n/n - 2^{n-1}/(n-1) = 2^n (1/n - 1/(2(n-1)))
        const double x = static_cast<double>(n);
        return Scaled::from_parts(1.0 / x - 0.5 / (x - 1.0), n);
    };
    s.exact = remark2_b;
    return s;
}

Theorem5Result theorem5_check(const Sequence& b, const NormingSequence& a, const PsiSpec& psi, Index N,
                              const Theorem5Options& options) {
    if (N < 1) {
        fail(ErrorCategory::Validation, std::string(kModule), "N", "theorem5_check needs N >= 1");
    }
    const bool exact = b.exact && a.exact_square && psi.exact;
    const Index premise_end = std::min(N, options.premise_horizon_cap);
    const Index premise_first = std::min(psi.n_start(), premise_end);

    Theorem5Result result;
    std::vector<double> ratios;
    Scaled prefix(0.0);
    ExactRational exact_prefix(0);
    Scaled prev_a(0.0);
    for (Index n = 1; n <= premise_end; ++n) {
        const Scaled bn = b(n);
        if (bn.sign() < 0) {
            fail(ErrorCategory::NumericDomain, std::string(kModule), b.id,
                 "b must be nonnegative; b(" + std::to_string(n) + ") < 0");
        }
        const Scaled an = a(n);
        if (!(an.sign() > 0) || an < prev_a) {
            fail(ErrorCategory::NumericDomain, std::string(kModule), a.id,
                 "norming '" + a.id + "' is not positive nondecreasing at n = " + std::to_string(n));
        }
        prev_a = an;
        prefix += bn;
        const bool exact_here = exact && n <= options.exact_horizon;
        if (exact_here) {
            exact_prefix += b.exact(n);
        }
        if (n < premise_first) {
            continue;
        }
        if (exact_here) {
            ExactRational r = psi.exact(n) * exact_prefix / a.exact_square(n);
            ratios.push_back(r.to_double());
            result.exact_premise.push_back(std::move(r));
        } else {
            ratios.push_back((Scaled(psi.eval(static_cast<double>(n))) * prefix / a.squared(n)).to_double());
        }
    }
    result.premise = make_report("theorem5-premise:" + b.id + "|" + a.id + "|" + psi.id, premise_first, premise_end,
                                 std::move(ratios), options.condition);

    const Index first = std::clamp<Index>(options.conclusion_first, 1, N);
    SeriesAccumulator acc(first, N);
    for (Index n = first; n <= N; ++n) {
        acc.add(n, (b(n) / a.squared(n)).to_double());
    }
    result.conclusion = std::move(acc).finish(options.diagnostic);
    return result;
}

double conclusion_growth_estimate(const SeriesTrace& trace, Index N) {
    const auto value = trace.partial_sum_at(N);
    if (!value) {
        fail(ErrorCategory::Validation, std::string(kModule), "N",
             "index " + std::to_string(N) + " is not recorded in the trace");
    }
    return *value;
}

std::vector<Theorem5Case> bundled_theorem5_cases() {
    return {
        {"const:c=1", "poly:p=1", "pow:delta=0.5"},
        {"const:c=1", "poly:p=1", "pow:delta=1"},
        {"poly:p=0.5", "poly:p=1", "pow:delta=0.5"},
        {"poly:p=1", "poly:p=1.5", "pow:delta=1"},
        {"poly:p=2", "poly:p=2", "pow:delta=1"},
        {"poly:p=1", "poly:p=2", "pow:delta=2"},
        {"const:c=1", "poly:p=1,c=3", "pow:delta=1"},
        {"const:c=1", "nlog", "pow:delta=1"},
        {"poly:p=1", "nlog", "logpow:delta=1"},
        {"polylog:p=1,q=-2", "poly:p=1", "logpow:delta=0.5"},
        {"const:c=2", "poly:p=1", "pow:delta=1"},
        {"poly:p=1.5", "poly:p=2", "pow:delta=0.5"},
        {"poly:p=3", "poly:p=2.5", "pow:delta=1"},
        {"poly:p=1", "poly:p=1.5", "pow:delta=0.5"},
        {"const:c=1", "poly:p=0.75", "pow:delta=0.5"},
        {"const:c=1", "poly:p=1", "logpow:delta=1"},
        {"poly:p=2", "poly:p=2", "logpow:delta=2"},
        {"poly:p=0.5", "poly:p=1.25", "pow:delta=1"},
        {"polylog:p=0,q=1", "poly:p=1", "pow:delta=0.5"},
        {"poly:p=1,c=0.5", "poly:p=1.5,c=2", "pow:delta=1"},
    };
}

}  // namespace slln
