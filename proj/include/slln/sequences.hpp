#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "slln/psi.hpp"
#include "slln/rational.hpp"
#include "slln/scaled.hpp"
#include "slln/series.hpp"

namespace slln {

/// An index -> real sequence, n >= 1.
struct Sequence {
    std::string id;
    std::function<Scaled(Index)> eval;
    /// Optional exact square, for sequences like 2^{n/2} whose square is
    /// representable without rounding.
    std::function<Scaled(Index)> square;
    /// Exact value, when the sequence is rational at integers.
    std::function<ExactRational(Index)> exact;
    /// Exact square, when rational (covers 2^{n/2}).
    std::function<ExactRational(Index)> exact_square;

    Scaled operator()(Index n) const { return eval(n); }
    double value(Index n) const { return eval(n).to_double(); }
    Scaled squared(Index n) const;

    static Sequence from_function(std::string id, std::function<double(Index)> f);
};

/// Positive, nondecreasing, unbounded norming sequence a_n.
struct NormingSequence : Sequence {
    /// Analytic doubling constant sup a(2n)/a(n), when known.
    std::optional<double> doubling_Q;
};

/// Parses "poly:p=1[,c=1]", "polylog:p=1,q=-2[,c=1]", "nlog", "exp2:half",
/// "const:c=1", "remark2-b" or "table:<path>".
Sequence make_sequence(std::string_view id);
NormingSequence make_norming(std::string_view id);
std::vector<std::string> sequence_catalog_ids();

/// Checks the norming contract on [1, N]: positive, nondecreasing, and
/// a(N) > 10 a(1) as the finite unboundedness witness. Returns a(N)/a(1).
double check_norming(const NormingSequence& a, Index N);

/// Weights w_n > 0 with prefix sums W_n; W[0] = 0.
struct WeightScheme {
    Sequence w;
    std::vector<double> W;

    Index horizon() const { return static_cast<Index>(W.size()) - 1; }
    /// W as a norming sequence (defined on [1, horizon]).
    NormingSequence as_norming() const;
};

WeightScheme make_weights(const Sequence& w, Index N);

enum class Trend { Bounded, GrowingTrend, Inconclusive };
std::string_view to_string(Trend trend);

struct ConditionOptions {
    /// GrowingTrend when the last dyadic block's max exceeds the first's by
    /// more than this factor.
    double growth_factor = 4.0;
};

/// Finite evidence for an O(.) or boundedness hypothesis.
struct ConditionReport {
    std::string id;
    Index first_index = 1;
    Index horizon = 0;
    /// ratio_trace[i] belongs to index first_index + i.
    std::vector<double> ratio_trace;
    double witness_C = 0.0;
    Index witness_index = 0;
    double first_block_max = 0.0;
    /// Max over the last dyadic block; the "sufficiently large n" proxy.
    double tail_witness_C = 0.0;
    Trend trend = Trend::Inconclusive;
};

/// Builds the report for an already computed trace.
ConditionReport make_report(std::string id, Index first_index, Index horizon, std::vector<double> ratios,
                            const ConditionOptions& options = {});

/// ratio_trace(n) = a(2n)/a(n) for n_min <= n <= N/2.
ConditionReport doubling_ratio(const NormingSequence& a, Index N, Index n_min = 1,
                               const ConditionOptions& options = {});

/// ratio_trace(n) = f(n)/g(n) on [first, N]; g must stay positive.
ConditionReport big_o_witness(const Sequence& f, const Sequence& g, Index N, Index first = 1,
                              const ConditionOptions& options = {});

/// Partial sums of sum Var(X_n)/n^2.
SeriesTrace kolmogorov_series(const Sequence& variances, Index N, const DiagnosticOptions& options = {});

struct IncrementReport {
    ConditionReport report;
    /// Max of (ES(n)-ES(m))/(n-m) over pairs with n - m >= asymptotic_window.
    double asymptotic_C = 0.0;
    Index asymptotic_window = 0;
    Index window_min = 1;
};

/// Checks E(S_n - S_m) <= C (n - m) over pairs 0 <= m < n <= N with
/// n - m >= window_min (ES(0) = 0). ratio_trace(n) is the max over m.
IncrementReport increment_growth_check(const std::function<double(Index)>& ES, Index N, Index window_min = 1,
                                       const ConditionOptions& options = {});

/// b_1 = b_2 = 1, b_n = 2^n/n - 2^{n-1}/(n-1) for n >= 3.
ExactRational remark2_b(Index n);
/// The same sequence as a catalog entry ("remark2-b").
Sequence remark2_sequence();

struct Theorem5Options {
    Index exact_horizon = 200;
    /// Floating premise traces stop here even when the conclusion runs further.
    Index premise_horizon_cap = kDenseTraceLimit;
    /// First index of the conclusion series (Remark 2's sum starts at 3).
    Index conclusion_first = 1;
    ConditionOptions condition;
    DiagnosticOptions diagnostic;
};

struct Theorem5Result {
    /// ratio_trace(n) = psi(n) * (sum_{k<=n} b_k) / a(n)^2.
    ConditionReport premise;
    /// Partial sums of sum b_n / a(n)^2.
    SeriesTrace conclusion;
    /// Exact premise ratios for n in [premise.first_index, exact_horizon],
    /// when b, a^2 and psi all have exact forms.
    std::vector<ExactRational> exact_premise;
};

Theorem5Result theorem5_check(const Sequence& b, const NormingSequence& a, const PsiSpec& psi, Index N,
                              const Theorem5Options& options = {});

/// Partial sum of a conclusion trace at N (N must be a recorded index).
double conclusion_growth_estimate(const SeriesTrace& trace, Index N);

struct Theorem5Case {
    std::string b;
    std::string a;
    std::string psi;
};

/// Twenty (b, a, psi) triples that satisfy doubling and the premise.
std::vector<Theorem5Case> bundled_theorem5_cases();

}  // namespace slln
