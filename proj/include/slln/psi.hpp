#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "slln/rational.hpp"
#include "slln/series.hpp"

namespace slln {

/// Which of the two summability classes a psi function belongs to:
/// Cc when sum 1/(n psi(n)) converges, Cd when it diverges.
enum class PsiClass { Cc, Cd, Unknown };

std::string_view to_string(PsiClass c);

struct PsiSpec {
    std::string id;
    std::function<double(double)> eval;
    /// log psi(x) given log x; lets psi(b^n) be evaluated past the double range.
    std::function<double(double)> log_eval;
    /// Exact psi(n) at integers when psi has a rational closed form there.
    std::function<ExactRational(Index)> exact;
    double x0 = 1.0;
    PsiClass claimed_class = PsiClass::Unknown;

    double operator()(double x) const { return eval(x); }
    /// First integer of the summation range, ceil(x0).
    Index n_start() const;
};

/// Parses a catalog id such as "pow:delta=0.5", "logpow:delta=1", "log",
/// "loglog", "const:c=1" or "table:<path>". Throws UnknownId / ConfigParse.
PsiSpec make_psi(std::string_view id);

/// Parametric family names, sorted.
std::vector<std::string> psi_catalog_ids();

/// Instances exercised by classify-psi: the four families named in the
/// class definitions, with the deltas the lab ships.
std::vector<std::string> bundled_psi_ids();

/// Partial sums of sum_{n=n_start}^{N} 1/(n psi(n)).
SeriesTrace psi_series_partial(const PsiSpec& psi, Index N, const DiagnosticOptions& options = {});

/// Partial sums of sum_{n>=n0} 1/psi(b^n) through N, where n0 >= 1 is the first
/// index with b^n >= x0.
SeriesTrace geometric_tail_partial(const PsiSpec& psi, double b, Index N, const DiagnosticOptions& options = {});

}  // namespace slln
