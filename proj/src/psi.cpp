#include "slln/psi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "slln/error.hpp"
#include "slln/ids.hpp"
#include "slln/tables.hpp"

namespace slln {

namespace {

constexpr std::string_view kModule = "psi_catalog";

PsiSpec make_pow(const ParsedId& parsed, std::string id) {
    const double delta = parsed.number("delta", kModule);
    if (!(delta > 0.0)) {
        fail(ErrorCategory::NumericDomain, std::string(kModule), "delta", "pow needs delta > 0");
    }
    PsiSpec psi;
    psi.id = std::move(id);
    psi.eval = [delta](double x) { return std::pow(x, delta); };
    psi.log_eval = [delta](double log_x) { return delta * log_x; };
    if (delta == std::floor(delta) && delta <= 64) {
        const auto power = static_cast<int>(delta);
        psi.exact = [power](Index n) {
            ExactRational out(1);
            for (int i = 0; i < power; ++i) {
                out = out * ExactRational(n);
            }
            return out;
        };
    }
    psi.x0 = parsed.number_or("x0", 1.0, kModule);
    psi.claimed_class = PsiClass::Cc;
    return psi;
}

PsiSpec make_logpow(const ParsedId& parsed, std::string id) {
    const double delta = parsed.number("delta", kModule);
    if (!(delta > 0.0)) {
        fail(ErrorCategory::NumericDomain, std::string(kModule), "delta", "logpow needs delta > 0");
    }
    const double power = 1.0 + delta;
    PsiSpec psi;
    psi.id = std::move(id);
    psi.eval = [power](double x) { return std::pow(std::log(x), power); };
    psi.log_eval = [power](double log_x) { return power * std::log(log_x); };
    psi.x0 = parsed.number_or("x0", 2.0, kModule);
    psi.claimed_class = PsiClass::Cc;
    return psi;
}

PsiSpec make_table(std::string_view id) {
    const std::string path(id.substr(id.find(':') + 1));
    auto rows = read_table_csv(path, kModule);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (!(rows[i].second > 0.0)) {
            fail(ErrorCategory::NumericDomain, std::string(kModule), path, "tabulated psi must be positive");
        }
        if (i > 0 && (rows[i].first <= rows[i - 1].first || rows[i].second < rows[i - 1].second)) {
            fail(ErrorCategory::NumericDomain, std::string(kModule), path,
                 "tabulated psi needs increasing x and nondecreasing values");
        }
    }
    auto table = std::make_shared<const std::vector<std::pair<double, double>>>(std::move(rows));
    PsiSpec psi;
    psi.id = std::string(id);
    // Piecewise linear inside the table, held constant beyond its last row.
    psi.eval = [table](double x) {
        const auto& t = *table;
        if (x <= t.front().first) {
            return t.front().second;
        }
        if (x >= t.back().first) {
            return t.back().second;
        }
        auto hi = std::upper_bound(t.begin(), t.end(), x, [](double v, const auto& row) { return v < row.first; });
        auto lo = hi - 1;
        const double w = (x - lo->first) / (hi->first - lo->first);
        return lo->second + w * (hi->second - lo->second);
    };
    psi.log_eval = [eval = psi.eval, last = table->back().second](double log_x) {
        return log_x > 700.0 ? std::log(last) : std::log(eval(std::exp(log_x)));
    };
    psi.x0 = table->front().first;
    psi.claimed_class = PsiClass::Unknown;
    return psi;
}

}  // namespace

std::string_view to_string(PsiClass c) {
    switch (c) {
        case PsiClass::Cc:
            return "Cc";
        case PsiClass::Cd:
            return "Cd";
        case PsiClass::Unknown:
            return "Unknown";
    }
    return "Unknown";
}

Index PsiSpec::n_start() const { return std::max<Index>(1, static_cast<Index>(std::ceil(x0))); }

PsiSpec make_psi(std::string_view id) {
    const auto family = id_family(id);
    if (family == "table") {
        return make_table(id);
    }
    if (family != "pow" && family != "logpow" && family != "log" && family != "loglog" && family != "const") {
        fail(ErrorCategory::UnknownId, std::string(kModule), std::string(id), "unknown psi id '" + std::string(id) + "'");
    }
    const ParsedId parsed = parse_id(id, {"delta", "c", "x0"}, {}, kModule);
    if (family == "pow") {
        return make_pow(parsed, std::string(id));
    }
    if (family == "logpow") {
        return make_logpow(parsed, std::string(id));
    }
    PsiSpec psi;
    psi.id = std::string(id);
    if (family == "log") {
        psi.eval = [](double x) { return std::log(x); };
        psi.log_eval = [](double log_x) { return std::log(log_x); };
        psi.x0 = parsed.number_or("x0", 2.0, kModule);
        psi.claimed_class = PsiClass::Cd;
    } else if (family == "loglog") {
        psi.eval = [](double x) { return std::log(std::log(x)); };
        psi.log_eval = [](double log_x) { return std::log(std::log(log_x)); };
        psi.x0 = parsed.number_or("x0", 16.0, kModule);
        psi.claimed_class = PsiClass::Cd;
    } else if (family == "const") {
        const double c = parsed.number_or("c", 1.0, kModule);
        if (!(c > 0.0)) {
            fail(ErrorCategory::NumericDomain, std::string(kModule), "c", "const psi needs c > 0");
        }
        psi.eval = [c](double) { return c; };
        psi.log_eval = [c](double) { return std::log(c); };
        if (c == std::floor(c)) {
            psi.exact = [c](Index) { return ExactRational(static_cast<std::int64_t>(c)); };
        }
        psi.x0 = parsed.number_or("x0", 1.0, kModule);
        psi.claimed_class = PsiClass::Unknown;
    } else {
        fail(ErrorCategory::UnknownId, std::string(kModule), std::string(id), "unknown psi id '" + std::string(id) + "'");
    }
    return psi;
}

std::vector<std::string> psi_catalog_ids() {
    return {"const:c", "log", "loglog", "logpow:delta", "pow:delta", "table:<path>"};
}

std::vector<std::string> bundled_psi_ids() {
    return {"pow:delta=0.5", "pow:delta=1", "pow:delta=2", "logpow:delta=0.5", "logpow:delta=1", "log", "loglog"};
}

SeriesTrace psi_series_partial(const PsiSpec& psi, Index N, const DiagnosticOptions& options) {
    const Index start = psi.n_start();
    if (N < start) {
        fail(ErrorCategory::Validation, std::string(kModule), "N",
             "psi_series_partial needs N >= n_start = " + std::to_string(start));
    }
    SeriesAccumulator acc(start, N);
    for (Index n = start; n <= N; ++n) {
        const double value = psi.eval(static_cast<double>(n));
        if (!(value > 0.0)) {
            fail(ErrorCategory::NumericDomain, std::string(kModule), psi.id,
                 "psi(" + std::to_string(n) + ") <= 0 for '" + psi.id + "'");
        }
        acc.add(n, 1.0 / (static_cast<double>(n) * value));
    }
    return std::move(acc).finish(options);
}

SeriesTrace geometric_tail_partial(const PsiSpec& psi, double b, Index N, const DiagnosticOptions& options) {
    if (!(b > 1.0)) {
        fail(ErrorCategory::NumericDomain, std::string(kModule), "b", "geometric_tail_partial needs b > 1");
    }
    const double log_b = std::log(b);
    Index start = 1;
    if (psi.x0 > b) {
        start = static_cast<Index>(std::ceil(std::log(psi.x0) / log_b));
        while (start > 1 && std::pow(b, static_cast<double>(start - 1)) >= psi.x0) {
            --start;
        }
        while (std::pow(b, static_cast<double>(start)) < psi.x0) {
            ++start;
        }
    }
    if (N < start) {
        fail(ErrorCategory::Validation, std::string(kModule), "N",
             "geometric_tail_partial needs N >= " + std::to_string(start));
    }
    SeriesAccumulator acc(start, N);
    for (Index n = start; n <= N; ++n) {
        const double x = std::pow(b, static_cast<double>(n));
        double term = 0.0;
        if (std::isfinite(x) && x < 1e300) {
            const double value = psi.eval(x);
            if (!(value > 0.0)) {
                fail(ErrorCategory::NumericDomain, std::string(kModule), psi.id,
                     "psi(b^" + std::to_string(n) + ") <= 0 for '" + psi.id + "'");
            }
            term = 1.0 / value;
        } else {
            // b^n past the double range: work with log psi.
            term = std::exp(-psi.log_eval(static_cast<double>(n) * log_b));
        }
        acc.add(n, term);
    }
    return std::move(acc).finish(options);
}

}  // namespace slln
