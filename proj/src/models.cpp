#include "slln/models.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "slln/error.hpp"
#include "slln/ids.hpp"
#include "slln/rng.hpp"

namespace slln {

namespace {

constexpr std::string_view kModule = "models";

ModelSpec make_iid(const ParsedId& parsed, std::string id) {
    ModelSpec m;
    m.id = std::move(id);
    m.kind = ModelKind::IIDNonNegative;
    if (parsed.family == "iid-uniform") {
        m.distribution = BaseDistribution::Uniform;
        m.lo = parsed.number("lo", kModule);
        m.hi = parsed.number("hi", kModule);
        if (!(m.lo >= 0.0) || !(m.hi >= m.lo)) {
            fail(ErrorCategory::NumericDomain, std::string(kModule), "lo",
                 "iid-uniform needs 0 <= lo <= hi, got lo=" + parsed.text("lo", kModule) +
                     " hi=" + parsed.text("hi", kModule));
        }
    } else {
        m.distribution = BaseDistribution::Exponential;
        m.mean = parsed.number("mean", kModule);
        if (!(m.mean >= 0.0)) {
            fail(ErrorCategory::NumericDomain, std::string(kModule), "mean", "iid-exp needs mean >= 0");
        }
    }
    return m;
}

double base_mean(const ModelSpec& m) {
    return m.distribution == BaseDistribution::Uniform ? 0.5 * (m.lo + m.hi) : m.mean;
}

double base_variance(const ModelSpec& m) {
    if (m.distribution == BaseDistribution::Uniform) {
        const double w = m.hi - m.lo;
        return w * w / 12.0;
    }
    return m.mean * m.mean;
}

double draw_base(const ModelSpec& m, PathRng& rng) {
    return m.distribution == BaseDistribution::Uniform ? rng.uniform(m.lo, m.hi) : rng.exponential(m.mean);
}

Scaled example1_var_X(Index n) {
    if (n <= 2) {
        return Scaled(1.0);
    }
    const double x = static_cast<double>(n);
    return Scaled::from_parts(1.0 / x - 0.5 / (x - 1.0), n);
}

Scaled example1_var_S(Index n) {
    if (n <= 2) {
        return Scaled(static_cast<double>(n));
    }
    return Scaled::from_parts(1.0 / static_cast<double>(n), n);
}

/// Var of sum_{k<=n} w_k X_k with X_k = Y_k + ... + Y_{k+q-1}, Y iid with
/// variance var_y; returned for every n in [1, N].
std::vector<Scaled> moving_average_variance(const std::vector<double>& w, int q, double var_y, Index N) {
    std::vector<double> coeff(static_cast<std::size_t>(N + q) + 1, 0.0);
    std::vector<Scaled> out(static_cast<std::size_t>(N) + 1, Scaled(0.0));
    double sum_sq = 0.0;
    for (Index n = 1; n <= N; ++n) {
        const double wn = w[static_cast<std::size_t>(n)];
        for (Index i = n; i < n + q; ++i) {
            double& c = coeff[static_cast<std::size_t>(i)];
            sum_sq += 2.0 * c * wn + wn * wn;
            c += wn;
        }
        out[static_cast<std::size_t>(n)] = Scaled(var_y * sum_sq);
    }
    return out;
}

std::vector<double> weight_values(const Sequence* w, Index N) {
    std::vector<double> out(static_cast<std::size_t>(N) + 1, 0.0);
    for (Index n = 1; n <= N; ++n) {
        out[static_cast<std::size_t>(n)] = w ? w->value(n) : 1.0;
    }
    return out;
}

void finish_prefix(Path& path) {
    path.s.assign(path.x.size(), 0.0);
    for (std::size_t n = 1; n < path.x.size(); ++n) {
        path.s[n] = path.s[n - 1] + path.x[n];
    }
}

}  // namespace

std::string_view to_string(ModelKind kind) {
    switch (kind) {
        case ModelKind::IndependentPrescribedVariance:
            return "IndependentPrescribedVariance";
        case ModelKind::IIDNonNegative:
            return "IIDNonNegative";
        case ModelKind::MovingAverageNonNegative:
            return "MovingAverageNonNegative";
        case ModelKind::Example1:
            return "Example1";
        case ModelKind::Weighted:
            return "Weighted";
    }
    return "Unknown";
}

bool ModelSpec::nonnegative() const {
    switch (kind) {
        case ModelKind::IIDNonNegative:
        case ModelKind::MovingAverageNonNegative:
            return true;
        case ModelKind::Weighted:
            return base->nonnegative();
        default:
            return false;
    }
}

bool ModelSpec::independent() const {
    switch (kind) {
        case ModelKind::MovingAverageNonNegative:
            return q == 1;
        case ModelKind::Weighted:
            return base->independent();
        default:
            return true;
    }
}

ModelSpec make_model(std::string_view id) {
    const auto family = id_family(id);
    if (family == "example1" && id == "example1") {
        ModelSpec m;
        m.id = "example1";
        m.kind = ModelKind::Example1;
        return m;
    }
    if (family == "iid-uniform" || family == "iid-exp") {
        return make_iid(parse_id(id, {"lo", "hi", "mean"}, {}, kModule), std::string(id));
    }
    if (family == "indep-var") {
        const ParsedId parsed = parse_id(id, {"noise", "profile"}, {"profile"}, kModule);
        ModelSpec m;
        m.id = std::string(id);
        m.kind = ModelKind::IndependentPrescribedVariance;
        m.profile = std::make_shared<const Sequence>(make_sequence(parsed.text("profile", kModule)));
        if (parsed.has("noise")) {
            const auto& noise = parsed.text("noise", kModule);
            if (noise == "gauss") {
                m.noise = NoiseShape::Gaussian;
            } else if (noise != "rademacher") {
                fail(ErrorCategory::UnknownId, std::string(kModule), "noise", "noise must be rademacher or gauss");
            }
        }
        return m;
    }
    if (family == "ma") {
        const ParsedId parsed = parse_id(id, {"q", "base"}, {"base"}, kModule);
        ModelSpec m;
        m.id = std::string(id);
        m.kind = ModelKind::MovingAverageNonNegative;
        const auto q = parsed.integer("q", kModule);
        if (q < 1 || q > 4096) {
            fail(ErrorCategory::NumericDomain, std::string(kModule), "q", "ma needs 1 <= q <= 4096");
        }
        m.q = static_cast<int>(q);
        auto base = std::make_shared<ModelSpec>(make_model(parsed.text("base", kModule)));
        if (base->kind != ModelKind::IIDNonNegative) {
            fail(ErrorCategory::UnsupportedModel, std::string(kModule), "base",
                 "ma base must be an iid nonnegative model");
        }
        m.base = std::move(base);
        return m;
    }
    if (family == "weighted") {
        const ParsedId parsed = parse_id(id, {"w", "base"}, {"base"}, kModule);
        ModelSpec m;
        m.id = std::string(id);
        m.kind = ModelKind::Weighted;
        auto w = std::make_shared<Sequence>(make_sequence(parsed.text("w", kModule)));
        ModelSpec base = make_model(parsed.text("base", kModule));
        if (base.kind == ModelKind::Example1) {
            fail(ErrorCategory::UnsupportedModel, std::string(kModule), "base",
                 "weighted Example 1 paths are not supported (normalized coordinates)");
        }
        if (base.kind == ModelKind::Weighted) {
            // Fold nested weights into one sequence.
            auto inner = base.weights;
            auto outer = w;
            w = std::make_shared<Sequence>();
            w->id = outer->id + "*" + inner->id;
            w->eval = [inner, outer](Index n) { return (*inner)(n) * (*outer)(n); };
            base = ModelSpec(*base.base);
        }
        m.weights = std::move(w);
        m.base = std::make_shared<const ModelSpec>(std::move(base));
        return m;
    }
    fail(ErrorCategory::UnknownId, std::string(kModule), std::string(id), "unknown model id '" + std::string(id) + "'");
}

std::vector<std::string> model_catalog_ids() {
    return {"example1", "iid-exp:mean", "iid-uniform:lo,hi", "indep-var:noise,profile", "ma:q,base", "weighted:w,base"};
}

std::vector<std::string> bundled_model_ids() {
    return {"example1",
            "iid-exp:mean=1",
            "iid-uniform:lo=0,hi=2",
            "indep-var:noise=gauss,profile=poly:p=0.5",
            "indep-var:profile=const:c=1",
            "indep-var:profile=poly:p=1",
            "ma:q=4,base=iid-uniform:lo=0,hi=2",
            "weighted:w=poly:p=1,base=iid-exp:mean=1"};
}

std::optional<Scaled> MomentTable::abs_central_moment(double p, Index n) const {
    if (p != 2.0 || !var_S || n < 0 || n > horizon()) {
        return std::nullopt;
    }
    return (*var_S)[static_cast<std::size_t>(n)];
}

MomentTable moments(const ModelSpec& model, Index N) {
    if (N < 1) {
        fail(ErrorCategory::Validation, std::string(kModule), "N", "moments needs N >= 1");
    }
    const auto size = static_cast<std::size_t>(N) + 1;
    MomentTable t;
    t.ES.assign(size, 0.0);
    std::vector<Scaled> var_s(size, Scaled(0.0));
    std::vector<Scaled> var_x(size, Scaled(0.0));
    switch (model.kind) {
        case ModelKind::IIDNonNegative: {
            const double mu = base_mean(model);
            const double var = base_variance(model);
            for (Index n = 1; n <= N; ++n) {
                t.ES[static_cast<std::size_t>(n)] = mu * static_cast<double>(n);
                var_x[static_cast<std::size_t>(n)] = Scaled(var);
                var_s[static_cast<std::size_t>(n)] = Scaled(var * static_cast<double>(n));
            }
            t.var_X = std::move(var_x);
            break;
        }
        case ModelKind::IndependentPrescribedVariance: {
            Scaled acc(0.0);
            for (Index n = 1; n <= N; ++n) {
                const Scaled v = (*model.profile)(n);
                if (v.sign() < 0) {
                    fail(ErrorCategory::NumericDomain, std::string(kModule), model.profile->id,
                         "variance profile is negative at n = " + std::to_string(n));
                }
                acc += v;
                var_x[static_cast<std::size_t>(n)] = v;
                var_s[static_cast<std::size_t>(n)] = acc;
            }
            t.var_X = std::move(var_x);
            break;
        }
        case ModelKind::Example1: {
            for (Index n = 1; n <= N; ++n) {
                var_x[static_cast<std::size_t>(n)] = example1_var_X(n);
                var_s[static_cast<std::size_t>(n)] = example1_var_S(n);
            }
            t.var_X = std::move(var_x);
            break;
        }
        case ModelKind::MovingAverageNonNegative: {
            const double mu = base_mean(*model.base);
            for (Index n = 1; n <= N; ++n) {
                t.ES[static_cast<std::size_t>(n)] = mu * model.q * static_cast<double>(n);
            }
            var_s = moving_average_variance(weight_values(nullptr, N), model.q, base_variance(*model.base), N);
            break;
        }
        case ModelKind::Weighted: {
            const ModelSpec& base = *model.base;
            const auto w = weight_values(model.weights.get(), N);
            const MomentTable inner = moments(base, N);
            for (Index n = 1; n <= N; ++n) {
                const auto i = static_cast<std::size_t>(n);
                t.ES[i] = t.ES[i - 1] + w[i] * (inner.ES[i] - inner.ES[i - 1]);
            }
            if (base.kind == ModelKind::MovingAverageNonNegative) {
                var_s = moving_average_variance(w, base.q, base_variance(*base.base), N);
            } else {
                Scaled acc(0.0);
                for (Index n = 1; n <= N; ++n) {
                    const auto i = static_cast<std::size_t>(n);
                    var_x[i] = Scaled(w[i] * w[i]) * (*inner.var_X)[i];
                    acc += var_x[i];
                    var_s[i] = acc;
                }
                t.var_X = std::move(var_x);
            }
            break;
        }
    }
    t.var_S = std::move(var_s);
    return t;
}

ExactRational Example1Pmf::total_mass() const {
    ExactRational total(0);
    for (const auto& atom : atoms) {
        total += atom.mass;
    }
    return total;
}

ExactRational Example1Pmf::variance() const {
    ExactRational total(0);
    for (const auto& atom : atoms) {
        total += atom.mass * atom.magnitude_squared;
    }
    return total;
}

double Example1Pmf::mean() const {
    Scaled total(0.0);
    for (const auto& atom : atoms) {
        total += Scaled(static_cast<double>(atom.sign)) * atom.magnitude * atom.mass.to_scaled();
    }
    return total.to_double();
}

Example1Pmf example1_pmf(Index n) {
    if (n < 1) {
        fail(ErrorCategory::Validation, std::string(kModule), "n", "example1_pmf needs n >= 1");
    }
    Example1Pmf pmf;
    pmf.n = n;
    if (n <= 2) {
        const ExactRational half(1, 2);
        pmf.atoms.push_back({+1, ExactRational(1), Scaled(1.0), half});
        pmf.atoms.push_back({-1, ExactRational(1), Scaled(1.0), half});
        return pmf;
    }
    const ExactRational tail(n - 2, 4 * n * (n - 1));
    const ExactRational mag_sq = ExactRational::pow2(static_cast<unsigned>(n));
    const Scaled mag = example1_norming()(n);
    pmf.atoms.push_back({+1, mag_sq, mag, tail});
    pmf.atoms.push_back({-1, mag_sq, mag, tail});
    pmf.atoms.push_back({0, ExactRational(0), Scaled(0.0), ExactRational(1) - ExactRational(n - 2, 2 * n * (n - 1))});
    return pmf;
}

ExactRational example1_hit_probability(Index n) {
    if (n < 3) {
        return ExactRational(0);
    }
    return ExactRational(n - 2, 2 * n * (n - 1));
}

double example1_hit_probability_double(Index n) {
    if (n < 3) {
        return 0.0;
    }
    const double x = static_cast<double>(n);
    return (x - 2.0) / (2.0 * x * (x - 1.0));
}

ExactRational example1_var_S_exact(Index n) {
    ExactRational total(0);
    for (Index k = 1; k <= n; ++k) {
        total += example1_pmf(k).variance();
    }
    return total;
}

NormingSequence example1_norming() { return make_norming("exp2:half"); }

Path sample_path(const ModelSpec& model, Index N, std::uint64_t master_seed, std::uint64_t path_index) {
    if (N < 1) {
        fail(ErrorCategory::Validation, std::string(kModule), "N", "sample_path needs N >= 1");
    }
    Path path;
    path.N = N;
    path.seed = master_seed;
    path.path_index = path_index;
    path.model_id = model.id;
    path.x.assign(static_cast<std::size_t>(N) + 1, 0.0);
    PathRng rng(child_seed(master_seed, path_index));
    switch (model.kind) {
        case ModelKind::IIDNonNegative:
            for (Index n = 1; n <= N; ++n) {
                path.x[static_cast<std::size_t>(n)] = draw_base(model, rng);
            }
            break;
        case ModelKind::IndependentPrescribedVariance:
            for (Index n = 1; n <= N; ++n) {
                const double sigma = (*model.profile)(n).sqrt().to_double();
                const double noise = model.noise == NoiseShape::Gaussian ? rng.normal() : rng.rademacher();
                path.x[static_cast<std::size_t>(n)] = sigma * noise;
            }
            break;
        case ModelKind::MovingAverageNonNegative: {
            const auto q = static_cast<std::size_t>(model.q);
            std::vector<double> y(static_cast<std::size_t>(N) + q, 0.0);
            for (std::size_t i = 1; i < y.size(); ++i) {
                y[i] = draw_base(*model.base, rng);
            }
            for (std::size_t n = 1; n <= static_cast<std::size_t>(N); ++n) {
                double acc = 0.0;
                for (std::size_t j = 0; j < q; ++j) {
                    acc += y[n + j];
                }
                path.x[n] = acc;
            }
            break;
        }
        case ModelKind::Example1: {
            auto norming = std::make_shared<const Sequence>(example1_norming());
            for (Index n = 1; n <= N; ++n) {
                double& x = path.x[static_cast<std::size_t>(n)];
                const double u = rng.uniform();
                if (n <= 2) {
                    x = (u < 0.5 ? 1.0 : -1.0) / norming->value(n);
                } else {
                    const double p = 0.5 * example1_hit_probability_double(n);
                    x = u < p ? 1.0 : (u < 2.0 * p ? -1.0 : 0.0);
                }
            }
            path.normalizer = std::move(norming);
            break;
        }
        case ModelKind::Weighted: {
            const Path base = sample_path(*model.base, N, master_seed, path_index);
            Path out = weighted_path(base, make_weights(*model.weights, N));
            out.model_id = model.id;
            return out;
        }
    }
    finish_prefix(path);
    return path;
}

Path weighted_path(const Path& base, const WeightScheme& weights) {
    if (weights.horizon() < base.N) {
        fail(ErrorCategory::Validation, std::string(kModule), "weights",
             "weights cover " + std::to_string(weights.horizon()) + " indices, path has " + std::to_string(base.N));
    }
    if (base.normalizer) {
        fail(ErrorCategory::UnsupportedModel, std::string(kModule), "base", "cannot weight a normalized path");
    }
    Path out = base;
    for (Index n = 1; n <= base.N; ++n) {
        const auto i = static_cast<std::size_t>(n);
        out.x[i] = weights.w.value(n) * base.x[i];
    }
    finish_prefix(out);
    return out;
}

}  // namespace slln
