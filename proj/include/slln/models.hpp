#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "slln/rational.hpp"
#include "slln/scaled.hpp"
#include "slln/sequences.hpp"

namespace slln {

enum class ModelKind {
    IndependentPrescribedVariance,
    IIDNonNegative,
    MovingAverageNonNegative,
    Example1,
    Weighted,
};

std::string_view to_string(ModelKind kind);

enum class BaseDistribution { Uniform, Exponential };
enum class NoiseShape { Rademacher, Gaussian };

/// Generator description. Only the fields of the active kind are meaningful.
struct ModelSpec {
    std::string id;
    ModelKind kind = ModelKind::IIDNonNegative;

    // IIDNonNegative (also the base of a moving average)
    BaseDistribution distribution = BaseDistribution::Uniform;
    double lo = 0.0;
    double hi = 2.0;
    double mean = 1.0;  // exponential mean

    // IndependentPrescribedVariance: X_n = sqrt(profile(n)) * noise
    std::shared_ptr<const Sequence> profile;
    NoiseShape noise = NoiseShape::Rademacher;

    // MovingAverageNonNegative: X_n = Y_n + ... + Y_{n+q-1}
    int q = 1;

    // MovingAverageNonNegative and Weighted
    std::shared_ptr<const ModelSpec> base;
    std::shared_ptr<const Sequence> weights;

    bool nonnegative() const;
    bool independent() const;
};

/// Parses "example1", "iid-uniform:lo=0,hi=2", "iid-exp:mean=1",
/// "indep-var:profile=<seq-id>" (optionally "indep-var:noise=gauss,profile=..."),
/// "ma:q=4,base=<iid model>" and "weighted:w=<seq-id>,base=<model>".
ModelSpec make_model(std::string_view id);
std::vector<std::string> model_catalog_ids();
/// Concrete instances of every family, used by the ensemble checks.
std::vector<std::string> bundled_model_ids();

/// One realized trajectory, stored 1-based: x[0] = s[0] = 0 and
/// s[n] = s[n-1] + x[n].
struct Path {
    Index N = 0;
    std::vector<double> x;
    std::vector<double> s;
    std::uint64_t seed = 0;
    std::uint64_t path_index = 0;
    std::string model_id;
    /// Set when x[n] holds X_n / c_n rather than X_n (Example 1 stores
    /// X_n / 2^{n/2} so nothing overflows).
    std::shared_ptr<const Sequence> normalizer;
};

/// Closed-form moments. Vectors are 1-based like Path.
struct MomentTable {
    std::vector<double> ES;
    std::optional<std::vector<Scaled>> var_S;
    /// Per-term variances, for independent models.
    std::optional<std::vector<Scaled>> var_X;

    Index horizon() const { return static_cast<Index>(ES.size()) - 1; }
    /// E|S_n - ES_n|^p where known in closed form (p = 2 only).
    std::optional<Scaled> abs_central_moment(double p, Index n) const;
};

MomentTable moments(const ModelSpec& model, Index N);

struct PmfAtom {
    int sign = 0;
    ExactRational magnitude_squared;
    Scaled magnitude;
    ExactRational mass;
};

struct Example1Pmf {
    Index n = 0;
    std::vector<PmfAtom> atoms;

    ExactRational total_mass() const;
    ExactRational variance() const;
    /// Sum of sign * magnitude * mass; zero by symmetry.
    double mean() const;
};

/// n in {1,2}: +-1 w.p. 1/2. n >= 3: +-2^{n/2} w.p. (n-2)/(4n(n-1)) each,
/// 0 with the remaining mass.
Example1Pmf example1_pmf(Index n);
/// P(|X_n| = a_n) = (n-2)/(2n(n-1)) for n >= 3, 0 before.
ExactRational example1_hit_probability(Index n);
double example1_hit_probability_double(Index n);
/// Var(S_n) for Example 1, exactly.
ExactRational example1_var_S_exact(Index n);
/// a_n = 2^{n/2}, the norming Example 1 is built around.
NormingSequence example1_norming();

Path sample_path(const ModelSpec& model, Index N, std::uint64_t master_seed, std::uint64_t path_index);

/// Path of T_n = sum w_k X_k.
Path weighted_path(const Path& base, const WeightScheme& weights);

}  // namespace slln
