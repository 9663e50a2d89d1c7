#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dcop/copula.hpp"

namespace dcop {

/// M points of an L-variate sample, stored row-wise (point m, margin l).
class SampleSet {
public:
    SampleSet(std::vector<std::vector<double>> points, std::vector<std::string> margin_ids);

    [[nodiscard]] int size() const { return static_cast<int>(points_.size()); }
    [[nodiscard]] int dimension() const { return static_cast<int>(margin_ids_.size()); }
    [[nodiscard]] const std::vector<std::vector<double>>& points() const { return points_; }
    [[nodiscard]] const std::vector<std::string>& margin_ids() const { return margin_ids_; }
    [[nodiscard]] std::vector<double> margin(int axis) const;

    friend bool operator==(const SampleSet&, const SampleSet&) = default;

private:
    std::vector<std::vector<double>> points_;
    std::vector<std::string> margin_ids_;
};

/// Default labels "X1", ..., "XL".
std::vector<std::string> default_margin_ids(int dimension);

class TiePolicy {
public:
    enum class Mode { Error, Random };

    static TiePolicy error() { return TiePolicy(Mode::Error, 0); }
    static TiePolicy random(std::uint64_t seed) { return TiePolicy(Mode::Random, seed); }

    [[nodiscard]] Mode mode() const { return mode_; }
    [[nodiscard]] std::uint64_t seed() const { return seed_; }

private:
    TiePolicy(Mode mode, std::uint64_t seed) : mode_(mode), seed_(seed) {}

    Mode mode_;
    std::uint64_t seed_;
};

struct RankVector {
    /// ranks[m] in 1..M; a permutation of {1..M}.
    std::vector<int> ranks;
    /// Set when the random tie policy was in effect.
    std::optional<std::uint64_t> seed_used;
};

/// 1-based ranks, smallest value -> 1. Under the random policy tied values
/// are ordered by a stream keyed on (seed, margin); under the error policy
/// any exact tie throws TieError. NaN always throws ParseError.
RankVector ranks(std::span<const double> values, const TiePolicy& policy,
                 std::string_view margin);

/// Rank tuples (rank(x_m^1), ..., rank(x_m^L)), one per point, in point order.
std::vector<MultiIndex> rank_tuples(const SampleSet& sample, const TiePolicy& policy);

/// Sparse irreducible copula E_M(i/M) = (1/M) #{m : rank(x_m^l) <= i_l for all l}.
DiscreteCopula empirical_copula(const SampleSet& sample,
                                const TiePolicy& policy = TiePolicy::error());

/// a_{i_1...i_L} = 1 iff (x^1_(i_1), ..., x^L_(i_L)) is a sample point.
StochasticArray permutation_array_of(const SampleSet& sample,
                                     const TiePolicy& policy = TiePolicy::error());

/// A sample whose empirical copula is `copula`: for each 1-cell (i_1..i_L)
/// the point (x^1_{i_1}, ..., x^L_{i_L}). `value_sets[l]` must be strictly
/// increasing with exactly M entries. Points come out in sorted cell order.
SampleSet sample_from_copula(const DiscreteCopula& copula,
                             const std::vector<std::vector<double>>& value_sets,
                             std::vector<std::string> margin_ids = {});

/// L x L Spearman rank correlations, rho = 1 - 6 sum d^2 / (M (M^2 - 1)).
std::vector<std::vector<double>> spearman_matrix(const SampleSet& sample,
                                                 const TiePolicy& policy = TiePolicy::error());

}  // namespace dcop
