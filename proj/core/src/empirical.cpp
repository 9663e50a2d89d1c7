#include "dcop/empirical.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>

#include "dcop/error.hpp"
#include "dcop/random.hpp"

namespace dcop {

SampleSet::SampleSet(std::vector<std::vector<double>> points, std::vector<std::string> margin_ids)
    : points_(std::move(points)), margin_ids_(std::move(margin_ids)) {
    if (points_.empty()) throw DimensionError("sample needs at least one point");
    if (margin_ids_.size() < 2) throw DimensionError("sample needs at least two margins");
    for (std::size_t m = 0; m < points_.size(); ++m) {
        if (points_[m].size() != margin_ids_.size()) {
            throw DimensionError("point " + std::to_string(m + 1) + " has " + std::to_string(points_[m].size()) +
                                 " values, expected " + std::to_string(margin_ids_.size()));
        }
    }
}

std::vector<double> SampleSet::margin(int axis) const {
    std::vector<double> col;
    col.reserve(points_.size());
    for (const auto& p : points_) col.push_back(p.at(static_cast<std::size_t>(axis)));
    return col;
}

std::vector<std::string> default_margin_ids(int dimension) {
    std::vector<std::string> ids;
    for (int l = 1; l <= dimension; ++l) ids.push_back("X" + std::to_string(l));
    return ids;
}

RankVector ranks(std::span<const double> values, const TiePolicy& policy, std::string_view margin) {
    const std::size_t n = values.size();
    if (n == 0) throw DimensionError("cannot rank an empty margin");
    for (double v : values) {
        if (std::isnan(v)) throw ParseError("NaN in margin '" + std::string(margin) + "'");
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    RankVector out;

    if (policy.mode() == TiePolicy::Mode::Random) {
        auto rng = keyed_stream(policy.seed(), margin);
        std::vector<std::uint64_t> keys(n);
        for (auto& k : keys) k = rng();
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            if (values[a] != values[b]) return values[a] < values[b];
            if (keys[a] != keys[b]) return keys[a] < keys[b];
            return a < b;
        });
        out.seed_used = policy.seed();
    } else {
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return values[a] != values[b] ? values[a] < values[b] : a < b;
        });
        for (std::size_t k = 1; k < n; ++k) {
            if (values[order[k]] == values[order[k - 1]]) {
                throw TieError("tie in margin '" + std::string(margin) + "' between members " +
                               std::to_string(order[k - 1] + 1) + " and " + std::to_string(order[k] + 1));
            }
        }
    }

    out.ranks.resize(n);
    for (std::size_t k = 0; k < n; ++k) out.ranks[order[k]] = static_cast<int>(k + 1);
    return out;
}

std::vector<MultiIndex> rank_tuples(const SampleSet& sample, const TiePolicy& policy) {
    const int m = sample.size();
    const int dim = sample.dimension();
    std::vector<MultiIndex> tuples(m, MultiIndex(dim));
    for (int axis = 0; axis < dim; ++axis) {
        const auto col = sample.margin(axis);
        const auto r = ranks(col, policy, sample.margin_ids()[axis]);
        for (int p = 0; p < m; ++p) tuples[p][axis] = r.ranks[p];
    }
    return tuples;
}

DiscreteCopula empirical_copula(const SampleSet& sample, const TiePolicy& policy) {
    return DiscreteCopula::from_tuples(sample.size(), sample.dimension(), rank_tuples(sample, policy));
}

StochasticArray permutation_array_of(const SampleSet& sample, const TiePolicy& policy) {
    return StochasticArray::from_cells(sample.size(), sample.dimension(), rank_tuples(sample, policy));
}

SampleSet sample_from_copula(const DiscreteCopula& copula, const std::vector<std::vector<double>>& value_sets,
                             std::vector<std::string> margin_ids) {
    const int m = copula.order();
    const int dim = copula.dimension();
    if (!is_irreducible(copula)) throw ValidationError("copula is not irreducible");
    if (static_cast<int>(value_sets.size()) != dim) {
        throw DimensionError("expected " + std::to_string(dim) + " value sets, got " +
                             std::to_string(value_sets.size()));
    }
    for (int axis = 0; axis < dim; ++axis) {
        const auto& vs = value_sets[axis];
        if (static_cast<int>(vs.size()) != m) {
            throw DimensionError("value set " + std::to_string(axis + 1) + " has " + std::to_string(vs.size()) +
                                 " values, expected " + std::to_string(m));
        }
        if (std::adjacent_find(vs.begin(), vs.end(), std::greater_equal<>()) != vs.end()) {
            throw ValidationError("value set " + std::to_string(axis + 1) + " is not strictly increasing");
        }
    }
    if (margin_ids.empty()) margin_ids = default_margin_ids(dim);

    const auto cells = copula.is_dense() ? permutation_tuples(copula_to_array(copula)) : copula.tuples();
    std::vector<std::vector<double>> points;
    points.reserve(cells.size());
    for (const auto& cell : cells) {
        std::vector<double> p(dim);
        for (int axis = 0; axis < dim; ++axis) p[axis] = value_sets[axis][cell[axis] - 1];
        points.push_back(std::move(p));
    }
    return SampleSet(std::move(points), std::move(margin_ids));
}

std::vector<std::vector<double>> spearman_matrix(const SampleSet& sample, const TiePolicy& policy) {
    const int m = sample.size();
    const int dim = sample.dimension();
    if (m < 2) throw ValidationError("Spearman correlation needs at least two points");

    std::vector<std::vector<int>> r(dim);
    for (int axis = 0; axis < dim; ++axis) {
        r[axis] = ranks(sample.margin(axis), policy, sample.margin_ids()[axis]).ranks;
    }
    const double denom = static_cast<double>(m) * (static_cast<double>(m) * m - 1.0);
    std::vector<std::vector<double>> rho(dim, std::vector<double>(dim, 1.0));
    for (int j = 0; j < dim; ++j) {
        for (int k = j + 1; k < dim; ++k) {
            std::int64_t sum_sq = 0;
            for (int p = 0; p < m; ++p) {
                const std::int64_t d = r[j][p] - r[k][p];
                sum_sq += d * d;
            }
            rho[j][k] = rho[k][j] = 1.0 - 6.0 * static_cast<double>(sum_sq) / denom;
        }
    }
    return rho;
}

}  // namespace dcop
