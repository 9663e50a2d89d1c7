#include "dcop/sklar.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "dcop/error.hpp"

namespace dcop {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Position of `y` on axis grid {-inf, jump_1, ..., jump_k}: the number of
// jump points <= y.
int grid_position(const std::vector<double>& jumps, double y) {
    return static_cast<int>(std::upper_bound(jumps.begin(), jumps.end(), y) - jumps.begin());
}

}  // namespace

// ---------------------------------------------------------------------------
// FiniteCDF

FiniteCDF::FiniteCDF(std::vector<double> jump_points, std::vector<Rational> cum_probs)
    : jump_points_(std::move(jump_points)), cum_probs_(std::move(cum_probs)) {
    if (jump_points_.empty() || jump_points_.size() != cum_probs_.size()) {
        throw ValidationError("finite CDF needs matching, nonempty jump and probability lists");
    }
    for (std::size_t j = 0; j < jump_points_.size(); ++j) {
        if (!std::isfinite(jump_points_[j])) throw ValidationError("jump points must be finite");
        if (j > 0 && !(jump_points_[j - 1] < jump_points_[j])) {
            throw ValidationError("jump points must be strictly increasing");
        }
        const Rational lower = j == 0 ? Rational(0) : cum_probs_[j - 1];
        if (!(lower < cum_probs_[j])) throw ValidationError("cumulative probabilities must strictly increase");
    }
    if (cum_probs_.back() != Rational(1)) throw ValidationError("last cumulative probability must be 1");
}

Rational FiniteCDF::operator()(double y) const {
    if (std::isnan(y)) throw ValidationError("CDF evaluated at NaN");
    if (y == -kInf) return Rational(0);
    if (y == kInf) return Rational(1);
    const int pos = grid_position(jump_points_, y);
    return pos == 0 ? Rational(0) : cum_probs_[pos - 1];
}

bool FiniteCDF::range_within(int order) const {
    const Rational m(order);
    return std::all_of(cum_probs_.begin(), cum_probs_.end(), [&](const Rational& p) { return (p * m).is_integer(); });
}

// ---------------------------------------------------------------------------
// FiniteJointDistribution

FiniteJointDistribution::FiniteJointDistribution(int order, std::vector<std::vector<double>> support,
                                                 std::vector<Rational> masses)
    : order_(order) {
    if (order < 1) throw DimensionError("order M must be >= 1");
    if (support.empty() || support.size() != masses.size()) {
        throw DimensionError("joint distribution needs matching, nonempty support and mass lists");
    }
    dimension_ = static_cast<int>(support.front().size());
    if (dimension_ < 2) throw DimensionError("joint distribution needs at least two margins");

    std::map<std::vector<double>, Rational> merged;
    Rational total;
    for (std::size_t k = 0; k < support.size(); ++k) {
        if (static_cast<int>(support[k].size()) != dimension_) {
            throw DimensionError("support point " + std::to_string(k + 1) + " has wrong dimension");
        }
        for (double y : support[k]) {
            if (!std::isfinite(y)) throw ValidationError("support values must be finite");
        }
        if (!(Rational(0) < masses[k])) throw ValidationError("masses must be positive");
        total += masses[k];
        merged[support[k]] += masses[k];
    }
    if (total != Rational(1)) throw ValidationError("masses sum to " + total.str() + ", not 1");
    for (auto& [point, mass] : merged) {
        support_.push_back(point);
        masses_.push_back(std::move(mass));
    }
}

Rational FiniteJointDistribution::cdf(const std::vector<double>& y) const {
    if (static_cast<int>(y.size()) != dimension_) throw DimensionError("CDF argument has wrong dimension");
    Rational h;
    for (std::size_t k = 0; k < support_.size(); ++k) {
        bool below = true;
        for (int axis = 0; axis < dimension_ && below; ++axis) below = support_[k][axis] <= y[axis];
        if (below) h += masses_[k];
    }
    return h;
}

// ---------------------------------------------------------------------------
// Operations

FiniteJointDistribution compose(const DiscreteCopula& copula, const std::vector<FiniteCDF>& margin_cdfs) {
    const int m = copula.order();
    const int dim = copula.dimension();
    if (static_cast<int>(margin_cdfs.size()) != dim) {
        throw DimensionError("copula has " + std::to_string(dim) + " margins, got " +
                             std::to_string(margin_cdfs.size()) + " CDFs");
    }
    // Integer level M * F(y_j) of every jump, per axis.
    std::vector<std::vector<int>> levels(dim);
    for (int axis = 0; axis < dim; ++axis) {
        if (!margin_cdfs[axis].range_within(m)) {
            throw DimensionError("margin " + std::to_string(axis + 1) + " has range outside I_" + std::to_string(m));
        }
        for (const auto& p : margin_cdfs[axis].cum_probs()) {
            levels[axis].push_back(static_cast<int>((p * Rational(m)).to_int64()));
        }
    }

    std::vector<std::vector<double>> support;
    std::vector<Rational> masses;
    if (!copula.is_dense()) {
        // Each 1-cell lands on the first jump whose level reaches it.
        for (const auto& cell : copula.tuples()) {
            std::vector<double> point(dim);
            for (int axis = 0; axis < dim; ++axis) {
                const auto& lv = levels[axis];
                const auto j = std::lower_bound(lv.begin(), lv.end(), cell[axis]) - lv.begin();
                point[axis] = margin_cdfs[axis].jump_points()[j];
            }
            support.push_back(std::move(point));
            masses.emplace_back(1, m);
        }
        return FiniteJointDistribution(m, std::move(support), std::move(masses));
    }

    const auto report = validate_copula(copula);
    if (!report.passed()) throw ValidationError("compose needs a valid discrete copula");
    std::vector<int> extents;
    for (const auto& lv : levels) extents.push_back(static_cast<int>(lv.size()));
    const Shape jumps(extents);
    MultiIndex j(dim, 0);
    MultiIndex lower(dim);
    MultiIndex upper(dim);
    do {
        for (int axis = 0; axis < dim; ++axis) {
            lower[axis] = j[axis] == 0 ? 0 : levels[axis][j[axis] - 1];
            upper[axis] = levels[axis][j[axis]];
        }
        Rational mass = volume(copula, lower, upper);
        if (mass.is_zero()) continue;
        std::vector<double> point(dim);
        for (int axis = 0; axis < dim; ++axis) point[axis] = margin_cdfs[axis].jump_points()[j[axis]];
        support.push_back(std::move(point));
        masses.push_back(std::move(mass));
    } while (jumps.next(j));
    return FiniteJointDistribution(m, std::move(support), std::move(masses));
}

std::vector<FiniteCDF> margins(const FiniteJointDistribution& joint) {
    std::vector<FiniteCDF> out;
    for (int axis = 0; axis < joint.dimension(); ++axis) {
        std::map<double, Rational> mass_at;
        for (std::size_t k = 0; k < joint.support().size(); ++k) mass_at[joint.support()[k][axis]] += joint.masses()[k];
        std::vector<double> jumps;
        std::vector<Rational> cum;
        Rational running;
        for (const auto& [y, p] : mass_at) {
            running += p;
            jumps.push_back(y);
            cum.push_back(running);
        }
        out.emplace_back(std::move(jumps), std::move(cum));
    }
    return out;
}

DiscreteSubcopula subcopula_of(const FiniteJointDistribution& joint) {
    const int m = joint.order();
    const int dim = joint.dimension();
    const Rational mr(m);
    for (const auto& p : joint.masses()) {
        if (!(p * mr).is_integer()) throw ValidationError("joint CDF has range outside I_" + std::to_string(m));
    }
    const auto cdfs = margins(joint);

    std::vector<std::vector<int>> grids(dim);
    std::vector<int> extents;
    for (int axis = 0; axis < dim; ++axis) {
        grids[axis].push_back(0);
        for (const auto& p : cdfs[axis].cum_probs()) grids[axis].push_back(static_cast<int>((p * mr).to_int64()));
        extents.push_back(static_cast<int>(grids[axis].size()));
    }

    // Masses at grid positions, then H at every grid point by prefix sums.
    // Position 0 on each axis stands for -inf (F = 0).
    const Shape shape(extents);
    std::vector<Rational> values(shape.size());
    for (std::size_t k = 0; k < joint.support().size(); ++k) {
        MultiIndex pos(dim);
        for (int axis = 0; axis < dim; ++axis) pos[axis] = grid_position(cdfs[axis].jump_points(), joint.support()[k][axis]);
        values[shape.offset(pos)] += joint.masses()[k];
    }
    for (int axis = 0; axis < dim; ++axis) {
        const std::size_t stride = shape.stride(axis);
        MultiIndex idx(dim, 0);
        std::size_t off = 0;
        do {
            if (idx[axis] > 0) values[off] += values[off - stride];
            ++off;
        } while (shape.next(idx));
    }
    return DiscreteSubcopula(m, std::move(grids), std::move(values));
}

std::pair<DiscreteCopula, std::vector<FiniteCDF>> decompose(const FiniteJointDistribution& joint) {
    return {extend(subcopula_of(joint)), margins(joint)};
}

FiniteJointDistribution uniform_joint(const std::vector<std::vector<double>>& points) {
    const int m = static_cast<int>(points.size());
    if (m == 0) throw DimensionError("uniform joint needs at least one point");
    return FiniteJointDistribution(m, points, std::vector<Rational>(points.size(), Rational(1, m)));
}

}  // namespace dcop
