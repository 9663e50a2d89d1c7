#include "dcop/subcopula.hpp"

#include <algorithm>
#include <stdexcept>

#include "dcop/error.hpp"
#include "grid_ops.hpp"

namespace dcop {

namespace {

std::vector<int> extents_of(const std::vector<std::vector<int>>& grids, int minus) {
    std::vector<int> ext;
    ext.reserve(grids.size());
    for (const auto& g : grids) ext.push_back(static_cast<int>(g.size()) - minus);
    return ext;
}

void check_grids(int order, const std::vector<std::vector<int>>& grids) {
    if (order < 1) throw DimensionError("order M must be >= 1");
    if (grids.size() < 2) throw DimensionError("subcopula needs at least two axes");
    for (std::size_t axis = 0; axis < grids.size(); ++axis) {
        const auto& g = grids[axis];
        const std::string where = "grid " + std::to_string(axis + 1);
        if (g.empty() || g.front() != 0) throw DimensionError(where + " does not contain 0");
        if (g.back() != order) throw DimensionError(where + " does not contain M=" + std::to_string(order));
        if (std::adjacent_find(g.begin(), g.end(), std::greater_equal<>()) != g.end()) {
            throw DimensionError(where + " is not strictly increasing");
        }
    }
}

}  // namespace

DiscreteSubcopula::DiscreteSubcopula(int order, std::vector<std::vector<int>> grids, std::vector<Rational> values)
    : order_(order), grids_(std::move(grids)), values_(std::move(values)) {
    check_grids(order_, grids_);
    shape_ = Shape(extents_of(grids_, 0));
    if (values_.size() != shape_.size()) {
        throw DimensionError("subcopula needs " + std::to_string(shape_.size()) + " values, got " +
                             std::to_string(values_.size()));
    }
}

MultiIndex DiscreteSubcopula::levels_of(const MultiIndex& positions) const {
    (void)shape_.offset(positions);
    MultiIndex levels(positions.size());
    for (std::size_t axis = 0; axis < positions.size(); ++axis) levels[axis] = grids_[axis][positions[axis]];
    return levels;
}

Rational DiscreteSubcopula::value_at_position(const MultiIndex& positions) const {
    return values_[shape_.offset(positions)];
}

Rational DiscreteSubcopula::value(const MultiIndex& levels) const {
    if (levels.size() != grids_.size()) throw DimensionError("point " + format_index(levels) + " has wrong rank");
    MultiIndex pos(levels.size());
    for (std::size_t axis = 0; axis < levels.size(); ++axis) {
        const auto& g = grids_[axis];
        const auto it = std::lower_bound(g.begin(), g.end(), levels[axis]);
        if (it == g.end() || *it != levels[axis]) {
            throw DimensionError("level " + std::to_string(levels[axis]) + " is not on grid " +
                                 std::to_string(axis + 1));
        }
        pos[axis] = static_cast<int>(it - g.begin());
    }
    return values_[shape_.offset(pos)];
}

ValidationReport validate_subcopula(const DiscreteSubcopula& sub) {
    ValidationReport report;
    const int m = sub.order();
    const int dim = sub.dimension();
    const Shape& shape = sub.shape();
    const Rational zero(0);
    const Rational one(1);

    MultiIndex pos(dim, 0);
    std::size_t off = 0;
    do {
        const MultiIndex levels = sub.levels_of(pos);
        const Rational& v = sub.values()[off];
        if (v < zero || v > one) report.violations.push_back({Axiom::Range, levels, v});
        const bool grounded = std::any_of(levels.begin(), levels.end(), [](int k) { return k == 0; });
        if (grounded && !v.is_zero()) report.violations.push_back({Axiom::S1, levels, v});

        int free_axis = -1;
        int off_top = 0;
        for (int axis = 0; axis < dim; ++axis) {
            if (levels[axis] != m) {
                ++off_top;
                free_axis = axis;
            }
        }
        if (off_top <= 1) {
            const Rational expected = free_axis < 0 ? one : Rational(levels[free_axis], m);
            if (v != expected) report.violations.push_back({Axiom::S2, levels, v});
        }
        ++off;
    } while (shape.next(pos));

    // Volumes of boxes between adjacent levels; any larger box is a sum of them.
    const auto diff = detail::box_differences(sub.values(), shape);
    std::fill(pos.begin(), pos.end(), 0);
    off = 0;
    do {
        if (detail::all_positive(pos) && diff[off].is_negative()) {
            report.violations.push_back({Axiom::S3, sub.levels_of(pos), diff[off]});
        }
        ++off;
    } while (shape.next(pos));
    return report;
}

bool is_irreducible(const DiscreteSubcopula& sub) {
    const Rational m(sub.order());
    return std::all_of(sub.values().begin(), sub.values().end(),
                       [&](const Rational& v) { return (v * m).is_integer(); });
}

DiscreteSubcopula restrict_to(const DiscreteCopula& copula, std::vector<std::vector<int>> grids) {
    if (static_cast<int>(grids.size()) != copula.dimension()) {
        throw DimensionError("need one grid per copula axis");
    }
    check_grids(copula.order(), grids);
    const Shape shape(extents_of(grids, 0));
    std::vector<Rational> values;
    values.reserve(shape.size());
    MultiIndex pos(grids.size(), 0);
    MultiIndex levels(grids.size());
    do {
        for (std::size_t axis = 0; axis < grids.size(); ++axis) levels[axis] = grids[axis][pos[axis]];
        values.push_back(copula.value(levels));
    } while (shape.next(pos));
    return DiscreteSubcopula(copula.order(), std::move(grids), std::move(values));
}

// ---------------------------------------------------------------------------
// BlockDecomposition

BlockDecomposition::BlockDecomposition(std::vector<std::vector<int>> grids, std::vector<std::int64_t> counts)
    : grids_(std::move(grids)), counts_(std::move(counts)), shape_(extents_of(grids_, 1)) {
    if (counts_.size() != shape_.size()) throw DimensionError("block count table has wrong size");
}

std::int64_t BlockDecomposition::count(const MultiIndex& block) const { return counts_[shape_.offset(block)]; }

std::int64_t BlockDecomposition::total() const {
    std::int64_t t = 0;
    for (auto c : counts_) t += c;
    return t;
}

std::int64_t BlockDecomposition::slab_total(int axis, int slab) const {
    std::int64_t t = 0;
    MultiIndex block(shape_.rank(), 0);
    std::size_t off = 0;
    do {
        if (block[axis] == slab) t += counts_[off];
        ++off;
    } while (shape_.next(block));
    return t;
}

int BlockDecomposition::slab_width(int axis, int slab) const {
    return grids_.at(axis).at(slab + 1) - grids_.at(axis).at(slab);
}

bool BlockDecomposition::marginal_identity_holds() const {
    for (int axis = 0; axis < shape_.rank(); ++axis) {
        for (int slab = 0; slab < shape_.extents()[axis]; ++slab) {
            if (slab_total(axis, slab) != slab_width(axis, slab)) return false;
        }
    }
    return true;
}

BlockDecomposition block_counts(const DiscreteSubcopula& sub) {
    const Shape& shape = sub.shape();
    const auto diff = detail::box_differences(sub.values(), shape);
    const Rational m(sub.order());

    std::vector<std::int64_t> counts;
    counts.reserve(diff.size());
    MultiIndex pos(sub.dimension(), 0);
    std::size_t off = 0;
    do {
        if (detail::all_positive(pos)) {
            const Rational c = diff[off] * m;
            if (!c.is_integer() || c.is_negative()) {
                MultiIndex block = pos;
                for (auto& b : block) --b;
                throw ValidationError("block " + format_index(block) + " has count " + c.str() +
                                      "; not an irreducible subcopula");
            }
            counts.push_back(c.to_int64());
        }
        ++off;
    } while (shape.next(pos));

    BlockDecomposition blocks(sub.grids(), std::move(counts));
    if (!blocks.marginal_identity_holds()) {
        throw ValidationError("block counts do not exhaust the slabs; margins are inconsistent");
    }
    return blocks;
}

DiscreteCopula extend(const DiscreteSubcopula& sub) {
    const auto report = validate_subcopula(sub);
    if (!report.passed()) {
        const auto& v = report.violations.front();
        throw ValidationError("invalid subcopula: " + to_string(v.axiom) + " violated at " + format_index(v.location));
    }
    if (!is_irreducible(sub)) throw ValidationError("subcopula is not irreducible");

    const auto blocks = block_counts(sub);
    const int dim = sub.dimension();
    const auto& grids = sub.grids();

    // next_level[axis][slab]: smallest unused level in (K_slab, K_{slab+1}].
    std::vector<std::vector<int>> next_level(dim);
    for (int axis = 0; axis < dim; ++axis) {
        for (std::size_t s = 0; s + 1 < grids[axis].size(); ++s) next_level[axis].push_back(grids[axis][s] + 1);
    }

    std::vector<MultiIndex> cells;
    cells.reserve(static_cast<std::size_t>(sub.order()));
    const Shape& shape = blocks.shape();
    MultiIndex block(dim, 0);
    std::size_t off = 0;
    do {
        for (std::int64_t k = 0; k < blocks.counts()[off]; ++k) {
            MultiIndex cell(dim);
            for (int axis = 0; axis < dim; ++axis) {
                int& level = next_level[axis][block[axis]];
                if (level > grids[axis][block[axis] + 1]) throw std::logic_error("extension overflowed a slab");
                cell[axis] = level++;
            }
            cells.push_back(std::move(cell));
        }
        ++off;
    } while (shape.next(block));

    for (int axis = 0; axis < dim; ++axis) {
        for (std::size_t s = 0; s < next_level[axis].size(); ++s) {
            if (next_level[axis][s] != grids[axis][s + 1] + 1) throw std::logic_error("extension left a slab unfilled");
        }
    }
    return DiscreteCopula::from_tuples(sub.order(), dim, std::move(cells));
}

}  // namespace dcop
