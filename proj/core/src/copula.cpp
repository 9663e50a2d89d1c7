#include "dcop/copula.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "dcop/error.hpp"
#include "grid_ops.hpp"

namespace dcop {

namespace {

void check_dims(int order, int dimension) {
    if (order < 1) throw DimensionError("order M must be >= 1, got " + std::to_string(order));
    if (dimension < 2) throw DimensionError("dimension L must be >= 2, got " + std::to_string(dimension));
}

void check_cell(const MultiIndex& cell, int order, int dimension) {
    if (static_cast<int>(cell.size()) != dimension) {
        throw DimensionError("cell " + format_index(cell) + " does not have " +
                             std::to_string(dimension) + " components");
    }
    for (int i : cell) {
        if (i < 1 || i > order) throw DimensionError("cell " + format_index(cell) + " out of range 1.." +
                                                     std::to_string(order));
    }
}

// Grid over {0..M}^L holding the cell entries at their upper corners, then
// summed along every axis and scaled by 1/M.
std::vector<Rational> cumulative_grid(int order, int dimension,
                                      const std::map<MultiIndex, Rational>& entries,
                                      std::uint64_t budget) {
    const std::size_t n = Shape::checked_size(std::vector<int>(dimension, order + 1), budget);
    const Shape grid(dimension, order + 1);
    std::vector<Rational> values(n);
    for (const auto& [cell, a] : entries) values[grid.offset(cell)] = a;

    MultiIndex idx(dimension, 0);
    for (int axis = 0; axis < dimension; ++axis) {
        const std::size_t stride = grid.stride(axis);
        std::fill(idx.begin(), idx.end(), 0);
        std::size_t off = 0;
        do {
            if (idx[axis] > 0) values[off] += values[off - stride];
            ++off;
        } while (grid.next(idx));
    }
    const Rational inv_m(1, order);
    for (auto& v : values) v *= inv_m;
    return values;
}

}  // namespace

std::string to_string(Axiom axiom) {
    switch (axiom) {
        case Axiom::D1: return "D1";
        case Axiom::D2: return "D2";
        case Axiom::D3: return "D3";
        case Axiom::S1: return "S1";
        case Axiom::S2: return "S2";
        case Axiom::S3: return "S3";
        case Axiom::A1: return "A1";
        case Axiom::A2: return "A2";
        case Axiom::Range: return "range";
    }
    return "?";
}

std::size_t ValidationReport::count(Axiom axiom) const {
    return static_cast<std::size_t>(std::count_if(violations.begin(), violations.end(),
                                                  [&](const Violation& v) { return v.axiom == axiom; }));
}

// ---------------------------------------------------------------------------
// DiscreteCopula

DiscreteCopula DiscreteCopula::dense(int order, int dimension, std::vector<Rational> values,
                                     std::uint64_t budget) {
    check_dims(order, dimension);
    const std::size_t n = Shape::checked_size(std::vector<int>(dimension, order + 1), budget);
    if (values.size() != n) {
        throw DimensionError("dense copula with M=" + std::to_string(order) + ", L=" +
                             std::to_string(dimension) + " needs " + std::to_string(n) +
                             " values, got " + std::to_string(values.size()));
    }
    return DiscreteCopula(order, dimension, Dense{std::move(values)});
}

DiscreteCopula DiscreteCopula::from_function(int order, int dimension,
                                             const std::function<Rational(const MultiIndex&)>& fn,
                                             std::uint64_t budget) {
    check_dims(order, dimension);
    const std::size_t n = Shape::checked_size(std::vector<int>(dimension, order + 1), budget);
    const Shape grid(dimension, order + 1);
    std::vector<Rational> values;
    values.reserve(n);
    MultiIndex idx(dimension, 0);
    do {
        values.push_back(fn(idx));
    } while (grid.next(idx));
    return DiscreteCopula(order, dimension, Dense{std::move(values)});
}

DiscreteCopula DiscreteCopula::from_tuples(int order, int dimension, std::vector<MultiIndex> tuples) {
    check_dims(order, dimension);
    if (static_cast<int>(tuples.size()) != order) {
        throw ValidationError("permutation array of order " + std::to_string(order) + " needs " +
                              std::to_string(order) + " cells, got " + std::to_string(tuples.size()));
    }
    std::vector<std::vector<char>> used(dimension, std::vector<char>(order + 1, 0));
    for (const auto& t : tuples) {
        check_cell(t, order, dimension);
        for (int axis = 0; axis < dimension; ++axis) {
            char& flag = used[axis][t[axis]];
            if (flag) {
                throw ValidationError("level " + std::to_string(t[axis]) + " of axis " +
                                      std::to_string(axis + 1) + " used twice");
            }
            flag = 1;
        }
    }
    std::sort(tuples.begin(), tuples.end());
    return DiscreteCopula(order, dimension, Sparse{std::move(tuples)});
}

Rational DiscreteCopula::value(const MultiIndex& grid_index) const {
    const Shape grid = grid_shape();
    if (const auto* d = std::get_if<Dense>(&rep_)) return d->values[grid.offset(grid_index)];
    (void)grid.offset(grid_index);  // range check
    long hits = 0;
    for (const auto& t : std::get<Sparse>(rep_).tuples) {
        bool below = true;
        for (int axis = 0; axis < dimension_ && below; ++axis) below = t[axis] <= grid_index[axis];
        hits += below ? 1 : 0;
    }
    return Rational(hits, order_);
}

const std::vector<Rational>& DiscreteCopula::dense_values() const {
    if (const auto* d = std::get_if<Dense>(&rep_)) return d->values;
    throw std::logic_error("copula is stored sparsely");
}

const std::vector<MultiIndex>& DiscreteCopula::tuples() const {
    if (const auto* s = std::get_if<Sparse>(&rep_)) return s->tuples;
    throw std::logic_error("copula is stored densely");
}

DiscreteCopula DiscreteCopula::to_dense(std::uint64_t budget) const {
    if (is_dense()) return *this;
    std::map<MultiIndex, Rational> cells;
    for (const auto& t : tuples()) cells.emplace(t, Rational(1));
    return DiscreteCopula(order_, dimension_, Dense{cumulative_grid(order_, dimension_, cells, budget)});
}

bool operator==(const DiscreteCopula& a, const DiscreteCopula& b) {
    if (a.order_ != b.order_ || a.dimension_ != b.dimension_) return false;
    if (!a.is_dense() && !b.is_dense()) return a.tuples() == b.tuples();
    // At least one side is dense, so the grid fits the default budget or
    // was built under a larger one; densify the other with no cap.
    const auto limit = std::numeric_limits<std::uint64_t>::max();
    return a.to_dense(limit).dense_values() == b.to_dense(limit).dense_values();
}

// ---------------------------------------------------------------------------
// StochasticArray

StochasticArray::StochasticArray(int order, int dimension, std::map<MultiIndex, Rational> entries)
    : order_(order), dimension_(dimension) {
    check_dims(order, dimension);
    for (auto& [cell, a] : entries) {
        check_cell(cell, order, dimension);
        if (!a.is_zero()) entries_.emplace(cell, std::move(a));
    }
}

StochasticArray StochasticArray::from_cells(int order, int dimension, const std::vector<MultiIndex>& cells) {
    std::map<MultiIndex, Rational> entries;
    for (const auto& c : cells) entries[c] += Rational(1);
    return StochasticArray(order, dimension, std::move(entries));
}

Rational StochasticArray::entry(const MultiIndex& cell) const {
    check_cell(cell, order_, dimension_);
    const auto it = entries_.find(cell);
    return it == entries_.end() ? Rational(0) : it->second;
}

bool StochasticArray::is_zero_one() const {
    return std::all_of(entries_.begin(), entries_.end(),
                       [](const auto& kv) { return kv.second == Rational(1); });
}

// ---------------------------------------------------------------------------
// Operations

ValidationReport validate_copula(const DiscreteCopula& copula) {
    ValidationReport report;
    const int m = copula.order();
    const int dim = copula.dimension();

    if (!copula.is_dense()) {
        // from_tuples already guarantees a permutation array, hence D1-D3.
        return report;
    }

    const Shape grid = copula.grid_shape();
    const auto& values = copula.dense_values();
    const Rational zero(0);
    const Rational one(1);

    MultiIndex idx(dim, 0);
    std::size_t off = 0;
    do {
        const Rational& v = values[off];
        if (v < zero || v > one) report.violations.push_back({Axiom::Range, idx, v});

        const bool grounded = std::any_of(idx.begin(), idx.end(), [](int i) { return i == 0; });
        if (grounded && !v.is_zero()) report.violations.push_back({Axiom::D1, idx, v});

        int free_axis = -1;
        int off_top = 0;
        for (int axis = 0; axis < dim; ++axis) {
            if (idx[axis] != m) {
                ++off_top;
                free_axis = axis;
            }
        }
        if (off_top <= 1) {
            const Rational expected = free_axis < 0 ? one : Rational(idx[free_axis], m);
            if (v != expected) report.violations.push_back({Axiom::D2, idx, v});
        }
        ++off;
    } while (grid.next(idx));

    const auto diff = detail::box_differences(values, grid);
    std::fill(idx.begin(), idx.end(), 0);
    off = 0;
    do {
        if (detail::all_positive(idx) && diff[off].is_negative()) {
            report.violations.push_back({Axiom::D3, idx, diff[off]});
        }
        ++off;
    } while (grid.next(idx));
    return report;
}

ValidationReport validate_array(const StochasticArray& array) {
    ValidationReport report;
    const int m = array.order();
    const int dim = array.dimension();
    std::vector<std::vector<Rational>> line_sums(dim, std::vector<Rational>(m + 1));
    for (const auto& [cell, a] : array.entries()) {
        if (a.is_negative()) report.violations.push_back({Axiom::A1, cell, a});
        for (int axis = 0; axis < dim; ++axis) line_sums[axis][cell[axis]] += a;
    }
    const Rational one(1);
    for (int axis = 0; axis < dim; ++axis) {
        for (int level = 1; level <= m; ++level) {
            if (line_sums[axis][level] != one) {
                report.violations.push_back({Axiom::A2, {axis + 1, level}, line_sums[axis][level]});
            }
        }
    }
    return report;
}

Rational volume(const DiscreteCopula& copula, const MultiIndex& lower, const MultiIndex& upper) {
    const int dim = copula.dimension();
    const Shape grid = copula.grid_shape();
    (void)grid.offset(lower);
    (void)grid.offset(upper);
    for (int axis = 0; axis < dim; ++axis) {
        if (lower[axis] > upper[axis]) {
            throw DimensionError("box corners " + format_index(lower) + " and " + format_index(upper) +
                                 " are not ordered");
        }
    }

    if (!copula.is_dense()) {
        // Mass of a permutation array inside the box, counted directly.
        long hits = 0;
        for (const auto& t : copula.tuples()) {
            bool inside = true;
            for (int axis = 0; axis < dim && inside; ++axis) {
                inside = lower[axis] < t[axis] && t[axis] <= upper[axis];
            }
            hits += inside ? 1 : 0;
        }
        return Rational(hits, copula.order());
    }

    const auto& values = copula.dense_values();
    Rational total;
    MultiIndex corner(dim);
    for (unsigned long mask = 0; mask < (1UL << dim); ++mask) {
        int lows = 0;
        for (int axis = 0; axis < dim; ++axis) {
            const bool take_lower = (mask >> axis) & 1UL;
            corner[axis] = take_lower ? lower[axis] : upper[axis];
            lows += take_lower ? 1 : 0;
        }
        const Rational& v = values[grid.offset(corner)];
        if (lows % 2 == 0) {
            total += v;
        } else {
            total -= v;
        }
    }
    return total;
}

DiscreteCopula array_to_copula(const StochasticArray& array, std::uint64_t budget) {
    const auto report = validate_array(array);
    if (!report.passed()) {
        throw ValidationError("not a stochastic array: " + std::to_string(report.violations.size()) +
                              " violation(s), first " + to_string(report.violations.front().axiom) +
                              " at " + format_index(report.violations.front().location));
    }
    try {
        return DiscreteCopula::dense(array.order(), array.dimension(),
                                     cumulative_grid(array.order(), array.dimension(), array.entries(), budget),
                                     budget);
    } catch (const BudgetError&) {
        if (!array.is_zero_one()) throw;
        return DiscreteCopula::from_tuples(array.order(), array.dimension(), permutation_tuples(array));
    }
}

StochasticArray copula_to_array(const DiscreteCopula& copula) {
    if (!copula.is_dense()) {
        return StochasticArray::from_cells(copula.order(), copula.dimension(), copula.tuples());
    }
    const auto report = validate_copula(copula);
    if (!report.passed()) {
        throw ValidationError("not a discrete copula: " + std::to_string(report.violations.size()) +
                              " violation(s), first " + to_string(report.violations.front().axiom) +
                              " at " + format_index(report.violations.front().location));
    }
    const Shape grid = copula.grid_shape();
    const auto diff = detail::box_differences(copula.dense_values(), grid);
    const Rational m(copula.order());
    std::map<MultiIndex, Rational> entries;
    MultiIndex idx(copula.dimension(), 0);
    std::size_t off = 0;
    do {
        if (detail::all_positive(idx) && !diff[off].is_zero()) entries.emplace(idx, diff[off] * m);
        ++off;
    } while (grid.next(idx));
    return StochasticArray(copula.order(), copula.dimension(), std::move(entries));
}

bool is_irreducible(const DiscreteCopula& copula) {
    if (!copula.is_dense()) return true;
    const Rational m(copula.order());
    return std::all_of(copula.dense_values().begin(), copula.dense_values().end(),
                       [&](const Rational& v) { return (v * m).is_integer(); });
}

DiscreteCopula reference_copula(ReferenceKind kind, int order, int dimension, std::uint64_t budget) {
    check_dims(order, dimension);
    if (kind == ReferenceKind::Comonotonicity) {
        std::vector<MultiIndex> diagonal;
        for (int i = 1; i <= order; ++i) diagonal.emplace_back(dimension, i);
        return DiscreteCopula::from_tuples(order, dimension, std::move(diagonal));
    }
    return DiscreteCopula::from_function(
        order, dimension,
        [order](const MultiIndex& idx) {
            Rational p(1);
            for (int i : idx) p *= Rational(i, order);
            return p;
        },
        budget);
}

std::vector<MultiIndex> permutation_tuples(const StochasticArray& array) {
    if (!array.is_zero_one()) throw ValidationError("array entries are not all 0 or 1");
    if (!validate_array(array).passed()) throw ValidationError("0/1 array is not a permutation array");
    std::vector<MultiIndex> cells;
    cells.reserve(array.entries().size());
    for (const auto& [cell, a] : array.entries()) cells.push_back(cell);
    return cells;
}

}  // namespace dcop
