#pragma once

#include <cstdint>
#include <vector>

#include "dcop/copula.hpp"

namespace dcop {

/// A discrete subcopula on J^(1) x ... x J^(L) with J^(l) a subset of I_M.
///
/// Grids are stored as integer levels K^(l) = M * J^(l), strictly increasing,
/// always containing 0 and M. Values are row-major over the product of grid
/// positions; value() takes grid levels, not positions.
class DiscreteSubcopula {
public:
    DiscreteSubcopula(int order, std::vector<std::vector<int>> grids, std::vector<Rational> values);

    [[nodiscard]] int order() const { return order_; }
    [[nodiscard]] int dimension() const { return static_cast<int>(grids_.size()); }
    [[nodiscard]] const std::vector<std::vector<int>>& grids() const { return grids_; }
    [[nodiscard]] const std::vector<Rational>& values() const { return values_; }
    /// Shape over grid positions, extents |K^(l)|.
    [[nodiscard]] const Shape& shape() const { return shape_; }

    /// D*(k_1/M, ..., k_L/M); each k_l must be a level of grid l.
    [[nodiscard]] Rational value(const MultiIndex& levels) const;
    [[nodiscard]] Rational value_at_position(const MultiIndex& positions) const;
    /// Grid levels of the point at `positions`.
    [[nodiscard]] MultiIndex levels_of(const MultiIndex& positions) const;

    friend bool operator==(const DiscreteSubcopula&, const DiscreteSubcopula&) = default;

private:
    int order_ = 0;
    std::vector<std::vector<int>> grids_;
    std::vector<Rational> values_;
    Shape shape_;
};

/// Checks S1 and S2 at every applicable point and S3 on every box spanned by
/// adjacent grid levels. Values outside [0, 1] are reported as Axiom::Range.
ValidationReport validate_subcopula(const DiscreteSubcopula& sub);

/// Values all lie in I_M.
bool is_irreducible(const DiscreteSubcopula& sub);

/// D restricted to the product of `grids` (levels, each containing 0 and M).
DiscreteSubcopula restrict_to(const DiscreteCopula& copula, std::vector<std::vector<int>> grids);

/// Number of 1-cells a permutation array must place in each block
/// (K_{s_1}, K_{s_1+1}] x ... x (K_{s_L}, K_{s_L+1}].
class BlockDecomposition {
public:
    BlockDecomposition(std::vector<std::vector<int>> grids, std::vector<std::int64_t> counts);

    /// Blocks per axis, r_l + 1.
    [[nodiscard]] const Shape& shape() const { return shape_; }
    [[nodiscard]] const std::vector<std::vector<int>>& grids() const { return grids_; }
    [[nodiscard]] const std::vector<std::int64_t>& counts() const { return counts_; }
    [[nodiscard]] std::int64_t count(const MultiIndex& block) const;
    [[nodiscard]] std::int64_t total() const;

    /// Sum of counts over all blocks in slab `slab` of axis `axis`.
    [[nodiscard]] std::int64_t slab_total(int axis, int slab) const;
    /// a_{s+1} - a_s for the same slab.
    [[nodiscard]] int slab_width(int axis, int slab) const;
    /// slab_total == slab_width for every axis and slab.
    [[nodiscard]] bool marginal_identity_holds() const;

private:
    std::vector<std::vector<int>> grids_;
    std::vector<std::int64_t> counts_;
    Shape shape_;
};

/// M times each block volume. Throws ValidationError if a count is negative
/// or non-integral, or if the marginal identity fails.
BlockDecomposition block_counts(const DiscreteSubcopula& sub);

/// Canonical irreducible extension to I_M^L (sparse).
///
/// Blocks are visited in lexicographic order; a block with count c takes the
/// next c unused levels, in increasing order, from each of its L slabs, and
/// the k-th levels taken are joined into one 1-cell. Within a block the
/// placement is therefore comonotone. The restriction of the result to the
/// subcopula grids equals `sub`; elsewhere it is one admissible choice.
///
/// Throws ValidationError for an invalid or non-irreducible subcopula.
DiscreteCopula extend(const DiscreteSubcopula& sub);

}  // namespace dcop
