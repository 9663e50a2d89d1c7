#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "dcop/multi_index.hpp"
#include "dcop/rational.hpp"

namespace dcop {

/// Largest number of grid points (M+1)^L a dense representation may hold.
inline constexpr std::uint64_t kDefaultDenseBudget = 10'000'000;

enum class Axiom { D1, D2, D3, S1, S2, S3, A1, A2, Range };

std::string to_string(Axiom axiom);

struct Violation {
    Axiom axiom;
    /// Grid point or cell. For A2 line sums this is (axis, level), both 1-based.
    MultiIndex location;
    Rational value;
};

struct ValidationReport {
    std::vector<Violation> violations;

    [[nodiscard]] bool passed() const { return violations.empty(); }
    [[nodiscard]] std::size_t count(Axiom axiom) const;
};

/// A discrete copula on the grid I_M^L = {0, 1/M, ..., 1}^L.
///
/// Grid arguments are integer multi-indices (i_1, ..., i_L) with 0 <= i <= M
/// standing for (i_1/M, ..., i_L/M). Two representations are supported:
///
///  - dense: all (M+1)^L values, bounded by a size budget;
///  - sparse: the M cells of a permutation array, valid only for irreducible
///    copulas. Values are counted on demand in O(M L).
///
/// Instances are immutable.
class DiscreteCopula {
public:
    /// `values` in row-major order over {0..M}^L. Axioms are not checked
    /// here (see validate_copula); shape is.
    static DiscreteCopula dense(int order, int dimension, std::vector<Rational> values,
                                std::uint64_t budget = kDefaultDenseBudget);

    static DiscreteCopula from_function(int order, int dimension,
                                        const std::function<Rational(const MultiIndex&)>& fn,
                                        std::uint64_t budget = kDefaultDenseBudget);

    /// `tuples` must use every level of every axis exactly once, otherwise
    /// ValidationError. Tuples are stored sorted.
    static DiscreteCopula from_tuples(int order, int dimension, std::vector<MultiIndex> tuples);

    [[nodiscard]] int order() const { return order_; }
    [[nodiscard]] int dimension() const { return dimension_; }
    [[nodiscard]] bool is_dense() const { return std::holds_alternative<Dense>(rep_); }
    [[nodiscard]] Shape grid_shape() const { return Shape(dimension_, order_ + 1); }

    /// D(i_1/M, ..., i_L/M). Throws DimensionError for an out-of-range index.
    [[nodiscard]] Rational value(const MultiIndex& grid_index) const;

    /// Throws std::logic_error if the copula is sparse.
    [[nodiscard]] const std::vector<Rational>& dense_values() const;
    /// Throws std::logic_error if the copula is dense.
    [[nodiscard]] const std::vector<MultiIndex>& tuples() const;

    [[nodiscard]] DiscreteCopula to_dense(std::uint64_t budget = kDefaultDenseBudget) const;

    /// Same (M, L) and same value at every grid point.
    friend bool operator==(const DiscreteCopula& a, const DiscreteCopula& b);

private:
    struct Dense {
        std::vector<Rational> values;
    };
    struct Sparse {
        std::vector<MultiIndex> tuples;
    };

    DiscreteCopula(int order, int dimension, std::variant<Dense, Sparse> rep)
        : order_(order), dimension_(dimension), rep_(std::move(rep)) {}

    int order_ = 0;
    int dimension_ = 0;
    std::variant<Dense, Sparse> rep_;
};

/// L-dimensional array of order M, cells indexed over {1..M}^L. Zero cells
/// are not stored. The constructor checks shape only; A1/A2 are checked by
/// validate_array so that invalid arrays remain representable.
class StochasticArray {
public:
    StochasticArray(int order, int dimension, std::map<MultiIndex, Rational> entries);

    /// 0/1 array with a 1 at each of `cells`.
    static StochasticArray from_cells(int order, int dimension, const std::vector<MultiIndex>& cells);

    [[nodiscard]] int order() const { return order_; }
    [[nodiscard]] int dimension() const { return dimension_; }
    [[nodiscard]] const std::map<MultiIndex, Rational>& entries() const { return entries_; }
    [[nodiscard]] Rational entry(const MultiIndex& cell) const;

    /// Every stored entry equals 1 (absent cells are 0).
    [[nodiscard]] bool is_zero_one() const;

    friend bool operator==(const StochasticArray&, const StochasticArray&) = default;

private:
    int order_ = 0;
    int dimension_ = 0;
    std::map<MultiIndex, Rational> entries_;
};

/// Checks D1, D2 and D3 on every grid point / elementary cell and reports
/// every violation; values outside [0, 1] are reported as Axiom::Range.
ValidationReport validate_copula(const DiscreteCopula& copula);

/// Checks A1 on every stored entry and A2 on every axis-parallel slice.
ValidationReport validate_array(const StochasticArray& array);

/// Inclusion-exclusion box mass over the 2^L corners of [lower, upper].
/// Requires lower <= upper componentwise, both within {0..M}^L.
Rational volume(const DiscreteCopula& copula, const MultiIndex& lower, const MultiIndex& upper);

/// D(i/M) = (1/M) * sum of entries over cells <= i. Rejects invalid arrays
/// with ValidationError. Returns the dense form when it fits in `budget`;
/// otherwise a permutation array yields the sparse form and anything else
/// throws BudgetError.
DiscreteCopula array_to_copula(const StochasticArray& array,
                               std::uint64_t budget = kDefaultDenseBudget);

/// a = M * (elementary cell volume). Rejects invalid copulas.
StochasticArray copula_to_array(const DiscreteCopula& copula);

/// Ran(D) = I_M, i.e. M * D is integer-valued everywhere.
bool is_irreducible(const DiscreteCopula& copula);

enum class ReferenceKind { Product, Comonotonicity };

/// Product copula (dense) or comonotonicity copula (sparse, the identity
/// permutation array).
DiscreteCopula reference_copula(ReferenceKind kind, int order, int dimension,
                                std::uint64_t budget = kDefaultDenseBudget);

/// Cells holding a 1, sorted. Throws ValidationError unless the array is a
/// permutation array.
std::vector<MultiIndex> permutation_tuples(const StochasticArray& array);

}  // namespace dcop
