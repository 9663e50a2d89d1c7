#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace dcop {

/// Tuple (i_1, ..., i_L) of grid or cell indices.
using MultiIndex = std::vector<int>;

/// "i1,...,iL"
std::string format_index(const MultiIndex& idx);
/// Inverse of format_index; throws ParseError.
MultiIndex parse_index(std::string_view text);

/// Row-major addressing of a box {0..extent_1-1} x ... x {0..extent_L-1}.
///
/// The grid of a copula on I_M^L is Shape(L, M + 1); its cell array is
/// addressed with Shape(L, M) after shifting indices down by one.
class Shape {
public:
    Shape() = default;
    Shape(int rank, int extent);
    explicit Shape(std::vector<int> extents);

    [[nodiscard]] int rank() const { return static_cast<int>(extents_.size()); }
    [[nodiscard]] const std::vector<int>& extents() const { return extents_; }
    [[nodiscard]] std::size_t size() const { return size_; }

    [[nodiscard]] std::size_t offset(const MultiIndex& idx) const;
    [[nodiscard]] MultiIndex index(std::size_t offset) const;
    /// Stride of axis `axis` in the flat layout.
    [[nodiscard]] std::size_t stride(int axis) const { return strides_[axis]; }

    /// Advances idx in row-major order; returns false after the last index.
    bool next(MultiIndex& idx) const;

    /// Product of extents, or throws BudgetError if it exceeds `budget`.
    static std::size_t checked_size(const std::vector<int>& extents, std::uint64_t budget);

    friend bool operator==(const Shape&, const Shape&) = default;

private:
    std::vector<int> extents_;
    std::vector<std::size_t> strides_;
    std::size_t size_ = 0;
};

}  // namespace dcop
