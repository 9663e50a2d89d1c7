#include "dcop/multi_index.hpp"

#include <charconv>
#include <limits>

#include "dcop/error.hpp"

namespace dcop {

std::string format_index(const MultiIndex& idx) {
    std::string out;
    for (std::size_t k = 0; k < idx.size(); ++k) {
        if (k) out += ',';
        out += std::to_string(idx[k]);
    }
    return out;
}

MultiIndex parse_index(std::string_view text) {
    MultiIndex idx;
    std::size_t pos = 0;
    while (true) {
        const auto comma = text.find(',', pos);
        const auto part = text.substr(pos, comma == std::string_view::npos ? text.size() - pos : comma - pos);
        int value = 0;
        const auto* first = part.data();
        const auto* last = part.data() + part.size();
        auto [ptr, ec] = std::from_chars(first, last, value);
        if (part.empty() || ec != std::errc() || ptr != last) {
            throw ParseError("malformed index '" + std::string(text) + "'");
        }
        idx.push_back(value);
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    return idx;
}

Shape::Shape(int rank, int extent) : Shape(std::vector<int>(static_cast<std::size_t>(rank), extent)) {}

Shape::Shape(std::vector<int> extents) : extents_(std::move(extents)), strides_(extents_.size()) {
    std::size_t stride = 1;
    for (std::size_t k = extents_.size(); k-- > 0;) {
        if (extents_[k] <= 0) throw DimensionError("shape extent must be positive");
        strides_[k] = stride;
        stride *= static_cast<std::size_t>(extents_[k]);
    }
    size_ = extents_.empty() ? 0 : stride;
}

std::size_t Shape::offset(const MultiIndex& idx) const {
    if (idx.size() != extents_.size()) {
        throw DimensionError("index " + format_index(idx) + " has wrong rank");
    }
    std::size_t off = 0;
    for (std::size_t k = 0; k < idx.size(); ++k) {
        if (idx[k] < 0 || idx[k] >= extents_[k]) {
            throw DimensionError("index " + format_index(idx) + " out of range");
        }
        off += strides_[k] * static_cast<std::size_t>(idx[k]);
    }
    return off;
}

MultiIndex Shape::index(std::size_t offset) const {
    MultiIndex idx(extents_.size());
    for (std::size_t k = 0; k < extents_.size(); ++k) {
        idx[k] = static_cast<int>(offset / strides_[k]);
        offset %= strides_[k];
    }
    return idx;
}

bool Shape::next(MultiIndex& idx) const {
    for (std::size_t k = extents_.size(); k-- > 0;) {
        if (++idx[k] < extents_[k]) return true;
        idx[k] = 0;
    }
    return false;
}

std::size_t Shape::checked_size(const std::vector<int>& extents, std::uint64_t budget) {
    std::uint64_t total = 1;
    for (int e : extents) {
        if (e <= 0) throw DimensionError("shape extent must be positive");
        if (total > budget / static_cast<std::uint64_t>(e)) {
            throw BudgetError("dense grid exceeds budget of " + std::to_string(budget) + " points");
        }
        total *= static_cast<std::uint64_t>(e);
    }
    return static_cast<std::size_t>(total);
}

}  // namespace dcop
