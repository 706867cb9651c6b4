#include "fracbvp/grid.hpp"

#include "fracbvp/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

namespace fracbvp {

ShiftedGrid::ShiftedGrid(double offset, std::size_t count) : offset_(offset), count_(count) {
    if (count == 0) {
        throw DomainError("ShiftedGrid: count must be at least 1");
    }
    if (!std::isfinite(offset)) {
        throw DomainError("ShiftedGrid: offset must be finite");
    }
}

double ShiftedGrid::point_of(std::size_t index) const {
    if (index >= count_) {
        throw DomainError("ShiftedGrid: index " + std::to_string(index) + " out of range");
    }
    return offset_ + static_cast<double>(index);
}

std::optional<std::size_t> ShiftedGrid::index_of(double t) const noexcept {
    const double k = std::round(t - offset_);
    if (std::abs(t - offset_ - k) > kLatticeTol || k < 0.0 ||
        k > static_cast<double>(count_ - 1)) {
        return std::nullopt;
    }
    return static_cast<std::size_t>(k);
}

ShiftedGrid bvp_grid(double nu, int b) {
    if (b < 1) {
        throw DomainError("bvp_grid: b must be at least 1");
    }
    return ShiftedGrid(nu - 2.0, static_cast<std::size_t>(b) + 3);
}

GridFunction::GridFunction(ShiftedGrid grid) : grid_(grid), values_(grid.count(), 0.0) {}

GridFunction::GridFunction(ShiftedGrid grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.count()) {
        throw DomainError("GridFunction: expected " + std::to_string(grid_.count()) +
                          " values, got " + std::to_string(values_.size()));
    }
    for (double v : values_) {
        if (!std::isfinite(v)) {
            throw DomainError("GridFunction: values must be finite");
        }
    }
}

double GridFunction::at(double t) const {
    const auto i = grid_.index_of(t);
    if (!i) {
        throw DomainError("GridFunction: point " + std::to_string(t) + " is not on the grid");
    }
    return values_[*i];
}

double GridFunction::norm() const noexcept {
    double m = 0.0;
    for (double v : values_) {
        m = std::max(m, std::abs(v));
    }
    return m;
}

double GridFunction::min() const noexcept {
    return *std::min_element(values_.begin(), values_.end());
}

double sup_distance(const GridFunction& a, const GridFunction& b) {
    if (a.size() != b.size()) {
        throw DomainError("sup_distance: grids differ in size");
    }
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        m = std::max(m, std::abs(a[i] - b[i]));
    }
    return m;
}

}  // namespace fracbvp
