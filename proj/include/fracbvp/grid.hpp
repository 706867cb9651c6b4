#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace fracbvp {

/// Tolerance for deciding that a real number sits on a unit-spaced lattice.
inline constexpr double kLatticeTol = 1e-9;

/// Unit-spaced points offset, offset+1, ..., offset+count-1.
class ShiftedGrid {
public:
    ShiftedGrid(double offset, std::size_t count);

    double offset() const noexcept { return offset_; }
    std::size_t count() const noexcept { return count_; }
    double first() const noexcept { return offset_; }
    double last() const noexcept { return offset_ + static_cast<double>(count_ - 1); }

    double point_of(std::size_t index) const;

    /// Index of `t` if it lies on the grid (within kLatticeTol).
    std::optional<std::size_t> index_of(double t) const noexcept;

    bool operator==(const ShiftedGrid&) const = default;

private:
    double offset_;
    std::size_t count_;
};

/// The BVP domain [nu-2, nu+b] on the lattice N_{nu-2}: b+3 points.
ShiftedGrid bvp_grid(double nu, int b);

/// Real values on a ShiftedGrid.
class GridFunction {
public:
    explicit GridFunction(ShiftedGrid grid);
    GridFunction(ShiftedGrid grid, std::vector<double> values);

    const ShiftedGrid& grid() const noexcept { return grid_; }
    std::size_t size() const noexcept { return values_.size(); }

    double operator[](std::size_t i) const { return values_[i]; }
    double& operator[](std::size_t i) { return values_[i]; }

    /// Value at grid point t; throws DomainError when t is off the grid.
    double at(double t) const;

    std::span<const double> values() const noexcept { return values_; }
    std::span<double> values() noexcept { return values_; }

    /// Sup norm max_i |values[i]|.
    double norm() const noexcept;
    double min() const noexcept;

private:
    ShiftedGrid grid_;
    std::vector<double> values_;
};

/// Sup-norm distance between two functions on the same grid.
double sup_distance(const GridFunction& a, const GridFunction& b);

}  // namespace fracbvp
