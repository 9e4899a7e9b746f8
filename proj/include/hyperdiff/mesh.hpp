#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <utility>
#include <vector>

namespace hyperdiff {

/// Node-centred uniform grid on the unit square. n_x and n_y count cells,
/// so there are (n_x + 1) x (n_y + 1) nodes including the boundary.
class GridSpec {
public:
    GridSpec(int n_x, int n_y);

    int n_x() const noexcept { return n_x_; }
    int n_y() const noexcept { return n_y_; }
    double h_x() const noexcept { return 1.0 / n_x_; }
    double h_y() const noexcept { return 1.0 / n_y_; }

    int nodes_x() const noexcept { return n_x_ + 1; }
    int nodes_y() const noexcept { return n_y_ + 1; }
    std::size_t node_count() const noexcept {
        return static_cast<std::size_t>(nodes_x()) * static_cast<std::size_t>(nodes_y());
    }

    /// Flat index, j-major (all i for j = 0, then j = 1, ...).
    std::size_t index(int i, int j) const noexcept {
        return static_cast<std::size_t>(j) * static_cast<std::size_t>(nodes_x()) +
               static_cast<std::size_t>(i);
    }

    double x(int i) const noexcept { return i * h_x(); }
    double y(int j) const noexcept { return j * h_y(); }

    bool on_boundary(int i, int j) const noexcept {
        return i == 0 || j == 0 || i == n_x_ || j == n_y_;
    }

    bool operator==(const GridSpec&) const = default;

private:
    int n_x_;
    int n_y_;
};

/// Scalar nodal field.
class Field2D {
public:
    Field2D() = default;
    explicit Field2D(const GridSpec& grid, double fill = 0.0)
        : nodes_x_(grid.nodes_x()), nodes_y_(grid.nodes_y()), data_(grid.node_count(), fill) {}

    double& operator()(int i, int j) noexcept { return data_[flat(i, j)]; }
    double operator()(int i, int j) const noexcept { return data_[flat(i, j)]; }

    std::size_t size() const noexcept { return data_.size(); }
    double* data() noexcept { return data_.data(); }
    const double* data() const noexcept { return data_.data(); }
    std::vector<double>& values() noexcept { return data_; }
    const std::vector<double>& values() const noexcept { return data_; }

    int nodes_x() const noexcept { return nodes_x_; }
    int nodes_y() const noexcept { return nodes_y_; }

    bool operator==(const Field2D&) const = default;

private:
    std::size_t flat(int i, int j) const noexcept {
        return static_cast<std::size_t>(j) * static_cast<std::size_t>(nodes_x_) +
               static_cast<std::size_t>(i);
    }

    int nodes_x_ = 0;
    int nodes_y_ = 0;
    std::vector<double> data_;
};

/// Main variable phi and gradient variables u, v at one pseudo-time level.
struct FieldState {
    FieldState() = default;
    explicit FieldState(const GridSpec& grid) : phi(grid), u(grid), v(grid) {}

    Field2D phi;
    Field2D u;
    Field2D v;
    std::int64_t step = 0;

    bool matches(const GridSpec& grid) const noexcept {
        return phi.nodes_x() == grid.nodes_x() && phi.nodes_y() == grid.nodes_y() &&
               u.size() == phi.size() && v.size() == phi.size();
    }
    bool all_finite() const noexcept;
};

enum class RoleKind : std::uint8_t {
    Interior,
    DirichletPhi,    ///< phi fixed on the domain boundary
    ImpermeableWall, ///< wall-normal gradient variable fixed to zero
    FixedRegion,     ///< phi fixed inside the domain
};

struct NodeRole {
    RoleKind kind = RoleKind::Interior;
    double value = 0.0;  ///< pinned phi for DirichletPhi / FixedRegion

    static NodeRole interior() { return {RoleKind::Interior, 0.0}; }
    static NodeRole dirichlet(double v) { return {RoleKind::DirichletPhi, v}; }
    static NodeRole wall() { return {RoleKind::ImpermeableWall, 0.0}; }
    static NodeRole fixed(double v) { return {RoleKind::FixedRegion, v}; }

    bool pins_phi() const noexcept {
        return kind == RoleKind::DirichletPhi || kind == RoleKind::FixedRegion;
    }

    bool operator==(const NodeRole&) const = default;
};

/// Extremum and bound-violation summary of a phi field.
struct DmpReport {
    double min_phi = 0.0;
    double max_phi = 0.0;
    double undershoot = 0.0;
    double overshoot = 0.0;
    double under_fraction = 0.0;
    double over_fraction = 0.0;
    bool satisfied = false;
    double lower = 0.0;
    double upper = 1.0;
    double tol = 0.0;
};

inline constexpr double kDefaultDmpTol = 1e-9;

/// phi on the node row nearest y = 0.5, ordered by x.
std::vector<std::pair<double, double>> profile_along_midline(const FieldState& state,
                                                             const GridSpec& grid);

DmpReport dmp_report(const FieldState& state, double lower, double upper,
                     double tol = kDefaultDmpTol);

/// CSV with header x,y,phi,u,v, rows j-major.
void write_field_csv(std::ostream& out, const FieldState& state, const GridSpec& grid);
/// CSV with header x,phi.
void write_profile_csv(std::ostream& out, const std::vector<std::pair<double, double>>& profile);

}  // namespace hyperdiff
