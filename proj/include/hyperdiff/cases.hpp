#pragma once

#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hyperdiff/mesh.hpp"
#include "hyperdiff/tensor.hpp"

namespace hyperdiff {

/// Boundary-side identifiers, used by ghost closures.
enum class Side { Left, Right, Bottom, Top };

/// A test problem: grid, diffusion tensor field, per-node roles and the
/// bounds the solution is expected to respect.
class CaseSpec {
public:
    /// Uniform tensor.
    CaseSpec(std::string name, GridSpec grid, DiffusionTensor tensor, std::vector<NodeRole> roles,
             std::pair<double, double> bounds);
    /// Per-node tensor field (j-major, one entry per node).
    CaseSpec(std::string name, GridSpec grid, std::vector<DiffusionTensor> tensors,
             std::vector<NodeRole> roles, std::pair<double, double> bounds);

    const std::string& name() const noexcept { return name_; }
    const GridSpec& grid() const noexcept { return grid_; }
    std::pair<double, double> bounds() const noexcept { return bounds_; }

    bool uniform_tensor() const noexcept { return tensors_.size() == 1; }
    const DiffusionTensor& tensor(int i, int j) const noexcept {
        return uniform_tensor() ? tensors_.front() : tensors_[grid_.index(i, j)];
    }
    const std::vector<DiffusionTensor>& tensors() const noexcept { return tensors_; }

    const NodeRole& role(int i, int j) const noexcept { return roles_[grid_.index(i, j)]; }
    const std::vector<NodeRole>& roles() const noexcept { return roles_; }

    /// A side counts as a wall when any node on it is an ImpermeableWall.
    bool wall_side(Side s) const noexcept { return wall_sides_[static_cast<int>(s)]; }

    /// Same case with every pinned phi value shifted by c (bounds shift too).
    CaseSpec shifted(double c) const;

private:
    void validate() const;

    std::string name_;
    GridSpec grid_;
    std::vector<DiffusionTensor> tensors_;
    std::vector<NodeRole> roles_;
    std::pair<double, double> bounds_;
    bool wall_sides_[4] = {false, false, false, false};
};

inline constexpr double kCaseAngleAB = std::numbers::pi / 4.0;
inline constexpr double kCaseAngleC = std::numbers::pi / 6.0;
/// Half-width of the fixed central square of cases B, C and D.
inline constexpr double kInnerHalfWidth = 0.1;

/// phi = 1 on the left, 0 on the right, impermeable top and bottom.
CaseSpec case_a(const GridSpec& grid, double ratio, double theta = kCaseAngleAB);
/// Outer boundary 0, central square fixed at 1.
CaseSpec case_b(const GridSpec& grid, double ratio, double theta = kCaseAngleAB);
CaseSpec case_c(const GridSpec& grid, double ratio, double theta = kCaseAngleC);
/// Cusped field from A_z = ratio ((x-0.5)^2 - (y-0.5)^2), case B boundaries.
CaseSpec case_d(const GridSpec& grid, double ratio);

/// In-plane field B = curl(A_z e_z) of the cusp potential.
std::pair<double, double> cusp_field(double x, double y, double ratio);

/// Lookup by letter A-D (case-insensitive). theta overrides the angle of A-C.
CaseSpec make_case(const std::string& name, const GridSpec& grid, double ratio,
                   std::optional<double> theta = std::nullopt);

}  // namespace hyperdiff
