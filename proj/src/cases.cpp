#include "hyperdiff/cases.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>

#include "hyperdiff/errors.hpp"

namespace hyperdiff {

namespace {

void mark_wall_sides(const GridSpec& g, const std::vector<NodeRole>& roles, bool out[4]) {
    auto is_wall = [&](int i, int j) {
        return roles[g.index(i, j)].kind == RoleKind::ImpermeableWall;
    };
    for (int j = 0; j <= g.n_y(); ++j) {
        if (is_wall(0, j)) out[static_cast<int>(Side::Left)] = true;
        if (is_wall(g.n_x(), j)) out[static_cast<int>(Side::Right)] = true;
    }
    for (int i = 0; i <= g.n_x(); ++i) {
        if (is_wall(i, 0)) out[static_cast<int>(Side::Bottom)] = true;
        if (is_wall(i, g.n_y())) out[static_cast<int>(Side::Top)] = true;
    }
}

}  // namespace

CaseSpec::CaseSpec(std::string name, GridSpec grid, DiffusionTensor tensor,
                   std::vector<NodeRole> roles, std::pair<double, double> bounds)
    : name_(std::move(name)), grid_(grid), tensors_{tensor}, roles_(std::move(roles)),
      bounds_(bounds) {
    validate();
    mark_wall_sides(grid_, roles_, wall_sides_);
}

CaseSpec::CaseSpec(std::string name, GridSpec grid, std::vector<DiffusionTensor> tensors,
                   std::vector<NodeRole> roles, std::pair<double, double> bounds)
    : name_(std::move(name)), grid_(grid), tensors_(std::move(tensors)), roles_(std::move(roles)),
      bounds_(bounds) {
    if (tensors_.size() != grid_.node_count()) {
        throw InvalidArgument("CaseSpec: per-node tensor field has wrong size");
    }
    validate();
    mark_wall_sides(grid_, roles_, wall_sides_);
}

void CaseSpec::validate() const {
    if (roles_.size() != grid_.node_count()) {
        throw InvalidArgument("CaseSpec: role map has wrong size");
    }
    if (!(bounds_.first < bounds_.second)) {
        throw InvalidArgument("CaseSpec: bounds must satisfy lower < upper");
    }
    for (int j = 0; j <= grid_.n_y(); ++j) {
        for (int i = 0; i <= grid_.n_x(); ++i) {
            const NodeRole& r = role(i, j);
            if (grid_.on_boundary(i, j) && r.kind == RoleKind::Interior) {
                throw InvalidArgument("CaseSpec '" + name_ + "': boundary node left Interior");
            }
            if (!grid_.on_boundary(i, j) && r.kind == RoleKind::ImpermeableWall) {
                throw InvalidArgument("CaseSpec '" + name_ + "': wall role on an interior node");
            }
            if (r.pins_phi() && (r.value < bounds_.first || r.value > bounds_.second ||
                                 !std::isfinite(r.value))) {
                throw InvalidArgument("CaseSpec '" + name_ + "': pinned value outside bounds");
            }
        }
    }
    // Tensors are valid by construction of DiffusionTensor.
}

CaseSpec CaseSpec::shifted(double c) const {
    std::vector<NodeRole> roles = roles_;
    for (auto& r : roles) {
        if (r.pins_phi()) r.value += c;
    }
    std::pair<double, double> b{bounds_.first + c, bounds_.second + c};
    if (uniform_tensor()) {
        return CaseSpec(name_, grid_, tensors_.front(), std::move(roles), b);
    }
    return CaseSpec(name_, grid_, tensors_, std::move(roles), b);
}

namespace {

std::vector<NodeRole> square_roles(const GridSpec& grid) {
    std::vector<NodeRole> roles(grid.node_count(), NodeRole::interior());
    int inner = 0;
    for (int j = 0; j <= grid.n_y(); ++j) {
        for (int i = 0; i <= grid.n_x(); ++i) {
            auto& r = roles[grid.index(i, j)];
            if (grid.on_boundary(i, j)) {
                r = NodeRole::dirichlet(0.0);
                continue;
            }
            // distance in cells keeps the node count exact on round grids
            const double dx = std::abs(i - 0.5 * grid.n_x()) * grid.h_x();
            const double dy = std::abs(j - 0.5 * grid.n_y()) * grid.h_y();
            if (std::max(dx, dy) <= kInnerHalfWidth + 1e-9) {
                r = NodeRole::fixed(1.0);
                ++inner;
            }
        }
    }
    if (inner == 0) {
        throw InvalidArgument("grid too coarse: the fixed central square contains no node");
    }
    return roles;
}

}  // namespace

CaseSpec case_a(const GridSpec& grid, double ratio, double theta) {
    std::vector<NodeRole> roles(grid.node_count(), NodeRole::interior());
    for (int j = 0; j <= grid.n_y(); ++j) {
        for (int i = 0; i <= grid.n_x(); ++i) {
            auto& r = roles[grid.index(i, j)];
            if (i == 0) {
                r = NodeRole::dirichlet(1.0);
            } else if (i == grid.n_x()) {
                r = NodeRole::dirichlet(0.0);
            } else if (j == 0 || j == grid.n_y()) {
                r = NodeRole::wall();
            }
        }
    }
    CaseSpec c("A", grid, tensor_from_angle(theta, ratio), std::move(roles), {0.0, 1.0});
    return c;
}

CaseSpec case_b(const GridSpec& grid, double ratio, double theta) {
    return CaseSpec("B", grid, tensor_from_angle(theta, ratio), square_roles(grid), {0.0, 1.0});
}

CaseSpec case_c(const GridSpec& grid, double ratio, double theta) {
    return CaseSpec("C", grid, tensor_from_angle(theta, ratio), square_roles(grid), {0.0, 1.0});
}

std::pair<double, double> cusp_field(double x, double y, double ratio) {
    // A_z = ratio ((x-1/2)^2 - (y-1/2)^2); B = (dA/dy, -dA/dx)
    return {-2.0 * ratio * (y - 0.5), -2.0 * ratio * (x - 0.5)};
}

CaseSpec case_d(const GridSpec& grid, double ratio) {
    std::vector<DiffusionTensor> tensors;
    tensors.reserve(grid.node_count());
    for (int j = 0; j <= grid.n_y(); ++j) {
        for (int i = 0; i <= grid.n_x(); ++i) {
            const auto [bx, by] = cusp_field(grid.x(i), grid.y(j), ratio);
            if (std::hypot(bx, by) < 1e-12 * ratio) {
                tensors.push_back(DiffusionTensor::identity());
            } else {
                tensors.push_back(tensor_from_direction(bx, by, ratio));
            }
        }
    }
    return CaseSpec("D", grid, std::move(tensors), square_roles(grid), {0.0, 1.0});
}

CaseSpec make_case(const std::string& name, const GridSpec& grid, double ratio,
                   std::optional<double> theta) {
    std::string n = name;
    std::transform(n.begin(), n.end(), n.begin(), [](unsigned char ch) { return std::toupper(ch); });
    if (n == "A") return case_a(grid, ratio, theta.value_or(kCaseAngleAB));
    if (n == "B") return case_b(grid, ratio, theta.value_or(kCaseAngleAB));
    if (n == "C") return case_c(grid, ratio, theta.value_or(kCaseAngleC));
    if (n == "D") {
        if (theta) throw InvalidArgument("case D takes its field from the cusp geometry; --theta not allowed");
        return case_d(grid, ratio);
    }
    throw InvalidArgument("unknown case '" + name + "' (expected A, B, C or D)");
}

}  // namespace hyperdiff
