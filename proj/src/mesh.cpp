#include "hyperdiff/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "hyperdiff/errors.hpp"

namespace hyperdiff {

GridSpec::GridSpec(int n_x, int n_y) : n_x_(n_x), n_y_(n_y) {
    if (n_x < 2 || n_y < 2) {
        std::ostringstream msg;
        msg << "grid needs at least 2 cells per direction (got " << n_x << " x " << n_y << ")";
        throw InvalidArgument(msg.str());
    }
}

bool FieldState::all_finite() const noexcept {
    auto finite = [](const Field2D& f) {
        return std::all_of(f.values().begin(), f.values().end(),
                           [](double x) { return std::isfinite(x); });
    };
    return finite(phi) && finite(u) && finite(v);
}

std::vector<std::pair<double, double>> profile_along_midline(const FieldState& state,
                                                             const GridSpec& grid) {
    if (!state.matches(grid)) {
        throw InvalidArgument("profile_along_midline: state does not match grid");
    }
    // round half away from zero: n_y = 5 picks row 3 (y = 0.6)
    const int row = static_cast<int>(std::lround(grid.n_y() / 2.0));
    std::vector<std::pair<double, double>> out;
    out.reserve(static_cast<std::size_t>(grid.nodes_x()));
    for (int i = 0; i <= grid.n_x(); ++i) {
        out.emplace_back(grid.x(i), state.phi(i, row));
    }
    return out;
}

DmpReport dmp_report(const FieldState& state, double lower, double upper, double tol) {
    if (!(lower < upper)) {
        throw InvalidArgument("dmp_report: lower bound must be below upper bound");
    }
    if (!(tol >= 0.0)) {
        throw InvalidArgument("dmp_report: tolerance must be non-negative");
    }
    const auto& phi = state.phi.values();
    if (phi.empty()) {
        throw InvalidArgument("dmp_report: empty field");
    }
    const auto [lo, hi] = std::minmax_element(phi.begin(), phi.end());
    std::size_t under = 0;
    std::size_t over = 0;
    for (double p : phi) {
        if (p < lower - tol) ++under;
        if (p > upper + tol) ++over;
    }
    DmpReport r;
    r.min_phi = *lo;
    r.max_phi = *hi;
    r.undershoot = std::max(lower - *lo, 0.0);
    r.overshoot = std::max(*hi - upper, 0.0);
    r.under_fraction = static_cast<double>(under) / static_cast<double>(phi.size());
    r.over_fraction = static_cast<double>(over) / static_cast<double>(phi.size());
    r.satisfied = (*lo >= lower - tol) && (*hi <= upper + tol);
    r.lower = lower;
    r.upper = upper;
    r.tol = tol;
    return r;
}

void write_field_csv(std::ostream& out, const FieldState& state, const GridSpec& grid) {
    if (!state.matches(grid)) {
        throw InvalidArgument("write_field_csv: state does not match grid");
    }
    out << "x,y,phi,u,v\n" << std::setprecision(17);
    for (int j = 0; j <= grid.n_y(); ++j) {
        for (int i = 0; i <= grid.n_x(); ++i) {
            out << grid.x(i) << ',' << grid.y(j) << ',' << state.phi(i, j) << ','
                << state.u(i, j) << ',' << state.v(i, j) << '\n';
        }
    }
}

void write_profile_csv(std::ostream& out, const std::vector<std::pair<double, double>>& profile) {
    out << "x,phi\n" << std::setprecision(17);
    for (const auto& [x, p] : profile) {
        out << x << ',' << p << '\n';
    }
}

}  // namespace hyperdiff
