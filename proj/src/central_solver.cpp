#include "hyperdiff/central_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "hyperdiff/errors.hpp"

namespace hyperdiff {

double central_dt_limit(const CaseSpec& problem) {
    const GridSpec& g = problem.grid();
    const double ix = 1.0 / (g.h_x() * g.h_x());
    const double iy = 1.0 / (g.h_y() * g.h_y());
    double worst = 0.0;
    for (const auto& k : problem.tensors()) {
        worst = std::max(worst, 2.0 * k.k_x() * ix + 2.0 * k.k_y() * iy);
    }
    return 1.0 / worst;
}

namespace {

class CentralSweep {
public:
    CentralSweep(const CaseSpec& problem, const Field2D& phi, WallGhost wall)
        : p_(problem), g_(problem.grid()), phi_(phi), wall_(wall) {}

    // phi at (i, j), reaching at most one node past the boundary.
    double at(int i, int j, const DiffusionTensor& k) const {
        const int nx = g_.n_x();
        const int ny = g_.n_y();
        const bool out_x = i < 0 || i > nx;
        const bool out_y = j < 0 || j > ny;
        if (!out_x && !out_y) return phi_(i, j);
        if (out_x && out_y) {
            // corner ghost: point reflection through the corner node
            return phi_(i < 0 ? 1 : nx - 1, j < 0 ? 1 : ny - 1);
        }
        if (out_y) {
            const int jb = j < 0 ? 0 : ny;
            const int jin = j < 0 ? 1 : ny - 1;
            if (wall_ == WallGhost::Mirror) return phi_(i, jin);
            const double sign = j < 0 ? 1.0 : -1.0;
            return phi_(i, jin) + sign * (k.k_c() / k.k_y()) * (g_.h_y() / g_.h_x()) * dx(i, jb);
        }
        const int ib = i < 0 ? 0 : nx;
        const int iin = i < 0 ? 1 : nx - 1;
        if (wall_ == WallGhost::Mirror) return phi_(iin, j);
        const double sign = i < 0 ? 1.0 : -1.0;
        return phi_(iin, j) + sign * (k.k_c() / k.k_x()) * (g_.h_x() / g_.h_y()) * dy(ib, j);
    }

    double update(int i, int j, double dt) const {
        const DiffusionTensor& k = p_.tensor(i, j);
        const double ax = k.k_x() * dt / (g_.h_x() * g_.h_x());
        const double ay = k.k_y() * dt / (g_.h_y() * g_.h_y());
        const double ac = k.k_c() * dt / (2.0 * g_.h_x() * g_.h_y());
        return (1.0 - 2.0 * ax - 2.0 * ay) * phi_(i, j) + ax * (at(i + 1, j, k) + at(i - 1, j, k)) +
               ay * (at(i, j + 1, k) + at(i, j - 1, k)) +
               ac * (at(i + 1, j + 1, k) - at(i + 1, j - 1, k) - at(i - 1, j + 1, k) +
                     at(i - 1, j - 1, k));
    }

private:
    // centred difference phi(i+1) - phi(i-1) along the boundary row, one-sided x2 at its ends
    double dx(int i, int j) const {
        const int nx = g_.n_x();
        if (i <= 0) return 2.0 * (phi_(1, j) - phi_(0, j));
        if (i >= nx) return 2.0 * (phi_(nx, j) - phi_(nx - 1, j));
        return phi_(i + 1, j) - phi_(i - 1, j);
    }
    double dy(int i, int j) const {
        const int ny = g_.n_y();
        if (j <= 0) return 2.0 * (phi_(i, 1) - phi_(i, 0));
        if (j >= ny) return 2.0 * (phi_(i, ny) - phi_(i, ny - 1));
        return phi_(i, j + 1) - phi_(i, j - 1);
    }

    const CaseSpec& p_;
    const GridSpec& g_;
    const Field2D& phi_;
    WallGhost wall_;
};

void check_dt(const CaseSpec& problem, double dt) {
    if (!std::isfinite(dt) || !(dt > 0.0)) {
        throw InvalidArgument("central scheme: dt must be > 0");
    }
    const double limit = central_dt_limit(problem);
    if (dt > limit * (1.0 + 1e-12)) {
        std::ostringstream msg;
        msg << "central scheme: dt = " << dt << " exceeds the explicit stability limit " << limit;
        throw InvalidArgument(msg.str());
    }
}

double sweep(FieldState& state, const CaseSpec& problem, double dt, WallGhost wall, Field2D& out) {
    const GridSpec& g = problem.grid();
    out = state.phi;
    CentralSweep s(problem, state.phi, wall);
    double res = 0.0;
    for (int j = 0; j <= g.n_y(); ++j) {
        for (int i = 0; i <= g.n_x(); ++i) {
            if (problem.role(i, j).pins_phi()) continue;
            const double next = s.update(i, j, dt);
            res = std::max(res, std::abs(next - state.phi(i, j)));
            out(i, j) = next;
        }
    }
    std::swap(state.phi, out);
    ++state.step;
    const double r = res / dt;
    if (!std::isfinite(r) || !state.all_finite()) {
        std::ostringstream msg;
        msg << "central scheme diverged at step " << state.step;
        throw Divergence(msg.str(), state.step);
    }
    return r;
}

}  // namespace

double central_step_inplace(FieldState& state, const CaseSpec& problem, double dt, WallGhost wall) {
    if (!state.matches(problem.grid())) {
        throw InvalidArgument("central_step: state does not match the case grid");
    }
    check_dt(problem, dt);
    Field2D scratch;
    return sweep(state, problem, dt, wall, scratch);
}

FieldState central_step(const FieldState& state, const CaseSpec& problem, double dt, WallGhost wall) {
    FieldState next = state;
    central_step_inplace(next, problem, dt, wall);
    return next;
}

std::pair<FieldState, ConvergenceHistory> central_solve_steady(const CaseSpec& problem, double dt,
                                                               double tol, std::int64_t max_steps,
                                                               WallGhost wall,
                                                               std::int64_t report_every) {
    check_dt(problem, dt);
    if (!(tol > 0.0)) throw InvalidArgument("central_solve_steady: tol must be > 0");
    if (max_steps < 1) throw InvalidArgument("central_solve_steady: max_steps must be >= 1");
    if (report_every < 1) throw InvalidArgument("central_solve_steady: report_every must be >= 1");

    const GridSpec& g = problem.grid();
    FieldState state(g);
    for (int j = 0; j <= g.n_y(); ++j) {
        for (int i = 0; i <= g.n_x(); ++i) {
            if (problem.role(i, j).pins_phi()) state.phi(i, j) = problem.role(i, j).value;
        }
    }
    ConvergenceHistory h;
    Field2D scratch;
    for (std::int64_t n = 1; n <= max_steps; ++n) {
        const double r = sweep(state, problem, dt, wall, scratch);
        h.steps = n;
        h.final_residual = r;
        if (n % report_every == 0) h.samples.emplace_back(state.step, r);
        if (r <= tol) {
            h.converged = true;
            break;
        }
    }
    if (h.samples.empty() || h.samples.back().first != state.step) {
        h.samples.emplace_back(state.step, h.final_residual);
    }
    return {std::move(state), std::move(h)};
}

}  // namespace hyperdiff
