#include "hyperdiff/hyper_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "hyperdiff/errors.hpp"

namespace hyperdiff {

void SolverConfig::validate(const GridSpec& grid) const {
    auto fail = [](const std::string& m) { throw InvalidArgument("solver config: " + m); };
    if (!std::isfinite(alpha_s) || !(alpha_s > 0.0)) fail("alpha_s must be > 0");
    if (!std::isfinite(dt) || !(dt > 0.0)) fail("dt must be > 0");
    if (!std::isfinite(tol) || !(tol > 0.0)) fail("tol must be > 0");
    if (max_steps < 1) fail("max_steps must be >= 1");
    if (report_every < 1) fail("report_every must be >= 1");
    const double h_min = std::min(grid.h_x(), grid.h_y());
    if (dt > h_min) {
        std::ostringstream msg;
        msg << "dt = " << dt << " exceeds the CFL limit min(h_x, h_y) = " << h_min;
        fail(msg.str());
    }
}

SourceSolve source_matrices(const DiffusionTensor& tensor, double alpha_s, double dt) {
    if (!(dt > 0.0) || !std::isfinite(dt)) {
        throw InvalidArgument("source_matrices: dt must be > 0");
    }
    if (!std::isfinite(alpha_s)) {
        throw InvalidArgument("source_matrices: alpha_s must be finite");
    }
    const double scale = alpha_s * dt / tensor.delta();
    SourceSolve s;
    s.beta_x = tensor.k_x() * scale;
    s.beta_y = tensor.k_y() * scale;
    s.beta_c = tensor.k_c() * scale;
    const double diag = (1.0 + s.beta_x) * (1.0 + s.beta_y);
    const double off = s.beta_c * s.beta_c;
    s.det_b = diag - off;
    const double eps = std::numeric_limits<double>::epsilon();
    if (std::abs(s.det_b) <= 64.0 * eps * std::max({1.0, std::abs(diag), off})) {
        std::ostringstream msg;
        msg << "implicit source matrix is singular at alpha_s = " << alpha_s;
        throw SingularSource(msg.str(), alpha_s);
    }
    s.m11 = (1.0 + s.beta_x) / s.det_b;
    s.m12 = s.beta_c / s.det_b;
    s.m22 = (1.0 + s.beta_y) / s.det_b;
    return s;
}

HyperbolicSolver::HyperbolicSolver(const CaseSpec& problem, const SolverConfig& cfg)
    : problem_(problem), cfg_(cfg), grid_(problem.grid()), phi_free_(grid_.node_count(), 0),
      u_next_(grid_), v_next_(grid_), phi_next_(grid_) {
    cfg_.validate(grid_);
    if (problem_.uniform_tensor()) {
        sources_.push_back(source_matrices(problem_.tensor(0, 0), cfg_.alpha_s, cfg_.dt));
    } else {
        sources_.reserve(grid_.node_count());
        for (const auto& t : problem_.tensors()) {
            sources_.push_back(source_matrices(t, cfg_.alpha_s, cfg_.dt));
        }
    }
    for (std::size_t k = 0; k < grid_.node_count(); ++k) {
        phi_free_[k] = problem_.roles()[k].pins_phi() ? 0 : 1;
    }
}

const SourceSolve& HyperbolicSolver::source(int i, int j) const noexcept {
    return sources_.size() == 1 ? sources_.front() : sources_[grid_.index(i, j)];
}

FieldState HyperbolicSolver::initial_state() const {
    FieldState s(grid_);
    for (int j = 0; j <= grid_.n_y(); ++j) {
        for (int i = 0; i <= grid_.n_x(); ++i) {
            const NodeRole& r = problem_.role(i, j);
            if (r.pins_phi()) s.phi(i, j) = r.value;
        }
    }
    return s;
}

double HyperbolicSolver::ghost_phi(const Field2D& phi, int i, int j, Axis axis, int dir) const {
    const bool wall = axis == Axis::X ? problem_.wall_side(dir < 0 ? Side::Left : Side::Right)
                                      : problem_.wall_side(dir < 0 ? Side::Bottom : Side::Top);
    const double inner = axis == Axis::X ? phi(i - dir, j) : phi(i, j - dir);
    return wall ? inner : 2.0 * phi(i, j) - inner;
}

double HyperbolicSolver::ghost_normal(const Field2D& f, int i, int j, Axis axis, int dir) const {
    const bool wall = axis == Axis::X ? problem_.wall_side(dir < 0 ? Side::Left : Side::Right)
                                      : problem_.wall_side(dir < 0 ? Side::Bottom : Side::Top);
    const double inner = axis == Axis::X ? f(i - dir, j) : f(i, j - dir);
    return wall ? -inner : 2.0 * f(i, j) - inner;
}

void HyperbolicSolver::stage1_at(const FieldState& s, int i, int j) {
    const int nx = grid_.n_x();
    const int ny = grid_.n_y();
    const double cx = cfg_.dt / (2.0 * grid_.h_x());
    const double cy = cfg_.dt / (2.0 * grid_.h_y());

    const double p_w = i > 0 ? s.phi(i - 1, j) : ghost_phi(s.phi, i, j, Axis::X, -1);
    const double p_e = i < nx ? s.phi(i + 1, j) : ghost_phi(s.phi, i, j, Axis::X, +1);
    const double p_s = j > 0 ? s.phi(i, j - 1) : ghost_phi(s.phi, i, j, Axis::Y, -1);
    const double p_n = j < ny ? s.phi(i, j + 1) : ghost_phi(s.phi, i, j, Axis::Y, +1);
    const double u_w = i > 0 ? s.u(i - 1, j) : ghost_normal(s.u, i, j, Axis::X, -1);
    const double u_e = i < nx ? s.u(i + 1, j) : ghost_normal(s.u, i, j, Axis::X, +1);
    const double v_s = j > 0 ? s.v(i, j - 1) : ghost_normal(s.v, i, j, Axis::Y, -1);
    const double v_n = j < ny ? s.v(i, j + 1) : ghost_normal(s.v, i, j, Axis::Y, +1);

    const double ru = (1.0 - 2.0 * cx) * s.u(i, j) + cx * (u_w + u_e) + cx * (p_w - p_e);
    const double rv = (1.0 - 2.0 * cy) * s.v(i, j) + cy * (v_s + v_n) + cy * (p_s - p_n);
    const SourceSolve& m = source(i, j);
    u_next_(i, j) = m.m11 * ru + m.m12 * rv;
    v_next_(i, j) = m.m12 * ru + m.m22 * rv;
}

void HyperbolicSolver::stage_gradient(const FieldState& s) {
    const int nx = grid_.n_x();
    const int ny = grid_.n_y();
    const int stride = grid_.nodes_x();
    const double cx = cfg_.dt / (2.0 * grid_.h_x());
    const double cy = cfg_.dt / (2.0 * grid_.h_y());
    const double ax = 1.0 - 2.0 * cx;
    const double ay = 1.0 - 2.0 * cy;
    const std::size_t src_stride = sources_.size() == 1 ? 0 : 1;

    const double* phi = s.phi.data();
    const double* u = s.u.data();
    const double* v = s.v.data();
    double* un = u_next_.data();
    double* vn = v_next_.data();

    for (int j = 1; j < ny; ++j) {
        const std::size_t row = static_cast<std::size_t>(j) * stride;
        for (int i = 1; i < nx; ++i) {
            const std::size_t k = row + i;
            const double ru = ax * u[k] + cx * (u[k - 1] + u[k + 1]) + cx * (phi[k - 1] - phi[k + 1]);
            const double rv = ay * v[k] + cy * (v[k - stride] + v[k + stride]) +
                              cy * (phi[k - stride] - phi[k + stride]);
            const SourceSolve& m = sources_[k * src_stride];
            un[k] = m.m11 * ru + m.m12 * rv;
            vn[k] = m.m12 * ru + m.m22 * rv;
        }
    }

    if (cfg_.closure == Closure::Ghost) {
        for (int i = 0; i <= nx; ++i) {
            stage1_at(s, i, 0);
            stage1_at(s, i, ny);
        }
        for (int j = 1; j < ny; ++j) {
            stage1_at(s, 0, j);
            stage1_at(s, nx, j);
        }
    } else {
        close_extrapolated_gradients();
    }

    // impermeable walls carry no normal flux
    for (int i = 0; i <= nx; ++i) {
        if (problem_.role(i, 0).kind == RoleKind::ImpermeableWall) v_next_(i, 0) = 0.0;
        if (problem_.role(i, ny).kind == RoleKind::ImpermeableWall) v_next_(i, ny) = 0.0;
    }
    for (int j = 0; j <= ny; ++j) {
        if (problem_.role(0, j).kind == RoleKind::ImpermeableWall) u_next_(0, j) = 0.0;
        if (problem_.role(nx, j).kind == RoleKind::ImpermeableWall) u_next_(nx, j) = 0.0;
    }
}

void HyperbolicSolver::close_extrapolated_gradients() {
    const int nx = grid_.n_x();
    const int ny = grid_.n_y();
    auto copy_in = [&](int i, int j) {
        const int ii = std::clamp(i, 1, nx - 1);
        const int jj = std::clamp(j, 1, ny - 1);
        u_next_(i, j) = u_next_(ii, jj);
        v_next_(i, j) = v_next_(ii, jj);
    };
    for (int i = 0; i <= nx; ++i) {
        copy_in(i, 0);
        copy_in(i, ny);
    }
    for (int j = 1; j < ny; ++j) {
        copy_in(0, j);
        copy_in(nx, j);
    }
}

double HyperbolicSolver::stage2_at(const FieldState& s, const Field2D& gu, const Field2D& gv,
                                   int i, int j) const {
    const int nx = grid_.n_x();
    const int ny = grid_.n_y();
    const double cx = cfg_.dt / (2.0 * grid_.h_x());
    const double cy = cfg_.dt / (2.0 * grid_.h_y());

    const double p_w = i > 0 ? s.phi(i - 1, j) : ghost_phi(s.phi, i, j, Axis::X, -1);
    const double p_e = i < nx ? s.phi(i + 1, j) : ghost_phi(s.phi, i, j, Axis::X, +1);
    const double p_s = j > 0 ? s.phi(i, j - 1) : ghost_phi(s.phi, i, j, Axis::Y, -1);
    const double p_n = j < ny ? s.phi(i, j + 1) : ghost_phi(s.phi, i, j, Axis::Y, +1);
    const double u_w = i > 0 ? gu(i - 1, j) : ghost_normal(gu, i, j, Axis::X, -1);
    const double u_e = i < nx ? gu(i + 1, j) : ghost_normal(gu, i, j, Axis::X, +1);
    const double v_s = j > 0 ? gv(i, j - 1) : ghost_normal(gv, i, j, Axis::Y, -1);
    const double v_n = j < ny ? gv(i, j + 1) : ghost_normal(gv, i, j, Axis::Y, +1);

    return (1.0 - 2.0 * cx - 2.0 * cy) * s.phi(i, j) + cx * (p_w + p_e) + cy * (p_s + p_n) +
           cx * (u_w - u_e) + cy * (v_s - v_n);
}

double HyperbolicSolver::stage_main(const FieldState& s, const Field2D& gu, const Field2D& gv) {
    const int nx = grid_.n_x();
    const int ny = grid_.n_y();
    const int stride = grid_.nodes_x();
    const double cx = cfg_.dt / (2.0 * grid_.h_x());
    const double cy = cfg_.dt / (2.0 * grid_.h_y());
    const double a0 = 1.0 - 2.0 * cx - 2.0 * cy;

    const double* phi = s.phi.data();
    const double* u = gu.data();
    const double* v = gv.data();
    double* pn = phi_next_.data();
    const std::uint8_t* free = phi_free_.data();

    std::copy(s.phi.values().begin(), s.phi.values().end(), phi_next_.values().begin());

    double res = 0.0;
    for (int j = 1; j < ny; ++j) {
        const std::size_t row = static_cast<std::size_t>(j) * stride;
        for (int i = 1; i < nx; ++i) {
            const std::size_t k = row + i;
            if (!free[k]) continue;
            pn[k] = a0 * phi[k] + cx * (phi[k - 1] + phi[k + 1]) +
                    cy * (phi[k - stride] + phi[k + stride]) + cx * (u[k - 1] - u[k + 1]) +
                    cy * (v[k - stride] - v[k + stride]);
            res = std::max(res, std::abs(pn[k] - phi[k]));
        }
    }

    auto boundary_node = [&](int i, int j) {
        const std::size_t k = grid_.index(i, j);
        if (!free[k]) return;
        if (cfg_.closure == Closure::Ghost) {
            pn[k] = stage2_at(s, gu, gv, i, j);
        } else {
            pn[k] = phi_next_(std::clamp(i, 1, nx - 1), std::clamp(j, 1, ny - 1));
        }
        res = std::max(res, std::abs(pn[k] - phi[k]));
    };
    for (int i = 0; i <= nx; ++i) {
        boundary_node(i, 0);
        boundary_node(i, ny);
    }
    for (int j = 1; j < ny; ++j) {
        boundary_node(0, j);
        boundary_node(nx, j);
    }
    return res;
}

double HyperbolicSolver::step(FieldState& state) {
    if (!state.matches(grid_)) {
        throw InvalidArgument("hyper_step: state does not match the case grid");
    }
    stage_gradient(state);
    const bool refined = cfg_.scheme == Scheme::Refined;
    const double change = refined ? stage_main(state, u_next_, v_next_)
                                  : stage_main(state, state.u, state.v);

    std::swap(state.phi, phi_next_);
    std::swap(state.u, u_next_);
    std::swap(state.v, v_next_);
    ++state.step;

    const double residual = change / cfg_.dt;
    if (!std::isfinite(residual) || !state.all_finite()) {
        std::ostringstream msg;
        msg << "hyperbolic solver diverged at step " << state.step;
        throw Divergence(msg.str(), state.step);
    }
    return residual;
}

ConvergenceHistory HyperbolicSolver::march(FieldState& state) {
    ConvergenceHistory h;
    for (std::int64_t n = 1; n <= cfg_.max_steps; ++n) {
        const double r = step(state);
        h.steps = n;
        h.final_residual = r;
        if (n % cfg_.report_every == 0) h.samples.emplace_back(state.step, r);
        if (r <= cfg_.tol) {
            h.converged = true;
            break;
        }
    }
    if (h.samples.empty() || h.samples.back().first != state.step) {
        h.samples.emplace_back(state.step, h.final_residual);
    }
    return h;
}

FieldState hyper_step(const FieldState& state, const CaseSpec& problem, const SolverConfig& cfg) {
    HyperbolicSolver solver(problem, cfg);
    FieldState next = state;
    solver.step(next);
    return next;
}

std::pair<FieldState, ConvergenceHistory> solve_steady(const CaseSpec& problem,
                                                       const SolverConfig& cfg) {
    HyperbolicSolver solver(problem, cfg);
    FieldState state = solver.initial_state();
    ConvergenceHistory h = solver.march(state);
    return {std::move(state), std::move(h)};
}

FluxField flux_field(const FieldState& state, double alpha_s) {
    if (!(alpha_s > 0.0)) {
        throw InvalidArgument("flux_field: alpha_s must be > 0");
    }
    FluxField f{state.u, state.v, state.u};
    auto& gx = f.gamma_x.values();
    auto& gy = f.gamma_y.values();
    auto& sp = f.speed.values();
    const auto& u = state.u.values();
    const auto& v = state.v.values();
    for (std::size_t k = 0; k < u.size(); ++k) {
        gx[k] = alpha_s * u[k];
        gy[k] = alpha_s * v[k];
        sp[k] = std::hypot(u[k], v[k]);
    }
    return f;
}

double flux_relation_residual(const FieldState& state, const CaseSpec& problem, double alpha_s) {
    const GridSpec& g = problem.grid();
    if (!state.matches(g)) {
        throw InvalidArgument("flux_relation_residual: state does not match grid");
    }
    double worst = 0.0;
    for (int j = 1; j < g.n_y(); ++j) {
        for (int i = 1; i < g.n_x(); ++i) {
            if (problem.role(i, j).kind != RoleKind::Interior) continue;
            const DiffusionTensor& k = problem.tensor(i, j);
            const double px = (state.phi(i + 1, j) - state.phi(i - 1, j)) / (2.0 * g.h_x());
            const double py = (state.phi(i, j + 1) - state.phi(i, j - 1)) / (2.0 * g.h_y());
            const double rx = alpha_s * state.u(i, j) + k.k_x() * px + k.k_c() * py;
            const double ry = alpha_s * state.v(i, j) + k.k_c() * px + k.k_y() * py;
            worst = std::max(worst, std::hypot(rx, ry));
        }
    }
    return worst;
}

}  // namespace hyperdiff
