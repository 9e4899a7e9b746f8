#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "hyperdiff/cases.hpp"
#include "hyperdiff/mesh.hpp"
#include "hyperdiff/tensor.hpp"

namespace hyperdiff {

/// Which gradient-variable level feeds the phi update.
enum class Scheme {
    Refined,    ///< u, v advance first; phi uses the n+1 values
    Unrefined,  ///< phi uses the n-level u, v
};

/// How variables without a pinned value are closed on the domain boundary.
enum class Closure {
    /// Boundary nodes run the same stencils as interior ones, with ghost
    /// values: linear extrapolation of phi, u, v across Dirichlet sides,
    /// even/odd reflection across walls.
    Ghost,
    /// Boundary u, v (after stage 1) and wall phi (after stage 2) are copied
    /// from the nearest interior node.
    Extrapolate,
};

struct SolverConfig {
    double alpha_s = 1.0;
    double dt = 1e-4;
    double tol = 1e-8;
    std::int64_t max_steps = 1'000'000;
    std::int64_t report_every = 1000;
    Scheme scheme = Scheme::Refined;
    Closure closure = Closure::Ghost;

    /// Throws InvalidArgument unless the config is admissible on this grid
    /// (unit wave speeds give the CFL limit dt <= min(h_x, h_y)).
    void validate(const GridSpec& grid) const;
};

/// Point-implicit solve of the relaxation source for one tensor:
///   [1+beta_y, -beta_c; -beta_c, 1+beta_x] (u, v)^{n+1} = rhs.
struct SourceSolve {
    double beta_x = 0.0;
    double beta_y = 0.0;
    double beta_c = 0.0;
    double det_b = 1.0;
    double m11 = 1.0;
    double m12 = 0.0;
    double m22 = 1.0;
};

/// beta_* = k_* alpha_s dt / det K. Throws SingularSource when |B| vanishes
/// (only at alpha_s equal to one of the solvability thresholds).
SourceSolve source_matrices(const DiffusionTensor& tensor, double alpha_s, double dt);

struct ConvergenceHistory {
    std::vector<std::pair<std::int64_t, double>> samples;
    double final_residual = 0.0;
    bool converged = false;
    std::int64_t steps = 0;
};

/**
 * Explicit two-stage upwind scheme for the preconditioned first-order
 * system, bound to one case and config. Construction validates both and
 * caches the per-node source inverses.
 */
class HyperbolicSolver {
public:
    HyperbolicSolver(const CaseSpec& problem, const SolverConfig& cfg);

    /// Advance one pseudo-time step in place. Returns max|dphi|/dt.
    /// Throws Divergence if any value becomes non-finite.
    double step(FieldState& state);

    /// phi = 0 except pinned nodes, u = v = 0.
    FieldState initial_state() const;

    /// Step until the residual drops to cfg.tol or max_steps is reached.
    ConvergenceHistory march(FieldState& state);

    const CaseSpec& problem() const noexcept { return problem_; }
    const SolverConfig& config() const noexcept { return cfg_; }
    const SourceSolve& source(int i, int j) const noexcept;

private:
    enum class Axis { X, Y };

    void stage_gradient(const FieldState& s);
    double stage_main(const FieldState& s, const Field2D& gu, const Field2D& gv);
    void close_extrapolated_gradients();

    // ghost value of a field one node past the boundary, along the given axis
    double ghost_phi(const Field2D& phi, int i, int j, Axis axis, int dir) const;
    // ghost of the wall-normal gradient variable (u along X, v along Y)
    double ghost_normal(const Field2D& f, int i, int j, Axis axis, int dir) const;
    void stage1_at(const FieldState& s, int i, int j);
    double stage2_at(const FieldState& s, const Field2D& gu, const Field2D& gv, int i, int j) const;

    CaseSpec problem_;
    SolverConfig cfg_;
    GridSpec grid_;
    std::vector<SourceSolve> sources_;  // one entry when the tensor is uniform
    std::vector<std::uint8_t> phi_free_;
    Field2D u_next_;
    Field2D v_next_;
    Field2D phi_next_;
};

/// One step of the scheme from a given state (convenience wrapper).
FieldState hyper_step(const FieldState& state, const CaseSpec& problem, const SolverConfig& cfg);

/// March from the default initial state to steady state.
std::pair<FieldState, ConvergenceHistory> solve_steady(const CaseSpec& problem,
                                                       const SolverConfig& cfg);

/// Flux Gamma = alpha_s (u, v) and gradient-variable speed sqrt(u^2 + v^2).
struct FluxField {
    Field2D gamma_x;
    Field2D gamma_y;
    Field2D speed;
};

FluxField flux_field(const FieldState& state, double alpha_s);

/// max over Interior nodes of |alpha_s (u, v) + K grad_h phi| with central
/// differences; the steady-state defect of the flux relation.
double flux_relation_residual(const FieldState& state, const CaseSpec& problem, double alpha_s);

}  // namespace hyperdiff
