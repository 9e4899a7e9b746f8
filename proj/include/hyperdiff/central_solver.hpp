#pragma once

#include <cstdint>
#include <utility>

#include "hyperdiff/cases.hpp"
#include "hyperdiff/hyper_solver.hpp"
#include "hyperdiff/mesh.hpp"

namespace hyperdiff {

/// Ghost rule for phi across an impermeable wall in the 9-point scheme.
enum class WallGhost {
    /// Zero conormal flux: (K grad phi) . n = 0 discretised with central
    /// differences, so the ghost picks up the tangential-derivative term.
    Conormal,
    /// phi_ghost = phi_interior (zero normal derivative only).
    Mirror,
};

/// Largest dt for which the explicit update is stable at every node:
/// min over nodes of 1 / (2 k_x / h_x^2 + 2 k_y / h_y^2).
double central_dt_limit(const CaseSpec& problem);

/// One explicit step of the 9-point central scheme. u, v are carried
/// through untouched. Throws InvalidArgument when dt exceeds the limit,
/// Divergence on non-finite output.
FieldState central_step(const FieldState& state, const CaseSpec& problem, double dt,
                        WallGhost wall = WallGhost::Conormal);

/// Same as central_step, in place; returns max|dphi|/dt.
double central_step_inplace(FieldState& state, const CaseSpec& problem, double dt,
                            WallGhost wall = WallGhost::Conormal);

std::pair<FieldState, ConvergenceHistory> central_solve_steady(
    const CaseSpec& problem, double dt, double tol, std::int64_t max_steps,
    WallGhost wall = WallGhost::Conormal, std::int64_t report_every = 1000);

}  // namespace hyperdiff
