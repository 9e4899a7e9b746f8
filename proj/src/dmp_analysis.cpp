#include "hyperdiff/dmp_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "hyperdiff/errors.hpp"
#include "hyperdiff/hyper_solver.hpp"

namespace hyperdiff {

namespace {

void require_dt(double dt, const char* who) {
    if (!std::isfinite(dt) || !(dt > 0.0)) {
        throw InvalidArgument(std::string(who) + ": dt must be > 0");
    }
}

}  // namespace

ThresholdPair alpha_thresholds(const DiffusionTensor& tensor, double dt) {
    require_dt(dt, "alpha_thresholds");
    const double tr = tensor.trace();
    const double s = std::sqrt(tensor.discriminant());
    // the small-magnitude root via the product of roots, det / dt^2
    const double big = -(tr + s) / (2.0 * dt);
    const double small = tensor.delta() / (dt * dt) / big;
    return {big, small};
}

double det_b(const DiffusionTensor& tensor, double alpha, double dt) {
    const double scale = alpha * dt / tensor.delta();
    const double bx = tensor.k_x() * scale;
    const double by = tensor.k_y() * scale;
    const double bc = tensor.k_c() * scale;
    return (1.0 + bx) * (1.0 + by) - bc * bc;
}

double dt_bound(const DiffusionTensor& tensor) {
    // (tr^2 - tr sqrt(tr^2 - 4 det)) / 2 without the subtraction
    const double tr = tensor.trace();
    const double s = std::sqrt(tensor.discriminant());
    return 2.0 * tr * tensor.delta() / (tr + s);
}

double f_c(const DiffusionTensor& tensor, double dt, double c, double alpha) {
    const double tr = tensor.trace();
    const double d = tensor.delta();
    const double a = 4.0 * dt * dt + c * tr * dt;
    const double b = 4.0 * tr * dt + 2.0 * c * d;
    return (a * alpha + b) * alpha + 4.0 * d;
}

RootPair ftilde_roots(const DiffusionTensor& tensor, double dt, double c) {
    require_dt(dt, "ftilde_roots");
    if (!std::isfinite(c) || c < 0.0) {
        throw InvalidArgument("ftilde_roots: C must be >= 0");
    }
    if (c == 0.0) {
        const ThresholdPair t = alpha_thresholds(tensor, dt);
        return {t.alpha_minus, t.alpha_plus};
    }
    const double tr = tensor.trace();
    const double d = tensor.delta();
    const double a = 4.0 * dt * dt + c * tr * dt;
    const double half_b = 2.0 * tr * dt + c * d;
    const double cc = 4.0 * d;
    // (b/2)^2 - a c expands to 4 dt^2 (tr^2 - 4 det) + C^2 det^2
    const double quarter_disc = 4.0 * dt * dt * tensor.discriminant() + c * c * d * d;
    if (!(a > 0.0)) {
        throw InvalidArgument("ftilde_roots: leading coefficient must be positive");
    }
    if (quarter_disc < 0.0 || !std::isfinite(quarter_disc)) {
        std::ostringstream msg;
        msg << "f_C has no real roots at C = " << c;
        throw NoRealRoots(msg.str());
    }
    const double q = -(half_b + std::copysign(std::sqrt(quarter_disc), half_b));
    if (q == 0.0) {
        throw NoRealRoots("f_C roots undefined (degenerate quadratic)");
    }
    double r1 = q / a;
    double r2 = cc / q;
    if (r1 > r2) std::swap(r1, r2);
    return {r1, r2};
}

DmpInterval i_dmp(const DiffusionTensor& tensor, double dt, double c) {
    const ThresholdPair t = alpha_thresholds(tensor, dt);
    const RootPair r = ftilde_roots(tensor, dt, c);
    DmpInterval out;
    if (c == 0.0) {
        out.outer = {t.alpha_minus, t.alpha_minus, false};
        out.inner = {t.alpha_plus, t.alpha_plus, false};
    } else {
        if (r.alpha_tilde_minus <= t.alpha_minus) out.outer = {r.alpha_tilde_minus, t.alpha_minus, false};
        if (t.alpha_plus <= r.alpha_tilde_plus) out.inner = {t.alpha_plus, r.alpha_tilde_plus, false};
    }
    auto negate = [](const Interval& iv) {
        return iv.empty ? Interval{} : Interval{-iv.hi, -iv.lo, false};
    };
    out.outer_mag = negate(out.outer);
    out.inner_mag = negate(out.inner);
    return out;
}

bool dmp_holds(double alpha_s, const DiffusionTensor& tensor, double dt, double h) {
    if (!std::isfinite(h) || !(h > 0.0)) {
        throw InvalidArgument("dmp_holds: h must be > 0");
    }
    const DmpInterval iv = i_dmp(tensor, dt, dt / h);
    const double a = -std::abs(alpha_s);
    return iv.inner.contains(a) || iv.outer.contains(a);
}

std::size_t StencilCoeffs::slot(int di, int dj) {
    if (di < -2 || di > 2 || dj < -2 || dj > 2) {
        throw InvalidArgument("StencilCoeffs: offset outside [-2, 2]^2");
    }
    return static_cast<std::size_t>((dj + 2) * 5 + (di + 2));
}

double StencilCoeffs::sum() const noexcept {
    double s = 0.0;
    for (double x : c_) s += x;
    return s;
}

StencilCoeffs effective_stencil(const DiffusionTensor& tensor, double alpha_s, double dt, double h,
                                StencilForm form) {
    require_dt(dt, "effective_stencil");
    if (!std::isfinite(h) || !(h > 0.0)) {
        throw InvalidArgument("effective_stencil: h must be > 0");
    }
    const SourceSolve s = source_matrices(tensor, alpha_s, dt);
    const double c = dt / h;
    const double w = form == StencilForm::Analysis ? alpha_s : 1.0;

    StencilCoeffs k;
    k.at(0, 0) = 1.0 - 2.0 * c - ((1.0 + s.beta_y) + (1.0 + s.beta_x)) / (2.0 * s.det_b) * c * c * w;
    k.at(1, 0) = k.at(-1, 0) = k.at(0, 1) = k.at(0, -1) = c / 2.0;
    k.at(2, 0) = k.at(-2, 0) = (1.0 + s.beta_x) / s.det_b * (c / 2.0) * (c / 2.0) * w;
    k.at(0, 2) = k.at(0, -2) = (1.0 + s.beta_y) / s.det_b * (c / 2.0) * (c / 2.0) * w;
    const double diag = s.beta_c / (2.0 * s.det_b) * c * c * w;
    k.at(1, 1) = k.at(-1, -1) = diag;
    k.at(1, -1) = k.at(-1, 1) = -diag;
    return k;
}

StencilCoeffs effective_stencil(const DiffusionTensor& tensor, double alpha_s, double dt,
                                const GridSpec& grid, StencilForm form) {
    if (grid.n_x() != grid.n_y()) {
        throw Unsupported("effective_stencil: only square meshes (h_x = h_y) are supported");
    }
    return effective_stencil(tensor, alpha_s, dt, grid.h_x(), form);
}

MonotonicityReport monotonicity_report(const StencilCoeffs& coeffs) {
    MonotonicityReport r;
    r.min_coefficient = *std::min_element(coeffs.raw().begin(), coeffs.raw().end());
    r.is_monotone = r.min_coefficient >= 0.0;
    r.cross_magnitude = std::max({std::abs(coeffs.at(1, 1)), std::abs(coeffs.at(-1, -1)),
                                  std::abs(coeffs.at(1, -1)), std::abs(coeffs.at(-1, 1))});
    return r;
}

MinimalMeshOperator minimal_mesh_matrices(const DiffusionTensor& tensor, double alpha_s, double dt,
                                          double h) {
    const StencilCoeffs k = effective_stencil(tensor, alpha_s, dt, h, StencilForm::Analysis);
    MinimalMeshOperator op;
    op.a_center = k.at(0, 0) - 1.0;
    // second neighbours fold onto the boundary node on the same axis
    op.a_boundary = {
        k.at(-1, -1),
        k.at(-1, 0) + k.at(-2, 0),
        k.at(-1, 1),
        k.at(0, -1) + k.at(0, -2),
        k.at(0, 1) + k.at(0, 2),
        k.at(1, -1),
        k.at(1, 0) + k.at(2, 0),
        k.at(1, 1),
    };
    op.det_b = source_matrices(tensor, alpha_s, dt).det_b;
    op.alpha_s = alpha_s;
    return op;
}

CiarletDiagnostics ciarlet_diagnostics(const MinimalMeshOperator& op) {
    if (op.a_center == 0.0 || !std::isfinite(op.a_center)) {
        throw SingularOperator("ciarlet_check: interior block is singular (a_center = 0)");
    }
    CiarletDiagnostics d;
    d.g = 1.0 / op.a_center;
    d.g_nonneg = d.g > 0.0;
    d.g_boundary_entrywise_nonneg = true;
    for (std::size_t n = 0; n < op.a_boundary.size(); ++n) {
        d.g_boundary[n] = -op.a_boundary[n] / op.a_center;
        d.g_boundary_sum += d.g_boundary[n];
        if (d.g_boundary[n] < 0.0) d.g_boundary_entrywise_nonneg = false;
    }
    d.sign_condition = op.alpha_s * op.det_b < 0.0;
    const double slack = 1e-12 * std::max(1.0, std::abs(d.g_boundary_sum));
    d.verdict = d.g_nonneg && d.sign_condition && d.g_boundary_sum <= 1.0 + slack;
    return d;
}

bool ciarlet_check(const MinimalMeshOperator& op) { return ciarlet_diagnostics(op).verdict; }

}  // namespace hyperdiff
