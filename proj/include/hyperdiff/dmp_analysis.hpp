#pragma once

#include <array>
#include <utility>

#include "hyperdiff/mesh.hpp"
#include "hyperdiff/tensor.hpp"

namespace hyperdiff {

/// Roots of |B|(alpha) = 0. Both are <= 0; alpha_minus <= alpha_plus.
struct ThresholdPair {
    double alpha_minus = 0.0;
    double alpha_plus = 0.0;

    /// (|alpha_plus|, |alpha_minus|), ascending.
    std::pair<double, double> magnitudes() const noexcept { return {-alpha_plus, -alpha_minus}; }
};

ThresholdPair alpha_thresholds(const DiffusionTensor& tensor, double dt);

/// |B| = (1+beta_x)(1+beta_y) - beta_c^2 as a function of signed alpha.
double det_b(const DiffusionTensor& tensor, double alpha, double dt);

/// Largest dt for which the admissible alpha interval is non-empty.
double dt_bound(const DiffusionTensor& tensor);

/// f_C(alpha) = (4dt^2 + C tr dt) alpha^2 + (4 tr dt + 2 C det) alpha + 4 det.
double f_c(const DiffusionTensor& tensor, double dt, double c, double alpha);

struct RootPair {
    double alpha_tilde_minus = 0.0;
    double alpha_tilde_plus = 0.0;
};

/// Real roots of f_C, ordered. C = 0 returns the solvability thresholds.
RootPair ftilde_roots(const DiffusionTensor& tensor, double dt, double c);

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    bool empty = true;

    bool contains(double x) const noexcept { return !empty && lo <= x && x <= hi; }
};

struct DmpInterval {
    Interval outer;        ///< [alpha~-(C), alpha-]
    Interval inner;        ///< [alpha+, alpha~+(C)]
    Interval outer_mag;    ///< outer mapped through alpha -> -alpha
    Interval inner_mag;    ///< inner mapped through alpha -> -alpha
};

DmpInterval i_dmp(const DiffusionTensor& tensor, double dt, double c);

/// -|alpha_s| in I_DMP(dt/h), endpoints included.
bool dmp_holds(double alpha_s, const DiffusionTensor& tensor, double dt, double h);

/// Which composition the stencil describes.
enum class StencilForm {
    /// Every alpha-dependent entry carries an explicit alpha_s factor, as in
    /// the closed-form analysis (and in the minimal-mesh operator).
    Analysis,
    /// The stencil actually produced by one two-stage step with u = v = 0.
    Scheme,
};

/// Coefficients over offsets (di, dj) in [-2, 2]^2; phi_new = sum c(di,dj) phi(i+di, j+dj).
class StencilCoeffs {
public:
    double& at(int di, int dj) { return c_[slot(di, dj)]; }
    double at(int di, int dj) const { return c_[slot(di, dj)]; }
    double sum() const noexcept;
    const std::array<double, 25>& raw() const noexcept { return c_; }

private:
    static std::size_t slot(int di, int dj);
    std::array<double, 25> c_{};
};

StencilCoeffs effective_stencil(const DiffusionTensor& tensor, double alpha_s, double dt, double h,
                                StencilForm form = StencilForm::Analysis);
/// Throws Unsupported unless h_x == h_y.
StencilCoeffs effective_stencil(const DiffusionTensor& tensor, double alpha_s, double dt,
                                const GridSpec& grid, StencilForm form = StencilForm::Analysis);

struct MonotonicityReport {
    bool is_monotone = true;
    double min_coefficient = 0.0;
    double cross_magnitude = 0.0;
};

MonotonicityReport monotonicity_report(const StencilCoeffs& coeffs);

/// The stencil folded onto a 3x3 mesh with one interior node.
struct MinimalMeshOperator {
    double a_center = 0.0;
    /// (i-1,j-1),(i-1,j),(i-1,j+1),(i,j-1),(i,j+1),(i+1,j-1),(i+1,j),(i+1,j+1)
    std::array<double, 8> a_boundary{};
    double det_b = 1.0;
    double alpha_s = 0.0;
};

MinimalMeshOperator minimal_mesh_matrices(const DiffusionTensor& tensor, double alpha_s, double dt,
                                          double h);

struct CiarletDiagnostics {
    double g = 0.0;                    ///< 1 / a_center
    std::array<double, 8> g_boundary{};  ///< -a_boundary / a_center
    double g_boundary_sum = 0.0;
    bool g_nonneg = false;
    bool g_boundary_entrywise_nonneg = false;
    bool sign_condition = false;       ///< alpha_s and |B| of opposite sign
    bool verdict = false;
};

/// Throws SingularOperator when a_center == 0.
CiarletDiagnostics ciarlet_diagnostics(const MinimalMeshOperator& op);
bool ciarlet_check(const MinimalMeshOperator& op);

}  // namespace hyperdiff
