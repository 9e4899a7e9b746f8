#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "hyperdiff/cases.hpp"
#include "hyperdiff/central_solver.hpp"
#include "hyperdiff/errors.hpp"

using namespace hyperdiff;

namespace {

CaseSpec all_dirichlet(const GridSpec& g, const DiffusionTensor& k, const std::vector<double>& edge,
                       std::pair<double, double> bounds) {
    std::vector<NodeRole> roles(g.node_count(), NodeRole::interior());
    std::size_t n = 0;
    for (int j = 0; j <= g.n_y(); ++j)
        for (int i = 0; i <= g.n_x(); ++i)
            if (g.on_boundary(i, j)) roles[g.index(i, j)] = NodeRole::dirichlet(edge[n++ % edge.size()]);
    return CaseSpec("edge", g, k, std::move(roles), bounds);
}

}  // namespace

TEST_CASE("stability limit") {
    const auto c = case_a(GridSpec(50, 50), 1e4);
    const double lim = central_dt_limit(c);
    CHECK(lim == doctest::Approx(1.0 / (2 * 0.50005 * 2500 + 2 * 0.50005 * 2500)));
    FieldState s(c.grid());
    CHECK_NOTHROW(central_step(s, c, lim));
    CHECK_THROWS_AS(central_step(s, c, 1.01 * lim), InvalidArgument);
    CHECK_THROWS_AS(central_step(s, c, 0.0), InvalidArgument);
}

TEST_CASE("constant field with k_c = 0 is unchanged") {
    const GridSpec g(8, 8);
    const auto c = all_dirichlet(g, tensor_from_angle(0.0, 20.0), {0.4}, {0.0, 1.0});
    FieldState s(g);
    s.phi.values().assign(g.node_count(), 0.4);
    const auto n = central_step(s, c, 0.5 * central_dt_limit(c));
    CHECK(n.phi == s.phi);
}

TEST_CASE("quadratic and bilinear increments") {
    const GridSpec g(10, 10);
    const double dt = 1e-3;
    {
        const auto k = DiffusionTensor::identity();
        const auto c = all_dirichlet(g, k, {0.0}, {-5.0, 5.0});
        FieldState s(g);
        for (int j = 0; j <= 10; ++j)
            for (int i = 0; i <= 10; ++i) s.phi(i, j) = g.x(i) * g.x(i);
        const auto n = central_step(s, c, dt);
        CHECK(std::abs(n.phi(4, 6) - s.phi(4, 6) - 2 * dt) < 1e-14);
    }
    {
        // cross-dominated tensor (not SPD-free: keep a small diagonal)
        const auto k = DiffusionTensor::from_components(1.0, 1.0, 0.9);
        const auto c = all_dirichlet(g, k, {0.0}, {-5.0, 5.0});
        FieldState s(g);
        for (int j = 0; j <= 10; ++j)
            for (int i = 0; i <= 10; ++i) s.phi(i, j) = g.x(i) * g.y(j);
        const auto n = central_step(s, c, dt);
        CHECK(std::abs(n.phi(5, 3) - s.phi(5, 3) - 2 * 0.9 * dt) < 1e-14);
    }
}

TEST_CASE("stencil weights sum to one") {
    const GridSpec g(6, 6);
    const auto k = tensor_from_angle(0.7, 1e3);
    const auto c = all_dirichlet(g, k, {0.0}, {-5.0, 5.0});
    FieldState s(g);
    s.phi.values().assign(g.node_count(), 3.0);
    const double dt = central_dt_limit(c);
    const auto n = central_step(s, c, dt);
    for (int j = 1; j < 6; ++j)
        for (int i = 1; i < 6; ++i) CHECK(std::abs(n.phi(i, j) - 3.0) < 1e-14);
}

TEST_CASE("isotropic case A converges to the linear profile") {
    const GridSpec g(20, 20);
    const auto c = case_a(g, 1.0, 0.0);
    for (WallGhost w : {WallGhost::Conormal, WallGhost::Mirror}) {
        const auto [s, h] = central_solve_steady(c, central_dt_limit(c), 1e-11, 200000, w);
        CHECK(h.converged);
        double err = 0.0;
        for (int j = 0; j <= 20; ++j)
            for (int i = 0; i <= 20; ++i) err = std::max(err, std::abs(s.phi(i, j) - (1 - g.x(i))));
        CHECK(err < 1e-6);
        const auto r = dmp_report(s, 0.0, 1.0);
        CHECK(r.satisfied);
    }
}

TEST_CASE("k_c = 0 solves respect the boundary data") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const GridSpec g(12, 12);
    for (int n = 0; n < 10; ++n) {
        std::vector<double> edge(4 * 12);
        for (auto& e : edge) e = u(rng);
        const double lo = *std::min_element(edge.begin(), edge.end());
        const double hi = *std::max_element(edge.begin(), edge.end());
        const auto k = tensor_from_angle(n % 2 ? 0.0 : std::numbers::pi / 2, 1.0 + 50.0 * u(rng));
        const auto c = all_dirichlet(g, k, edge, {lo, hi});
        const auto [s, h] = central_solve_steady(c, central_dt_limit(c), 1e-9, 500000);
        CHECK(h.converged);
        CHECK(dmp_report(s, lo, hi, 1e-12).satisfied);
    }
}

TEST_CASE("anisotropic baseline leaves the bounds") {
    const auto c = case_a(GridSpec(50, 50), 1e4);
    const auto [s, h] = central_solve_steady(c, 0.99 * central_dt_limit(c), 1e-8, 1000000);
    CHECK(h.converged);
    const auto r = dmp_report(s, 0.0, 1.0);
    CHECK_FALSE(r.satisfied);
    CHECK(r.overshoot > 1e-3);
    CHECK(r.undershoot > 1e-3);
}

TEST_CASE("pinned nodes hold and bad states are rejected") {
    const auto c = case_a(GridSpec(10, 10), 1e4);
    FieldState s(c.grid());
    for (int j = 0; j <= 10; ++j) s.phi(0, j) = 1.0;
    const auto n = central_step(s, c, central_dt_limit(c));
    for (int j = 0; j <= 10; ++j) CHECK(n.phi(0, j) == 1.0);
    CHECK_THROWS_AS(central_step(FieldState(GridSpec(4, 4)), c, 1e-6), InvalidArgument);
    s.phi(4, 4) = INFINITY;
    CHECK_THROWS_AS(central_step(s, c, central_dt_limit(c)), Divergence);
}
