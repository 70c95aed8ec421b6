#include <catch2/catch_amalgamated.hpp>

#include "scene_zoo.hpp"

using namespace qamod;
using Catch::Approx;

namespace {

GridDomain unit_square(double res) {
    SceneSpec s;
    s.domain = Shape::rect(0, 0, 1, 1);
    s.min_resolution = res;
    return rasterize(s, res);
}

} // namespace

TEST_CASE("opposite-edge ramp is the exact discrete solution") {
    const GridDomain g = unit_square(16);
    const PotentialField f = solve_between(g, "outer:right", "outer:left", SolveOptions{1e-12});
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            CHECK(f.values[g.idx(i, j)] == Approx(g.pos(i, j).x).margin(1e-9));
    // closed-form edge sum of the linear ramp: (n+1) rows of n edges at 1/n
    CHECK(f.energy == Approx(17.0 / 16.0).margin(1e-9));
    CHECK(f.residual <= 1e-12);
}

TEST_CASE("disconnected source and sink give zero energy") {
    SceneSpec s;
    s.domain = Shape::rect(0, 0, 1, 1);
    s.holes.push_back(Shape::rect(0.45, -0.1, 0.55, 1.1)); // wall splitting the square
    s.min_resolution = 16;
    const GridDomain g = rasterize(s, 16);
    std::vector<int> src, snk;
    for (int j = 0; j < g.ny; ++j) {
        src.push_back(g.idx(0, j));
        snk.push_back(g.idx(g.nx - 1, j));
    }
    const PotentialField f = solve_potential(g, src, snk, SolveOptions{1e-12});
    CHECK(f.energy == Approx(0.0).margin(1e-18));
    // the source component floats at the source value
    CHECK(f.values[g.idx(1, 8)] == Approx(1.0).margin(1e-9));
}

TEST_CASE("radial field matches the log potential") {
    const SceneSpec s = zoo::annulus_scene(0.2);
    const GridDomain g = rasterize(s, 128);
    const PotentialField f = solve_between(g, "island:0", "outer", SolveOptions{1e-12});
    double worst = 0.0;
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            if (g.at(i, j) != kInterior) continue;
            const Vec2 p = g.pos(i, j);
            const double rho = std::hypot(p.x, p.y);
            if (rho < 0.25 || rho > 0.95) continue; // clear of the staircase rings
            const double exact = std::log(rho) / std::log(0.2);
            worst = std::max(worst, std::abs(f.values[g.idx(i, j)] - exact));
        }
    }
    CHECK(worst < 0.01);
}

TEST_CASE("width is symmetric under source/sink swap") {
    const SceneSpec s = zoo::disk_scene("two", {Shape::disk(-0.4, 0, 0.15), Shape::disk(0.4, 0, 0.15)});
    const GridDomain g = rasterize(s, 64);
    const double a = extremal_width(g, "island:0", "outer+island:1", SolveOptions{1e-11});
    const double b = extremal_width(g, "outer+island:1", "island:0", SolveOptions{1e-11});
    CHECK(a == Approx(b).epsilon(1e-6));
}

TEST_CASE("maximum principle on assorted grids") {
    for (auto& [scene, res] : {std::pair{zoo::annulus_scene(0.2), 48.0},
                               {zoo::disk_scene("two", {Shape::disk(-0.4, 0, 0.15),
                                                        Shape::disk(0.4, 0, 0.15)}),
                                48.0}}) {
        const GridDomain g = rasterize(scene, res);
        const PotentialField f = solve_between(g, "island:0", "outer", SolveOptions{1e-12});
        for (size_t n = 0; n < g.cls.size(); ++n) {
            if (!in_domain(g.cls[n])) continue;
            CHECK(f.values[n] >= -1e-9);
            CHECK(f.values[n] <= 1.0 + 1e-9);
        }
    }
}

TEST_CASE("rayleigh monotonicity") {
    const GridDomain g = unit_square(12);
    const SolveOptions opts{1e-12};
    const std::vector<int> src = select_nodes(g, "outer:right");
    const std::vector<int> snk = select_nodes(g, "outer:left");
    const double base = extremal_width(g, src, snk, opts);

    const int extra = g.idx(6, 6);
    REQUIRE(g.cls[extra] == kInterior);

    SECTION("grounding a free node does not decrease width") {
        std::vector<int> snk2 = snk;
        snk2.push_back(extra);
        CHECK(extremal_width(g, src, snk2, opts) >= base - 1e-9);
    }
    SECTION("pinning a free node to the source does not decrease width") {
        std::vector<int> src2 = src;
        src2.push_back(extra);
        CHECK(extremal_width(g, src2, snk, opts) >= base - 1e-9);
    }
    SECTION("deleting a node (and its edges) does not increase width") {
        GridDomain g2 = g;
        g2.cls[extra] = kExcluded;
        CHECK(extremal_width(g2, src, snk, opts) <= base + 1e-9);
    }
}

TEST_CASE("solver input validation") {
    const GridDomain g = unit_square(8);
    CHECK_THROWS_AS(solve_potential(g, {}, select_nodes(g, "outer:left")), ValidationError);
    CHECK_THROWS_AS(solve_between(g, "outer", "outer:left", SolveOptions{1e-10}), ValidationError);
    CHECK_THROWS_AS(solve_between(g, "outer:left", "outer:right", SolveOptions{-1.0}), ValidationError);
}

TEST_CASE("diagnostics record the residual curve") {
    const GridDomain g = unit_square(16);
    SolveOptions opts{1e-10};
    opts.record_residuals = true;
    const PotentialField f = solve_between(g, "outer:top", "outer:bottom", opts);
    REQUIRE(f.residual_history.size() == size_t(f.iterations) + 1);
    CHECK(f.residual_history.front() == 1.0);
    CHECK(f.residual_history.back() <= 1e-10);
}

TEST_CASE("repeated solves are bit-identical") {
    const SceneSpec s = zoo::annulus_scene(0.2);
    const GridDomain g = rasterize(s, 64);
    const PotentialField a = solve_between(g, "island:0", "outer", SolveOptions{1e-10});
    const PotentialField b = solve_between(g, "island:0", "outer", SolveOptions{1e-10});
    CHECK(a.values == b.values);
    CHECK(a.energy == b.energy);
    CHECK(a.iterations == b.iterations);
}

TEST_CASE("solve cache round trip") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "qamod-cache-test";
    fs::remove_all(dir);
    setenv("QAMOD_CACHE_DIR", dir.c_str(), 1);
    const SceneSpec s = zoo::annulus_scene(0.2);
    const GridDomain g = rasterize(s, 48);
    const PotentialField miss = solve_between(g, "island:0", "outer", SolveOptions{1e-10});
    const PotentialField hit = solve_between(g, "island:0", "outer", SolveOptions{1e-10});
    unsetenv("QAMOD_CACHE_DIR");
    CHECK(!fs::is_empty(dir));
    CHECK(hit.values == miss.values);
    CHECK(hit.energy == miss.energy);
    CHECK(hit.iterations == miss.iterations);
    fs::remove_all(dir);
}
