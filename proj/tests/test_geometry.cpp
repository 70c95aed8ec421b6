#include <catch2/catch_amalgamated.hpp>

#include "scene_zoo.hpp"

using namespace qamod;

namespace {

const char* kMinimalScene = R"({
  "label": "one-island",
  "domain": {"kind": "disk", "cx": 0, "cy": 0, "r": 1},
  "islands": [{"kind": "disk", "cx": 0, "cy": 0, "r": 0.2}]
})";

const char* kHalfplaneScene = R"({
  "label": "segments",
  "domain": {"kind": "halfplane_box", "x0": -8, "x1": 40, "y1": 8},
  "islands": [
    {"kind": "segment", "x0": 0, "x1": 32, "y": 1, "thickness": 0.125},
    {"kind": "segment", "x0": 0, "x1": 32, "y": 2, "thickness": 0.125},
    {"kind": "segment", "x0": 0, "x1": 32, "y": 4, "thickness": 0.125}
  ],
  "min_resolution": 8
})";

} // namespace

TEST_CASE("scene parsing and validation") {
    const SceneSpec s = build_scene(kMinimalScene);
    CHECK(s.islands.size() == 1);
    CHECK(s.domain.kind == ShapeKind::Disk);

    const SceneSpec hp = build_scene(kHalfplaneScene);
    CHECK(hp.islands.size() == 3);
    CHECK(hp.domain.kind == ShapeKind::HalfplaneBox);

    CHECK_THROWS_AS(build_scene("{"), ParseError);
    CHECK_THROWS_AS(build_scene(R"({"label":"x","islands":[]})"), ParseError); // no domain
    CHECK_THROWS_AS(build_scene(R"({"domain":{"kind":"blob"},"islands":[]})"), ParseError);
    // overlapping island closures
    CHECK_THROWS_AS(build_scene(R"({
        "domain": {"kind": "disk", "cx": 0, "cy": 0, "r": 1},
        "islands": [{"kind": "disk", "cx": 0, "cy": 0, "r": 0.2},
                    {"kind": "disk", "cx": 0.25, "cy": 0, "r": 0.2}]})"),
                    ValidationError);
    // island reaching the boundary
    CHECK_THROWS_AS(build_scene(R"({
        "domain": {"kind": "disk", "cx": 0, "cy": 0, "r": 1},
        "islands": [{"kind": "disk", "cx": 0.85, "cy": 0, "r": 0.2}]})"),
                    ValidationError);
    // collar must strictly contain its island
    CHECK_THROWS_AS(build_scene(R"({
        "domain": {"kind": "disk", "cx": 0, "cy": 0, "r": 1},
        "islands": [{"kind": "disk", "cx": 0, "cy": 0, "r": 0.2}],
        "collars": [{"kind": "disk", "cx": 0, "cy": 0, "r": 0.2}]})"),
                    ValidationError);
}

TEST_CASE("scene json round trip") {
    const SceneSpec s = build_scene(kHalfplaneScene);
    const SceneSpec s2 = parse_scene(scene_to_json(s));
    CHECK(scene_to_json(s2) == scene_to_json(s));
}

TEST_CASE("unit square rasterization counts") {
    SceneSpec sq;
    sq.domain = Shape::rect(0, 0, 1, 1);
    sq.min_resolution = 4;
    const GridDomain g = rasterize(sq, 4);
    CHECK(g.nx == 5);
    CHECK(g.ny == 5);
    CHECK(g.count(kOuterBoundary) == 16);
    CHECK(g.count(kInterior) == 9);
    CHECK(g.count(kExcluded) == 0);
}

TEST_CASE("rasterization is deterministic") {
    const SceneSpec s = zoo::annulus_scene();
    const GridDomain a = rasterize(s, 64);
    const GridDomain b = rasterize(s, 64);
    CHECK(a.cls == b.cls);
    CHECK(a.count(island_code(0)) > 0);
}

TEST_CASE("too-small islands are rejected at rasterize time") {
    SceneSpec s;
    s.domain = Shape::disk(0, 0, 1);
    s.islands.push_back({Shape::disk(0, 0, 0.01), std::nullopt});
    s.min_resolution = 64;
    CHECK_THROWS_AS(rasterize(s, 64), ResolutionError);
}

TEST_CASE("refinement preserves island structure") {
    for (double res : {48.0, 96.0, 192.0}) {
        const GridDomain g = rasterize(zoo::disk_scene("two", {Shape::disk(-0.4, 0, 0.15),
                                                               Shape::disk(0.4, 0, 0.15)}),
                                       res);
        CHECK(g.n_islands == 2);
        CHECK(g.count(island_code(0)) >= 4);
        CHECK(g.count(island_code(1)) >= 4);
    }
}

TEST_CASE("halfplane box marks only the floor as true boundary") {
    SceneSpec s;
    s.domain = Shape::halfplane_box(-2, 2, 1);
    s.min_resolution = 8;
    const GridDomain g = rasterize(s, 8);
    for (int i = 0; i < g.nx; ++i) {
        CHECK(g.at(i, 0) == kOuterBoundary);
        CHECK(g.at(i, g.ny - 1) == kInterior);
    }
    for (int j = 1; j < g.ny; ++j) {
        CHECK(g.at(0, j) == kInterior);
        CHECK(g.at(g.nx - 1, j) == kInterior);
    }
}

TEST_CASE("domain holes carry true boundary on their rims") {
    SceneSpec s;
    s.domain = Shape::disk(0, 0, 1);
    s.holes.push_back(Shape::disk(0, 0, 0.15));
    s.islands.push_back({Shape::disk(0.55, 0, 0.12), std::nullopt});
    s.min_resolution = 32;
    const GridDomain g = rasterize(s, 64);
    // some boundary nodes sit well inside the outer circle (the hole rim)
    bool inner_rim = false;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            if (g.at(i, j) == kOuterBoundary) {
                const Vec2 p = g.pos(i, j);
                if (std::hypot(p.x, p.y) < 0.5) inner_rim = true;
            }
    CHECK(inner_rim);
}

TEST_CASE("topological complexity") {
    CHECK(topological_complexity(zoo::annulus_scene()) == 0); // -1 + 1
    CHECK(topological_complexity(zoo::disk_scene("three", {Shape::disk(0.45, 0, 0.1),
                                                           Shape::disk(-0.225, 0.39, 0.1),
                                                           Shape::disk(-0.225, -0.39, 0.1)})) == 2);
    SceneSpec annular;
    annular.domain = Shape::disk(0, 0, 1);
    annular.holes.push_back(Shape::disk(0, 0, 0.15));
    annular.islands.push_back({Shape::disk(-0.55, 0, 0.12), std::nullopt});
    annular.islands.push_back({Shape::disk(0.55, 0, 0.12), std::nullopt});
    CHECK(topological_complexity(annular) == 2); // -0 + 2
    // scene-level: independent of any resolution choice by construction
}

TEST_CASE("node-set selectors") {
    SceneSpec sq;
    sq.domain = Shape::rect(0, 0, 1, 1);
    sq.islands.push_back({Shape::rect(0.4, 0.4, 0.6, 0.6), std::nullopt});
    sq.min_resolution = 10;
    const GridDomain g = rasterize(sq, 10);
    CHECK(select_nodes(g, "outer").size() == 40);
    CHECK(select_nodes(g, "outer:bottom").size() == 11);
    CHECK(select_nodes(g, "island:0") == select_nodes(g, "islands"));
    const auto both = select_nodes(g, "outer:bottom+outer:top");
    CHECK(both.size() == 22);
    CHECK_THROWS_AS(select_nodes(g, "island:7"), ValidationError);
    CHECK_THROWS_AS(select_nodes(g, "nonsense"), ValidationError);
}

TEST_CASE("island connectivity enforced") {
    // a dumbbell whose neck passes between lattice rows splits into two
    // node clusters at this resolution
    SceneSpec s;
    s.domain = Shape::rect(0, 0, 1, 1);
    s.islands.push_back({Shape::polygon({{0.13, 0.38}, {0.37, 0.38}, {0.37, 0.52}, {0.63, 0.52},
                                         {0.63, 0.38}, {0.87, 0.38}, {0.87, 0.62}, {0.63, 0.62},
                                         {0.63, 0.54}, {0.37, 0.54}, {0.37, 0.62}, {0.13, 0.62}}),
                         std::nullopt});
    s.min_resolution = 16;
    CHECK_THROWS_AS(rasterize(s, 16), ResolutionError);
}
