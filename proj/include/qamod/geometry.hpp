#ifndef QAMOD_GEOMETRY_HPP
#define QAMOD_GEOMETRY_HPP

#include <cstdint>
#include <optional>
#include <queue>
#include <sstream>

#include <nlohmann/json.hpp>

#include "shapes.hpp"

namespace qamod {

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ResolutionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IslandSpec {
    Shape shape;
    std::optional<Shape> collar;
};

/// Declarative description of a domain with marked islands.
struct SceneSpec {
    std::string label;
    Shape domain;
    std::vector<Shape> holes;           // subtracted from the domain; hole rims are true boundary
    std::vector<IslandSpec> islands;
    std::optional<Shape> inner_domain;  // middle level of a four-level nest, when present
    double min_resolution = 16.0;
};

// ---------------------------------------------------------------------------
// Scene schema (JSON)
// ---------------------------------------------------------------------------

namespace detail {

using json = nlohmann::json;

inline double require_number(const json& j, const char* key, const std::string& where) {
    if (!j.contains(key) || !j[key].is_number())
        throw ParseError(where + ": missing or non-numeric field '" + key + "'");
    return j[key].get<double>();
}

inline Shape parse_shape(const json& j, const std::string& where, bool domain_position) {
    if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
        throw ParseError(where + ": shape must be an object with a 'kind' string");
    const std::string kind = j["kind"].get<std::string>();
    try {
        if (kind == "rect") {
            return Shape::rect(require_number(j, "x0", where), require_number(j, "y0", where),
                               require_number(j, "x1", where), require_number(j, "y1", where));
        }
        if (kind == "disk") {
            return Shape::disk(require_number(j, "cx", where), require_number(j, "cy", where),
                               require_number(j, "r", where));
        }
        if (kind == "segment") {
            return Shape::segment(require_number(j, "x0", where), require_number(j, "x1", where),
                                  require_number(j, "y", where), require_number(j, "thickness", where));
        }
        if (kind == "polygon") {
            if (!j.contains("points") || !j["points"].is_array())
                throw ParseError(where + ": polygon needs a 'points' array");
            std::vector<Vec2> pts;
            for (const auto& q : j["points"]) {
                if (!q.is_array() || q.size() != 2)
                    throw ParseError(where + ": polygon points must be [x,y] pairs");
                pts.push_back({q[0].get<double>(), q[1].get<double>()});
            }
            return Shape::polygon(std::move(pts));
        }
        if (kind == "halfplane_box") {
            if (!domain_position)
                throw ParseError(where + ": halfplane_box is only valid as a domain");
            return Shape::halfplane_box(require_number(j, "x0", where), require_number(j, "x1", where),
                                        require_number(j, "y1", where));
        }
    } catch (const std::invalid_argument& e) {
        throw ParseError(where + ": " + e.what());
    }
    throw ParseError(where + ": unknown shape kind '" + kind + "'");
}

inline nlohmann::ordered_json shape_to_json(const Shape& s) {
    nlohmann::ordered_json j;
    j["kind"] = s.kind_name();
    switch (s.kind) {
    case ShapeKind::Rect:
        j["x0"] = s.p0; j["y0"] = s.p1; j["x1"] = s.p2; j["y1"] = s.p3;
        break;
    case ShapeKind::Disk:
        j["cx"] = s.p0; j["cy"] = s.p1; j["r"] = s.p2;
        break;
    case ShapeKind::Segment:
        j["x0"] = s.p0; j["x1"] = s.p1; j["y"] = s.p2; j["thickness"] = s.p3;
        break;
    case ShapeKind::HalfplaneBox:
        j["x0"] = s.p0; j["x1"] = s.p1; j["y1"] = s.p2;
        break;
    case ShapeKind::Polygon: {
        nlohmann::ordered_json pts = nlohmann::ordered_json::array();
        for (const Vec2& p : s.points) pts.push_back({p.x, p.y});
        j["points"] = std::move(pts);
        break;
    }
    }
    return j;
}

} // namespace detail

/// Parse (without geometric validation) a scene from JSON text.
inline SceneSpec parse_scene(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("scene: ") + e.what());
    }
    if (!j.is_object()) throw ParseError("scene: top level must be an object");
    SceneSpec scene;
    if (j.contains("label")) {
        if (!j["label"].is_string()) throw ParseError("scene.label: must be a string");
        scene.label = j["label"].get<std::string>();
    }
    if (!j.contains("domain")) throw ParseError("scene.domain: missing");
    scene.domain = detail::parse_shape(j["domain"], "scene.domain", true);
    if (j["domain"].contains("holes")) {
        if (!j["domain"]["holes"].is_array()) throw ParseError("scene.domain.holes: must be an array");
        int k = 0;
        for (const auto& h : j["domain"]["holes"])
            scene.holes.push_back(detail::parse_shape(h, "scene.domain.holes[" + std::to_string(k++) + "]", false));
    }
    if (!j.contains("islands") || !j["islands"].is_array())
        throw ParseError("scene.islands: missing or not an array");
    int k = 0;
    for (const auto& is : j["islands"]) {
        IslandSpec spec;
        spec.shape = detail::parse_shape(is, "scene.islands[" + std::to_string(k) + "]", false);
        scene.islands.push_back(std::move(spec));
        ++k;
    }
    if (j.contains("collars")) {
        if (!j["collars"].is_array() || j["collars"].size() != scene.islands.size())
            throw ParseError("scene.collars: must be an array parallel to islands");
        for (size_t i = 0; i < scene.islands.size(); ++i) {
            if (j["collars"][i].is_null()) continue;
            scene.islands[i].collar =
                detail::parse_shape(j["collars"][i], "scene.collars[" + std::to_string(i) + "]", false);
        }
    }
    if (j.contains("inner_domain"))
        scene.inner_domain = detail::parse_shape(j["inner_domain"], "scene.inner_domain", false);
    if (j.contains("min_resolution")) {
        if (!j["min_resolution"].is_number() || j["min_resolution"].get<double>() <= 0.0)
            throw ParseError("scene.min_resolution: must be a positive number");
        scene.min_resolution = j["min_resolution"].get<double>();
    }
    return scene;
}

/// Canonical JSON form, used for hashing and provenance.
inline std::string scene_to_json(const SceneSpec& scene) {
    nlohmann::ordered_json j;
    j["label"] = scene.label;
    j["domain"] = detail::shape_to_json(scene.domain);
    if (!scene.holes.empty()) {
        nlohmann::ordered_json hs = nlohmann::ordered_json::array();
        for (const Shape& h : scene.holes) hs.push_back(detail::shape_to_json(h));
        j["domain"]["holes"] = std::move(hs);
    }
    j["islands"] = nlohmann::ordered_json::array();
    for (const IslandSpec& is : scene.islands) j["islands"].push_back(detail::shape_to_json(is.shape));
    bool any_collar = false;
    for (const IslandSpec& is : scene.islands) any_collar |= is.collar.has_value();
    if (any_collar) {
        nlohmann::ordered_json cs = nlohmann::ordered_json::array();
        for (const IslandSpec& is : scene.islands)
            cs.push_back(is.collar ? detail::shape_to_json(*is.collar) : nlohmann::ordered_json());
        j["collars"] = std::move(cs);
    }
    if (scene.inner_domain) j["inner_domain"] = detail::shape_to_json(*scene.inner_domain);
    j["min_resolution"] = scene.min_resolution;
    return j.dump();
}

// ---------------------------------------------------------------------------
// Grid domain
// ---------------------------------------------------------------------------

/// Node classes. Values >= 1 encode ISLAND(k) as k+1.
constexpr int32_t kExcluded = -2;
constexpr int32_t kOuterBoundary = -1;
constexpr int32_t kInterior = 0;

inline constexpr int32_t island_code(int k) { return k + 1; }
inline constexpr bool is_island(int32_t c) { return c >= 1; }
inline constexpr int island_index(int32_t c) { return c - 1; }
inline constexpr bool in_domain(int32_t c) { return c >= -1; }

/// Rasterized scene: a node lattice with per-node classification and the
/// implicit 4-neighbor adjacency. Immutable after construction.
struct GridDomain {
    int nx = 0, ny = 0;
    double x0 = 0.0, y0 = 0.0;
    double h = 0.0;          // lattice spacing = 1/resolution
    double resolution = 0.0; // cells per abstract unit
    std::vector<int32_t> cls;
    int n_islands = 0;
    SceneSpec scene;

    int idx(int i, int j) const { return j * nx + i; }
    Vec2 pos(int i, int j) const { return {x0 + i * h, y0 + j * h}; }
    int32_t at(int i, int j) const { return cls[idx(i, j)]; }

    size_t count(int32_t code) const {
        size_t n = 0;
        for (int32_t c : cls) n += (c == code);
        return n;
    }
};

namespace detail {

inline bool point_in_domain(const SceneSpec& scene, Vec2 p) {
    if (!scene.domain.contains(p)) return false;
    for (const Shape& h : scene.holes)
        if (h.contains(p)) return false;
    return true;
}

/// True if the step from an in-domain node at p to its out-of-domain
/// neighbor crosses a true boundary face. Only half-plane boxes have
/// insulating (truncation) faces; everything else is true boundary.
inline bool crossing_is_true_boundary(const SceneSpec& scene, Vec2 p, Vec2 q) {
    if (scene.domain.kind != ShapeKind::HalfplaneBox) return true;
    if (scene.domain.contains(q)) return true; // left through a hole rim
    return q.y < 0.0 && p.y >= 0.0;            // bottom face only
}

inline void check_island_connected(const GridDomain& g, int k) {
    const int32_t code = island_code(k);
    int start = -1;
    size_t total = 0;
    for (size_t n = 0; n < g.cls.size(); ++n) {
        if (g.cls[n] == code) {
            if (start < 0) start = int(n);
            ++total;
        }
    }
    if (total == 0) return;
    std::vector<uint8_t> seen(g.cls.size(), 0);
    std::queue<int> bfs;
    bfs.push(start);
    seen[start] = 1;
    size_t reached = 1;
    while (!bfs.empty()) {
        const int n = bfs.front();
        bfs.pop();
        const int i = n % g.nx, j = n / g.nx;
        const int di[4] = {1, -1, 0, 0}, dj[4] = {0, 0, 1, -1};
        for (int d = 0; d < 4; ++d) {
            const int ii = i + di[d], jj = j + dj[d];
            if (ii < 0 || jj < 0 || ii >= g.nx || jj >= g.ny) continue;
            const int m = g.idx(ii, jj);
            if (!seen[m] && g.cls[m] == code) {
                seen[m] = 1;
                bfs.push(m);
                ++reached;
            }
        }
    }
    if (reached != total)
        throw ResolutionError("island " + std::to_string(k) + " rasterizes to a disconnected node set; "
                              "increase the resolution");
}

} // namespace detail

/// Rasterize a scene at the given resolution (cells per abstract unit).
/// Node classification: ISLAND(k) iff the node lies in the closed island
/// shape k; OUTER_BOUNDARY iff an in-domain node has an out-of-domain
/// 4-neighbor across a true-boundary face; INTERIOR otherwise inside;
/// EXCLUDED outside.
inline GridDomain rasterize(const SceneSpec& scene, double resolution) {
    if (resolution < scene.min_resolution)
        throw ResolutionError("resolution " + std::to_string(resolution) + " below scene minimum " +
                              std::to_string(scene.min_resolution));
    GridDomain g;
    g.scene = scene;
    g.resolution = resolution;
    g.h = 1.0 / resolution;
    const BBox bb = scene.domain.bbox();
    g.x0 = bb.x0;
    g.y0 = bb.y0;
    g.nx = int(std::floor((bb.x1 - bb.x0) * resolution + 0.5)) + 1;
    g.ny = int(std::floor((bb.y1 - bb.y0) * resolution + 0.5)) + 1;
    g.n_islands = int(scene.islands.size());
    g.cls.assign(size_t(g.nx) * size_t(g.ny), kExcluded);

    std::vector<BBox> island_bb;
    island_bb.reserve(scene.islands.size());
    for (const IslandSpec& is : scene.islands) island_bb.push_back(is.shape.bbox());

    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            const Vec2 p = g.pos(i, j);
            if (!detail::point_in_domain(scene, p)) continue;
            int owner = -1;
            for (size_t k = 0; k < scene.islands.size(); ++k) {
                const BBox& ib = island_bb[k];
                if (p.x < ib.x0 || p.x > ib.x1 || p.y < ib.y0 || p.y > ib.y1) continue;
                if (scene.islands[k].shape.contains(p)) {
                    if (owner >= 0)
                        throw ValidationError("islands " + std::to_string(owner) + " and " + std::to_string(k) +
                                              " overlap at resolution " + std::to_string(resolution));
                    owner = int(k);
                }
            }
            if (owner >= 0) {
                g.cls[g.idx(i, j)] = island_code(owner);
                continue;
            }
            bool boundary = false;
            const int di[4] = {1, -1, 0, 0}, dj[4] = {0, 0, 1, -1};
            for (int d = 0; d < 4 && !boundary; ++d) {
                const Vec2 q{p.x + di[d] * g.h, p.y + dj[d] * g.h};
                const bool q_in = (i + di[d] >= 0 && i + di[d] < g.nx && j + dj[d] >= 0 && j + dj[d] < g.ny) &&
                                  detail::point_in_domain(scene, q);
                if (!q_in && detail::crossing_is_true_boundary(scene, p, q)) boundary = true;
            }
            g.cls[g.idx(i, j)] = boundary ? kOuterBoundary : kInterior;
        }
    }

    // Discrete sanity: island size, 4-connectivity, island separation, and
    // no island touching the outer boundary.
    std::vector<size_t> sizes(scene.islands.size(), 0);
    for (int32_t c : g.cls)
        if (is_island(c)) ++sizes[island_index(c)];
    for (size_t k = 0; k < sizes.size(); ++k) {
        if (sizes[k] < 4)
            throw ResolutionError("island " + std::to_string(k) + " rasterizes to " + std::to_string(sizes[k]) +
                                  " nodes (<4); increase the resolution");
        detail::check_island_connected(g, int(k));
    }
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            const int32_t c = g.at(i, j);
            if (!is_island(c)) continue;
            const int di[4] = {1, -1, 0, 0}, dj[4] = {0, 0, 1, -1};
            for (int d = 0; d < 4; ++d) {
                const int ii = i + di[d], jj = j + dj[d];
                if (ii < 0 || jj < 0 || ii >= g.nx || jj >= g.ny) continue;
                const int32_t c2 = g.at(ii, jj);
                if (is_island(c2) && c2 != c)
                    throw ResolutionError("islands " + std::to_string(island_index(c)) + " and " +
                                          std::to_string(island_index(c2)) +
                                          " become 4-adjacent; increase the resolution");
                if (c2 == kOuterBoundary)
                    throw ValidationError("island " + std::to_string(island_index(c)) +
                                          " touches the outer boundary");
            }
        }
    }
    return g;
}

// ---------------------------------------------------------------------------
// Scene validation
// ---------------------------------------------------------------------------

/// Geometric validation at the scene's stated minimum resolution: islands
/// pairwise separated by >= 2 cells, strictly inside the domain, and collars
/// containing their islands while avoiding all other islands. Islands too
/// small to rasterize at the minimum resolution are deferred to the
/// rasterize-time checks at the working resolution.
inline void validate_scene(const SceneSpec& scene) {
    if (scene.islands.empty()) return; // island-free scenes are fine for plain width runs
    const double res = scene.min_resolution;
    const double h = 1.0 / res;
    const BBox bb = scene.domain.bbox();
    const int nx = int(std::floor((bb.x1 - bb.x0) * res + 0.5)) + 1;
    const int ny = int(std::floor((bb.y1 - bb.y0) * res + 0.5)) + 1;
    auto node = [&](int i, int j) { return Vec2{bb.x0 + i * h, bb.y0 + j * h}; };

    std::vector<BBox> island_bb;
    for (const IslandSpec& is : scene.islands) island_bb.push_back(is.shape.bbox());
    auto owner_of = [&](Vec2 p) {
        int owner = -1;
        for (size_t k = 0; k < scene.islands.size(); ++k) {
            const BBox& ib = island_bb[k];
            if (p.x < ib.x0 || p.x > ib.x1 || p.y < ib.y0 || p.y > ib.y1) continue;
            if (scene.islands[k].shape.contains(p)) {
                if (owner >= 0)
                    throw ValidationError("islands " + std::to_string(owner) + " and " + std::to_string(k) +
                                          " have overlapping closures");
                owner = int(k);
            }
        }
        return owner;
    };

    std::vector<int32_t> owner(size_t(nx) * size_t(ny), -1);
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i)
            owner[size_t(j) * nx + i] = int32_t(owner_of(node(i, j)));

    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            const int32_t k = owner[size_t(j) * nx + i];
            if (k < 0) continue;
            const Vec2 p = node(i, j);
            if (!detail::point_in_domain(scene, p))
                throw ValidationError("island " + std::to_string(k) + " is not inside the domain");
            // Strictly inside: all 4-neighbors stay in the domain.
            const int di4[4] = {1, -1, 0, 0}, dj4[4] = {0, 0, 1, -1};
            for (int d = 0; d < 4; ++d) {
                const Vec2 q{p.x + di4[d] * h, p.y + dj4[d] * h};
                if (!detail::point_in_domain(scene, q))
                    throw ValidationError("island " + std::to_string(k) +
                                          " is not strictly inside the domain interior");
            }
            // Pairwise gap >= 2 cells (Chebyshev distance > 2).
            for (int dj = 0; dj <= 2; ++dj) {
                for (int di = (dj == 0 ? 1 : -2); di <= 2; ++di) {
                    const int ii = i + di, jj = j + dj;
                    if (ii < 0 || jj < 0 || ii >= nx || jj >= ny) continue;
                    const int32_t k2 = owner[size_t(jj) * nx + ii];
                    if (k2 >= 0 && k2 != k)
                        throw ValidationError("islands " + std::to_string(std::min(k, k2)) + " and " +
                                              std::to_string(std::max(k, k2)) +
                                              " are closer than 2 cells at the minimum resolution");
                }
            }
        }
    }

    // Collar checks: the collar node set must cover the island and its
    // 1-ring (strict containment) and stay clear of all other islands.
    for (size_t k = 0; k < scene.islands.size(); ++k) {
        if (!scene.islands[k].collar) continue;
        const Shape& collar = *scene.islands[k].collar;
        bool has_ring = false;
        for (int j = 0; j < ny; ++j) {
            for (int i = 0; i < nx; ++i) {
                const Vec2 p = node(i, j);
                const int32_t c = owner[size_t(j) * nx + i];
                const bool in_collar = collar.contains(p);
                if (c == int32_t(k) && !in_collar)
                    throw ValidationError("collar of island " + std::to_string(k) + " does not contain it");
                if (c >= 0 && c != int32_t(k) && in_collar)
                    throw ValidationError("collar of island " + std::to_string(k) + " intersects island " +
                                          std::to_string(c));
                if (c < 0 && in_collar && detail::point_in_domain(scene, p)) has_ring = true;
            }
        }
        if (!has_ring)
            throw ValidationError("collar of island " + std::to_string(k) +
                                  " must strictly contain the island (no collar ring of nodes)");
    }
}

/// Parse and validate a scene description.
inline SceneSpec build_scene(const std::string& text) {
    SceneSpec scene = parse_scene(text);
    validate_scene(scene);
    return scene;
}

/// Top = -chi(domain) + total island boundary components. Every supported
/// island is simply connected, and chi = 1 - #holes for a planar domain.
inline int topological_complexity(const SceneSpec& scene) {
    const int chi = 1 - int(scene.holes.size());
    return -chi + int(scene.islands.size());
}

// ---------------------------------------------------------------------------
// Node-set selectors
// ---------------------------------------------------------------------------

/// Resolve a node-set selector: "outer", "outer:left|right|bottom|top",
/// "islands", "island:K", or a '+'-joined union of these. Returns sorted
/// node indices.
inline std::vector<int> select_nodes(const GridDomain& g, const std::string& selector) {
    std::vector<int> out;
    if (selector.find('+') != std::string::npos) {
        size_t start = 0;
        while (start <= selector.size()) {
            const size_t sep = selector.find('+', start);
            const std::string atom = selector.substr(start, sep == std::string::npos ? sep : sep - start);
            if (atom.empty()) throw ValidationError("empty selector component in '" + selector + "'");
            const std::vector<int> part = select_nodes(g, atom);
            out.insert(out.end(), part.begin(), part.end());
            if (sep == std::string::npos) break;
            start = sep + 1;
        }
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }
    auto face_keep = [&](const std::string& face, int i, int j) {
        if (face == "left") return i == 0 || !in_domain(g.at(i - 1, j));
        if (face == "right") return i == g.nx - 1 || !in_domain(g.at(i + 1, j));
        if (face == "bottom") return j == 0 || !in_domain(g.at(i, j - 1));
        if (face == "top") return j == g.ny - 1 || !in_domain(g.at(i, j + 1));
        throw ValidationError("unknown boundary face '" + face + "'");
    };
    if (selector == "outer" || selector.rfind("outer:", 0) == 0) {
        const std::string face = selector.size() > 6 ? selector.substr(6) : "";
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i)
                if (g.at(i, j) == kOuterBoundary && (face.empty() || face_keep(face, i, j)))
                    out.push_back(g.idx(i, j));
        return out;
    }
    if (selector == "islands") {
        for (size_t n = 0; n < g.cls.size(); ++n)
            if (is_island(g.cls[n])) out.push_back(int(n));
        return out;
    }
    if (selector.rfind("island:", 0) == 0) {
        const int k = std::stoi(selector.substr(7));
        if (k < 0 || k >= g.n_islands)
            throw ValidationError("island index " + std::to_string(k) + " out of range");
        const int32_t code = island_code(k);
        for (size_t n = 0; n < g.cls.size(); ++n)
            if (g.cls[n] == code) out.push_back(int(n));
        return out;
    }
    throw ValidationError("unknown node-set selector '" + selector + "'");
}

} // namespace qamod

#endif
