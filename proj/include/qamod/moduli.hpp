#ifndef QAMOD_MODULI_HPP
#define QAMOD_MODULI_HPP

#include <atomic>
#include <functional>
#include <map>
#include <thread>

#include "circuit_laws.hpp"
#include "laplace.hpp"
#include "report_io.hpp"

namespace qamod {

/// Widths below this are treated as a disconnected configuration; the
/// corresponding modulus is reported as an infinite sentinel.
constexpr double kWidthFloor = 1e-12;

inline double modulus_of_width(double width) {
    return width > kWidthFloor ? 1.0 / width : kInf;
}

namespace detail {

/// Run jobs[0..n) on up to `threads` workers. Results are written by index,
/// so the outcome does not depend on scheduling.
inline void parallel_run(std::vector<std::function<void()>>& jobs, int threads) {
    if (threads <= 1 || jobs.size() <= 1) {
        for (auto& j : jobs) j();
        return;
    }
    std::atomic<size_t> next{0};
    auto worker = [&] {
        for (;;) {
            const size_t k = next.fetch_add(1);
            if (k >= jobs.size()) return;
            jobs[k]();
        }
    };
    std::vector<std::thread> pool;
    const int n = std::min<int>(threads, int(jobs.size()));
    pool.reserve(size_t(n));
    for (int t = 0; t < n; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
}

/// Batch of selector-pair solves with deduplication: equal node sets are
/// solved once (e.g. X and Y coincide for a single island).
class SolveBatch {
public:
    SolveBatch(const GridDomain& g, double tol) : grid_(g) { opts_.tol = tol; }

    int add(const std::string& source_sel, const std::string& sink_sel) {
        const std::vector<int> src = select_nodes(grid_, source_sel);
        const std::vector<int> snk = select_nodes(grid_, sink_sel);
        const std::string key = set_key(src) + "/" + set_key(snk);
        auto it = dedup_.find(key);
        if (it != dedup_.end()) {
            alias_.push_back(it->second);
            return int(alias_.size() - 1);
        }
        dedup_[key] = int(unique_.size());
        unique_.push_back({source_sel, sink_sel});
        alias_.push_back(int(unique_.size() - 1));
        return int(alias_.size() - 1);
    }

    void run(int threads) {
        fields_.resize(unique_.size());
        std::vector<std::function<void()>> jobs;
        for (size_t k = 0; k < unique_.size(); ++k)
            jobs.push_back([this, k] {
                fields_[k] = solve_between(grid_, unique_[k].first, unique_[k].second, opts_);
            });
        parallel_run(jobs, threads);
    }

    const PotentialField& field(int job) const { return fields_[size_t(alias_[size_t(job)])]; }

    int total_iterations() const {
        int n = 0;
        for (const PotentialField& f : fields_) n += f.iterations;
        return n;
    }

private:
    static std::string set_key(const std::vector<int>& nodes) {
        std::string bytes(reinterpret_cast<const char*>(nodes.data()), nodes.size() * sizeof(int));
        char hex[24];
        std::snprintf(hex, sizeof(hex), "%016llx:%zu", static_cast<unsigned long long>(fnv1a64(bytes)),
                      nodes.size());
        return hex;
    }

    const GridDomain& grid_;
    SolveOptions opts_;
    std::map<std::string, int> dedup_;
    std::vector<std::pair<std::string, std::string>> unique_;
    std::vector<int> alias_;
    std::vector<PotentialField> fields_;
};

inline std::string z_sink_selector(int island, int n_islands) {
    std::string sel = "outer";
    for (int k = 0; k < n_islands; ++k)
        if (k != island) sel += "+island:" + std::to_string(k);
    return sel;
}

} // namespace detail

// ---------------------------------------------------------------------------
// Annulus moduli (with radial splitting for extreme ratios)
// ---------------------------------------------------------------------------

struct AnnulusReport {
    double width = 0.0;
    double modulus = 0.0;
    std::string method = "direct"; // or "radial-split"
    int pieces = 1;
    double circle_fit_err = 0.0;
    int iterations = 0;
};

namespace detail {

inline bool as_circle(const Shape& s, Vec2& c, double& r, double& fit_err) {
    if (s.kind == ShapeKind::Disk) {
        c = {s.p0, s.p1};
        r = s.p2;
        fit_err = 0.0;
        return true;
    }
    if (s.kind == ShapeKind::Polygon) {
        fit_err = fit_circle(s.points, c, r);
        return fit_err < 0.01;
    }
    return false;
}

inline double annulus_piece_width(double ratio, double resolution, double tol, int& iterations) {
    SceneSpec scene;
    scene.label = "annulus-piece";
    scene.domain = Shape::disk(0.0, 0.0, 1.0);
    scene.islands.push_back({Shape::disk(0.0, 0.0, 1.0 / ratio), std::nullopt});
    scene.min_resolution = resolution;
    const GridDomain g = rasterize(scene, resolution);
    const PotentialField f = solve_between(g, "island:0", "outer", SolveOptions{tol});
    iterations += f.iterations;
    return f.energy;
}

} // namespace detail

/// Width/modulus of the annulus between an outer shape and an inner shape
/// strictly inside it. Coordinates are normalized so the outer shape has
/// unit size. Concentric circular nests too deep for the lattice are split
/// into equal-log concentric pieces, all conformally identical, so a single
/// sub-solve determines the total (the Series Law holds with equality for
/// concentric round annuli).
inline AnnulusReport annulus_modulus(const Shape& outer, const Shape& inner, double resolution,
                                     double tol = 1e-10) {
    AnnulusReport rep;
    Vec2 co{}, ci{};
    double ro = 0.0, ri = 0.0, fo = 0.0, fi = 0.0;
    const bool outer_circle = detail::as_circle(outer, co, ro, fo);
    const bool inner_circle = detail::as_circle(inner, ci, ri, fi);
    const bool concentric = outer_circle && inner_circle && dist(co, ci) <= 1e-9 * ro;
    rep.circle_fit_err = std::max(fo, fi);

    if (concentric) {
        const double ratio = ro / ri;
        if (!(ratio > 1.0)) throw ValidationError("annulus_modulus: inner shape does not fit in outer");
        const double cells = resolution / ratio; // island radius in cells after normalization
        if (cells < 24.0) {
            const int pieces = std::max(2, int(std::ceil(std::log(ratio) / std::log(8.0))));
            const double piece_ratio = std::pow(ratio, 1.0 / pieces);
            const double w = detail::annulus_piece_width(piece_ratio, resolution, tol, rep.iterations);
            rep.method = "radial-split";
            rep.pieces = pieces;
            rep.modulus = pieces * modulus_of_width(w);
            rep.width = 1.0 / rep.modulus;
            return rep;
        }
    }

    // Direct solve in normalized coordinates.
    const BBox bb = outer.bbox();
    const double scale = 2.0 / std::max(bb.x1 - bb.x0, bb.y1 - bb.y0);
    SceneSpec scene;
    scene.label = "annulus";
    scene.domain = outer.scaled(scale);
    scene.islands.push_back({inner.scaled(scale), std::nullopt});
    scene.min_resolution = resolution;
    const GridDomain g = rasterize(scene, resolution);
    const PotentialField f = solve_between(g, "island:0", "outer", SolveOptions{tol});
    rep.iterations += f.iterations;
    rep.width = f.energy;
    rep.modulus = modulus_of_width(f.energy);
    return rep;
}

// ---------------------------------------------------------------------------
// X, Y, Z moduli and the quasi-additivity report
// ---------------------------------------------------------------------------

struct ModuliReport {
    std::string label;
    int n_islands = 0;
    int top = 0;
    double X = 0.0;
    std::vector<double> Yj, Zj;
    double Y = 0.0, Z = 0.0;
    std::vector<double> eta_j; // collar ratios; empty unless every island has a collar
    std::optional<double> eta_min;
    double resolution = 0.0, tol = 0.0;
    int grid_nx = 0, grid_ny = 0;
    int iterations = 0;
    double in_regime_threshold = 10.0;

    // Derived quantities are recomputed from the stored numbers on demand.
    double ratio_qa() const { return (Y * Y) / (X * Z); }
    double xi() const { return Z / Y; }
    bool in_regime() const { return Y >= in_regime_threshold; }

    /// The elementary relations, allowed `slack` relative to the larger side.
    bool verdict_x_le_y(double slack = 0.01) const { return X <= Y + slack * std::max(X, Y); }
    bool verdict_y_le_z(double slack = 0.01) const { return Y <= Z + slack * std::max(Y, Z); }
    bool verdict_y_le_nx(double slack = 0.01) const {
        return Y <= n_islands * X + slack * std::max(Y, n_islands * X);
    }
    bool verdict_qa() const { return Y * Y <= 2.0 * X * Z; }
    bool all_verdicts(double slack = 0.01) const {
        return verdict_x_le_y(slack) && verdict_y_le_z(slack) && verdict_y_le_nx(slack) &&
               (!in_regime() || verdict_qa());
    }
};

/// One solve: source = all islands, sink = outer boundary.
inline double compute_X(const SceneSpec& scene, double resolution, double tol = 1e-10) {
    const GridDomain g = rasterize(scene, resolution);
    return extremal_width(g, "islands", "outer", SolveOptions{tol});
}

/// N solves: source = island j, sink = outer boundary, other islands free.
inline std::vector<double> compute_Y(const SceneSpec& scene, double resolution, double tol = 1e-10,
                                     int threads = 1) {
    const GridDomain g = rasterize(scene, resolution);
    detail::SolveBatch batch(g, tol);
    for (int j = 0; j < g.n_islands; ++j) batch.add("island:" + std::to_string(j), "outer");
    batch.run(threads);
    std::vector<double> out(size_t(g.n_islands));
    for (int j = 0; j < g.n_islands; ++j) out[size_t(j)] = batch.field(j).energy;
    return out;
}

/// N solves: source = island j, sink = outer boundary plus all other islands.
inline std::vector<double> compute_Z(const SceneSpec& scene, double resolution, double tol = 1e-10,
                                     int threads = 1) {
    const GridDomain g = rasterize(scene, resolution);
    detail::SolveBatch batch(g, tol);
    for (int j = 0; j < g.n_islands; ++j)
        batch.add("island:" + std::to_string(j), detail::z_sink_selector(j, g.n_islands));
    batch.run(threads);
    std::vector<double> out(size_t(g.n_islands));
    for (int j = 0; j < g.n_islands; ++j) out[size_t(j)] = batch.field(j).energy;
    return out;
}

/// The full 1 + N + N solve schedule with verdicts.
inline ModuliReport qa_report(const SceneSpec& scene, double resolution, double tol = 1e-10,
                              int threads = 1, double in_regime_threshold = 10.0) {
    if (scene.islands.empty()) throw ValidationError("qa_report: scene needs at least one island");
    const GridDomain g = rasterize(scene, resolution);
    ModuliReport r;
    r.label = scene.label;
    r.n_islands = g.n_islands;
    r.top = topological_complexity(scene);
    r.resolution = resolution;
    r.tol = tol;
    r.grid_nx = g.nx;
    r.grid_ny = g.ny;
    r.in_regime_threshold = in_regime_threshold;

    detail::SolveBatch batch(g, tol);
    const int job_x = batch.add("islands", "outer");
    std::vector<int> jobs_y, jobs_z;
    for (int j = 0; j < g.n_islands; ++j) {
        jobs_y.push_back(batch.add("island:" + std::to_string(j), "outer"));
        jobs_z.push_back(batch.add("island:" + std::to_string(j), detail::z_sink_selector(j, g.n_islands)));
    }
    batch.run(threads);

    r.X = batch.field(job_x).energy;
    for (int j = 0; j < g.n_islands; ++j) {
        r.Yj.push_back(batch.field(jobs_y[size_t(j)]).energy);
        r.Zj.push_back(batch.field(jobs_z[size_t(j)]).energy);
    }
    for (double v : r.Yj) r.Y += v;
    for (double v : r.Zj) r.Z += v;
    r.iterations = batch.total_iterations();

    bool all_collared = true;
    for (const IslandSpec& is : scene.islands) all_collared &= is.collar.has_value();
    if (all_collared) {
        double eta_min = kInf;
        for (size_t k = 0; k < scene.islands.size(); ++k) {
            const AnnulusReport ann =
                annulus_modulus(*scene.islands[k].collar, scene.islands[k].shape, resolution, tol);
            const double eta = ann.modulus / modulus_of_width(r.Yj[k]);
            r.eta_j.push_back(eta);
            eta_min = std::min(eta_min, eta);
            r.iterations += ann.iterations;
        }
        r.eta_min = eta_min;
    }
    return r;
}

inline std::string moduli_report_json(const ModuliReport& r) {
    JsonWriter w;
    w.begin_object();
    w.kv("label", r.label);
    w.kv("n_islands", r.n_islands);
    w.kv("top", r.top);
    w.kv("X", r.X);
    w.kv("Y", r.Y);
    w.kv("Z", r.Z);
    w.kv("Y_j", r.Yj);
    w.kv("Z_j", r.Zj);
    w.kv("ratio_qa", r.ratio_qa());
    w.kv("xi", r.xi());
    if (r.eta_min) {
        w.kv("eta_j", r.eta_j);
        w.kv("eta_min", *r.eta_min);
    }
    w.kv("in_regime", r.in_regime());
    w.kv("in_regime_threshold", r.in_regime_threshold);
    w.key("verdicts");
    w.begin_object();
    w.kv("x_le_y", r.verdict_x_le_y());
    w.kv("y_le_z", r.verdict_y_le_z());
    w.kv("y_le_nx", r.verdict_y_le_nx());
    w.kv("qa", r.verdict_qa());
    w.end_object();
    w.key("grid");
    w.begin_object();
    w.kv("resolution", r.resolution);
    w.kv("tol", r.tol);
    w.kv("nx", r.grid_nx);
    w.kv("ny", r.grid_ny);
    w.kv("iterations", r.iterations);
    w.end_object();
    w.end_object();
    return w.str();
}

/// One row per island plus a summary row.
inline std::string moduli_report_csv(const ModuliReport& r) {
    std::string s = "label,row,Y_j,Z_j,X,Y,Z,ratio_qa,xi,in_regime\n";
    for (int j = 0; j < r.n_islands; ++j) {
        s += r.label + ",island:" + std::to_string(j) + "," + fmt_cell(r.Yj[size_t(j)]) + "," +
             fmt_cell(r.Zj[size_t(j)]) + ",,,,,,\n";
    }
    s += r.label + ",summary,,," + fmt_cell(r.X) + "," + fmt_cell(r.Y) + "," + fmt_cell(r.Z) + "," +
         fmt_cell(r.ratio_qa()) + "," + fmt_cell(r.xi()) + "," + (r.in_regime() ? "true" : "false") + "\n";
    return s;
}

// ---------------------------------------------------------------------------
// Collar check
// ---------------------------------------------------------------------------

struct CollarReport {
    std::string label;
    int n_islands = 0;
    std::vector<double> eta_j;
    std::vector<double> mod_collar_j;   // mod(A'_j \ A_j)
    std::vector<double> mod_boundary_j; // mod(S, A_j) = 1/Y_j
    double eta_min = 0.0;
    double xi_bound = 0.0;   // 1/eta_min
    double xi_measured = 0.0; // Z/Y
    double Y = 0.0, Z = 0.0;
    double resolution = 0.0, tol = 0.0;
    int iterations = 0;
};

/// Per-island collar ratios eta_j = mod(A'_j \ A_j) / mod(S, A_j). Collared
/// archipelagos are (1/eta_min)-separated; the measured xi = Z/Y is reported
/// alongside the bound.
inline CollarReport collar_check(const SceneSpec& scene, double resolution, double tol = 1e-10,
                                 int threads = 1) {
    for (size_t k = 0; k < scene.islands.size(); ++k)
        if (!scene.islands[k].collar)
            throw ValidationError("collar_check: island " + std::to_string(k) + " has no collar");

    const ModuliReport qa = qa_report(scene, resolution, tol, threads);
    CollarReport r;
    r.label = scene.label;
    r.n_islands = qa.n_islands;
    r.Y = qa.Y;
    r.Z = qa.Z;
    r.xi_measured = qa.xi();
    r.resolution = resolution;
    r.tol = tol;
    r.iterations = qa.iterations;

    r.eta_j = qa.eta_j;
    r.eta_min = *qa.eta_min;
    for (size_t k = 0; k < scene.islands.size(); ++k) {
        const double mod_boundary = modulus_of_width(qa.Yj[k]);
        r.mod_boundary_j.push_back(mod_boundary);
        r.mod_collar_j.push_back(qa.eta_j[k] * mod_boundary);
    }
    r.xi_bound = 1.0 / r.eta_min;
    return r;
}

inline std::string collar_report_json(const CollarReport& r) {
    JsonWriter w;
    w.begin_object();
    w.kv("label", r.label);
    w.kv("n_islands", r.n_islands);
    w.kv("eta_j", r.eta_j);
    w.kv("mod_collar_j", r.mod_collar_j);
    w.kv("mod_boundary_j", r.mod_boundary_j);
    w.kv("eta_min", r.eta_min);
    w.kv("xi_bound", r.xi_bound);
    w.kv("xi_measured", r.xi_measured);
    w.kv("Y", r.Y);
    w.kv("Z", r.Z);
    w.key("grid");
    w.begin_object();
    w.kv("resolution", r.resolution);
    w.kv("tol", r.tol);
    w.kv("iterations", r.iterations);
    w.end_object();
    w.end_object();
    return w.str();
}

// ---------------------------------------------------------------------------
// Groetzsch / series-law check
// ---------------------------------------------------------------------------

struct GroetzschReport {
    std::string label;
    double lhs = 0.0;        // W(S, A)
    double w_outer = 0.0;    // W(S, B')
    double w_inner = 0.0;    // W(B', A)
    double rhs = 0.0;        // w_outer (+) w_inner
    bool verdict = false;    // lhs <= rhs within slack
    double slack = 0.01;
    double resolution = 0.0, tol = 0.0;
    int iterations = 0;
};

/// Series-law check on a nest S > B' > A: the width from A to the outer
/// boundary never exceeds the harmonic sum of the two half widths. The nest
/// is a one-island scene whose collar plays B'.
inline GroetzschReport groetzsch_check(const SceneSpec& scene, double resolution, double tol = 1e-10,
                                       double slack = 0.01) {
    if (scene.islands.size() != 1 || !scene.islands[0].collar)
        throw ValidationError("groetzsch_check: scene must have exactly one island with a collar");
    const Shape& island = scene.islands[0].shape;
    const Shape& middle = *scene.islands[0].collar;

    GroetzschReport r;
    r.label = scene.label;
    r.slack = slack;
    r.resolution = resolution;
    r.tol = tol;

    const GridDomain g = rasterize(scene, resolution);
    const PotentialField direct = solve_between(g, "island:0", "outer", SolveOptions{tol});
    r.lhs = direct.energy;
    r.iterations += direct.iterations;

    SceneSpec outer_scene;
    outer_scene.label = scene.label + ":outer-half";
    outer_scene.domain = scene.domain;
    outer_scene.holes = scene.holes;
    outer_scene.islands.push_back({middle, std::nullopt});
    outer_scene.min_resolution = resolution;
    const GridDomain g2 = rasterize(outer_scene, resolution);
    const PotentialField outer_half = solve_between(g2, "island:0", "outer", SolveOptions{tol});
    r.w_outer = outer_half.energy;
    r.iterations += outer_half.iterations;

    const AnnulusReport inner_half = annulus_modulus(middle, island, resolution, tol);
    r.w_inner = inner_half.width;
    r.iterations += inner_half.iterations;

    r.rhs = harmonic_sum(r.w_outer, r.w_inner);
    r.verdict = r.lhs <= r.rhs + slack * std::max(r.lhs, r.rhs);
    return r;
}

inline std::string groetzsch_report_json(const GroetzschReport& r) {
    JsonWriter w;
    w.begin_object();
    w.kv("label", r.label);
    w.kv("lhs", r.lhs);
    w.kv("w_outer", r.w_outer);
    w.kv("w_inner", r.w_inner);
    w.kv("rhs", r.rhs);
    w.kv("verdict", r.verdict);
    w.kv("slack", r.slack);
    w.key("grid");
    w.begin_object();
    w.kv("resolution", r.resolution);
    w.kv("tol", r.tol);
    w.kv("iterations", r.iterations);
    w.end_object();
    w.end_object();
    return w.str();
}

// ---------------------------------------------------------------------------
// Comparable-terms check
// ---------------------------------------------------------------------------

struct ComparableReport {
    std::string label;
    int n_islands = 0;
    double delta = 0.0;            // max_i mod(U \ D_i)
    double eta = 0.0;              // min_i mod(D'_i \ D_i) / delta
    std::vector<double> mod_nest_j;  // mod(D'_i \ D_i)
    std::vector<double> mod_plain_j; // mod(U \ D_i)
    double mod_uw = 0.0;           // mod(U \ W)
    double bound = 0.0;            // 2 delta / (eta N)
    bool hypothesis_met = false;
    bool regime_ok = false;        // delta below the configured threshold
    bool verdict = false;          // mod_uw < bound (asserted only in regime)
    double delta_threshold = 0.0;
    double resolution = 0.0, tol = 0.0;
    int iterations = 0;
};

/// Four-level nest check: U > W > D'_i > D_i with all per-island moduli
/// comparable. Reports the implied bound mod(U\W) < 2 delta / (eta N).
inline ComparableReport comparable_terms_check(const SceneSpec& scene, double resolution,
                                               double tol = 1e-10, int threads = 1,
                                               double delta_threshold = 1.0) {
    if (!scene.inner_domain)
        throw ValidationError("comparable_terms_check: scene has no inner_domain");
    for (size_t k = 0; k < scene.islands.size(); ++k)
        if (!scene.islands[k].collar)
            throw ValidationError("comparable_terms_check: island " + std::to_string(k) + " has no collar");

    ComparableReport r;
    r.label = scene.label;
    r.n_islands = int(scene.islands.size());
    r.delta_threshold = delta_threshold;
    r.resolution = resolution;
    r.tol = tol;

    // mod(U \ D_i): island i against the outer boundary, other islands free.
    const GridDomain g = rasterize(scene, resolution);
    detail::SolveBatch batch(g, tol);
    for (int j = 0; j < g.n_islands; ++j) batch.add("island:" + std::to_string(j), "outer");
    batch.run(threads);
    for (int j = 0; j < g.n_islands; ++j)
        r.mod_plain_j.push_back(modulus_of_width(batch.field(j).energy));
    r.iterations += batch.total_iterations();

    for (size_t k = 0; k < scene.islands.size(); ++k) {
        const AnnulusReport ann =
            annulus_modulus(*scene.islands[k].collar, scene.islands[k].shape, resolution, tol);
        r.mod_nest_j.push_back(ann.modulus);
        r.iterations += ann.iterations;
    }

    SceneSpec uw_scene;
    uw_scene.label = scene.label + ":inner-domain";
    uw_scene.domain = scene.domain;
    uw_scene.holes = scene.holes;
    uw_scene.islands.push_back({*scene.inner_domain, std::nullopt});
    uw_scene.min_resolution = resolution;
    const GridDomain g2 = rasterize(uw_scene, resolution);
    const PotentialField uw = solve_between(g2, "island:0", "outer", SolveOptions{tol});
    r.mod_uw = modulus_of_width(uw.energy);
    r.iterations += uw.iterations;

    r.delta = 0.0;
    for (double m : r.mod_plain_j) r.delta = std::max(r.delta, m);
    double eta = kInf;
    for (int j = 0; j < r.n_islands; ++j) eta = std::min(eta, r.mod_nest_j[size_t(j)] / r.delta);
    r.eta = eta;

    r.hypothesis_met = r.eta > 0.0 && std::isfinite(r.eta);
    for (int j = 0; j < r.n_islands; ++j)
        if (r.mod_nest_j[size_t(j)] > r.mod_plain_j[size_t(j)]) r.hypothesis_met = false;
    r.regime_ok = r.delta <= delta_threshold;
    r.bound = 2.0 * r.delta / (r.eta * r.n_islands);
    r.verdict = r.hypothesis_met && r.mod_uw < r.bound;
    return r;
}

inline std::string comparable_report_json(const ComparableReport& r) {
    JsonWriter w;
    w.begin_object();
    w.kv("label", r.label);
    w.kv("n_islands", r.n_islands);
    w.kv("delta", r.delta);
    w.kv("eta", r.eta);
    w.kv("mod_nest_j", r.mod_nest_j);
    w.kv("mod_plain_j", r.mod_plain_j);
    w.kv("mod_inner_domain", r.mod_uw);
    w.kv("bound", r.bound);
    w.kv("hypothesis_met", r.hypothesis_met);
    w.kv("regime_ok", r.regime_ok);
    w.kv("delta_threshold", r.delta_threshold);
    w.kv("verdict", r.verdict);
    w.key("grid");
    w.begin_object();
    w.kv("resolution", r.resolution);
    w.kv("tol", r.tol);
    w.kv("iterations", r.iterations);
    w.end_object();
    w.end_object();
    return w.str();
}

} // namespace qamod

#endif
