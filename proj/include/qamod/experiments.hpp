#ifndef QAMOD_EXPERIMENTS_HPP
#define QAMOD_EXPERIMENTS_HPP

#include "moduli.hpp"

namespace qamod {

// ---------------------------------------------------------------------------
// Half-plane segment families
// ---------------------------------------------------------------------------

/// A stack of horizontal segment islands [0,W] x {1/a_i} over a grounded
/// floor, truncated to a box with insulating sides and top.
struct HalfplaneFamily {
    std::string label = "halfplane";
    std::vector<double> a;  // strictly decreasing, positive
    double W = 32.0;        // segment length
    double pad = 8.0;       // truncation margin beyond the segments
    double thickness = 0.0; // 0 = one cell at the working resolution
    double min_aspect = 4.0;

    double max_height() const { return 1.0 / a.back(); }
};

struct HalfplanePrediction {
    double X = 0.0, Y = 0.0, Z = 0.0;
    double ratio = 0.0; // Y^2 / (X Z)
    std::vector<double> b;
};

inline void validate_family(const HalfplaneFamily& fam) {
    if (fam.a.empty()) throw ValidationError("halfplane family: empty height list");
    for (size_t i = 0; i < fam.a.size(); ++i) {
        if (!(fam.a[i] > 0.0)) throw ValidationError("halfplane family: a must be positive");
        if (i > 0 && !(fam.a[i] < fam.a[i - 1]))
            throw ValidationError("halfplane family: a must be strictly decreasing");
    }
    if (!(fam.W > 0.0) || !(fam.pad > 0.0)) throw ValidationError("halfplane family: W and pad must be positive");
    if (fam.W < fam.min_aspect * fam.max_height())
        throw ValidationError("halfplane family: W must be at least " + std::to_string(fam.min_aspect) +
                              " times the top height");
}

/// First-order predictions: X = W a_1, Y = W sum a_j, Z = W sum (b_i+b_{i+1})
/// with b_1 = a_1, b_{n+1} = 0 and interior b_i the reciprocal height gap.
/// Gaps use absolute height differences so all widths stay positive.
inline HalfplanePrediction halfplane_predicted(const HalfplaneFamily& fam) {
    validate_family(fam);
    const size_t n = fam.a.size();
    HalfplanePrediction p;
    p.b.resize(n);
    p.b[0] = fam.a[0];
    for (size_t i = 1; i < n; ++i)
        p.b[i] = 1.0 / std::abs(1.0 / fam.a[i] - 1.0 / fam.a[i - 1]);
    double sum_a = 0.0, sum_pairs = 0.0;
    for (double v : fam.a) sum_a += v;
    for (size_t i = 0; i < n; ++i) {
        const double next = (i + 1 < n) ? p.b[i + 1] : 0.0;
        sum_pairs += p.b[i] + next;
    }
    p.X = fam.W * fam.a[0];
    p.Y = fam.W * sum_a;
    p.Z = fam.W * sum_pairs;
    p.ratio = (p.Y * p.Y) / (p.X * p.Z);
    return p;
}

/// Truncated-box realization of the family. Only the floor is true
/// boundary; segments are one cell thick unless the family says otherwise.
inline SceneSpec halfplane_scene(const HalfplaneFamily& fam, double resolution) {
    validate_family(fam);
    SceneSpec scene;
    scene.label = fam.label;
    scene.domain = Shape::halfplane_box(-fam.pad, fam.W + fam.pad, fam.max_height() + fam.pad);
    const double t = fam.thickness > 0.0 ? fam.thickness : 1.0 / resolution;
    for (double ai : fam.a)
        scene.islands.push_back({Shape::segment(0.0, fam.W, 1.0 / ai, t), std::nullopt});
    scene.min_resolution = std::min(resolution, 16.0);
    return scene;
}

inline ModuliReport halfplane_measured(const HalfplaneFamily& fam, double resolution, double tol = 1e-10,
                                       int threads = 1, double in_regime_threshold = 10.0) {
    return qa_report(halfplane_scene(fam, resolution), resolution, tol, threads, in_regime_threshold);
}

// ---------------------------------------------------------------------------
// Ratio sweep
// ---------------------------------------------------------------------------

struct SweepRow {
    std::string label;
    int n = 0;
    double W = 0.0;
    double resolution = 0.0;
    double X = 0.0, Y = 0.0, Z = 0.0;
    double ratio = 0.0;
    double ratio_pred = 0.0;
    bool in_regime = false;
};

struct SweepTable {
    std::vector<SweepRow> rows;
    double max_ratio = 0.0; // over in-regime rows
};

inline SweepTable qa_ratio_sweep(const std::vector<HalfplaneFamily>& families, double resolution,
                                 double tol = 1e-10, int threads = 1, double in_regime_threshold = 10.0) {
    SweepTable table;
    table.rows.resize(families.size());
    std::vector<std::function<void()>> jobs;
    for (size_t k = 0; k < families.size(); ++k) {
        jobs.push_back([&, k] {
            const HalfplaneFamily& fam = families[k];
            const HalfplanePrediction pred = halfplane_predicted(fam);
            const ModuliReport m = halfplane_measured(fam, resolution, tol, 1, in_regime_threshold);
            SweepRow row;
            row.label = fam.label;
            row.n = int(fam.a.size());
            row.W = fam.W;
            row.resolution = resolution;
            row.X = m.X;
            row.Y = m.Y;
            row.Z = m.Z;
            row.ratio = m.ratio_qa();
            row.ratio_pred = pred.ratio;
            row.in_regime = m.in_regime();
            table.rows[k] = row;
        });
    }
    detail::parallel_run(jobs, threads);
    for (const SweepRow& r : table.rows)
        if (r.in_regime) table.max_ratio = std::max(table.max_ratio, r.ratio);
    return table;
}

inline std::string sweep_csv(const SweepTable& t) {
    std::string s = "label,n,W,resolution,X,Y,Z,ratio,ratio_pred,in_regime\n";
    for (const SweepRow& r : t.rows) {
        s += r.label + "," + std::to_string(r.n) + "," + fmt_cell(r.W) + "," + fmt_cell(r.resolution) + "," +
             fmt_cell(r.X) + "," + fmt_cell(r.Y) + "," + fmt_cell(r.Z) + "," + fmt_cell(r.ratio) + "," +
             fmt_cell(r.ratio_pred) + "," + (r.in_regime ? "true" : "false") + "\n";
    }
    return s;
}

// ---------------------------------------------------------------------------
// Convergence studies
// ---------------------------------------------------------------------------

struct ConvergenceRow {
    std::string quantity;
    std::vector<double> values;     // one per resolution
    std::vector<double> rel_diffs;  // successive relative differences
    double order = 0.0;             // observed order in the lattice spacing
    double extrapolated = 0.0;
};

struct ConvergenceTable {
    std::vector<double> resolutions;
    std::vector<ConvergenceRow> rows;
};

namespace detail {

inline ConvergenceRow extrapolate(const std::string& name, const std::vector<double>& vals, double rho) {
    ConvergenceRow row;
    row.quantity = name;
    row.values = vals;
    for (size_t k = 0; k + 1 < vals.size(); ++k)
        row.rel_diffs.push_back(std::abs(vals[k + 1] - vals[k]) / std::max(std::abs(vals[k + 1]), 1e-300));
    const size_t m = vals.size();
    const double d1 = vals[m - 2] - vals[m - 3];
    const double d2 = vals[m - 1] - vals[m - 2];
    if (d1 * d2 > 0.0 && std::abs(d2) < std::abs(d1)) {
        row.order = std::log(d1 / d2) / std::log(rho);
        row.extrapolated = vals[m - 1] + d2 * d2 / (d1 - d2);
    } else {
        // No clean power-law decay; report the finest value as the limit.
        row.order = std::numeric_limits<double>::quiet_NaN();
        row.extrapolated = vals[m - 1];
    }
    return row;
}

} // namespace detail

/// Run qa_report over a geometric ladder of resolutions and Richardson-
/// extrapolate X, Y, Z with the observed order.
inline ConvergenceTable convergence_study(const SceneSpec& scene, const std::vector<double>& resolutions,
                                          double tol = 1e-10, int threads = 1) {
    if (resolutions.size() < 3)
        throw ValidationError("convergence_study: need at least 3 resolutions");
    const double rho = resolutions[1] / resolutions[0];
    for (size_t k = 0; k + 1 < resolutions.size(); ++k) {
        const double r = resolutions[k + 1] / resolutions[k];
        if (std::abs(r - rho) > 1e-9 * rho)
            throw ValidationError("convergence_study: resolutions must form a geometric progression");
    }
    std::vector<ModuliReport> reports(resolutions.size());
    std::vector<std::function<void()>> jobs;
    for (size_t k = 0; k < resolutions.size(); ++k)
        jobs.push_back([&, k] { reports[k] = qa_report(scene, resolutions[k], tol, 1); });
    detail::parallel_run(jobs, threads);

    ConvergenceTable table;
    table.resolutions = resolutions;
    std::vector<double> xs, ys, zs;
    for (const ModuliReport& r : reports) {
        xs.push_back(r.X);
        ys.push_back(r.Y);
        zs.push_back(r.Z);
    }
    table.rows.push_back(detail::extrapolate("X", xs, rho));
    table.rows.push_back(detail::extrapolate("Y", ys, rho));
    table.rows.push_back(detail::extrapolate("Z", zs, rho));
    return table;
}

inline std::string convergence_json(const ConvergenceTable& t) {
    JsonWriter w;
    w.begin_object();
    w.kv("resolutions", t.resolutions);
    w.key("rows");
    w.begin_array();
    for (const ConvergenceRow& r : t.rows) {
        w.begin_object();
        w.kv("quantity", r.quantity);
        w.kv("values", r.values);
        w.kv("rel_diffs", r.rel_diffs);
        w.kv("order", r.order);
        w.kv("extrapolated", r.extrapolated);
        w.end_object();
    }
    w.end_array();
    w.end_object();
    return w.str();
}

} // namespace qamod

#endif
