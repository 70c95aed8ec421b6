#ifndef QAMOD_COVERING_HPP
#define QAMOD_COVERING_HPP

#include <complex>
#include <numbers>

#include "moduli.hpp"

namespace qamod {

using cplx = std::complex<double>;

struct PreconditionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct TracingError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Complex polynomials (ascending coefficients)
// ---------------------------------------------------------------------------

namespace poly {

using Poly = std::vector<cplx>;

inline cplx eval(const Poly& a, cplx x) {
    cplx v = 0.0;
    for (size_t k = a.size(); k-- > 0;) v = v * x + a[k];
    return v;
}

inline Poly mul(const Poly& a, const Poly& b) {
    Poly c(a.size() + b.size() - 1, cplx(0.0));
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
    return c;
}

inline Poly deriv(const Poly& a) {
    if (a.size() <= 1) return {cplx(0.0)};
    Poly d(a.size() - 1);
    for (size_t k = 1; k < a.size(); ++k) d[k - 1] = double(k) * a[k];
    return d;
}

/// One Laguerre iteration sequence from the given start.
inline cplx laguerre(const Poly& a, cplx x) {
    static const double frac[9] = {0.0, 0.5, 0.25, 0.75, 0.13, 0.38, 0.62, 0.88, 1.0};
    const int m = int(a.size()) - 1;
    for (int iter = 1; iter <= 80; ++iter) {
        cplx b = a[size_t(m)], d = 0.0, f = 0.0;
        double err = std::abs(b);
        const double ax = std::abs(x);
        for (int j = m - 1; j >= 0; --j) {
            f = x * f + d;
            d = x * d + b;
            b = x * b + a[size_t(j)];
            err = std::abs(b) + ax * err;
        }
        err *= 1e-15;
        if (std::abs(b) <= err) return x;
        const cplx g = d / b;
        const cplx g2 = g * g;
        const cplx h = g2 - 2.0 * f / b;
        const cplx sq = std::sqrt(double(m - 1) * (double(m) * h - g2));
        cplx gp = g + sq;
        const cplx gm = g - sq;
        if (std::abs(gp) < std::abs(gm)) gp = gm;
        const cplx dx = std::max(std::abs(gp), std::abs(gm)) > 0.0
                            ? double(m) / gp
                            : std::polar(1.0 + ax, double(iter));
        const cplx x1 = x - dx;
        if (x == x1) return x;
        if (iter % 10)
            x = x1;
        else
            x = x - frac[iter / 10] * dx;
    }
    throw TracingError("laguerre: root iteration did not converge");
}

/// All roots via Laguerre with deflation, polished on the original
/// polynomial, sorted lexicographically for determinism.
inline std::vector<cplx> roots(Poly a) {
    while (a.size() > 1 && std::abs(a.back()) < 1e-300) a.pop_back();
    const int m = int(a.size()) - 1;
    if (m < 1) return {};
    std::vector<cplx> out;
    Poly ad = a;
    for (int j = m; j >= 1; --j) {
        const cplx x = laguerre(ad, cplx(0.0));
        out.push_back(x);
        auto q = Poly(static_cast<size_t>(j));
        q[size_t(j - 1)] = ad[size_t(j)];
        for (int k = j - 2; k >= 0; --k) q[size_t(k)] = ad[size_t(k + 1)] + x * q[size_t(k + 1)];
        ad = q;
    }
    for (cplx& r : out) r = laguerre(a, r);
    std::sort(out.begin(), out.end(), [](cplx p, cplx q) {
        return p.real() != q.real() ? p.real() < q.real() : p.imag() < q.imag();
    });
    return out;
}

} // namespace poly

// ---------------------------------------------------------------------------
// Covering maps of the unit disk
// ---------------------------------------------------------------------------

/// A proper degree-D self-map of the unit disk: either a pure power map
/// z -> z^D or a finite Blaschke product with the listed zeros.
struct CoveringMap {
    enum class Kind { Power, Blaschke };
    Kind kind = Kind::Power;
    int D = 2;
    std::vector<cplx> zeros;

    static CoveringMap power(int degree) {
        if (degree < 1) throw std::invalid_argument("covering map degree must be >= 1");
        CoveringMap m;
        m.kind = Kind::Power;
        m.D = degree;
        return m;
    }

    static CoveringMap blaschke(std::vector<cplx> zs) {
        if (zs.empty()) throw std::invalid_argument("blaschke: needs at least one zero");
        for (cplx z : zs)
            if (std::abs(z) >= 1.0) throw std::invalid_argument("blaschke: zeros must lie in the open disk");
        CoveringMap m;
        m.kind = Kind::Blaschke;
        m.D = int(zs.size());
        m.zeros = std::move(zs);
        return m;
    }

    cplx eval(cplx z) const {
        if (kind == Kind::Power) {
            cplx v = 1.0;
            for (int k = 0; k < D; ++k) v *= z;
            return v;
        }
        cplx v = 1.0;
        for (cplx a : zeros) v *= (z - a) / (1.0 - std::conj(a) * z);
        return v;
    }

    poly::Poly numerator() const {
        poly::Poly n{cplx(1.0)};
        if (kind == Kind::Power) {
            n.assign(size_t(D) + 1, cplx(0.0));
            n[size_t(D)] = 1.0;
            return n;
        }
        for (cplx a : zeros) n = poly::mul(n, poly::Poly{-a, cplx(1.0)});
        return n;
    }

    poly::Poly denominator() const {
        poly::Poly d{cplx(1.0)};
        if (kind == Kind::Power) return d;
        for (cplx a : zeros) d = poly::mul(d, poly::Poly{cplx(1.0), -std::conj(a)});
        return d;
    }

    /// Critical points inside the closed unit disk.
    std::vector<cplx> critical_points() const {
        if (kind == Kind::Power) return D > 1 ? std::vector<cplx>{cplx(0.0)} : std::vector<cplx>{};
        const poly::Poly n = numerator(), d = denominator();
        const poly::Poly c_all = [&] {
            poly::Poly a = poly::mul(poly::deriv(n), d);
            const poly::Poly b = poly::mul(n, poly::deriv(d));
            if (a.size() < b.size()) a.resize(b.size(), cplx(0.0));
            for (size_t k = 0; k < b.size(); ++k) a[k] -= b[k];
            return a;
        }();
        std::vector<cplx> out;
        for (cplx r : poly::roots(c_all))
            if (std::abs(r) <= 1.0 + 1e-12) out.push_back(r);
        return out;
    }

    std::vector<cplx> critical_values() const {
        std::vector<cplx> out;
        for (cplx c : critical_points()) out.push_back(eval(c));
        return out;
    }

    /// All D preimages of w (|w| < 1), counted with multiplicity.
    std::vector<cplx> preimages(cplx w) const {
        if (kind == Kind::Power) {
            const double rho = std::pow(std::abs(w), 1.0 / D);
            const double phi = std::arg(w);
            std::vector<cplx> out;
            for (int k = 0; k < D; ++k)
                out.push_back(std::polar(rho, (phi + 2.0 * std::numbers::pi * k) / D));
            return out;
        }
        poly::Poly p = numerator();
        const poly::Poly d = denominator();
        if (p.size() < d.size()) p.resize(d.size(), cplx(0.0));
        for (size_t k = 0; k < d.size(); ++k) p[k] -= w * d[k];
        return poly::roots(p);
    }
};

// ---------------------------------------------------------------------------
// Boundary sampling and preimage tracing
// ---------------------------------------------------------------------------

namespace detail {

inline std::vector<cplx> boundary_points(const Shape& s, int samples) {
    constexpr double tau = 2.0 * std::numbers::pi;
    std::vector<cplx> out;
    out.reserve(size_t(samples));
    switch (s.kind) {
    case ShapeKind::Disk:
        for (int t = 0; t < samples; ++t)
            out.push_back(cplx(s.p0, s.p1) + std::polar(s.p2, tau * t / samples));
        return out;
    case ShapeKind::Rect:
    case ShapeKind::Segment:
    case ShapeKind::Polygon: {
        std::vector<Vec2> loop;
        if (s.kind == ShapeKind::Polygon) {
            loop = s.points;
        } else {
            const BBox b = s.bbox();
            loop = {{b.x0, b.y0}, {b.x1, b.y0}, {b.x1, b.y1}, {b.x0, b.y1}};
        }
        std::vector<double> cum(loop.size() + 1, 0.0);
        for (size_t k = 0; k < loop.size(); ++k)
            cum[k + 1] = cum[k] + dist(loop[k], loop[(k + 1) % loop.size()]);
        const double per = cum.back();
        size_t k = 0;
        for (int t = 0; t < samples; ++t) {
            const double want = per * t / samples;
            while (k + 1 < loop.size() && cum[k + 1] <= want) ++k;
            const Vec2 a = loop[k], b = loop[(k + 1) % loop.size()];
            const double seg = cum[k + 1] - cum[k];
            const double f = seg > 0.0 ? (want - cum[k]) / seg : 0.0;
            out.push_back(cplx(a.x + f * (b.x - a.x), a.y + f * (b.y - a.y)));
        }
        return out;
    }
    case ShapeKind::HalfplaneBox:
        break;
    }
    throw std::invalid_argument("boundary_points: unsupported target shape");
}

inline cplx shape_center(const Shape& s) {
    if (s.kind == ShapeKind::Disk) return {s.p0, s.p1};
    const BBox b = s.bbox();
    return {0.5 * (b.x0 + b.x1), 0.5 * (b.y0 + b.y1)};
}

} // namespace detail

struct TracedComponent {
    std::vector<Vec2> polygon;
    int local_degree = 0;
    double winding_residual = 0.0; // |numeric winding - local_degree|
    Vec2 centroid{};
};

struct PreimageTrace {
    std::vector<TracedComponent> components;
    int total_degree = 0;
    double map_residual = 0.0; // max |f(vertex) - target sample|
    double image_chord = 0.0;  // max gap between consecutive image samples
};

/// Pull the target boundary back through the covering map: per-sample
/// inverse branches chained into strands; the strand permutation after a
/// full loop yields the components and their local degrees.
inline PreimageTrace preimage_components(const CoveringMap& map, const Shape& target, int samples = 720) {
    if (samples < 16) throw std::invalid_argument("preimage_components: too few samples");
    const std::vector<cplx> bnd = detail::boundary_points(target, samples);

    // Critical values must keep clear of the traced boundary.
    double perimeter = 0.0;
    for (int t = 0; t < samples; ++t) perimeter += std::abs(bnd[size_t((t + 1) % samples)] - bnd[size_t(t)]);
    const double margin = 5.0 * perimeter / samples;
    for (cplx cv : map.critical_values())
        for (const cplx& p : bnd)
            if (std::abs(p - cv) < margin)
                throw PreconditionError("preimage_components: a critical value lies within the tracing "
                                        "margin of the target boundary");

    const int D = map.D;
    std::vector<std::vector<cplx>> strands(static_cast<size_t>(D));
    std::vector<cplx> prev = map.preimages(bnd[0]);
    std::sort(prev.begin(), prev.end(), [](cplx a, cplx b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    for (int k = 0; k < D; ++k) strands[size_t(k)].push_back(prev[size_t(k)]);

    auto match = [D](const std::vector<cplx>& from, std::vector<cplx> cand) {
        // greedy global nearest assignment; D is small
        std::vector<int> assign(size_t(D), -1);
        std::vector<bool> used(size_t(D), false);
        for (int pick = 0; pick < D; ++pick) {
            double best = kInf;
            int bi = -1, bj = -1;
            for (int i = 0; i < D; ++i) {
                if (assign[size_t(i)] >= 0) continue;
                for (int j = 0; j < D; ++j) {
                    if (used[size_t(j)]) continue;
                    const double d = std::abs(from[size_t(i)] - cand[size_t(j)]);
                    if (d < best) { best = d; bi = i; bj = j; }
                }
            }
            assign[size_t(bi)] = bj;
            used[size_t(bj)] = true;
        }
        std::vector<cplx> out(static_cast<size_t>(D));
        std::vector<int> idx(static_cast<size_t>(D));
        for (int i = 0; i < D; ++i) {
            out[size_t(i)] = cand[size_t(assign[size_t(i)])];
            idx[size_t(i)] = assign[size_t(i)];
        }
        return std::pair(out, idx);
    };

    double max_step = 0.0;
    for (int t = 1; t < samples; ++t) {
        auto [matched, idx] = match(prev, map.preimages(bnd[size_t(t)]));
        (void)idx;
        for (int k = 0; k < D; ++k) {
            max_step = std::max(max_step, std::abs(matched[size_t(k)] - prev[size_t(k)]));
            strands[size_t(k)].push_back(matched[size_t(k)]);
        }
        prev = matched;
    }
    // Wrap: match back to the t=0 branches to obtain the strand permutation.
    std::vector<cplx> first(static_cast<size_t>(D));
    for (int k = 0; k < D; ++k) first[size_t(k)] = strands[size_t(k)].front();
    auto [wrapped, perm] = match(prev, first);
    (void)wrapped;

    // Continuity guard: a strand jump far beyond the median step means the
    // matching tore near a branch point.
    if (samples > 2) {
        std::vector<double> steps;
        for (const auto& s : strands)
            for (size_t t = 1; t < s.size(); ++t) steps.push_back(std::abs(s[t] - s[t - 1]));
        std::nth_element(steps.begin(), steps.begin() + steps.size() / 2, steps.end());
        const double med = steps[steps.size() / 2];
        if (med > 0.0 && max_step > 100.0 * med)
            throw TracingError("preimage_components: strand continuity lost (branch point too close)");
    }

    PreimageTrace trace;
    const cplx center = detail::shape_center(target);
    std::vector<bool> seen(size_t(D), false);
    for (int k0 = 0; k0 < D; ++k0) {
        if (seen[size_t(k0)]) continue;
        TracedComponent comp;
        int k = k0;
        do {
            seen[size_t(k)] = true;
            for (const cplx& z : strands[size_t(k)]) comp.polygon.push_back({z.real(), z.imag()});
            ++comp.local_degree;
            k = perm[size_t(k)];
        } while (k != k0);

        double winding = 0.0;
        cplx prev_im = map.eval(cplx(comp.polygon.back().x, comp.polygon.back().y)) - center;
        for (const Vec2& v : comp.polygon) {
            const cplx im = map.eval(cplx(v.x, v.y)) - center;
            winding += std::arg(im / prev_im);
            prev_im = im;
        }
        winding /= 2.0 * std::numbers::pi;
        comp.winding_residual = std::abs(winding - comp.local_degree);
        if (comp.winding_residual > 0.01)
            throw TracingError("preimage_components: winding number " + std::to_string(winding) +
                               " does not match strand cycle length " + std::to_string(comp.local_degree));

        Vec2 c{0.0, 0.0};
        for (const Vec2& v : comp.polygon) { c.x += v.x; c.y += v.y; }
        c.x /= double(comp.polygon.size());
        c.y /= double(comp.polygon.size());
        comp.centroid = c;
        trace.components.push_back(std::move(comp));
    }
    std::sort(trace.components.begin(), trace.components.end(), [](const TracedComponent& a, const TracedComponent& b) {
        return a.centroid.x != b.centroid.x ? a.centroid.x < b.centroid.x : a.centroid.y < b.centroid.y;
    });
    for (const TracedComponent& c : trace.components) trace.total_degree += c.local_degree;
    if (trace.total_degree != D)
        throw TracingError("preimage_components: component degrees sum to " +
                           std::to_string(trace.total_degree) + ", expected " + std::to_string(D));

    for (int t = 0; t < samples; ++t)
        trace.image_chord = std::max(trace.image_chord, std::abs(bnd[size_t((t + 1) % samples)] - bnd[size_t(t)]));
    for (int k = 0; k < D; ++k)
        for (size_t t = 0; t < strands[size_t(k)].size(); ++t)
            trace.map_residual = std::max(trace.map_residual,
                                          std::abs(map.eval(strands[size_t(k)][t]) - bnd[t]));
    return trace;
}

// ---------------------------------------------------------------------------
// Moduli of covering scenes
// ---------------------------------------------------------------------------

namespace detail {

/// mod(U \ union of components) with U the unit disk. A single component
/// goes through the annulus machinery (radial splitting applies); several
/// components become a multi-island scene solved directly.
inline AnnulusReport mod_unit_disk_minus(const std::vector<TracedComponent>& comps, double resolution,
                                         double tol) {
    if (comps.empty()) throw ValidationError("no preimage components selected");
    if (comps.size() == 1)
        return annulus_modulus(Shape::disk(0.0, 0.0, 1.0), Shape::polygon(comps[0].polygon), resolution, tol);
    SceneSpec scene;
    scene.label = "covering-upstairs";
    scene.domain = Shape::disk(0.0, 0.0, 1.0);
    for (const TracedComponent& c : comps) scene.islands.push_back({Shape::polygon(c.polygon), std::nullopt});
    scene.min_resolution = resolution;
    const GridDomain g = rasterize(scene, resolution);
    const PotentialField f = solve_between(g, "islands", "outer", SolveOptions{tol});
    AnnulusReport rep;
    rep.width = f.energy;
    rep.modulus = modulus_of_width(f.energy);
    rep.iterations = f.iterations;
    return rep;
}

inline std::vector<TracedComponent> pick_components(const PreimageTrace& trace,
                                                    const std::vector<int>& selected) {
    if (selected.empty()) return trace.components;
    std::vector<TracedComponent> out;
    for (int k : selected) {
        if (k < 0 || size_t(k) >= trace.components.size())
            throw ValidationError("component index " + std::to_string(k) + " out of range");
        out.push_back(trace.components[size_t(k)]);
    }
    return out;
}

} // namespace detail

// ---------------------------------------------------------------------------
// Transformation-rule reports
// ---------------------------------------------------------------------------

struct TransformReport {
    int D = 0;
    int d = 0;                 // degree of the selected sub-cover
    int n_components = 0;
    std::vector<double> local_degrees;
    double mod_u = 0.0;        // mod(U \ A)
    double mod_v = 0.0;        // mod(V \ B)
    double slack = 0.03;
    bool lower_ok = false;     // mod_u <= mod_v (+slack)   [push-forward direction]
    bool upper_ok = false;     // mod_v <= D * mod_u (+slack)
    bool equality_ok = false;  // |mod_v - D*mod_u| within slack (exact transform)
    bool dbound_ok = false;    // mod_v >= d * mod_u (-slack)
    double map_residual = 0.0;
    int iterations = 0;
};

/// mod(U, A) <= mod(V, B) <= D mod(U, A) for the full preimage A.
inline TransformReport verify_transform_bounds(const CoveringMap& map, const Shape& target,
                                               double resolution, double tol = 1e-10, int samples = 720,
                                               double slack = 0.03) {
    const PreimageTrace trace = preimage_components(map, target, samples);
    const AnnulusReport up = detail::mod_unit_disk_minus(trace.components, resolution, tol);
    const AnnulusReport down = annulus_modulus(Shape::disk(0.0, 0.0, 1.0), target, resolution, tol);
    TransformReport r;
    r.D = map.D;
    r.d = trace.total_degree;
    r.n_components = int(trace.components.size());
    for (const TracedComponent& c : trace.components) r.local_degrees.push_back(double(c.local_degree));
    r.mod_u = up.modulus;
    r.mod_v = down.modulus;
    r.slack = slack;
    r.map_residual = trace.map_residual;
    r.iterations = up.iterations + down.iterations;
    r.lower_ok = r.mod_u <= r.mod_v * (1.0 + slack);
    r.upper_ok = r.mod_v <= map.D * r.mod_u * (1.0 + slack);
    return r;
}

/// Unbranched full-preimage case: mod(V, B) = D mod(U, A). Requires every
/// critical value to lie inside the target.
inline TransformReport verify_exact_transform(const CoveringMap& map, const Shape& target,
                                              double resolution, double tol = 1e-10, int samples = 720,
                                              double slack = 0.03) {
    for (cplx cv : map.critical_values())
        if (!target.contains({cv.real(), cv.imag()}))
            throw PreconditionError("verify_exact_transform: critical value (" + std::to_string(cv.real()) +
                                    "," + std::to_string(cv.imag()) + ") lies in V minus B");
    TransformReport r = verify_transform_bounds(map, target, resolution, tol, samples, slack);
    r.equality_ok = std::abs(r.mod_v - map.D * r.mod_u) <= slack * std::max(r.mod_v, map.D * r.mod_u);
    return r;
}

/// Selected-components case: mod(V, B) >= d mod(U, A) where d is the total
/// degree of the selected components over the target.
inline TransformReport verify_lower_bound(const CoveringMap& map, const Shape& target,
                                          const std::vector<int>& selected, double resolution,
                                          double tol = 1e-10, int samples = 720, double slack = 0.03) {
    const PreimageTrace trace = preimage_components(map, target, samples);
    const std::vector<TracedComponent> comps = detail::pick_components(trace, selected);
    int d = 0;
    for (const TracedComponent& c : comps) d += c.local_degree;
    const AnnulusReport up = detail::mod_unit_disk_minus(comps, resolution, tol);
    const AnnulusReport down = annulus_modulus(Shape::disk(0.0, 0.0, 1.0), target, resolution, tol);
    TransformReport r;
    r.D = map.D;
    r.d = d;
    r.n_components = int(comps.size());
    for (const TracedComponent& c : comps) r.local_degrees.push_back(double(c.local_degree));
    r.mod_u = up.modulus;
    r.mod_v = down.modulus;
    r.slack = slack;
    r.map_residual = trace.map_residual;
    r.iterations = up.iterations + down.iterations;
    r.dbound_ok = r.mod_v >= d * r.mod_u * (1.0 - slack);
    return r;
}

// ---------------------------------------------------------------------------
// Covering-lemma experiment
// ---------------------------------------------------------------------------

struct CoveringLemmaReport {
    int D = 0;
    int d = 0;               // deg(Lambda' -> B')
    double mod_u_lambda = 0.0;
    double mod_v_b = 0.0;
    double mod_bp_b = 0.0;
    double collar_ratio = 0.0; // mod(B' \ B) / mod(U \ Lambda)
    double eta = 0.0;          // min(1, collar_ratio)
    double bound = 0.0;        // 2 eta^-1 d^2 mod(U \ Lambda)
    bool collar_ok = false;
    bool conclusion = false;   // mod(V \ B) < bound
    bool regime_ok = false;    // mod(U \ Lambda) below the smallness threshold
    double smallness_threshold = 0.0;
    double map_residual = 0.0;
    int iterations = 0;
};

/// Concrete run of the covering-lemma inequality on a nest B in B' in V:
/// the collar assumption mod(B'\B) > eta mod(U\Lambda) against the
/// conclusion mod(V\B) < 2 eta^-1 d^2 mod(U\Lambda).
inline CoveringLemmaReport covering_lemma_experiment(const CoveringMap& map, const Shape& target,
                                                     const Shape& target_collar,
                                                     const std::vector<int>& selected, double resolution,
                                                     double tol = 1e-10, int samples = 720,
                                                     double smallness_threshold = 2.0) {
    // Nest validation: B strictly inside B'.
    const std::vector<cplx> bb = detail::boundary_points(target, 64);
    const std::vector<cplx> bpb = detail::boundary_points(target_collar, 64);
    for (const cplx& p : bb)
        if (!target_collar.contains({p.real(), p.imag()}))
            throw ValidationError("covering_lemma_experiment: B is not contained in B'");
    for (const cplx& p : bpb)
        if (target.contains({p.real(), p.imag()}))
            throw ValidationError("covering_lemma_experiment: B' does not strictly contain B");

    const PreimageTrace trace_b = preimage_components(map, target, samples);
    const PreimageTrace trace_bp = preimage_components(map, target_collar, samples);
    const std::vector<TracedComponent> lambda = detail::pick_components(trace_b, selected);

    // Lambda' = the component of the B'-preimage containing Lambda.
    int lambda_prime = -1;
    for (const TracedComponent& lc : lambda) {
        int found = -1;
        for (size_t k = 0; k < trace_bp.components.size(); ++k) {
            if (Shape::polygon(trace_bp.components[k].polygon).contains(lc.centroid)) {
                found = int(k);
                break;
            }
        }
        if (found < 0)
            throw ValidationError("covering_lemma_experiment: a selected component lies in no B'-preimage");
        if (lambda_prime >= 0 && found != lambda_prime)
            throw ValidationError("covering_lemma_experiment: selected components span several "
                                  "B'-preimage components");
        lambda_prime = found;
    }

    CoveringLemmaReport r;
    r.D = map.D;
    r.d = trace_bp.components[size_t(lambda_prime)].local_degree;
    r.smallness_threshold = smallness_threshold;
    r.map_residual = std::max(trace_b.map_residual, trace_bp.map_residual);

    const AnnulusReport up = detail::mod_unit_disk_minus(lambda, resolution, tol);
    const AnnulusReport vb = annulus_modulus(Shape::disk(0.0, 0.0, 1.0), target, resolution, tol);
    const AnnulusReport collar = annulus_modulus(target_collar, target, resolution, tol);
    r.mod_u_lambda = up.modulus;
    r.mod_v_b = vb.modulus;
    r.mod_bp_b = collar.modulus;
    r.iterations = up.iterations + vb.iterations + collar.iterations;

    r.collar_ratio = r.mod_bp_b / r.mod_u_lambda;
    r.eta = std::min(1.0, r.collar_ratio);
    r.collar_ok = r.collar_ratio > 0.0;
    r.bound = 2.0 * r.d * r.d * r.mod_u_lambda / r.eta;
    r.conclusion = r.mod_v_b < r.bound;
    r.regime_ok = r.mod_u_lambda <= smallness_threshold;
    return r;
}

// ---------------------------------------------------------------------------
// Report serialization
// ---------------------------------------------------------------------------

inline std::string transform_report_json(const TransformReport& r, const std::string& which) {
    JsonWriter w;
    w.begin_object();
    w.kv("check", which);
    w.kv("D", r.D);
    w.kv("d", r.d);
    w.kv("n_components", r.n_components);
    w.kv("local_degrees", r.local_degrees);
    w.kv("mod_u", r.mod_u);
    w.kv("mod_v", r.mod_v);
    w.kv("slack", r.slack);
    if (which == "transform_bounds" || which == "exact_transform") {
        w.kv("lower_ok", r.lower_ok);
        w.kv("upper_ok", r.upper_ok);
    }
    if (which == "exact_transform") w.kv("equality_ok", r.equality_ok);
    if (which == "lower_bound") w.kv("dbound_ok", r.dbound_ok);
    w.kv("map_residual", r.map_residual);
    w.kv("iterations", r.iterations);
    w.end_object();
    return w.str();
}

inline std::string covering_lemma_report_json(const CoveringLemmaReport& r) {
    JsonWriter w;
    w.begin_object();
    w.kv("check", "covering_lemma");
    w.kv("D", r.D);
    w.kv("d", r.d);
    w.kv("mod_u_lambda", r.mod_u_lambda);
    w.kv("mod_v_b", r.mod_v_b);
    w.kv("mod_bp_b", r.mod_bp_b);
    w.kv("collar_ratio", r.collar_ratio);
    w.kv("eta", r.eta);
    w.kv("bound", r.bound);
    w.kv("collar_ok", r.collar_ok);
    w.kv("conclusion", r.conclusion);
    w.kv("regime_ok", r.regime_ok);
    w.kv("smallness_threshold", r.smallness_threshold);
    w.kv("map_residual", r.map_residual);
    w.kv("iterations", r.iterations);
    w.end_object();
    return w.str();
}

} // namespace qamod

#endif
