#ifndef QAMOD_LAPLACE_HPP
#define QAMOD_LAPLACE_HPP

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "geometry.hpp"

namespace qamod {

struct SolverError : std::runtime_error {
    double residual = 0.0;
    int iterations = 0;
    SolverError(const std::string& msg, double res, int iters)
        : std::runtime_error(msg), residual(res), iterations(iters) {}
};

struct SolveOptions {
    double tol = 1e-10;      // relative residual target
    int max_iter = 0;        // 0 = 50 * sqrt(unknowns)
    bool record_residuals = false;
};

/// Solved discrete harmonic function. Values live on the full node lattice
/// (EXCLUDED nodes carry 0 and are never read).
struct PotentialField {
    std::vector<double> values;
    std::vector<int> source, sink;
    std::string source_id = "source";
    std::string sink_id = "sink";
    std::string free_id = "free";
    double residual = 0.0;
    int iterations = 0;
    double energy = 0.0;
    bool converged = true;
    std::vector<double> residual_history;
};

/// Dirichlet sum over lattice edges with unit conductances. Scale-free in
/// 2D: no grid-spacing factor.
inline double dirichlet_energy(const GridDomain& g, const std::vector<double>& values) {
    double e = 0.0;
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            if (!in_domain(g.at(i, j))) continue;
            const double v = values[g.idx(i, j)];
            if (i + 1 < g.nx && in_domain(g.at(i + 1, j))) {
                const double d = values[g.idx(i + 1, j)] - v;
                e += d * d;
            }
            if (j + 1 < g.ny && in_domain(g.at(i, j + 1))) {
                const double d = values[g.idx(i, j + 1)] - v;
                e += d * d;
            }
        }
    }
    return e;
}

inline double dirichlet_energy(const GridDomain& g, const PotentialField& f) {
    return dirichlet_energy(g, f.values);
}

/// Solve the discrete Dirichlet problem: value 1 on source nodes, 0 on sink
/// nodes, 5-point harmonic at every other in-domain node. Edges to EXCLUDED
/// nodes are omitted (no-flux). Jacobi-preconditioned conjugate gradients,
/// matrix-free.
inline PotentialField solve_potential(const GridDomain& g, const std::vector<int>& source,
                                      const std::vector<int>& sink, const SolveOptions& opts = {}) {
    if (source.empty() || sink.empty()) throw ValidationError("solve_potential: empty source or sink");
    if (!(opts.tol > 0.0)) throw ValidationError("solve_potential: tol must be positive");

    const size_t nn = g.cls.size();
    // 0 free, 1 source, 2 sink
    std::vector<uint8_t> role(nn, 0);
    for (int n : source) {
        if (!in_domain(g.cls[n])) throw ValidationError("solve_potential: source node outside domain");
        role[n] = 1;
    }
    for (int n : sink) {
        if (!in_domain(g.cls[n])) throw ValidationError("solve_potential: sink node outside domain");
        if (role[n] == 1) throw ValidationError("solve_potential: source and sink overlap");
        role[n] = 2;
    }

    std::vector<int32_t> slot(nn, -1);
    std::vector<int> unknowns;
    for (size_t n = 0; n < nn; ++n) {
        if (in_domain(g.cls[n]) && role[n] == 0) {
            slot[n] = int32_t(unknowns.size());
            unknowns.push_back(int(n));
        }
    }
    const size_t nu = unknowns.size();

    // Per-unknown stencil: neighbor slots (-1 = none), diagonal, rhs.
    std::vector<int32_t> nbr(nu * 4, -1);
    std::vector<double> diag(nu, 0.0), rhs(nu, 0.0);
    for (size_t u = 0; u < nu; ++u) {
        const int n = unknowns[u];
        const int i = n % g.nx, j = n / g.nx;
        const int di4[4] = {1, -1, 0, 0}, dj4[4] = {0, 0, 1, -1};
        for (int d = 0; d < 4; ++d) {
            const int ii = i + di4[d], jj = j + dj4[d];
            if (ii < 0 || jj < 0 || ii >= g.nx || jj >= g.ny) continue;
            const int m = g.idx(ii, jj);
            if (!in_domain(g.cls[m])) continue;
            diag[u] += 1.0;
            if (role[m] == 0)
                nbr[u * 4 + d] = slot[m];
            else if (role[m] == 1)
                rhs[u] += 1.0;
        }
    }

    PotentialField field;
    field.values.assign(nn, 0.0);
    field.source = source;
    field.sink = sink;
    for (int n : source) field.values[n] = 1.0;

    double b2 = 0.0;
    for (double v : rhs) b2 += v * v;
    const double bnorm = std::sqrt(b2);

    std::vector<double> x(nu, 0.0);
    if (nu > 0 && bnorm > 0.0) {
        const int cap = opts.max_iter > 0 ? opts.max_iter
                                          : std::max(100, int(50.0 * std::sqrt(double(nu))));
        std::vector<double> r(rhs), z(nu), p(nu), q(nu);
        for (size_t u = 0; u < nu; ++u) z[u] = r[u] / diag[u];
        p = z;
        double rz = 0.0;
        for (size_t u = 0; u < nu; ++u) rz += r[u] * z[u];
        double relres = 1.0;
        if (opts.record_residuals) field.residual_history.push_back(relres);
        int it = 0;
        while (it < cap) {
            for (size_t u = 0; u < nu; ++u) {
                double s = diag[u] * p[u];
                for (int d = 0; d < 4; ++d) {
                    const int32_t v = nbr[u * 4 + d];
                    if (v >= 0) s -= p[v];
                }
                q[u] = s;
            }
            double pq = 0.0;
            for (size_t u = 0; u < nu; ++u) pq += p[u] * q[u];
            if (pq <= 0.0) break; // numerically singular direction
            const double alpha = rz / pq;
            double r2 = 0.0;
            for (size_t u = 0; u < nu; ++u) {
                x[u] += alpha * p[u];
                r[u] -= alpha * q[u];
                r2 += r[u] * r[u];
            }
            ++it;
            relres = std::sqrt(r2) / bnorm;
            if (opts.record_residuals) field.residual_history.push_back(relres);
            if (relres <= opts.tol) break;
            double rz_new = 0.0;
            for (size_t u = 0; u < nu; ++u) {
                z[u] = r[u] / diag[u];
                rz_new += r[u] * z[u];
            }
            const double beta = rz_new / rz;
            rz = rz_new;
            for (size_t u = 0; u < nu; ++u) p[u] = z[u] + beta * p[u];
        }
        field.iterations = it;
        field.residual = relres;
        field.converged = relres <= opts.tol;
        if (!field.converged)
            throw SolverError("solve_potential: no convergence after " + std::to_string(it) +
                                  " iterations (relative residual " + std::to_string(relres) + ")",
                              relres, it);
    }
    for (size_t u = 0; u < nu; ++u) field.values[unknowns[u]] = x[u];
    field.energy = dirichlet_energy(g, field.values);
    return field;
}

// ---------------------------------------------------------------------------
// Selector-level solves with optional on-disk caching
// ---------------------------------------------------------------------------

namespace detail {

inline uint64_t fnv1a64(const std::string& s) {
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

inline std::string solve_cache_key(const GridDomain& g, const std::string& source_sel,
                                   const std::string& sink_sel, double tol) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "|%.17g|%.17g|", g.resolution, tol);
    const std::string key = scene_to_json(g.scene) + buf + source_sel + "|" + sink_sel;
    char hex[24];
    std::snprintf(hex, sizeof(hex), "%016llx", static_cast<unsigned long long>(fnv1a64(key)));
    return hex;
}

inline bool cache_load(const std::filesystem::path& file, PotentialField& f, size_t nn) {
    std::ifstream in(file, std::ios::binary);
    if (!in) return false;
    char magic[8] = {};
    in.read(magic, 8);
    if (std::string(magic, 8) != "QAMODF1\0") return false;
    int64_t n = 0, iters = 0;
    in.read(reinterpret_cast<char*>(&n), 8);
    in.read(reinterpret_cast<char*>(&iters), 8);
    in.read(reinterpret_cast<char*>(&f.residual), 8);
    in.read(reinterpret_cast<char*>(&f.energy), 8);
    if (!in || size_t(n) != nn) return false;
    f.values.resize(nn);
    in.read(reinterpret_cast<char*>(f.values.data()), std::streamsize(nn * 8));
    if (!in) return false;
    f.iterations = int(iters);
    f.converged = true;
    return true;
}

inline void cache_store(const std::filesystem::path& file, const PotentialField& f) {
    std::ofstream out(file, std::ios::binary | std::ios::trunc);
    if (!out) return;
    out.write("QAMODF1\0", 8);
    const int64_t n = int64_t(f.values.size()), iters = f.iterations;
    out.write(reinterpret_cast<const char*>(&n), 8);
    out.write(reinterpret_cast<const char*>(&iters), 8);
    out.write(reinterpret_cast<const char*>(&f.residual), 8);
    out.write(reinterpret_cast<const char*>(&f.energy), 8);
    out.write(reinterpret_cast<const char*>(f.values.data()), std::streamsize(f.values.size() * 8));
}

} // namespace detail

/// Solve between two node-set selectors. When QAMOD_CACHE_DIR is set, the
/// solved field is cached keyed by (scene hash, resolution, tol, selector
/// ids); cache hits are bit-identical to fresh solves.
inline PotentialField solve_between(const GridDomain& g, const std::string& source_sel,
                                    const std::string& sink_sel, const SolveOptions& opts = {}) {
    const char* cache_dir = std::getenv("QAMOD_CACHE_DIR");
    std::filesystem::path file;
    if (cache_dir && *cache_dir && !opts.record_residuals) {
        std::error_code ec;
        std::filesystem::create_directories(cache_dir, ec);
        file = std::filesystem::path(cache_dir) /
               (detail::solve_cache_key(g, source_sel, sink_sel, opts.tol) + ".field");
        PotentialField f;
        if (detail::cache_load(file, f, g.cls.size())) {
            f.source = select_nodes(g, source_sel);
            f.sink = select_nodes(g, sink_sel);
            f.source_id = source_sel;
            f.sink_id = sink_sel;
            return f;
        }
    }
    PotentialField f = solve_potential(g, select_nodes(g, source_sel), select_nodes(g, sink_sel), opts);
    f.source_id = source_sel;
    f.sink_id = sink_sel;
    if (!file.empty()) detail::cache_store(file, f);
    return f;
}

/// Extremal width between two node sets: the Dirichlet energy of the
/// solved potential.
inline double extremal_width(const GridDomain& g, const std::vector<int>& source,
                             const std::vector<int>& sink, const SolveOptions& opts = {}) {
    return solve_potential(g, source, sink, opts).energy;
}

inline double extremal_width(const GridDomain& g, const std::string& source_sel,
                             const std::string& sink_sel, const SolveOptions& opts = {}) {
    return solve_between(g, source_sel, sink_sel, opts).energy;
}

} // namespace qamod

#endif
