// Command-line front end: scene/report I/O and the reproducibility harness.
// Exit codes: 0 success, 1 mathematical-verdict failure, 2 input error.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "qamod/covering.hpp"
#include "qamod/experiments.hpp"

namespace {

using namespace qamod;

constexpr int kExitOk = 0;
constexpr int kExitVerdict = 1;
constexpr int kExitInput = 2;

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text << "\n";
        return;
    }
    std::ofstream out(out_path, std::ios::trunc);
    if (!out) throw ParseError("cannot write file '" + out_path + "'");
    out << text << "\n";
}

std::vector<double> parse_number_list(const std::string& text, const std::string& what) {
    std::vector<double> out;
    std::string token;
    for (char c : text + ",") {
        if (std::isdigit(uint8_t(c)) || c == '.' || c == '-' || c == '+' || c == 'e' || c == 'E' ||
            c == 'i' || c == 'n' || c == 'f') {
            token += c;
        } else if (!token.empty()) {
            try {
                out.push_back(token == "inf" ? kInf : std::stod(token));
            } catch (const std::exception&) {
                throw ParseError(what + ": bad number '" + token + "'");
            }
            token.clear();
        }
    }
    if (out.empty()) throw ParseError(what + ": no numbers found");
    return out;
}

HalfplaneFamily parse_family(const nlohmann::json& j, const std::string& where) {
    if (!j.is_object() || !j.contains("a") || !j["a"].is_array())
        throw ParseError(where + ": family needs an 'a' array");
    HalfplaneFamily fam;
    for (const auto& v : j["a"]) fam.a.push_back(v.get<double>());
    if (j.contains("label")) fam.label = j["label"].get<std::string>();
    if (j.contains("W")) fam.W = j["W"].get<double>();
    if (j.contains("pad")) fam.pad = j["pad"].get<double>();
    if (j.contains("thickness")) fam.thickness = j["thickness"].get<double>();
    if (j.contains("min_aspect")) fam.min_aspect = j["min_aspect"].get<double>();
    return fam;
}

struct CoveringSpecFile {
    CoveringMap map = CoveringMap::power(2);
    Shape target;
    std::optional<Shape> target_collar;
    std::vector<int> components; // empty = all
};

CoveringSpecFile parse_covering(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("covering spec: ") + e.what());
    }
    CoveringSpecFile spec;
    if (!j.contains("map") || !j["map"].is_object() || !j["map"].contains("kind"))
        throw ParseError("covering spec: missing map.kind");
    const std::string kind = j["map"]["kind"].get<std::string>();
    if (kind == "power") {
        if (!j["map"].contains("D")) throw ParseError("covering spec: power map needs D");
        spec.map = CoveringMap::power(j["map"]["D"].get<int>());
    } else if (kind == "blaschke") {
        if (!j["map"].contains("zeros") || !j["map"]["zeros"].is_array())
            throw ParseError("covering spec: blaschke map needs zeros");
        std::vector<cplx> zs;
        for (const auto& z : j["map"]["zeros"]) {
            if (!z.is_array() || z.size() != 2) throw ParseError("covering spec: zeros must be [x,y] pairs");
            zs.emplace_back(z[0].get<double>(), z[1].get<double>());
        }
        spec.map = CoveringMap::blaschke(std::move(zs));
    } else {
        throw ParseError("covering spec: unknown map kind '" + kind + "'");
    }
    if (!j.contains("B")) throw ParseError("covering spec: missing target B");
    spec.target = detail::parse_shape(j["B"], "covering.B", false);
    if (j.contains("Bprime")) spec.target_collar = detail::parse_shape(j["Bprime"], "covering.Bprime", false);
    if (j.contains("components") && !j["components"].is_string()) {
        if (!j["components"].is_array()) throw ParseError("covering spec: components must be 'all' or an array");
        for (const auto& k : j["components"]) spec.components.push_back(k.get<int>());
    }
    return spec;
}

// ---------------------------------------------------------------------------

int run_width(const std::string& scene_path, const std::string& source_sel, const std::string& sink_sel,
              double resolution, double tol, bool diagnostics, const std::string& out_path) {
    const SceneSpec scene = build_scene(slurp(scene_path));
    const GridDomain g = rasterize(scene, resolution);
    SolveOptions opts{tol};
    opts.record_residuals = diagnostics;
    const PotentialField f = solve_between(g, source_sel, sink_sel, opts);
    JsonWriter w;
    w.begin_object();
    w.kv("label", scene.label);
    w.kv("source", source_sel);
    w.kv("sink", sink_sel);
    w.kv("width", f.energy);
    w.kv("modulus", modulus_of_width(f.energy));
    w.kv("residual", f.residual);
    w.kv("iterations", f.iterations);
    w.key("grid");
    w.begin_object();
    w.kv("resolution", resolution);
    w.kv("tol", tol);
    w.kv("nx", g.nx);
    w.kv("ny", g.ny);
    w.end_object();
    if (diagnostics) w.kv("residual_curve", f.residual_history);
    w.end_object();
    emit(w.str(), out_path);
    return kExitOk;
}

int run_xyz(const std::string& scene_path, double resolution, double tol, int threads, double threshold,
            bool csv, const std::string& out_path) {
    const SceneSpec scene = build_scene(slurp(scene_path));
    const ModuliReport r = qa_report(scene, resolution, tol, threads, threshold);
    emit(csv ? moduli_report_csv(r) : moduli_report_json(r), out_path);
    int rc = kExitOk;
    auto fail = [&rc](const std::string& name, double lhs, double rhs) {
        std::cerr << "verdict failed: " << name << " (" << fmt_cell(lhs) << " vs " << fmt_cell(rhs) << ")\n";
        rc = kExitVerdict;
    };
    if (!r.verdict_x_le_y()) fail("X <= Y", r.X, r.Y);
    if (!r.verdict_y_le_z()) fail("Y <= Z", r.Y, r.Z);
    if (!r.verdict_y_le_nx()) fail("Y <= N X", r.Y, r.n_islands * r.X);
    if (r.in_regime() && !r.verdict_qa()) fail("Y^2 <= 2 X Z", r.Y * r.Y, 2.0 * r.X * r.Z);
    return rc;
}

int run_collar(const std::string& scene_path, double resolution, double tol, int threads,
               const std::string& out_path) {
    const SceneSpec scene = build_scene(slurp(scene_path));
    const CollarReport r = collar_check(scene, resolution, tol, threads);
    emit(collar_report_json(r), out_path);
    if (r.xi_measured > r.xi_bound * 1.10) {
        std::cerr << "verdict failed: xi <= 1/eta_min (" << fmt_cell(r.xi_measured) << " vs "
                  << fmt_cell(r.xi_bound) << ")\n";
        return kExitVerdict;
    }
    return kExitOk;
}

int run_groetzsch(const std::string& scene_path, double resolution, double tol, const std::string& out_path) {
    const SceneSpec scene = build_scene(slurp(scene_path));
    const GroetzschReport r = groetzsch_check(scene, resolution, tol);
    emit(groetzsch_report_json(r), out_path);
    if (!r.verdict) {
        std::cerr << "verdict failed: W(S,A) <= W(S,B') (+) W(B',A) (" << fmt_cell(r.lhs) << " vs "
                  << fmt_cell(r.rhs) << ")\n";
        return kExitVerdict;
    }
    return kExitOk;
}

int run_laws(int fuzz_n, uint64_t seed, int n_max, const std::string& check_a, const std::string& check_b,
             const std::string& out_path) {
    JsonWriter w;
    w.begin_object();
    int rc = kExitOk;
    if (!check_a.empty()) {
        const std::vector<double> a = parse_number_list(slurp(check_a), "laws a");
        const std::vector<double> b = parse_number_list(slurp(check_b), "laws b");
        const ChainCheck c = validate_chain(a, b);
        w.kv("chain_valid", c.ok);
        if (!c.ok) {
            w.kv("first_violation", c.first_violation);
            w.kv("reason", c.reason);
            std::cerr << "verdict failed: chain invalid at index " << c.first_violation << " (" << c.reason
                      << ")\n";
            rc = kExitVerdict;
        } else {
            const BoundResult r = arithmetic_bound(a, b);
            w.kv("ratio", r.ratio);
            w.kv("bound", 4.0 / 3.0);
            w.kv("verdict", r.verdict);
            if (!r.verdict) {
                std::cerr << "verdict failed: (sum a)^2 <= (4/3) b1 sum b (ratio " << fmt_cell(r.ratio)
                          << ")\n";
                rc = kExitVerdict;
            }
        }
    } else {
        const FuzzResult r = fuzz_chains(fuzz_n, seed, n_max);
        w.kv("samples", r.samples);
        w.kv("n_max", r.n_max);
        w.kv("seed", size_t(seed));
        w.kv("max_ratio", r.max_ratio);
        w.kv("max_ratio_seed", size_t(r.max_seed));
        w.kv("violations", r.violations);
        if (r.violations > 0) {
            std::cerr << "verdict failed: " << r.violations << " fuzzed chains broke the 4/3 bound\n";
            rc = kExitVerdict;
        }
    }
    w.end_object();
    emit(w.str(), out_path);
    return rc;
}

int run_covering(const std::string& spec_path, double resolution, double tol, int samples,
                 double smallness, const std::string& out_path) {
    const CoveringSpecFile spec = parse_covering(slurp(spec_path));
    const PreimageTrace trace = preimage_components(spec.map, spec.target, samples);

    JsonWriter w;
    w.begin_object();
    w.kv("D", spec.map.D);
    w.key("components");
    w.begin_array();
    for (const TracedComponent& c : trace.components) {
        w.begin_object();
        w.kv("local_degree", c.local_degree);
        w.kv("centroid_x", c.centroid.x);
        w.kv("centroid_y", c.centroid.y);
        w.kv("winding_residual", c.winding_residual);
        w.kv("vertices", int(c.polygon.size()));
        w.end_object();
    }
    w.end_array();
    w.kv("map_residual", trace.map_residual);

    int rc = kExitOk;
    auto fail = [&rc](const std::string& what) {
        std::cerr << "verdict failed: " << what << "\n";
        rc = kExitVerdict;
    };

    const TransformReport bounds =
        verify_transform_bounds(spec.map, spec.target, resolution, tol, samples);
    w.key("transform_bounds");
    w.begin_object();
    w.kv("mod_u", bounds.mod_u);
    w.kv("mod_v", bounds.mod_v);
    w.kv("lower_ok", bounds.lower_ok);
    w.kv("upper_ok", bounds.upper_ok);
    w.end_object();
    if (!bounds.lower_ok) fail("mod(U,A) <= mod(V,B)");
    if (!bounds.upper_ok) fail("mod(V,B) <= D mod(U,A)");

    bool exact_applicable = true;
    for (cplx cv : spec.map.critical_values())
        exact_applicable &= spec.target.contains({cv.real(), cv.imag()});
    if (exact_applicable) {
        const TransformReport exact =
            verify_exact_transform(spec.map, spec.target, resolution, tol, samples);
        w.key("exact_transform");
        w.begin_object();
        w.kv("mod_u", exact.mod_u);
        w.kv("mod_v", exact.mod_v);
        w.kv("equality_ok", exact.equality_ok);
        w.end_object();
        if (!exact.equality_ok) fail("mod(V,B) = D mod(U,A)");
    }

    const TransformReport lower =
        verify_lower_bound(spec.map, spec.target, spec.components, resolution, tol, samples);
    w.key("lower_bound");
    w.begin_object();
    w.kv("d", lower.d);
    w.kv("mod_u", lower.mod_u);
    w.kv("mod_v", lower.mod_v);
    w.kv("dbound_ok", lower.dbound_ok);
    w.end_object();
    if (!lower.dbound_ok) fail("mod(V,B) >= d mod(U,A)");

    if (spec.target_collar) {
        const CoveringLemmaReport lemma = covering_lemma_experiment(
            spec.map, spec.target, *spec.target_collar, spec.components, resolution, tol, samples, smallness);
        w.key("covering_lemma");
        w.begin_object();
        w.kv("d", lemma.d);
        w.kv("mod_u_lambda", lemma.mod_u_lambda);
        w.kv("mod_v_b", lemma.mod_v_b);
        w.kv("mod_bp_b", lemma.mod_bp_b);
        w.kv("eta", lemma.eta);
        w.kv("bound", lemma.bound);
        w.kv("conclusion", lemma.conclusion);
        w.kv("regime_ok", lemma.regime_ok);
        w.end_object();
        if (lemma.regime_ok && !lemma.conclusion) fail("mod(V,B) < 2 eta^-1 d^2 mod(U,Lambda)");
    }
    w.end_object();
    emit(w.str(), out_path);
    return rc;
}

int run_halfplane(const std::string& family_path, const std::string& sweep_path, double resolution,
                  double tol, int threads, double threshold, bool csv, const std::string& out_path) {
    if (!sweep_path.empty()) {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(slurp(sweep_path));
        } catch (const nlohmann::json::parse_error& e) {
            throw ParseError(std::string("sweep file: ") + e.what());
        }
        const nlohmann::json& arr = j.is_array() ? j : j.at("families");
        std::vector<HalfplaneFamily> families;
        int k = 0;
        for (const auto& fj : arr) families.push_back(parse_family(fj, "families[" + std::to_string(k++) + "]"));
        const SweepTable table = qa_ratio_sweep(families, resolution, tol, threads, threshold);
        if (csv) {
            emit(sweep_csv(table), out_path);
        } else {
            JsonWriter w;
            w.begin_object();
            w.kv("max_ratio", table.max_ratio);
            w.kv("csv", sweep_csv(table));
            w.end_object();
            emit(w.str(), out_path);
        }
        for (const SweepRow& r : table.rows) {
            if (r.in_regime && r.ratio > 4.0 / 3.0 * 1.05) {
                std::cerr << "verdict failed: in-regime ratio " << fmt_cell(r.ratio) << " for " << r.label
                          << " exceeds 4/3 + 5%\n";
                return kExitVerdict;
            }
        }
        return kExitOk;
    }
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(slurp(family_path));
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("family file: ") + e.what());
    }
    const HalfplaneFamily fam = parse_family(j, "family");
    const HalfplanePrediction pred = halfplane_predicted(fam);
    const ModuliReport m = halfplane_measured(fam, resolution, tol, threads, threshold);
    JsonWriter w;
    w.begin_object();
    w.kv("label", fam.label);
    w.key("predicted");
    w.begin_object();
    w.kv("X", pred.X);
    w.kv("Y", pred.Y);
    w.kv("Z", pred.Z);
    w.kv("ratio", pred.ratio);
    w.kv("b", pred.b);
    w.end_object();
    w.key("measured");
    w.begin_object();
    w.kv("X", m.X);
    w.kv("Y", m.Y);
    w.kv("Z", m.Z);
    w.kv("ratio", m.ratio_qa());
    w.kv("in_regime", m.in_regime());
    w.end_object();
    w.key("grid");
    w.begin_object();
    w.kv("resolution", m.resolution);
    w.kv("tol", m.tol);
    w.kv("iterations", m.iterations);
    w.end_object();
    w.end_object();
    emit(w.str(), out_path);
    return kExitOk;
}

int run_converge(const std::string& scene_path, const std::string& resolutions, double tol, int threads,
                 const std::string& out_path) {
    const SceneSpec scene = build_scene(slurp(scene_path));
    const std::vector<double> res = parse_number_list(resolutions, "resolutions");
    const ConvergenceTable t = convergence_study(scene, res, tol, threads);
    emit(convergence_json(t), out_path);
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"conformal moduli of planar domains with islands, via discrete harmonic measure"};
    app.require_subcommand(1);

    std::string scene_path, out_path, source_sel = "islands", sink_sel = "outer";
    std::string family_path, sweep_path, spec_path, check_a, check_b, resolutions = "64,128,256";
    double resolution = 128.0, tol = 1e-10, threshold = 10.0, smallness = 2.0;
    int threads = 1, samples = 720, fuzz_n = 1000, n_max = 64;
    uint64_t seed = 0;
    bool diagnostics = false, csv = false;

    auto add_common = [&](CLI::App* cmd, bool with_scene) {
        if (with_scene) cmd->add_option("--scene", scene_path, "scene JSON file")->required();
        cmd->add_option("--resolution", resolution, "cells per unit");
        cmd->add_option("--tol", tol, "relative residual target");
        cmd->add_option("--threads", threads, "parallel independent solves");
        cmd->add_option("--out", out_path, "output file (default stdout)");
    };

    CLI::App* width = app.add_subcommand("width", "extremal width between two node sets");
    add_common(width, true);
    width->add_option("--source", source_sel, "source node-set selector");
    width->add_option("--sink", sink_sel, "sink node-set selector");
    width->add_flag("--diagnostics", diagnostics, "include the residual curve");

    CLI::App* xyz = app.add_subcommand("xyz", "X, Y, Z moduli and quasi-additivity verdicts");
    add_common(xyz, true);
    xyz->add_option("--in-regime-threshold", threshold, "Y threshold for the quadratic verdict");
    xyz->add_flag("--csv", csv, "emit CSV rows instead of JSON");

    CLI::App* collar = app.add_subcommand("collar", "per-island collar ratios eta_j");
    add_common(collar, true);

    CLI::App* groetzsch = app.add_subcommand("groetzsch", "series-law check on a nest");
    add_common(groetzsch, true);

    CLI::App* laws = app.add_subcommand("laws", "harmonic-sum chain arithmetic");
    laws->add_option("--fuzz", fuzz_n, "number of random chains");
    laws->add_option("--seed", seed, "fuzz seed");
    laws->add_option("--n-max", n_max, "maximum chain length");
    laws->add_option("--check", check_a, "chain a CSV file")->expected(1);
    laws->add_option("--against", check_b, "chain b CSV file")->expected(1);
    laws->add_option("--out", out_path, "output file (default stdout)");

    CLI::App* covering = app.add_subcommand("covering", "covering-map transformation checks");
    covering->add_option("--spec", spec_path, "covering spec JSON file")->required();
    covering->add_option("--resolution", resolution, "cells per unit");
    covering->add_option("--tol", tol, "relative residual target");
    covering->add_option("--samples", samples, "boundary samples for preimage tracing");
    covering->add_option("--smallness", smallness, "regime threshold on mod(U,Lambda)");
    covering->add_option("--out", out_path, "output file (default stdout)");

    CLI::App* halfplane = app.add_subcommand("halfplane", "segment-stack families: predicted vs measured");
    halfplane->add_option("--family", family_path, "family JSON file");
    halfplane->add_option("--sweep", sweep_path, "sweep JSON file (list of families)");
    halfplane->add_option("--resolution", resolution, "cells per unit");
    halfplane->add_option("--tol", tol, "relative residual target");
    halfplane->add_option("--threads", threads, "parallel rows");
    halfplane->add_option("--in-regime-threshold", threshold, "Y threshold");
    halfplane->add_flag("--csv", csv, "emit the sweep as CSV");
    halfplane->add_option("--out", out_path, "output file (default stdout)");

    CLI::App* converge = app.add_subcommand("converge", "convergence study with extrapolation");
    add_common(converge, true);
    converge->add_option("--resolutions", resolutions, "comma-separated geometric ladder");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) ? kExitInput : kExitOk;
    }

    try {
        if (width->parsed())
            return run_width(scene_path, source_sel, sink_sel, resolution, tol, diagnostics, out_path);
        if (xyz->parsed())
            return run_xyz(scene_path, resolution, tol, threads, threshold, csv, out_path);
        if (collar->parsed()) return run_collar(scene_path, resolution, tol, threads, out_path);
        if (groetzsch->parsed()) return run_groetzsch(scene_path, resolution, tol, out_path);
        if (laws->parsed()) {
            if (!check_a.empty() && check_b.empty())
                throw ParseError("laws --check needs --against with the b-chain file");
            return run_laws(fuzz_n, seed, n_max, check_a, check_b, out_path);
        }
        if (covering->parsed())
            return run_covering(spec_path, resolution, tol, samples, smallness, out_path);
        if (halfplane->parsed()) {
            if (family_path.empty() && sweep_path.empty())
                throw ParseError("halfplane needs --family or --sweep");
            return run_halfplane(family_path, sweep_path, resolution, tol, threads, threshold, csv, out_path);
        }
        if (converge->parsed()) return run_converge(scene_path, resolutions, tol, threads, out_path);
    } catch (const SolverError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
    return kExitInput;
}
