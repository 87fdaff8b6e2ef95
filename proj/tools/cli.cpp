#include "cli.hpp"

#include <openssl/evp.h>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "dtmsig/analytic.hpp"
#include "dtmsig/dtm.hpp"
#include "dtmsig/isomorphism_test.hpp"
#include "dtmsig/measure_space.hpp"
#include "dtmsig/report_json.hpp"
#include "dtmsig/signature.hpp"
#include "dtmsig/synth.hpp"

namespace dtmsig::cli {

namespace fs = std::filesystem;
using nlohmann::json;

std::string sha256_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    if (!ctx) throw std::runtime_error("digest context allocation failed");
    EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
    char buf[1 << 16];
    while (in.read(buf, sizeof buf) || in.gcount() > 0) EVP_DigestUpdate(ctx, buf, static_cast<std::size_t>(in.gcount()));
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned len = 0;
    EVP_DigestFinal_ex(ctx, md, &len);
    EVP_MD_CTX_free(ctx);
    std::ostringstream hex;
    for (unsigned i = 0; i < len; ++i) hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
    return hex.str();
}

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

/// Collects what a run read, wrote and resolved.
struct Manifest {
    std::string subcommand;
    json parameters = json::object();
    json inputs = json::array();
    json outputs = json::array();
    json timings = json::object();
    bool with_timings = false;

    void input(const std::string& role, const std::string& path) {
        inputs.push_back({{"role", role}, {"path", path}, {"sha256", sha256_file(path)}});
    }
    void output(const std::string& role, const std::string& path) {
        outputs.push_back({{"role", role}, {"path", path}});
    }
    json to_json() const {
        json j = {{"subcommand", subcommand}, {"parameters", parameters}, {"inputs", inputs}, {"outputs", outputs}};
        if (with_timings) j["timings_ms"] = timings;
        return j;
    }
};

void emit(const json& doc, const std::string& out_path, std::ostream& out) {
    const std::string text = doc.dump(2) + "\n";
    if (out_path.empty()) {
        out << text;
        return;
    }
    std::ofstream f(out_path);
    if (!f) throw std::runtime_error("cannot write " + out_path);
    f << text;
    if (!f) throw std::runtime_error("write failed: " + out_path);
}

/// Input spec shared by subcommands reading one space.
struct SpaceInput {
    std::string points;
    std::string matrix;
    std::string weights;
};

FiniteMeasureSpace load_space(const SpaceInput& in, const std::string& role, Manifest& manifest, bool strict_metric) {
    if (in.points.empty() == in.matrix.empty())
        throw std::invalid_argument(role + ": give exactly one of a point cloud or a distance matrix");
    if (!in.weights.empty() && in.matrix.empty())
        throw std::invalid_argument(role + ": a weights file only applies to a distance matrix");
    if (!in.points.empty()) {
        manifest.input(role, in.points);
        return load_point_cloud(in.points);
    }
    manifest.input(role + "_matrix", in.matrix);
    std::optional<fs::path> wpath;
    if (!in.weights.empty()) {
        manifest.input(role + "_weights", in.weights);
        wpath = in.weights;
    }
    auto space = load_distance_matrix(in.matrix, wpath);
    if (strict_metric) check_triangle_inequality(space);
    return space;
}

std::string sibling(const std::string& path, const std::string& suffix) {
    fs::path p(path);
    return (p.parent_path() / (p.stem().string() + suffix + p.extension().string())).string();
}

// ---------------------------------------------------------------- gen

struct GenOptions {
    std::string kind = "spiral";
    std::optional<double> v;
    std::optional<double> sigma;
    std::size_t size = 2000;
    std::uint64_t seed = 0;
    std::string out;
    std::string weights_out;
    std::string manifest_out;
};

int cmd_gen(const GenOptions& o, std::ostream& out) {
    auto kind = parse_generator(o.kind);
    if (auto* s = std::get_if<SpiralSpec>(&kind)) {
        if (o.v) s->v = *o.v;
        if (o.sigma) s->sigma = *o.sigma;
    } else if (o.v || o.sigma) {
        throw std::invalid_argument("--v and --sigma apply only to the spiral generator");
    }
    Manifest manifest{"gen"};
    const auto t0 = Clock::now();
    const auto space = sample({kind, o.size, o.seed});
    if (space.has_coordinates()) {
        save_point_cloud(space, o.out);
        manifest.output("points", o.out);
    } else {
        const auto wpath = o.weights_out.empty() ? sibling(o.out, ".weights") : o.weights_out;
        save_distance_matrix(space, o.out);
        save_weights(space, wpath);
        manifest.output("matrix", o.out);
        manifest.output("weights", wpath);
    }
    manifest.parameters = {{"generator", describe(kind)}, {"size", space.size()}, {"seed", o.seed}};
    manifest.timings["sample"] = ms_since(t0);
    emit(manifest.to_json(), o.manifest_out, out);
    return ok;
}

// ---------------------------------------------------------------- signature

struct SignatureOptions {
    SpaceInput in;
    double m = 0.05;
    std::string out;
    std::string cdf_out;
    std::size_t cdf_points = 200;
    std::string dtm_out;
    std::string manifest_out;
    unsigned threads = 1;
    bool strict_metric = false;
    bool timings = false;
};

int cmd_signature(const SignatureOptions& o, std::ostream& out) {
    check_mass(o.m);
    Manifest manifest{"signature"};
    manifest.with_timings = o.timings;
    auto t0 = Clock::now();
    const auto space = load_space(o.in, "input", manifest, o.strict_metric);
    manifest.timings["load"] = ms_since(t0);

    t0 = Clock::now();
    const DtmCache cache(space, o.m, o.threads);
    const auto sig = cache.full(space);
    manifest.timings["dtm"] = ms_since(t0);

    json summary = {{"mass", sig.mass},
                    {"source_size", sig.source_size},
                    {"atoms", sig.dist.size()},
                    {"mean", sig.dist.mean()},
                    {"min", sig.dist.atoms().front()},
                    {"max", sig.dist.atoms().back()}};
    if (!o.out.empty()) {
        save_signature(sig, o.out);
        manifest.output("signature", o.out);
        const auto cdf = o.cdf_out.empty() ? sibling(o.out, "_cdf") : o.cdf_out;
        save_signature_cdf(sig, cdf, o.cdf_points);
        manifest.output("cdf", cdf);
    } else if (!o.cdf_out.empty()) {
        save_signature_cdf(sig, o.cdf_out, o.cdf_points);
        manifest.output("cdf", o.cdf_out);
    }
    if (!o.dtm_out.empty()) {
        std::ofstream f(o.dtm_out);
        if (!f) throw std::runtime_error("cannot write " + o.dtm_out);
        f << "index,value\n" << std::setprecision(17);
        for (std::size_t i = 0; i < cache.size(); ++i) f << i << ',' << cache.values()[i] << '\n';
        if (!f) throw std::runtime_error("write failed: " + o.dtm_out);
        manifest.output("dtm", o.dtm_out);
    }
    manifest.parameters = {{"m", o.m}, {"cdf_points", o.cdf_points}};
    json doc = {{"signature", summary}, {"manifest", manifest.to_json()}};
    emit(doc, o.manifest_out, out);
    return ok;
}

// ---------------------------------------------------------------- test

struct TestOptions {
    SpaceInput p, q;
    TestParams params;
    std::optional<double> rho;
    std::string out;
    std::string bootstrap_out;
    bool strict = false;
    bool strict_metric = false;
    bool no_ks = false;
    bool timings = false;
};

json params_json(const TestParams& p) {
    json j = {{"m", p.m}, {"n", p.n}, {"n_mc", p.n_mc}, {"alpha", p.alpha}, {"seed", p.seed}};
    if (p.rho) j["rho"] = *p.rho;
    return j;
}

int cmd_test(TestOptions o, std::ostream& out, std::ostream& err) {
    if (o.rho) {
        o.params.rho = o.rho;
        o.params.n = 0;
    }
    Manifest manifest{"test"};
    manifest.with_timings = o.timings;
    auto t0 = Clock::now();
    const auto p = load_space(o.p, "p", manifest, o.strict_metric);
    const auto q = load_space(o.q, "q", manifest, o.strict_metric);
    manifest.timings["load"] = ms_since(t0);

    t0 = Clock::now();
    const auto report = run_test(p, q, o.params, !o.no_ks);
    manifest.timings["test"] = ms_since(t0);
    manifest.parameters = params_json(report.params);
    manifest.parameters["ks"] = !o.no_ks;
    if (!o.bootstrap_out.empty()) {
        save_bootstrap(report, o.bootstrap_out);
        manifest.output("bootstrap", o.bootstrap_out);
    }
    if (!o.out.empty()) manifest.output("report", o.out);
    auto doc = to_json(report);
    if (o.no_ks) doc.erase("ks");
    doc["manifest"] = manifest.to_json();
    emit(doc, o.out, out);
    for (const auto& w : report.warnings) err << "warning: " << w << '\n';
    return o.strict && report.degenerate ? degenerate : ok;
}

// ---------------------------------------------------------------- mc

struct McOptions {
    std::string gen_p = "spiral:v=10";
    std::string gen_q = "spiral:v=10";
    std::size_t size = 2000;
    std::size_t reps = 100;
    TestParams params;
    std::optional<double> rho;
    std::string out;
    std::string pvalues_out;
    bool timings = false;
};

int cmd_mc(McOptions o, std::ostream& out) {
    if (o.reps == 0) throw std::invalid_argument("--reps must be at least 1");
    if (o.rho) {
        o.params.rho = o.rho;
        o.params.n = 0;
    }
    const auto gp = parse_generator(o.gen_p), gq = parse_generator(o.gen_q);
    Manifest manifest{"mc"};
    manifest.with_timings = o.timings;
    const auto t0 = Clock::now();
    const auto result = estimate_level_power(gp, gq, o.size, o.params, o.reps);
    manifest.timings["mc"] = ms_since(t0);
    manifest.parameters = params_json(o.params);
    manifest.parameters["gen_p"] = describe(gp);
    manifest.parameters["gen_q"] = describe(gq);
    manifest.parameters["size"] = o.size;
    manifest.parameters["reps"] = o.reps;
    if (!o.pvalues_out.empty()) {
        std::ofstream f(o.pvalues_out);
        if (!f) throw std::runtime_error("cannot write " + o.pvalues_out);
        f << "rep,dtm_p_value,ks_p_value\n" << std::setprecision(17);
        for (std::size_t r = 0; r < result.p_values.size(); ++r)
            f << r << ',' << result.p_values[r] << ',' << result.ks_p_values[r] << '\n';
        manifest.output("p_values", o.pvalues_out);
    }
    if (!o.out.empty()) manifest.output("report", o.out);
    auto doc = to_json(result);
    doc["alpha"] = o.params.alpha;
    doc["manifest"] = manifest.to_json();
    emit(doc, o.out, out);
    return ok;
}

// ---------------------------------------------------------------- analytic

struct AnalyticOptions {
    std::string shape;
    std::string other;
    double m = 0.05;
    std::string out;
};

UniformShape parse_shape(const std::string& text) {
    const auto kind = parse_generator(text);
    const auto* s = std::get_if<UniformShapeSpec>(&kind);
    if (!s) throw std::invalid_argument("not a shape: " + text + " (expected ball:, cube: or annulus:)");
    return s->shape;
}

json shape_json(const UniformShape& s, double m) {
    json j = {{"dimension", s.dimension()},
              {"volume", s.volume()},
              {"reach", s.reach()},
              {"diameter", s.diameter()},
              {"epsilon_m", epsilon_m(s, m)}};
    try {
        j["dtm_min"] = dtm_min(s, m);
    } catch (const std::invalid_argument& e) {
        j["dtm_min"] = nullptr;
        j["dtm_min_note"] = e.what();
    }
    if (s.reach() > 0.0) {
        const auto st = standardness_constant(s);
        j["standardness"] = {{"a", st.a}, {"b", st.b}};
    }
    return j;
}

int cmd_analytic(const AnalyticOptions& o, std::ostream& out) {
    check_mass(o.m);
    const auto a = parse_shape(o.shape);
    json doc = {{"m", o.m}, {"shape", o.shape}, {"values", shape_json(a, o.m)}};
    if (!o.other.empty()) {
        const auto b = parse_shape(o.other);
        doc["other"] = o.other;
        doc["other_values"] = shape_json(b, o.m);
        doc["volume_lower_bound"] = uniform_volume_lower_bound(a, b, o.m);
    }
    emit(doc, o.out, out);
    return ok;
}

void add_test_params(CLI::App* sub, TestParams& p, std::optional<double>& rho) {
    sub->add_option("--m", p.m, "DTM mass parameter in (0,1]")->capture_default_str();
    sub->add_option("--n", p.n, "subsample size")->capture_default_str();
    sub->add_option("--nmc", p.n_mc, "bootstrap replicates per side")->capture_default_str();
    sub->add_option("--alpha", p.alpha, "test level")->capture_default_str();
    sub->add_option("--seed", p.seed, "random seed")->capture_default_str();
    sub->add_option("--threads", p.threads, "worker threads (results do not depend on it)")->capture_default_str();
    sub->add_option("--rho", rho, "derive n = floor(N^(1/rho)) instead of --n");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"DTM-signature tools: signatures, isomorphism tests and Monte Carlo calibration"};
    app.require_subcommand(1);

    GenOptions gen;
    auto* g = app.add_subcommand("gen", "sample a synthetic data set");
    g->add_option("--kind", gen.kind, "generator: spiral, spiral:v=20, ball:d=2,r=1, cube:..., annulus:..., graph:mu|nu, mixture:...")
        ->capture_default_str();
    g->add_option("--v", gen.v, "spiral frequency");
    g->add_option("--sigma", gen.sigma, "spiral noise level");
    g->add_option("--n", gen.size, "sample size")->capture_default_str();
    g->add_option("--seed", gen.seed, "random seed")->capture_default_str();
    g->add_option("--out", gen.out, "output CSV (points, or distance matrix for graphs)")->required();
    g->add_option("--weights-out", gen.weights_out, "weights CSV for graph generators");
    g->add_option("--manifest", gen.manifest_out, "write the manifest here instead of stdout");

    SignatureOptions sig;
    auto* s = app.add_subcommand("signature", "DTM-signature of one space");
    s->add_option("--in", sig.in.points, "point cloud CSV");
    s->add_option("--matrix", sig.in.matrix, "distance matrix CSV");
    s->add_option("--weights", sig.in.weights, "weights CSV for --matrix");
    s->add_option("--m", sig.m, "DTM mass parameter in (0,1]")->capture_default_str();
    s->add_option("--out", sig.out, "signature CSV (atom,weight); the CDF goes next to it");
    s->add_option("--cdf-out", sig.cdf_out, "sampled CDF CSV (t,cdf)");
    s->add_option("--cdf-points", sig.cdf_points, "CDF sample count")->capture_default_str();
    s->add_option("--dtm-out", sig.dtm_out, "per-point DTM values CSV (index,value)");
    s->add_option("--manifest", sig.manifest_out, "write the summary here instead of stdout");
    s->add_option("--threads", sig.threads, "worker threads")->capture_default_str();
    s->add_flag("--strict-metric", sig.strict_metric, "check the triangle inequality of distance matrices");
    s->add_flag("--timings", sig.timings, "include wall-clock timings in the manifest");

    TestOptions test;
    auto* t = app.add_subcommand("test", "two-sample DTM-signature isomorphism test");
    t->add_option("--p", test.p.points, "first point cloud CSV");
    t->add_option("--q", test.q.points, "second point cloud CSV");
    t->add_option("--p-matrix", test.p.matrix, "first distance matrix CSV");
    t->add_option("--q-matrix", test.q.matrix, "second distance matrix CSV");
    t->add_option("--p-weights", test.p.weights, "weights for --p-matrix");
    t->add_option("--q-weights", test.q.weights, "weights for --q-matrix");
    add_test_params(t, test.params, test.rho);
    t->add_option("--out", test.out, "JSON report path (default stdout)");
    t->add_option("--bootstrap-out", test.bootstrap_out, "bootstrap replicates CSV");
    t->add_flag("--strict", test.strict, "exit 3 when the bootstrap law is degenerate");
    t->add_flag("--strict-metric", test.strict_metric, "check the triangle inequality of distance matrices");
    t->add_flag("--no-ks", test.no_ks, "skip the Kolmogorov-Smirnov baseline");
    t->add_flag("--timings", test.timings, "include wall-clock timings in the manifest");

    McOptions mc;
    auto* c = app.add_subcommand("mc", "Monte Carlo level / power of the test and the KS baseline");
    c->add_option("--p", mc.gen_p, "generator for the first sample")->capture_default_str();
    c->add_option("--q", mc.gen_q, "generator for the second sample")->capture_default_str();
    c->add_option("--size", mc.size, "points per sample")->capture_default_str();
    c->add_option("--reps", mc.reps, "Monte Carlo repetitions")->capture_default_str();
    add_test_params(c, mc.params, mc.rho);
    c->add_option("--out", mc.out, "JSON report path (default stdout)");
    c->add_option("--pvalues-out", mc.pvalues_out, "per-repetition p-values CSV");
    c->add_flag("--timings", mc.timings, "include wall-clock timings in the manifest");

    AnalyticOptions an;
    auto* a = app.add_subcommand("analytic", "closed-form DTM constants for uniform shapes");
    a->add_option("--shape", an.shape, "ball:d=2,r=1, cube:d=1,side=1 or annulus:d=2,r1=0.5,r2=1")->required();
    a->add_option("--other", an.other, "second shape for the volume lower bound");
    a->add_option("--m", an.m, "DTM mass parameter in (0,1]")->capture_default_str();
    a->add_option("--out", an.out, "JSON path (default stdout)");

    std::vector<std::string> storage{"dtmsig"};
    storage.insert(storage.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& x : storage) argv.push_back(x.data());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? ok : invalid;
    }

    try {
        if (*g) return cmd_gen(gen, out);
        if (*s) return cmd_signature(sig, out);
        if (*t) return cmd_test(test, out, err);
        if (*c) return cmd_mc(mc, out);
        if (*a) return cmd_analytic(an, out);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return invalid;
    }
    return invalid;
}

}  // namespace dtmsig::cli
