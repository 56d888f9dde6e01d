// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 HFSS Project Contributors
#include "hfss/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <memory>
#include <sstream>

#include "CLI11.hpp"
#include "hfss/acceptance.hpp"
#include "hfss/error.hpp"
#include "hfss/field_io.hpp"
#include "hfss/fractional_kernel.hpp"
#include "hfss/geometry.hpp"
#include "hfss/meyer_wavelet.hpp"
#include "hfss/parallel.hpp"
#include "hfss/rng.hpp"
#include "hfss/synthesis.hpp"
#include "json.hpp"

namespace hfss {

namespace {

using nlohmann::json;

// ---- parsing helpers -------------------------------------------------------

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

double to_double(const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    require(used == s.size() && !s.empty(), "not a number: '" + s + "'");
    return v;
}

std::vector<double> number_list(const std::string& s) {
    std::vector<double> v;
    for (const auto& t : split(s, ',')) v.push_back(to_double(t));
    return v;
}

std::vector<int> int_list(const std::string& s) {
    std::vector<int> v;
    for (double x : number_list(s)) {
        require(x == std::floor(x), "expected integers: '" + s + "'");
        v.push_back(static_cast<int>(x));
    }
    return v;
}

std::vector<std::size_t> parse_shape(const std::string& s) {
    std::vector<std::size_t> v;
    for (const auto& t : split(s, 'x')) {
        const double x = to_double(t);
        require(x >= 1 && x == std::floor(x), "grid sizes must be positive integers: '" + s + "'");
        v.push_back(static_cast<std::size_t>(x));
    }
    return v;
}

// "a,bxc,d" per axis; a single "a,b" applies to every axis.
Region parse_box(const std::string& s, std::size_t N) {
    Region r;
    for (const auto& t : split(s, 'x')) {
        const auto ab = number_list(t);
        require(ab.size() == 2, "bounds need lo,hi per axis: '" + s + "'");
        r.lower.push_back(ab[0]);
        r.upper.push_back(ab[1]);
    }
    if (r.lower.size() == 1 && N > 1) {
        r.lower.assign(N, r.lower[0]);
        r.upper.assign(N, r.upper[0]);
    }
    require(r.lower.size() == N, "bounds and grid differ in dimension");
    return r;
}

// ---- output helpers --------------------------------------------------------

std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
}

class Csv {
public:
    explicit Csv(std::vector<std::string> header) : header_(std::move(header)) {}
    void row(std::vector<std::string> cells) { rows_.push_back(std::move(cells)); }
    // Every row carries the run id of the producing run.
    std::string str(const std::string& run_id) const {
        std::string out;
        auto line = [&](const std::vector<std::string>& cells, const std::string& last) {
            for (const auto& c : cells) out += csv_field(c) + ",";
            out += csv_field(last) + "\r\n";
        };
        line(header_, "run_id");
        for (const auto& r : rows_) line(r, run_id);
        return out;
    }

private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

// Doubles as JSON numbers; non-finite values become null.
json jnum(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

// ---- run bookkeeping -------------------------------------------------------

struct Run {
    std::string command;
    json params = json::object();  // normalized, excludes threads / out / config
    std::map<std::string, std::string> inputs;   // path -> sha256
    std::map<std::string, std::string> outputs;  // path -> sha256
    std::vector<std::string> argv;
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

    std::string run_id() const {
        json id;
        id["command"] = command;
        id["params"] = params;
        json in = json::array();
        for (const auto& [path, digest] : inputs) in.push_back(digest);
        id["inputs"] = in;
        id["version"] = software_version;
        return sha256_hex(id.dump());
    }

    void input(const std::string& path, const std::string& bytes) { inputs[path] = sha256_hex(bytes); }

    void write(const std::string& path, const std::string& bytes) {
        write_file_atomic(path, bytes);
        outputs[path] = sha256_hex(bytes);
    }

    void manifest(const std::string& out) const {
        json m;
        std::string line;
        for (const auto& a : argv) line += (line.empty() ? "" : " ") + a;
        m["command_line"] = line;
        m["command"] = command;
        m["params"] = params;
        m["run_id"] = run_id();
        m["version"] = software_version;
        m["inputs"] = inputs;
        m["outputs"] = outputs;
        m["wall_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        write_file_atomic(out + ".manifest.json", m.dump(2) + "\n");
    }
};

// ---- subcommand state ------------------------------------------------------

struct Common {
    int threads = 1;
    std::string config;
    std::string out;
};

struct SynthArgs {
    std::uint64_t seed = 0;
    double alpha = 2.0;
    std::string hurst;
    int n = 6;
    double M = 2.0;
    std::string grid = "256x256";
    std::string bounds;
    std::size_t d = 1;
    std::string engine = "wavelet";
    std::size_t atoms = default_atom_count;
    double theta = default_theta;
    std::string law = "iid";
};

struct Args {
    Common common;
    SynthArgs synth;
    std::string what = "psi-hat";
    double v = 0.5;
    double halfwidth = 16.0;
    std::string point = "1,1";
    std::size_t samples = 10000;
    double scale = 2.0;
    std::vector<std::string> fields;
    std::string axis = "all";
    double tolerance = 0.1;
    std::string region;
    double x = 0.0;
    std::size_t bins = 16;
    double delta = 0.0;
    int levels = 6;
    std::string box_levels = "2,3,4,5,6,7,8";
    int d_out = 1;
    double dimF = 0.0;
    std::size_t seeds = 200;
    double n_scale = 2.0;
    std::size_t shape = 32;
    bool quick = false;
    std::string only;
    std::string scratch = ".";
    std::string scaling_engine = "direct";
    double levelset_tolerance = 0.15;
};

void add_synth_core(CLI::App* s, SynthArgs& a, bool grid) {
    s->add_option("--seed", a.seed, "master seed");
    s->add_option("--alpha", a.alpha, "stability index in (0, 2]");
    s->add_option("--hurst", a.hurst, "Hurst vector h1,...,hN")->required();
    s->add_option("--n", a.n, "truncation level");
    s->add_option("--M", a.M, "truncation box half-width");
    s->add_option("--atoms", a.atoms, "LePage atom count");
    s->add_option("--theta", a.theta, "importance density tail parameter");
    s->add_option("--law", a.law, "alpha = 2 coefficients: iid or atoms")->check(CLI::IsMember({"iid", "atoms"}));
    if (grid) {
        s->add_option("--grid", a.grid, "points per axis, e.g. 256x256");
        s->add_option("--bounds", a.bounds, "lo,hi per axis, e.g. 0.1,1.9x0.1,1.9")->required();
        s->add_option("--d", a.d, "number of independent components");
        s->add_option("--engine", a.engine, "wavelet, periodized or direct")
            ->check(CLI::IsMember({"wavelet", "periodized", "direct"}));
    }
}

json synth_params(const SynthArgs& a, const HurstVector& H) {
    json p;
    p["seed"] = a.seed;
    p["alpha"] = a.alpha;
    p["hurst"] = H.values();
    p["n"] = a.n;
    p["M"] = a.M;
    p["atoms"] = a.atoms;
    p["theta"] = a.theta;
    p["law"] = a.law;
    return p;
}

SynthesisOptions synth_options(const SynthArgs& a, int threads) {
    SynthesisOptions o;
    o.engine = parse_engine(a.engine);
    o.atom_count = a.atoms;
    o.theta = a.theta;
    o.gaussian_iid = a.law == "iid";
    o.threads = threads;
    return o;
}

std::vector<FieldGrid> load_fields(Run& run, const std::vector<std::string>& paths) {
    require(!paths.empty(), "at least one --field is required");
    std::vector<FieldGrid> out;
    for (const auto& p : paths) {
        const std::string bytes = read_file(p);
        run.input(p, bytes);
        out.push_back(decode_field(bytes));
    }
    return out;
}

void require_out(const Common& c) { require(!c.out.empty(), "--out is required"); }

// ---- subcommands -----------------------------------------------------------

json cmd_synth(Run& run, const Args& a) {
    require_out(a.common);
    const auto& s = a.synth;
    const HurstVector H(number_list(s.hurst));
    const auto shape = parse_shape(s.grid);
    require(shape.size() == H.size(), "grid and Hurst vector differ in dimension");
    const Region b = parse_box(s.bounds, shape.size());
    const GridSpec g = make_grid(shape, b.lower, b.upper);
    run.params = synth_params(s, H);
    run.params["grid"] = shape;
    run.params["lower"] = g.lower;
    run.params["upper"] = g.upper;
    run.params["d"] = s.d;
    run.params["engine"] = s.engine;
    FieldGrid f = synthesize(H, s.alpha, {s.n, s.M}, g, s.seed, s.d, synth_options(s, a.common.threads));
    f.meta.run_id = run.run_id();
    run.write(a.common.out, encode_field(f));
    double lo = 0.0, hi = 0.0;
    if (!f.values.empty()) {
        lo = *std::min_element(f.values.begin(), f.values.end());
        hi = *std::max_element(f.values.begin(), f.values.end());
    }
    return {{"points", g.size()}, {"components", s.d}, {"min", lo}, {"max", hi}};
}

json cmd_coeffs(Run& run, const Args& a) {
    require_out(a.common);
    const auto& s = a.synth;
    const HurstVector H(number_list(s.hurst));
    const TruncationDomain trunc{s.n, s.M};
    double entries = 1.0;
    for (std::size_t l = 0; l < H.size(); ++l)
        entries *= static_cast<double>(trunc.j_count()) * static_cast<double>(trunc.k_count());
    require(entries <= 1e8, "coefficient tensor would exceed 1e8 entries; lower n or M");
    run.params = synth_params(s, H);
    const bool iid = s.alpha == 2.0 && s.law == "iid";
    LePageAtoms atoms;
    if (iid) {
        atoms.seed = s.seed;
        atoms.N = H.size();
    } else {
        atoms = sample_atoms(s.seed, s.atoms, H.size(), s.theta);
    }
    const auto T = build_coefficient_tensor(atoms, trunc, s.alpha, H,
                                            iid ? CoefficientLaw::gaussian_iid : CoefficientLaw::lepage);
    run.write(a.common.out, encode_coefficients(T));
    double mx = 0.0;
    for (const auto& z : T.entries) mx = std::max(mx, std::abs(z));
    return {{"count", T.entries.size()}, {"kmax", trunc.kmax()}, {"max_abs", mx}};
}

json cmd_tables(Run& run, const Args& a) {
    require_out(a.common);
    run.params["what"] = a.what;
    std::size_t rows = 0;
    std::string body;
    if (a.what == "psi-hat") {
        Csv csv({"xi", "re", "im"});
        for (int i = 0; i <= 2000; ++i) {
            const double xi = -10.0 + 20.0 * i / 2000.0;
            const cplx z = psi_hat(xi);
            csv.row({num(xi), num(z.real()), num(z.imag())});
            ++rows;
        }
        body = csv.str(run.run_id());
    } else if (a.what == "psi-v") {
        run.params["v"] = a.v;
        run.params["alpha"] = a.synth.alpha;
        run.params["halfwidth"] = a.halfwidth;
        const FractionalTable t(a.v, a.synth.alpha, a.halfwidth);
        Csv csv({"y", "psi_v"});
        for (std::size_t m = 0; m < t.values().size(); ++m) {
            csv.row({num(t.node(m)), num(t.values()[m])});
            ++rows;
        }
        body = csv.str(run.run_id());
    } else if (a.what == "kappa") {
        Csv csv({"alpha", "v", "kappa"});
        for (int i = 1; i <= 10; ++i)
            for (int j = 1; j <= 9; ++j) {
                const double alpha = 0.2 * i, v = 0.1 * j;
                csv.row({num(alpha), num(v), num(kappa(alpha, v))});
                ++rows;
            }
        body = csv.str(run.run_id());
    } else {
        fail(ErrorKind::invalid_input, "--what must be psi-hat, psi-v or kappa");
    }
    run.write(a.common.out, body);
    return {{"rows", rows}};
}

json cmd_ecf(Run& run, const Args& a) {
    const auto& s = a.synth;
    const HurstVector H(number_list(s.hurst));
    const auto t = number_list(a.point);
    require(t.size() == H.size(), "--point and --hurst differ in dimension");
    require(a.scale > 0.0, "--scale must be positive");
    run.params = synth_params(s, H);
    run.params["point"] = t;
    run.params["samples"] = a.samples;
    run.params["scale"] = a.scale;
    std::vector<double> pts = t;
    for (double x : t) pts.push_back(a.scale * x);
    std::vector<std::vector<double>> e(a.samples);
    parallel_for(a.samples, a.common.threads, [&](std::size_t r) {
        const auto atoms = sample_atoms(derive_seed(s.seed, StreamLabel::replication, r), s.atoms, H.size(), s.theta);
        e[r] = direct_field_points(atoms, pts, H, s.alpha);
    });
    std::vector<double> x0(a.samples), x1(a.samples);
    for (std::size_t r = 0; r < a.samples; ++r) {
        x0[r] = e[r][0];
        x1[r] = e[r][1];
    }
    std::vector<double> st;
    for (double x : t) st.push_back(a.scale * x);
    const double ref0 = point_scale(t, H, s.alpha), ref1 = point_scale(st, H, s.alpha);
    double s0 = 0.0, s1 = 0.0;
    std::string how;
    if (s.alpha == 2.0) {
        // Gaussian: the scale is sqrt(E X^2 / 2).
        double m0 = 0.0, m1 = 0.0;
        for (std::size_t r = 0; r < a.samples; ++r) {
            m0 += x0[r] * x0[r];
            m1 += x1[r] * x1[r];
        }
        s0 = std::sqrt(m0 / (2.0 * static_cast<double>(a.samples)));
        s1 = std::sqrt(m1 / (2.0 * static_cast<double>(a.samples)));
        how = "second moment";
    } else {
        s0 = estimate_stable_scale(x0, s.alpha).sigma_hat;
        s1 = estimate_stable_scale(x1, s.alpha).sigma_hat;
        how = "ecf fit";
    }
    const double want_ratio = std::pow(a.scale, H.sum());
    const double e0 = std::abs(s0 - ref0) / ref0, e1 = std::abs(s1 - ref1) / ref1;
    const double er = std::abs(s1 / s0 - want_ratio) / want_ratio;
    if (!a.common.out.empty()) {
        Csv csv({"quantity", "estimate", "reference", "relative_error", "pass"});
        csv.row({"scale(t)", num(s0), num(ref0), num(e0), e0 < 0.05 ? "true" : "false"});
        csv.row({"scale(c t)", num(s1), num(ref1), num(e1), e1 < 0.05 ? "true" : "false"});
        csv.row({"scaling ratio", num(s1 / s0), num(want_ratio), num(er), er < 0.05 ? "true" : "false"});
        run.write(a.common.out, csv.str(run.run_id()));
    }
    return {{"method", how},
            {"sigma_hat", s0},
            {"sigma_ref", ref0},
            {"rel_error", e0},
            {"scaling_ratio", s1 / s0},
            {"scaling_ref", want_ratio},
            {"checks", {{"scale", e0 < 0.05}, {"scaled_point", e1 < 0.05}, {"operator_scaling", er < 0.05}}},
            {"pass", e0 < 0.05 && e1 < 0.05 && er < 0.05}};
}

json cmd_holder(Run& run, const Args& a) {
    const auto fields = load_fields(run, a.fields);
    run.params["axis"] = a.axis;
    run.params["tolerance"] = a.tolerance;
    const std::size_t N = fields[0].N();
    std::vector<std::size_t> axes;
    if (a.axis == "all") {
        for (std::size_t l = 0; l < N; ++l)
            if (fields[0].grid.shape[l] >= 256) axes.push_back(l);
        if (axes.empty()) fail(ErrorKind::too_small_grid, "no axis has 256 or more points");
    } else {
        const double l = to_double(a.axis);
        require(l >= 0 && l < static_cast<double>(N) && l == std::floor(l), "--axis out of range");
        axes.push_back(static_cast<std::size_t>(l));
    }
    Csv csv({"field", "axis", "component", "slope", "lines"});
    json per = json::array();
    bool pass = true;
    for (std::size_t l : axes) {
        double acc = 0.0;
        std::size_t count = 0;
        for (std::size_t i = 0; i < fields.size(); ++i)
            for (std::size_t c = 0; c < fields[i].components(); ++c) {
                const auto est = holder_axis_exponent(fields[i], l, c);
                csv.row({std::to_string(i), std::to_string(l), std::to_string(c), num(est.slope), std::to_string(est.lines)});
                acc += est.slope;
                ++count;
            }
        const double mean = acc / static_cast<double>(count);
        json entry{{"axis", l}, {"mean_slope", mean}};
        if (fields[0].meta.H.size() == N) {
            const double target = fields[0].meta.H[l];
            const bool ok = std::abs(mean - target) <= a.tolerance;
            entry["target"] = target;
            entry["pass"] = ok;
            pass = pass && ok;
        }
        per.push_back(entry);
    }
    if (!a.common.out.empty()) run.write(a.common.out, csv.str(run.run_id()));
    return {{"fields", fields.size()}, {"axes", per}, {"pass", pass}};
}

json cmd_localtime(Run& run, const Args& a) {
    const auto fields = load_fields(run, a.fields);
    const GridSpec& g = fields[0].grid;
    const Region T = a.region.empty() ? full_region(g) : parse_box(a.region, g.N());
    run.params["region"] = {T.lower, T.upper};
    run.params["x"] = a.x;
    run.params["bins"] = a.bins;
    run.params["delta"] = a.delta;
    run.params["levels"] = a.levels;
    Csv csv({"field", "bin_lo", "bin_hi", "density"});
    double identity = 0.0;
    std::size_t positive = 0;
    std::vector<double> lt;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        require(fields[i].grid.shape == g.shape && fields[i].grid.lower == g.lower && fields[i].grid.upper == g.upper,
                "all fields must share one grid");
        const auto od = occupation_density(fields[i], T, a.bins);
        identity = std::max(identity, std::abs(od.total() - od.region_measure) / od.region_measure);
        for (std::size_t b = 0; b < od.density.size(); ++b)
            csv.row({std::to_string(i), num(od.bin_edges[b]), num(od.bin_edges[b + 1]), num(od.density[b])});
        const double delta = a.delta > 0.0 ? a.delta : resolution_delta(fields[i]);
        lt.push_back(local_time_at(fields[i], T, a.x, delta));
        positive += lt.back() > 0.0;
    }
    json out{{"fields", fields.size()},
             {"local_time", lt},
             {"positive_fraction", static_cast<double>(positive) / static_cast<double>(fields.size())},
             {"occupation_identity_error", identity}};
    json checks{{"occupation_identity", identity < 1e-12}};
    const auto& m = fields[0].meta;
    if (m.H.size() == g.N() && m.alpha >= 1.0 && m.d == 1 && m.H.metric_dimension() > 1.0) {
        const auto rep = localtime_holder_report(fields, T, m.H, m.alpha, 1, a.levels, a.bins);
        out["holder"] = {{"tau", rep.tau},
                         {"predicted_sum", rep.predicted_sum},
                         {"fitted_slope", rep.fitted_slope},
                         {"threshold", rep.threshold},
                         {"r_squared", rep.r_squared}};
        checks["holder"] = rep.pass;
    }
    out["checks"] = checks;
    bool pass = true;
    for (const auto& [k, v] : checks.items()) pass = pass && v.get<bool>();
    out["pass"] = pass;
    if (!a.common.out.empty()) run.write(a.common.out, csv.str(run.run_id()));
    return out;
}

json cmd_levelset(Run& run, const Args& a) {
    const auto fields = load_fields(run, a.fields);
    const auto levels = int_list(a.box_levels);
    run.params["x"] = a.x;
    run.params["delta"] = a.delta;
    run.params["levels"] = levels;
    run.params["tolerance"] = a.levelset_tolerance;
    const double tol = a.levelset_tolerance;
    Csv csv({"field", "points", "delta", "slope", "r_squared", "low_confidence"});
    double acc = 0.0;
    std::size_t used = 0;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        const auto& f = fields[i];
        double delta = a.delta;
        if (!(delta > 0.0))
            for (std::size_t c = 0; c < f.components(); ++c) delta = std::max(delta, resolution_delta(f, c));
        const std::vector<double> xs(f.components(), a.x);
        const auto L = level_set(f, xs, delta);
        if (L.empty()) {
            csv.row({std::to_string(i), "0", num(delta), "", "", "true"});
            continue;
        }
        const auto est = box_count_dimension(grid_points(f.grid, L), full_region(f.grid), BoxMetric::euclidean, levels);
        csv.row({std::to_string(i), std::to_string(L.size()), num(delta), num(est.slope), num(est.r_squared),
                 est.low_confidence ? "true" : "false"});
        acc += est.slope;
        ++used;
    }
    json out{{"fields", fields.size()}, {"used", used}};
    const double mean = used ? acc / static_cast<double>(used) : std::nan("");
    out["mean_slope"] = jnum(mean);
    const auto& m = fields[0].meta;
    if (m.H.size() == fields[0].N()) {
        const auto pred = dim_inverse_image_formula(m.H, static_cast<int>(m.d), 0.0);
        out["predicted"] = jnum(pred.value);
        out["pass"] = used > 0 && pred.in_regime && std::abs(mean - pred.value) <= tol;
    }
    if (!a.common.out.empty()) run.write(a.common.out, csv.str(run.run_id()));
    return out;
}

json cmd_formula(Run& run, const Args& a) {
    const HurstVector H(number_list(a.synth.hurst));
    run.params["hurst"] = H.values();
    run.params["d"] = a.d_out;
    run.params["dimF"] = a.dimF;
    const auto r = dim_inverse_image_formula(H, a.d_out, a.dimF);
    json out{{"value", jnum(r.value)}, {"argmin_k", r.argmin_k}, {"sandwich", r.sandwich}, {"in_regime", r.in_regime}};
    if (H.metric_dimension() > a.d_out) {
        const auto bt = beta_tau(H, a.d_out);
        out["tau"] = bt.tau;
        out["beta"] = bt.beta;
    }
    if (!a.common.out.empty()) {
        Csv csv({"value", "argmin_k", "sandwich", "in_regime"});
        csv.row({std::isfinite(r.value) ? num(r.value) : "", std::to_string(r.argmin_k), r.sandwich ? "true" : "false",
                 r.in_regime ? "true" : "false"});
        run.write(a.common.out, csv.str(run.run_id()));
    }
    return out;
}

json cmd_scaling(Run& run, const Args& a) {
    SynthArgs s = a.synth;
    s.engine = a.scaling_engine;
    const HurstVector H(number_list(s.hurst));
    const Region I = parse_box(a.region.empty() ? "0.1,0.3" : a.region, H.size());
    const double delta = a.delta > 0.0 ? a.delta : 0.1;
    run.params = synth_params(s, H);
    run.params["engine"] = s.engine;
    run.params["region"] = {I.lower, I.upper};
    run.params["seeds"] = a.seeds;
    run.params["n_scale"] = a.n_scale;
    run.params["x"] = a.x;
    run.params["delta"] = delta;
    run.params["shape"] = a.shape;
    const auto opts = synth_options(s, a.common.threads);
    auto make = [&](const GridSpec& g, std::size_t rep) {
        return synthesize(H, s.alpha, {s.n, s.M}, g, derive_seed(s.seed, StreamLabel::replication, rep), 1, opts);
    };
    const auto r = localtime_scaling_check(make, a.seeds, H, s.alpha, 1, I, a.n_scale, a.x, delta, a.shape, s.M);
    if (!a.common.out.empty()) {
        Csv csv({"replication", "base", "scaled"});
        for (std::size_t i = 0; i < r.base.size(); ++i) csv.row({std::to_string(i), num(r.base[i]), num(r.scaled[i])});
        run.write(a.common.out, csv.str(run.run_id()));
    }
    return {{"exponent", r.exponent},
            {"factor", r.factor},
            {"ks_statistic", r.ks.statistic},
            {"p_value", r.ks.p_value},
            {"pass", r.pass}};
}

json cmd_report(Run& run, const Args& a) {
    AcceptanceConfig cfg;
    cfg.threads = a.common.threads;
    cfg.quick = a.quick;
    if (!a.only.empty()) cfg.only = int_list(a.only);
    cfg.scratch_dir = a.scratch;
    run.params["quick"] = a.quick;
    run.params["only"] = cfg.only;
    const auto results = run_acceptance(cfg);
    Csv csv({"criterion", "title", "pass", "detail"});
    json list = json::array();
    bool all = true;
    for (const auto& r : results) {
        csv.row({std::to_string(r.id), r.title, r.pass ? "true" : "false", r.detail});
        list.push_back({{"criterion", r.id}, {"title", r.title}, {"pass", r.pass}, {"detail", r.detail}});
        all = all && r.pass;
    }
    if (!a.common.out.empty()) run.write(a.common.out, csv.str(run.run_id()));
    return {{"criteria", list}, {"passed", std::count_if(results.begin(), results.end(), [](const auto& r) { return r.pass; })},
            {"total", results.size()}, {"pass", all}};
}

// Inserts "--key value" tokens from a JSON config after the subcommand name,
// so flags given on the command line (parsed later) take precedence.
std::vector<std::string> merge_config(const std::vector<std::string>& args, CLI::App& app) {
    std::string path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
        if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
    }
    if (path.empty() || args.empty()) return args;
    CLI::App* sub = nullptr;
    try {
        sub = app.get_subcommand(args[0]);
    } catch (const CLI::OptionNotFound&) {
        return args;
    }
    json cfg;
    try {
        cfg = json::parse(read_file(path));
    } catch (const json::exception& e) {
        fail(ErrorKind::invalid_input, "config " + path + " is not valid JSON: " + e.what());
    }
    require(cfg.is_object(), "config must be a JSON object");
    std::vector<std::string> extra;
    for (const auto& [key, value] : cfg.items()) {
        if (key == "config") continue;
        CLI::Option* opt = sub->get_option_no_throw("--" + key);
        require(opt != nullptr, "unknown config key '" + key + "' for " + args[0]);
        auto scalar = [](const json& v) {
            if (v.is_string()) return v.get<std::string>();
            if (v.is_number_integer()) return std::to_string(v.get<long long>());
            if (v.is_number_unsigned()) return std::to_string(v.get<unsigned long long>());
            if (v.is_number()) return num(v.get<double>());
            if (v.is_boolean()) return std::string(v.get<bool>() ? "true" : "false");
            fail(ErrorKind::invalid_input, "unsupported config value " + v.dump());
        };
        if (value.is_boolean() && opt->get_expected_max() == 0) {
            if (value.get<bool>()) extra.push_back("--" + key);
        } else if (value.is_array() && opt->get_expected_max() > 1) {
            for (const auto& v : value) extra.insert(extra.end(), {"--" + key, scalar(v)});
        } else if (value.is_array()) {
            std::string joined;
            for (const auto& v : value) joined += (joined.empty() ? "" : ",") + scalar(v);
            extra.insert(extra.end(), {"--" + key, joined});
        } else {
            extra.insert(extra.end(), {"--" + key, scalar(value)});
        }
    }
    std::vector<std::string> merged{args[0]};
    merged.insert(merged.end(), extra.begin(), extra.end());
    merged.insert(merged.end(), args.begin() + 1, args.end());
    return merged;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Harmonizable fractional stable sheet synthesis and geometry checks", "hfss"};
    app.require_subcommand(1);
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    Args a;
    using Handler = json (*)(Run&, const Args&);
    std::map<CLI::App*, std::pair<std::string, Handler>> handlers;
    auto sub = [&](const std::string& name, const std::string& help, Handler h) {
        CLI::App* s = app.add_subcommand(name, help);
        s->add_option("--threads", a.common.threads, "worker threads (results do not depend on it)")
            ->check(CLI::Range(1, 1024));
        s->add_option("--config", a.common.config, "JSON file of flag values; flags override it");
        handlers[s] = {name, h};
        return s;
    };

    auto* synth = sub("synth", "synthesize a field grid", cmd_synth);
    add_synth_core(synth, a.synth, true);
    synth->add_option("--out", a.common.out, "output .zh file");

    auto* coeffs = sub("coeffs", "write the coefficient tensor", cmd_coeffs);
    add_synth_core(coeffs, a.synth, false);
    coeffs->add_option("--out", a.common.out, "output coefficient file");

    auto* tables = sub("tables", "dump psi_hat, psi^v or kappa as CSV", cmd_tables);
    tables->add_option("--what", a.what, "psi-hat, psi-v or kappa")->check(CLI::IsMember({"psi-hat", "psi-v", "kappa"}));
    tables->add_option("--v", a.v, "fractional order for psi-v");
    tables->add_option("--alpha", a.synth.alpha, "stability index for psi-v");
    tables->add_option("--halfwidth", a.halfwidth, "psi-v table half-width");
    tables->add_option("--out", a.common.out, "output CSV");

    auto* ecf = sub("ecf-check", "scale of direct LePage samples against quadrature", cmd_ecf);
    add_synth_core(ecf, a.synth, false);
    ecf->add_option("--point", a.point, "evaluation point t");
    ecf->add_option("--samples", a.samples, "realizations");
    ecf->add_option("--scale", a.scale, "dilation c for the operator scaling check");
    ecf->add_option("--out", a.common.out, "output CSV");

    auto* holder = sub("holder", "axis Holder exponents of field files", cmd_holder);
    holder->add_option("--field", a.fields, "input .zh files")->required()->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
    holder->add_option("--axis", a.axis, "axis index or 'all'");
    holder->add_option("--tolerance", a.tolerance, "allowed |slope - H|");
    holder->add_option("--out", a.common.out, "output CSV");

    auto* lt = sub("localtime", "occupation density, local time and its Holder regression", cmd_localtime);
    lt->add_option("--field", a.fields, "input .zh files")->required()->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
    lt->add_option("--region", a.region, "lo,hi per axis (default: whole grid)");
    lt->add_option("--x", a.x, "level");
    lt->add_option("--bins", a.bins, "histogram bins");
    lt->add_option("--delta", a.delta, "level thickness (default: resolution matched)");
    lt->add_option("--levels", a.levels, "dyadic rectangles in the Holder regression");
    lt->add_option("--out", a.common.out, "output CSV");

    auto* ls = sub("levelset-dim", "box-counting dimension of level sets", cmd_levelset);
    ls->add_option("--field", a.fields, "input .zh files")->required()->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
    ls->add_option("--x", a.x, "level");
    ls->add_option("--delta", a.delta, "level thickness (default: resolution matched)");
    ls->add_option("--levels", a.box_levels, "dyadic box levels, e.g. 2,3,4,5,6");
    ls->add_option("--tolerance", a.levelset_tolerance, "allowed |slope - formula|");
    ls->add_option("--out", a.common.out, "output CSV");

    auto* formula = sub("formula", "Hausdorff dimension of the inverse image", cmd_formula);
    formula->add_option("--hurst", a.synth.hurst, "Hurst vector")->required();
    formula->add_option("--d", a.d_out, "target dimension d");
    formula->add_option("--dimF", a.dimF, "dimension of F");
    formula->add_option("--out", a.common.out, "output CSV");

    auto* sc = sub("scaling-check", "local-time scaling law by a two-sample KS test", cmd_scaling);
    add_synth_core(sc, a.synth, false);
    sc->add_option("--engine", a.scaling_engine, "wavelet, periodized or direct")
        ->check(CLI::IsMember({"wavelet", "periodized", "direct"}));
    sc->add_option("--region", a.region, "base rectangle lo,hi per axis");
    sc->add_option("--seeds", a.seeds, "replications per sample");
    sc->add_option("--n-scale", a.n_scale, "dilation n");
    sc->add_option("--x", a.x, "level");
    sc->add_option("--delta", a.delta, "level thickness on the base rectangle");
    sc->add_option("--shape", a.shape, "grid points per axis");
    sc->add_option("--out", a.common.out, "output CSV");

    auto* report = sub("report", "run the acceptance suite", cmd_report);
    report->add_flag("--quick", a.quick, "smaller ensembles (thresholds unchanged)");
    report->add_option("--only", a.only, "comma-separated criteria");
    report->add_option("--scratch", a.scratch, "directory for temporary files");
    report->add_option("--out", a.common.out, "output CSV");

    try {
        std::vector<std::string> merged;
        try {
            merged = merge_config(args, app);
        } catch (const Error& e) {
            err << "hfss: " << e.what() << "\n";
            return exit_validation;
        }
        std::vector<std::string> rev(merged.rbegin(), merged.rend());
        try {
            app.parse(rev);
        } catch (const CLI::ParseError& e) {
            const int code = app.exit(e, err, err);
            return code == 0 ? exit_ok : exit_validation;
        }
        CLI::App* chosen = app.get_subcommands().front();
        const auto& [name, handler] = handlers.at(chosen);
        Run run;
        run.command = name;
        run.argv = args;
        json summary = handler(run, a);
        summary["command"] = name;
        summary["run_id"] = run.run_id();
        summary["version"] = software_version;
        if (!a.common.out.empty() && run.outputs.count(a.common.out)) {
            summary["out"] = a.common.out;
            summary["sha256"] = run.outputs.at(a.common.out);
            run.manifest(a.common.out);
        }
        out << summary.dump() << "\n";
        return exit_ok;
    } catch (const Error& e) {
        err << "hfss: " << e.what() << "\n";
        return exit_validation;
    } catch (const std::exception& e) {
        err << "hfss: internal error: " << e.what() << "\n";
        return exit_internal;
    }
}

}  // namespace hfss
