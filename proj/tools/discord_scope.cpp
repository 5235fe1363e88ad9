// discord-scope: landscapes, zero lines, quantifiers, discord and shot-level
// simulation for two-qubit separable states from the command line.

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "discord_scope/discord.hpp"
#include "discord_scope/errors.hpp"
#include "discord_scope/interferometer.hpp"
#include "discord_scope/io.hpp"
#include "discord_scope/protocol_sim.hpp"
#include "discord_scope/states.hpp"
#include "discord_scope/zerovis.hpp"

#ifndef DISCORD_SCOPE_VERSION
#define DISCORD_SCOPE_VERSION "0.0.0"
#endif

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;
using namespace dscope;

namespace {

enum ExitCode {
    kOk = 0,
    kMalformedSpec = 2,
    kInvalidAxes = 3,
    kVerificationFailed = 4,
    kModuleError = 5,
    kInsufficientPhases = 6,
};

struct ExitError {
    int code;
    std::string message;
};

struct Options {
    std::string command;
    std::string spec_path;
    std::string out_dir;
    std::string axes = "alpha,beta";
    std::vector<std::string> sets;
    std::string phases;
    int resolution = 256;
    int beta_grid = 512;
    int grid_n = 64;
    double refine_tol = 1e-8;
    std::uint64_t shots = 100000;
    std::uint64_t seed = 1;
    int threads = 1;
    bool degrees = false;
};

double parse_number(std::string_view text, const std::string& what) {
    double x = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), x);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size())
        throw ExitError{kMalformedSpec, what + ": not a number: '" + std::string(text) + "'"};
    return x;
}

json load_json(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ExitError{kMalformedSpec, "cannot read spec file '" + path + "'"};
    try {
        return json::parse(f);
    } catch (const json::parse_error& e) {
        throw ExitError{kMalformedSpec, path + ": " + e.what()};
    }
}

SeparableStateSpec load_spec(const json& doc, bool degrees) {
    try {
        return spec_from_json(doc, degrees);
    } catch (const InvalidSpec& e) {
        throw ExitError{kMalformedSpec, std::string("malformed spec: ") + e.what()};
    }
}

// Interferometer parameters settable from the spec's "config" block or --set.
void apply_setting(InterferometerConfig& c, const std::string& key, double v) {
    static const std::map<std::string, double InterferometerConfig::*> loose{
        {"phi_a", &InterferometerConfig::phi_a}, {"phi_b", &InterferometerConfig::phi_b}};
    if (auto it = loose.find(key); it != loose.end()) {
        c.*(it->second) = v;
        return;
    }
    static const std::map<std::string, std::pair<BeamSplitterSetting InterferometerConfig::*,
                                                 double BeamSplitterSetting::*>>
        splitter{{"alpha", {&InterferometerConfig::a_bs, &BeamSplitterSetting::mix_angle}},
                 {"a_phi_r", {&InterferometerConfig::a_bs, &BeamSplitterSetting::phi_r}},
                 {"a_phi_t", {&InterferometerConfig::a_bs, &BeamSplitterSetting::phi_t}},
                 {"beta", {&InterferometerConfig::b_bs, &BeamSplitterSetting::mix_angle}},
                 {"b_phi_r", {&InterferometerConfig::b_bs, &BeamSplitterSetting::phi_r}},
                 {"b_phi_t", {&InterferometerConfig::b_bs, &BeamSplitterSetting::phi_t}}};
    const auto it = splitter.find(key);
    if (it == splitter.end()) throw ExitError{kMalformedSpec, "config: unknown parameter '" + key + "'"};
    (c.*(it->second.first)).*(it->second.second) = v;
}

InterferometerConfig load_config(const json& doc, const Options& opt, ordered_json& overrides) {
    InterferometerConfig c;
    const double scale = opt.degrees ? kPi / 180.0 : 1.0;
    if (doc.contains("config")) {
        const json& block = doc.at("config");
        if (!block.is_object()) throw ExitError{kMalformedSpec, "malformed spec: config: expected an object"};
        for (const auto& [key, value] : block.items()) {
            if (!value.is_number())
                throw ExitError{kMalformedSpec, "malformed spec: config." + key + ": expected a number"};
            apply_setting(c, key, value.get<double>() * scale);
        }
    }
    for (const std::string& s : opt.sets) {
        const auto eq = s.find('=');
        if (eq == std::string::npos) throw ExitError{kMalformedSpec, "--set expects key=value, got '" + s + "'"};
        const std::string key = s.substr(0, eq);
        const double v = parse_number(std::string_view(s).substr(eq + 1), "--set " + key) * scale;
        apply_setting(c, key, v);
        overrides[key] = v;
    }
    return c;
}

std::vector<double> parse_phases(const Options& opt) {
    std::vector<double> out;
    if (opt.phases.empty()) {
        for (int i = 0; i < 16; ++i) out.push_back(kTwoPi * i / 16);
        return out;
    }
    const double scale = opt.degrees ? kPi / 180.0 : 1.0;
    std::string_view rest = opt.phases;
    while (!rest.empty()) {
        const auto comma = rest.find(',');
        out.push_back(parse_number(rest.substr(0, comma), "--phases") * scale);
        if (comma == std::string_view::npos) break;
        rest.remove_prefix(comma + 1);
    }
    return out;
}

std::pair<Axis, Axis> parse_axes(const std::string& text) {
    const auto comma = text.find(',');
    if (comma == std::string::npos) throw ExitError{kInvalidAxes, "--axes expects two names, e.g. alpha,beta"};
    const auto x = parse_axis(std::string_view(text).substr(0, comma));
    const auto y = parse_axis(std::string_view(text).substr(comma + 1));
    if (!x || !y) throw ExitError{kInvalidAxes, "unknown axis in '" + text + "' (alpha, beta, phi_a, phi_b)"};
    if (*x == *y) throw ExitError{kInvalidAxes, "axes must differ"};
    return {*x, *y};
}

std::string timestamp() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y%m%dT%H%M%SZ", &tm);
    return buf;
}

fs::path output_dir(const Options& opt) {
    if (!opt.out_dir.empty()) return opt.out_dir;
    const char* env = std::getenv("DISCORD_SCOPE_OUT");
    const fs::path root = env && *env ? fs::path(env) : fs::path("out");
    return root / opt.command / timestamp();
}

// Files are rendered in memory and written only after all computation has
// succeeded, each via temp-and-rename, with the manifest last.
struct Outputs {
    std::vector<std::pair<std::string, std::string>> files;
    ordered_json manifest;

    void add_csv(const std::string& name, const CsvTable& t) { files.emplace_back(name, t.str("manifest.json")); }
    void add_json(const std::string& name, ordered_json j) {
        j["manifest"] = "manifest.json";
        files.emplace_back(name, j.dump(2) + "\n");
    }
};

void commit(const fs::path& dir, Outputs& out, double wall_seconds) {
    fs::create_directories(dir);
    ordered_json names = ordered_json::array();
    for (const auto& [name, content] : out.files) {
        write_file_atomic(dir / name, content);
        names.push_back(name);
    }
    out.manifest["outputs"] = names;
    out.manifest["wall_time_seconds"] = wall_seconds;
    write_file_atomic(dir / "manifest.json", out.manifest.dump(2) + "\n");
    std::cout << dir.string() << "\n";
}

void cmd_landscape(const SeparableStateSpec& spec, const InterferometerConfig& base,
                   const Options& opt, Outputs& out) {
    const auto [x, y] = parse_axes(opt.axes);
    if (opt.resolution < 1) throw ExitError{kMalformedSpec, "--resolution must be positive"};
    LandscapeRequest req{x, y, opt.resolution, opt.resolution, base};
    const Landscape l = sample_landscape(spec, req, opt.threads);
    out.manifest["axes"] = {axis_name(x), axis_name(y)};
    out.manifest["resolution"] = opt.resolution;

    std::size_t arg = 0;
    for (std::size_t k = 1; k < l.values.size(); ++k)
        if (l.values[k] < l.values[arg]) arg = k;
    ordered_json summary;
    summary["axes"] = {axis_name(x), axis_name(y)};
    summary["resolution"] = opt.resolution;
    summary["config"] = to_json(base);
    summary["min_visibility"] = l.values[arg];
    summary["argmin"] = {{axis_name(x), l.xs[arg % l.xs.size()]}, {axis_name(y), l.ys[arg / l.xs.size()]}};
    summary["landscape_class"] = landscape_kind_name(classify_landscape(spec, 1e-10, 512, base).kind);
    out.add_csv("landscape.csv", landscape_csv(l));
    out.add_json("landscape.json", summary);
}

void cmd_zerolines(const SeparableStateSpec& spec, const InterferometerConfig& base,
                   const Options& opt, Outputs& out) {
    TraceOptions t;
    t.beta_samples = opt.beta_grid;
    t.base = base;
    t.throw_on_failure = false;
    const ZeroLine z = trace_zero_lines(spec, t);
    out.manifest["beta_grid"] = opt.beta_grid;
    if (static_cast<double>(z.verification_failures) > 1e-3 * static_cast<double>(z.beta.size()))
        throw ExitError{kVerificationFailed,
                        "zero-visibility verification failed on " +
                            std::to_string(z.verification_failures) + " of " +
                            std::to_string(z.beta.size()) + " samples"};
    CsvTable lines({"beta", "sin_beta"});
    for (double b : z.vertical_lines) lines.row().add(b).add(std::sin(b));
    out.add_csv("zerolines.csv", zeroline_csv(z));
    out.add_csv("vertical_lines.csv", lines);
    out.add_json("zerolines.json", zeroline_summary(z));
}

QuantifierOptions quantifier_options(const InterferometerConfig& base, const Options& opt) {
    QuantifierOptions q;
    q.beta_grid_n = opt.beta_grid;
    q.base = base;
    return q;
}

void cmd_quantify(const SeparableStateSpec& spec, const InterferometerConfig& base,
                  const Options& opt, Outputs& out) {
    const QuantifierResult q = combined_witness(spec, quantifier_options(base, opt));
    out.manifest["beta_grid"] = opt.beta_grid;
    out.add_json("quantify.json", to_json(q));
    out.add_csv("f_curves.csv", f_curves_csv(q.samples));
}

DiscordOptions discord_options(const Options& opt) { return {opt.grid_n, opt.refine_tol, opt.threads}; }

void cmd_discord(const SeparableStateSpec& spec, const Options& opt, Outputs& out) {
    const DiscordResult d = discord(assemble_density(spec), discord_options(opt));
    out.manifest["grid_n"] = opt.grid_n;
    out.manifest["refine_tol"] = opt.refine_tol;
    out.add_json("discord.json", to_json(d));
}

void cmd_simulate(const SeparableStateSpec& spec, const InterferometerConfig& base,
                  const Options& opt, Outputs& out) {
    const std::vector<double> phases = parse_phases(opt);
    const std::vector<SweepPoint> sweep =
        simulate_sweep(spec, base, phases, opt.shots, opt.seed, opt.threads);
    std::vector<FringePoint> points;
    for (const SweepPoint& p : sweep) points.push_back({p.phi_d, p.k_hat, p.batch.n_shots});
    const FringeFit fit = fit_visibility(points);
    const VisibilityCoefficients exact = visibility_coefficients(spec, base);

    out.manifest["shots"] = opt.shots;
    out.manifest["seed"] = opt.seed;
    out.manifest["phases"] = phases;
    ordered_json j;
    j["config"] = to_json(base);
    j["fit"] = to_json(fit);
    j["analytic"] = {{"c", exact.mean_term},
                     {"a_re", exact.amplitude.real()},
                     {"a_im", exact.amplitude.imag()},
                     {"visibility", exact.visibility}};
    ordered_json batches = ordered_json::array();
    for (const SweepPoint& p : sweep) {
        ordered_json b = to_json(p.batch);
        b["phi_d"] = p.phi_d;
        batches.push_back(b);
    }
    j["batches"] = batches;
    out.add_csv("simulate.csv", sweep_csv(sweep));
    out.add_json("simulate.json", j);
}

// A sweep target: a JSON pointer into the spec with value = offset + scale * x.
struct SweepTarget {
    json::json_pointer pointer;
    double scale = 1.0;
    double offset = 0.0;
};

void cmd_compare(const json& doc, const InterferometerConfig& base, const Options& opt,
                 Outputs& out) {
    if (!doc.contains("sweep") || !doc.at("sweep").is_object())
        throw ExitError{kMalformedSpec, "malformed spec: sweep: missing family sweep block"};
    const json& sw = doc.at("sweep");
    auto number = [&sw](const char* key) {
        if (!sw.contains(key) || !sw.at(key).is_number())
            throw ExitError{kMalformedSpec, std::string("malformed spec: sweep.") + key + ": expected a number"};
        return sw.at(key).get<double>();
    };
    const double scale = opt.degrees ? kPi / 180.0 : 1.0;
    const double from = number("from") * scale, to = number("to") * scale;
    const double steps_d = number("steps");
    if (steps_d < 1 || steps_d != std::floor(steps_d))
        throw ExitError{kMalformedSpec, "malformed spec: sweep.steps: expected a positive integer"};
    const int steps = static_cast<int>(steps_d);
    const std::string symbol = sw.value("symbol", std::string("x"));

    std::vector<SweepTarget> targets;
    json paths = sw.contains("paths") ? sw.at("paths") : json::array();
    if (sw.contains("path")) paths.push_back(sw.at("path"));
    if (!paths.is_array() || paths.empty())
        throw ExitError{kMalformedSpec, "malformed spec: sweep.paths: expected at least one path"};
    for (std::size_t i = 0; i < paths.size(); ++i) {
        const json& p = paths[i];
        const std::string where = "malformed spec: sweep.paths[" + std::to_string(i) + "]";
        try {
            if (p.is_string()) {
                targets.push_back({json::json_pointer(p.get<std::string>())});
            } else if (p.is_object() && p.contains("path") && p.at("path").is_string()) {
                SweepTarget t{json::json_pointer(p.at("path").get<std::string>())};
                t.scale = p.value("scale", 1.0);
                t.offset = p.value("offset", 0.0) * scale;
                targets.push_back(t);
            } else {
                throw ExitError{kMalformedSpec, where + ": expected a pointer or {path, scale, offset}"};
            }
        } catch (const json::exception& e) {
            throw ExitError{kMalformedSpec, where + ": " + e.what()};
        }
    }

    json templ = doc;
    templ.erase("sweep");
    std::vector<SeparableStateSpec> specs;
    std::vector<double> params;
    for (int k = 0; k < steps; ++k) {
        const double x = steps == 1 ? from : from + (to - from) * k / (steps - 1);
        json inst = templ;
        for (const SweepTarget& t : targets) {
            try {
                inst.at(t.pointer) = (t.offset + t.scale * x) / scale;
            } catch (const json::exception& e) {
                throw ExitError{kMalformedSpec, "malformed spec: sweep path " + t.pointer.to_string() + ": " + e.what()};
            }
        }
        specs.push_back(load_spec(inst, opt.degrees));
        params.push_back(x);
    }

    CsvTable t({symbol, "d_a", "delta2_alpha", "delta2_phi", "witness"});
    const QuantifierOptions qopt = quantifier_options(base, opt);
    for (std::size_t k = 0; k < specs.size(); ++k) {
        const DiscordResult d = discord(assemble_density(specs[k]), discord_options(opt));
        const QuantifierResult q = combined_witness(specs[k], qopt);
        t.row().add(params[k]).add(d.d_a).add(q.delta2_alpha).add(q.delta2_phi).add(q.witness);
    }
    out.manifest["sweep"] = {{"symbol", symbol}, {"from", from}, {"to", to}, {"steps", steps}};
    out.manifest["beta_grid"] = opt.beta_grid;
    out.manifest["grid_n"] = opt.grid_n;
    out.add_csv("compare.csv", t);
}

int run(const Options& opt) {
    const auto start = std::chrono::steady_clock::now();
    const json doc = load_json(opt.spec_path);
    Outputs out;
    ordered_json overrides = ordered_json::object();
    const InterferometerConfig base = load_config(doc, opt, overrides);

    out.manifest["command"] = opt.command;
    out.manifest["spec"] = opt.spec_path;
    out.manifest["tool_version"] = DISCORD_SCOPE_VERSION;
    out.manifest["degrees"] = opt.degrees;
    out.manifest["threads"] = opt.threads;
    out.manifest["overrides"] = overrides;

    if (opt.command == "compare") {
        cmd_compare(doc, base, opt, out);
    } else {
        const SeparableStateSpec spec = load_spec(doc, opt.degrees);
        if (opt.command == "landscape") cmd_landscape(spec, base, opt, out);
        else if (opt.command == "zerolines") cmd_zerolines(spec, base, opt, out);
        else if (opt.command == "quantify") cmd_quantify(spec, base, opt, out);
        else if (opt.command == "discord") cmd_discord(spec, opt, out);
        else cmd_simulate(spec, base, opt, out);
    }
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    commit(output_dir(opt), out, wall);
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Interferometric discord toolkit for two-qubit separable states", "discord-scope"};
    app.require_subcommand(1);
    Options opt;

    const std::vector<std::pair<std::string, std::string>> commands{
        {"landscape", "visibility landscape over two parameter axes"},
        {"zerolines", "zero-visibility lines alpha0(beta), phi_A0(beta)"},
        {"quantify", "Delta^2_alpha, Delta^2_phi and the discord witness"},
        {"discord", "A-discord by measurement optimization"},
        {"simulate", "shot-level simulation and fringe fit"},
        {"compare", "discord vs quantifiers over a state family"}};
    for (const auto& [name, help] : commands) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->add_option("--spec", opt.spec_path, "state spec (or family) JSON file")->required();
        sub->add_option("--out", opt.out_dir, "output directory");
        sub->add_option("--threads", opt.threads, "worker cap")->check(CLI::PositiveNumber);
        sub->add_flag("--degrees", opt.degrees, "angles in the input are degrees");
        sub->add_option("--set", opt.sets, "interferometer parameter override key=value");
        if (name == "landscape") {
            sub->add_option("--axes", opt.axes, "two of alpha,beta,phi_a,phi_b");
            sub->add_option("--resolution", opt.resolution, "grid points per axis");
        }
        if (name == "zerolines" || name == "quantify" || name == "compare")
            sub->add_option("--beta-grid", opt.beta_grid, "beta samples per period")->check(CLI::PositiveNumber);
        if (name == "discord" || name == "compare") {
            sub->add_option("--grid-n", opt.grid_n, "coarse measurement grid size")->check(CLI::Range(2, 1 << 16));
            sub->add_option("--refine-tol", opt.refine_tol, "compass search step tolerance");
        }
        if (name == "simulate") {
            sub->add_option("--shots", opt.shots, "shots per phase");
            sub->add_option("--seed", opt.seed, "generator seed");
            sub->add_option("--phases", opt.phases, "comma-separated phi_d values");
        }
        sub->callback([&opt, name = name] { opt.command = name; });
    }
    CLI11_PARSE(app, argc, argv);

    try {
        return run(opt);
    } catch (const ExitError& e) {
        std::cerr << "discord-scope: " << e.message << "\n";
        return e.code;
    } catch (const InsufficientPhases& e) {
        std::cerr << "discord-scope: " << e.what() << "\n";
        return kInsufficientPhases;
    } catch (const InvalidSpec& e) {
        std::cerr << "discord-scope: malformed spec: " << e.what() << "\n";
        return kMalformedSpec;
    } catch (const Error& e) {
        std::cerr << "discord-scope: " << e.what() << "\n";
        return kModuleError;
    } catch (const std::exception& e) {
        std::cerr << "discord-scope: " << e.what() << "\n";
        return kModuleError;
    }
}
