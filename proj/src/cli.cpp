#include "hyperdiff/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>

#include "hyperdiff/cases.hpp"
#include "hyperdiff/dmp_analysis.hpp"
#include "hyperdiff/errors.hpp"
#include "hyperdiff/tensor.hpp"

namespace hyperdiff::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string normalize_key(std::string key) {
    std::transform(key.begin(), key.end(), key.begin(), [](unsigned char c) {
        return c == '-' ? '_' : static_cast<char>(std::tolower(c));
    });
    return key;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

double parse_double(const std::string& key, const std::string& text) {
    const std::string t = trim(text);
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(t, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (t.empty() || used != t.size() || !std::isfinite(v)) {
        throw InvalidArgument("bad value for '" + key + "': '" + text + "' is not a finite number");
    }
    return v;
}

std::int64_t parse_int(const std::string& key, const std::string& text) {
    const std::string t = trim(text);
    std::size_t used = 0;
    long long v = 0;
    try {
        v = std::stoll(t, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (t.empty() || used != t.size()) {
        // accept integral scientific notation such as 1e6
        const double d = parse_double(key, text);
        if (d != std::floor(d) || std::abs(d) > 9.0e15) {
            throw InvalidArgument("bad value for '" + key + "': '" + text + "' is not an integer");
        }
        return static_cast<std::int64_t>(d);
    }
    return v;
}

std::vector<double> parse_list(const std::string& key, const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (trim(item).empty()) continue;
        out.push_back(parse_double(key, item));
    }
    return out;
}

EmitFlags parse_emit(const std::string& text) {
    EmitFlags e;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const std::string w = lower(trim(item));
        if (w.empty() || w == "none") continue;
        if (w == "all") {
            e = {true, true, true, true, true};
        } else if (w == "field") {
            e.field = true;
        } else if (w == "profile") {
            e.profile = true;
        } else if (w == "speed") {
            e.speed = true;
        } else if (w == "report") {
            e.report = true;
        } else if (w == "gnuplot") {
            e.gnuplot = true;
        } else {
            throw InvalidArgument("unknown emit flag '" + w +
                                  "' (expected field, profile, speed, report, gnuplot, all, none)");
        }
    }
    return e;
}

std::string short_fmt(double x) {
    std::ostringstream s;
    s << std::setprecision(10) << (x == 0.0 ? 0.0 : x);
    return s.str();
}

}  // namespace

const std::vector<std::string>& known_keys() {
    static const std::vector<std::string> keys = {
        "case", "nx",     "ny",      "ratio", "theta", "alpha_s", "dt",   "tol",   "max_steps",
        "report_every", "scheme", "closure", "wall",  "dmp_tol", "out", "emit", "alphas"};
    return keys;
}

void apply_key(RunConfig& cfg, const std::string& raw_key, const std::string& value) {
    const std::string key = normalize_key(trim(raw_key));
    const std::string v = trim(value);
    if (key == "case") {
        const std::string c = lower(v);
        if (c != "a" && c != "b" && c != "c" && c != "d") {
            throw InvalidArgument("unknown case '" + v + "' (expected A, B, C or D)");
        }
        cfg.case_name = std::string(1, static_cast<char>(std::toupper(c[0])));
    } else if (key == "nx") {
        cfg.n_x = static_cast<int>(parse_int(key, v));
    } else if (key == "ny") {
        cfg.n_y = static_cast<int>(parse_int(key, v));
    } else if (key == "ratio") {
        cfg.ratio = parse_double(key, v);
    } else if (key == "theta") {
        cfg.theta = parse_double(key, v);
    } else if (key == "alpha_s") {
        cfg.alpha_s = parse_double(key, v);
    } else if (key == "dt") {
        cfg.dt = parse_double(key, v);
    } else if (key == "tol") {
        cfg.tol = parse_double(key, v);
    } else if (key == "max_steps") {
        cfg.max_steps = parse_int(key, v);
    } else if (key == "report_every") {
        cfg.report_every = parse_int(key, v);
    } else if (key == "scheme") {
        const std::string s = lower(v);
        if (s == "hyperbolic") {
            cfg.scheme = SchemeKind::Hyperbolic;
        } else if (s == "hyperbolic-unrefined" || s == "hyperbolic_unrefined") {
            cfg.scheme = SchemeKind::HyperbolicUnrefined;
        } else if (s == "central") {
            cfg.scheme = SchemeKind::Central;
        } else {
            throw InvalidArgument("unknown scheme '" + v +
                                  "' (expected hyperbolic, hyperbolic-unrefined, central)");
        }
    } else if (key == "closure") {
        const std::string s = lower(v);
        if (s == "ghost") {
            cfg.closure = Closure::Ghost;
        } else if (s == "extrapolate") {
            cfg.closure = Closure::Extrapolate;
        } else {
            throw InvalidArgument("unknown closure '" + v + "' (expected ghost, extrapolate)");
        }
    } else if (key == "wall") {
        const std::string s = lower(v);
        if (s == "conormal") {
            cfg.wall = WallGhost::Conormal;
        } else if (s == "mirror") {
            cfg.wall = WallGhost::Mirror;
        } else {
            throw InvalidArgument("unknown wall ghost '" + v + "' (expected conormal, mirror)");
        }
    } else if (key == "dmp_tol") {
        cfg.dmp_tol = parse_double(key, v);
    } else if (key == "out") {
        if (v.empty()) throw InvalidArgument("out directory must not be empty");
        cfg.out = v;
    } else if (key == "emit") {
        cfg.emit = parse_emit(v);
    } else if (key == "alphas") {
        cfg.alphas = parse_list(key, v);
    } else {
        throw InvalidArgument("unknown config key '" + raw_key + "'");
    }
}

std::map<std::string, std::string> parse_config_text(std::istream& in, const std::string& source) {
    std::map<std::string, std::string> out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw InvalidArgument(source + ":" + std::to_string(lineno) + ": expected key = value");
        }
        const std::string key = normalize_key(trim(line.substr(0, eq)));
        if (std::find(known_keys().begin(), known_keys().end(), key) == known_keys().end()) {
            throw InvalidArgument(source + ":" + std::to_string(lineno) + ": unknown key '" + key + "'");
        }
        out[key] = trim(line.substr(eq + 1));
    }
    return out;
}

std::string scheme_name(SchemeKind s) {
    switch (s) {
        case SchemeKind::Hyperbolic: return "hyperbolic";
        case SchemeKind::HyperbolicUnrefined: return "hyperbolic-unrefined";
        case SchemeKind::Central: return "central";
    }
    return "?";
}

std::string closure_name(Closure c) { return c == Closure::Ghost ? "ghost" : "extrapolate"; }

RunResult execute_run(const RunConfig& cfg) {
    const GridSpec grid(cfg.n_x, cfg.n_y);
    const CaseSpec problem = make_case(cfg.case_name, grid, cfg.ratio, cfg.theta);
    if (!(cfg.dmp_tol >= 0.0)) throw InvalidArgument("dmp_tol must be >= 0");

    RunResult r;
    if (cfg.scheme == SchemeKind::Central) {
        r.dt = cfg.dt.value_or(0.99 * central_dt_limit(problem));
        auto [state, hist] =
            central_solve_steady(problem, r.dt, cfg.tol, cfg.max_steps, cfg.wall, cfg.report_every);
        r.state = std::move(state);
        r.history = std::move(hist);
    } else {
        SolverConfig sc;
        sc.alpha_s = cfg.alpha_s;
        sc.dt = cfg.dt.value_or(1e-4);
        sc.tol = cfg.tol;
        sc.max_steps = cfg.max_steps;
        sc.report_every = cfg.report_every;
        sc.scheme = cfg.scheme == SchemeKind::Hyperbolic ? Scheme::Refined : Scheme::Unrefined;
        sc.closure = cfg.closure;
        r.dt = sc.dt;
        auto [state, hist] = solve_steady(problem, sc);
        r.state = std::move(state);
        r.history = std::move(hist);
        r.flux_residual = flux_relation_residual(r.state, problem, sc.alpha_s);
    }
    r.dmp = dmp_report(r.state, problem.bounds().first, problem.bounds().second, cfg.dmp_tol);

    const DiffusionTensor& k = problem.tensor(0, 0);
    if (problem.name() == "A" && k.k_c() == 0.0 && k.k_x() == k.k_y()) {
        double err = 0.0;
        for (int j = 0; j <= grid.n_y(); ++j) {
            for (int i = 0; i <= grid.n_x(); ++i) {
                err = std::max(err, std::abs(r.state.phi(i, j) - (1.0 - grid.x(i))));
            }
        }
        r.linear_profile_error = err;
    }
    return r;
}

std::string report_json(const RunConfig& cfg, const RunResult& r) {
    json j;
    j["case"] = cfg.case_name;
    j["scheme"] = scheme_name(cfg.scheme);
    j["grid"] = {{"n_x", cfg.n_x}, {"n_y", cfg.n_y}};
    j["ratio"] = cfg.ratio;
    j["theta"] = cfg.theta ? json(*cfg.theta) : json(nullptr);
    if (cfg.scheme == SchemeKind::Central) {
        j["alpha_s"] = nullptr;
        j["wall"] = cfg.wall == WallGhost::Conormal ? "conormal" : "mirror";
    } else {
        j["alpha_s"] = cfg.alpha_s;
        j["closure"] = closure_name(cfg.closure);
    }
    j["dt"] = r.dt;
    j["tol"] = cfg.tol;
    j["max_steps"] = cfg.max_steps;
    j["steps"] = r.history.steps;
    j["final_residual"] = r.history.final_residual;
    j["converged"] = r.history.converged;
    j["min_phi"] = r.dmp.min_phi;
    j["max_phi"] = r.dmp.max_phi;
    j["undershoot"] = r.dmp.undershoot;
    j["overshoot"] = r.dmp.overshoot;
    j["under_fraction"] = r.dmp.under_fraction;
    j["over_fraction"] = r.dmp.over_fraction;
    j["satisfied"] = r.dmp.satisfied;
    j["bounds"] = {r.dmp.lower, r.dmp.upper};
    j["dmp_tol"] = r.dmp.tol;
    json extras = json::object();
    if (r.linear_profile_error) extras["max_abs_error_vs_linear"] = *r.linear_profile_error;
    if (r.flux_residual) extras["flux_relation_residual"] = *r.flux_residual;
    j["extras"] = extras;
    return j.dump(2) + "\n";
}

namespace {

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream f(p, std::ios::binary);
    if (!f) throw Error("cannot write " + p.string());
    f << text;
    if (!f) throw Error("write failed for " + p.string());
}

template <class Fn>
void write_with(const fs::path& p, Fn&& fn) {
    std::ostringstream s;
    fn(s);
    write_file(p, s.str());
}

const char* kGnuplot =
    "set datafile separator ','\n"
    "set key autotitle columnhead\n"
    "set terminal pngcairo size 800,700\n"
    "set output 'phi.png'\n"
    "set view map\n"
    "set size ratio -1\n"
    "splot 'field.csv' using 1:2:3 with points palette pointtype 5 pointsize 0.6 notitle\n"
    "set output 'profile.png'\n"
    "unset view\n"
    "set size noratio\n"
    "plot 'profile.csv' using 1:2 with linespoints notitle\n";

void write_outputs(const RunConfig& cfg, const RunResult& r, const fs::path& dir) {
    const EmitFlags& e = cfg.emit;
    if (!(e.field || e.profile || e.speed || e.report || e.gnuplot)) return;
    fs::create_directories(dir);
    const GridSpec grid(cfg.n_x, cfg.n_y);
    if (e.field) {
        write_with(dir / "field.csv", [&](std::ostream& o) { write_field_csv(o, r.state, grid); });
    }
    if (e.profile) {
        write_with(dir / "profile.csv", [&](std::ostream& o) {
            write_profile_csv(o, profile_along_midline(r.state, grid));
        });
    }
    if (e.speed) {
        write_with(dir / "speed.csv", [&](std::ostream& o) {
            o << "x,y,speed\n" << std::setprecision(17);
            for (int j = 0; j <= grid.n_y(); ++j) {
                for (int i = 0; i <= grid.n_x(); ++i) {
                    o << grid.x(i) << ',' << grid.y(j) << ','
                      << std::hypot(r.state.u(i, j), r.state.v(i, j)) << '\n';
                }
            }
        });
    }
    if (e.report) write_file(dir / "report.json", report_json(cfg, r));
    if (e.gnuplot) write_file(dir / "plot.gp", kGnuplot);
}

std::string summary_line(const RunConfig& cfg, const RunResult& r) {
    std::ostringstream s;
    s << "case " << cfg.case_name << ", " << scheme_name(cfg.scheme);
    if (cfg.scheme != SchemeKind::Central) s << ", alpha_s " << short_fmt(cfg.alpha_s);
    s << ": " << (r.history.converged ? "converged" : "NOT converged") << " after "
      << r.history.steps << " steps (residual " << short_fmt(r.history.final_residual)
      << "), phi in [" << short_fmt(r.dmp.min_phi) << ", " << short_fmt(r.dmp.max_phi)
      << "], DMP " << (r.dmp.satisfied ? "satisfied" : "violated");
    return s.str();
}

struct SolveOptions {
    std::map<std::string, std::string> values;
    std::map<std::string, CLI::Option*> opts;
    std::string config_path;
};

void add_solve_options(CLI::App* sub, SolveOptions& so) {
    sub->add_option("--config", so.config_path, "flat key = value config file")
        ->envname("HYPERDIFF_CONFIG");
    for (const auto& key : known_keys()) {
        std::string flag = key;
        std::replace(flag.begin(), flag.end(), '_', '-');
        std::string env = "HYPERDIFF_" + key;
        std::transform(env.begin(), env.end(), env.begin(),
                       [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
        so.opts[key] = sub->add_option("--" + flag, so.values[key])->envname(env);
    }
}

RunConfig resolve(const SolveOptions& so, RunConfig cfg) {
    if (!so.config_path.empty()) {
        std::ifstream f(so.config_path);
        if (!f) throw InvalidArgument("cannot open config file " + so.config_path);
        for (const auto& [k, v] : parse_config_text(f, so.config_path)) apply_key(cfg, k, v);
    }
    // flags and HYPERDIFF_* variables override the file
    for (const auto& key : known_keys()) {
        if (so.opts.at(key)->count() > 0) apply_key(cfg, key, so.values.at(key));
    }
    return cfg;
}

int cmd_run(const RunConfig& cfg, std::ostream& out) {
    const RunResult r = execute_run(cfg);
    write_outputs(cfg, r, cfg.out);
    out << summary_line(cfg, r) << '\n';
    if (r.linear_profile_error) {
        out << "max |phi - (1 - x)| = " << short_fmt(*r.linear_profile_error) << '\n';
    }
    return r.history.converged ? 0 : 2;
}

int cmd_sweep(RunConfig cfg, std::ostream& out, std::ostream& err) {
    if (cfg.alphas.empty()) throw InvalidArgument("sweep needs a non-empty alpha list (--alphas)");
    if (cfg.scheme == SchemeKind::Central) {
        throw InvalidArgument("sweep varies alpha_s and needs a hyperbolic scheme");
    }
    std::vector<double> alphas = cfg.alphas;
    std::sort(alphas.begin(), alphas.end());
    fs::create_directories(cfg.out);

    std::ostringstream csv;
    csv << "alpha_s,min_phi,max_phi,undershoot,overshoot,satisfied,steps,converged,final_residual,error\n";
    csv << std::setprecision(17);
    bool any_error = false;
    bool all_converged = true;
    for (double a : alphas) {
        RunConfig one = cfg;
        one.alpha_s = a;
        csv << a << ',';
        try {
            const RunResult r = execute_run(one);
            write_outputs(one, r, fs::path(cfg.out) / ("alpha_" + short_fmt(a)));
            csv << r.dmp.min_phi << ',' << r.dmp.max_phi << ',' << r.dmp.undershoot << ','
                << r.dmp.overshoot << ',' << (r.dmp.satisfied ? "true" : "false") << ','
                << r.history.steps << ',' << (r.history.converged ? "true" : "false") << ','
                << r.history.final_residual << ",\n";
            all_converged = all_converged && r.history.converged;
            out << summary_line(one, r) << '\n';
        } catch (const std::exception& e) {
            any_error = true;
            std::string msg = e.what();
            std::replace(msg.begin(), msg.end(), ',', ';');
            std::replace(msg.begin(), msg.end(), '\n', ' ');
            csv << ",,,,,,,," << msg << '\n';
            err << "alpha_s " << short_fmt(a) << ": error: " << e.what() << '\n';
        }
    }
    write_file(fs::path(cfg.out) / "sweep.csv", csv.str());
    if (any_error) return 1;
    return all_converged ? 0 : 2;
}

struct TensorOptions {
    double theta = std::numbers::pi / 4.0;
    double ratio = 1e4;
    std::optional<double> kx;
    std::optional<double> ky;
    std::optional<double> kc;
};

void add_tensor_options(CLI::App* sub, TensorOptions& t) {
    sub->add_option("--theta", t.theta, "field angle in radians")->envname("HYPERDIFF_THETA");
    sub->add_option("--ratio", t.ratio, "anisotropy ratio")->envname("HYPERDIFF_RATIO");
    sub->add_option("--kx", t.kx, "raw tensor component (with --ky, --kc)");
    sub->add_option("--ky", t.ky);
    sub->add_option("--kc", t.kc);
}

DiffusionTensor make_tensor(const TensorOptions& t) {
    const int given = (t.kx ? 1 : 0) + (t.ky ? 1 : 0) + (t.kc ? 1 : 0);
    if (given == 3) return DiffusionTensor::from_components(*t.kx, *t.ky, *t.kc);
    if (given != 0) throw InvalidArgument("--kx, --ky and --kc must be given together");
    return tensor_from_angle(t.theta, t.ratio);
}

int cmd_analyze(const TensorOptions& t, double dt, const std::string& c_list,
                const std::string& out_path, std::ostream& out) {
    const DiffusionTensor k = make_tensor(t);
    const std::vector<double> cs = parse_list("c", c_list);
    if (cs.empty()) throw InvalidArgument("analyze needs at least one C value");
    const ThresholdPair th = alpha_thresholds(k, dt);

    std::ostringstream csv;
    csv << std::setprecision(17);
    csv << "# alpha_minus=" << th.alpha_minus << ",alpha_plus=" << th.alpha_plus
        << ",dt_bound=" << dt_bound(k) << ",dt=" << dt << '\n';
    csv << "C,h,abs_alpha_tilde_plus,abs_alpha_tilde_minus,status\n";
    for (double c : cs) {
        csv << c << ',';
        if (c > 0.0) {
            csv << dt / c;
        } else {
            csv << "inf";
        }
        try {
            const RootPair r = ftilde_roots(k, dt, c);
            csv << ',' << std::abs(r.alpha_tilde_plus) << ',' << std::abs(r.alpha_tilde_minus)
                << ",ok\n";
        } catch (const NoRealRoots&) {
            csv << ",,,no_real_roots\n";
        } catch (const InvalidArgument&) {
            csv << ",,,invalid\n";
        }
    }
    out << csv.str();
    if (!out_path.empty()) {
        const fs::path p(out_path);
        if (p.has_parent_path()) fs::create_directories(p.parent_path());
        write_file(p, csv.str());
    }
    return 0;
}

int cmd_stencil(const TensorOptions& t, double alpha_s, double dt, double h, const std::string& form,
                std::ostream& out) {
    const DiffusionTensor k = make_tensor(t);
    StencilForm f = StencilForm::Analysis;
    if (lower(form) == "scheme") {
        f = StencilForm::Scheme;
    } else if (lower(form) != "analysis") {
        throw InvalidArgument("unknown stencil form '" + form + "' (expected analysis, scheme)");
    }
    const StencilCoeffs c = effective_stencil(k, alpha_s, dt, h, f);
    const MonotonicityReport m = monotonicity_report(c);
    out << "stencil (rows dj = 2..-2, columns di = -2..2), C = dt/h = " << short_fmt(dt / h) << '\n';
    for (int dj = 2; dj >= -2; --dj) {
        for (int di = -2; di <= 2; ++di) {
            out << std::setw(18) << short_fmt(c.at(di, dj));
        }
        out << '\n';
    }
    out << "sum = " << short_fmt(c.sum()) << '\n'
        << "min coefficient = " << short_fmt(m.min_coefficient) << '\n'
        << "cross magnitude = " << short_fmt(m.cross_magnitude) << '\n'
        << "monotone = " << (m.is_monotone ? "true" : "false") << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Anisotropic diffusion solver with the hyperbolic-system scheme and DMP analysis"};
    app.require_subcommand(1);

    SolveOptions run_opts;
    auto* run = app.add_subcommand("run", "solve one case to steady state");
    add_solve_options(run, run_opts);

    SolveOptions sweep_opts;
    auto* sweep = app.add_subcommand("sweep", "solve one case for a list of alpha_s values");
    add_solve_options(sweep, sweep_opts);

    TensorOptions an_t;
    double an_dt = 1e-4;
    std::string an_c = "0.5,0.25,0.1,0.05,0.025,0.01";
    std::string an_out;
    auto* analyze = app.add_subcommand("analyze", "alpha_s thresholds and DMP interval table");
    add_tensor_options(analyze, an_t);
    analyze->add_option("--dt", an_dt)->envname("HYPERDIFF_DT");
    analyze->add_option("--c", an_c, "comma-separated C = dt/h values");
    analyze->add_option("--out", an_out, "also write the table to this file");

    TensorOptions st_t;
    double st_alpha = 1.0;
    double st_dt = 1e-4;
    double st_h = 0.01;
    std::string st_form = "analysis";
    auto* stencil = app.add_subcommand("stencil", "effective one-variable stencil");
    add_tensor_options(stencil, st_t);
    stencil->add_option("--alpha-s", st_alpha)->envname("HYPERDIFF_ALPHA_S");
    stencil->add_option("--dt", st_dt)->envname("HYPERDIFF_DT");
    stencil->add_option("--spacing", st_h, "mesh size h (square mesh)");
    stencil->add_option("--form", st_form, "analysis | scheme");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 1;
    }

    try {
        if (run->parsed()) return cmd_run(resolve(run_opts, RunConfig{}), out);
        if (sweep->parsed()) {
            RunConfig base;
            base.emit = EmitFlags{};
            return cmd_sweep(resolve(sweep_opts, base), out, err);
        }
        if (analyze->parsed()) return cmd_analyze(an_t, an_dt, an_c, an_out, out);
        if (stencil->parsed()) return cmd_stencil(st_t, st_alpha, st_dt, st_h, st_form, out);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}

}  // namespace hyperdiff::cli
