#pragma once

// Command-line front end. run_cli parses arguments, runs one subcommand and
// returns the process exit code:
//   0 success, 1 verification failure, 2 usage error, 3 I/O error.

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "families.hpp"
#include "io.hpp"
#include "mesh.hpp"
#include "verify.hpp"

namespace bigraph {

enum ExitCode : int { kExitOk = 0, kExitFailed = 1, kExitUsage = 2, kExitIo = 3 };

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::string command;
    std::string family;
    double alpha = pi / 4;
    int samples = 512;
    int grid = 64;
    std::string format;  // empty: the command's default
    std::string output;  // empty or "-": the output stream
    bool rotate90 = false;
    std::uint64_t seed = kDefaultSeed;
    int periods = 1;
    double tmax = kDefaultBoundaryRange;
    std::map<std::string, double> tol;
};

namespace cli_detail {

inline const std::map<std::string, std::vector<std::string>>& formats()
{
    static const std::map<std::string, std::vector<std::string>> f{
        {"boundary", {"csv", "svg"}},  {"surface", {"obj", "csv"}},
        {"verify", {"json", "csv"}},   {"correspond", {"csv", "svg"}},
        {"limits", {"csv", "json"}},
    };
    return f;
}

inline double parse_double(const std::string& s, const std::string& what)
{
    double v = 0.0;
    const char* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc() || ptr != end)
        throw UsageError("bad number for " + what + ": '" + s + "'");
    return v;
}

inline std::uint64_t parse_seed(const std::string& s, const std::string& what)
{
    try {
        std::size_t pos = 0;
        const unsigned long long v = std::stoull(s, &pos, 0);
        if (pos != s.size())
            throw UsageError("bad seed in " + what + ": '" + s + "'");
        return v;
    }
    catch (const std::logic_error&) {
        throw UsageError("bad seed in " + what + ": '" + s + "'");
    }
}

inline std::pair<std::string, double> parse_tol(const std::string& s)
{
    const auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0)
        throw UsageError("--tol expects name=value, got '" + s + "'");
    return {s.substr(0, eq), parse_double(s.substr(eq + 1), "--tol " + s.substr(0, eq))};
}

inline Family make_family_spec(const RunConfig& cfg)
{
    if (cfg.family.empty())
        throw UsageError("--family is required");
    const auto kind = parse_family_kind(cfg.family);
    if (!kind)
        throw UsageError("unknown family '" + cfg.family + "'");
    switch (*kind) {
    case FamilyKind::VerticalCatenoid: return Family::vertical_catenoid();
    case FamilyKind::HorizontalCatenoid: return Family::horizontal_catenoid();
    case FamilyKind::Scherk: break;
    }
    Family f{FamilyKind::Scherk, cfg.alpha};
    try {
        f.validate();
    }
    catch (const Error& e) {
        throw UsageError(e.what());
    }
    return f;
}

inline cplx oriented(const RunConfig& cfg, cplx z) { return cfg.rotate90 ? cplx(0, 1) * z : z; }

inline void write_boundary(const RunConfig& cfg, std::ostream& os)
{
    const Family f = make_family_spec(cfg);
    const double period = f.periodic() ? scherk_period(f.alpha) : 0.0;
    std::vector<BoundaryCurve> curves;
    for (int k = 0; k < cfg.periods; ++k)
        for (int c = 0; c < f.n_components(); ++c) {
            BoundaryCurve bc = sample_boundary(f, c, cfg.samples, cfg.tmax);
            for (cplx& z : bc.samples)
                z = oriented(cfg, z + k * period);
            curves.push_back(std::move(bc));
        }
    if (cfg.format == "svg") {
        std::vector<SvgPath> paths;
        for (const BoundaryCurve& bc : curves)
            paths.push_back({bc.samples, bc.closed, "black"});
        write_svg(os, paths);
        return;
    }
    os << "t,x,y\n";
    for (const BoundaryCurve& bc : curves)
        for (std::size_t i = 0; i < bc.samples.size(); ++i)
            os << format_double(bc.t[i]) << ',' << format_double(bc.samples[i].real()) << ','
               << format_double(bc.samples[i].imag()) << '\n';
}

inline void write_surface(const RunConfig& cfg, std::ostream& os)
{
    const FamilyModel fm = make_family(make_family_spec(cfg));
    const SurfaceMesh sm = build_surface_mesh(fm, cfg.grid, cfg.periods);
    if (cfg.format == "csv") {
        os << "i,j,x1,x2,x3\n";
        for (const GridVertex& v : sm.upper)
            os << v.i << ',' << v.j << ',' << format_double(v.p.x1) << ','
               << format_double(v.p.x2) << ',' << format_double(v.p.x3) << '\n';
        return;
    }
    write_obj(os, sm.mesh);
}

inline int write_verify(const RunConfig& cfg, std::ostream& os, bool samples_given)
{
    const FamilyModel fm = make_family(make_family_spec(cfg));
    VerifyOptions opt;
    opt.grid = cfg.grid;
    opt.seed = cfg.seed;
    if (samples_given)
        opt.samples = cfg.samples;
    VerificationReport report = verify_family(fm, opt);
    for (const auto& [name, tol] : cfg.tol) {
        bool found = false;
        for (Check& c : report.checks)
            if (c.name == name) {
                c.tolerance = tol;
                c.pass = c.n_samples >= 1 && c.max_residual <= tol;
                found = true;
            }
        if (!found)
            throw UsageError("--tol names unknown check '" + name + "'");
    }
    if (cfg.format == "csv")
        write_report_csv(os, report);
    else
        os << report_json(report).dump(2) << '\n';
    return report.all_pass() ? kExitOk : kExitFailed;
}

inline void write_correspond(const RunConfig& cfg, std::ostream& os)
{
    const FamilyModel fm = make_family(make_family_spec(cfg));
    const SurfaceSheet& sheet = *fm.maps.sheet;
    struct Row {
        int component;
        double t;
        cplx hat, z;
    };
    std::vector<Row> rows;
    for (const BoundaryArc& arc : fm.surface_arcs) {
        const std::vector<cplx> pts = arc_points(sheet, arc, cfg.samples);
        std::vector<SheetValue> vals = sheet.trace_s(pts);
        if (sheet.periodic() && !vals.empty()) {
            // bring the curve into the period cell around the window centre
            const Window& w = fm.domain.window;
            const cplx p = sheet.period_phi();
            const cplx d = vals.front().phi - 0.5 * cplx(w.x0 + w.x1, w.y0 + w.y1);
            const double k = std::round((d * std::conj(p)).real() / std::norm(p));
            for (SheetValue& v : vals)
                v = sheet.shifted(v, -k);
        }
        for (const SheetValue& v : vals)
            rows.push_back({arc.component, std::arg(v.s), oriented(cfg, v.psi), oriented(cfg, v.phi)});
    }
    if (cfg.format == "svg") {
        std::vector<SvgPath> paths;
        for (const BoundaryArc& arc : fm.surface_arcs) {
            SvgPath hat{{}, false, "steelblue"};
            SvgPath dom{{}, false, "black"};
            for (const Row& r : rows)
                if (r.component == arc.component) {
                    hat.points.push_back(r.hat);
                    dom.points.push_back(r.z);
                }
            paths.push_back(std::move(hat));
            paths.push_back(std::move(dom));
        }
        write_svg(os, paths);
        return;
    }
    os << "component,t,xhat,yhat,x,y\n";
    for (const Row& r : rows)
        os << r.component << ',' << format_double(r.t) << ',' << format_double(r.hat.real()) << ','
           << format_double(r.hat.imag()) << ',' << format_double(r.z.real()) << ','
           << format_double(r.z.imag()) << '\n';
}

inline constexpr double kLimitTolerance = 0.05;

inline int write_limits(const RunConfig& cfg, std::ostream& os)
{
    struct Row {
        std::string mode;
        double alpha, deviation;
    };
    std::vector<Row> rows;
    bool ok = true;
    for (const LimitMode mode : {LimitMode::ToZero, LimitMode::ToHalfPi}) {
        const std::string name = mode == LimitMode::ToZero ? "to_zero" : "to_half_pi";
        double last = std::numeric_limits<double>::infinity();
        for (const double eps : {0.04, 0.02, 0.01}) {
            const double alpha = mode == LimitMode::ToZero ? eps : pi / 2 - eps;
            const double d = limit_deviation(alpha, mode);
            ok = ok && d < last;
            last = d;
            rows.push_back({name, alpha, d});
        }
        ok = ok && last < kLimitTolerance;
    }
    if (cfg.format == "json") {
        nlohmann::ordered_json j;
        j["limits"] = nlohmann::ordered_json::array();
        for (const Row& r : rows)
            j["limits"].push_back({{"mode", r.mode}, {"alpha", r.alpha}, {"deviation", r.deviation}});
        j["pass"] = ok;
        os << j.dump(2) << '\n';
    }
    else {
        os << "mode,alpha,deviation\n";
        for (const Row& r : rows)
            os << r.mode << ',' << format_double(r.alpha) << ',' << format_double(r.deviation) << '\n';
    }
    return ok ? kExitOk : kExitFailed;
}

// Values from a JSON config file fill options that were not given as flags.
inline void apply_config(const std::string& path, RunConfig& cfg,
                         const std::map<std::string, bool>& given)
{
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot read config " + path);
    nlohmann::json j;
    try {
        in >> j;
    }
    catch (const nlohmann::json::exception& e) {
        throw UsageError("config " + path + ": " + e.what());
    }
    if (!j.is_object())
        throw UsageError("config " + path + " must hold a JSON object");
    auto use = [&](const std::string& key) { return j.contains(key) && !given.at(key); };
    try {
        for (const auto& item : j.items())
            if (!given.contains(item.key()))
                throw UsageError("unknown config key '" + item.key() + "'");
        if (use("family"))
            cfg.family = j["family"].get<std::string>();
        if (use("alpha"))
            cfg.alpha = j["alpha"].get<double>();
        if (use("samples"))
            cfg.samples = j["samples"].get<int>();
        if (use("grid"))
            cfg.grid = j["grid"].get<int>();
        if (use("format"))
            cfg.format = j["format"].get<std::string>();
        if (use("output"))
            cfg.output = j["output"].get<std::string>();
        if (use("rotate90"))
            cfg.rotate90 = j["rotate90"].get<bool>();
        if (use("periods"))
            cfg.periods = j["periods"].get<int>();
        if (use("tmax"))
            cfg.tmax = j["tmax"].get<double>();
        if (use("seed"))
            cfg.seed = j["seed"].is_string() ? parse_seed(j["seed"].get<std::string>(), path)
                                             : j["seed"].get<std::uint64_t>();
        if (use("tol"))
            for (const auto& item : j["tol"].items())
                cfg.tol.emplace(item.key(), item.value().get<double>());
    }
    catch (const nlohmann::json::exception& e) {
        throw UsageError("config " + path + ": " + e.what());
    }
}

inline void validate(const RunConfig& cfg)
{
    if (cfg.samples < 2)
        throw UsageError("--samples must be at least 2");
    if (cfg.grid < 8)
        throw UsageError("--grid must be at least 8");
    if (cfg.periods < 1)
        throw UsageError("--periods must be at least 1");
    if (!(cfg.tmax > 0))
        throw UsageError("--tmax must be positive");
    const auto& allowed = formats().at(cfg.command);
    if (std::find(allowed.begin(), allowed.end(), cfg.format) == allowed.end())
        throw UsageError("format '" + cfg.format + "' is not available for " + cfg.command);
    if (cfg.periods > 1 && cfg.command != "limits" && cfg.family != "scherk")
        throw UsageError("--periods needs a periodic family");
}

} // namespace cli_detail

inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    using namespace cli_detail;
    CLI::App app{"Exceptional domains and minimal bigraphs", "bigraph"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string config_path;
    std::string seed_text;
    std::vector<std::string> tol_text;
    std::map<std::string, CLI::App*> subs;
    std::map<std::string, std::map<std::string, CLI::Option*>> opts;

    const std::vector<std::pair<std::string, std::string>> commands{
        {"boundary", "sample the domain boundary (csv: t,x,y; svg)"},
        {"surface", "mesh the bigraph and its mirror (obj; csv: i,j,x1,x2,x3)"},
        {"verify", "run the check suite (json; csv)"},
        {"correspond", "boundary of psi(Omega) next to Omega (csv; svg)"},
        {"limits", "scaled Scherk boundaries against their limits (csv; json)"},
    };
    for (const auto& [name, help] : commands) {
        CLI::App* sub = app.add_subcommand(name, help);
        auto& o = opts[name];
        o["family"] = sub->add_option("--family", cfg.family,
                                      "vertical-catenoid | horizontal-catenoid | scherk");
        o["alpha"] = sub->add_option("--alpha", cfg.alpha, "Scherk parameter in (0, pi/2); default pi/4");
        o["samples"] = sub->add_option("--samples", cfg.samples,
                                       "boundary samples (default 512); interior samples for verify (default 100)");
        o["grid"] = sub->add_option("--grid", cfg.grid, "grid resolution (default 64)");
        o["format"] = sub->add_option("--format", cfg.format, "output format");
        o["output"] = sub->add_option("--output,-o", cfg.output, "output file (default stdout)");
        o["rotate90"] = sub->add_flag("--rotate90", cfg.rotate90, "rotate planar output by 90 degrees");
        o["seed"] = sub->add_option("--seed", seed_text, "sampling seed (default 0x5EED; env BIGRAPH_SEED)");
        o["periods"] = sub->add_option("--periods", cfg.periods, "number of Scherk periods (default 1)");
        o["tmax"] = sub->add_option("--tmax", cfg.tmax,
                                    "boundary parameter range [-tmax, tmax] (default 12)");
        o["tol"] = sub->add_option("--tol", tol_text, "override a check tolerance, name=value");
        sub->add_option("--config", config_path, "JSON file with option values; flags win");
        subs[name] = sub;
    }

    try {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        for (const auto& [name, sub] : subs)
            if (sub->parsed())
                cfg.command = name;
        const auto& o = opts.at(cfg.command);
        for (const std::string& t : tol_text) {
            auto [name, value] = parse_tol(t);
            cfg.tol.insert_or_assign(name, value);
        }
        if (!config_path.empty()) {
            std::map<std::string, bool> given;
            for (const auto& [key, opt] : o)
                given[key] = opt->count() > 0;
            apply_config(config_path, cfg, given);
        }
        // seed: flag, then BIGRAPH_SEED, then config, then the default
        if (o.at("seed")->count() > 0)
            cfg.seed = parse_seed(seed_text, "--seed");
        else if (const char* env = std::getenv("BIGRAPH_SEED"); env && *env)
            cfg.seed = parse_seed(env, "BIGRAPH_SEED");

        if (cfg.format.empty())
            cfg.format = formats().at(cfg.command).front();
        validate(cfg);

        std::ostringstream buf;
        buf.precision(17);
        int code = kExitOk;
        if (cfg.command == "boundary")
            write_boundary(cfg, buf);
        else if (cfg.command == "surface")
            write_surface(cfg, buf);
        else if (cfg.command == "verify")
            code = write_verify(cfg, buf, o.at("samples")->count() > 0);
        else if (cfg.command == "correspond")
            write_correspond(cfg, buf);
        else
            code = write_limits(cfg, buf);

        if (cfg.output.empty() || cfg.output == "-") {
            out << buf.str();
        }
        else {
            std::ofstream f(cfg.output, std::ios::binary);
            if (!f)
                throw IoError("cannot open " + cfg.output + " for writing");
            f << buf.str();
            f.close();
            if (!f)
                throw IoError("failed writing " + cfg.output);
        }
        return code;
    }
    catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return kExitIo;
    }
    catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return e.kind() == ErrorKind::InvalidParameter ? kExitUsage : kExitFailed;
    }
}

/// Convenience overload; args excludes the program name.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    std::vector<const char*> argv{"bigraph"};
    for (const std::string& a : args)
        argv.push_back(a.c_str());
    return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

} // namespace bigraph
