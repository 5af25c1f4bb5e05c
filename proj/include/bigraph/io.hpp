#pragma once

// Serialization: shortest round-trip floats, CSV, SVG paths, OBJ meshes and
// JSON reports.

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <limits>
#include <ostream>
#include <string>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "numerics.hpp"
#include "verify.hpp"
#include "weierstrass.hpp"

namespace bigraph {

/// Shortest decimal string that reads back to the same double.
inline std::string format_double(double v)
{
    if (std::isnan(v))
        return "nan";
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    std::array<char, 32> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    if (ec != std::errc())
        throw Error(ErrorKind::InvalidParameter, "float formatting failed");
    return std::string(buf.data(), ptr);
}

inline nlohmann::ordered_json report_json(const VerificationReport& report)
{
    nlohmann::ordered_json checks = nlohmann::ordered_json::array();
    for (const Check& c : report.checks) {
        nlohmann::ordered_json j;
        j["name"] = c.name;
        j["max_residual"] = c.max_residual;
        j["tolerance"] = c.tolerance;
        j["n_samples"] = c.n_samples;
        j["pass"] = c.pass;
        checks.push_back(std::move(j));
    }
    nlohmann::ordered_json out;
    out["checks"] = std::move(checks);
    return out;
}

inline void write_report_csv(std::ostream& os, const VerificationReport& report)
{
    os << "name,max_residual,tolerance,n_samples,pass\n";
    for (const Check& c : report.checks)
        os << c.name << ',' << format_double(c.max_residual) << ',' << format_double(c.tolerance)
           << ',' << c.n_samples << ',' << (c.pass ? "true" : "false") << '\n';
}

/// Fixed-width table for terminals.
inline void write_report_table(std::ostream& os, const VerificationReport& report)
{
    std::size_t width = 5;
    for (const Check& c : report.checks)
        width = std::max(width, c.name.size());
    for (const Check& c : report.checks) {
        std::string name = c.name;
        name.resize(width, ' ');
        os << (c.pass ? "PASS  " : "FAIL  ") << name << "  " << format_double(c.max_residual)
           << " <= " << format_double(c.tolerance) << "  (n=" << c.n_samples << ")\n";
    }
}

struct SvgPath {
    std::vector<cplx> points;
    bool closed = false;
    std::string stroke = "black";
};

/// One <path> per entry. The y axis is flipped so the picture has the usual
/// orientation; the viewBox is the bounding box grown by 5% on each side.
inline void write_svg(std::ostream& os, const std::vector<SvgPath>& paths)
{
    double x0 = std::numeric_limits<double>::infinity(), y0 = x0;
    double x1 = -x0, y1 = -x0;
    for (const SvgPath& p : paths)
        for (const cplx& z : p.points) {
            x0 = std::min(x0, z.real());
            x1 = std::max(x1, z.real());
            y0 = std::min(y0, -z.imag());
            y1 = std::max(y1, -z.imag());
        }
    if (!(x0 <= x1)) {
        x0 = y0 = 0.0;
        x1 = y1 = 1.0;
    }
    double w = x1 - x0;
    double h = y1 - y0;
    if (w == 0.0)
        w = 1.0;
    if (h == 0.0)
        h = 1.0;
    const double mx = 0.05 * w;
    const double my = 0.05 * h;
    const double stroke = 0.002 * std::max(w, h);
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << format_double(x0 - mx) << ' '
       << format_double(y0 - my) << ' ' << format_double(w + 2 * mx) << ' '
       << format_double(h + 2 * my) << "\">\n";
    for (const SvgPath& p : paths) {
        os << "<path fill=\"none\" stroke=\"" << p.stroke << "\" stroke-width=\""
           << format_double(stroke) << "\" d=\"";
        for (std::size_t k = 0; k < p.points.size(); ++k)
            os << (k == 0 ? "M" : " L") << format_double(p.points[k].real()) << ','
               << format_double(0.0 - p.points[k].imag());
        if (p.closed)
            os << " Z";
        os << "\"/>\n";
    }
    os << "</svg>\n";
}

struct Mesh {
    std::vector<Point3> vertices;
    std::vector<std::array<std::size_t, 3>> faces;  // zero-based
};

/// OBJ with v and f records only (one-based indices).
inline void write_obj(std::ostream& os, const Mesh& mesh)
{
    for (const Point3& v : mesh.vertices)
        os << "v " << format_double(v.x1) << ' ' << format_double(v.x2) << ' '
           << format_double(v.x3) << '\n';
    for (const auto& f : mesh.faces)
        os << "f " << f[0] + 1 << ' ' << f[1] + 1 << ' ' << f[2] + 1 << '\n';
}

} // namespace bigraph
