#pragma once

// Triangle mesh of a bigraph: the upper sheet sampled on a polar grid of the
// chart s = g(zeta), its mirror in the plane x3 = 0, and optional translates
// by the surface period.

#include <cmath>
#include <optional>
#include <vector>

#include "families.hpp"
#include "io.hpp"
#include "sheet.hpp"

namespace bigraph {

struct GridVertex {
    int i = 0;  // ring
    int j = 0;  // ray
    Point3 p;
};

struct SurfaceMesh {
    Mesh mesh;
    std::vector<GridVertex> upper;  // the upper sheet, ring by ring
    long failed = 0;                // grid nodes where continuation threw
    long total = 0;
};

inline constexpr double kMeshClearance = 0.05;
inline constexpr double kMeshFailureFraction = 0.01;

namespace detail {

inline double snap_height(double x3) { return std::abs(x3) < 1e-12 ? 0.0 : x3; }

// Polar grid with n_rings + 1 radii and n_rays rays offset by half a step, so
// that no ray runs through a puncture on the coordinate axes.
struct PolarGrid {
    std::vector<double> radii;
    std::vector<double> angles;
    bool has_centre = false;  // radii[0] == 0 collapses ring 0 to one node
};

inline PolarGrid polar_grid(const Family& f, int grid)
{
    PolarGrid g;
    const int n_rays = grid;
    const int n_rings = std::max(4, grid / 2);
    for (int j = 0; j < n_rays; ++j)
        g.angles.push_back(-pi + 2 * pi * (j + 0.5) / n_rays);
    if (f.kind == FamilyKind::VerticalCatenoid) {
        // s = 0 is the end of the catenoid; log spacing keeps the heights even
        for (int i = 0; i <= n_rings; ++i)
            g.radii.push_back(std::exp(-2.0 * (1.0 - static_cast<double>(i) / n_rings)));
    }
    else {
        g.has_centre = true;
        for (int i = 0; i <= n_rings; ++i)
            g.radii.push_back(static_cast<double>(i) / n_rings);
    }
    return g;
}

// True when the face between rays j and j + 1, reaching out to radius r,
// would straddle the cut running from an interior puncture to the rim.
inline bool crosses_cut(const SurfaceSheet& sheet, double r_inner_grid, double th0, double th1,
                        double r_outer)
{
    for (const cplx& e : sheet.spec().excluded_s) {
        const double re = std::abs(e);
        if (re <= r_inner_grid || re >= 1.0 - 1e-9)
            continue;
        const double te = std::arg(e);
        if (th0 < te && te < th1 && r_outer > re)
            return true;
    }
    return false;
}

} // namespace detail

/// Meshes the surface of `fm`. Throws MeshDegenerate when more than 1% of
/// the grid nodes cannot be evaluated.
inline SurfaceMesh build_surface_mesh(const FamilyModel& fm, int grid = 64, int periods = 1)
{
    if (grid < 8)
        throw Error(ErrorKind::InvalidParameter, "mesh grid needs at least 8 nodes");
    if (periods < 1)
        throw Error(ErrorKind::InvalidParameter, "periods must be at least 1");
    if (periods > 1 && !fm.family.periodic())
        throw Error(ErrorKind::InvalidParameter, fm.family.name() + " is not periodic");

    const SurfaceSheet& sheet = *fm.maps.sheet;
    const detail::PolarGrid pg = detail::polar_grid(fm.family, grid);
    const int n_rings = static_cast<int>(pg.radii.size()) - 1;
    const int n_rays = static_cast<int>(pg.angles.size());

    SurfaceMesh out;
    // node values; ring 0 of a centred grid is stored at ray 0 only
    std::vector<std::optional<SheetValue>> node(static_cast<std::size_t>((n_rings + 1) * n_rays));
    auto at = [n_rays](int i, int j) { return static_cast<std::size_t>(i * n_rays + j); };
    auto s_of = [&](int i, int j) { return std::polar(pg.radii[i], pg.angles[j]); };

    std::vector<SheetValue> inner(n_rays);
    if (pg.has_centre) {
        const SheetValue c = sheet.at_s(0.0);
        node[at(0, 0)] = c;
        ++out.total;
        for (auto& v : inner)
            v = c;
    }
    else {
        // continue once around the innermost ring
        SheetValue cur = sheet.at_s(s_of(0, 0));
        for (int j = 0; j < n_rays; ++j) {
            ++out.total;
            try {
                cur = sheet.advance(cur, s_of(0, j));
                inner[j] = cur;
                node[at(0, j)] = cur;
            }
            catch (const Error&) {
                ++out.failed;
                inner[j] = cur;
            }
        }
    }

    for (int j = 0; j < n_rays; ++j) {
        SheetValue prev = inner[j];
        for (int i = 1; i <= n_rings; ++i) {
            const cplx s = s_of(i, j);
            ++out.total;
            try {
                prev = sheet.advance(prev, s);
                if (sheet.distance_to_excluded(s) >= kMeshClearance)
                    node[at(i, j)] = prev;
            }
            catch (const Error&) {
                ++out.failed;
            }
        }
    }
    if (out.failed > kMeshFailureFraction * out.total)
        throw Error(ErrorKind::MeshDegenerate,
                    std::to_string(out.failed) + " of " + std::to_string(out.total) +
                        " grid nodes failed");

    // upper vertices, then mirrored copies of the interior ones
    std::vector<long> upper_id(node.size(), -1);
    std::vector<long> lower_id(node.size(), -1);
    std::vector<Point3> verts;
    for (int i = 0; i <= n_rings; ++i)
        for (int j = 0; j < n_rays; ++j) {
            const auto& v = node[at(i, j)];
            if (!v)
                continue;
            Point3 p = v->point();
            p.x3 = detail::snap_height(p.x3);
            upper_id[at(i, j)] = static_cast<long>(verts.size());
            verts.push_back(p);
            out.upper.push_back({i, j, p});
        }
    for (std::size_t k = 0; k < node.size(); ++k) {
        if (upper_id[k] < 0)
            continue;
        const Point3 p = verts[static_cast<std::size_t>(upper_id[k])];
        if (static_cast<int>(k) / n_rays == n_rings) {
            lower_id[k] = upper_id[k];  // the rim is welded
            continue;
        }
        lower_id[k] = static_cast<long>(verts.size());
        verts.push_back({p.x1, p.x2, p.x3 == 0.0 ? 0.0 : -p.x3});
    }

    std::vector<std::array<std::size_t, 3>> faces;
    auto add = [&](std::size_t a, std::size_t b, std::size_t c) {
        if (upper_id[a] < 0 || upper_id[b] < 0 || upper_id[c] < 0)
            return;
        faces.push_back({static_cast<std::size_t>(upper_id[a]), static_cast<std::size_t>(upper_id[b]),
                         static_cast<std::size_t>(upper_id[c])});
        faces.push_back({static_cast<std::size_t>(lower_id[a]), static_cast<std::size_t>(lower_id[c]),
                         static_cast<std::size_t>(lower_id[b])});
    };
    const double r_inner_grid = pg.radii[0];
    for (int j = 0; j < n_rays; ++j) {
        const int jn = (j + 1) % n_rays;
        const double th0 = pg.angles[j];
        const double th1 = jn == 0 ? pg.angles[0] + 2 * pi : pg.angles[jn];
        for (int i = 0; i < n_rings; ++i) {
            if (detail::crosses_cut(sheet, r_inner_grid, th0, th1, pg.radii[i + 1]))
                continue;
            if (i == 0 && pg.has_centre) {
                add(at(0, 0), at(1, j), at(1, jn));
                continue;
            }
            add(at(i, j), at(i + 1, j), at(i + 1, jn));
            add(at(i, j), at(i + 1, jn), at(i, jn));
        }
    }

    const cplx period = sheet.period_psi();
    for (int k = 0; k < periods; ++k) {
        const std::size_t offset = out.mesh.vertices.size();
        for (const Point3& p : verts)
            out.mesh.vertices.push_back(
                {p.x1 + k * period.real(), p.x2 + k * period.imag(), p.x3});
        for (const auto& f : faces)
            out.mesh.faces.push_back({f[0] + offset, f[1] + offset, f[2] + offset});
    }
    return out;
}

} // namespace bigraph
