#pragma once

// Sampled checks of the identities tying a domain to its bigraph: the PDE,
// boundary data, curvature of the boundary, distortion bounds for univalent
// maps of the half-plane, and the expansion property of F.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "correspondence.hpp"
#include "families.hpp"
#include "numerics.hpp"
#include "weierstrass.hpp"

namespace bigraph {

struct Check {
    std::string name;
    double max_residual = 0.0;
    double tolerance = 0.0;
    long n_samples = 0;
    bool pass = false;
};

inline Check make_check(std::string name, double residual, double tolerance, long n)
{
    return {std::move(name), residual, tolerance, n, n >= 1 && residual <= tolerance};
}

struct VerificationReport {
    std::vector<Check> checks;

    bool all_pass() const
    {
        return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
    }
    void add(Check c) { checks.push_back(std::move(c)); }
    void append(const VerificationReport& other)
    {
        checks.insert(checks.end(), other.checks.begin(), other.checks.end());
    }
    const Check* find(const std::string& name) const
    {
        for (const Check& c : checks)
            if (c.name == name)
                return &c;
        return nullptr;
    }
};

// ---------------------------------------------------------------------------
// Sampling
// ---------------------------------------------------------------------------

/// Cell-centred grid over the model window, restricted to Omega.
inline std::vector<cplx> interior_grid(const DomainModel& model, int grid_n)
{
    if (grid_n < 8)
        throw Error(ErrorKind::InvalidParameter, "grid_n must be at least 8");
    const Window& w = model.window;
    std::vector<cplx> pts;
    for (int i = 0; i < grid_n; ++i)
        for (int j = 0; j < grid_n; ++j) {
            const cplx p{w.x0 + (w.x1 - w.x0) * (i + 0.5) / grid_n,
                         w.y0 + (w.y1 - w.y0) * (j + 0.5) / grid_n};
            if (model.contains(p))
                pts.push_back(p);
        }
    return pts;
}

/// Random points of Omega inside the window with defining function >= margin.
inline std::vector<cplx> interior_samples(const DomainModel& model, int n, Rng& rng,
                                          double margin = 1e-2)
{
    std::vector<cplx> pts;
    const Window& w = model.window;
    for (long tries = 0; static_cast<int>(pts.size()) < n; ++tries) {
        if (tries > 1000L * n)
            throw Error(ErrorKind::EmptyGrid, "could not sample the interior of " + model.name);
        const cplx p{rng.uniform(w.x0, w.x1), rng.uniform(w.y0, w.y1)};
        if (model.defining(p) >= margin)
            pts.push_back(p);
    }
    return pts;
}

struct BoundarySample {
    int component;
    double t;
    cplx w;
};

inline std::vector<BoundarySample> boundary_samples(const DomainModel& model, int per_component)
{
    std::vector<BoundarySample> out;
    const auto [t0, t1] = model.boundary_range;
    for (int c = 0; c < model.n_components; ++c)
        for (int i = 0; i < per_component; ++i) {
            const double t = t0 + (t1 - t0) * i / (per_component - 1);
            out.push_back({c, t, model.boundary(c, t)});
        }
    return out;
}

// ---------------------------------------------------------------------------
// PDE and boundary data
// ---------------------------------------------------------------------------

namespace detail {

inline bool stencil_inside(const DomainModel& m, cplx p, double h)
{
    return m.contains(p + h) && m.contains(p - h) && m.contains(p + cplx(0, h)) &&
           m.contains(p - cplx(0, h));
}

inline double max_laplacian(const DomainModel& m, const std::vector<cplx>& pts, double h)
{
    double worst = 0.0;
    for (const cplx& p : pts)
        worst = std::max(worst, std::abs(laplacian_residual(m.u, p, h)));
    return worst;
}

} // namespace detail

/// Harmonicity, positivity and the Dirichlet / Neumann boundary data.
inline VerificationReport verify_pde(const DomainModel& model, int grid_n, double h = 1e-4)
{
    const std::vector<cplx> grid = interior_grid(model, grid_n);
    std::vector<cplx> full;
    for (const cplx& p : grid)
        if (detail::stencil_inside(model, p, h))
            full.push_back(p);
    if (full.empty())
        throw Error(ErrorKind::EmptyGrid, "no interior grid points for " + model.name);

    VerificationReport r;
    r.add(make_check("harmonic_residual", detail::max_laplacian(model, full, h),
                     model.analytic ? 1e-5 : 1e-4, static_cast<long>(full.size())));

    long violations = 0;
    for (const cplx& p : grid)
        if (!(model.u(p) > 0.0))
            ++violations;
    r.add(make_check("positivity_violations", static_cast<double>(violations), 0.0,
                     static_cast<long>(grid.size())));

    const double btol = model.analytic ? 1e-12 : 1e-8;
    const auto bs = boundary_samples(model, std::max(16, 4 * grid_n));
    double du = 0.0;
    double dn = 0.0;
    for (const BoundarySample& b : bs) {
        du = std::max(du, std::abs(model.u(b.w)));
        dn = std::max(dn, std::abs(model.grad_u(b.w).norm() - 1.0));
    }
    r.add(make_check("boundary_dirichlet", du, btol, static_cast<long>(bs.size())));
    r.add(make_check("boundary_neumann", dn, btol, static_cast<long>(bs.size())));
    return r;
}

/// Ratio of the max five-point residual at h and h/2; 4 for an O(h^2) scheme.
inline double harmonic_scaling_ratio(const DomainModel& model, int grid_n, double h,
                                     long* n_used = nullptr)
{
    std::vector<cplx> pts;
    for (const cplx& p : interior_grid(model, grid_n))
        if (detail::stencil_inside(model, p, h))
            pts.push_back(p);
    if (pts.empty())
        throw Error(ErrorKind::EmptyGrid, "no interior grid points for " + model.name);
    if (n_used)
        *n_used = static_cast<long>(pts.size());
    return detail::max_laplacian(model, pts, h) / detail::max_laplacian(model, pts, h / 2);
}

inline Check check_harmonic_scaling(const DomainModel& model, int grid_n, double h = 1e-2)
{
    long n = 0;
    const double ratio = harmonic_scaling_ratio(model, grid_n, h, &n);
    return make_check("harmonic_h_scaling", std::abs(ratio - 4.0), 0.5, n);
}

/// |grad u| < 1 on the grid and at inward offsets 1e-1, 1e-2, 1e-3 from the
/// boundary.
inline Check check_gradient_bound(const DomainModel& model, int grid_n)
{
    double worst = 0.0;
    long n = 0;
    for (const cplx& p : interior_grid(model, grid_n)) {
        worst = std::max(worst, model.grad_u(p).norm());
        ++n;
    }
    for (const BoundarySample& b : boundary_samples(model, 32)) {
        const Vec2 g = model.grad_u(b.w);
        const cplx inward = cplx(g.x, g.y) / g.norm();
        for (double d : {1e-1, 1e-2, 1e-3}) {
            const cplx p = b.w + d * inward;
            if (!model.contains(p))
                continue;
            worst = std::max(worst, model.grad_u(p).norm());
            ++n;
        }
    }
    return make_check("gradient_bound", worst, 1.0 - 1e-12, n);
}

// ---------------------------------------------------------------------------
// Curvature of the boundary
// ---------------------------------------------------------------------------

/// Curvature of the level set of u through a point with gradient grad and
/// Hessian hess; positive when the level set bends away from {u > level}.
inline double boundary_curvature(Vec2 grad, Hessian2 hess)
{
    const double n2 = grad.x * grad.x + grad.y * grad.y;
    if (!(n2 > 0.0))
        throw Error(ErrorKind::CriticalPoint, "gradient vanishes");
    return (hess.xx * grad.y * grad.y + hess.yy * grad.x * grad.x -
            2.0 * hess.xy * grad.x * grad.y) /
           std::pow(n2, 1.5);
}

inline double boundary_curvature(const DomainModel& model, cplx w)
{
    return boundary_curvature(model.grad_u(w), model.hess_u(w));
}

inline Check check_curvature(const DomainModel& model, int per_component = 256)
{
    long nonpositive = 0;
    const auto bs = boundary_samples(model, per_component);
    for (const BoundarySample& b : bs)
        if (!(boundary_curvature(model, b.w) > 0.0))
            ++nonpositive;
    return make_check("boundary_curvature_positive", static_cast<double>(nonpositive), 0.0,
                      static_cast<long>(bs.size()));
}

// ---------------------------------------------------------------------------
// Distortion of univalent maps of the upper half-plane
// ---------------------------------------------------------------------------

struct DistortionBounds {
    double theorem_lower, theorem_upper, estimate_lower, estimate_upper;
};

inline DistortionBounds distortion_bounds(cplx z)
{
    const double p = std::abs(z + cplx(0, 1));
    const double m = std::abs(z - cplx(0, 1));
    const double r = std::abs(z) + 1.0;
    const double y = z.imag();
    return {4.0 * (p - m) / std::pow(p + m, 3), 4.0 * (p + m) / std::pow(p - m, 3),
            y / std::pow(r, 4), std::pow(r, 4) / (y * y * y)};
}

/// For f univalent on the upper half-plane with f(i) = 0, f'(i) = 1, checks
/// both two-sided bounds on |f'| at every sample. Residuals are relative
/// violations (negative when the bound holds with room).
inline VerificationReport check_distortion(const std::function<cplx(cplx)>& f,
                                           const std::function<cplx(cplx)>& df,
                                           const std::vector<cplx>& samples)
{
    const cplx i{0, 1};
    if (std::abs(f(i)) > 1e-10 || std::abs(df(i) - 1.0) > 1e-10)
        throw Error(ErrorKind::NotNormalized, "need f(i) = 0 and f'(i) = 1");
    const double inf = std::numeric_limits<double>::infinity();
    double tl = -inf, tu = -inf, el = -inf, eu = -inf;
    for (const cplx& z : samples) {
        if (!(z.imag() > 0.0))
            throw Error(ErrorKind::InvalidParameter, "sample not in the upper half-plane");
        const double a = std::abs(df(z));
        const DistortionBounds b = distortion_bounds(z);
        tl = std::max(tl, b.theorem_lower / a - 1.0);
        tu = std::max(tu, a / b.theorem_upper - 1.0);
        el = std::max(el, b.estimate_lower / a - 1.0);
        eu = std::max(eu, a / b.estimate_upper - 1.0);
    }
    const long n = static_cast<long>(samples.size());
    constexpr double slack = 1e-12;
    VerificationReport r;
    r.add(make_check("distortion_theorem_lower", tl, slack, n));
    r.add(make_check("distortion_theorem_upper", tu, slack, n));
    r.add(make_check("distortion_estimate_lower", el, slack, n));
    r.add(make_check("distortion_estimate_upper", eu, slack, n));
    return r;
}

/// Upper half-plane samples with log-uniform heights in [1e-2, 1e2].
inline std::vector<cplx> half_plane_samples(int n, Rng& rng)
{
    std::vector<cplx> out;
    for (int k = 0; k < n; ++k) {
        const double x = rng.uniform(-10.0, 10.0);
        const double y = std::exp(rng.uniform(std::log(1e-2), std::log(1e2)));
        out.push_back({x, y});
    }
    return out;
}

/// Koebe function carried to the half-plane: f = -2 K((z-i)/(iz-1)).
inline cplx koebe_half_plane(cplx z)
{
    const cplx i{0, 1};
    const cplx w = (z - i) / (i * z - 1.0);
    return -2.0 * w / ((1.0 - w) * (1.0 - w));
}

inline cplx koebe_half_plane_derivative(cplx z)
{
    const cplx i{0, 1};
    const cplx w = (z - i) / (i * z - 1.0);
    const cplx d = i * z - 1.0;
    return 4.0 / (d * d) * (1.0 + w) / ((1.0 - w) * (1.0 - w) * (1.0 - w));
}

// ---------------------------------------------------------------------------
// Expansion of F and boundary behaviour of the maps
// ---------------------------------------------------------------------------

/// min over pairs of |F(z) - F(z')| - |z - z'|, reported as its negative.
inline Check check_expansion(const CorrespondenceMaps& maps,
                             const std::vector<std::pair<cplx, cplx>>& pairs)
{
    double worst = -std::numeric_limits<double>::infinity();
    for (const auto& [a, b] : pairs) {
        cplx fa, fb;
        try {
            fa = map_F(maps, a);
            fb = map_F(maps, b);
        }
        catch (const Error& e) {
            if (e.kind() == ErrorKind::InversionFailed)
                throw Error(ErrorKind::OutsideDomain, e.what());
            throw;
        }
        worst = std::max(worst, std::abs(a - b) - std::abs(fa - fb));
    }
    return make_check("expansion", worst, 1e-10, static_cast<long>(pairs.size()));
}

/// Random chart points of the upper sheet kept away from its punctures.
inline std::vector<cplx> sheet_samples(const SurfaceSheet& sheet, int n, Rng& rng,
                                       double radius = 0.95, double clearance = 0.05)
{
    std::vector<cplx> out;
    while (static_cast<int>(out.size()) < n) {
        const cplx s{rng.uniform(-radius, radius), rng.uniform(-radius, radius)};
        if (std::abs(s) <= radius && sheet.distance_to_excluded(s) >= clearance)
            out.push_back(s);
    }
    return out;
}

/// Random pairs of points of psi(Omega).
inline std::vector<std::pair<cplx, cplx>> hat_pairs(const SurfaceSheet& sheet, int n, Rng& rng)
{
    const std::vector<cplx> s = sheet_samples(sheet, 2 * n, rng);
    std::vector<std::pair<cplx, cplx>> out;
    for (int k = 0; k < n; ++k)
        out.emplace_back(sheet.at_s(s[2 * k]).psi, sheet.at_s(s[2 * k + 1]).psi);
    return out;
}

/// Chart points along one boundary arc of the upper sheet.
inline std::vector<cplx> arc_points(const SurfaceSheet& sheet, const BoundaryArc& arc, int n,
                                    double clearance = 0.06)
{
    std::vector<cplx> out;
    for (int k = 0; k <= n; ++k) {
        const double th = arc.theta0 + (arc.theta1 - arc.theta0) * k / n;
        const cplx s = std::polar(1.0, th);
        if (sheet.distance_to_excluded(s) >= clearance)
            out.push_back(s);
    }
    return out;
}

/// On each boundary component F(z) - F(z') = conj(z - z').
inline Check check_boundary_isometry(const FamilyModel& fm, int n_pairs, Rng& rng)
{
    double worst = 0.0;
    long count = 0;
    for (const BoundaryArc& arc : fm.surface_arcs) {
        const std::vector<cplx> pts = arc_points(*fm.maps.sheet, arc, 400);
        const std::vector<SheetValue> v = fm.maps.sheet->trace_s(pts);
        for (int k = 0; k < n_pairs; ++k) {
            const SheetValue& a = v[rng.index(v.size())];
            const SheetValue& b = v[rng.index(v.size())];
            worst = std::max(worst, std::abs((a.phi - b.phi) - std::conj(a.psi - b.psi)));
            ++count;
        }
    }
    return make_check("boundary_isometry", worst, 1e-9, count);
}

/// X3 vanishes on the boundary of the upper sheet.
inline Check check_boundary_height(const FamilyModel& fm)
{
    double worst = 0.0;
    long count = 0;
    for (const BoundaryArc& arc : fm.surface_arcs) {
        const std::vector<cplx> pts = arc_points(*fm.maps.sheet, arc, 400);
        for (const SheetValue& v : fm.maps.sheet->trace_s(pts)) {
            worst = std::max(worst, std::abs(v.h.real()));
            ++count;
        }
    }
    return make_check("boundary_height", worst, 1e-9, count);
}

/// psi(gamma(t)) - conj(gamma(t)) is constant on each boundary component;
/// reports the largest deviation from the per-component mean.
inline Check check_boundary_translation(const DomainModel& model, int pieces = 64)
{
    double worst = 0.0;
    long count = 0;
    const auto [t0, t1] = model.boundary_range;
    for (int c = 0; c < model.n_components; ++c) {
        std::vector<cplx> d{0.0};
        cplx acc{0, 0};
        const cplx start = model.boundary(c, t0);
        for (int k = 0; k < pieces; ++k) {
            const double a = t0 + (t1 - t0) * k / pieces;
            const double b = t0 + (t1 - t0) * (k + 1) / pieces;
            const ComplexPath piece = ComplexPath::curve(
                [&model, c](double t) { return model.boundary(c, t); },
                [&model, c](double t) { return model.boundary_velocity(c, t); }, a, b);
            acc += map_psi(model, piece);
            d.push_back(acc - std::conj(model.boundary(c, b) - start));
        }
        cplx mean{0, 0};
        for (const cplx& x : d)
            mean += x;
        mean /= static_cast<double>(d.size());
        for (const cplx& x : d)
            worst = std::max(worst, std::abs(x - mean));
        count += static_cast<long>(d.size());
    }
    return make_check("boundary_translation", worst, 1e-8, count);
}

// ---------------------------------------------------------------------------
// Domain-side identities
// ---------------------------------------------------------------------------

/// grad u against central differences of u, relative to max(|grad u|, 1e-2).
inline Check check_gradient_fd(const DomainModel& model, const std::vector<cplx>& pts,
                               double h = 1e-4)
{
    double worst = 0.0;
    for (const cplx& p : pts) {
        const Vec2 g = model.grad_u(p);
        const double gx = (model.u(p + h) - model.u(p - h)) / (2 * h);
        const double gy = (model.u(p + cplx(0, h)) - model.u(p - cplx(0, h))) / (2 * h);
        const double err = std::hypot(gx - g.x, gy - g.y) / std::max(g.norm(), 1e-2);
        worst = std::max(worst, err);
    }
    return make_check("gradient_fd", worst, 1e-5, static_cast<long>(pts.size()));
}

/// Jacobian determinant of psi by central differences. Each column is the
/// integral of d psi over the segment [w - h e, w + h e].
inline double det_dpsi_fd(const DomainModel& model, cplx w, double h = 1e-4)
{
    const cplx cx = map_psi(model, ComplexPath::segment(w - h, w + h)) / (2 * h);
    const cplx cy =
        map_psi(model, ComplexPath::segment(w - cplx(0, h), w + cplx(0, h))) / (2 * h);
    return cx.real() * cy.imag() - cx.imag() * cy.real();
}

inline Check check_det_dpsi(const DomainModel& model, const std::vector<cplx>& pts,
                            double h = 1e-4)
{
    double worst = 0.0;
    for (const cplx& p : pts) {
        const double exact = det_dpsi(model, p);
        worst = std::max(worst, std::abs(det_dpsi_fd(model, p, h) - exact) / std::abs(exact));
    }
    return make_check("det_dpsi_fd", worst, 1e-6, static_cast<long>(pts.size()));
}

/// Points of pts where |grad u| <= bound; there |det d psi| >= (1 - bound^4)/4.
inline std::vector<cplx> away_from_boundary(const DomainModel& model,
                                            const std::vector<cplx>& pts, double bound = 0.95)
{
    std::vector<cplx> out;
    for (const cplx& p : pts)
        if (model.grad_u(p).norm() <= bound)
            out.push_back(p);
    return out;
}

/// Rebuilds phi from (g, dh) = (2 u_z, 2 u_z dz): phi(w) - w is constant.
inline Check check_round_trip(const DomainModel& model, const std::vector<cplx>& pts)
{
    const WeierstrassData data = domain_weierstrass_data(model);
    std::vector<cplx> d;
    for (const cplx& p : pts)
        d.push_back(map_phi(data, model.plan_path(model.z0, p)) - p);
    cplx mean{0, 0};
    for (const cplx& x : d)
        mean += x;
    mean /= static_cast<double>(d.size());
    double worst = 0.0;
    for (const cplx& x : d)
        worst = std::max(worst, std::abs(x - mean));
    return make_check("round_trip", worst, 1e-7, static_cast<long>(pts.size()));
}

/// 1/2 <= lambda <= 1 for the data built from the domain.
inline Check check_metric_bound(const DomainModel& model, const std::vector<cplx>& pts)
{
    const WeierstrassData data = domain_weierstrass_data(model);
    double worst = 0.0;
    long n = 0;
    for (const cplx& p : pts) {
        double lam = 0.0;
        try {
            lam = metric_factor(data, p);
        }
        catch (const Error& e) {
            if (e.kind() == ErrorKind::ZeroGaussMap)
                continue;
            throw;
        }
        worst = std::max({worst, 0.5 - lam, lam - 1.0});
        ++n;
    }
    return make_check("metric_bound", worst, 0.0, n);
}

/// phi_1^2 + phi_2^2 + phi_3^2 = 0, relative to the sum of squared moduli.
inline Check check_conformality(const FamilyModel& fm, const std::vector<cplx>& chart_pts)
{
    double worst = 0.0;
    for (const cplx& s : chart_pts) {
        const cplx zeta = fm.maps.sheet->zeta_of(s);
        const auto c = immersion_coefficients(fm.surface, zeta);
        const cplx q = c[0] * c[0] + c[1] * c[1] + c[2] * c[2];
        const double scale = std::norm(c[0]) + std::norm(c[1]) + std::norm(c[2]);
        worst = std::max(worst, std::abs(q) / scale);
    }
    return make_check("conformality", worst, 1e-12, static_cast<long>(chart_pts.size()));
}

inline VerificationReport check_scherk_identities(double alpha)
{
    VerificationReport r;
    const Family f = Family::scherk(alpha);
    const BoundaryCurve bc = sample_boundary(f, 0, 2048);
    double res = 0.0;
    for (const cplx& p : bc.samples)
        res = std::max(res, std::abs(scherk_implicit_residual(alpha, p.real(), p.imag())));
    r.add(make_check("scherk_implicit", res, 1e-9, static_cast<long>(bc.samples.size())));

    const WeierstrassData data = scherk_data(alpha);
    const double T = scherk_period(alpha);
    const cplx e = std::polar(1.0, alpha);
    double rad = 0.5;
    for (const cplx& q : scherk_punctures(alpha))
        if (q != e)
            rad = std::min(rad, 0.5 * std::abs(q - e));
    const cplx p = loop_period(data, ComplexPath::circle(e, rad));
    r.add(make_check("scherk_period", std::abs(std::abs(p) - T) / T, 1e-8, 1));
    const cplx residue = p / cplx(0, 2 * pi);
    r.add(make_check("scherk_residue",
                     std::abs(residue - cplx(0, 1 + std::cos(alpha))) / (1 + std::cos(alpha)),
                     1e-8, 1));
    return r;
}

struct VerifyOptions {
    int grid = 64;
    std::uint64_t seed = kDefaultSeed;
    int samples = 100;   // interior samples for the Jacobian and round-trip checks
    int pairs = 1000;    // expansion pairs
};

/// The full check suite for one family.
inline VerificationReport verify_family(const FamilyModel& fm, const VerifyOptions& opt = {})
{
    Rng rng(opt.seed);
    const DomainModel& m = fm.domain;
    VerificationReport r = verify_pde(m, opt.grid);
    r.add(check_harmonic_scaling(m, std::min(opt.grid, 32)));
    r.add(check_gradient_bound(m, opt.grid));
    r.add(check_curvature(m));

    const std::vector<cplx> pts = interior_samples(m, opt.samples, rng);
    r.add(check_gradient_fd(m, pts));
    std::vector<cplx> det_pts;
    while (static_cast<int>(det_pts.size()) < opt.samples) {
        for (const cplx& p : away_from_boundary(m, interior_samples(m, opt.samples, rng)))
            if (static_cast<int>(det_pts.size()) < opt.samples)
                det_pts.push_back(p);
    }
    r.add(check_det_dpsi(m, det_pts));
    r.add(check_round_trip(m, pts));
    r.add(check_metric_bound(m, pts));

    r.add(check_expansion(fm.maps, hat_pairs(*fm.maps.sheet, opt.pairs, rng)));
    r.add(check_boundary_translation(m));
    r.add(check_boundary_isometry(fm, 200, rng));
    r.add(check_boundary_height(fm));
    r.add(check_conformality(fm, sheet_samples(*fm.maps.sheet, opt.samples, rng)));
    if (fm.family.kind == FamilyKind::Scherk)
        r.append(check_scherk_identities(fm.family.alpha));
    return r;
}

} // namespace bigraph
