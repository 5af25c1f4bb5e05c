#pragma once

// The three example families: vertical catenoid, horizontal catenoid and
// the Scherk(alpha) simply periodic surfaces, with their exceptional domains.

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "correspondence.hpp"
#include "numerics.hpp"
#include "sheet.hpp"
#include "weierstrass.hpp"

namespace bigraph {

using std::numbers::pi;

enum class FamilyKind { VerticalCatenoid, HorizontalCatenoid, Scherk };

struct Family {
    FamilyKind kind = FamilyKind::VerticalCatenoid;
    double alpha = 0.0;  // Scherk only

    static Family vertical_catenoid() { return {FamilyKind::VerticalCatenoid, 0.0}; }
    static Family horizontal_catenoid() { return {FamilyKind::HorizontalCatenoid, 0.0}; }
    static Family scherk(double alpha)
    {
        Family f{FamilyKind::Scherk, alpha};
        f.validate();
        return f;
    }

    void validate() const
    {
        if (kind == FamilyKind::Scherk && !(alpha > 0.0 && alpha < pi / 2))
            throw Error(ErrorKind::InvalidParameter, "Scherk alpha must lie in (0, pi/2)");
    }

    std::string name() const
    {
        switch (kind) {
        case FamilyKind::VerticalCatenoid: return "vertical-catenoid";
        case FamilyKind::HorizontalCatenoid: return "horizontal-catenoid";
        case FamilyKind::Scherk: return "scherk";
        }
        return "unknown";
    }

    /// Number of boundary components (per period cell for Scherk).
    int n_components() const { return kind == FamilyKind::HorizontalCatenoid ? 2 : 1; }
    bool periodic() const { return kind == FamilyKind::Scherk; }
};

inline std::optional<FamilyKind> parse_family_kind(const std::string& s)
{
    if (s == "vertical-catenoid")
        return FamilyKind::VerticalCatenoid;
    if (s == "horizontal-catenoid")
        return FamilyKind::HorizontalCatenoid;
    if (s == "scherk")
        return FamilyKind::Scherk;
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Scherk boundary
// ---------------------------------------------------------------------------

inline double scherk_period(double alpha) { return 2.0 * pi * (1.0 + std::cos(alpha)); }

/// gamma(t); x uses the continuous branch of the arctangent, x(0) = 4 alpha.
inline cplx scherk_boundary(double alpha, double t)
{
    const double s = std::sin(alpha);
    const double t2 = t * t;
    const double x = 2.0 * std::atan2(std::sin(2 * alpha), t2 + std::cos(2 * alpha));
    const double y = std::cos(alpha) * std::log((t2 + 2 * s * t + 1) / (t2 - 2 * s * t + 1));
    return {x, y};
}

inline cplx scherk_boundary_velocity(double alpha, double t)
{
    const double s = std::sin(alpha);
    const double s2 = std::sin(2 * alpha);
    const double q = t * t + std::cos(2 * alpha);
    const double dx = -4.0 * t * s2 / (q * q + s2 * s2);
    const double dy = std::cos(alpha) * ((2 * t + 2 * s) / (t * t + 2 * s * t + 1) -
                                         (2 * t - 2 * s) / (t * t - 2 * s * t + 1));
    return {dx, dy};
}

/// Largest |y| on gamma, reached at t = 1.
inline double scherk_half_height(double alpha)
{
    const double s = std::sin(alpha);
    return std::cos(alpha) * std::log((1 + s) / (1 - s));
}

inline double scherk_implicit_residual(double alpha, double x, double y)
{
    const double c = std::cos(alpha);
    const double s = std::sin(alpha);
    return c * c * std::cosh(y / c) - s * s - std::cos(2 * alpha - x);
}

/// Positive in the Scherk domain, negative inside the convex blobs
/// bounded by gamma and its translates.
inline double scherk_defining(double alpha, cplx w)
{
    const double T = scherk_period(alpha);
    const double center = 2 * alpha;
    const double k = std::floor((w.real() - (center - T / 2)) / T);
    const double xr = w.real() - k * T;
    const double r = scherk_implicit_residual(alpha, xr, w.imag());
    if (xr >= 0.0 && xr <= 4 * alpha)
        return r;
    const double strip = xr < 0.0 ? -xr : xr - 4 * alpha;
    return std::max(r, strip);
}

// ---------------------------------------------------------------------------
// Boundary parametrizations
// ---------------------------------------------------------------------------

inline void require_component(const Family& f, int component)
{
    const bool ok = f.kind == FamilyKind::Scherk ||
                    (component >= 0 && component < f.n_components());
    if (!ok)
        throw Error(ErrorKind::BadComponent,
                    "component " + std::to_string(component) + " is not valid for " + f.name());
}

/// Component c of the boundary at parameter t. Horizontal catenoid:
/// c = 0 is the lower branch, c = 1 the upper. Scherk: c indexes the
/// translates of gamma by c T.
inline cplx boundary_param(const Family& f, int component, double t)
{
    f.validate();
    require_component(f, component);
    switch (f.kind) {
    case FamilyKind::VerticalCatenoid: return std::polar(1.0, t);
    case FamilyKind::HorizontalCatenoid: {
        const double eps = component == 0 ? 1.0 : -1.0;
        return {-t, -eps * (pi / 2 + std::cosh(t))};
    }
    case FamilyKind::Scherk:
        return scherk_boundary(f.alpha, t) + static_cast<double>(component) * scherk_period(f.alpha);
    }
    return {};
}

inline cplx boundary_velocity(const Family& f, int component, double t)
{
    f.validate();
    require_component(f, component);
    switch (f.kind) {
    case FamilyKind::VerticalCatenoid: return cplx(0, 1) * std::polar(1.0, t);
    case FamilyKind::HorizontalCatenoid: {
        const double eps = component == 0 ? 1.0 : -1.0;
        return {-1.0, -eps * std::sinh(t)};
    }
    case FamilyKind::Scherk: return scherk_boundary_velocity(f.alpha, t);
    }
    return {};
}

struct BoundaryCurve {
    std::vector<double> t;
    std::vector<cplx> samples;
    int component_id = 0;
    bool closed = false;
};

inline constexpr double kDefaultBoundaryRange = 12.0;

/// n samples of a boundary component. The vertical catenoid circle is
/// sampled over [0, 2 pi), the horizontal catenoid over [-t_max, t_max]; the
/// closed Scherk curve uses t = tan(tau) so that both ends reach the vertex
/// at the origin.
inline BoundaryCurve sample_boundary(const Family& f, int component, int n,
                                     double t_max = kDefaultBoundaryRange)
{
    if (n < 2)
        throw Error(ErrorKind::InvalidParameter, "need at least 2 boundary samples");
    require_component(f, component);
    BoundaryCurve c;
    c.component_id = component;
    c.closed = f.kind != FamilyKind::HorizontalCatenoid;
    for (int i = 0; i < n; ++i) {
        double t = 0.0;
        switch (f.kind) {
        case FamilyKind::VerticalCatenoid: t = 2 * pi * i / n; break;
        case FamilyKind::HorizontalCatenoid: t = -t_max + 2 * t_max * i / (n - 1); break;
        case FamilyKind::Scherk: t = std::tan(-pi / 2 + pi * (i + 0.5) / n); break;
        }
        c.t.push_back(t);
        c.samples.push_back(boundary_param(f, component, t));
    }
    return c;
}

// ---------------------------------------------------------------------------
// Scaled limits of the Scherk domains
// ---------------------------------------------------------------------------

enum class LimitMode { ToZero, ToHalfPi };

inline double limit_scale(double alpha, LimitMode mode)
{
    return mode == LimitMode::ToZero ? 1.0 / (2 * alpha) : 1.0 / (pi - 2 * alpha);
}

inline cplx scaled_limit_boundary(double alpha, LimitMode mode, double t, int component = 0)
{
    return boundary_param(Family::scherk(alpha), component, t) * limit_scale(alpha, mode);
}

namespace detail {

// Distance from p to the graph x = cosh(y) - 1 (mirror = false) or
// x = -pi - 1 - cosh(y) (mirror = true).
inline double distance_to_cosh_branch(cplx p, bool mirror)
{
    auto curve = [mirror](double y) {
        const double x = std::cosh(y) - 1.0;
        return cplx(mirror ? -pi - 2.0 - x : x, y);
    };
    auto dist = [&](double y) { return std::abs(curve(y) - p); };
    const double lo = -8.0;
    const double hi = 8.0;
    const int n = 1600;
    double best_y = lo;
    double best = dist(lo);
    for (int i = 1; i <= n; ++i) {
        const double y = lo + (hi - lo) * i / n;
        const double d = dist(y);
        if (d < best) {
            best = d;
            best_y = y;
        }
    }
    // golden-section refinement around the best sample
    const double step = (hi - lo) / n;
    double a = best_y - step;
    double b = best_y + step;
    const double r = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - r * (b - a);
    double d = a + r * (b - a);
    for (int it = 0; it < 80; ++it) {
        if (dist(c) < dist(d))
            b = d;
        else
            a = c;
        c = b - r * (b - a);
        d = a + r * (b - a);
    }
    return std::min(best, dist(0.5 * (a + b)));
}

} // namespace detail

/// Distance from p to the limit boundary: the circle |z - 1| = 1, or the two
/// branches of |x + 1 + pi/2| = pi/2 + cosh y.
inline double limit_curve_distance(LimitMode mode, cplx p)
{
    if (mode == LimitMode::ToZero)
        return std::abs(std::abs(p - 1.0) - 1.0);
    return std::min(detail::distance_to_cosh_branch(p, false),
                    detail::distance_to_cosh_branch(p, true));
}

inline constexpr double kLimitWindow = 10.0;

/// Two-sided max deviation between the scaled Scherk boundary and the limit
/// curve, measured inside the disk |z| <= kLimitWindow.
inline double limit_deviation(double alpha, LimitMode mode, int n_samples = 4096)
{
    const Family f = Family::scherk(alpha);
    std::vector<int> comps{0};
    if (mode == LimitMode::ToHalfPi)
        comps.push_back(-1);
    const double scale = limit_scale(alpha, mode);

    double worst = 0.0;
    std::vector<ComplexPath> scaled;
    for (int c : comps) {
        // the vertex c T closes the curve (t -> +-infinity)
        std::vector<cplx> pts{cplx(c * scherk_period(alpha) * scale, 0.0)};
        const BoundaryCurve bc = sample_boundary(f, c, n_samples);
        for (const cplx& z : bc.samples)
            pts.push_back(z * scale);
        pts.push_back(pts.front());
        for (const cplx& p : pts)
            if (std::abs(p) <= kLimitWindow)
                worst = std::max(worst, limit_curve_distance(mode, p));
        scaled.push_back(ComplexPath::polyline(std::move(pts)));
    }

    auto to_scaled = [&](cplx q) {
        double d = std::numeric_limits<double>::infinity();
        for (const ComplexPath& p : scaled)
            d = std::min(d, p.distance_to(q));
        return d;
    };
    const int m = 2000;
    if (mode == LimitMode::ToZero) {
        for (int i = 0; i < m; ++i)
            worst = std::max(worst, to_scaled(1.0 + std::polar(1.0, 2 * pi * i / m)));
    }
    else {
        for (int i = 0; i <= m; ++i) {
            const double y = -4.0 + 8.0 * i / m;
            const double x = std::cosh(y) - 1.0;
            for (cplx q : {cplx(x, y), cplx(-pi - 2.0 - x, y)})
                if (std::abs(q) <= kLimitWindow)
                    worst = std::max(worst, to_scaled(q));
        }
    }
    return worst;
}

// ---------------------------------------------------------------------------
// Weierstrass data
// ---------------------------------------------------------------------------

/// g = z, dh = dz/z on C*.
inline WeierstrassData standard_catenoid_data()
{
    WeierstrassData d;
    d.g = [](cplx z) { return z; };
    d.dh = [](cplx z) { return 1.0 / z; };
    d.dg = [](cplx) { return cplx(1, 0); };
    d.punctures = {cplx(0, 0)};
    d.basepoint = 1.0;
    return d;
}

/// g = -1/z, dh = dz/z; the upper half is |z| > 1.
inline WeierstrassData vertical_catenoid_data()
{
    WeierstrassData d = reflect_data(standard_catenoid_data());
    d.basepoint = 1.0;
    d.base_value = {-1.0, 0.0, 0.0};
    return d;
}

/// g = (1-z)/(1+z), dh = (z^2-1)/(2z^2) dz; the upper half is Re z > 0.
inline WeierstrassData horizontal_catenoid_data()
{
    WeierstrassData d;
    d.g = [](cplx z) { return (1.0 - z) / (1.0 + z); };
    d.dh = [](cplx z) { return (z * z - 1.0) / (2.0 * z * z); };
    d.dg = [](cplx z) { return -2.0 / ((1.0 + z) * (1.0 + z)); };
    d.inv_g_h_fn = [](cplx z) { return -(1.0 + z) * (1.0 + z) / (2.0 * z * z); };
    d.g_h_fn = [](cplx z) { return -(1.0 - z) * (1.0 - z) / (2.0 * z * z); };
    d.punctures = {cplx(0, 0)};
    d.gauss_zeros = {cplx(1, 0)};
    d.basepoint = 1.0;
    d.base_value = {0.0, 0.0, 1.0};
    return d;
}

inline std::vector<cplx> scherk_punctures(double alpha)
{
    const cplx e = std::polar(1.0, alpha);
    return {e, std::conj(e), -e, -std::conj(e)};
}

/// Scherk data with vertical ends: g = z, dh = 4 sin(2a) z dz / D,
/// D = z^4 - 2 cos(2a) z^2 + 1.
inline WeierstrassData scherk_vertical_data(double alpha)
{
    Family::scherk(alpha);
    const double s2 = std::sin(2 * alpha);
    const double c2 = std::cos(2 * alpha);
    auto D = [c2](cplx z) {
        const cplx z2 = z * z;
        return z2 * z2 - 2.0 * c2 * z2 + 1.0;
    };
    WeierstrassData d;
    d.g = [](cplx z) { return z; };
    d.dh = [=](cplx z) { return 4.0 * s2 * z / D(z); };
    d.dg = [](cplx) { return cplx(1, 0); };
    d.inv_g_h_fn = [=](cplx z) { return 4.0 * s2 / D(z); };
    d.punctures = scherk_punctures(alpha);
    d.gauss_zeros = {cplx(0, 0)};
    d.basepoint = 0.0;
    return d;
}

/// Rotation then reflection of the vertical data: g = (z-1)/(z+1),
/// dh = 2 sin(2a)(1 - z^2) dz / D; the upper half is Re z > 0.
inline WeierstrassData scherk_data(double alpha)
{
    const WeierstrassData rotated =
        rotate_data(scherk_vertical_data(alpha), {}, {cplx(-1, 0)});
    WeierstrassData d = reflect_data(rotated, {cplx(1, 0)});
    d.basepoint = 0.0;
    d.base_value = {0.0, 0.0, 0.0};
    return d;
}

// ---------------------------------------------------------------------------
// Family models
// ---------------------------------------------------------------------------

/// An arc of the unit circle in the chart s = g(zeta), i.e. a piece of the
/// boundary of the upper half of the surface, and the domain boundary
/// component it maps to.
struct BoundaryArc {
    int component = 0;
    double theta0 = 0.0, theta1 = 0.0;
};

struct FamilyModel {
    Family family;
    DomainModel domain;
    WeierstrassData surface;
    cplx phi_base{0, 0};
    CorrespondenceMaps maps;
    std::vector<BoundaryArc> surface_arcs;
};

namespace detail {

inline ComplexPath vertical_catenoid_path(cplx a, cplx b)
{
    const double R = std::max({std::abs(a), std::abs(b), 1.5});
    std::vector<cplx> pts{a, a * (R / std::abs(a))};
    const double ta = std::arg(a);
    const double dt = std::remainder(std::arg(b) - ta, 2 * pi);
    const int n = std::max(2, static_cast<int>(std::ceil(std::abs(dt) / 0.05)));
    for (int k = 1; k <= n; ++k)
        pts.push_back(std::polar(R, ta + dt * k / n));
    pts.push_back(b);
    return ComplexPath::polyline(std::move(pts));
}

// Lanes |y| = lane keep clear of the critical point on the real axis; the
// lanes are joined by a vertical segment at x = cross_x.
inline ComplexPath lane_path(cplx a, cplx b, double lane, double cross_x)
{
    const double la = a.imag() >= 0 ? lane : -lane;
    const double lb = b.imag() >= 0 ? lane : -lane;
    std::vector<cplx> pts{a, {a.real(), la}};
    if (la != lb) {
        pts.push_back({cross_x, la});
        pts.push_back({cross_x, lb});
    }
    pts.push_back({b.real(), lb});
    pts.push_back(b);
    return ComplexPath::polyline(std::move(pts));
}

inline DomainModel inverted_domain(const std::shared_ptr<const SurfaceSheet>& sheet)
{
    DomainModel m;
    // The chart coordinate s is the Gauss map, so 2 u_z = s and 2 u_zz = ds/dphi.
    m.u = [sheet](cplx w) {
        const SheetValue v = sheet->invert_phi(w);
        // first-order correction by du = Re(g dw) for the Newton residual
        return v.h.real() + (v.s * (w - v.phi)).real();
    };
    m.grad_u = [sheet](cplx w) {
        const cplx s = sheet->invert_phi(w).s;
        return Vec2{s.real(), -s.imag()};
    };
    m.hess_u = [sheet](cplx w) {
        const cplx q = 1.0 / sheet->coeff(sheet->invert_phi(w).s);
        return Hessian2{q.real(), -q.imag(), -q.real()};
    };
    return m;
}

inline void guard_domain(DomainModel& m)
{
    auto u = m.u;
    auto grad = m.grad_u;
    auto hess = m.hess_u;
    auto def = m.defining;
    const std::string name = m.name;
    auto check = [def, name](cplx w) {
        if (!(def(w) >= -1e-9))
            throw Error(ErrorKind::OutsideDomain, describe(w) + " is not in " + name);
    };
    m.u = [u, check](cplx w) {
        check(w);
        return u(w);
    };
    m.grad_u = [grad, check](cplx w) {
        check(w);
        return grad(w);
    };
    m.hess_u = [hess, check](cplx w) {
        check(w);
        return hess(w);
    };
}

} // namespace detail

/// Builds the domain, the surface data and the correspondence maps.
/// grid_n is the side of the seed grid used for inversions.
inline FamilyModel make_family(const Family& family, int grid_n = 64)
{
    family.validate();
    FamilyModel fm;
    fm.family = family;
    SheetSpec spec;
    spec.grid_n = grid_n;
    DomainModel dm;

    switch (family.kind) {
    case FamilyKind::VerticalCatenoid: {
        fm.surface = vertical_catenoid_data();
        fm.phi_base = -1.0;
        spec.chart_inv = [](cplx s) { return -1.0 / s; };
        spec.excluded_s = {cplx(0, 0)};
        fm.surface_arcs = {{0, -pi, pi}};

        dm.defining = [](cplx w) { return std::abs(w) - 1.0; };
        dm.u = [](cplx w) { return std::log(std::abs(w)); };
        dm.grad_u = [](cplx w) {
            const double r2 = std::norm(w);
            return Vec2{w.real() / r2, w.imag() / r2};
        };
        dm.hess_u = [](cplx w) {
            const double r2 = std::norm(w);
            const double x = w.real();
            const double y = w.imag();
            const double xx = (y * y - x * x) / (r2 * r2);
            return Hessian2{xx, -2 * x * y / (r2 * r2), -xx};
        };
        dm.z0 = 1.0;
        dm.window = {-4, 4, -4, 4};
        dm.boundary_range = {0.0, 2 * pi};
        dm.plan_path = detail::vertical_catenoid_path;
        dm.analytic = true;
        break;
    }
    case FamilyKind::HorizontalCatenoid: {
        fm.surface = horizontal_catenoid_data();
        fm.phi_base = 0.0;
        spec.chart_inv = [](cplx s) { return (1.0 - s) / (1.0 + s); };
        spec.excluded_s = {cplx(1, 0), cplx(-1, 0)};
        fm.surface_arcs = {{0, -pi, 0.0}, {1, 0.0, pi}};

        dm.defining = [](cplx w) { return pi / 2 + std::cosh(w.real()) - std::abs(w.imag()); };
        dm.z0 = cplx(0, -(pi / 2 + 1));
        dm.window = {-3, 3, -6, 6};
        dm.boundary_range = {-3.0, 3.0};
        dm.plan_path = [](cplx a, cplx b) { return detail::lane_path(a, b, 0.5, 1.0); };
        dm.critical_points = {cplx(0, 0)};
        break;
    }
    case FamilyKind::Scherk: {
        const double a = family.alpha;
        const double T = scherk_period(a);
        fm.surface = scherk_data(a);
        fm.phi_base = 0.0;
        spec.chart_inv = [](cplx s) { return (1.0 + s) / (1.0 - s); };
        for (const cplx& p : scherk_punctures(a))
            spec.excluded_s.push_back(fm.surface.g(p));
        // zeta = infinity sits at s = 1; the pulled-back form is regular there
        const double s2a = std::sin(2 * a);
        const double c2a = std::cos(2 * a);
        spec.chart_coeff = [s2a, c2a](cplx s) {
            const cplx p = (1.0 + s) * (1.0 + s);
            const cplx m = (1.0 - s) * (1.0 - s);
            return -16.0 * s2a / (p * p - 2.0 * c2a * p * m + m * m);
        };
        spec.period_center = fm.surface.g(std::polar(1.0, a));
        fm.surface_arcs = {{0, 0.0, 2 * pi}};

        dm.defining = [a](cplx w) { return scherk_defining(a, w); };
        dm.z0 = 0.0;
        dm.window = {2 * a - T / 2, 2 * a + T / 2, -3, 3};
        dm.boundary_range = {-kDefaultBoundaryRange, kDefaultBoundaryRange};
        dm.periodic = true;
        dm.period = T;
        const double lane = scherk_half_height(a) + 0.5;
        const double gap = T - 4 * a;
        dm.plan_path = [lane, gap, T](cplx p, cplx q) {
            const double k = std::round(0.5 * (p.real() + q.real()) / T);
            return detail::lane_path(p, q, lane, k * T - 0.25 * gap);
        };
        for (int k = -4; k <= 4; ++k)
            dm.critical_points.push_back(cplx(2 * a - T / 2 + k * T, 0));
        break;
    }
    }

    spec.data = fm.surface;
    spec.phi_base = fm.phi_base;
    auto sheet = std::make_shared<const SurfaceSheet>(std::move(spec));

    if (family.kind != FamilyKind::VerticalCatenoid) {
        DomainModel inv = detail::inverted_domain(sheet);
        dm.u = inv.u;
        dm.grad_u = inv.grad_u;
        dm.hess_u = inv.hess_u;
    }
    dm.name = family.name();
    dm.n_components = family.n_components();
    dm.boundary = [family](int c, double t) { return boundary_param(family, c, t); };
    dm.boundary_velocity = [family](int c, double t) { return boundary_velocity(family, c, t); };
    detail::guard_domain(dm);

    fm.domain = std::move(dm);
    fm.maps.sheet = sheet;
    fm.maps.z0 = fm.domain.z0;
    fm.maps.p0 = fm.surface.basepoint;
    return fm;
}

} // namespace bigraph
