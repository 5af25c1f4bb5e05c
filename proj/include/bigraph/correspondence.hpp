#pragma once

// The maps between an exceptional domain and its minimal bigraph:
// psi = X1 + i X2 on the domain side, phi = int g^-1 dh on the surface side,
// and F = phi o psi^-1.

#include <cmath>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "numerics.hpp"
#include "sheet.hpp"
#include "weierstrass.hpp"

namespace bigraph {

struct Vec2 {
    double x = 0, y = 0;
    double norm() const { return std::hypot(x, y); }
};

struct Hessian2 {
    double xx = 0, xy = 0, yy = 0;
};

struct Window {
    double x0 = 0, x1 = 0, y0 = 0, y1 = 0;
};

/// An exceptional domain. Omega = {defining > 0}, the boundary is its zero
/// set. For periodic domains `boundary` lists the components of one period
/// cell and `period` is the real translation.
struct DomainModel {
    std::string name;
    std::function<double(cplx)> defining;
    std::function<double(cplx)> u;
    std::function<Vec2(cplx)> grad_u;
    std::function<Hessian2(cplx)> hess_u;
    std::function<cplx(int, double)> boundary;
    std::function<cplx(int, double)> boundary_velocity;
    int n_components = 1;
    bool periodic = false;
    double period = 0.0;
    cplx z0{0, 0};  // psi(z0) = 0; lies on the boundary
    Window window;  // region sampled by the verification grid
    std::pair<double, double> boundary_range{-1.0, 1.0};
    std::function<ComplexPath(cplx, cplx)> plan_path;
    std::vector<cplx> critical_points;
    bool analytic = false;

    bool contains(cplx w) const { return defining(w) > 0.0; }
    bool in_closure(cplx w, double tol = 1e-9) const { return defining(w) >= -tol; }

    /// u_z = 1/2 (u_x - i u_y)
    cplx u_z(cplx w) const
    {
        const Vec2 d = grad_u(w);
        return {0.5 * d.x, -0.5 * d.y};
    }
};

inline void require_in_closure(const DomainModel& model, cplx w)
{
    if (!model.in_closure(w))
        throw Error(ErrorKind::OutsideDomain, describe(w) + " is not in " + model.name);
}

// ---------------------------------------------------------------------------
// Domain side
// ---------------------------------------------------------------------------

/// Coefficients (c_dz, c_dzbar) of d psi = c_dz dz + c_dzbar dzbar.
inline std::pair<cplx, cplx> psi_differential(Vec2 grad)
{
    const cplx uz{0.5 * grad.x, -0.5 * grad.y};
    return {-2.0 * uz * uz, cplx(0.5, 0.0)};
}

inline std::pair<cplx, cplx> psi_differential(const DomainModel& model, cplx w)
{
    require_in_closure(model, w);
    return psi_differential(model.grad_u(w));
}

/// int d psi along path.
inline cplx map_psi(const DomainModel& model, const ComplexPath& path,
                    const QuadratureConfig& cfg = {})
{
    auto form = [&](cplx z, cplx v) {
        if (!model.in_closure(z))
            throw Error(ErrorKind::PathLeavesDomain, "path leaves the domain at " + describe(z));
        const cplx uz = model.u_z(z);
        return CVec<1>{-2.0 * uz * uz * v + 0.5 * std::conj(v)};
    };
    return integrate_form<1>(form, path, cfg)[0];
}

/// psi(w), integrated from the model basepoint along its planned path.
inline cplx psi_at(const DomainModel& model, cplx w, const QuadratureConfig& cfg = {})
{
    require_in_closure(model, w);
    if (w == model.z0)
        return {0.0, 0.0};
    return map_psi(model, model.plan_path(model.z0, w), cfg);
}

inline double det_dpsi(Vec2 grad)
{
    const double n2 = grad.x * grad.x + grad.y * grad.y;
    return 0.25 * (n2 * n2 - 1.0);
}

inline double det_dpsi(const DomainModel& model, cplx w)
{
    require_in_closure(model, w);
    return det_dpsi(model.grad_u(w));
}

/// Weierstrass data of the surface built from a domain: g = 2 u_z,
/// dh = 2 u_z dz, based at the domain basepoint.
inline WeierstrassData domain_weierstrass_data(const DomainModel& model)
{
    auto m = std::make_shared<const DomainModel>(model);
    WeierstrassData d;
    d.g = [m](cplx w) { return 2.0 * m->u_z(w); };
    d.dh = d.g;
    if (model.hess_u)
        d.dg = [m](cplx w) {
            const Hessian2 h = m->hess_u(w);
            return cplx(h.xx, -h.xy);
        };
    d.gauss_zeros = model.critical_points;
    d.basepoint = model.z0;
    return d;
}

// ---------------------------------------------------------------------------
// Surface side
// ---------------------------------------------------------------------------

/// base + int g^-1 dh along path.
inline cplx map_phi(const WeierstrassData& data, const ComplexPath& path, cplx base = {0, 0},
                    const QuadratureConfig& cfg = {})
{
    require_clear_path(data, path);
    return base + integrate_path([&](cplx z) { return data.inv_g_h(z); }, path, cfg);
}

/// Period of g^-1 dh along a closed loop.
inline cplx loop_period(const WeierstrassData& data, const ComplexPath& loop,
                        const QuadratureConfig& cfg = {})
{
    if (!loop.is_closed(1e-12))
        throw Error(ErrorKind::InvalidPath, "loop_period needs a closed path");
    require_clear_path(data, loop);
    return integrate_path([&](cplx z) { return data.inv_g_h(z); }, loop, cfg);
}

/// Gradient of u at phi(z): 2 u_z = g.
inline Vec2 grad_from_gauss(const WeierstrassData& data, cplx z)
{
    const cplx g = data.g(z);
    return {g.real(), -g.imag()};
}

/// Hessian of u at phi(z): 2 u_zz = g' / phi'.
inline Hessian2 hessian_from_gauss(const WeierstrassData& data, cplx z)
{
    const cplx q = data.g_prime(z) / data.inv_g_h(z);
    return {q.real(), -q.imag(), -q.real()};
}

struct CorrespondenceMaps {
    std::shared_ptr<const SurfaceSheet> sheet;
    cplx z0{0, 0};  // domain-side basepoint
    cplx p0{0, 0};  // surface-side basepoint

    cplx phi(cplx zeta) const { return sheet->at(zeta).phi; }
    cplx psi(cplx zeta) const { return sheet->at(zeta).psi; }
    cplx psi_inverse(cplx z) const { return sheet->invert_psi(z).zeta; }
};

/// F = phi o psi^-1.
inline cplx map_F(const CorrespondenceMaps& maps, cplx z)
{
    return maps.sheet->invert_psi(z).phi;
}

} // namespace bigraph
