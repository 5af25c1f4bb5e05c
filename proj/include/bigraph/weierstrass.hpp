#pragma once

// Weierstrass data (g, dh) on a punctured chart, the immersion it defines,
// the induced metric and the reflection / rotation transforms.

#include <array>
#include <cmath>
#include <functional>
#include <memory>
#include <utility>
#include <vector>

#include "numerics.hpp"

namespace bigraph {

using HoloFn = std::function<cplx(cplx)>;

struct Point3 {
    double x1 = 0, x2 = 0, x3 = 0;
};

inline constexpr double kPoleClearance = 1e-6;

/// g, dh = h(z) dz and bookkeeping. The optional fused products g^{-1}h and
/// g h stay finite where g and h share zeros or poles; when absent they are
/// formed from g and h.
struct WeierstrassData {
    HoloFn g;
    HoloFn dh;
    HoloFn dg;          // g'(z); optional
    HoloFn inv_g_h_fn;  // g^{-1} h; optional
    HoloFn g_h_fn;      // g h; optional
    std::vector<cplx> punctures;
    std::vector<cplx> gauss_zeros;
    cplx basepoint{0, 0};
    Point3 base_value{};

    cplx inv_g_h(cplx z) const { return inv_g_h_fn ? inv_g_h_fn(z) : dh(z) / g(z); }
    cplx g_h(cplx z) const { return g_h_fn ? g_h_fn(z) : g(z) * dh(z); }
    cplx g_prime(cplx z) const
    {
        if (!dg)
            throw Error(ErrorKind::InvalidParameter, "Weierstrass data carries no g'");
        return dg(z);
    }

    /// Points the integrands of the immersion cannot pass through.
    std::vector<cplx> singular_points() const
    {
        std::vector<cplx> out = punctures;
        if (!inv_g_h_fn)
            out.insert(out.end(), gauss_zeros.begin(), gauss_zeros.end());
        return out;
    }

    double distance_to_singular(cplx z) const
    {
        double d = std::numeric_limits<double>::infinity();
        for (const cplx& p : singular_points())
            d = std::min(d, std::abs(z - p));
        return d;
    }
};

/// Coefficients of (phi_1, phi_2, phi_3) dz at z.
inline std::array<cplx, 3> immersion_coefficients(const WeierstrassData& data, cplx z)
{
    const cplx a = data.inv_g_h(z);
    const cplx b = data.g_h(z);
    return {0.5 * (a - b), cplx(0, 0.5) * (a + b), data.dh(z)};
}

inline void require_clear_path(const WeierstrassData& data, const ComplexPath& path)
{
    for (const cplx& p : data.singular_points()) {
        if (path.distance_to(p) < kPoleClearance)
            throw Error(ErrorKind::PoleOnPath, "path passes within 1e-6 of " + describe(p));
    }
}

inline void require_starts_at(const ComplexPath& path, cplx base)
{
    if (std::abs(path.start() - base) > 1e-12 * (1.0 + std::abs(base)))
        throw Error(ErrorKind::InvalidPath, "path must start at the basepoint " + describe(base));
}

/// X(z) = X(z0) + Re int [1/2 (g^-1 - g), i/2 (g^-1 + g), 1] dh along path.
inline Point3 evaluate_immersion(const WeierstrassData& data, const ComplexPath& path,
                                 const QuadratureConfig& cfg = {})
{
    require_starts_at(path, data.basepoint);
    require_clear_path(data, path);
    auto form = [&](cplx z, cplx v) {
        auto c = immersion_coefficients(data, z);
        return CVec<3>{c[0] * v, c[1] * v, c[2] * v};
    };
    const CVec<3> r = integrate_form<3>(form, path, cfg);
    return {data.base_value.x1 + r[0].real(), data.base_value.x2 + r[1].real(),
            data.base_value.x3 + r[2].real()};
}

/// Conformal factor of the induced metric: ds = lambda |dz|.
inline double metric_factor(const WeierstrassData& data, cplx z)
{
    const double ag = std::abs(data.g(z));
    if (ag == 0.0 || !std::isfinite(ag))
        throw Error(ErrorKind::ZeroGaussMap, "g vanishes or is singular at " + describe(z));
    return 0.5 * (ag + 1.0 / ag) * std::abs(data.dh(z));
}

/// Data of the surface reflected through a vertical plane: g -> -1/g.
/// new_gauss_zeros are the poles of the old g.
inline WeierstrassData reflect_data(const WeierstrassData& data,
                                    std::vector<cplx> new_gauss_zeros = {})
{
    WeierstrassData out;
    auto src = std::make_shared<const WeierstrassData>(data);
    out.g = [src](cplx z) { return -1.0 / src->g(z); };
    out.dh = src->dh;
    if (src->dg)
        out.dg = [src](cplx z) {
            const cplx g = src->g(z);
            return src->dg(z) / (g * g);
        };
    out.inv_g_h_fn = [src](cplx z) { return -src->g_h(z); };
    out.g_h_fn = [src](cplx z) { return -src->inv_g_h(z); };
    out.punctures = data.punctures;
    out.punctures.insert(out.punctures.end(), data.gauss_zeros.begin(), data.gauss_zeros.end());
    out.gauss_zeros = std::move(new_gauss_zeros);
    out.basepoint = data.basepoint;
    out.base_value = data.base_value;
    return out;
}

/// Data of the surface rotated a quarter turn about a horizontal axis:
/// g -> (1+g)/(1-g), dh -> 1/2 (1/g - g) dh. Points where the old g equals 1
/// become poles of the new g; the caller lists those that are true punctures.
inline WeierstrassData rotate_data(const WeierstrassData& data, std::vector<cplx> new_punctures,
                                   std::vector<cplx> new_gauss_zeros)
{
    WeierstrassData out;
    auto src = std::make_shared<const WeierstrassData>(data);
    out.g = [src](cplx z) {
        const cplx g = src->g(z);
        return (1.0 + g) / (1.0 - g);
    };
    out.dh = [src](cplx z) { return 0.5 * (src->inv_g_h(z) - src->g_h(z)); };
    if (src->dg)
        out.dg = [src](cplx z) {
            const cplx w = 1.0 - src->g(z);
            return 2.0 * src->dg(z) / (w * w);
        };
    // h'/g' = 1/2 (1-g)^2 h/g and g' h' = 1/2 (1+g)^2 h/g.
    out.inv_g_h_fn = [src](cplx z) {
        const cplx w = 1.0 - src->g(z);
        return 0.5 * w * w * src->inv_g_h(z);
    };
    out.g_h_fn = [src](cplx z) {
        const cplx w = 1.0 + src->g(z);
        return 0.5 * w * w * src->inv_g_h(z);
    };
    out.punctures = data.punctures;
    out.punctures.insert(out.punctures.end(), new_punctures.begin(), new_punctures.end());
    out.gauss_zeros = std::move(new_gauss_zeros);
    out.basepoint = data.basepoint;
    out.base_value = data.base_value;
    return out;
}

} // namespace bigraph
