#pragma once

// Continuation of (phi, psi, int dh) over the upper half of a bigraph's
// conformal surface, parametrized by s = g(zeta) in the unit disk. Values are
// stored on a grid of seeds; inversions run Newton from the nearest seed.

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "numerics.hpp"
#include "weierstrass.hpp"

namespace bigraph {

struct SheetValue {
    cplx s, zeta;
    cplx phi;  // int g^-1 dh
    cplx psi;  // X1 + i X2
    cplx h;    // int dh; Re h = X3

    Point3 point() const { return {psi.real(), psi.imag(), h.real()}; }
};

struct SheetSpec {
    WeierstrassData data;  // needs g, dg and a basepoint; s = g(zeta)
    cplx phi_base{0, 0};   // phi at the basepoint
    std::function<cplx(cplx)> chart_inv;
    std::vector<cplx> excluded_s;  // images of punctures and of zeta = infinity
    double exclusion_radius = 0.05;
    int grid_n = 64;
    double max_radius = 0.999;
    std::optional<cplx> period_center;  // s-image of the puncture generating the periods
    /// g^-1 dh / ds as a function of s; by default pulled back through chart_inv.
    std::function<cplx(cplx)> chart_coeff;
};

class SurfaceSheet {
public:
    explicit SurfaceSheet(SheetSpec spec) : spec_(std::move(spec))
    {
        if (spec_.grid_n < 8)
            throw Error(ErrorKind::InvalidParameter, "sheet grid needs at least 8 nodes per side");
        quad_.rel_tol = 1e-13;
        quad_.abs_tol = 1e-15;
        build_periods();
        build_seeds();
    }

    const SheetSpec& spec() const { return spec_; }
    const WeierstrassData& data() const { return spec_.data; }
    const std::vector<SheetValue>& seeds() const { return seeds_; }

    bool periodic() const { return spec_.period_center.has_value(); }
    cplx period_phi() const { return period_phi_; }
    cplx period_psi() const { return period_psi_; }
    cplx period_h() const { return period_h_; }

    cplx chart(cplx zeta) const { return spec_.data.g(zeta); }

    /// a(s) with g^-1 dh = a ds. Since s = g, dh = s a ds and g dh = s^2 a ds.
    cplx coeff(cplx s) const
    {
        if (spec_.chart_coeff)
            return spec_.chart_coeff(s);
        const cplx zeta = zeta_of(s);
        return spec_.data.inv_g_h(zeta) / spec_.data.g_prime(zeta);
    }
    cplx zeta_of(cplx s) const { return spec_.chart_inv(s); }

    /// (d phi, d psi, dh) along chart velocity v.
    CVec<3> forms(cplx s, cplx v) const
    {
        const cplx a = coeff(s) * v;
        return {a, 0.5 * std::conj(a) - 0.5 * s * s * a, s * a};
    }

    double distance_to_excluded(cplx s) const
    {
        double d = std::numeric_limits<double>::infinity();
        for (const cplx& e : spec_.excluded_s)
            d = std::min(d, std::abs(s - e));
        return d;
    }

    /// Continues `from` along the straight chart segment to s.
    SheetValue advance(const SheetValue& from, cplx s) const
    {
        if (s == from.s)
            return from;
        const ComplexPath seg = ComplexPath::segment(from.s, s);
        for (const cplx& e : spec_.excluded_s)
            if (seg.distance_to(e) < kPoleClearance)
                throw Error(ErrorKind::PoleOnPath, "chart segment meets a puncture");
        const CVec<3> r = integrate_form<3>([this](cplx p, cplx v) { return forms(p, v); }, seg, quad_);
        return {s, zeta_of(s), from.phi + r[0], from.psi + r[1], from.h + r[2]};
    }

    SheetValue at_s(cplx s) const
    {
        if (distance_to_excluded(s) < kPoleClearance)
            throw Error(ErrorKind::PoleOnPath, "chart point " + describe(s) + " is a puncture");
        const SheetValue* best = nullptr;
        double best_d = std::numeric_limits<double>::infinity();
        for (const SheetValue& sv : seeds_) {
            const double d = std::abs(sv.s - s);
            if (d < best_d) {
                best_d = d;
                best = &sv;
            }
        }
        return advance(*best, s);
    }

    SheetValue at(cplx zeta) const { return at_s(chart(zeta)); }

    /// Values along a chain of chart points, continued from the first one.
    std::vector<SheetValue> trace_s(std::span<const cplx> s_points) const
    {
        std::vector<SheetValue> out;
        out.reserve(s_points.size());
        for (const cplx& s : s_points)
            out.push_back(out.empty() ? at_s(s) : advance(out.back(), s));
        return out;
    }

    SheetValue invert_phi(cplx w) const
    {
        const double tol = 1e-13 * (1.0 + std::abs(w));
        return invert(
            w, [](const SheetValue& v) { return v.phi; }, period_phi_,
            [this](const SheetValue& v) { return holomorphic_jacobian(coeff(v.s)); },
            tol);
    }

    SheetValue invert_psi(cplx z) const
    {
        const double tol = 1e-12 * (1.0 + std::abs(z));
        return invert(
            z, [](const SheetValue& v) { return v.psi; }, period_psi_,
            [this](const SheetValue& v) {
                const cplx a = coeff(v.s);
                return wirtinger_jacobian(-0.5 * v.s * v.s * a, 0.5 * std::conj(a));
            },
            tol);
    }

    /// Shifts a value by k deck periods.
    SheetValue shifted(SheetValue v, double k) const
    {
        v.phi += k * period_phi_;
        v.psi += k * period_psi_;
        v.h += k * period_h_;
        return v;
    }

private:
    void build_periods()
    {
        if (!spec_.period_center)
            return;
        const cplx c = *spec_.period_center;
        double r = 0.5 * spec_.exclusion_radius;
        for (const cplx& e : spec_.excluded_s)
            if (e != c)
                r = std::min(r, 0.5 * std::abs(e - c));
        const ComplexPath loop = ComplexPath::circle(c, r);
        const CVec<3> p = integrate_form<3>([this](cplx p, cplx v) { return forms(p, v); }, loop, quad_);
        period_phi_ = p[0];
        period_psi_ = p[1];
        period_h_ = p[2];
    }

    void build_seeds()
    {
        const int n = spec_.grid_n;
        auto node_s = [n](int i, int j) {
            return cplx(-1.0 + (2.0 * i + 1.0) / n, -1.0 + (2.0 * j + 1.0) / n);
        };
        auto valid = [&](cplx s) {
            return std::abs(s) <= spec_.max_radius &&
                   distance_to_excluded(s) >= spec_.exclusion_radius;
        };

        const WeierstrassData& d = spec_.data;
        const cplx s0 = chart(d.basepoint);
        int start = -1;
        double best = std::numeric_limits<double>::infinity();
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                const cplx s = node_s(i, j);
                if (valid(s) && std::abs(s - s0) < best) {
                    best = std::abs(s - s0);
                    start = i * n + j;
                }
            }
        if (start < 0)
            throw Error(ErrorKind::InvalidParameter, "sheet grid has no valid node");

        const SheetValue base{s0, d.basepoint, spec_.phi_base,
                              cplx(d.base_value.x1, d.base_value.x2), cplx(d.base_value.x3, 0)};
        std::vector<std::optional<SheetValue>> value(static_cast<std::size_t>(n * n));
        value[start] = advance(base, node_s(start / n, start % n));
        std::deque<int> queue{start};
        while (!queue.empty()) {
            const int cur = queue.front();
            queue.pop_front();
            const int ci = cur / n;
            const int cj = cur % n;
            const int di[4] = {1, -1, 0, 0};
            const int dj[4] = {0, 0, 1, -1};
            for (int k = 0; k < 4; ++k) {
                const int ni = ci + di[k];
                const int nj = cj + dj[k];
                if (ni < 0 || nj < 0 || ni >= n || nj >= n)
                    continue;
                const int idx = ni * n + nj;
                if (value[idx] || !valid(node_s(ni, nj)))
                    continue;
                value[idx] = advance(*value[cur], node_s(ni, nj));
                queue.push_back(idx);
            }
        }
        for (const auto& v : value)
            if (v)
                seeds_.push_back(*v);
    }

    template <class Sel, class Jac>
    SheetValue invert(cplx target, Sel sel, cplx period, Jac jac, double tol) const
    {
        struct Candidate {
            double dist;
            double shift;
            std::size_t index;
        };
        std::vector<Candidate> cands;
        cands.reserve(seeds_.size());
        const double p2 = std::norm(period);
        for (std::size_t i = 0; i < seeds_.size(); ++i) {
            const cplx diff = target - sel(seeds_[i]);
            double k = 0.0;
            if (p2 > 0)
                k = std::round((diff * std::conj(period)).real() / p2);
            cands.push_back({std::abs(diff - k * period), k, i});
        }
        const std::size_t tries = std::min<std::size_t>(8, cands.size());
        std::partial_sort(cands.begin(), cands.begin() + static_cast<std::ptrdiff_t>(tries),
                          cands.end(), [](const Candidate& a, const Candidate& b) {
                              return a.dist != b.dist ? a.dist < b.dist : a.index < b.index;
                          });

        NewtonOptions opts;
        opts.max_step = [this](cplx s) { return std::min(0.25, 0.5 * distance_to_excluded(s)); };
        std::string last_error = "no seeds";
        for (std::size_t c = 0; c < tries; ++c) {
            const Candidate& cand = cands[c];
            const cplx local_target = target - cand.shift * period;
            SheetValue cur = seeds_[cand.index];
            try {
                auto map = [&](cplx s) {
                    cur = advance(cur, s);
                    return sel(cur);
                };
                auto jacobian = [&](cplx s) {
                    if (s != cur.s)
                        cur = advance(cur, s);
                    return jac(cur);
                };
                const cplx s = newton_invert(map, jacobian, local_target, cur.s, tol, 60, opts);
                if (s != cur.s)
                    cur = advance(cur, s);
                if (std::abs(cur.s) > 1.0 + 1e-6) {
                    last_error = "converged outside the upper sheet";
                    continue;
                }
                return shifted(cur, cand.shift);
            }
            catch (const Error& e) {
                last_error = e.what();
            }
        }
        throw Error(ErrorKind::InversionFailed, "no preimage of " + describe(target) + " (" +
                                                    last_error + ")");
    }

    SheetSpec spec_;
    QuadratureConfig quad_;
    std::vector<SheetValue> seeds_;
    cplx period_phi_{0, 0}, period_psi_{0, 0}, period_h_{0, 0};
};

} // namespace bigraph
