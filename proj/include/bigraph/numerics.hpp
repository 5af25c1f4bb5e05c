#pragma once

// Complex path integration, Newton inversion of planar maps, stencils and
// bracketed root finding.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace bigraph {

using cplx = std::complex<double>;

enum class ErrorKind {
    NonFiniteSample,
    ToleranceNotMet,
    NoConvergence,
    SingularJacobian,
    StencilOutsideDomain,
    NoBracket,
    PoleOnPath,
    ZeroGaussMap,
    OutsideDomain,
    PathLeavesDomain,
    InversionFailed,
    InvalidParameter,
    BadComponent,
    EmptyGrid,
    NotNormalized,
    MeshDegenerate,
    InvalidPath,
    CriticalPoint,
};

inline const char* to_string(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::NonFiniteSample: return "NonFiniteSample";
    case ErrorKind::ToleranceNotMet: return "ToleranceNotMet";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::SingularJacobian: return "SingularJacobian";
    case ErrorKind::StencilOutsideDomain: return "StencilOutsideDomain";
    case ErrorKind::NoBracket: return "NoBracket";
    case ErrorKind::PoleOnPath: return "PoleOnPath";
    case ErrorKind::ZeroGaussMap: return "ZeroGaussMap";
    case ErrorKind::OutsideDomain: return "OutsideDomain";
    case ErrorKind::PathLeavesDomain: return "PathLeavesDomain";
    case ErrorKind::InversionFailed: return "InversionFailed";
    case ErrorKind::InvalidParameter: return "InvalidParameter";
    case ErrorKind::BadComponent: return "BadComponent";
    case ErrorKind::EmptyGrid: return "EmptyGrid";
    case ErrorKind::NotNormalized: return "NotNormalized";
    case ErrorKind::MeshDegenerate: return "MeshDegenerate";
    case ErrorKind::InvalidPath: return "InvalidPath";
    case ErrorKind::CriticalPoint: return "CriticalPoint";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind)
    {
    }

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

inline bool is_finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

inline std::string describe(cplx z)
{
    std::ostringstream os;
    os.precision(17);
    os << '(' << z.real() << (z.imag() < 0 ? "" : "+") << z.imag() << "i)";
    return os.str();
}

// ---------------------------------------------------------------------------
// ComplexPath
// ---------------------------------------------------------------------------

/// A piecewise-smooth curve z(t), t in [0,1], along which differentials are
/// integrated. Polylines are split into pieces so the quadrature never
/// straddles a corner.
class ComplexPath {
public:
    struct Segment {
        cplx a, b;
    };
    struct Arc {
        cplx center;
        double radius;
        double theta0, theta1;
    };
    struct Polyline {
        std::vector<cplx> points;
    };
    struct Curve {
        std::function<cplx(double)> position;
        std::function<cplx(double)> velocity;
        double t0, t1;
    };

    static ComplexPath segment(cplx a, cplx b)
    {
        if (!is_finite(a) || !is_finite(b) || a == b)
            throw Error(ErrorKind::InvalidPath, "segment endpoints must be finite and distinct");
        return ComplexPath(Segment{a, b});
    }

    static ComplexPath arc(cplx center, double radius, double theta0, double theta1)
    {
        if (!(radius > 0) || !std::isfinite(radius) || !is_finite(center))
            throw Error(ErrorKind::InvalidPath, "arc radius must be positive and finite");
        if (!std::isfinite(theta0) || !std::isfinite(theta1) || theta0 == theta1)
            throw Error(ErrorKind::InvalidPath, "arc angles must be finite and distinct");
        return ComplexPath(Arc{center, radius, theta0, theta1});
    }

    static ComplexPath circle(cplx center, double radius)
    {
        return arc(center, radius, 0.0, 2.0 * std::numbers::pi);
    }

    /// Consecutive duplicate points are dropped.
    static ComplexPath polyline(std::vector<cplx> points)
    {
        std::vector<cplx> pts;
        pts.reserve(points.size());
        for (const cplx& p : points) {
            if (!is_finite(p))
                throw Error(ErrorKind::InvalidPath, "polyline point is not finite");
            if (pts.empty() || pts.back() != p)
                pts.push_back(p);
        }
        if (pts.size() < 2)
            throw Error(ErrorKind::InvalidPath, "polyline needs at least two distinct points");
        return ComplexPath(Polyline{std::move(pts)});
    }

    /// General parametrized curve on [t0, t1]; velocity is d(position)/dt.
    static ComplexPath curve(std::function<cplx(double)> position,
                             std::function<cplx(double)> velocity, double t0, double t1)
    {
        if (!position || !velocity || !(t0 < t1) || !std::isfinite(t0) || !std::isfinite(t1))
            throw Error(ErrorKind::InvalidPath, "curve needs callables and t0 < t1");
        return ComplexPath(Curve{std::move(position), std::move(velocity), t0, t1});
    }

    std::size_t pieces() const
    {
        if (const auto* p = std::get_if<Polyline>(&kind_))
            return p->points.size() - 1;
        return 1;
    }

    /// Position and velocity on piece k at local parameter tau in [0,1].
    std::pair<cplx, cplx> piece_eval(std::size_t k, double tau) const
    {
        return std::visit(
            [&](const auto& c) -> std::pair<cplx, cplx> {
                using T = std::decay_t<decltype(c)>;
                if constexpr (std::is_same_v<T, Segment>) {
                    return {c.a + tau * (c.b - c.a), c.b - c.a};
                }
                else if constexpr (std::is_same_v<T, Arc>) {
                    const double span = c.theta1 - c.theta0;
                    const cplx e = std::polar(1.0, c.theta0 + tau * span);
                    return {c.center + c.radius * e, cplx(0.0, c.radius * span) * e};
                }
                else if constexpr (std::is_same_v<T, Polyline>) {
                    const cplx a = c.points[k];
                    const cplx b = c.points[k + 1];
                    return {a + tau * (b - a), b - a};
                }
                else {
                    const double span = c.t1 - c.t0;
                    const double t = c.t0 + tau * span;
                    return {c.position(t), c.velocity(t) * span};
                }
            },
            kind_);
    }

    cplx position(double t) const
    {
        auto [k, tau] = locate(t);
        return piece_eval(k, tau).first;
    }

    /// d z / d t for the global parameter t in [0,1].
    cplx velocity(double t) const
    {
        auto [k, tau] = locate(t);
        return piece_eval(k, tau).second * static_cast<double>(pieces());
    }

    cplx start() const { return position(0.0); }
    cplx end() const { return position(1.0); }

    bool is_closed(double tol = 1e-12) const
    {
        const cplx a = start();
        const cplx b = end();
        return std::abs(a - b) <= tol * (1.0 + std::abs(a));
    }

    ComplexPath reversed() const
    {
        return std::visit(
            [](const auto& c) -> ComplexPath {
                using T = std::decay_t<decltype(c)>;
                if constexpr (std::is_same_v<T, Segment>) {
                    return ComplexPath(Segment{c.b, c.a});
                }
                else if constexpr (std::is_same_v<T, Arc>) {
                    return ComplexPath(Arc{c.center, c.radius, c.theta1, c.theta0});
                }
                else if constexpr (std::is_same_v<T, Polyline>) {
                    return ComplexPath(Polyline{{c.points.rbegin(), c.points.rend()}});
                }
                else {
                    auto pos = c.position;
                    auto vel = c.velocity;
                    const double s = c.t0 + c.t1;
                    return ComplexPath(Curve{[pos, s](double t) { return pos(s - t); },
                                             [vel, s](double t) { return -vel(s - t); }, c.t0,
                                             c.t1});
                }
            },
            kind_);
    }

    /// Euclidean distance from p to the path (sampled for general curves).
    double distance_to(cplx p) const
    {
        auto seg_dist = [](cplx a, cplx b, cplx q) {
            const cplx d = b - a;
            const double len2 = std::norm(d);
            double s = len2 > 0 ? ((q - a) * std::conj(d)).real() / len2 : 0.0;
            s = std::clamp(s, 0.0, 1.0);
            return std::abs(q - (a + s * d));
        };
        return std::visit(
            [&](const auto& c) -> double {
                using T = std::decay_t<decltype(c)>;
                if constexpr (std::is_same_v<T, Segment>) {
                    return seg_dist(c.a, c.b, p);
                }
                else if constexpr (std::is_same_v<T, Arc>) {
                    const cplx d = p - c.center;
                    const double lo = std::min(c.theta0, c.theta1);
                    const double hi = std::max(c.theta0, c.theta1);
                    double best = std::min(std::abs(p - (c.center + std::polar(c.radius, lo))),
                                           std::abs(p - (c.center + std::polar(c.radius, hi))));
                    if (std::abs(d) > 0) {
                        const double two_pi = 2.0 * std::numbers::pi;
                        double ang = std::arg(d);
                        // bring ang into [lo, lo + 2pi)
                        ang = lo + std::fmod(std::fmod(ang - lo, two_pi) + two_pi, two_pi);
                        if (ang <= hi || hi - lo >= two_pi)
                            best = std::min(best, std::abs(std::abs(d) - c.radius));
                    }
                    else {
                        best = c.radius;
                    }
                    return best;
                }
                else if constexpr (std::is_same_v<T, Polyline>) {
                    double best = std::numeric_limits<double>::infinity();
                    for (std::size_t i = 0; i + 1 < c.points.size(); ++i)
                        best = std::min(best, seg_dist(c.points[i], c.points[i + 1], p));
                    return best;
                }
                else {
                    constexpr int n = 512;
                    double best = std::numeric_limits<double>::infinity();
                    cplx prev = c.position(c.t0);
                    for (int i = 1; i <= n; ++i) {
                        const cplx cur = c.position(c.t0 + (c.t1 - c.t0) * i / n);
                        best = std::min(best, seg_dist(prev, cur, p));
                        prev = cur;
                    }
                    return best;
                }
            },
            kind_);
    }

private:
    using Kind = std::variant<Segment, Arc, Polyline, Curve>;

    explicit ComplexPath(Kind kind) : kind_(std::move(kind)) {}

    std::pair<std::size_t, double> locate(double t) const
    {
        t = std::clamp(t, 0.0, 1.0);
        const std::size_t n = pieces();
        const double scaled = t * static_cast<double>(n);
        std::size_t k = static_cast<std::size_t>(scaled);
        if (k >= n)
            k = n - 1;
        return {k, scaled - static_cast<double>(k)};
    }

    Kind kind_;
};

// ---------------------------------------------------------------------------
// Adaptive Gauss-Kronrod quadrature along paths
// ---------------------------------------------------------------------------

struct QuadratureConfig {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    int max_subdivisions = 1 << 16;

    void validate() const
    {
        if (!(rel_tol > 0) || !(abs_tol > 0) || max_subdivisions < 1)
            throw Error(ErrorKind::InvalidParameter,
                        "quadrature tolerances must be > 0 and max_subdivisions >= 1");
    }
};

template <std::size_t N>
using CVec = std::array<cplx, N>;

namespace detail {

// 21-point Kronrod extension of the 10-point Gauss rule (QUADPACK qk21).
inline constexpr std::array<double, 11> kKronrodNodes = {
    0.00000000000000000e+00, 1.48874338981631211e-01, 2.94392862701460198e-01,
    4.33395394129247191e-01, 5.62757134668604683e-01, 6.79409568299024406e-01,
    7.80817726586416897e-01, 8.65063366688984511e-01, 9.30157491355708226e-01,
    9.73906528517171720e-01, 9.95657163025808081e-01,
};
inline constexpr std::array<double, 11> kKronrodWeights = {
    1.49445554002916906e-01, 1.47739104901338491e-01, 1.42775938577060081e-01,
    1.34709217311473326e-01, 1.23491976262065851e-01, 1.09387158802297642e-01,
    9.31254545836976055e-02, 7.50396748109199528e-02, 5.47558965743519960e-02,
    3.25581623079647275e-02, 1.16946388673718743e-02,
};
// Gauss weights for the odd-indexed Kronrod nodes.
inline constexpr std::array<double, 5> kGaussWeights = {
    2.95524224714752870e-01, 2.69266719309996355e-01, 2.19086362515982044e-01,
    1.49451349150580593e-01, 6.66713443086881376e-02,
};

template <std::size_t N>
double max_abs(const CVec<N>& v)
{
    double m = 0.0;
    for (const cplx& c : v)
        m = std::max(m, std::abs(c));
    return m;
}

template <std::size_t N>
struct Interval {
    std::size_t piece;
    double a, b;
    CVec<N> value;
    double err;
};

template <std::size_t N, class Form>
Interval<N> gk21(const Form& form, const ComplexPath& path, std::size_t piece, double a, double b)
{
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    CVec<N> kron{};
    CVec<N> gauss{};
    double resabs = 0.0;

    auto sample = [&](double tau) -> CVec<N> {
        auto [z, v] = path.piece_eval(piece, tau);
        CVec<N> f = form(z, v);
        for (const cplx& c : f) {
            if (!is_finite(c))
                throw Error(ErrorKind::NonFiniteSample,
                            "integrand not finite at z = " + describe(z));
        }
        return f;
    };

    const CVec<N> f0 = sample(center);
    for (std::size_t i = 0; i < N; ++i)
        kron[i] += kKronrodWeights[0] * f0[i];
    resabs += kKronrodWeights[0] * max_abs<N>(f0);

    for (std::size_t j = 1; j < kKronrodNodes.size(); ++j) {
        const double dx = half * kKronrodNodes[j];
        const CVec<N> fl = sample(center - dx);
        const CVec<N> fr = sample(center + dx);
        for (std::size_t i = 0; i < N; ++i) {
            const cplx s = fl[i] + fr[i];
            kron[i] += kKronrodWeights[j] * s;
            if (j % 2 == 1)
                gauss[i] += kGaussWeights[j / 2] * s;
        }
        resabs += kKronrodWeights[j] * (max_abs<N>(fl) + max_abs<N>(fr));
    }

    double err = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
        kron[i] *= half;
        gauss[i] *= half;
        err = std::max(err, std::abs(kron[i] - gauss[i]));
    }
    resabs *= std::abs(half);
    // Below this the Kronrod/Gauss gap is rounding, not truncation.
    if (err <= 50.0 * std::numeric_limits<double>::epsilon() * resabs)
        err = 0.0;
    return Interval<N>{piece, a, b, kron, err};
}

} // namespace detail

/// Integrates form(z, dz) along path, where form is linear over the reals in
/// dz (so both dz and conj(dz) terms are allowed). Returns N complex
/// integrals sharing one adaptive subdivision.
template <std::size_t N, class Form>
CVec<N> integrate_form(const Form& form, const ComplexPath& path, const QuadratureConfig& cfg = {})
{
    cfg.validate();
    using Iv = detail::Interval<N>;
    std::vector<Iv> heap;
    auto by_err = [](const Iv& x, const Iv& y) { return x.err < y.err; };

    CVec<N> total{};
    double total_err = 0.0;
    for (std::size_t k = 0; k < path.pieces(); ++k) {
        Iv iv = detail::gk21<N>(form, path, k, 0.0, 1.0);
        for (std::size_t i = 0; i < N; ++i)
            total[i] += iv.value[i];
        total_err += iv.err;
        heap.push_back(iv);
    }
    std::make_heap(heap.begin(), heap.end(), by_err);

    auto target = [&] { return std::max(cfg.abs_tol, cfg.rel_tol * detail::max_abs<N>(total)); };

    while (total_err > target()) {
        if (static_cast<int>(heap.size()) >= cfg.max_subdivisions)
            throw Error(ErrorKind::ToleranceNotMet,
                        "subdivision budget exhausted; estimated error " +
                            std::to_string(total_err));
        std::pop_heap(heap.begin(), heap.end(), by_err);
        const Iv worst = heap.back();
        heap.pop_back();
        const double mid = 0.5 * (worst.a + worst.b);
        Iv left = detail::gk21<N>(form, path, worst.piece, worst.a, mid);
        Iv right = detail::gk21<N>(form, path, worst.piece, mid, worst.b);
        for (std::size_t i = 0; i < N; ++i)
            total[i] += left.value[i] + right.value[i] - worst.value[i];
        total_err += left.err + right.err - worst.err;
        heap.push_back(left);
        std::push_heap(heap.begin(), heap.end(), by_err);
        heap.push_back(right);
        std::push_heap(heap.begin(), heap.end(), by_err);
    }

    // Re-sum in path order so the result does not depend on heap history.
    std::sort(heap.begin(), heap.end(), [](const Iv& x, const Iv& y) {
        return x.piece != y.piece ? x.piece < y.piece : x.a < y.a;
    });
    CVec<N> result{};
    for (const Iv& iv : heap)
        for (std::size_t i = 0; i < N; ++i)
            result[i] += iv.value[i];
    return result;
}

/// Integral of integrand(z) dz along path.
template <class F>
cplx integrate_path(const F& integrand, const ComplexPath& path, const QuadratureConfig& cfg = {})
{
    auto form = [&](cplx z, cplx v) { return CVec<1>{integrand(z) * v}; };
    return integrate_form<1>(form, path, cfg)[0];
}

// ---------------------------------------------------------------------------
// Newton inversion of planar maps
// ---------------------------------------------------------------------------

/// Real 2x2 matrix acting on (Re, Im).
struct Mat2 {
    double a11 = 0, a12 = 0, a21 = 0, a22 = 0;

    double det() const { return a11 * a22 - a12 * a21; }
    cplx apply(cplx v) const
    {
        return {a11 * v.real() + a12 * v.imag(), a21 * v.real() + a22 * v.imag()};
    }
};

/// Jacobian of a holomorphic map with complex derivative d.
inline Mat2 holomorphic_jacobian(cplx d) { return {d.real(), -d.imag(), d.imag(), d.real()}; }

/// Jacobian of a map with Wirtinger derivatives f_z = a, f_zbar = b.
inline Mat2 wirtinger_jacobian(cplx a, cplx b)
{
    const cplx dx = a + b;
    const cplx dy = cplx(0, 1) * (a - b);
    return {dx.real(), dy.real(), dx.imag(), dy.imag()};
}

struct NewtonOptions {
    /// Optional cap on the step length at the current iterate.
    std::function<double(cplx)> max_step;
};

/// Solves map(z) = target by Newton iteration. Returns z with
/// |map(z) - target| <= tol. The map is called on successive iterates in
/// order, each followed by a jacobian call at the same point.
template <class Map, class Jac>
cplx newton_invert(Map&& map, Jac&& jacobian, cplx target, cplx guess, double tol, int max_iter,
                   const NewtonOptions& opts = {})
{
    if (!(tol > 0) || max_iter < 1)
        throw Error(ErrorKind::InvalidParameter, "newton_invert needs tol > 0, max_iter >= 1");
    cplx z = guess;
    double last = std::numeric_limits<double>::infinity();
    for (int it = 0; it <= max_iter; ++it) {
        const cplx r = map(z) - target;
        if (!is_finite(r))
            throw Error(ErrorKind::NoConvergence, "map not finite at " + describe(z));
        last = std::abs(r);
        if (last <= tol)
            return z;
        if (it == max_iter)
            break;
        const Mat2 J = jacobian(z);
        const double det = J.det();
        const double scale = std::max({std::abs(J.a11), std::abs(J.a12), std::abs(J.a21),
                                       std::abs(J.a22)});
        if (!std::isfinite(det) || scale == 0.0 || std::abs(det) <= 1e-14 * scale * scale)
            throw Error(ErrorKind::SingularJacobian, "at " + describe(z));
        // dz = -J^{-1} r
        cplx step{-(J.a22 * r.real() - J.a12 * r.imag()) / det,
                  -(-J.a21 * r.real() + J.a11 * r.imag()) / det};
        if (opts.max_step) {
            const double cap = opts.max_step(z);
            const double len = std::abs(step);
            if (len > cap && cap > 0)
                step *= cap / len;
        }
        z += step;
    }
    throw Error(ErrorKind::NoConvergence,
                "residual " + std::to_string(last) + " after " + std::to_string(max_iter) +
                    " iterations");
}

// ---------------------------------------------------------------------------
// Reproducible sampling
// ---------------------------------------------------------------------------

inline constexpr std::uint64_t kDefaultSeed = 0x5EED;

/// mt19937_64 with an explicit double construction, so sample streams are
/// identical across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed = kDefaultSeed) : engine_(seed) {}

    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double a, double b) { return a + (b - a) * uniform(); }
    std::size_t index(std::size_t n) { return static_cast<std::size_t>(uniform() * n) % n; }

private:
    std::mt19937_64 engine_;
};

// ---------------------------------------------------------------------------
// Finite differences and 1-D roots
// ---------------------------------------------------------------------------

/// Five-point estimate of the Laplacian of field at point with step h.
template <class Field>
double laplacian_residual(const Field& field, cplx point, double h)
{
    if (!(h > 0))
        throw Error(ErrorKind::InvalidParameter, "stencil step must be positive");
    const std::array<cplx, 5> pts = {point, point + h, point - h, point + cplx(0, h),
                                     point - cplx(0, h)};
    std::array<double, 5> v{};
    for (std::size_t i = 0; i < pts.size(); ++i) {
        try {
            v[i] = field(pts[i]);
        }
        catch (const Error& e) {
            throw Error(ErrorKind::StencilOutsideDomain,
                        "stencil point " + describe(pts[i]) + ": " + e.what());
        }
        if (!std::isfinite(v[i]))
            throw Error(ErrorKind::StencilOutsideDomain,
                        "field not finite at " + describe(pts[i]));
    }
    return (v[1] + v[2] + v[3] + v[4] - 4.0 * v[0]) / (h * h);
}

/// Root of f in [a, b] with |f(r)| <= tol: bisection backbone with secant
/// steps taken whenever they land inside the bracket and keep shrinking it.
template <class F>
double find_root_1d(const F& f, double a, double b, double tol)
{
    if (!(tol > 0) || !std::isfinite(a) || !std::isfinite(b))
        throw Error(ErrorKind::InvalidParameter, "find_root_1d needs finite bracket, tol > 0");
    if (a > b)
        std::swap(a, b);
    double fa = f(a);
    double fb = f(b);
    if (std::abs(fa) <= tol)
        return a;
    if (std::abs(fb) <= tol)
        return b;
    if (!(fa * fb <= 0.0))
        throw Error(ErrorKind::NoBracket, "f(a) and f(b) have the same sign");

    bool force_bisect = false;
    double width = b - a;
    for (int it = 0; it < 400; ++it) {
        double m = 0.5 * (a + b);
        if (!force_bisect && fb != fa) {
            const double s = b - fb * (b - a) / (fb - fa);
            if (s > a && s < b)
                m = s;
        }
        const double fm = f(m);
        if (std::abs(fm) <= tol)
            return m;
        if ((fm < 0) == (fa < 0)) {
            a = m;
            fa = fm;
        }
        else {
            b = m;
            fb = fm;
        }
        const double new_width = b - a;
        // A secant step that failed to halve the bracket is followed by a bisection.
        force_bisect = !force_bisect && new_width > 0.5 * width;
        width = new_width;
        if (width <= 4.0 * std::numeric_limits<double>::epsilon() *
                         std::max({std::abs(a), std::abs(b), 1e-300}))
            break;
    }
    return std::abs(fa) < std::abs(fb) ? a : b;
}

} // namespace bigraph
