// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on failure.

#include <bigraph/bigraph.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

using namespace bigraph;
using std::numbers::pi;

namespace {

const cplx I{0, 1};

struct Outcome {
    bool pass = true;
    std::string detail;
};

int failures = 0;

void report(int id, const std::string& title, const std::function<Outcome()>& body)
{
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
        o = body();
    }
    catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!o.pass)
        ++failures;
    std::printf("%s  %2d  %-34s %s  [%.2fs]\n", o.pass ? "PASS" : "FAIL", id, title.c_str(),
                o.detail.c_str(), secs);
    std::fflush(stdout);
}

std::string fmt(const char* f, double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

const std::vector<FamilyModel>& families()
{
    static const std::vector<FamilyModel> all{make_family(Family::vertical_catenoid()),
                                              make_family(Family::horizontal_catenoid()),
                                              make_family(Family::scherk(pi / 4))};
    return all;
}

// worst of a check over the three families; residual printed per family
Outcome per_family(const std::function<Check(const FamilyModel&)>& run)
{
    Outcome o;
    for (const FamilyModel& fm : families()) {
        const Check c = run(fm);
        o.pass = o.pass && c.pass;
        o.detail += fm.family.name() + "=" + fmt("%.2e", c.max_residual) + " ";
    }
    return o;
}

// Distance from p to |x + 1 + pi/2| = pi/2 + cosh y: coarse scan, then
// golden-section refinement of the nearest branch parameter.
double cosh_pair_distance(cplx p)
{
    double best = INFINITY;
    for (int side : {1, -1}) {
        auto d = [&](double y) {
            const double r = pi / 2 + std::cosh(y);
            return std::abs(p - cplx(-1.0 - pi / 2 + side * r, y));
        };
        const int n = 400;
        int kbest = 0;
        double dbest = INFINITY;
        for (int k = 0; k <= n; ++k) {
            const double v = d(-6.0 + 12.0 * k / n);
            if (v < dbest) {
                dbest = v;
                kbest = k;
            }
        }
        double a = -6.0 + 12.0 * std::max(kbest - 1, 0) / n;
        double b = -6.0 + 12.0 * std::min(kbest + 1, n) / n;
        const double g = (std::sqrt(5.0) - 1) / 2;
        for (int it = 0; it < 80; ++it) {
            const double c = b - g * (b - a);
            const double e = a + g * (b - a);
            (d(c) < d(e) ? b : a) = (d(c) < d(e) ? e : c);
        }
        best = std::min({best, dbest, d(0.5 * (a + b))});
    }
    return best;
}

double segment_distance(cplx p, cplx a, cplx b)
{
    const cplx ab = b - a;
    const double n2 = std::norm(ab);
    double t = n2 > 0 ? ((p - a) * std::conj(ab)).real() / n2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return std::abs(p - (a + t * ab));
}

// Two-sided deviation inside |z| <= 10 between the scaled boundary and its
// limit, computed independently of the library's limit routine.
double oracle_limit_deviation(double alpha, LimitMode mode)
{
    const double window = 10.0;
    const int n = 8192;
    std::vector<std::vector<cplx>> curves;
    const std::vector<int> comps = mode == LimitMode::ToZero ? std::vector<int>{0} : std::vector<int>{0, -1};
    const double T = 2 * pi * (1 + std::cos(alpha));
    const double scale = mode == LimitMode::ToZero ? 1.0 / (2 * alpha) : 1.0 / (pi - 2 * alpha);
    for (int c : comps) {
        std::vector<cplx> pts{cplx(c * T * scale, 0.0)};
        for (int i = 0; i < n; ++i) {
            const double t = std::tan(-pi / 2 + pi * (i + 0.5) / n);
            pts.push_back(scaled_limit_boundary(alpha, mode, t, c));
        }
        pts.push_back(pts.front());
        curves.push_back(pts);
    }
    double worst = 0.0;
    for (const auto& pts : curves)
        for (const cplx& p : pts)
            if (std::abs(p) <= window) {
                const double d = mode == LimitMode::ToZero ? std::abs(std::abs(p - 1.0) - 1.0)
                                                           : cosh_pair_distance(p);
                worst = std::max(worst, d);
            }
    std::vector<cplx> limit;
    if (mode == LimitMode::ToZero) {
        for (int i = 0; i < 1000; ++i)
            limit.push_back(1.0 + std::polar(1.0, 2 * pi * i / 1000));
    }
    else {
        for (int i = 0; i <= 1000; ++i) {
            const double y = -4.0 + 8.0 * i / 1000;
            const double r = pi / 2 + std::cosh(y);
            for (double x : {-1.0 - pi / 2 + r, -1.0 - pi / 2 - r})
                if (std::abs(cplx(x, y)) <= window)
                    limit.push_back({x, y});
        }
    }
    for (const cplx& q : limit) {
        double d = INFINITY;
        for (const auto& pts : curves)
            for (std::size_t k = 0; k + 1 < pts.size(); ++k)
                d = std::min(d, segment_distance(q, pts[k], pts[k + 1]));
        worst = std::max(worst, d);
    }
    return worst;
}

} // namespace

int main()
{
    report(1, "horizontal catenoid boundary", [] {
        const auto start = std::chrono::steady_clock::now();
        const WeierstrassData h = horizontal_catenoid_data();
        double worst = 0.0;
        for (double eps : {1.0, -1.0})
            for (int k = 0; k < 512; ++k) {
                const double t = -5.0 + 10.0 * k / 511;
                const ComplexPath path = ComplexPath::polyline({1.0, eps * I, eps * I * std::exp(t)});
                const cplx exact{-t, -eps * (pi / 2 + std::cosh(t))};
                worst = std::max(worst, std::abs(map_phi(h, path) - exact));
            }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        return Outcome{worst < 1e-9 && secs < 5.0, "max_err=" + fmt("%.2e", worst)};
    });

    report(2, "Scherk implicit equation", [] {
        double worst = 0.0;
        double special = 0.0;
        for (double a : {0.3, pi / 4, 1.2}) {
            const Family f = Family::scherk(a);
            const double c = std::cos(a);
            for (int k = 0; k <= 4096; ++k) {
                const double t = -12.0 + 24.0 * k / 4096;
                const cplx p = boundary_param(f, 0, t);
                const double x = p.real(), y = p.imag();
                // cos^2 a cosh(y / cos a) = sin^2 a + cos(x - 2a), written out here
                const double r = c * c * std::cosh(y / c) - std::sin(a) * std::sin(a) - std::cos(x - 2 * a);
                worst = std::max({worst, std::abs(r), std::abs(scherk_implicit_residual(a, x, y))});
                if (a == pi / 4)
                    special = std::max(special,
                                       std::abs(std::cosh(std::sqrt(2.0) * y) - 1.0 - 2.0 * std::sin(x)));
            }
        }
        return Outcome{worst < 1e-9 && special < 1e-9,
                       "max_residual=" + fmt("%.2e", worst) + " special=" + fmt("%.2e", special)};
    });

    report(3, "Scherk period and residue", [] {
        double worst_p = 0.0;
        double worst_r = 0.0;
        for (double a : {0.3, pi / 4, 1.2}) {
            const WeierstrassData d = scherk_data(a);
            const double r = 0.5 * std::min(std::sin(a), std::cos(a));
            const cplx p = loop_period(d, ComplexPath::circle(std::polar(1.0, a), r));
            const double T = 2 * pi * (1 + std::cos(a));
            worst_p = std::max(worst_p, std::abs(std::abs(p) - T) / T);
            const cplx residue = p / (2 * pi * I);
            worst_r = std::max(worst_r, std::abs(residue - I * (1 + std::cos(a))) / (1 + std::cos(a)));
        }
        return Outcome{worst_p < 1e-8 && worst_r < 1e-8,
                       "period_rel=" + fmt("%.2e", worst_p) + " residue_rel=" + fmt("%.2e", worst_r)};
    });

    report(4, "round trip (100 samples/family)", [] {
        return per_family([](const FamilyModel& fm) {
            Rng rng(kDefaultSeed);
            const Check c = check_round_trip(fm.domain, interior_samples(fm.domain, 100, rng));
            return make_check(c.name, c.max_residual, 1e-7, c.n_samples);
        });
    });

    report(5, "det d psi identity (100 pts/family)", [] {
        Outcome o = per_family([](const FamilyModel& fm) {
            Rng rng(kDefaultSeed);
            std::vector<cplx> pts;
            while (pts.size() < 100)
                for (const cplx& p : away_from_boundary(fm.domain, interior_samples(fm.domain, 100, rng)))
                    if (pts.size() < 100)
                        pts.push_back(p);
            return check_det_dpsi(fm.domain, pts);
        });
        // closed form on the catenoid: |grad u| = 1/r
        double worst = 0.0;
        for (double r : {1.2, 2.0, 5.0}) {
            const double exact = 0.25 * (std::pow(r, -4) - 1.0);
            worst = std::max(worst, std::abs(det_dpsi_fd(families()[0].domain, std::polar(r, 0.4)) - exact) /
                                        std::abs(exact));
        }
        o.pass = o.pass && worst < 1e-6;
        o.detail += "catenoid_oracle=" + fmt("%.2e", worst);
        return o;
    });

    report(6, "PDE suite", [] {
        Outcome o;
        for (const FamilyModel& fm : families()) {
            const VerificationReport r = verify_pde(fm.domain, 64, 1e-4);
            const bool analytic = fm.family.kind == FamilyKind::VerticalCatenoid;
            const double btol = analytic ? 1e-12 : 1e-8;
            const double harm = r.find("harmonic_residual")->max_residual;
            const double pos = r.find("positivity_violations")->max_residual;
            const double du = r.find("boundary_dirichlet")->max_residual;
            const double dn = r.find("boundary_neumann")->max_residual;
            const double ratio = harmonic_scaling_ratio(fm.domain, 32, 1e-2);
            o.pass = o.pass && pos == 0.0 && du < btol && dn < btol && ratio >= 3.5 && ratio <= 4.5 &&
                     (!analytic || harm < 1e-5);
            o.detail += fm.family.name() + "(lap=" + fmt("%.1e", harm) + " u=" + fmt("%.1e", du) +
                        " grad=" + fmt("%.1e", dn) + " ratio=" + fmt("%.2f", ratio) + ") ";
        }
        // catenoid oracle: u = log|z| against the model on the grid
        double worst = 0.0;
        for (const cplx& p : interior_grid(families()[0].domain, 64))
            worst = std::max(worst, std::abs(families()[0].domain.u(p) - std::log(std::abs(p))));
        o.pass = o.pass && worst < 1e-14;
        return o;
    });

    report(7, "expansion (1000 pairs/family)", [] {
        Outcome o = per_family([](const FamilyModel& fm) {
            Rng rng(kDefaultSeed);
            return check_expansion(fm.maps, hat_pairs(*fm.maps.sheet, 1000, rng));
        });
        o.detail = "max(|z-z'| - |F(z)-F(z')|): " + o.detail;
        return o;
    });

    report(8, "boundary curvature", [] {
        double circle = 0.0;
        for (int k = 0; k < 256; ++k) {
            const double th = 2 * pi * k / 256;
            const Vec2 g{2 * std::cos(th), 2 * std::sin(th)};
            circle = std::max(circle, std::abs(boundary_curvature(g, Hessian2{2, 0, 2}) - 1.0));
        }
        Outcome o = per_family([](const FamilyModel& fm) { return check_curvature(fm.domain); });
        o.pass = o.pass && circle < 1e-12;
        o.detail = "circle_err=" + fmt("%.1e", circle) + " nonpositive: " + o.detail;
        return o;
    });

    report(9, "distortion bounds (1000 samples)", [] {
        Rng rng(kDefaultSeed);
        const VerificationReport affine = check_distortion([](cplx z) { return z - I; },
                                                           [](cplx) { return cplx(1, 0); },
                                                           half_plane_samples(1000, rng));
        const VerificationReport koebe = check_distortion(koebe_half_plane, koebe_half_plane_derivative,
                                                          half_plane_samples(1000, rng));
        double worst = -INFINITY;
        for (const VerificationReport* r : {&affine, &koebe})
            for (const Check& c : r->checks)
                worst = std::max(worst, c.max_residual);
        return Outcome{affine.all_pass() && koebe.all_pass(), "worst_margin=" + fmt("%.2e", worst)};
    });

    report(10, "scaled Scherk limits", [] {
        Outcome o;
        for (LimitMode mode : {LimitMode::ToZero, LimitMode::ToHalfPi}) {
            std::vector<double> oracle, lib;
            for (double e : {0.04, 0.02, 0.01}) {
                const double a = mode == LimitMode::ToZero ? e : pi / 2 - e;
                oracle.push_back(oracle_limit_deviation(a, mode));
                lib.push_back(limit_deviation(a, mode));
            }
            for (const auto* v : {&oracle, &lib})
                o.pass = o.pass && (*v)[0] > (*v)[1] && (*v)[1] > (*v)[2] && (*v)[2] < 0.05;
            o.detail += std::string(mode == LimitMode::ToZero ? "to_zero" : "to_half_pi") + "=" +
                        fmt("%.1e", oracle[0]) + "," + fmt("%.1e", oracle[1]) + "," +
                        fmt("%.1e", oracle[2]) + " (lib " + fmt("%.1e", lib[2]) + ") ";
        }
        return o;
    });

    std::printf("%s\n", failures == 0 ? "all criteria passed" : "some criteria failed");
    return failures == 0 ? 0 : 1;
}
