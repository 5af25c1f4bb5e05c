#include <catch_amalgamated.hpp>

#include <bigraph/correspondence.hpp>
#include <bigraph/families.hpp>
#include <bigraph/verify.hpp>

#include <cmath>
#include <numbers>

using namespace bigraph;
using std::numbers::pi;

namespace {

const cplx I{0, 1};

template <class F>
ErrorKind kind_of(F&& f)
{
    try {
        f();
    }
    catch (const Error& e) {
        return e.kind();
    }
    FAIL("no bigraph::Error thrown");
    return ErrorKind::InvalidParameter;
}

const FamilyModel& vc()
{
    static const FamilyModel m = make_family(Family::vertical_catenoid());
    return m;
}
const FamilyModel& hc()
{
    static const FamilyModel m = make_family(Family::horizontal_catenoid());
    return m;
}
const FamilyModel& sk()
{
    static const FamilyModel m = make_family(Family::scherk(pi / 4));
    return m;
}

// Closed forms for the catenoid domain |z| > 1, u = log|z|.
cplx psi_catenoid(cplx z) { return 0.5 * (std::conj(z) - 1.0) + 0.5 * (1.0 / z - 1.0); }

cplx phi_hcat(cplx z) { return 1.0 / (2.0 * z) - std::log(z) - z / 2.0; }

} // namespace

TEST_CASE("psi_differential")
{
    auto [a, b] = psi_differential(Vec2{1, 0});
    CHECK(std::abs(a - (-0.5)) < 1e-15);
    CHECK(std::abs(b - 0.5) < 1e-15);
    std::tie(a, b) = psi_differential(Vec2{0, 0});
    CHECK(std::abs(a) == 0.0);
    CHECK(std::abs(b - 0.5) < 1e-15);
    std::tie(a, b) = psi_differential(vc().domain, 2.0);
    CHECK(std::abs(a - (-0.125)) < 1e-15);
    CHECK(std::abs(b - 0.5) < 1e-15);
    CHECK(kind_of([] { psi_differential(vc().domain, 0.5); }) == ErrorKind::OutsideDomain);
}

TEST_CASE("map_psi on the catenoid domain")
{
    const DomainModel& m = vc().domain;
    for (double th : {0.4, 1.5, -2.8}) {
        const cplx v = map_psi(m, ComplexPath::arc(0.0, 1.0, 0.0, th));
        CHECK(std::abs(v - (std::polar(1.0, -th) - 1.0)) < 1e-12);
    }
    CHECK(std::abs(map_psi(m, ComplexPath::segment(1.0, 2.0)) - 0.25) < 1e-14);
    CHECK(psi_at(m, m.z0) == cplx(0, 0));

    Rng rng(53);
    for (int k = 0; k < 50; ++k) {
        const cplx z = std::polar(std::exp(rng.uniform(0.01, 1.3)), rng.uniform(-pi, pi));
        CHECK(std::abs(psi_at(m, z) - psi_catenoid(z)) < 1e-11);
    }
    CHECK(kind_of([&] { map_psi(m, ComplexPath::segment(1.0, -1.0)); }) ==
          ErrorKind::PathLeavesDomain);
}

TEST_CASE("det_dpsi")
{
    CHECK(det_dpsi(Vec2{1, 0}) == 0.0);
    CHECK(det_dpsi(Vec2{0, 0}) == -0.25);
    CHECK(det_dpsi(vc().domain, 2.0) == Catch::Approx(-15.0 / 64.0).epsilon(1e-15));
    CHECK(kind_of([] { det_dpsi(vc().domain, 0.2); }) == ErrorKind::OutsideDomain);
    Rng rng(59);
    for (const FamilyModel* fm : {&vc(), &hc(), &sk()})
        for (const cplx& p : interior_samples(fm->domain, 40, rng))
            CHECK(det_dpsi(fm->domain, p) < 0.0);
}

TEST_CASE("map_phi on the catenoids")
{
    const WeierstrassData v = vertical_catenoid_data();
    Rng rng(61);
    for (int k = 0; k < 30; ++k) {
        const cplx z = std::polar(std::exp(rng.uniform(0, 1.5)), rng.uniform(-pi, pi));
        const ComplexPath path = ComplexPath::polyline(
            {1.0, std::polar(1.0, std::arg(z) / 2), std::polar(1.0, std::arg(z)), z});
        CHECK(std::abs(map_phi(v, path, -1.0) - (-z)) < 1e-11);
    }

    const WeierstrassData h = horizontal_catenoid_data();
    for (int k = 0; k < 30; ++k) {
        const cplx z{rng.uniform(0.1, 3), rng.uniform(-3, 3)};
        CHECK(std::abs(map_phi(h, ComplexPath::segment(1.0, z)) - phi_hcat(z)) < 1e-11);
    }

    for (double eps : {1.0, -1.0})
        for (double t = -5.0; t <= 5.0; t += 0.5) {
            const ComplexPath path = ComplexPath::polyline({1.0, eps * I, eps * I * std::exp(t)});
            const cplx expected{-t, -eps * (pi / 2 + std::cosh(t))};
            CHECK(std::abs(map_phi(h, path) - expected) < 1e-10 * (1.0 + std::abs(expected)));
        }
    CHECK(kind_of([&] { map_phi(h, ComplexPath::segment(1.0, -1.0)); }) == ErrorKind::PoleOnPath);
}

TEST_CASE("loop_period")
{
    const WeierstrassData h = horizontal_catenoid_data();
    CHECK(std::abs(loop_period(h, ComplexPath::circle(2.0, 0.5))) < 1e-12);
    CHECK(kind_of([&] { loop_period(h, ComplexPath::segment(1.0, 2.0)); }) ==
          ErrorKind::InvalidPath);

    for (double a : {0.3, pi / 4, 1.2}) {
        const WeierstrassData d = scherk_data(a);
        const double r = 0.5 * std::min(2 * std::sin(a), 2 * std::cos(a));
        const cplx up = loop_period(d, ComplexPath::circle(std::polar(1.0, a), r));
        const cplx down = loop_period(d, ComplexPath::circle(std::polar(1.0, -a), r));
        const cplx expected = 2.0 * pi * I * cplx(0, 1 + std::cos(a));
        CHECK(std::abs(up - expected) < 1e-9 * std::abs(expected));
        CHECK(std::abs(down + expected) < 1e-9 * std::abs(expected));
        CHECK(std::abs(up) == Catch::Approx(scherk_period(a)).epsilon(1e-9));
    }
}

TEST_CASE("grad_from_gauss")
{
    WeierstrassData zero;
    zero.g = [](cplx) { return cplx(0, 0); };
    const Vec2 g0 = grad_from_gauss(zero, 1.0);
    CHECK(g0.x == 0.0);
    CHECK(g0.y == 0.0);

    const WeierstrassData h = horizontal_catenoid_data();
    for (double t : {-1.0, 0.3, 2.0})
        CHECK(grad_from_gauss(h, I * std::exp(t)).norm() == Catch::Approx(1.0).epsilon(1e-14));
    CHECK(grad_from_gauss(h, 1.0).norm() == 0.0);
    CHECK(std::abs(phi_hcat(1.0)) < 1e-15);
    // the inverted domain model agrees: phi(1) = 0 is a critical point of u
    CHECK(hc().domain.grad_u(0.0).norm() < 1e-8);
}

TEST_CASE("horizontal catenoid domain: u(phi(z)) = X3(z) and |grad u| = |g|")
{
    const DomainModel& m = hc().domain;
    const WeierstrassData h = horizontal_catenoid_data();
    Rng rng(67);
    for (int k = 0; k < 60; ++k) {
        const cplx z{rng.uniform(0.2, 2.5), rng.uniform(-2.5, 2.5)};
        const cplx w = phi_hcat(z);
        if (!m.contains(w) || m.defining(w) < 1e-3)
            continue;
        CHECK(m.u(w) == Catch::Approx(0.5 * (z + 1.0 / z).real()).margin(1e-10));
        const Vec2 g = m.grad_u(w);
        const Vec2 e = grad_from_gauss(h, z);
        CHECK(std::hypot(g.x - e.x, g.y - e.y) < 1e-10);
        const Hessian2 hs = m.hess_u(w);
        const Hessian2 he = hessian_from_gauss(h, z);
        CHECK(std::abs(hs.xx - he.xx) < 1e-8 * (1 + std::abs(he.xx)));
        CHECK(std::abs(hs.xy - he.xy) < 1e-8 * (1 + std::abs(he.xy)));
    }
}

TEST_CASE("map_F at the basepoint and its expansion")
{
    for (const FamilyModel* fm : {&vc(), &hc(), &sk()}) {
        const CorrespondenceMaps& maps = fm->maps;
        const cplx hat = maps.psi(maps.p0);
        // psi folds along |s| = 1 (det d psi = 0), where inversion only
        // recovers s to about the square root of the Newton tolerance
        const bool on_fold = std::abs(std::abs(maps.sheet->chart(maps.p0)) - 1.0) < 1e-12;
        CHECK(std::abs(map_F(maps, hat) - fm->phi_base) < (on_fold ? 1e-5 : 1e-10));
        CHECK(std::abs(maps.phi(maps.p0) - fm->phi_base) < 1e-12);

        Rng rng(71);
        const auto pairs = hat_pairs(*maps.sheet, 300, rng);
        for (const auto& [a, b] : pairs)
            CHECK(std::abs(map_F(maps, a) - map_F(maps, b)) >= std::abs(a - b) - 1e-10);
        CHECK(std::abs(map_F(maps, pairs[0].first) - map_F(maps, pairs[0].first)) == 0.0);
    }
}

TEST_CASE("psi_inverse undoes psi on the sheet")
{
    Rng rng(73);
    for (const FamilyModel* fm : {&vc(), &hc(), &sk()}) {
        const SurfaceSheet& sheet = *fm->maps.sheet;
        for (const cplx& s : sheet_samples(sheet, 40, rng)) {
            const SheetValue v = sheet.at_s(s);
            const SheetValue back = sheet.invert_psi(v.psi);
            // periodic sheets return the preimage modulo the deck group
            CHECK(std::abs(back.s - s) < 1e-9);
            CHECK(std::abs(sheet.invert_phi(v.phi).s - s) < 1e-9);
        }
    }
}

TEST_CASE("boundary translation law on every family")
{
    for (const FamilyModel* fm : {&vc(), &hc(), &sk()}) {
        const Check c = check_boundary_translation(fm->domain);
        INFO(fm->family.name() << " " << c.max_residual);
        CHECK(c.pass);
    }
    // the catenoid translation is psi(e^{it}) - conj(e^{it}) = -1
    const DomainModel& m = vc().domain;
    for (double t : {0.3, 1.7, 3.0}) {
        const cplx w = std::polar(1.0, t);
        CHECK(std::abs(psi_at(m, w) - std::conj(w) - (-1.0)) < 1e-12);
    }
}

TEST_CASE("round trip: data built from the domain gives back the domain")
{
    Rng rng(79);
    for (const FamilyModel* fm : {&vc(), &hc(), &sk()}) {
        const Check c = check_round_trip(fm->domain, interior_samples(fm->domain, 100, rng));
        INFO(fm->family.name() << " " << c.max_residual);
        CHECK(c.max_residual < 1e-7);
    }
}

TEST_CASE("u equals the height of the corresponding surface point")
{
    Rng rng(83);
    for (const FamilyModel* fm : {&vc(), &hc(), &sk()}) {
        const SurfaceSheet& sheet = *fm->maps.sheet;
        for (const cplx& s : sheet_samples(sheet, 40, rng)) {
            const SheetValue v = sheet.at_s(s);
            CHECK(fm->domain.u(v.phi) == Catch::Approx(v.h.real()).margin(1e-10));
        }
    }
    // independent oracle on the catenoid: X3 = log|zeta|, phi = -zeta
    const WeierstrassData v = vertical_catenoid_data();
    for (double r : {1.5, 3.0}) {
        const Point3 x = evaluate_immersion(v, ComplexPath::segment(1.0, r));
        CHECK(vc().domain.u(-r) == Catch::Approx(x.x3).margin(1e-12));
    }
}
