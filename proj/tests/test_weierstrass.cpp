#include <catch_amalgamated.hpp>

#include <bigraph/correspondence.hpp>
#include <bigraph/families.hpp>
#include <bigraph/weierstrass.hpp>

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

// From 1 out along the reals, around the circle, then radially to z.
ComplexPath annulus_path(cplx z)
{
    std::vector<cplx> pts{1.0};
    const int n = 64;
    for (int k = 1; k <= n; ++k)
        pts.push_back(std::polar(1.0, std::arg(z) * k / n));
    pts.push_back(z);
    return ComplexPath::polyline(pts);
}

double rel(cplx a, cplx b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

} // namespace

TEST_CASE("vertical catenoid height along the reals")
{
    const WeierstrassData d = vertical_catenoid_data();
    const Point3 x = evaluate_immersion(d, ComplexPath::segment(1.0, std::exp(1.0)));
    CHECK(x.x3 == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("vertical catenoid points lie on x1^2 + x2^2 = cosh^2 x3")
{
    const WeierstrassData d = vertical_catenoid_data();
    Rng rng(17);
    for (int k = 0; k < 100; ++k) {
        const cplx z = std::polar(std::exp(rng.uniform(-2, 2)), rng.uniform(-3, 3));
        const Point3 x = evaluate_immersion(d, annulus_path(z));
        CHECK(x.x3 == Catch::Approx(std::log(std::abs(z))).margin(1e-11));
        CHECK(std::abs(x.x1 * x.x1 + x.x2 * x.x2 - std::cosh(x.x3) * std::cosh(x.x3)) < 1e-10);
    }
}

TEST_CASE("horizontal catenoid height is (1/z + z)/2")
{
    const WeierstrassData d = horizontal_catenoid_data();
    Rng rng(19);
    for (int k = 0; k < 100; ++k) {
        const cplx z{rng.uniform(0.05, 4), rng.uniform(-4, 4)};
        const Point3 x = evaluate_immersion(d, ComplexPath::segment(1.0, z));
        CHECK(x.x3 == Catch::Approx(0.5 * (1.0 / z + z).real()).margin(1e-10));
        CHECK(x.x3 > 0.0);
    }
    const Point3 b = evaluate_immersion(d, ComplexPath::segment(1.0, I));
    CHECK(std::abs(b.x3) < 1e-12);
}

TEST_CASE("the boundary of the upper half stays in the plane x3 = 0")
{
    const WeierstrassData d = horizontal_catenoid_data();
    for (double t : {-3.0, -1.0, 0.5, 2.0}) {
        for (double eps : {1.0, -1.0}) {
            const cplx end = eps * I * std::exp(t);
            const auto path = ComplexPath::polyline({1.0, eps * I, end});
            CHECK(std::abs(evaluate_immersion(d, path).x3) < 1e-11);
        }
    }
    const WeierstrassData v = vertical_catenoid_data();
    for (double th : {0.5, 2.0, -2.5})
        CHECK(std::abs(evaluate_immersion(v, ComplexPath::arc(0.0, 1.0, 0.0, th)).x3) < 1e-12);
}

TEST_CASE("immersion path guards")
{
    const WeierstrassData d = horizontal_catenoid_data();
    CHECK(kind_of([&] { evaluate_immersion(d, ComplexPath::segment(1.0, -1.0)); }) ==
          ErrorKind::PoleOnPath);
    CHECK(kind_of([&] { evaluate_immersion(d, ComplexPath::segment(2.0, 3.0)); }) ==
          ErrorKind::InvalidPath);
}

TEST_CASE("homotopic paths give the same point")
{
    const WeierstrassData d = horizontal_catenoid_data();
    Rng rng(23);
    for (int k = 0; k < 30; ++k) {
        const cplx z{rng.uniform(0.2, 3), rng.uniform(-3, 3)};
        const Point3 a = evaluate_immersion(d, ComplexPath::segment(1.0, z));
        const Point3 b = evaluate_immersion(
            d, ComplexPath::polyline({1.0, cplx(3.5, 3.5), cplx(3.5, -3.5), z}));
        CHECK(std::abs(a.x1 - b.x1) < 1e-9);
        CHECK(std::abs(a.x2 - b.x2) < 1e-9);
        CHECK(std::abs(a.x3 - b.x3) < 1e-9);
    }
}

TEST_CASE("reflect_data")
{
    const WeierstrassData std_cat = standard_catenoid_data();
    const WeierstrassData r = reflect_data(std_cat);
    Rng rng(29);
    for (int k = 0; k < 20; ++k) {
        const cplx z{rng.uniform(-2, 2), rng.uniform(-2, 2)};
        CHECK(rel(r.g(z), -1.0 / z) < 1e-15);
        CHECK(rel(r.dh(z), 1.0 / z) < 1e-15);
        CHECK(rel(r.inv_g_h(z), -1.0) < 1e-15);
        CHECK(rel(r.g_prime(z), 1.0 / (z * z)) < 1e-14);

        const WeierstrassData rr = reflect_data(r);
        CHECK(rel(rr.g(z), std_cat.g(z)) < 1e-15);
        CHECK(rel(rr.dh(z), std_cat.dh(z)) < 1e-15);
    }
    CHECK(r.punctures == std::vector<cplx>{0.0});

    WeierstrassData m;
    m.g = [](cplx z) { return (1.0 + z) / (1.0 - z); };
    m.dh = [](cplx z) { return z; };
    const cplx z = 2.0 * I;
    CHECK(rel(reflect_data(m).g(z), (z - 1.0) / (z + 1.0)) < 1e-15);
}

TEST_CASE("rotate_data")
{
    const WeierstrassData h = rotate_data(standard_catenoid_data(), {1.0}, {-1.0});
    Rng rng(31);
    for (int k = 0; k < 20; ++k) {
        const cplx z{rng.uniform(-2, 2), rng.uniform(-2, 2)};
        CHECK(rel(h.g(z), (1.0 + z) / (1.0 - z)) < 1e-14);
        CHECK(rel(h.dh(z), (1.0 - z * z) / (2.0 * z * z)) < 1e-13);
        CHECK(rel(h.g_prime(z), 2.0 / ((1.0 - z) * (1.0 - z))) < 1e-13);
        CHECK(rel(h.inv_g_h(z), h.dh(z) / h.g(z)) < 1e-12);
        CHECK(rel(h.g_h(z), h.dh(z) * h.g(z)) < 1e-12);
    }
    // the old Gauss zero z = 0 is a pole of the new dh and stays declared
    const auto sing = h.singular_points();
    CHECK(std::find(sing.begin(), sing.end(), cplx(0, 0)) != sing.end());
    CHECK(std::find(sing.begin(), sing.end(), cplx(1, 0)) != sing.end());
    WeierstrassData hb = h;
    hb.basepoint = 2.0;
    CHECK(kind_of([&] { evaluate_immersion(hb, ComplexPath::segment(2.0, cplx(0, 0))); }) ==
          ErrorKind::PoleOnPath);
}

TEST_CASE("rotating the vertical Scherk data gives the horizontal Scherk data")
{
    for (double a : {0.3, pi / 4, 1.2}) {
        const WeierstrassData v = scherk_vertical_data(a);
        const WeierstrassData h = rotate_data(v, {}, {-1.0});
        Rng rng(37);
        for (int k = 0; k < 20; ++k) {
            const cplx z{rng.uniform(-2, 2), rng.uniform(-2, 2)};
            const cplx z2 = z * z;
            const cplx dh = 2.0 * std::sin(2 * a) * (1.0 - z2) /
                            (z2 * z2 - 2.0 * std::cos(2 * a) * z2 + 1.0);
            CHECK(rel(h.g(z), (1.0 + z) / (1.0 - z)) < 1e-14);
            CHECK(rel(h.dh(z), dh) < 1e-12);
        }
    }
}

TEST_CASE("horizontal catenoid data is the rotated catenoid pulled back by z -> -z")
{
    const WeierstrassData r = rotate_data(standard_catenoid_data(), {}, {-1.0});
    const WeierstrassData h = horizontal_catenoid_data();
    Rng rng(41);
    for (int k = 0; k < 20; ++k) {
        const cplx z{rng.uniform(-2, 2), rng.uniform(-2, 2)};
        CHECK(rel(h.g(z), r.g(-z)) < 1e-14);
        CHECK(rel(h.dh(z), -r.dh(-z)) < 1e-13);
    }
}

TEST_CASE("metric_factor")
{
    DomainModel cat;
    cat.defining = [](cplx w) { return std::abs(w) - 1.0; };
    cat.grad_u = [](cplx w) {
        const double r2 = std::norm(w);
        return Vec2{w.real() / r2, w.imag() / r2};
    };
    cat.z0 = 1.0;
    const WeierstrassData d = domain_weierstrass_data(cat);
    CHECK(metric_factor(d, 2.0) == Catch::Approx(5.0 / 8.0).epsilon(1e-15));
    CHECK(metric_factor(d, std::polar(1.0, 0.7)) == Catch::Approx(1.0).epsilon(1e-15));
    CHECK(metric_factor(d, 1e6) == Catch::Approx(0.5).epsilon(1e-11));

    WeierstrassData z;
    z.g = [](cplx w) { return w; };
    z.dh = [](cplx w) { return w; };
    CHECK(kind_of([&] { metric_factor(z, 0.0); }) == ErrorKind::ZeroGaussMap);
}

TEST_CASE("metric factor of domain data lies in [1/2, 1]")
{
    for (const Family& f : {Family::vertical_catenoid(), Family::horizontal_catenoid(),
                            Family::scherk(pi / 4)}) {
        const FamilyModel fm = make_family(f);
        const WeierstrassData d = domain_weierstrass_data(fm.domain);
        Rng rng(43);
        int tested = 0;
        while (tested < 60) {
            const Window& w = fm.domain.window;
            const cplx p{rng.uniform(w.x0, w.x1), rng.uniform(w.y0, w.y1)};
            if (!(fm.domain.defining(p) > 1e-2))
                continue;
            const double lam = metric_factor(d, p);
            CHECK(lam >= 0.5);
            CHECK(lam <= 1.0);
            ++tested;
        }
    }
}

TEST_CASE("the immersion differentials are isotropic")
{
    std::vector<WeierstrassData> all{vertical_catenoid_data(), horizontal_catenoid_data(),
                                     scherk_data(0.3), scherk_data(1.2)};
    Rng rng(47);
    for (const WeierstrassData& d : all)
        for (int k = 0; k < 100; ++k) {
            const cplx z{rng.uniform(-3, 3), rng.uniform(-3, 3)};
            if (d.distance_to_singular(z) < 1e-2 || std::abs(z) < 1e-2)
                continue;
            const auto c = immersion_coefficients(d, z);
            const cplx q = c[0] * c[0] + c[1] * c[1] + c[2] * c[2];
            const double scale = std::norm(c[0]) + std::norm(c[1]) + std::norm(c[2]);
            CHECK(std::abs(q) <= 1e-12 * scale);
        }
}
