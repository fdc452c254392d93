#include <doctest.h>

#include <cmath>

#include "helicity/error.hpp"
#include "helicity/fields.hpp"
#include "test_support.hpp"

using namespace helicity;
using helicity::test::Gen;
using helicity::test::rel_err;

namespace {

AnalyticField unit_tube(double eps, double flux = 1.0, double twist = 0.0) {
    return make_tube_field(Frame{}, 1.0, eps, flux, twist);
}

// Independent flux oracle: polar midpoint rule on the meridian disk at
// azimuth 0 (the xz half-plane), normal +y.
double meridian_flux(const AnalyticField& f, double R, double a, int n) {
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
        const double r = (i + 0.5) * a / n;
        for (int j = 0; j < 4 * n; ++j) {
            const double th = (j + 0.5) * 2.0 * kPi / (4 * n);
            const Vec3 p{R + r * std::cos(th), 0.0, r * std::sin(th)};
            total += f(p).y * r * (a / n) * (2.0 * kPi / (4 * n));
        }
    }
    return total;
}

double max_norm_of(const std::vector<Vec3>& v) {
    double m = 0.0;
    for (const auto& x : v) m = std::max(m, norm(x));
    return m;
}

}  // namespace

TEST_CASE("tube field flux and support") {
    const AnalyticField t = unit_tube(0.2);
    CHECK(std::abs(meridian_flux(t, 1.0, 0.2, 200) - 1.0) <= 5e-3);
    CHECK(norm(t({1.0, 0.0, 0.25})) == 0.0);
    CHECK(norm(t({0.0, 0.0, 0.0})) == 0.0);
    // Azimuthal at the core: along +y at azimuth 0.
    const Vec3 core = t({1.0, 0.0, 0.0});
    CHECK(std::abs(core.x) <= 1e-15);
    CHECK(core.y > 0.0);
}

TEST_CASE("twisted tube keeps its flux") {
    const AnalyticField t = unit_tube(0.3, 0.7, 2.0);
    CHECK(std::abs(meridian_flux(t, 1.0, 0.3, 200) - 0.7) <= 0.7 * 5e-3);
}

TEST_CASE("zero-flux tube is identically zero") {
    const AnalyticField t = unit_tube(0.2, 0.0);
    Gen gen(3);
    for (int k = 0; k < 200; ++k) REQUIRE(norm(t(gen.vec(-1.3, 1.3))) == 0.0);
}

TEST_CASE("invalid tube radius") {
    CHECK_THROWS_AS(make_tube_field(Frame{}, 1.0, 1.0, 1.0), Error);
    CHECK_THROWS_AS(make_tube_field(Frame{}, 1.0, 0.0, 1.0), Error);
}

TEST_CASE("tube divergence at stencil cells") {
    const double eps = 0.2;
    const AnalyticField t = unit_tube(eps, 1.0);
    const SampledField f = sample(build_grid(Domain::torus(Frame{}, 1.0, eps), 0.01), t);
    CHECK(max_abs(divergence(f)) <= 5e-2 * max_norm(f) / eps);
}

TEST_CASE("harmonic torus field value") {
    const AnalyticField h = make_harmonic_torus_field(AxisymTorus{Frame{}, 2.0, 1.0});
    const Vec3 v = h({2, 0, 0});
    CHECK(norm(v) == doctest::Approx(1.0 / (4.0 * kPi)).epsilon(1e-12));
    CHECK(v.y == doctest::Approx(0.0795775).epsilon(1e-6));
    CHECK(std::abs(v.x) + std::abs(v.z) <= 1e-15);
}

TEST_CASE("harmonic torus field energy equals its flux") {
    const AnalyticField h = make_harmonic_torus_field(AxisymTorus{Frame{}, 2.0, 1.0});
    const SampledField f = sample(build_grid(Domain::torus(Frame{}, 2.0, 1.0), 0.05), h);
    CHECK(rel_err(field_energy(f), 2.0 - std::sqrt(3.0)) <= 0.01);
}

TEST_CASE("spheromak eigenvalue and boundary tangency") {
    const Spheromak s = make_spheromak(Ball{{0, 0, 0}, 1.0}, 1.0);
    CHECK(std::abs(s.xi - 4.493409) <= 1e-5);
    CHECK(std::abs(spherical_j1(first_j1_root())) <= 1e-12);
    Gen gen(5);
    for (int k = 0; k < 100; ++k) {
        const Vec3 n = gen.unit();
        REQUIRE(std::abs(dot(s.field(n), n)) <= 1e-10);
    }
}

TEST_CASE("spheromak curl on a 48-cell grid") {
    const Spheromak s = make_spheromak(Ball{{0, 0, 0}, 1.0}, 1.0);
    const SampledField f = sample(build_grid(Domain::ball({0, 0, 0}, 1.0), 2.0 / 48), s.field);
    const SampledField c = curl(f);
    const SampledField xf = s.xi * restrict_to(f, c.grid);
    CHECK(l2_norm(axpby(1.0, c, -1.0, xf)) / l2_norm(xf) <= 0.02);
}

TEST_CASE("constant and linear fields under the stencil") {
    const GridPtr g = build_grid(Domain::ball({0.1, 0, 0}, 1.0), 0.1);
    const SampledField c = sample(g, make_constant_field({1.5, -2.0, 0.25}));
    CHECK(max_norm(curl(c)) == 0.0);
    CHECK(max_abs(divergence(c)) == 0.0);

    const SampledField rot = sample(g, rule_of([](const Vec3& p) { return Vec3{-p.y, p.x, 0.0}; }));
    const SampledField cr = curl(rot);
    for (const auto& v : cr.values) REQUIRE(norm(v - Vec3{0, 0, 2}) <= 1e-10);
}

TEST_CASE("harmonic field curl-free to stencil order") {
    const AxisymTorus t{Frame{}, 2.0, 1.0};
    const AnalyticField h = make_harmonic_torus_field(t);
    const SampledField f = sample(build_grid(Domain::torus(t), 0.1), h);
    CHECK(max_norm(curl(f)) <= 0.02 * max_norm(f) / t.minor_radius);
}

TEST_CASE("stencil residuals shrink under refinement") {
    const AxisymTorus t{Frame::from_axis({0, 0, 0}, {1, 1, 0}), 2.0, 1.0};
    const AnalyticField h = make_harmonic_torus_field(t);
    // Compare on the cells of both grids that lie in a common interior torus.
    const Domain inner = Domain::torus(t.frame, t.major_radius, 0.5 * t.minor_radius);
    auto worst = [&](const auto& f, auto&& value) {
        double m = 0.0;
        const auto centers = f.grid->centers();
        for (std::size_t k = 0; k < centers.size(); ++k)
            if (contains(inner, centers[k])) m = std::max(m, value(f.values[k]));
        return m;
    };
    auto curl_res = [&](double hh) {
        return worst(curl(sample(build_grid(Domain::torus(t), hh), h)), [](const Vec3& v) { return norm(v); });
    };
    auto div_res = [&](double hh) {
        return worst(divergence(sample(build_grid(Domain::torus(t), hh), h)), [](double v) { return std::abs(v); });
    };
    CHECK(curl_res(0.1) >= 3.0 * curl_res(0.05));
    CHECK(div_res(0.1) >= 3.0 * div_res(0.05));

    const Spheromak s = make_spheromak(Ball{{0, 0, 0}, 1.0}, 1.0);
    auto beltrami = [&](double hh) {
        const SampledField f = sample(build_grid(Domain::ball({0, 0, 0}, 1.0), hh), s.field);
        const SampledField c = curl(f);
        return l2_norm(axpby(1.0, c, -s.xi, restrict_to(f, c.grid)));
    };
    CHECK(beltrami(0.1) >= 3.0 * beltrami(0.05));
}

TEST_CASE("catalog fields are tangent to their domain boundary") {
    const AxisymTorus t{Frame::from_axis({0.3, -0.2, 0.1}, {0, 1, 1}), 1.5, 0.5};
    const AnalyticField harmonic = make_harmonic_torus_field(t);
    const AnalyticField tube = make_tube_field(t.frame, 1.5, 0.5, 1.0, 1.0);
    const Spheromak s = make_spheromak(Ball{{0, 0, 1}, 2.0}, 0.7);
    auto check = [](const AnalyticField& f, const SurfacePatchSet& b) {
        std::vector<Vec3> vals;
        for (const auto& p : b) vals.push_back(f(p.point));
        const double scale = std::max(max_norm_of(vals), 1e-300);
        for (std::size_t k = 0; k < b.size(); ++k) REQUIRE(std::abs(dot(vals[k], b[k].normal)) <= 1e-10 * scale);
    };
    check(harmonic, boundary_samples(Domain::torus(t), 24, 24));
    check(tube, boundary_samples(Domain::torus(t), 24, 24));
    check(s.field, boundary_samples(Domain::ball({0, 0, 1}, 2.0), 24, 24));
}

TEST_CASE("sampling, curl, divergence and inner product are linear") {
    Gen gen(17);
    const GridPtr g = build_grid(Domain::ball({0, 0, 0}, 1.0), 0.125);
    const SampledField f = sample(g, make_spheromak(Ball{{0, 0, 0}, 1.0}, 1.0).field);
    const SampledField k = sample(g, make_gradient_field({0.2, 0.1, -0.3}, Mat3::scaled(0.5), 0.4));
    for (int trial = 0; trial < 10; ++trial) {
        const double a = gen.uniform(-2, 2), b = gen.uniform(-2, 2);
        const SampledField comb = axpby(a, f, b, k);
        const SampledField cc = curl(comb);
        const SampledField lin = axpby(a, curl(f), b, curl(k));
        for (std::size_t n = 0; n < cc.size(); ++n) REQUIRE(norm(cc[n] - lin[n]) <= 1e-10);
        const ScalarSamples dc = divergence(comb), d1 = divergence(f), d2 = divergence(k);
        for (std::size_t n = 0; n < dc.values.size(); ++n)
            REQUIRE(std::abs(dc.values[n] - (a * d1.values[n] + b * d2.values[n])) <= 1e-10);
        const double lhs = l2_inner(comb, f);
        const double rhs = a * l2_inner(f, f) + b * l2_inner(k, f);
        REQUIRE(std::abs(lhs - rhs) <= 1e-12 * (std::abs(a * l2_inner(f, f)) + std::abs(b * l2_inner(k, f))));
        const AnalyticField fa = a * make_spheromak(Ball{{0, 0, 0}, 1.0}, 1.0).field;
        const SampledField sa = sample(g, fa);
        for (std::size_t n = 0; n < sa.size(); ++n) REQUIRE(norm(sa[n] - a * f[n]) <= 1e-14 * (1 + norm(sa[n])));
    }
}

TEST_CASE("inner product basics") {
    const GridPtr g = build_grid(Domain::torus(Frame{}, 2.0, 1.0), 0.2);
    const SampledField ex = sample(g, make_constant_field({1, 0, 0}));
    const SampledField ey = sample(g, make_constant_field({0, 1, 0}));
    CHECK(l2_inner(ex, ey) == 0.0);
    const SampledField h = sample(g, make_harmonic_torus_field(AxisymTorus{Frame{}, 2.0, 1.0}));
    CHECK(l2_inner(2.0 * h, h) == doctest::Approx(2.0 * field_energy(h)).epsilon(1e-14));
    const GridPtr other = build_grid(Domain::torus(Frame{}, 2.0, 1.0), 0.2);
    CHECK_THROWS_AS(l2_inner(ex, sample(other, make_constant_field({1, 0, 0}))), Error);
}

TEST_CASE("density field") {
    CHECK(DensityField::uniform(2.0)({1, 2, 3}) == 2.0);
    DensityField bad{[](const Vec3&) { return -1.0; }};
    CHECK_THROWS_AS(bad({0, 0, 0}), Error);
}
