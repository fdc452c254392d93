#include <doctest.h>

#include <cmath>

#include "helicity/error.hpp"
#include "helicity/geometry.hpp"
#include "test_support.hpp"

using namespace helicity;
using helicity::test::Gen;
using helicity::test::rel_err;

namespace {

double masked_volume(const GridPtr& g) { return static_cast<double>(g->cell_count()) * g->cell_volume(); }

double area_sum(const SurfacePatchSet& s) {
    double a = 0.0;
    for (const auto& p : s) a += p.area;
    return a;
}

}  // namespace

TEST_CASE("containment of ball and torus") {
    const Domain ball = Domain::ball({0, 0, 0}, 1.0);
    const Domain torus = Domain::torus(Frame{}, 2.0, 1.0);
    CHECK(contains(ball, {0.5, 0, 0}));
    CHECK(contains(torus, {2, 0, 0}));
    CHECK_FALSE(contains(torus, {0, 0, 0}));
}

TEST_CASE("containment is invariant under a rigid pose") {
    Gen gen(11);
    for (int trial = 0; trial < 20; ++trial) {
        const Vec3 axis = gen.unit();
        const Vec3 shift = gen.vec(-3, 3);
        const double angle = gen.uniform(0, 2 * kPi);
        const Mat3 r = rotation_about(gen.unit(), angle);
        const Frame f0 = Frame::from_axis({0, 0, 0}, axis);
        Frame f1;
        f1.origin = shift;
        f1.e1 = r * f0.e1;
        f1.e2 = r * f0.e2;
        f1.e3 = r * f0.e3;
        const Domain d0 = Domain::torus(f0, 2.0, 0.7);
        const Domain d1 = Domain::torus(f1, 2.0, 0.7);
        for (int k = 0; k < 50; ++k) {
            const Vec3 p = gen.vec(-3.5, 3.5);
            CHECK(contains(d0, p) == contains(d1, shift + r * p));
        }
    }
}

TEST_CASE("masked volumes approach analytic volumes") {
    const GridPtr ball = build_grid(Domain::ball({0, 0, 0}, 1.0), 0.1);
    const double vb = masked_volume(ball);
    CHECK(vb >= 0.95 * 4.0 * kPi / 3.0);
    CHECK(vb <= 1.05 * 4.0 * kPi / 3.0);

    const double torus_exact = 2.0 * kPi * kPi * 2.0 * 1.0;
    CHECK(torus_exact == doctest::Approx(39.478).epsilon(1e-4));
    CHECK(rel_err(masked_volume(build_grid(Domain::torus(Frame{}, 2.0, 1.0), 0.1)), torus_exact) <= 0.05);
}

TEST_CASE("masked volume error shrinks under refinement") {
    const Domain d = Domain::torus(Frame::from_axis({0.1, 0.2, 0.3}, {1, 2, 3}), 1.0, 0.4);
    const double exact = d.volume();
    // Average over several h to suppress the oscillating lattice term.
    double coarse = 0.0, fine = 0.0;
    for (double h : {0.1, 0.11, 0.12, 0.13}) {
        coarse += rel_err(masked_volume(build_grid(d, h)), exact);
        fine += rel_err(masked_volume(build_grid(d, h / 2)), exact);
    }
    CHECK(fine < coarse);
}

TEST_CASE("degenerate grid") {
    CHECK_THROWS_AS(build_grid(Domain::ball({0, 0, 0}, 1.0), 10.0), Error);
    try {
        build_grid(Domain::ball({0, 0, 0}, 1.0), 10.0);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::DegenerateGrid);
    }
}

TEST_CASE("interior depth and stencil grid") {
    const GridPtr g = build_grid(Domain::ball({0, 0, 0}, 1.0), 0.1);
    const auto& s = g->stencil_grid();
    CHECK(s->cell_count() == g->count_with_depth(2));
    CHECK(s.get() == g->stencil_grid().get());
    for (std::size_t n = 0; n < g->cell_count(); ++n) {
        if (g->interior_depth(n) < 2) continue;
        const auto ijk = g->cell_ijk(n);
        for (int di = -2; di <= 2; ++di)
            for (int dj = -2; dj <= 2; ++dj)
                for (int dk = -2; dk <= 2; ++dk) REQUIRE(g->inside(ijk[0] + di, ijk[1] + dj, ijk[2] + dk));
    }
}

TEST_CASE("boundary samples reproduce areas") {
    const SurfacePatchSet sphere = boundary_samples(Domain::ball({0, 0, 0}, 1.0), 64, 64);
    CHECK(rel_err(area_sum(sphere), 4.0 * kPi) <= 1e-3);
    const SurfacePatchSet torus = boundary_samples(Domain::torus(Frame{}, 2.0, 1.0), 64, 64);
    CHECK(rel_err(area_sum(torus), 78.957) <= 1e-3);
    for (const auto* s : {&sphere, &torus})
        for (const auto& p : *s) REQUIRE(std::abs(norm(p.normal) - 1.0) <= 1e-12);
}

TEST_CASE("boundary normals point outward") {
    const Domain d = Domain::torus(Frame::from_axis({0, 0, 0}, {0, 1, 1}), 2.0, 1.0);
    for (const auto& p : boundary_samples(d, 16, 16)) {
        REQUIRE(contains(d, p.point - 1e-3 * p.normal));
        REQUIRE_FALSE(contains(d, p.point + 1e-3 * p.normal));
    }
}

TEST_CASE("core loop and cross section") {
    const AxisymTorus t{Frame{}, 2.0, 1.0};
    const PolylineCurve loop = core_loop(t, 256);
    CHECK(rel_err(loop.length(), 2.0 * kPi * 2.0) <= 1e-3);
    const CrossSection s = cross_section(t, 32, 32);
    CHECK(rel_err(area_sum(s.samples), kPi) <= 5e-3);
    const Vec3 tangent = normalized(loop.vertices[1] - loop.vertices[loop.vertices.size() - 1]);
    for (const auto& p : s.samples) {
        REQUIRE(contains(Domain::torus(t), p.point));
        REQUIRE(dot(p.normal, tangent) == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("polyline validation") {
    PolylineCurve c = circle_curve({0, 0, 0}, {0, 0, 1}, 1.0, 16);
    CHECK_NOTHROW(validate(c));
    c.vertices.push_back(c.vertices.front());
    CHECK_THROWS_AS(validate(c), Error);
}

TEST_CASE("overlapping union") {
    CHECK_THROWS_AS(Domain::union_of({Ball{{0, 0, 0}, 1.0}, Ball{{1.5, 0, 0}, 1.0}}), Error);
    CHECK_NOTHROW(Domain::union_of({Ball{{0, 0, 0}, 1.0}, Ball{{2.5, 0, 0}, 1.0}}));
}
