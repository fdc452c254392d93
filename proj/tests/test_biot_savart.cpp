#include <doctest.h>

#include <cmath>
#include <cstring>

#include "helicity/biot_savart.hpp"
#include "helicity/error.hpp"
#include "test_support.hpp"

using namespace helicity;
using helicity::test::Gen;
using helicity::test::rel_err;

namespace {

const AnalyticField& thin_tube() {
    static const AnalyticField t = make_tube_field(Frame{}, 1.0, 0.2, 1.0);
    return t;
}

const SampledField& thin_tube_samples() {
    static const SampledField s = sample(build_grid(Domain::torus(Frame{}, 1.0, 0.2), 0.05), thin_tube());
    return s;
}

// On-axis field of the tube as a superposition of circular current loops:
// each meridian-disk element carries current dI = F_phi dA and a loop of
// radius rho at height z contributes dI rho^2 / (2 (rho^2 + z^2)^(3/2)).
double on_axis_oracle(const AnalyticField& f, double R, double a, int n) {
    double bz = 0.0;
    for (int i = 0; i < n; ++i) {
        const double r = (i + 0.5) * a / n;
        for (int j = 0; j < 4 * n; ++j) {
            const double th = (j + 0.5) * 2.0 * kPi / (4 * n);
            const double rho = R + r * std::cos(th), z = r * std::sin(th);
            const double di = f({rho, 0.0, z}).y * r * (a / n) * (2.0 * kPi / (4 * n));
            bz += di * rho * rho / (2.0 * std::pow(rho * rho + z * z, 1.5));
        }
    }
    return bz;
}

}  // namespace

TEST_CASE("zero source gives zero output") {
    const GridPtr g = build_grid(Domain::ball({0, 0, 0}, 1.0), 0.25);
    const SampledField zero = sample(g, make_constant_field({0, 0, 0}));
    const std::vector<Vec3> pts{{0, 0, 0}, {2, 1, 0}};
    for (const auto& v : bs_field(zero, pts)) CHECK(norm(v) == 0.0);
    for (const auto& v : vector_potential(zero, pts)) CHECK(norm(v) == 0.0);
    CHECK(verify_curl_inverse(zero).residual == 0.0);
}

TEST_CASE("on-axis field of a tube") {
    const double oracle = on_axis_oracle(thin_tube(), 1.0, 0.2, 200);
    CHECK(std::abs(oracle - 0.5) <= 0.5 * 0.01);
    const std::vector<Vec3> center{{0, 0, 0}};
    const Vec3 b = bs_field(thin_tube_samples(), center)[0];
    CHECK(std::abs(b.x) <= 1e-12);
    CHECK(std::abs(b.y) <= 1e-12);
    CHECK(rel_err(b.z, oracle) <= 0.03);
    CHECK(rel_err(b.z, 0.5) <= 0.03);
}

TEST_CASE("kernel is rotation equivariant") {
    Gen gen(41);
    const SampledField& src = thin_tube_samples();
    const kernels::SourceSet s = make_sources(src);
    std::vector<Vec3> targets;
    for (int k = 0; k < 20; ++k) targets.push_back(gen.vec(-1.5, 1.5));
    std::vector<Vec3> base(targets.size());
    kernels::biot_savart(s, kernels::PointSet(targets), 0.0, base);
    for (int trial = 0; trial < 3; ++trial) {
        const Mat3 r = rotation_about(gen.unit(), gen.uniform(0, 2 * kPi));
        const Vec3 shift = gen.vec(-1, 1);
        kernels::SourceSet rs;
        for (std::size_t i = 0; i < s.size(); ++i)
            rs.push_back(shift + r * s.pos[i], r * Vec3{s.sx[i], s.sy[i], s.sz[i]});
        std::vector<Vec3> rt;
        for (const auto& t : targets) rt.push_back(shift + r * t);
        std::vector<Vec3> out(rt.size());
        kernels::biot_savart(rs, kernels::PointSet(rt), 0.0, out);
        for (std::size_t k = 0; k < out.size(); ++k) REQUIRE(norm(out[k] - r * base[k]) <= 1e-12 * (1 + norm(base[k])));
    }
}

TEST_CASE("curl of the vector potential is the Biot-Savart field") {
    const AnalyticField t = make_spheromak(Ball{{0, 0, 0}, 1.0}, 1.0).field;
    const GridPtr g = build_grid(Domain::ball({0, 0, 0}, 1.0), 0.07);
    const SampledField src = sample(g, t);
    const SampledField p = vector_potential(src, g);
    const SampledField cp = curl(p);
    const SampledField b = bs_field(src, cp.grid);
    CHECK(l2_norm(axpby(1.0, cp, -1.0, b)) / l2_norm(b) <= 0.03);
}

TEST_CASE("Biot-Savart and potential are linear in the source") {
    Gen gen(8);
    const GridPtr g = build_grid(Domain::torus(Frame{}, 1.0, 0.3), 0.1);
    const SampledField f1 = sample(g, make_tube_field(Frame{}, 1.0, 0.3, 1.0, 1.0));
    const SampledField f2 = sample(g, make_harmonic_torus_field(AxisymTorus{Frame{}, 1.0, 0.3}));
    const std::vector<Vec3> pts{{0, 0, 0}, {1.0, 0.1, 0.05}, {0.3, -2.0, 0.7}};
    for (int trial = 0; trial < 4; ++trial) {
        const double a = gen.uniform(-3, 3), b = gen.uniform(-3, 3);
        const SampledField comb = axpby(a, f1, b, f2);
        const auto bc = bs_field(comb, pts), b1 = bs_field(f1, pts), b2 = bs_field(f2, pts);
        const auto pc = vector_potential(comb, pts), p1 = vector_potential(f1, pts), p2 = vector_potential(f2, pts);
        for (std::size_t k = 0; k < pts.size(); ++k) {
            const Vec3 lb = a * b1[k] + b * b2[k], lp = a * p1[k] + b * p2[k];
            REQUIRE(norm(bc[k] - lb) <= 1e-12 * (1 + norm(lb)));
            REQUIRE(norm(pc[k] - lp) <= 1e-12 * (1 + norm(lp)));
        }
    }
    const auto p1 = vector_potential(f1, pts);
    const auto p3 = vector_potential(3.0 * f1, pts);
    for (std::size_t k = 0; k < pts.size(); ++k) CHECK(norm(p3[k] - 3.0 * p1[k]) <= 1e-13 * (1 + norm(p3[k])));
}

TEST_CASE("Biot-Savart output is solenoidal to stencil order") {
    const SampledField b = bs_field(thin_tube_samples());
    const SampledField src = sample(build_grid(Domain::ball({0, 0, 0}, 1.0), 0.1),
                                    make_spheromak(Ball{{0, 0, 0}, 1.0}, 1.0).field);
    CHECK(solenoidal_residual(b) <= 0.05);
    CHECK(solenoidal_residual(bs_field(src)) <= 0.05);
}

TEST_CASE("curl-inverse residual decreases under refinement") {
    const AnalyticField s = make_spheromak(Ball{{0, 0, 0}, 1.0}, 1.0).field;
    const Domain d = Domain::ball({0, 0, 0}, 1.0);
    const double coarse = verify_curl_inverse(sample(build_grid(d, 0.2), s)).residual;
    const double fine = verify_curl_inverse(sample(build_grid(d, 0.1), s)).residual;
    CHECK(fine < coarse);
    CHECK(fine <= 0.05);
}

TEST_CASE("Ampere loops around the tube") {
    const FieldRule b = bs_rule(thin_tube_samples());
    const PolylineCurve around_core = circle_curve({1, 0, 0}, {0, 1, 0}, 0.35, 128);
    const PolylineCurve in_hole = circle_curve({0, 0, 0}, {0, 0, 1}, 0.5, 128);
    const PolylineCurve far = circle_curve({4, 0, 0}, {0, 1, 0}, 0.5, 128);
    CHECK(std::abs(std::abs(loop_integral(b, around_core)) - 1.0) <= 0.02);
    // Coplanar with the core circle and inside the hole: links nothing.
    CHECK(std::abs(loop_integral(b, in_hole)) <= 1e-3);
    CHECK(std::abs(loop_integral(b, far)) <= 1e-3);
}

TEST_CASE("loop integral of a constant field vanishes") {
    Gen gen(12);
    PolylineCurve c;
    for (int k = 0; k < 9; ++k) c.vertices.push_back(gen.vec(-2, 2));
    CHECK(std::abs(loop_integral(rule_of(make_constant_field({0.3, -1.2, 2.0})), c)) <= 1e-12);
    c.closed = false;
    CHECK_THROWS_AS(loop_integral(rule_of(make_constant_field({1, 0, 0})), c), Error);
}

TEST_CASE("grid Biot-Savart is backend independent") {
    BSOptions serial;
    serial.backend = kernels::Backend::Serial;
    BSOptions omp;
    omp.chunk_size = 33;
    const SampledField a = bs_field(thin_tube_samples(), serial);
    const SampledField b = bs_field(thin_tube_samples(), omp);
    CHECK(std::memcmp(a.values.data(), b.values.data(), a.size() * sizeof(Vec3)) == 0);
}
