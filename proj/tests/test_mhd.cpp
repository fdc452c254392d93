#include <doctest.h>

#include <cmath>

#include "helicity/error.hpp"
#include "helicity/mhd.hpp"
#include "test_support.hpp"

using namespace helicity;
using helicity::test::Gen;
using helicity::test::rel_err;

namespace {

TubeField tube_of(const Vec3& center, const Vec3& axis, double eps, double flux) {
    return std::get<TubeField>(make_tube_field(Frame::from_axis(center, axis), 1.0, eps, flux).variant());
}

struct BallTube {
    Domain domain = Domain::ball({0, 0, 0}, 1.1);
    GridPtr grid = build_grid(domain, 0.05);
    AnalyticField b = make_tube_field(Frame{}, 0.6, 0.45, 1.0, 0.3);
};

const BallTube& ball_tube() {
    static const BallTube c;
    return c;
}

}  // namespace

TEST_CASE("magnetic Biot-Savart helicity") {
    const Spheromak s = make_spheromak(Ball{{0, 0, 0}, 1.0}, 1.0);
    const SampledField b = sample(build_grid(Domain::ball({0, 0, 0}, 1.0), 0.1), s.field);
    CHECK(rel_err(magnetic_bs_helicity(b), field_energy(b) / s.xi) <= 0.02);
    CHECK(magnetic_bs_helicity(0.0 * b) == 0.0);
}

TEST_CASE("magnetic helicity is frozen under the twist") {
    const Domain d = Domain::torus(Frame{}, 1.0, 0.6);
    const SweepResult r = conservation_sweep(FlowFamily(DifferentialTwist{{0, 0, 0}, {1, 0, 0}, 1.0, 1.0}),
                                             make_tube_field(Frame{}, 1.0, 0.4, 1.0, 1.0), d, build_grid(d, 0.1),
                                             {0.0, 0.5, 1.0, 1.5});
    double lo = 1e300, hi = -1e300;
    for (const auto& row : r.rows) {
        lo = std::min(lo, row.H_bs);
        hi = std::max(hi, row.H_bs);
    }
    CHECK((hi - lo) / std::abs(hi) <= 0.01);
}

TEST_CASE("potential helicity on a ball") {
    const BallTube& c = ball_tube();
    const MagneticState st = potential_state(c.b, c.grid);
    CHECK(curl_mismatch(st.A, st.B) <= 5e-2);
    const double hm = potential_helicity(st);
    CHECK(rel_err(hm, magnetic_bs_helicity(st.B)) <= 0.03);

    // Single-valued gauge shift A + grad(chi).
    const SampledField grad = sample(c.grid, make_gradient_field({0.4, -0.3, 0.2}, Mat3::scaled(0.7), 0.5));
    const MagneticState shifted = make_magnetic_state(axpby(1.0, st.A, 1.0, grad), st.B);
    CHECK(rel_err(potential_helicity(shifted), hm) <= 0.01);
}

TEST_CASE("zero magnetic field") {
    const GridPtr g = build_grid(Domain::ball({0, 0, 0}, 1.0), 0.2);
    const SampledField z = sample(g, make_constant_field({0, 0, 0}));
    const MagneticState st = make_magnetic_state(z, z);
    CHECK(potential_helicity(st) == 0.0);
}

TEST_CASE("curl mismatch gate") {
    const BallTube& c = ball_tube();
    const SampledField b = sample(c.grid, c.b);
    try {
        make_magnetic_state(b, b);
        FAIL("expected CurlMismatch");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::CurlMismatch);
        CHECK(e.is_numerical_gate());
    }
}

TEST_CASE("potential helicity rate formula") {
    const AxisymTorus t{Frame{}, 1.0, 0.5};
    const HKBasis basis = build_hk_basis({t});
    const GridPtr g = build_grid(Domain::torus(t), 0.05);
    const FieldRule b = rule_of(make_tube_field(Frame::from_axis({0.05, 0, 0}, {0, 0, 1}), 1.0, 0.3, 1.0, 1.0));
    const HmRate zero = hm_rate(GaugeChoice{}, b, basis, g);
    CHECK(zero.flux_circulation == 0.0);
    CHECK(zero.l2_form == 0.0);
    const HmRate r = hm_rate(GaugeChoice::harmonic({0.4}), b, basis, g);
    CHECK(std::abs(r.flux_circulation - 0.4) <= 0.02 * 0.4);
    CHECK(std::abs(r.l2_form - 0.4) <= 0.02 * 0.4);
    CHECK(std::abs(r.l2_form - r.flux_circulation) <= 0.02 * 0.4);
    CHECK_THROWS_AS(hm_rate(GaugeChoice::harmonic({0.4, 1.0}), b, basis, g), Error);
}

TEST_CASE("null-space gauge on two tori") {
    const AxisymTorus t1{Frame::from_axis({-2.0, 0, 0}, {0, 0, 1}), 1.0, 0.5};
    const AxisymTorus t2{Frame::from_axis({2.2, 0, 0}, {1, 0, 1}), 1.2, 0.6};
    const HKBasis basis = build_hk_basis({t1, t2});
    const GridPtr g = build_grid(Domain::union_of({Primitive{t1}, Primitive{t2}}), 0.06);
    const FieldRule b = rule_of(make_tube_field(t1.frame, 1.0, 0.3, 1.0, 1.0) +
                                make_tube_field(t2.frame, 1.2, 0.4, 1.5, 0.0));
    const HmRate ref = hm_rate(GaugeChoice::harmonic({0.4}), rule_of(make_tube_field(t1.frame, 1.0, 0.3, 1.0, 1.0)),
                               build_hk_basis({t1}), build_grid(Domain::torus(t1), 0.06));
    const double phi1 = flux(b, basis.sections[0]), phi2 = flux(b, basis.sections[1]);
    const HmRate null = hm_rate(GaugeChoice::harmonic({0.4, -0.4 * phi1 / phi2}), b, basis, g);
    CHECK(std::abs(null.flux_circulation) <= 0.02 * std::abs(ref.flux_circulation));
    CHECK(std::abs(null.l2_form) <= 0.02 * std::abs(ref.flux_circulation));
}

TEST_CASE("rate check needs a domain-preserving flow") {
    const AxisymTorus t{Frame{}, 1.0, 0.5};
    const HKBasis basis = build_hk_basis({t});
    const GridPtr g = build_grid(Domain::torus(t), 0.05);
    const SampledField z = sample(g, make_constant_field({0, 0, 0}));
    const MagneticState st = make_magnetic_state(z, z, &basis);
    const GaugeChoice pi = GaugeChoice::harmonic({0.4});
    auto kind_of = [&](const FlowFamily& f) {
        try {
            hm_rate_fd_check(st, f, pi, 0.1);
        } catch (const Error& e) {
            return e.kind();
        }
        return ErrorKind::InvalidArgument;
    };
    CHECK(kind_of(FlowFamily(UniformPulsation{{0, 0, 0}, 0.3, 1.0})) == ErrorKind::NonDomainPreservingFlow);
    CHECK(kind_of(FlowFamily(RigidRotation{{0.2, 0, 0}, {0, 0, 1}, 1.0})) == ErrorKind::NonDomainPreservingFlow);
    CHECK(kind_of(FlowFamily(RigidRotation{{0, 0, 0}, {1, 0, 0}, 1.0})) == ErrorKind::NonDomainPreservingFlow);
    const HmRateCheck ok = hm_rate_fd_check(st, FlowFamily(RigidRotation{{0, 0, 0}, {0, 0, -1}, 1.0}), pi, 0.1);
    CHECK(ok.rate_formula == 0.0);
    CHECK(std::abs(ok.rate_fd) <= 1e-12);
}

TEST_CASE("thin-tube cross helicity") {
    const TubeField w = tube_of({0, 0, 0}, {0, 0, 1}, 0.3, 1.0);
    const TubeField b = tube_of({1, 0, 0}, {0, 1, 0}, 0.3, 1.0);
    const ThinTubeReport r = thin_tube_check(w, b, 0.075);
    CHECK(std::abs(std::abs(r.link) - 1.0) <= 1e-3);
    CHECK(std::abs(r.cross_helicity - r.expected) <= 0.04);
    CHECK(std::abs(r.mutual_helicity - r.expected) <= 0.04);

    const ThinTubeReport r3 = thin_tube_check(w, tube_of({1, 0, 0}, {0, 1, 0}, 0.3, 3.0), 0.075);
    CHECK(rel_err(r3.cross_helicity, 3.0 * r.cross_helicity) <= 1e-12);

    const ThinTubeReport apart = thin_tube_check(w, tube_of({4, 0, 0}, {0, 1, 0}, 0.3, 1.0), 0.075);
    CHECK(std::abs(apart.cross_helicity) <= 1e-3);
    CHECK(apart.expected == 0.0);

    CHECK_THROWS_AS(thin_tube_check(w, tube_of({0.2, 0, 0}, {0, 0, 1}, 0.3, 1.0), 0.075), Error);
}

TEST_CASE("cross helicity and the mixed difference") {
    Gen gen(21);
    const BallTube& c = ball_tube();
    const MagneticState st = potential_state(c.b, c.grid);
    const SampledField u = sample(c.grid, make_spheromak(Ball{{0, 0, 0}, 1.1}, 1.0).field);
    const double hc = cross_helicity(u, st.B);
    const double hm = potential_helicity(st);
    CHECK(helicity_difference_mhd(u, st.A, st.B, 0.0) == hc);
    CHECK(std::abs(helicity_difference_mhd(2.0 * st.A, st.A, st.B, 2.0)) <= 1e-14 * std::abs(hm));
    for (int k = 0; k < 5; ++k) {
        const double a = gen.uniform(-3, 3);
        const double want = hc - a * hm;
        CHECK(std::abs(helicity_difference_mhd(u, st.A, st.B, a) - want) <= 1e-10 * (std::abs(hc) + std::abs(a * hm)));
    }
}
