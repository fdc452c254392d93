#include "helicity/mhd.hpp"

#include <cmath>
#include <sstream>

#include "helicity/error.hpp"

namespace helicity {

AnalyticField gauge_field(const GaugeChoice& g, const HKBasis& basis) {
    if (g.kappa.empty()) return AnalyticField::zero();
    if (g.kappa.size() != basis.size())
        throw Error(ErrorKind::InvalidArgument, "gauge needs one circulation per basis torus");
    return linear_combination(g.kappa, basis.l_fields);
}

double curl_mismatch(const SampledField& A, const SampledField& B) {
    if (!same_geometry(*A.grid, *B.grid) || A.grid->cell_count() != B.grid->cell_count())
        throw Error(ErrorKind::GridMismatch, "A and B must share a grid");
    const SampledField c = curl(A);
    const SampledField b = restrict_to(B, c.grid);
    const double nb = l2_norm(b);
    const double diff = l2_norm(axpby(1.0, c, -1.0, b));
    return nb > 0 ? diff / nb : diff;
}

MagneticState make_magnetic_state(SampledField A, SampledField B, const HKBasis* basis, FieldRule b_rule,
                                  double gate) {
    if (A.grid != B.grid) throw Error(ErrorKind::GridMismatch, "A and B must share a grid");
    const double m = curl_mismatch(A, B);
    if (m > gate) {
        std::ostringstream os;
        os << "||curl A - B|| / ||B|| = " << m << " exceeds " << gate;
        throw Error(ErrorKind::CurlMismatch, os.str());
    }
    return {std::move(A), std::move(B), basis, std::move(b_rule)};
}

MagneticState potential_state(const AnalyticField& B, const GridPtr& grid, const HKBasis* basis,
                              const BSOptions& opts) {
    SampledField b0 = sample(grid, B);
    SampledField A = bs_field(b0, grid, opts);
    return make_magnetic_state(std::move(A), std::move(b0), basis, rule_of(B));
}

double magnetic_bs_helicity(const SampledField& B, const BSOptions& opts) {
    if (max_norm(B) == 0.0) return 0.0;
    return helicity_bs(B, opts).value;
}

double potential_helicity(const MagneticState& s) { return l2_inner(s.A, s.B); }

namespace {

std::vector<double> section_fluxes(const FieldRule& b_rule, const SampledField& B, const HKBasis& basis) {
    std::vector<double> phi;
    for (std::size_t i = 0; i < basis.size(); ++i) {
        if (b_rule)
            phi.push_back(flux(b_rule, basis.sections[i]));
        else
            phi.push_back(l2_inner(sample(B.grid, basis.l_fields[i]), B));
    }
    return phi;
}

double dot_kappa(const std::vector<double>& phi, const std::vector<double>& kappa) {
    double s = 0.0;
    for (std::size_t i = 0; i < kappa.size(); ++i) s += phi[i] * kappa[i];
    return s;
}

bool preserves_tori(const Vec3& center, const Vec3& axis, const HKBasis& basis) {
    for (const auto& t : basis.tori) {
        const double scale = t.major_radius + t.minor_radius;
        if (norm(cross(axis, t.frame.e3)) > 1e-9) return false;
        if (norm(cross(t.frame.origin - center, axis)) > 1e-9 * scale) return false;
    }
    return true;
}

double curl_helicity(const SampledField& X) {
    const SampledField c = curl(X);
    return l2_inner(restrict_to(X, c.grid), c);
}

}  // namespace

HmRate hm_rate(const GaugeChoice& pi, const FieldRule& b_rule, const HKBasis& basis, const GridPtr& grid) {
    if (!b_rule) throw Error(ErrorKind::InvalidArgument, "hm_rate needs a field rule for B");
    HmRate r;
    if (pi.kappa.empty()) {
        r.fluxes.assign(basis.size(), 0.0);
        return r;
    }
    const AnalyticField p = gauge_field(pi, basis);
    r.fluxes = section_fluxes(b_rule, SampledField{}, basis);
    r.flux_circulation = dot_kappa(r.fluxes, pi.kappa);
    r.l2_form = l2_inner(sample(grid, p), sample(grid, b_rule));
    return r;
}

HmRateCheck hm_rate_fd_check(const MagneticState& s, const FlowFamily& flow, const GaugeChoice& pi, double dt) {
    if (!s.basis) throw Error(ErrorKind::InvalidArgument, "the rate check needs the state's HK basis");
    if (!(dt > 0)) throw Error(ErrorKind::InvalidArgument, "time step must be positive");
    const bool ok = std::visit(
        [&](const auto& f) {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, RigidRotation> || std::is_same_v<T, DifferentialTwist>)
                return preserves_tori(f.center, f.axis, *s.basis);
            else
                return false;
        },
        flow.variant());
    if (!ok)
        throw Error(ErrorKind::NonDomainPreservingFlow,
                    "only rotations or twists about the common torus axis map the domain onto itself");

    const SampledField bh = curl(s.A);
    const GridPtr& g1 = bh.grid;
    const SampledField a1 = restrict_to(s.A, g1);
    const auto pts = g1->centers();
    const auto u = velocity_rule(flow, 0.0)(pts);
    const auto p = rule_of(gauge_field(pi, *s.basis))(pts);
    const double h = g1->spacing();

    SampledField a2{g1, std::vector<Vec3>(pts.size())};
    for (std::size_t n = 0; n < pts.size(); ++n) {
        Vec3 rate = cross(u[n], bh.values[n]) + p[n];
        if (pi.phi) {
            Vec3 grad;
            for (int k = 0; k < 3; ++k) {
                Vec3 e{};
                e[k] = h;
                grad[k] = (pi.phi(pts[n] + e) - pi.phi(pts[n] - e)) / (2 * h);
            }
            rate += grad;
        }
        a2.values[n] = a1.values[n] + rate * dt;
    }

    HmRateCheck r;
    r.dt = dt;
    r.hm = curl_helicity(a1);
    r.rate_fd = (curl_helicity(a2) - r.hm) / dt;
    r.rate_formula = pi.kappa.empty() ? 0.0 : dot_kappa(section_fluxes(s.b_rule, s.B, *s.basis), pi.kappa);
    r.drift = r.rate_fd - r.rate_formula;
    return r;
}

double cross_helicity(const SampledField& u, const SampledField& B) { return l2_inner(u, B); }

ThinTubeReport thin_tube_check(const TubeField& omega_tube, const TubeField& b_tube, double h,
                               const BSOptions& opts, int loop_segments) {
    const Domain dw = Domain::torus(tube_torus(omega_tube));
    const Domain db = Domain::torus(tube_torus(b_tube));
    const SampledField w = sample(build_grid(dw, h), AnalyticField(omega_tube));
    const SampledField b = sample(build_grid(db, h), AnalyticField(b_tube));
    ThinTubeReport r;
    r.cross_helicity = mutual_helicity(db, b, dw, w, opts);
    r.mutual_helicity = mutual_helicity(dw, w, db, b, opts);
    r.link = linking_number(core_loop(tube_torus(omega_tube), loop_segments),
                            core_loop(tube_torus(b_tube), loop_segments), opts.backend);
    r.expected = std::round(r.link) * omega_tube.flux * b_tube.flux;
    return r;
}

double helicity_difference_mhd(const SampledField& u, const SampledField& A, const SampledField& B, double alpha) {
    return l2_inner(axpby(1.0, u, -alpha, A), B);
}

}  // namespace helicity
