#include "helicity/transport.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "helicity/error.hpp"
#include "helicity/functionals.hpp"
#include "parallel.hpp"

namespace helicity {

namespace {

constexpr double kTimeStep = 1e-4;
constexpr double kRadialJacobianStep = 1e-5;
constexpr double kDomainSlack = 1e-9;
constexpr double kCurlStepFraction = 0.125;

Vec3 unit_axis(const Vec3& a) {
    const double n = norm(a);
    if (!(n > 0) || !std::isfinite(n)) throw Error(ErrorKind::InvalidArgument, "flow axis must be nonzero");
    return a / n;
}

void require(bool ok, const char* what) {
    if (!ok) throw Error(ErrorKind::InvalidArgument, what);
}

Mat3 outer(const Vec3& a, const Vec3& b) {
    Mat3 m;
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) m(r, c) = a[r] * b[c];
    return m;
}

Mat3 add(const Mat3& a, const Mat3& b) {
    Mat3 m;
    for (int k = 0; k < 9; ++k) m.a[k] = a.a[k] + b.a[k];
    return m;
}

double radial_factor(const RadialCompress& f, double t, double r) {
    return 1.0 + f.amplitude * std::sin(f.frequency * t) * std::exp(-r * r / (f.width * f.width));
}

Vec3 radial_forward(const RadialCompress& f, double t, const Vec3& x) {
    const Vec3 d = x - f.center;
    return f.center + d * radial_factor(f, t, norm(d));
}

FlowSample eval_single(const RigidRotation& f, double t, const Vec3& x) {
    const Mat3 R = rotation_about(f.axis, f.rate * t);
    FlowSample s;
    s.y = f.center + R * (x - f.center);
    s.jacobian = R;
    s.det = 1.0;
    s.velocity = cross(f.axis, s.y - f.center) * f.rate;
    return s;
}

FlowSample eval_single(const UniformPulsation& f, double t, const Vec3& x) {
    const double sc = 1.0 + f.amplitude * std::sin(f.frequency * t);
    const double sdot = f.amplitude * f.frequency * std::cos(f.frequency * t);
    FlowSample s;
    s.y = f.center + (x - f.center) * sc;
    s.jacobian = Mat3::scaled(sc);
    s.det = sc * sc * sc;
    s.velocity = (x - f.center) * sdot;
    return s;
}

FlowSample eval_single(const DifferentialTwist& f, double t, const Vec3& x) {
    const Vec3 d = x - f.center;
    const double g = f.rate * std::exp(-norm2(d) / (f.width * f.width));
    const double alpha = t * g;
    const Mat3 R = rotation_about(f.axis, alpha);
    // Lambda = R (I + (a x d) grad(alpha)^T), grad(alpha) = -2 alpha d / width^2.
    const Vec3 grad_alpha = d * (-2.0 * alpha / (f.width * f.width));
    const Mat3 shear = add(Mat3::identity(), outer(cross(f.axis, d), grad_alpha));
    FlowSample s;
    s.y = f.center + R * d;
    s.jacobian = R * shear;
    s.det = s.jacobian.det();
    s.velocity = cross(f.axis, s.y - f.center) * g;
    return s;
}

FlowSample eval_single(const RadialCompress& f, double t, const Vec3& x) {
    FlowSample s;
    s.y = radial_forward(f, t, x);
    const double st = kRadialJacobianStep;
    Vec3 cols[3];
    for (int k = 0; k < 3; ++k) {
        Vec3 e{};
        e[k] = st;
        cols[k] = (radial_forward(f, t, x + e) - radial_forward(f, t, x - e)) / (2 * st);
    }
    s.jacobian = Mat3::from_columns(cols[0], cols[1], cols[2]);
    s.det = s.jacobian.det();
    const Vec3 d = x - f.center;
    s.velocity =
        d * (f.amplitude * f.frequency * std::cos(f.frequency * t) * std::exp(-norm2(d) / (f.width * f.width)));
    return s;
}

Vec3 inverse_single(const RigidRotation& f, double t, const Vec3& y) {
    return f.center + rotation_about(f.axis, -f.rate * t) * (y - f.center);
}

Vec3 inverse_single(const UniformPulsation& f, double t, const Vec3& y) {
    return f.center + (y - f.center) / (1.0 + f.amplitude * std::sin(f.frequency * t));
}

Vec3 inverse_single(const DifferentialTwist& f, double t, const Vec3& y) {
    // The twist preserves |x - center|, so the angle is known from y.
    const Vec3 d = y - f.center;
    const double alpha = t * f.rate * std::exp(-norm2(d) / (f.width * f.width));
    return f.center + rotation_about(f.axis, -alpha) * d;
}

Vec3 inverse_single(const RadialCompress& f, double t, const Vec3& y) {
    const Vec3 d = y - f.center;
    const double rho = norm(d);
    if (rho == 0.0) return f.center;
    const double k = std::abs(f.amplitude * std::sin(f.frequency * t));
    double lo = rho / (1.0 + k), hi = rho / (1.0 - k);
    double r = rho;
    // r (1 + A sin e^{-r^2/w^2}) is strictly increasing for A < 1: safeguarded Newton.
    for (int it = 0; it < 200; ++it) {
        const double m = radial_factor(f, t, r);
        const double fr = r * m - rho;
        if (fr > 0)
            hi = r;
        else
            lo = r;
        const double w2 = f.width * f.width;
        const double dm = 1.0 + (m - 1.0) * (1.0 - 2.0 * r * r / w2);
        double next = r - fr / dm;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - r) <= 1e-16 * rho) {
            r = next;
            break;
        }
        r = next;
    }
    return f.center + d * (r / rho);
}

}  // namespace

FlowFamily::FlowFamily(Variant v) : v_(std::move(v)) {
    std::visit(
        [](auto& f) {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, RigidRotation>) {
                f.axis = unit_axis(f.axis);
                require(std::isfinite(f.rate), "rotation rate must be finite");
            } else if constexpr (std::is_same_v<T, UniformPulsation>) {
                require(f.amplitude >= 0 && f.amplitude < 1, "pulsation amplitude must lie in [0, 1)");
                require(std::isfinite(f.frequency), "pulsation frequency must be finite");
            } else if constexpr (std::is_same_v<T, DifferentialTwist>) {
                f.axis = unit_axis(f.axis);
                require(std::isfinite(f.rate), "twist rate must be finite");
                require(f.width > 0, "twist width must be positive");
            } else if constexpr (std::is_same_v<T, RadialCompress>) {
                require(f.amplitude >= 0 && f.amplitude < 1, "radial amplitude must lie in [0, 1)");
                require(std::isfinite(f.frequency), "radial frequency must be finite");
                require(f.width > 0, "radial width must be positive");
            } else {
                require(!f.stages.empty(), "composite flow needs at least one stage");
            }
        },
        v_);
}

FlowSample evaluate_flow(const FlowFamily& fam, double t, const Vec3& x) {
    FlowSample s = std::visit(
        [&](const auto& f) -> FlowSample {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, CompositeFlow>) {
                FlowSample acc;
                acc.y = x;
                acc.jacobian = Mat3::identity();
                acc.det = 1.0;
                acc.velocity = {};
                for (const auto& stage : f.stages) {
                    const FlowSample k = evaluate_flow(stage, t, acc.y);
                    acc.velocity = k.jacobian * acc.velocity + k.velocity;
                    acc.jacobian = k.jacobian * acc.jacobian;
                    acc.det *= k.det;
                    acc.y = k.y;
                }
                return acc;
            } else {
                return eval_single(f, t, x);
            }
        },
        fam.variant());
    if (!(s.det > 0)) {
        std::ostringstream os;
        os << "Jacobian determinant " << s.det << " at t = " << t;
        throw Error(ErrorKind::SingularFlow, os.str());
    }
    return s;
}

Vec3 inverse_flow(const FlowFamily& fam, double t, const Vec3& y) {
    return std::visit(
        [&](const auto& f) -> Vec3 {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, CompositeFlow>) {
                Vec3 x = y;
                for (auto it = f.stages.rbegin(); it != f.stages.rend(); ++it) x = inverse_flow(*it, t, x);
                return x;
            } else {
                return inverse_single(f, t, y);
            }
        },
        fam.variant());
}

Vec3 flow_velocity(const FlowFamily& fam, double t, const Vec3& y) {
    return evaluate_flow(fam, t, inverse_flow(fam, t, y)).velocity;
}

FieldRule velocity_rule(const FlowFamily& fam, double t) {
    return rule_of([fam, t](const Vec3& y) { return flow_velocity(fam, t, y); });
}

FieldRule transported_field(const FlowFamily& fam, double t, const AnalyticField& omega0, const Domain& domain0) {
    const double tol = kDomainSlack * length_scale(domain0);
    return rule_of([fam, t, omega0, domain0, tol](const Vec3& y) {
        const Vec3 x = inverse_flow(fam, t, y);
        if (!contains(domain0, x, tol)) throw Error(ErrorKind::OutsideDomain, "point outside the transported domain");
        const FlowSample s = evaluate_flow(fam, t, x);
        return s.jacobian * omega0(x) / s.det;
    });
}

TransportedState transported_state(const FlowFamily& fam, double t, const AnalyticField& omega0,
                                   const Domain& domain0, const DensityField& lambda0) {
    TransportedState st;
    st.t = t;
    st.field = transported_field(fam, t, omega0, domain0);
    st.density = [fam, t, lambda0](const Vec3& y) {
        const Vec3 x = inverse_flow(fam, t, y);
        return lambda0(x) / evaluate_flow(fam, t, x).det;
    };
    return st;
}

ContinuityReport continuity_residual(const FlowFamily& fam, const std::vector<double>& times,
                                     const std::vector<Vec3>& probes, const DensityField& lambda0,
                                     double space_step) {
    auto lambda_at = [&](double t, const Vec3& y) {
        const Vec3 x = inverse_flow(fam, t, y);
        return lambda0(x) / evaluate_flow(fam, t, x).det;
    };
    auto flux_at = [&](double t, const Vec3& y) { return flow_velocity(fam, t, y) * lambda_at(t, y); };
    ContinuityReport rep;
    for (double t : times)
        for (const auto& x : probes) {
            const Vec3 y = evaluate_flow(fam, t, x).y;
            const double dldt = (lambda_at(t + kTimeStep, y) - lambda_at(t - kTimeStep, y)) / (2 * kTimeStep);
            double div = 0.0;
            for (int k = 0; k < 3; ++k) {
                Vec3 e{};
                e[k] = space_step;
                div += (flux_at(t, y + e)[k] - flux_at(t, y - e)[k]) / (2 * space_step);
            }
            rep.max_residual = std::max(rep.max_residual, std::abs(dldt + div));
            rep.scale = std::max(rep.scale, std::abs(dldt));
        }
    rep.relative = rep.scale > 0 ? rep.max_residual / rep.scale : rep.max_residual;
    return rep;
}

PulledBack pull_back(const FlowFamily& fam, double t, const AnalyticField& omega0, const MaskedGrid& grid0) {
    const std::size_t n = grid0.cell_count();
    PulledBack pb;
    pb.quad.points.resize(n);
    pb.quad.weights.resize(n);
    pb.quad.stencil_ok.resize(n);
    pb.quad.spacing = grid0.spacing();
    pb.omega.resize(n);
    pb.jacobian.resize(n);
    const double vol = grid0.cell_volume();
    const std::ptrdiff_t nn = static_cast<std::ptrdiff_t>(n);
    detail::parallel_for(nn, [&](std::ptrdiff_t i) {
        const Vec3 x = grid0.cell_center(i);
        const FlowSample s = evaluate_flow(fam, t, x);
        pb.quad.points[i] = s.y;
        pb.quad.weights[i] = s.det * vol;
        pb.quad.stencil_ok[i] = grid0.interior_depth(i) >= 2 ? 1 : 0;
        pb.omega[i] = s.jacobian * omega0(x) / s.det;
        pb.jacobian[i] = s.jacobian;
    });
    return pb;
}

SurfacePatchSet transport_surface(const FlowFamily& fam, double t, const SurfacePatchSet& s0) {
    SurfacePatchSet out(s0.size());
    for (std::size_t k = 0; k < s0.size(); ++k) {
        const FlowSample s = evaluate_flow(fam, t, s0[k].point);
        const Vec3 ds = s.jacobian.cofactor() * (s0[k].normal * s0[k].area);
        const double a = norm(ds);
        out[k] = {s.y, ds / a, a};
    }
    return out;
}

namespace {
void mark_stencil_points(const FlowFamily& fam, double t, const Domain& domain0, double step, VolumeQuadrature& q);
}  // namespace

double transport_pde_residual(const FlowFamily& fam, double t, const AnalyticField& omega0, const Domain& domain0,
                              const GridPtr& grid0) {
    PulledBack pb = pull_back(fam, t, omega0, *grid0);
    const double step = kCurlStepFraction * grid0->spacing();
    mark_stencil_points(fam, t, domain0, step, pb.quad);
    std::vector<Vec3> pts;
    std::vector<double> w;
    for (std::size_t i = 0; i < pb.quad.points.size(); ++i)
        if (pb.quad.stencil_ok[i]) {
            pts.push_back(pb.quad.points[i]);
            w.push_back(pb.quad.weights[i]);
        }
    if (pts.empty()) throw Error(ErrorKind::DegenerateStencil, "no stencil cells on the initial grid");
    const auto plus = transported_field(fam, t + kTimeStep, omega0, domain0)(pts);
    const auto minus = transported_field(fam, t - kTimeStep, omega0, domain0)(pts);
    const FieldRule om = transported_field(fam, t, omega0, domain0);
    const FieldRule vel = velocity_rule(fam, t);
    const FieldRule wxo = [om, vel](std::span<const Vec3> p) {
        auto a = vel(p);
        const auto b = om(p);
        for (std::size_t i = 0; i < a.size(); ++i) a[i] = cross(a[i], b[i]);
        return a;
    };
    const auto rhs = stencil_curl(wxo, pts, step);
    double num = 0.0, lhs2 = 0.0, rhs2 = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const Vec3 dt = (plus[i] - minus[i]) / (2 * kTimeStep);
        num += norm2(dt - rhs[i]) * w[i];
        lhs2 += norm2(dt) * w[i];
        rhs2 += norm2(rhs[i]) * w[i];
    }
    const double denom = std::max(lhs2, rhs2);
    return denom > 0 ? std::sqrt(num / denom) : 0.0;
}

namespace {

double pulled_back_energy(const FlowFamily& fam, double t, const AnalyticField& omega0, const MaskedGrid& grid0) {
    const PulledBack pb = pull_back(fam, t, omega0, grid0);
    double e = 0.0;
    for (std::size_t i = 0; i < pb.omega.size(); ++i) e += norm2(pb.omega[i]) * pb.quad.weights[i];
    return e;
}

/// Marks points whose six axis neighbours at distance `step` pull back into domain0.
void mark_stencil_points(const FlowFamily& fam, double t, const Domain& domain0, double step,
                         VolumeQuadrature& q) {
    const double tol = kDomainSlack * length_scale(domain0);
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(q.points.size());
    detail::parallel_for(n, [&](std::ptrdiff_t i) {
        bool ok = true;
        for (int k = 0; k < 3 && ok; ++k)
            for (int sgn = -1; sgn <= 1 && ok; sgn += 2) {
                Vec3 p = q.points[i];
                p[k] += sgn * step;
                ok = contains(domain0, inverse_flow(fam, t, p), tol);
            }
        q.stencil_ok[i] = ok ? 1 : 0;
    });
}

}  // namespace

SweepResult conservation_sweep(const FlowFamily& fam, const AnalyticField& omega0, const Domain& domain0,
                               const GridPtr& grid0, const std::vector<double>& times, const SweepOptions& opts) {
    if (times.empty()) throw Error(ErrorKind::InvalidArgument, "sweep needs at least one time");
    const auto [tmin, tmax] = std::minmax_element(times.begin(), times.end());
    const double span = *tmax - *tmin > 0 ? *tmax - *tmin : 1.0;
    const double dt = opts.fd_fraction * span;

    const SurfacePatchSet boundary0 = boundary_samples(domain0, opts.boundary_nu, opts.boundary_nv);
    const auto tori = domain0.tori();
    std::vector<CrossSection> sections;
    for (std::size_t i = 0; i < tori.size(); ++i)
        sections.push_back(cross_section(tori[i], opts.section_nr, opts.section_nphi, i));

    SweepResult res;
    for (double t : times) {
        SweepRow row;
        row.t = t;
        PulledBack pb = pull_back(fam, t, omega0, *grid0);
        const double step = opts.curl_step_fraction * grid0->spacing();
        mark_stencil_points(fam, t, domain0, step, pb.quad);
        for (std::size_t i = 0; i < pb.omega.size(); ++i) {
            res.max_abs_J_minus_1 =
                std::max(res.max_abs_J_minus_1, std::abs(pb.quad.weights[i] / grid0->cell_volume() - 1.0));
        }

        // Biot-Savart helicity with sources and targets at the image points.
        kernels::SourceSet src;
        kernels::PointSet targets(pb.quad.points);
        for (std::size_t i = 0; i < pb.omega.size(); ++i) {
            const Vec3 s = pb.omega[i] * pb.quad.weights[i];
            if (s.x != 0.0 || s.y != 0.0 || s.z != 0.0) src.push_back(pb.quad.points[i], s);
        }
        std::vector<Vec3> bs(pb.omega.size());
        if (src.size() > 0)
            kernels::biot_savart(src, targets, opts.bs.regularization, bs, opts.bs.backend, opts.bs.chunk_size);
        double omax = 0.0;
        for (std::size_t i = 0; i < pb.omega.size(); ++i) {
            row.H_bs += dot(pb.omega[i], bs[i]) * pb.quad.weights[i];
            row.E += norm2(pb.omega[i]) * pb.quad.weights[i];
            omax = std::max(omax, norm(pb.omega[i]));
        }

        const FieldRule rule = transported_field(fam, t, omega0, domain0);
        const SurfacePatchSet boundary_t = transport_surface(fam, t, boundary0);
        row.dEdt_formula =
            energy_rate(rule, velocity_rule(fam, t), pb.quad, boundary_t, step).total;
        row.dEdt_fd = (pulled_back_energy(fam, t + dt, omega0, *grid0) -
                       pulled_back_energy(fam, t - dt, omega0, *grid0)) /
                      (2 * dt);

        for (const auto& sec : sections) {
            CrossSection moved{sec.torus_index, transport_surface(fam, t, sec.samples)};
            row.phi.push_back(flux(rule, moved));
        }

        if (omax > 0) {
            std::vector<Vec3> bp(boundary_t.size());
            for (std::size_t k = 0; k < bp.size(); ++k) bp[k] = boundary_t[k].point;
            const auto ob = rule(bp);
            for (std::size_t k = 0; k < bp.size(); ++k)
                res.max_tangency = std::max(res.max_tangency, std::abs(dot(ob[k], boundary_t[k].normal)) / omax);
        }
        res.rows.push_back(std::move(row));
    }
    return res;
}

}  // namespace helicity
