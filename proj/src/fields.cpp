#include "helicity/fields.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "helicity/error.hpp"
#include "parallel.hpp"

namespace helicity {

namespace {

constexpr double kSupportSlack = 1e-9;

double bump(double s2) { return s2 < 1.0 ? std::exp(-1.0 / (1.0 - s2)) : 0.0; }

Vec3 eval_tube(const TubeField& t, const Vec3& p) {
    const Vec3 q = t.frame.to_local(p);
    const double rho = std::hypot(q.x, q.y);
    const double drho = rho - t.loop_radius;
    const double eps2 = t.tube_radius * t.tube_radius;
    const double s2 = (drho * drho + q.z * q.z) / eps2;
    if (!(s2 < 1.0)) return {};
    const double ps = bump(s2);
    const Vec3 phi_hat{-q.y / rho, q.x / rho, 0.0};
    Vec3 local = phi_hat * (t.flux * ps / t.norm);
    if (t.twist != 0.0) {
        // psi = psi0 p(r/eps); grad psi x grad azimuth, with p'(s)/s folded in.
        const double psi0 = t.twist * t.flux / (2 * kPi * std::exp(-1.0));
        const double om = 1.0 - s2;
        const double c = -2.0 * psi0 * ps / (eps2 * rho * om * om);
        const Vec3 rho_hat{q.x / rho, q.y / rho, 0.0};
        local += (Vec3{0, 0, drho} - rho_hat * q.z) * c;
    }
    return t.frame.direction_to_world(local);
}

Vec3 eval_harmonic(const HarmonicTorusField& h, const Vec3& p) {
    const auto& T = h.torus;
    const Vec3 q = T.frame.to_local(p);
    const double rho = std::hypot(q.x, q.y);
    const double dr = rho - T.major_radius;
    if (dr * dr + q.z * q.z > T.minor_radius * T.minor_radius * (1 + kSupportSlack)) return {};
    const double c = 1.0 / (2 * kPi * rho * rho);
    return T.frame.direction_to_world({-q.y * c, q.x * c, 0.0});
}

Vec3 eval_spheromak(const SpheromakField& s, const Vec3& p) {
    const Vec3 d = p - s.ball.center;
    const double r2 = norm2(d);
    const double R = s.ball.radius;
    if (r2 > R * R * (1 + kSupportSlack)) return {};
    const double r = std::sqrt(r2);
    const double xi = s.xi;
    const double x = xi * r;
    // a = g + j1', b = (g - j1')/r^2, c = j1/r with g = j1(x)/x.
    double a, b, c;
    if (x < 0.1) {
        const double x2 = x * x;
        const double g = 1.0 / 3 - x2 / 30 + x2 * x2 / 840 - x2 * x2 * x2 / 45360;
        const double dj = 1.0 / 3 - x2 / 10 + x2 * x2 / 168 - x2 * x2 * x2 / 6480;
        a = g + dj;
        b = xi * xi * (1.0 / 15 - x2 / 210 + x2 * x2 / 7560);
        c = xi * g;
    } else {
        const double sx = std::sin(x), cx = std::cos(x);
        const double j1 = sx / (x * x) - cx / x;
        const double g = j1 / x;
        const double dj = sx / x - 2 * g;
        a = g + dj;
        b = (g - dj) / r2;
        c = j1 / r;
    }
    const Vec3 zhat{0, 0, 1};
    return (zhat * a + d * (b * d.z) + cross(zhat, d) * c) * s.amplitude;
}

Vec3 eval_gradient(const GradientField& g, const Vec3& p) {
    return g.linear + g.quadratic * p + Vec3{p.y * p.z, p.x * p.z, p.x * p.y} * g.xyz;
}

}  // namespace

Vec3 AnalyticField::operator()(const Vec3& p) const {
    return std::visit(
        [&](const auto& f) -> Vec3 {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, TubeField>)
                return eval_tube(f, p);
            else if constexpr (std::is_same_v<T, HarmonicTorusField>)
                return eval_harmonic(f, p);
            else if constexpr (std::is_same_v<T, SpheromakField>)
                return eval_spheromak(f, p);
            else if constexpr (std::is_same_v<T, GradientField>)
                return eval_gradient(f, p);
            else {
                Vec3 acc{};
                for (std::size_t k = 0; k < f.fields.size(); ++k) acc += f.fields[k](p) * f.coeffs[k];
                return acc;
            }
        },
        v_);
}

AnalyticField linear_combination(std::vector<double> coeffs, std::vector<AnalyticField> fields) {
    if (coeffs.size() != fields.size())
        throw Error(ErrorKind::InvalidArgument, "combination needs one coefficient per field");
    for (double c : coeffs)
        if (!std::isfinite(c)) throw Error(ErrorKind::InvalidArgument, "combination coefficient is not finite");
    return AnalyticField(LinearCombination{std::move(coeffs), std::move(fields)});
}

AnalyticField operator*(double c, const AnalyticField& f) { return linear_combination({c}, {f}); }

AnalyticField operator+(const AnalyticField& a, const AnalyticField& b) {
    return linear_combination({1.0, 1.0}, {a, b});
}

std::optional<AnalyticField> analytic_curl(const AnalyticField& f) {
    return std::visit(
        [&](const auto& v) -> std::optional<AnalyticField> {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, TubeField>)
                return std::nullopt;
            else if constexpr (std::is_same_v<T, HarmonicTorusField> || std::is_same_v<T, GradientField>)
                return AnalyticField::zero();
            else if constexpr (std::is_same_v<T, SpheromakField>)
                return v.xi * f;
            else {
                std::vector<AnalyticField> curls;
                for (const auto& g : v.fields) {
                    auto c = analytic_curl(g);
                    if (!c) return std::nullopt;
                    curls.push_back(std::move(*c));
                }
                return linear_combination(v.coeffs, std::move(curls));
            }
        },
        f.variant());
}

FieldRule rule_of(const AnalyticField& f) {
    return [f](std::span<const Vec3> pts) {
        std::vector<Vec3> out(pts.size());
        const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(pts.size());
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = f(pts[i]);
        return out;
    };
}

FieldRule rule_of(std::function<Vec3(const Vec3&)> pointwise) {
    return [pw = std::move(pointwise)](std::span<const Vec3> pts) {
        std::vector<Vec3> out(pts.size());
        const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(pts.size());
        detail::parallel_for(n, [&](std::ptrdiff_t i) { out[i] = pw(pts[i]); });
        return out;
    };
}

FieldRule combine(std::vector<double> coeffs, std::vector<FieldRule> rules) {
    if (coeffs.size() != rules.size())
        throw Error(ErrorKind::InvalidArgument, "combine needs one coefficient per rule");
    return [coeffs = std::move(coeffs), rules = std::move(rules)](std::span<const Vec3> pts) {
        std::vector<Vec3> out(pts.size());
        for (std::size_t k = 0; k < rules.size(); ++k) {
            const auto v = rules[k](pts);
            for (std::size_t i = 0; i < pts.size(); ++i) out[i] += v[i] * coeffs[k];
        }
        return out;
    };
}

AnalyticField make_tube_field(const Frame& loop_frame, double loop_radius, double tube_radius, double flux,
                              double twist) {
    if (!(tube_radius > 0) || !(tube_radius < loop_radius))
        throw Error(ErrorKind::InvalidTube, "tube requires 0 < tube_radius < loop_radius");
    if (!std::isfinite(flux) || !std::isfinite(twist))
        throw Error(ErrorKind::InvalidTube, "tube flux and twist must be finite");
    // 2 pi eps^2 * int_0^1 p(s) s ds, 200-point midpoint rule.
    constexpr int kProfilePoints = 200;
    double integral = 0.0;
    for (int k = 0; k < kProfilePoints; ++k) {
        const double s = (k + 0.5) / kProfilePoints;
        integral += bump(s * s) * s;
    }
    integral /= kProfilePoints;
    TubeField t;
    t.frame = loop_frame;
    t.loop_radius = loop_radius;
    t.tube_radius = tube_radius;
    t.flux = flux;
    t.twist = twist;
    t.norm = 2 * kPi * tube_radius * tube_radius * integral;
    return AnalyticField(t);
}

AxisymTorus tube_torus(const TubeField& t) { return {t.frame, t.loop_radius, t.tube_radius}; }

AnalyticField make_harmonic_torus_field(const AxisymTorus& torus) {
    Domain::torus(torus);  // validates
    return AnalyticField(HarmonicTorusField{torus});
}

double spherical_j1(double x) {
    if (std::abs(x) < 0.1) {
        const double x2 = x * x;
        return x * (1.0 / 3 - x2 / 30 + x2 * x2 / 840 - x2 * x2 * x2 / 45360);
    }
    return std::sin(x) / (x * x) - std::cos(x) / x;
}

double first_j1_root() {
    double lo = 4.0, hi = 5.0;  // j1(4) > 0 > j1(5)
    for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (spherical_j1(mid) > 0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

Spheromak make_spheromak(const Ball& ball, double amplitude) {
    Domain::ball(ball.center, ball.radius);  // validates
    const double xi = first_j1_root() / ball.radius;
    return {AnalyticField(SpheromakField{ball, amplitude, xi}), xi};
}

AnalyticField make_gradient_field(const Vec3& linear, const Mat3& quadratic, double xyz) {
    GradientField g;
    g.linear = linear;
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) g.quadratic(r, c) = 0.5 * (quadratic(r, c) + quadratic(c, r));
    g.xyz = xyz;
    return AnalyticField(g);
}

AnalyticField make_constant_field(const Vec3& value) { return make_gradient_field(value); }

DensityField DensityField::uniform(double value) {
    if (!(value > 0) || !std::isfinite(value)) throw Error(ErrorKind::InvalidArgument, "density must be positive");
    return {[value](const Vec3&) { return value; }};
}

double DensityField::operator()(const Vec3& p) const {
    const double v = rule(p);
    if (!(v > 0) || !std::isfinite(v)) throw Error(ErrorKind::InvalidArgument, "density must be positive");
    return v;
}

// ---------------------------------------------------------------------------
// Sampled fields

const Vec3& SampledField::at(int i, int j, int k) const {
    const auto n = grid->masked_index(i, j, k);
    if (n < 0) throw Error(ErrorKind::OutsideDomain, "cell outside the sampled mask");
    return values[static_cast<std::size_t>(n)];
}

SampledField sample(const GridPtr& grid, const AnalyticField& f) {
    SampledField s{grid, std::vector<Vec3>(grid->cell_count())};
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(grid->cell_count());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t c = 0; c < n; ++c) s.values[c] = f(grid->cell_center(c));
    return s;
}

SampledField sample(const GridPtr& grid, const FieldRule& f) {
    const auto pts = grid->centers();
    SampledField s{grid, f(pts)};
    if (s.values.size() != pts.size()) throw Error(ErrorKind::InvalidArgument, "field rule returned wrong length");
    return s;
}

SampledField restrict_to(const SampledField& f, const GridPtr& sub) {
    if (sub == f.grid) return f;
    if (!same_geometry(*f.grid, *sub)) throw Error(ErrorKind::GridMismatch, "sub-grid geometry differs");
    SampledField out{sub, std::vector<Vec3>(sub->cell_count())};
    for (std::size_t n = 0; n < sub->cell_count(); ++n) {
        const auto ijk = sub->cell_ijk(n);
        const auto m = f.grid->masked_index(ijk[0], ijk[1], ijk[2]);
        if (m < 0) throw Error(ErrorKind::GridMismatch, "sub-grid cell missing from source grid");
        out.values[n] = f.values[static_cast<std::size_t>(m)];
    }
    return out;
}

SampledField operator*(double c, const SampledField& f) {
    SampledField out{f.grid, f.values};
    for (auto& v : out.values) v *= c;
    return out;
}

SampledField axpby(double a, const SampledField& f, double b, const SampledField& g) {
    if (f.grid != g.grid) throw Error(ErrorKind::GridMismatch, "fields live on different grids");
    SampledField out{f.grid, std::vector<Vec3>(f.size())};
    for (std::size_t n = 0; n < f.size(); ++n) out.values[n] = f.values[n] * a + g.values[n] * b;
    return out;
}

namespace {

struct Gradient {
    Vec3 dx, dy, dz;  // partial derivatives of the vector field
};

Gradient central_gradient(const SampledField& f, const std::array<int, 3>& ijk) {
    const double inv2h = 1.0 / (2.0 * f.grid->spacing());
    const int i = ijk[0], j = ijk[1], k = ijk[2];
    return {(f.at(i + 1, j, k) - f.at(i - 1, j, k)) * inv2h, (f.at(i, j + 1, k) - f.at(i, j - 1, k)) * inv2h,
            (f.at(i, j, k + 1) - f.at(i, j, k - 1)) * inv2h};
}

}  // namespace

SampledField curl(const SampledField& f) {
    const GridPtr& sub = f.grid->stencil_grid();
    SampledField out{sub, std::vector<Vec3>(sub->cell_count())};
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(sub->cell_count());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t c = 0; c < n; ++c) {
        const Gradient g = central_gradient(f, sub->cell_ijk(c));
        out.values[c] = {g.dy.z - g.dz.y, g.dz.x - g.dx.z, g.dx.y - g.dy.x};
    }
    return out;
}

ScalarSamples divergence(const SampledField& f) {
    const GridPtr& sub = f.grid->stencil_grid();
    ScalarSamples out{sub, std::vector<double>(sub->cell_count())};
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(sub->cell_count());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t c = 0; c < n; ++c) {
        const Gradient g = central_gradient(f, sub->cell_ijk(c));
        out.values[c] = g.dx.x + g.dy.y + g.dz.z;
    }
    return out;
}

double l2_inner(const SampledField& f, const SampledField& g) {
    if (f.grid != g.grid) throw Error(ErrorKind::GridMismatch, "inner product needs fields on the same grid");
    double s = 0.0;
    for (std::size_t n = 0; n < f.size(); ++n) s += dot(f.values[n], g.values[n]);
    return s * f.grid->cell_volume();
}

double field_energy(const SampledField& f) { return l2_inner(f, f); }

double l2_norm(const SampledField& f) { return std::sqrt(field_energy(f)); }

double max_norm(const SampledField& f) {
    double m = 0.0;
    for (const auto& v : f.values) m = std::max(m, norm(v));
    return m;
}

double max_abs(const ScalarSamples& s) {
    double m = 0.0;
    for (double v : s.values) m = std::max(m, std::abs(v));
    return m;
}

Vec3 curl_at(const std::function<Vec3(const Vec3&)>& f, const Vec3& p, double step) {
    const double inv = 1.0 / (2 * step);
    const Vec3 dx = (f(p + Vec3{step, 0, 0}) - f(p - Vec3{step, 0, 0})) * inv;
    const Vec3 dy = (f(p + Vec3{0, step, 0}) - f(p - Vec3{0, step, 0})) * inv;
    const Vec3 dz = (f(p + Vec3{0, 0, step}) - f(p - Vec3{0, 0, step})) * inv;
    return {dy.z - dz.y, dz.x - dx.z, dx.y - dy.x};
}

double divergence_at(const std::function<Vec3(const Vec3&)>& f, const Vec3& p, double step) {
    const double inv = 1.0 / (2 * step);
    return (f(p + Vec3{step, 0, 0}).x - f(p - Vec3{step, 0, 0}).x) * inv +
           (f(p + Vec3{0, step, 0}).y - f(p - Vec3{0, step, 0}).y) * inv +
           (f(p + Vec3{0, 0, step}).z - f(p - Vec3{0, 0, step}).z) * inv;
}

namespace {

std::vector<Vec3> six_point_values(const FieldRule& f, std::span<const Vec3> pts, double step) {
    static const Vec3 offsets[6] = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
    std::vector<Vec3> probe;
    probe.reserve(pts.size() * 6);
    for (const auto& p : pts)
        for (const auto& o : offsets) probe.push_back(p + o * step);
    return f(probe);
}

}  // namespace

std::vector<Vec3> stencil_curl(const FieldRule& f, std::span<const Vec3> pts, double step) {
    const auto v = six_point_values(f, pts, step);
    const double inv = 1.0 / (2 * step);
    std::vector<Vec3> out(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const Vec3* s = &v[6 * i];
        const Vec3 dx = (s[0] - s[1]) * inv, dy = (s[2] - s[3]) * inv, dz = (s[4] - s[5]) * inv;
        out[i] = {dy.z - dz.y, dz.x - dx.z, dx.y - dy.x};
    }
    return out;
}

std::vector<double> stencil_divergence(const FieldRule& f, std::span<const Vec3> pts, double step) {
    const auto v = six_point_values(f, pts, step);
    const double inv = 1.0 / (2 * step);
    std::vector<double> out(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const Vec3* s = &v[6 * i];
        out[i] = (s[0].x - s[1].x) * inv + (s[2].y - s[3].y) * inv + (s[4].z - s[5].z) * inv;
    }
    return out;
}

}  // namespace helicity
