#include "helicity/biot_savart.hpp"

#include <cmath>
#include <sstream>

#include "helicity/error.hpp"
#include "helicity/quadrature.hpp"

namespace helicity {

namespace {

constexpr double kSolenoidalWarn = 5e-2;

void warn_if_not_solenoidal(const SampledField& f) {
    try {
        const double r = solenoidal_residual(f);
        if (r > kSolenoidalWarn) {
            std::ostringstream os;
            os << "Biot-Savart source is not solenoidal to stencil tolerance (h*max|div|/max|V| = " << r << ")";
            warn(os.str());
        }
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::DegenerateStencil) throw;
    }
}

}  // namespace

kernels::SourceSet make_sources(const SampledField& source) {
    if (!source.grid || source.values.empty()) throw Error(ErrorKind::EmptySource, "source field has no cells");
    const double w = source.grid->cell_volume();
    kernels::SourceSet set;
    for (std::size_t n = 0; n < source.size(); ++n) {
        const Vec3& v = source.values[n];
        if (v.x == 0.0 && v.y == 0.0 && v.z == 0.0) continue;
        set.push_back(source.grid->cell_center(n), v * w);
    }
    return set;
}

std::vector<Vec3> bs_field(const SampledField& source, std::span<const Vec3> targets, const BSOptions& opts) {
    warn_if_not_solenoidal(source);
    const auto src = make_sources(source);
    std::vector<Vec3> out(targets.size());
    kernels::biot_savart(src, kernels::PointSet(targets), opts.regularization, out, opts.backend, opts.chunk_size);
    return out;
}

SampledField bs_field(const SampledField& source, const GridPtr& targets, const BSOptions& opts) {
    const auto pts = targets->centers();
    return {targets, bs_field(source, std::span<const Vec3>(pts), opts)};
}

SampledField bs_field(const SampledField& source, const BSOptions& opts) {
    return bs_field(source, source.grid, opts);
}

std::vector<Vec3> vector_potential(const SampledField& source, std::span<const Vec3> targets,
                                   const BSOptions& opts) {
    const auto src = make_sources(source);
    std::vector<Vec3> out(targets.size());
    kernels::potential(src, kernels::PointSet(targets), opts.regularization, out, opts.backend, opts.chunk_size);
    return out;
}

SampledField vector_potential(const SampledField& source, const GridPtr& targets, const BSOptions& opts) {
    const auto pts = targets->centers();
    return {targets, vector_potential(source, std::span<const Vec3>(pts), opts)};
}

FieldRule bs_rule(const SampledField& source, const BSOptions& opts) {
    warn_if_not_solenoidal(source);
    auto src = std::make_shared<const kernels::SourceSet>(make_sources(source));
    return [src, opts](std::span<const Vec3> pts) {
        std::vector<Vec3> out(pts.size());
        kernels::biot_savart(*src, kernels::PointSet(pts), opts.regularization, out, opts.backend, opts.chunk_size);
        return out;
    };
}

CurlInverseReport verify_curl_inverse(const SampledField& source, const BSOptions& opts) {
    CurlInverseReport rep;
    rep.h = source.grid->spacing();
    if (max_norm(source) == 0.0) return rep;
    const GridPtr& sub = source.grid->stencil_grid();
    rep.evaluated_cells = sub->cell_count();
    const SampledField v = restrict_to(source, sub);
    const double vn = l2_norm(v);
    if (vn == 0.0) return rep;
    const SampledField c = curl(bs_field(source, opts));
    rep.residual = l2_norm(axpby(1.0, c, -1.0, v)) / vn;
    return rep;
}

double solenoidal_residual(const SampledField& f) {
    const double m = max_norm(f);
    if (m == 0.0) return 0.0;
    return f.grid->spacing() * max_abs(divergence(f)) / m;
}

double loop_integral(const FieldRule& field, const PolylineCurve& curve, int gauss_nodes) {
    if (!curve.closed) throw Error(ErrorKind::OpenCurve, "loop integral needs a closed curve");
    validate(curve);
    const GaussRule rule = gauss_legendre(gauss_nodes);
    const std::size_t ns = curve.segment_count();
    const std::size_t nq = rule.nodes.size();
    std::vector<Vec3> pts;
    pts.reserve(ns * nq);
    for (std::size_t s = 0; s < ns; ++s) {
        const Vec3 a = curve.segment_start(s), d = curve.segment_end(s) - a;
        for (double x : rule.nodes) pts.push_back(a + d * x);
    }
    const auto vals = field(pts);
    double total = 0.0;
    for (std::size_t s = 0; s < ns; ++s) {
        const Vec3 d = curve.segment_end(s) - curve.segment_start(s);
        double seg = 0.0;
        for (std::size_t q = 0; q < nq; ++q) seg += rule.weights[q] * dot(vals[s * nq + q], d);
        total += seg;
    }
    return total;
}

}  // namespace helicity
