#include "helicity/functionals.hpp"

#include <cmath>
#include <sstream>

#include "helicity/error.hpp"

namespace helicity {

const char* to_string(HelicityMethod m) {
    switch (m) {
        case HelicityMethod::DoubleIntegral: return "double_integral";
        case HelicityMethod::BsInnerProduct: return "bs_inner_product";
        case HelicityMethod::Physical: return "physical";
        case HelicityMethod::DeltaVolume: return "delta_volume";
        case HelicityMethod::DeltaSurface: return "delta_surface";
        case HelicityMethod::FluxCirculation: return "flux_circulation";
    }
    return "unknown";
}

namespace {

kernels::SourceSet segment_sources(const PolylineCurve& c) {
    kernels::SourceSet s;
    for (std::size_t k = 0; k < c.segment_count(); ++k) {
        const Vec3 a = c.segment_start(k), b = c.segment_end(k);
        s.push_back((a + b) * 0.5, b - a);
    }
    return s;
}

void require_closed(const PolylineCurve& c) {
    if (!c.closed) throw Error(ErrorKind::OpenCurve, "curve must be closed");
    validate(c);
}

HelicityReport report(double value, HelicityMethod m, const SampledField& f) {
    HelicityReport r;
    r.value = value;
    r.method = m;
    r.h = f.grid->spacing();
    r.n_cells = f.size();
    return r;
}

void warn_if_curl_mismatch(const SampledField& u, const SampledField& omega) {
    try {
        const SampledField c = curl(u);
        const SampledField o = restrict_to(omega, c.grid);
        const double on = l2_norm(o);
        if (on == 0.0) return;
        const double r = l2_norm(axpby(1.0, c, -1.0, o)) / on;
        if (r > 5e-2) {
            std::ostringstream os;
            os << "omega differs from curl u by " << r << " (relative L2)";
            warn(os.str());
        }
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::DegenerateStencil) throw;
    }
}

}  // namespace

double writhe(const PolylineCurve& c, kernels::Backend backend) {
    require_closed(c);
    if (c.vertices.size() < 16) throw Error(ErrorKind::InvalidArgument, "writhe needs at least 16 vertices");
    return kernels::gauss_self_sum(segment_sources(c), backend);
}

double linking_number(const PolylineCurve& c1, const PolylineCurve& c2, kernels::Backend backend) {
    require_closed(c1);
    require_closed(c2);
    for (const auto& a : c1.vertices)
        for (const auto& b : c2.vertices)
            if (a == b) throw Error(ErrorKind::IntersectingCurves, "curves share a vertex");
    return kernels::gauss_cross_sum(segment_sources(c1), segment_sources(c2), backend);
}

HelicityReport helicity_double_integral(const SampledField& v, kernels::Backend backend) {
    const auto src = make_sources(v);
    return report(kernels::gauss_self_sum(src, backend), HelicityMethod::DoubleIntegral, v);
}

HelicityReport helicity_bs(const SampledField& v, const BSOptions& opts) {
    return report(l2_inner(v, bs_field(v, opts)), HelicityMethod::BsInnerProduct, v);
}

double mutual_helicity(const Domain& d1, const SampledField& v1, const Domain& d2, const SampledField& v2,
                       const BSOptions& opts) {
    for (std::size_t n = 0; n < v1.grid->cell_count(); ++n)
        if (d2.contains(v1.grid->cell_center(n)))
            throw Error(ErrorKind::OverlappingDomains, "first grid has cells inside the second domain");
    for (std::size_t n = 0; n < v2.grid->cell_count(); ++n)
        if (d1.contains(v2.grid->cell_center(n)))
            throw Error(ErrorKind::OverlappingDomains, "second grid has cells inside the first domain");
    return l2_inner(v1, bs_field(v2, v1.grid, opts));
}

HelicityReport helicity_physical(const SampledField& u) {
    const SampledField w = curl(u);
    const SampledField us = restrict_to(u, w.grid);
    auto r = report(l2_inner(us, w), HelicityMethod::Physical, us);
    r.curl_path = "stencil";
    return r;
}

HelicityReport helicity_physical(const SampledField& u, const SampledField& omega) {
    auto r = report(l2_inner(u, omega), HelicityMethod::Physical, u);
    r.curl_path = "analytic";
    return r;
}

HelicityReport helicity_physical(const AnalyticField& u, const GridPtr& grid) {
    const SampledField us = sample(grid, u);
    if (auto w = analytic_curl(u)) return helicity_physical(us, sample(grid, *w));
    return helicity_physical(us);
}

HelicityReport delta_h_volume(const SampledField& u, const SampledField& omega, const BSOptions& opts) {
    if (u.grid != omega.grid) throw Error(ErrorKind::GridMismatch, "u and omega must share a grid");
    warn_if_curl_mismatch(u, omega);
    const SampledField diff = axpby(1.0, u, -1.0, bs_field(omega, opts));
    return report(l2_inner(diff, omega), HelicityMethod::DeltaVolume, omega);
}

HelicityReport delta_h_surface(const FieldRule& u, const SampledField& omega, const SurfacePatchSet& boundary,
                               const BSOptions& opts) {
    std::vector<Vec3> pts(boundary.size());
    for (std::size_t k = 0; k < boundary.size(); ++k) pts[k] = boundary[k].point;
    const auto bs = bs_field(omega, std::span<const Vec3>(pts), opts);
    const auto uv = u(pts);
    double s = 0.0;
    for (std::size_t k = 0; k < boundary.size(); ++k) s += dot(cross(bs[k], uv[k]), boundary[k].normal) * boundary[k].area;
    HelicityReport r;
    r.value = s;
    r.method = HelicityMethod::DeltaSurface;
    r.h = omega.grid->spacing();
    r.n_cells = boundary.size();
    return r;
}

EnergyRate energy_rate(const FieldRule& omega, const FieldRule& w, const VolumeQuadrature& q,
                       const SurfacePatchSet& boundary, double step) {
    EnergyRate out;
    std::vector<Vec3> pts;
    std::vector<double> wts;
    for (std::size_t i = 0; i < q.points.size(); ++i)
        if (q.stencil_ok[i]) {
            pts.push_back(q.points[i]);
            wts.push_back(q.weights[i]);
        }
    out.stencil_points = pts.size();
    if (!pts.empty()) {
        const auto om = omega(pts);
        const auto cu = stencil_curl(omega, pts, step);
        const auto wv = w(pts);
        double s = 0.0;
        for (std::size_t i = 0; i < pts.size(); ++i) s += dot(wv[i], cross(om[i], cu[i])) * wts[i];
        out.volume_term = 2.0 * s;
    }
    if (!boundary.empty()) {
        std::vector<Vec3> bp(boundary.size());
        for (std::size_t k = 0; k < boundary.size(); ++k) bp[k] = boundary[k].point;
        const auto om = omega(bp);
        const auto wv = w(bp);
        double s = 0.0;
        for (std::size_t k = 0; k < boundary.size(); ++k)
            s += norm2(om[k]) * dot(wv[k], boundary[k].normal) * boundary[k].area;
        out.boundary_term = -s;
    }
    out.total = out.volume_term + out.boundary_term;
    return out;
}

}  // namespace helicity
