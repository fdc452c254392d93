#include "helicity/hodge_hk.hpp"

#include <cmath>
#include <sstream>

#include "helicity/error.hpp"

namespace helicity {

HKBasis build_hk_basis(const std::vector<AxisymTorus>& tori, const HKOptions& opts) {
    HKBasis b;
    b.gauss_nodes = opts.gauss_nodes;
    if (tori.empty()) return b;
    std::vector<Primitive> prims(tori.begin(), tori.end());
    Domain::union_of(prims);  // validates shapes and disjointness
    for (std::size_t i = 0; i < tori.size(); ++i) {
        const auto& t = tori[i];
        b.tori.push_back(t);
        b.loops.push_back(core_loop(t, opts.loop_segments));
        b.sections.push_back(cross_section(t, opts.section_nr, opts.section_nphi, i));
        const AnalyticField h = make_harmonic_torus_field(t);
        const double phi = t.major_radius - std::sqrt(t.major_radius * t.major_radius - t.minor_radius * t.minor_radius);
        b.l_fields.push_back(h);
        b.f_fields.push_back((1.0 / phi) * h);
        b.fluxes.push_back(phi);
    }
    return b;
}

double circulation(const FieldRule& field, const PolylineCurve& loop, int gauss_nodes) {
    return loop_integral(field, loop, gauss_nodes);
}

double flux(const FieldRule& field, const CrossSection& section) {
    std::vector<Vec3> pts(section.samples.size());
    for (std::size_t k = 0; k < pts.size(); ++k) pts[k] = section.samples[k].point;
    const auto v = field(pts);
    double s = 0.0;
    for (std::size_t k = 0; k < pts.size(); ++k) s += dot(v[k], section.samples[k].normal) * section.samples[k].area;
    return s;
}

HKCoordinates hk_coordinates(const FieldRule& field, const HKBasis& basis) {
    HKCoordinates c;
    for (std::size_t i = 0; i < basis.size(); ++i) {
        c.kappa.push_back(circulation(field, basis.loops[i], basis.gauss_nodes));
        c.phi.push_back(flux(field, basis.sections[i]));
    }
    return c;
}

HKProjection hk_project(const FieldRule& field, const HKBasis& basis) {
    HKProjection p;
    p.coords = hk_coordinates(field, basis);
    p.flux_expansion = linear_combination(p.coords.phi, basis.f_fields);
    p.circulation_expansion = linear_combination(p.coords.kappa, basis.l_fields);
    return p;
}

std::vector<std::vector<double>> gram_check(const HKBasis& basis, const GridPtr& grid) {
    const std::size_t n = basis.size();
    std::vector<SampledField> l, f;
    for (std::size_t i = 0; i < n; ++i) {
        l.push_back(sample(grid, basis.l_fields[i]));
        f.push_back(sample(grid, basis.f_fields[i]));
    }
    std::vector<std::vector<double>> g(n, std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) g[i][j] = l2_inner(l[i], f[j]);
    return g;
}

double relative_curl(const SampledField& v) {
    const GridPtr& sub = v.grid->stencil_grid();
    const double inv2h = 1.0 / (2.0 * v.grid->spacing());
    double curl2 = 0.0, grad2 = 0.0;
    for (std::size_t n = 0; n < sub->cell_count(); ++n) {
        const auto [i, j, k] = sub->cell_ijk(n);
        const Vec3 dx = (v.at(i + 1, j, k) - v.at(i - 1, j, k)) * inv2h;
        const Vec3 dy = (v.at(i, j + 1, k) - v.at(i, j - 1, k)) * inv2h;
        const Vec3 dz = (v.at(i, j, k + 1) - v.at(i, j, k - 1)) * inv2h;
        const Vec3 c{dy.z - dz.y, dz.x - dx.z, dx.y - dy.x};
        curl2 += norm2(c);
        grad2 += norm2(dx) + norm2(dy) + norm2(dz);
    }
    return grad2 > 0.0 ? std::sqrt(curl2 / grad2) : 0.0;
}

CurlFreeDecomposition decompose_curlfree(const SampledField& sampled, const FieldRule& field, const HKBasis& basis,
                                         double gate) {
    CurlFreeDecomposition d;
    d.curl_residual = relative_curl(sampled);
    if (d.curl_residual > gate) {
        std::ostringstream os;
        os << "relative stencil curl " << d.curl_residual << " exceeds " << gate;
        throw Error(ErrorKind::NotCurlFree, os.str());
    }
    for (std::size_t i = 0; i < basis.size(); ++i)
        d.kappa.push_back(circulation(field, basis.loops[i], basis.gauss_nodes));
    d.upsilon = linear_combination(d.kappa, basis.l_fields);
    const FieldRule remainder = combine({1.0, -1.0}, {field, rule_of(d.upsilon)});
    for (std::size_t j = 0; j < basis.size(); ++j)
        d.remainder_circulations.push_back(circulation(remainder, basis.loops[j], basis.gauss_nodes));
    return d;
}

FluxCirculationPairing inner_product_flux_circ(const HKCoordinates& a, const HKCoordinates& b) {
    if (a.kappa.size() != b.kappa.size() || a.phi.size() != b.phi.size() || a.kappa.size() != a.phi.size())
        throw Error(ErrorKind::InvalidArgument, "coordinate vectors differ in length");
    double ab = 0.0, ba = 0.0;
    for (std::size_t k = 0; k < a.phi.size(); ++k) {
        ab += a.phi[k] * b.kappa[k];
        ba += b.phi[k] * a.kappa[k];
    }
    return {0.5 * (ab + ba), ab - ba};
}

}  // namespace helicity
