// Reference backend: plain loops, one target (or outer index) at a time.
#include "kernels_impl.hpp"
#include "pair_terms.hpp"

namespace helicity::kernels::detail {

void biot_savart_serial(const SourceSet& src, const PointSet& tg, double eps2, std::span<Vec3> out) {
    const std::size_t ns = src.size();
    for (std::size_t t = 0; t < tg.size(); ++t) {
        double ax = 0.0, ay = 0.0, az = 0.0;
        for (std::size_t s = 0; s < ns; ++s) {
            const double dx = tg.x[t] - src.pos.x[s];
            const double dy = tg.y[t] - src.pos.y[s];
            const double dz = tg.z[t] - src.pos.z[s];
            const double w = inv_cube(dx, dy, dz, eps2);
            ax += (src.sy[s] * dz - src.sz[s] * dy) * w;
            ay += (src.sz[s] * dx - src.sx[s] * dz) * w;
            az += (src.sx[s] * dy - src.sy[s] * dx) * w;
        }
        out[t] = {ax * kInv4Pi, ay * kInv4Pi, az * kInv4Pi};
    }
}

void potential_serial(const SourceSet& src, const PointSet& tg, double eps2, std::span<Vec3> out) {
    const std::size_t ns = src.size();
    for (std::size_t t = 0; t < tg.size(); ++t) {
        double ax = 0.0, ay = 0.0, az = 0.0;
        for (std::size_t s = 0; s < ns; ++s) {
            const double dx = tg.x[t] - src.pos.x[s];
            const double dy = tg.y[t] - src.pos.y[s];
            const double dz = tg.z[t] - src.pos.z[s];
            const double w = inv_dist(dx, dy, dz, eps2);
            ax += src.sx[s] * w;
            ay += src.sy[s] * w;
            az += src.sz[s] * w;
        }
        out[t] = {ax * kInv4Pi, ay * kInv4Pi, az * kInv4Pi};
    }
}

void gauss_self_partials_serial(const SourceSet& v, std::span<double> partial) {
    const std::size_t n = v.size();
    for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (std::size_t j = i + 1; j < n; ++j)
            acc += gauss_term(v.sx[i], v.sy[i], v.sz[i], v.sx[j], v.sy[j], v.sz[j], v.pos.x[i] - v.pos.x[j],
                              v.pos.y[i] - v.pos.y[j], v.pos.z[i] - v.pos.z[j]);
        partial[i] = acc;
    }
}

void gauss_cross_partials_serial(const SourceSet& a, const SourceSet& b, std::span<double> partial) {
    for (std::size_t i = 0; i < a.size(); ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < b.size(); ++j)
            acc += gauss_term(a.sx[i], a.sy[i], a.sz[i], b.sx[j], b.sy[j], b.sz[j], a.pos.x[i] - b.pos.x[j],
                              a.pos.y[i] - b.pos.y[j], a.pos.z[i] - b.pos.z[j]);
        partial[i] = acc;
    }
}

}  // namespace helicity::kernels::detail
