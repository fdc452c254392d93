// OpenMP backend. Targets (or outer indices) are split into blocks; within a
// block the inner loop runs across targets so it vectorizes, while each
// target still sees its sources in index order.
#include <algorithm>
#include <vector>

#include "kernels_impl.hpp"
#include "pair_terms.hpp"

namespace helicity::kernels::detail {

namespace {

std::size_t block_count(std::size_t n, std::size_t block) { return (n + block - 1) / block; }

}  // namespace

void biot_savart_omp(const SourceSet& src, const PointSet& tg, double eps2, std::span<Vec3> out,
                     std::size_t block) {
    const std::size_t ns = src.size();
    const std::ptrdiff_t nb = static_cast<std::ptrdiff_t>(block_count(tg.size(), block));
#pragma omp parallel
    {
        std::vector<double> ax(block), ay(block), az(block);
#pragma omp for schedule(dynamic, 1)
        for (std::ptrdiff_t b = 0; b < nb; ++b) {
            const std::size_t t0 = static_cast<std::size_t>(b) * block;
            const std::size_t len = std::min(block, tg.size() - t0);
            const double* tx = tg.x.data() + t0;
            const double* ty = tg.y.data() + t0;
            const double* tz = tg.z.data() + t0;
            double* px = ax.data();
            double* py = ay.data();
            double* pz = az.data();
            std::fill_n(px, len, 0.0);
            std::fill_n(py, len, 0.0);
            std::fill_n(pz, len, 0.0);
            for (std::size_t s = 0; s < ns; ++s) {
                const double qx = src.pos.x[s], qy = src.pos.y[s], qz = src.pos.z[s];
                const double sx = src.sx[s], sy = src.sy[s], sz = src.sz[s];
#pragma omp simd
                for (std::size_t t = 0; t < len; ++t) {
                    const double dx = tx[t] - qx;
                    const double dy = ty[t] - qy;
                    const double dz = tz[t] - qz;
                    const double w = inv_cube(dx, dy, dz, eps2);
                    px[t] += (sy * dz - sz * dy) * w;
                    py[t] += (sz * dx - sx * dz) * w;
                    pz[t] += (sx * dy - sy * dx) * w;
                }
            }
            for (std::size_t t = 0; t < len; ++t) out[t0 + t] = {px[t] * kInv4Pi, py[t] * kInv4Pi, pz[t] * kInv4Pi};
        }
    }
}

void potential_omp(const SourceSet& src, const PointSet& tg, double eps2, std::span<Vec3> out,
                   std::size_t block) {
    const std::size_t ns = src.size();
    const std::ptrdiff_t nb = static_cast<std::ptrdiff_t>(block_count(tg.size(), block));
#pragma omp parallel
    {
        std::vector<double> ax(block), ay(block), az(block);
#pragma omp for schedule(dynamic, 1)
        for (std::ptrdiff_t b = 0; b < nb; ++b) {
            const std::size_t t0 = static_cast<std::size_t>(b) * block;
            const std::size_t len = std::min(block, tg.size() - t0);
            const double* tx = tg.x.data() + t0;
            const double* ty = tg.y.data() + t0;
            const double* tz = tg.z.data() + t0;
            double* px = ax.data();
            double* py = ay.data();
            double* pz = az.data();
            std::fill_n(px, len, 0.0);
            std::fill_n(py, len, 0.0);
            std::fill_n(pz, len, 0.0);
            for (std::size_t s = 0; s < ns; ++s) {
                const double qx = src.pos.x[s], qy = src.pos.y[s], qz = src.pos.z[s];
                const double sx = src.sx[s], sy = src.sy[s], sz = src.sz[s];
#pragma omp simd
                for (std::size_t t = 0; t < len; ++t) {
                    const double w = inv_dist(tx[t] - qx, ty[t] - qy, tz[t] - qz, eps2);
                    px[t] += sx * w;
                    py[t] += sy * w;
                    pz[t] += sz * w;
                }
            }
            for (std::size_t t = 0; t < len; ++t) out[t0 + t] = {px[t] * kInv4Pi, py[t] * kInv4Pi, pz[t] * kInv4Pi};
        }
    }
}

void gauss_self_partials_omp(const SourceSet& v, std::span<double> partial, std::size_t block) {
    const std::size_t n = v.size();
    const std::ptrdiff_t nb = static_cast<std::ptrdiff_t>(block_count(n, block));
#pragma omp parallel
    {
        std::vector<double> acc(block);
#pragma omp for schedule(dynamic, 1)
        for (std::ptrdiff_t b = 0; b < nb; ++b) {
            const std::size_t i0 = static_cast<std::size_t>(b) * block;
            const std::size_t len = std::min(block, n - i0);
            const double* ix = v.pos.x.data() + i0;
            const double* iy = v.pos.y.data() + i0;
            const double* iz = v.pos.z.data() + i0;
            const double* isx = v.sx.data() + i0;
            const double* isy = v.sy.data() + i0;
            const double* isz = v.sz.data() + i0;
            double* pa = acc.data();
            std::fill_n(pa, len, 0.0);
            for (std::size_t j = i0 + 1; j < n; ++j) {
                const double qx = v.pos.x[j], qy = v.pos.y[j], qz = v.pos.z[j];
                const double bx = v.sx[j], by = v.sy[j], bz = v.sz[j];
                // Lanes with i >= j add +0.0, which leaves a +0.0-seeded sum unchanged.
#pragma omp simd
                for (std::size_t t = 0; t < len; ++t) {
                    const double term =
                        gauss_term(isx[t], isy[t], isz[t], bx, by, bz, ix[t] - qx, iy[t] - qy, iz[t] - qz);
                    pa[t] += (i0 + t < j) ? term : 0.0;
                }
            }
            std::copy_n(pa, len, partial.data() + i0);
        }
    }
}

void gauss_cross_partials_omp(const SourceSet& a, const SourceSet& b, std::span<double> partial,
                              std::size_t block) {
    const std::size_t n = a.size();
    const std::ptrdiff_t nb = static_cast<std::ptrdiff_t>(block_count(n, block));
#pragma omp parallel
    {
        std::vector<double> acc(block);
#pragma omp for schedule(dynamic, 1)
        for (std::ptrdiff_t blk = 0; blk < nb; ++blk) {
            const std::size_t i0 = static_cast<std::size_t>(blk) * block;
            const std::size_t len = std::min(block, n - i0);
            const double* ix = a.pos.x.data() + i0;
            const double* iy = a.pos.y.data() + i0;
            const double* iz = a.pos.z.data() + i0;
            const double* isx = a.sx.data() + i0;
            const double* isy = a.sy.data() + i0;
            const double* isz = a.sz.data() + i0;
            double* pa = acc.data();
            std::fill_n(pa, len, 0.0);
            for (std::size_t j = 0; j < b.size(); ++j) {
                const double qx = b.pos.x[j], qy = b.pos.y[j], qz = b.pos.z[j];
                const double bx = b.sx[j], by = b.sy[j], bz = b.sz[j];
#pragma omp simd
                for (std::size_t t = 0; t < len; ++t)
                    pa[t] += gauss_term(isx[t], isy[t], isz[t], bx, by, bz, ix[t] - qx, iy[t] - qy, iz[t] - qz);
            }
            std::copy_n(pa, len, partial.data() + i0);
        }
    }
}

}  // namespace helicity::kernels::detail
