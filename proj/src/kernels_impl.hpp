#pragma once

#include <span>

#include "helicity/kernels.hpp"

namespace helicity::kernels::detail {

void biot_savart_serial(const SourceSet& src, const PointSet& tg, double eps2, std::span<Vec3> out);
void potential_serial(const SourceSet& src, const PointSet& tg, double eps2, std::span<Vec3> out);
void gauss_self_partials_serial(const SourceSet& v, std::span<double> partial);
void gauss_cross_partials_serial(const SourceSet& a, const SourceSet& b, std::span<double> partial);

void biot_savart_omp(const SourceSet& src, const PointSet& tg, double eps2, std::span<Vec3> out,
                     std::size_t block);
void potential_omp(const SourceSet& src, const PointSet& tg, double eps2, std::span<Vec3> out,
                   std::size_t block);
void gauss_self_partials_omp(const SourceSet& v, std::span<double> partial, std::size_t block);
void gauss_cross_partials_omp(const SourceSet& a, const SourceSet& b, std::span<double> partial,
                              std::size_t block);

}  // namespace helicity::kernels::detail
