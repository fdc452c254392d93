#include "helicity/kernels.hpp"

#include <string>

#include "helicity/error.hpp"
#include "kernels_impl.hpp"
#include "pair_terms.hpp"

namespace helicity::kernels {

PointSet::PointSet(std::span<const Vec3> pts) {
    x.reserve(pts.size());
    y.reserve(pts.size());
    z.reserve(pts.size());
    for (const auto& p : pts) push_back(p);
}

namespace {

void check_sizes(std::size_t targets, std::size_t out, std::size_t block) {
    if (targets != out) throw Error(ErrorKind::InvalidArgument, "output span does not match target count");
    if (block == 0) throw Error(ErrorKind::InvalidArgument, "block size must be positive");
}

double eps_squared(double eps) {
    if (!(eps >= 0) || !std::isfinite(eps)) throw Error(ErrorKind::InvalidArgument, "regularization must be >= 0");
    return eps * eps;
}

// Partials are combined serially in index order in both backends.
double ordered_sum(const std::vector<double>& partial) {
    double s = 0.0;
    for (double p : partial) s += p;
    return s;
}

}  // namespace

void biot_savart(const SourceSet& src, const PointSet& targets, double eps, std::span<Vec3> out, Backend backend,
                 std::size_t block) {
    check_sizes(targets.size(), out.size(), block);
    const double e2 = eps_squared(eps);
    if (backend == Backend::Serial)
        detail::biot_savart_serial(src, targets, e2, out);
    else
        detail::biot_savart_omp(src, targets, e2, out, block);
}

void potential(const SourceSet& src, const PointSet& targets, double eps, std::span<Vec3> out, Backend backend,
               std::size_t block) {
    check_sizes(targets.size(), out.size(), block);
    const double e2 = eps_squared(eps);
    if (backend == Backend::Serial)
        detail::potential_serial(src, targets, e2, out);
    else
        detail::potential_omp(src, targets, e2, out, block);
}

double gauss_self_sum(const SourceSet& set, Backend backend, std::size_t block) {
    if (block == 0) throw Error(ErrorKind::InvalidArgument, "block size must be positive");
    std::vector<double> partial(set.size());
    if (backend == Backend::Serial)
        detail::gauss_self_partials_serial(set, partial);
    else
        detail::gauss_self_partials_omp(set, partial, block);
    return 2.0 * ordered_sum(partial) * detail::kInv4Pi;
}

double gauss_cross_sum(const SourceSet& a, const SourceSet& b, Backend backend, std::size_t block) {
    if (block == 0) throw Error(ErrorKind::InvalidArgument, "block size must be positive");
    std::vector<double> partial(a.size());
    if (backend == Backend::Serial)
        detail::gauss_cross_partials_serial(a, b, partial);
    else
        detail::gauss_cross_partials_omp(a, b, partial, block);
    return ordered_sum(partial) * detail::kInv4Pi;
}

}  // namespace helicity::kernels
