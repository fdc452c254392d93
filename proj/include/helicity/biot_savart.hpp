/// @file biot_savart.hpp
/// @brief Biot-Savart operator, its 1/r vector potential, curl-inverse check,
/// and loop integrals.
#pragma once

#include <span>
#include <vector>

#include "helicity/fields.hpp"
#include "helicity/kernels.hpp"

namespace helicity {

struct BSOptions {
    /// Kernel smoothing length; 0 selects the skip-self-cell rule.
    double regularization = 0.0;
    /// Targets per parallel work item.
    std::size_t chunk_size = kernels::kDefaultBlock;
    kernels::Backend backend = kernels::Backend::OpenMP;
};

/// Midpoint-rule sources: cell centers with strength V h^3. Exactly-zero
/// cells are dropped (they contribute nothing). Throws EmptySource when the
/// field has no cells.
kernels::SourceSet make_sources(const SampledField& source);

std::vector<Vec3> bs_field(const SampledField& source, std::span<const Vec3> targets, const BSOptions& opts = {});
/// Biot-Savart field at every masked cell of `targets` (defaults to the source grid).
SampledField bs_field(const SampledField& source, const GridPtr& targets, const BSOptions& opts = {});
SampledField bs_field(const SampledField& source, const BSOptions& opts = {});

std::vector<Vec3> vector_potential(const SampledField& source, std::span<const Vec3> targets,
                                   const BSOptions& opts = {});
SampledField vector_potential(const SampledField& source, const GridPtr& targets, const BSOptions& opts = {});

/// Biot-Savart evaluation rule for arbitrary points (sources built once).
FieldRule bs_rule(const SampledField& source, const BSOptions& opts = {});

struct CurlInverseReport {
    double residual = 0.0;           // ||curl BS(V) - V|| / ||V|| on depth >= 2 cells
    std::size_t evaluated_cells = 0;
    double h = 0.0;
};

CurlInverseReport verify_curl_inverse(const SampledField& source, const BSOptions& opts = {});

/// h * max|div V| / max|V| over the stencil cells; 0 for a zero field.
double solenoidal_residual(const SampledField& f);

/// Closed-curve line integral of `field`, with an n-point Gauss-Legendre rule
/// per straight segment (n = 1 is the midpoint rule). Throws OpenCurve.
double loop_integral(const FieldRule& field, const PolylineCurve& curve, int gauss_nodes = 3);

}  // namespace helicity
