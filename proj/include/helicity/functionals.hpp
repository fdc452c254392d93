/// @file functionals.hpp
/// @brief Writhe, linking number, helicity estimators, energy rate, and the
/// volume and surface forms of the helicity difference.
#pragma once

#include <string>

#include "helicity/biot_savart.hpp"

namespace helicity {

enum class HelicityMethod { DoubleIntegral, BsInnerProduct, Physical, DeltaVolume, DeltaSurface, FluxCirculation };

const char* to_string(HelicityMethod m);

struct HelicityReport {
    double value = 0.0;
    HelicityMethod method = HelicityMethod::BsInnerProduct;
    double h = 0.0;
    std::size_t n_cells = 0;
    /// For physical helicity: "stencil" or "analytic" curl.
    std::string curl_path;
};

/// Gauss self-linking sum over segment pairs (midpoints, segment vectors),
/// self pairs skipped. Requires a closed curve with at least 16 vertices.
double writhe(const PolylineCurve& c, kernels::Backend backend = kernels::Backend::OpenMP);

/// Gauss double sum over segment pairs. Throws IntersectingCurves when any
/// two vertices coincide.
double linking_number(const PolylineCurve& c1, const PolylineCurve& c2,
                      kernels::Backend backend = kernels::Backend::OpenMP);

/// O(N^2) triple-product double sum over cell pairs, self pairs skipped.
HelicityReport helicity_double_integral(const SampledField& v, kernels::Backend backend = kernels::Backend::OpenMP);

/// <V | BS(V)>.
HelicityReport helicity_bs(const SampledField& v, const BSOptions& opts = {});

/// <V1 | BS(V2)> on V1's cells. Throws OverlappingDomains when a cell center
/// of either grid lies in the other domain.
double mutual_helicity(const Domain& d1, const SampledField& v1, const Domain& d2, const SampledField& v2,
                       const BSOptions& opts = {});

/// <u | curl_h u> on the stencil cells.
HelicityReport helicity_physical(const SampledField& u);
/// <u | omega> with omega supplied on the same grid.
HelicityReport helicity_physical(const SampledField& u, const SampledField& omega);
/// Uses the closed-form curl when the catalog has one, else the stencil.
HelicityReport helicity_physical(const AnalyticField& u, const GridPtr& grid);

/// <u - BS(omega) | omega>, both on one grid.
HelicityReport delta_h_volume(const SampledField& u, const SampledField& omega, const BSOptions& opts = {});

/// Boundary form  sum [BS(omega) x u] . n dA  with outward normals, BS
/// evaluated directly at the boundary samples.
HelicityReport delta_h_surface(const FieldRule& u, const SampledField& omega, const SurfacePatchSet& boundary,
                               const BSOptions& opts = {});

struct EnergyRate {
    double volume_term = 0.0;    // 2 <W | omega x curl omega>
    double boundary_term = 0.0;  // - sum |omega|^2 (W . n) dA
    double total = 0.0;
    std::size_t stencil_points = 0;
};

/// Energy rate of omega under velocity W. The volume term uses a central
/// difference curl of `omega` with the given step at the quadrature points
/// flagged stencil_ok.
EnergyRate energy_rate(const FieldRule& omega, const FieldRule& w, const VolumeQuadrature& q,
                       const SurfacePatchSet& boundary, double step);

}  // namespace helicity
