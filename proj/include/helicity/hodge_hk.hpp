/// @file hodge_hk.hpp
/// @brief Harmonic-knot subspace on a union of disjoint solid tori: dual
/// circulation / flux bases, projections, and the flux-circulation pairing.
#pragma once

#include <vector>

#include "helicity/biot_savart.hpp"

namespace helicity {

struct HKOptions {
    int loop_segments = 256;
    int gauss_nodes = 3;
    int section_nr = 64;
    int section_nphi = 64;
};

/// For torus i: core loop C_i, section S_i, unit-circulation field l_i and
/// unit-flux field f_i = l_i / flux_i with flux_i = R - sqrt(R^2 - a^2).
struct HKBasis {
    std::vector<AxisymTorus> tori;
    std::vector<PolylineCurve> loops;
    std::vector<CrossSection> sections;
    std::vector<AnalyticField> l_fields;
    std::vector<AnalyticField> f_fields;
    std::vector<double> fluxes;
    int gauss_nodes = 3;

    std::size_t size() const { return tori.size(); }
};

/// Throws OverlappingDomains when tori bounding spheres intersect.
HKBasis build_hk_basis(const std::vector<AxisymTorus>& tori, const HKOptions& opts = {});

double circulation(const FieldRule& field, const PolylineCurve& loop, int gauss_nodes = 3);
double flux(const FieldRule& field, const CrossSection& section);

struct HKCoordinates {
    std::vector<double> kappa;  // circulations on C_i
    std::vector<double> phi;    // fluxes through S_i
};

struct HKProjection {
    HKCoordinates coords;
    AnalyticField flux_expansion;         // sum phi_i f_i
    AnalyticField circulation_expansion;  // sum kappa_i l_i
};

HKCoordinates hk_coordinates(const FieldRule& field, const HKBasis& basis);
HKProjection hk_project(const FieldRule& field, const HKBasis& basis);

/// Matrix of <l_i | f_j> by grid quadrature.
std::vector<std::vector<double>> gram_check(const HKBasis& basis, const GridPtr& grid);

struct CurlFreeDecomposition {
    std::vector<double> kappa;                   // circulations of v
    AnalyticField upsilon;                       // sum kappa_i l_i
    std::vector<double> remainder_circulations;  // of v - upsilon on each C_j
    double curl_residual = 0.0;                  // ||curl_h v|| / ||grad_h v||
};

/// Splits a curl-free v into its harmonic part and a gradient remainder.
/// `sampled` feeds the curl gate; `field` is evaluated on the loops.
/// Throws NotCurlFree when curl_residual exceeds `gate`.
CurlFreeDecomposition decompose_curlfree(const SampledField& sampled, const FieldRule& field, const HKBasis& basis,
                                         double gate = 5e-2);

/// ||curl_h v|| / ||grad_h v|| on the stencil cells (0 when grad vanishes).
double relative_curl(const SampledField& v);

struct FluxCirculationPairing {
    double value = 0.0;       // mean of the two orderings
    double difference = 0.0;  // sum phi1 kappa2 - sum phi2 kappa1
};

FluxCirculationPairing inner_product_flux_circ(const HKCoordinates& a, const HKCoordinates& b);

}  // namespace helicity
