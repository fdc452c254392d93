/// @file mhd.hpp
/// @brief Magnetic Biot-Savart helicity, magnetic potential helicity with a
/// harmonic gauge term, and cross helicity.
#pragma once

#include <functional>
#include <vector>

#include "helicity/functionals.hpp"
#include "helicity/hodge_hk.hpp"
#include "helicity/transport.hpp"

namespace helicity {

/// Gauge of the induction law dA/dt = u x curl A + grad(phi) + Pi.
/// Pi = sum kappa_i l_i over the basis; phi defaults to zero.
struct GaugeChoice {
    std::function<double(const Vec3&)> phi;
    std::vector<double> kappa;

    static GaugeChoice harmonic(std::vector<double> kappa) { return {{}, std::move(kappa)}; }
};

/// Pi as an analytic field. Throws InvalidArgument when kappa does not match the basis.
AnalyticField gauge_field(const GaugeChoice& g, const HKBasis& basis);

/// A and B sampled on one grid, with curl_h A close to B.
struct MagneticState {
    SampledField A;
    SampledField B;
    const HKBasis* basis = nullptr;
    /// Closed-form B for section fluxes; when empty, fluxes use <l_i | B>.
    FieldRule b_rule;
};

/// ||curl_h A - B|| / ||B|| on the stencil cells (||curl_h A|| when B = 0).
double curl_mismatch(const SampledField& A, const SampledField& B);

/// Throws CurlMismatch when curl_mismatch(A, B) exceeds `gate`.
MagneticState make_magnetic_state(SampledField A, SampledField B, const HKBasis* basis = nullptr,
                                  FieldRule b_rule = {}, double gate = 5e-2);

/// A = BS(B) = curl P(B) with P the 1/r vector potential, both sampled on `grid`.
MagneticState potential_state(const AnalyticField& B, const GridPtr& grid, const HKBasis* basis = nullptr,
                              const BSOptions& opts = {});

double magnetic_bs_helicity(const SampledField& B, const BSOptions& opts = {});

/// <A | B> on the state grid.
double potential_helicity(const MagneticState& s);

struct HmRate {
    double flux_circulation = 0.0;  // sum Phi_i kappa_i
    double l2_form = 0.0;           // <Pi | B>, equal to <Pi | B^HK> by orthogonality
    std::vector<double> fluxes;
};

/// Both forms of dH_M/dt. Fluxes come from `b_rule` through the basis
/// sections; the L2 form integrates Pi . B over `grid`.
HmRate hm_rate(const GaugeChoice& pi, const FieldRule& b_rule, const HKBasis& basis, const GridPtr& grid);

struct HmRateCheck {
    double rate_formula = 0.0;
    double rate_fd = 0.0;
    double dt = 0.0;
    double drift = 0.0;  // rate_fd - rate_formula
    double hm = 0.0;     // H_M before the step
};

/// One explicit Euler step A' = A + dt (u x B_h + grad(phi) + Pi) with
/// B_h = curl_h A, then rate_fd = (H(A') - H(A)) / dt where
/// H(X) = <X | curl_h X> on the depth-2 cells of the curl grid.
/// Requires the state basis. Throws NonDomainPreservingFlow unless `flow` is a
/// rotation or twist about the axis shared by every basis torus.
HmRateCheck hm_rate_fd_check(const MagneticState& s, const FlowFamily& flow, const GaugeChoice& pi, double dt);

/// <u | B> on a shared grid.
double cross_helicity(const SampledField& u, const SampledField& B);

struct ThinTubeReport {
    double cross_helicity = 0.0;    // <BS(omega) | B> over the B tube
    double mutual_helicity = 0.0;   // <omega | BS(B)> over the omega tube
    double link = 0.0;              // linking number of the two core loops
    double expected = 0.0;          // link * flux_omega * flux_B
};

/// Two untwisted tubes sampled at spacing h. Throws OverlappingDomains when
/// the tube supports share a cell center.
ThinTubeReport thin_tube_check(const TubeField& omega_tube, const TubeField& b_tube, double h,
                               const BSOptions& opts = {}, int loop_segments = 256);

/// <u - alpha A | B>.
double helicity_difference_mhd(const SampledField& u, const SampledField& A, const SampledField& B, double alpha);

}  // namespace helicity
