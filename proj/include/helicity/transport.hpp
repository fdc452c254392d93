/// @file transport.hpp
/// @brief Analytic diffeomorphism families, pushforward transport of
/// divergence-free fields, and the conservation sweep.
///
/// A family supplies the map h_t, its inverse, the Jacobi matrix, its
/// determinant and the velocity dh_t/dt. The transported field is
/// omega_t(h_t(x)) = Lambda_t(x) omega_0(x) / J_t(x). Every volume integral
/// over the image domain is pulled back to a fixed grid on the initial domain
/// with weight J_t h^3.
#pragma once

#include <vector>

#include "helicity/biot_savart.hpp"
#include "helicity/hodge_hk.hpp"

namespace helicity {

/// Rotation at angular rate `rate` about the line through `center` along `axis`.
struct RigidRotation {
    Vec3 center{};
    Vec3 axis{0, 0, 1};
    double rate = 1.0;
};

/// Dilation about `center` by s(t) = 1 + amplitude sin(frequency t).
struct UniformPulsation {
    Vec3 center{};
    double amplitude = 0.3;
    double frequency = 1.0;
};

/// Rotation about the axis by angle t rate exp(-|x - center|^2 / width^2).
struct DifferentialTwist {
    Vec3 center{};
    Vec3 axis{0, 0, 1};
    double rate = 1.0;
    double width = 1.0;
};

/// Radial map r -> r (1 + amplitude sin(frequency t) exp(-r^2 / width^2)).
struct RadialCompress {
    Vec3 center{};
    double amplitude = 0.3;
    double frequency = 1.0;
    double width = 1.0;
};

class FlowFamily;

/// Stages applied in order: h = h_n o ... o h_1.
struct CompositeFlow {
    std::vector<FlowFamily> stages;
};

class FlowFamily {
public:
    using Variant = std::variant<RigidRotation, UniformPulsation, DifferentialTwist, RadialCompress, CompositeFlow>;

    /// Validates parameters (unit axes are normalized; amplitudes in (0,1)).
    explicit FlowFamily(Variant v);
    const Variant& variant() const { return v_; }

private:
    Variant v_;
};

struct FlowSample {
    Vec3 y;          // h_t(x)
    Mat3 jacobian;   // dy/dx
    double det = 1;  // J_t(x)
    Vec3 velocity;   // dh_t/dt at x, i.e. W_t(y)
};

/// Throws SingularFlow when J <= 0.
FlowSample evaluate_flow(const FlowFamily& fam, double t, const Vec3& x);
Vec3 inverse_flow(const FlowFamily& fam, double t, const Vec3& y);
/// Eulerian velocity W_t(y).
Vec3 flow_velocity(const FlowFamily& fam, double t, const Vec3& y);
FieldRule velocity_rule(const FlowFamily& fam, double t);

/// Image-domain rule y -> Lambda omega0(x) / J with x = h_t^{-1}(y). Throws
/// OutsideDomain when x is not in domain0 (up to a 1e-9 relative slack).
FieldRule transported_field(const FlowFamily& fam, double t, const AnalyticField& omega0, const Domain& domain0);

struct TransportedState {
    double t = 0.0;
    std::function<double(const Vec3&)> density;  // lambda_t(y) = lambda_0(x) / J
    FieldRule field;
};

TransportedState transported_state(const FlowFamily& fam, double t, const AnalyticField& omega0,
                                   const Domain& domain0, const DensityField& lambda0 = DensityField::uniform());

struct ContinuityReport {
    double max_residual = 0.0;  // max |d lambda/dt + div(lambda W)|
    double scale = 0.0;         // max |d lambda/dt|
    double relative = 0.0;      // max_residual / scale, or max_residual when scale == 0
};

/// Probes are points of the initial domain; each is mapped to h_t(x) at every
/// requested time and the continuity equation is checked there by central
/// differences (time step 1e-4, space step `space_step`).
ContinuityReport continuity_residual(const FlowFamily& fam, const std::vector<double>& times,
                                     const std::vector<Vec3>& probes, const DensityField& lambda0,
                                     double space_step = 1e-3);

/// Relative L2 residual of d omega/dt = curl(W x omega) at the pulled-back
/// cells of grid0 whose six-point stencil pulls back into domain0 (time step
/// 1e-4, space step an eighth of the grid spacing).
double transport_pde_residual(const FlowFamily& fam, double t, const AnalyticField& omega0, const Domain& domain0,
                              const GridPtr& grid0);

/// Pulled-back quadrature of the image domain: points h_t(x_i), weights J_i h^3.
struct PulledBack {
    VolumeQuadrature quad;
    std::vector<Vec3> omega;  // omega_t at the image points
    std::vector<Mat3> jacobian;
};

PulledBack pull_back(const FlowFamily& fam, double t, const AnalyticField& omega0, const MaskedGrid& grid0);

/// Boundary samples pushed forward with dS_t = cof(Lambda) dS_0.
SurfacePatchSet transport_surface(const FlowFamily& fam, double t, const SurfacePatchSet& s0);

struct SweepOptions {
    BSOptions bs{};
    int boundary_nu = 64;
    int boundary_nv = 64;
    int section_nr = 64;
    int section_nphi = 64;
    /// Time step for the energy finite difference, as a fraction of the sweep span.
    double fd_fraction = 1e-4;
    /// Curl stencil step of the energy-rate volume term, as a fraction of h.
    double curl_step_fraction = 0.25;
};

struct SweepRow {
    double t = 0.0;
    double H_bs = 0.0;
    double E = 0.0;
    double dEdt_formula = 0.0;
    double dEdt_fd = 0.0;
    std::vector<double> phi;  // flux through each transported torus section
};

struct SweepResult {
    std::vector<SweepRow> rows;
    double max_abs_J_minus_1 = 0.0;
    double max_tangency = 0.0;  // max |omega_t . n_t| / max |omega_t| on transported boundary
};

/// Throws SingularFlow if the flow is singular at any requested time.
SweepResult conservation_sweep(const FlowFamily& fam, const AnalyticField& omega0, const Domain& domain0,
                               const GridPtr& grid0, const std::vector<double>& times, const SweepOptions& opts = {});

}  // namespace helicity
