/// @file fields.hpp
/// @brief Analytic test-field catalog, grid-sampled fields, and the central
/// difference curl/divergence operators.
#pragma once

#include <functional>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "helicity/geometry.hpp"

namespace helicity {

/// Azimuthal flux tube around a circular core, optionally twisted.
/// Toroidal part: flux * p(r/eps) / norm along the core azimuth.
/// Poloidal part (twist != 0): grad(psi) x grad(azimuth) with
/// psi = twist * flux * p(r/eps) / (2 pi p(0)), carrying poloidal flux twist*flux.
struct TubeField {
    Frame frame;
    double loop_radius = 1.0;
    double tube_radius = 0.2;
    double flux = 1.0;
    double twist = 0.0;
    double norm = 1.0;  // meridian-disk integral of the profile
};

/// azimuth_hat / (2 pi rho) inside the torus, zero outside.
struct HarmonicTorusField {
    AxisymTorus torus;
};

/// Axisymmetric curl eigenfield of a ball: curl F = xi F, tangent to the sphere.
struct SpheromakField {
    Ball ball;
    double amplitude = 1.0;
    double xi = 0.0;
};

/// Gradient of linear . x + x^T Q x / 2 + xyz * x y z.
struct GradientField {
    Vec3 linear{};
    Mat3 quadratic{};
    double xyz = 0.0;
};

class AnalyticField;

struct LinearCombination {
    std::vector<double> coeffs;
    std::vector<AnalyticField> fields;
};

class AnalyticField {
public:
    using Variant = std::variant<TubeField, HarmonicTorusField, SpheromakField, GradientField, LinearCombination>;

    AnalyticField() : v_(GradientField{}) {}
    explicit AnalyticField(Variant v) : v_(std::move(v)) {}

    static AnalyticField zero() { return AnalyticField(); }

    Vec3 operator()(const Vec3& p) const;
    const Variant& variant() const { return v_; }

private:
    Variant v_;
};

AnalyticField operator*(double c, const AnalyticField& f);
AnalyticField operator+(const AnalyticField& a, const AnalyticField& b);
AnalyticField linear_combination(std::vector<double> coeffs, std::vector<AnalyticField> fields);

/// Closed-form curl where the catalog knows it (harmonic and gradient fields
/// give zero, spheromak gives xi*F); nullopt for tubes.
std::optional<AnalyticField> analytic_curl(const AnalyticField& f);

/// Batched field evaluation: points in, vectors out (same length).
using FieldRule = std::function<std::vector<Vec3>(std::span<const Vec3>)>;

FieldRule rule_of(const AnalyticField& f);
FieldRule rule_of(std::function<Vec3(const Vec3&)> pointwise);
/// sum_k coeffs[k] * rules[k]
FieldRule combine(std::vector<double> coeffs, std::vector<FieldRule> rules);

/// Throws InvalidTube unless 0 < tube_radius < loop_radius.
AnalyticField make_tube_field(const Frame& loop_frame, double loop_radius, double tube_radius, double flux,
                              double twist = 0.0);
/// Solid torus carrying a tube field's support.
AxisymTorus tube_torus(const TubeField& t);

AnalyticField make_harmonic_torus_field(const AxisymTorus& torus);

struct Spheromak {
    AnalyticField field;
    double xi;
};
Spheromak make_spheromak(const Ball& ball, double amplitude);

AnalyticField make_gradient_field(const Vec3& linear, const Mat3& quadratic = {}, double xyz = 0.0);
AnalyticField make_constant_field(const Vec3& value);

double spherical_j1(double x);
/// First positive root of j1, by bisection.
double first_j1_root();

/// Positive density rule. Evaluation throws InvalidArgument on a
/// non-positive or non-finite value.
struct DensityField {
    std::function<double(const Vec3&)> rule;

    static DensityField uniform(double value = 1.0);
    double operator()(const Vec3& p) const;
};

/// Vector values at the masked cells of a grid, in the grid's cell order.
struct SampledField {
    GridPtr grid;
    std::vector<Vec3> values;

    std::size_t size() const { return values.size(); }
    const Vec3& operator[](std::size_t n) const { return values[n]; }
    /// Value at cell (i,j,k); throws OutsideDomain when the cell is not masked.
    const Vec3& at(int i, int j, int k) const;
};

struct ScalarSamples {
    GridPtr grid;
    std::vector<double> values;
};

SampledField sample(const GridPtr& grid, const AnalyticField& f);
SampledField sample(const GridPtr& grid, const FieldRule& f);

/// Values of `f` on `sub`, a grid with the same geometry whose cells are a
/// subset of f's. Throws GridMismatch otherwise.
SampledField restrict_to(const SampledField& f, const GridPtr& sub);

SampledField operator*(double c, const SampledField& f);
/// a*f + b*g on a shared grid.
SampledField axpby(double a, const SampledField& f, double b, const SampledField& g);

/// Central second-order curl on f.grid->stencil_grid().
SampledField curl(const SampledField& f);
ScalarSamples divergence(const SampledField& f);

/// sum f.g h^3 in cell order; throws GridMismatch unless both share one grid object.
double l2_inner(const SampledField& f, const SampledField& g);
double field_energy(const SampledField& f);
double l2_norm(const SampledField& f);
double max_norm(const SampledField& f);
double max_abs(const ScalarSamples& s);

/// Pointwise central-difference operators for closed-form rules.
Vec3 curl_at(const std::function<Vec3(const Vec3&)>& f, const Vec3& p, double step);
double divergence_at(const std::function<Vec3(const Vec3&)>& f, const Vec3& p, double step);

/// Central-difference curl of a batched rule at each point (one batched
/// evaluation of all six neighbours per point).
std::vector<Vec3> stencil_curl(const FieldRule& f, std::span<const Vec3> pts, double step);
std::vector<double> stencil_divergence(const FieldRule& f, std::span<const Vec3> pts, double step);

}  // namespace helicity
