/// @file geometry.hpp
/// @brief Domains (balls, axisymmetric solid tori, disjoint unions), masked
/// Cartesian grids, and the analytic surface / section / loop samplings that
/// every integral in the library is built on.
///
/// Orientation conventions are fixed here once:
///   - boundary normals point outward;
///   - a torus core loop runs in the direction of increasing azimuth about the
///     torus frame's e3 axis;
///   - a torus cross section sits at azimuth 0 and its normal is the loop
///     tangent there (frame e2), so section flux and loop circulation are
///     compatibly oriented.
#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "helicity/vec3.hpp"

namespace helicity {

/// Rigid pose: an origin plus a right-handed orthonormal basis.
struct Frame {
    Vec3 origin{};
    Vec3 e1{1, 0, 0};
    Vec3 e2{0, 1, 0};
    Vec3 e3{0, 0, 1};

    /// Frame with e3 along `axis`; e1 is `x_hint` orthogonalized, or a
    /// deterministic perpendicular when no hint is given.
    static Frame from_axis(const Vec3& origin, const Vec3& axis,
                           std::optional<Vec3> x_hint = std::nullopt);

    Vec3 to_local(const Vec3& p) const {
        const Vec3 d = p - origin;
        return {dot(d, e1), dot(d, e2), dot(d, e3)};
    }
    Vec3 to_world(const Vec3& q) const { return origin + e1 * q.x + e2 * q.y + e3 * q.z; }
    Vec3 direction_to_world(const Vec3& v) const { return e1 * v.x + e2 * v.y + e3 * v.z; }
    Vec3 direction_to_local(const Vec3& v) const { return {dot(v, e1), dot(v, e2), dot(v, e3)}; }
};

struct Ball {
    Vec3 center{};
    double radius = 1.0;
};

struct AxisymTorus {
    Frame frame{};
    double major_radius = 2.0;
    double minor_radius = 1.0;
};

using Primitive = std::variant<Ball, AxisymTorus>;

enum class DomainKind { Ball, Torus, Union };

/// A ball, a torus, or a disjoint union of balls and tori.
class Domain {
public:
    static Domain ball(const Vec3& center, double radius);
    static Domain torus(const Frame& frame, double major_radius, double minor_radius);
    static Domain torus(const AxisymTorus& t) { return torus(t.frame, t.major_radius, t.minor_radius); }
    /// Throws OverlappingDomains when two components' bounding spheres intersect.
    static Domain union_of(std::vector<Primitive> components);

    DomainKind kind() const { return kind_; }
    const std::vector<Primitive>& components() const { return components_; }
    std::vector<AxisymTorus> tori() const;

    /// Closed-region containment.
    bool contains(const Vec3& p) const;

    /// Axis-aligned bounding box.
    void bounds(Vec3& lo, Vec3& hi) const;

    /// Analytic volume (sum over components).
    double volume() const;
    double area() const;

private:
    DomainKind kind_ = DomainKind::Ball;
    std::vector<Primitive> components_;
};

bool contains(const Domain& domain, const Vec3& p);
bool contains(const Primitive& prim, const Vec3& p);
/// Containment in the region grown outward by `tolerance` (a length).
bool contains(const Domain& domain, const Vec3& p, double tolerance);
/// Largest component size (ball radius, torus R + a); sets tolerance scales.
double length_scale(const Domain& domain);

/// Masked uniform Cartesian grid. Cell (i,j,k) has center
/// origin + h*(i+1/2, j+1/2, k+1/2); masked cells are enumerated in
/// increasing linear index i + nx*(j + ny*k), and that order is the
/// accumulation order of every reduction in the library.
class MaskedGrid {
public:
    static constexpr int kMaxDepth = 4;

    MaskedGrid(const Vec3& origin, double h, std::array<int, 3> dims, std::vector<std::uint8_t> mask);

    const Vec3& origin() const { return origin_; }
    double spacing() const { return h_; }
    double cell_volume() const { return h_ * h_ * h_; }
    const std::array<int, 3>& dims() const { return dims_; }

    std::size_t cell_count() const { return cells_.size(); }
    std::size_t linear_index(int i, int j, int k) const {
        return static_cast<std::size_t>(i) +
               static_cast<std::size_t>(dims_[0]) *
                   (static_cast<std::size_t>(j) + static_cast<std::size_t>(dims_[1]) * k);
    }
    /// Linear index of the n-th masked cell.
    std::size_t cell_linear(std::size_t n) const { return cells_[n]; }
    std::array<int, 3> cell_ijk(std::size_t n) const;
    Vec3 cell_center(std::size_t n) const;
    Vec3 center_of(int i, int j, int k) const {
        return origin_ + Vec3{(i + 0.5) * h_, (j + 0.5) * h_, (k + 0.5) * h_};
    }

    /// Masked index of cell (i,j,k), or -1 when outside the mask or the box.
    std::int64_t masked_index(int i, int j, int k) const;
    bool inside(int i, int j, int k) const { return masked_index(i, j, k) >= 0; }

    /// Number of 26-neighbourhood erosions the cell survives, capped at
    /// kMaxDepth. depth >= d means the (2d+1)^3 block around the cell is inside.
    int interior_depth(std::size_t n) const { return depth_[n]; }
    std::size_t count_with_depth(int min_depth) const;

    std::vector<Vec3> centers() const;

    /// Sub-grid of cells with interior_depth >= 2 (where central stencils
    /// fit), built once and shared so results on it compare by pointer.
    /// Throws DegenerateStencil when empty.
    const std::shared_ptr<const MaskedGrid>& stencil_grid() const;

private:
    Vec3 origin_;
    double h_;
    std::array<int, 3> dims_;
    std::vector<std::int32_t> index_of_;  // linear -> masked index or -1
    std::vector<std::size_t> cells_;      // masked index -> linear
    std::vector<std::int8_t> depth_;      // per masked cell
    mutable std::once_flag stencil_once_;
    mutable std::shared_ptr<const MaskedGrid> stencil_;
};

using GridPtr = std::shared_ptr<const MaskedGrid>;

/// Grid over the domain's bounding box grown by padding*h, centered on the box.
/// Throws DegenerateGrid when h exceeds an extent of the box or no cell center
/// lies inside.
GridPtr build_grid(const Domain& domain, double h, int padding = 2);

/// Same geometry, mask reduced to cells with interior_depth >= min_depth.
/// Throws DegenerateStencil when no such cell exists.
GridPtr restrict_to_depth(const MaskedGrid& grid, int min_depth);

/// True when `sub` has the same origin, spacing and dims as `grid`.
bool same_geometry(const MaskedGrid& a, const MaskedGrid& b);

struct SurfaceSample {
    Vec3 point;
    Vec3 normal;  // unit
    double area;  // dA
};

using SurfacePatchSet = std::vector<SurfaceSample>;

/// Midpoint parameter-grid samples of the domain boundary with exact outward
/// normals and area elements. Requires n_u, n_v >= 8.
SurfacePatchSet boundary_samples(const Domain& domain, int n_u, int n_v);

struct PolylineCurve {
    std::vector<Vec3> vertices;
    bool closed = true;

    std::size_t segment_count() const {
        return closed ? vertices.size() : (vertices.empty() ? 0 : vertices.size() - 1);
    }
    Vec3 segment_start(std::size_t s) const { return vertices[s]; }
    Vec3 segment_end(std::size_t s) const { return vertices[(s + 1) % vertices.size()]; }
    double length() const;
};

/// Validates the curve invariants (closed: first != last; consecutive
/// vertices distinct). Throws InvalidArgument.
void validate(const PolylineCurve& c);

/// Regular polygon with n vertices on the circle of `radius` about `center`
/// in the plane with normal `normal`, oriented counter-clockwise about it.
PolylineCurve circle_curve(const Vec3& center, const Vec3& normal, double radius, int n,
                           std::optional<Vec3> x_hint = std::nullopt);

struct CrossSection {
    std::size_t torus_index = 0;
    std::vector<SurfaceSample> samples;
};

/// Circle rho = R in the torus frame, n_seg >= 16 vertices, starting at azimuth 0.
PolylineCurve core_loop(const AxisymTorus& torus, int n_seg);

/// Meridian disk at azimuth 0 in polar midpoint sampling (n_r >= 8, n_phi >= 8);
/// normals equal the core loop tangent there.
CrossSection cross_section(const AxisymTorus& torus, int n_r, int n_phi, std::size_t torus_index = 0);

/// Volume quadrature: points, weights, and whether a central stencil of one
/// cell fits around the point (interior depth >= 2 on the source grid).
struct VolumeQuadrature {
    std::vector<Vec3> points;
    std::vector<double> weights;
    std::vector<std::uint8_t> stencil_ok;
    double spacing = 0.0;
};

VolumeQuadrature quadrature_of(const MaskedGrid& grid);

}  // namespace helicity
