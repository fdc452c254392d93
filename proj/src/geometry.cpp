#include "helicity/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "helicity/error.hpp"

namespace helicity {

namespace {

void check_finite(const Vec3& v, const char* what) {
    if (!is_finite(v)) throw Error(ErrorKind::InvalidDomain, std::string(what) + " is not finite");
}

void validate_frame(const Frame& f) {
    check_finite(f.origin, "frame origin");
    const double tol = 1e-9;
    const bool ok = std::abs(norm(f.e1) - 1) < tol && std::abs(norm(f.e2) - 1) < tol &&
                    std::abs(norm(f.e3) - 1) < tol && std::abs(dot(f.e1, f.e2)) < tol &&
                    std::abs(dot(f.e1, f.e3)) < tol && std::abs(dot(f.e2, f.e3)) < tol &&
                    dot(cross(f.e1, f.e2), f.e3) > 0;
    if (!ok) throw Error(ErrorKind::InvalidDomain, "frame axes are not right-handed orthonormal");
}

void validate(const Ball& b) {
    check_finite(b.center, "ball center");
    if (!(b.radius > 0) || !std::isfinite(b.radius))
        throw Error(ErrorKind::InvalidDomain, "ball radius must be positive");
}

void validate(const AxisymTorus& t) {
    validate_frame(t.frame);
    if (!(t.minor_radius > 0) || !(t.minor_radius < t.major_radius) || !std::isfinite(t.major_radius))
        throw Error(ErrorKind::InvalidDomain, "torus requires 0 < minor_radius < major_radius");
}

struct BoundingSphere {
    Vec3 center;
    double radius;
};

BoundingSphere bounding_sphere(const Primitive& p) {
    return std::visit(
        [](const auto& s) -> BoundingSphere {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Ball>)
                return {s.center, s.radius};
            else
                return {s.frame.origin, s.major_radius + s.minor_radius};
        },
        p);
}

void primitive_bounds(const Primitive& p, Vec3& lo, Vec3& hi) {
    std::visit(
        [&](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Ball>) {
                const Vec3 r{s.radius, s.radius, s.radius};
                lo = s.center - r;
                hi = s.center + r;
            } else {
                // Extent along world axis k: R*sqrt(1 - n_k^2) + a.
                const Vec3& n = s.frame.e3;
                Vec3 ext;
                for (int k = 0; k < 3; ++k)
                    ext[k] = s.major_radius * std::sqrt(std::max(0.0, 1.0 - n[k] * n[k])) + s.minor_radius;
                lo = s.frame.origin - ext;
                hi = s.frame.origin + ext;
            }
        },
        p);
}

}  // namespace

Frame Frame::from_axis(const Vec3& origin, const Vec3& axis, std::optional<Vec3> x_hint) {
    const double len = norm(axis);
    if (!(len > 0) || !std::isfinite(len)) throw Error(ErrorKind::InvalidDomain, "frame axis must be nonzero");
    Frame f;
    f.origin = origin;
    f.e3 = axis / len;
    Vec3 hint;
    if (x_hint) {
        hint = *x_hint;
    } else {
        // Least-aligned world axis gives a well-conditioned perpendicular.
        const Vec3 a{std::abs(f.e3.x), std::abs(f.e3.y), std::abs(f.e3.z)};
        hint = (a.x <= a.y && a.x <= a.z) ? Vec3{1, 0, 0} : (a.y <= a.z ? Vec3{0, 1, 0} : Vec3{0, 0, 1});
    }
    Vec3 e1 = hint - f.e3 * dot(hint, f.e3);
    const double l1 = norm(e1);
    if (!(l1 > 1e-12)) throw Error(ErrorKind::InvalidDomain, "frame x hint is parallel to the axis");
    f.e1 = e1 / l1;
    f.e2 = cross(f.e3, f.e1);
    return f;
}

Domain Domain::ball(const Vec3& center, double radius) {
    Ball b{center, radius};
    validate(b);
    Domain d;
    d.kind_ = DomainKind::Ball;
    d.components_ = {b};
    return d;
}

Domain Domain::torus(const Frame& frame, double major_radius, double minor_radius) {
    AxisymTorus t{frame, major_radius, minor_radius};
    validate(t);
    Domain d;
    d.kind_ = DomainKind::Torus;
    d.components_ = {t};
    return d;
}

Domain Domain::union_of(std::vector<Primitive> components) {
    if (components.empty()) throw Error(ErrorKind::InvalidDomain, "union needs at least one component");
    for (const auto& c : components) std::visit([](const auto& s) { validate(s); }, c);
    for (std::size_t i = 0; i < components.size(); ++i)
        for (std::size_t j = i + 1; j < components.size(); ++j) {
            const auto a = bounding_sphere(components[i]);
            const auto b = bounding_sphere(components[j]);
            if (norm(a.center - b.center) <= a.radius + b.radius)
                throw Error(ErrorKind::OverlappingDomains,
                            "union components " + std::to_string(i) + " and " + std::to_string(j) +
                                " have intersecting bounding spheres");
        }
    Domain d;
    d.kind_ = DomainKind::Union;
    d.components_ = std::move(components);
    return d;
}

std::vector<AxisymTorus> Domain::tori() const {
    std::vector<AxisymTorus> out;
    for (const auto& c : components_)
        if (const auto* t = std::get_if<AxisymTorus>(&c)) out.push_back(*t);
    return out;
}

bool contains(const Primitive& prim, const Vec3& p) {
    return std::visit(
        [&](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Ball>) {
                return norm2(p - s.center) <= s.radius * s.radius;
            } else {
                const Vec3 q = s.frame.to_local(p);
                const double rho = std::hypot(q.x, q.y);
                const double dr = rho - s.major_radius;
                return dr * dr + q.z * q.z <= s.minor_radius * s.minor_radius;
            }
        },
        prim);
}

bool Domain::contains(const Vec3& p) const {
    for (const auto& c : components_)
        if (helicity::contains(c, p)) return true;
    return false;
}

bool contains(const Domain& domain, const Vec3& p) { return domain.contains(p); }

bool contains(const Domain& domain, const Vec3& p, double tolerance) {
    for (const auto& c : domain.components()) {
        const bool in = std::visit(
            [&](const auto& s) {
                using T = std::decay_t<decltype(s)>;
                if constexpr (std::is_same_v<T, Ball>) {
                    return norm(p - s.center) <= s.radius + tolerance;
                } else {
                    const Vec3 q = s.frame.to_local(p);
                    return std::hypot(std::hypot(q.x, q.y) - s.major_radius, q.z) <= s.minor_radius + tolerance;
                }
            },
            c);
        if (in) return true;
    }
    return false;
}

double length_scale(const Domain& domain) {
    double L = 0.0;
    for (const auto& c : domain.components()) L = std::max(L, bounding_sphere(c).radius);
    return L;
}

void Domain::bounds(Vec3& lo, Vec3& hi) const {
    const double inf = std::numeric_limits<double>::infinity();
    lo = {inf, inf, inf};
    hi = {-inf, -inf, -inf};
    for (const auto& c : components_) {
        Vec3 l, h;
        primitive_bounds(c, l, h);
        for (int k = 0; k < 3; ++k) {
            lo[k] = std::min(lo[k], l[k]);
            hi[k] = std::max(hi[k], h[k]);
        }
    }
}

double Domain::volume() const {
    double v = 0;
    for (const auto& c : components_)
        std::visit(
            [&](const auto& s) {
                using T = std::decay_t<decltype(s)>;
                if constexpr (std::is_same_v<T, Ball>)
                    v += 4.0 / 3.0 * kPi * s.radius * s.radius * s.radius;
                else
                    v += 2 * kPi * kPi * s.major_radius * s.minor_radius * s.minor_radius;
            },
            c);
    return v;
}

double Domain::area() const {
    double a = 0;
    for (const auto& c : components_)
        std::visit(
            [&](const auto& s) {
                using T = std::decay_t<decltype(s)>;
                if constexpr (std::is_same_v<T, Ball>)
                    a += 4 * kPi * s.radius * s.radius;
                else
                    a += 4 * kPi * kPi * s.major_radius * s.minor_radius;
            },
            c);
    return a;
}

// ---------------------------------------------------------------------------
// MaskedGrid

MaskedGrid::MaskedGrid(const Vec3& origin, double h, std::array<int, 3> dims, std::vector<std::uint8_t> mask)
    : origin_(origin), h_(h), dims_(dims) {
    const std::size_t total = static_cast<std::size_t>(dims[0]) * dims[1] * dims[2];
    if (mask.size() != total) throw Error(ErrorKind::InvalidArgument, "mask size does not match grid dims");
    index_of_.assign(total, -1);
    for (std::size_t l = 0; l < total; ++l)
        if (mask[l]) {
            index_of_[l] = static_cast<std::int32_t>(cells_.size());
            cells_.push_back(l);
        }

    // Depth by repeated 26-neighbourhood erosion. Cells on the box edge count
    // as touching the outside.
    std::vector<std::uint8_t> cur(mask.begin(), mask.end());
    depth_.assign(cells_.size(), 0);
    const int nx = dims[0], ny = dims[1], nz = dims[2];
    for (int level = 1; level <= kMaxDepth; ++level) {
        std::vector<std::uint8_t> next(total, 0);
        bool any = false;
        for (std::size_t n = 0; n < cells_.size(); ++n) {
            const std::size_t l = cells_[n];
            if (!cur[l]) continue;
            const int i = static_cast<int>(l % nx);
            const int j = static_cast<int>((l / nx) % ny);
            const int k = static_cast<int>(l / (static_cast<std::size_t>(nx) * ny));
            bool keep = i > 0 && j > 0 && k > 0 && i < nx - 1 && j < ny - 1 && k < nz - 1;
            for (int dk = -1; keep && dk <= 1; ++dk)
                for (int dj = -1; keep && dj <= 1; ++dj)
                    for (int di = -1; keep && di <= 1; ++di)
                        if (!cur[linear_index(i + di, j + dj, k + dk)]) keep = false;
            if (keep) {
                next[l] = 1;
                depth_[n] = static_cast<std::int8_t>(level);
                any = true;
            }
        }
        if (!any) break;
        cur.swap(next);
    }
}

std::array<int, 3> MaskedGrid::cell_ijk(std::size_t n) const {
    const std::size_t l = cells_[n];
    const std::size_t nx = dims_[0], ny = dims_[1];
    return {static_cast<int>(l % nx), static_cast<int>((l / nx) % ny), static_cast<int>(l / (nx * ny))};
}

Vec3 MaskedGrid::cell_center(std::size_t n) const {
    const auto ijk = cell_ijk(n);
    return center_of(ijk[0], ijk[1], ijk[2]);
}

std::int64_t MaskedGrid::masked_index(int i, int j, int k) const {
    if (i < 0 || j < 0 || k < 0 || i >= dims_[0] || j >= dims_[1] || k >= dims_[2]) return -1;
    return index_of_[linear_index(i, j, k)];
}

std::size_t MaskedGrid::count_with_depth(int min_depth) const {
    return static_cast<std::size_t>(
        std::count_if(depth_.begin(), depth_.end(), [&](std::int8_t d) { return d >= min_depth; }));
}

std::vector<Vec3> MaskedGrid::centers() const {
    std::vector<Vec3> out(cells_.size());
    for (std::size_t n = 0; n < cells_.size(); ++n) out[n] = cell_center(n);
    return out;
}

const GridPtr& MaskedGrid::stencil_grid() const {
    std::call_once(stencil_once_, [this] { stencil_ = restrict_to_depth(*this, 2); });
    return stencil_;
}

GridPtr build_grid(const Domain& domain, double h, int padding) {
    if (!(h > 0) || !std::isfinite(h)) throw Error(ErrorKind::InvalidArgument, "grid spacing must be positive");
    if (padding < 0) throw Error(ErrorKind::InvalidArgument, "padding must be non-negative");
    Vec3 lo, hi;
    domain.bounds(lo, hi);
    for (int k = 0; k < 3; ++k)
        if (hi[k] - lo[k] < h)
            throw Error(ErrorKind::DegenerateGrid, "grid spacing exceeds the domain extent");
    std::array<int, 3> dims{};
    Vec3 origin;
    for (int k = 0; k < 3; ++k) {
        const double span = hi[k] - lo[k] + 2.0 * padding * h;
        const double cells = std::ceil(span / h - 1e-9);
        if (cells > 4096) throw Error(ErrorKind::InvalidArgument, "grid too large");
        dims[k] = std::max(1, static_cast<int>(cells));
        origin[k] = 0.5 * (lo[k] + hi[k]) - 0.5 * dims[k] * h;
    }
    const std::size_t total = static_cast<std::size_t>(dims[0]) * dims[1] * dims[2];
    std::vector<std::uint8_t> mask(total, 0);
    std::size_t inside = 0;
    for (int k = 0; k < dims[2]; ++k)
        for (int j = 0; j < dims[1]; ++j)
            for (int i = 0; i < dims[0]; ++i) {
                const Vec3 c = origin + Vec3{(i + 0.5) * h, (j + 0.5) * h, (k + 0.5) * h};
                if (domain.contains(c)) {
                    mask[static_cast<std::size_t>(i) + dims[0] * (static_cast<std::size_t>(j) + dims[1] * k)] = 1;
                    ++inside;
                }
            }
    if (inside == 0) throw Error(ErrorKind::DegenerateGrid, "no cell center lies inside the domain");
    return std::make_shared<const MaskedGrid>(origin, h, dims, std::move(mask));
}

GridPtr restrict_to_depth(const MaskedGrid& grid, int min_depth) {
    const auto& d = grid.dims();
    std::vector<std::uint8_t> mask(static_cast<std::size_t>(d[0]) * d[1] * d[2], 0);
    std::size_t kept = 0;
    for (std::size_t n = 0; n < grid.cell_count(); ++n)
        if (grid.interior_depth(n) >= min_depth) {
            mask[grid.cell_linear(n)] = 1;
            ++kept;
        }
    if (kept == 0)
        throw Error(ErrorKind::DegenerateStencil,
                    "no cell with interior depth >= " + std::to_string(min_depth));
    return std::make_shared<const MaskedGrid>(grid.origin(), grid.spacing(), d, std::move(mask));
}

bool same_geometry(const MaskedGrid& a, const MaskedGrid& b) {
    return a.origin() == b.origin() && a.spacing() == b.spacing() && a.dims() == b.dims();
}

// ---------------------------------------------------------------------------
// Surfaces, curves, sections

SurfacePatchSet boundary_samples(const Domain& domain, int n_u, int n_v) {
    if (n_u < 8 || n_v < 8) throw Error(ErrorKind::InvalidArgument, "boundary sampling needs n_u, n_v >= 8");
    SurfacePatchSet out;
    out.reserve(domain.components().size() * static_cast<std::size_t>(n_u) * n_v);
    for (const auto& comp : domain.components()) {
        if (const auto* b = std::get_if<Ball>(&comp)) {
            // u: polar angle, v: azimuth.
            const double dth = kPi / n_u, dph = 2 * kPi / n_v;
            const double r = b->radius;
            for (int iu = 0; iu < n_u; ++iu) {
                const double th = (iu + 0.5) * dth;
                const double st = std::sin(th), ct = std::cos(th);
                for (int iv = 0; iv < n_v; ++iv) {
                    const double ph = (iv + 0.5) * dph;
                    const Vec3 n{st * std::cos(ph), st * std::sin(ph), ct};
                    out.push_back({b->center + n * r, n, r * r * st * dth * dph});
                }
            }
        } else {
            const auto& t = std::get<AxisymTorus>(comp);
            // u: poloidal angle, v: azimuth.
            const double dth = 2 * kPi / n_u, dph = 2 * kPi / n_v;
            const double R = t.major_radius, a = t.minor_radius;
            for (int iu = 0; iu < n_u; ++iu) {
                const double th = (iu + 0.5) * dth;
                const double ct = std::cos(th), st = std::sin(th);
                for (int iv = 0; iv < n_v; ++iv) {
                    const double ph = (iv + 0.5) * dph;
                    const double cp = std::cos(ph), sp = std::sin(ph);
                    const Vec3 nl{ct * cp, ct * sp, st};
                    const Vec3 pl{(R + a * ct) * cp, (R + a * ct) * sp, a * st};
                    out.push_back({t.frame.to_world(pl), t.frame.direction_to_world(nl), a * (R + a * ct) * dth * dph});
                }
            }
        }
    }
    return out;
}

double PolylineCurve::length() const {
    double L = 0;
    for (std::size_t s = 0; s < segment_count(); ++s) L += norm(segment_end(s) - segment_start(s));
    return L;
}

void validate(const PolylineCurve& c) {
    if (c.vertices.size() < 2) throw Error(ErrorKind::InvalidArgument, "curve needs at least two vertices");
    for (const auto& v : c.vertices)
        if (!is_finite(v)) throw Error(ErrorKind::InvalidArgument, "curve vertex is not finite");
    if (c.closed && c.vertices.front() == c.vertices.back())
        throw Error(ErrorKind::InvalidArgument, "closed curve repeats its first vertex");
    for (std::size_t s = 0; s < c.segment_count(); ++s)
        if (c.segment_start(s) == c.segment_end(s))
            throw Error(ErrorKind::InvalidArgument, "consecutive curve vertices coincide");
}

PolylineCurve circle_curve(const Vec3& center, const Vec3& normal, double radius, int n, std::optional<Vec3> x_hint) {
    if (n < 3) throw Error(ErrorKind::InvalidArgument, "circle needs at least three vertices");
    if (!(radius > 0)) throw Error(ErrorKind::InvalidArgument, "circle radius must be positive");
    const Frame f = Frame::from_axis(center, normal, x_hint);
    PolylineCurve c;
    c.closed = true;
    c.vertices.reserve(n);
    for (int k = 0; k < n; ++k) {
        const double ph = 2 * kPi * k / n;
        c.vertices.push_back(f.to_world({radius * std::cos(ph), radius * std::sin(ph), 0}));
    }
    return c;
}

PolylineCurve core_loop(const AxisymTorus& torus, int n_seg) {
    if (n_seg < 16) throw Error(ErrorKind::InvalidArgument, "core loop needs at least 16 segments");
    PolylineCurve c;
    c.closed = true;
    c.vertices.reserve(n_seg);
    for (int k = 0; k < n_seg; ++k) {
        const double ph = 2 * kPi * k / n_seg;
        c.vertices.push_back(
            torus.frame.to_world({torus.major_radius * std::cos(ph), torus.major_radius * std::sin(ph), 0}));
    }
    return c;
}

CrossSection cross_section(const AxisymTorus& torus, int n_r, int n_phi, std::size_t torus_index) {
    if (n_r < 8 || n_phi < 8) throw Error(ErrorKind::InvalidArgument, "cross section needs n_r, n_phi >= 8");
    CrossSection cs;
    cs.torus_index = torus_index;
    cs.samples.reserve(static_cast<std::size_t>(n_r) * n_phi);
    const double a = torus.minor_radius, R = torus.major_radius;
    const double dr = a / n_r, dth = 2 * kPi / n_phi;
    const Vec3 normal = torus.frame.e2;
    for (int ir = 0; ir < n_r; ++ir) {
        const double r = (ir + 0.5) * dr;
        for (int it = 0; it < n_phi; ++it) {
            const double th = (it + 0.5) * dth;
            const Vec3 local{R + r * std::cos(th), 0.0, r * std::sin(th)};
            cs.samples.push_back({torus.frame.to_world(local), normal, r * dr * dth});
        }
    }
    return cs;
}

VolumeQuadrature quadrature_of(const MaskedGrid& grid) {
    VolumeQuadrature q;
    q.points = grid.centers();
    q.weights.assign(grid.cell_count(), grid.cell_volume());
    q.stencil_ok.resize(grid.cell_count());
    for (std::size_t n = 0; n < grid.cell_count(); ++n) q.stencil_ok[n] = grid.interior_depth(n) >= 2 ? 1 : 0;
    q.spacing = grid.spacing();
    return q;
}

}  // namespace helicity
