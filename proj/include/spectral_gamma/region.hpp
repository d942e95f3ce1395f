#pragma once

// Planar regions Ω ⊆ C built from a few primitive shapes with union,
// intersection and complement, plus connected-component labeling by flood
// fill on a grid. Grid neighbours are joined only when the segment between
// them stays clear of every primitive boundary, so thin removed sets (lines,
// circles) always separate components regardless of resolution.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <deque>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "spectral_gamma/errors.hpp"

namespace sgamma {

using Complex = std::complex<double>;

enum class PrimKind { Disk, HalfPlane, Rectangle, FullPlane, Point, LineRe, LineIm };

/// Disk and rectangle are open; Point and the lines are closed sets (use them
/// under a complement). HalfPlane is {Re z > t} (axis 0) or {Im z > t}
/// (axis 1), flipped when `greater` is false.
struct Primitive {
    PrimKind kind = PrimKind::FullPlane;
    Complex center{};      // Disk, Point
    double radius = 0;     // Disk
    int axis = 0;          // HalfPlane
    bool greater = true;   // HalfPlane
    double value = 0;      // HalfPlane threshold, LineRe / LineIm position
    double re0 = 0, re1 = 0, im0 = 0, im1 = 0;  // Rectangle

    static Primitive disk(Complex c, double r) {
        if (!(r > 0)) throw DomainError("disk radius must be positive");
        Primitive p;
        p.kind = PrimKind::Disk;
        p.center = c;
        p.radius = r;
        return p;
    }
    static Primitive half_plane(int axis, double t, bool greater) {
        if (axis != 0 && axis != 1) throw DomainError("half-plane axis must be re or im");
        Primitive p;
        p.kind = PrimKind::HalfPlane;
        p.axis = axis;
        p.value = t;
        p.greater = greater;
        return p;
    }
    static Primitive rectangle(double re0, double re1, double im0, double im1) {
        if (!(re0 < re1 && im0 < im1)) throw DomainError("rectangle needs re0 < re1 and im0 < im1");
        Primitive p;
        p.kind = PrimKind::Rectangle;
        p.re0 = re0;
        p.re1 = re1;
        p.im0 = im0;
        p.im1 = im1;
        return p;
    }
    static Primitive full_plane() { return {}; }
    static Primitive point(Complex z) {
        Primitive p;
        p.kind = PrimKind::Point;
        p.center = z;
        return p;
    }
    static Primitive line_re(double c) {
        Primitive p;
        p.kind = PrimKind::LineRe;
        p.value = c;
        return p;
    }
    static Primitive line_im(double c) {
        Primitive p;
        p.kind = PrimKind::LineIm;
        p.value = c;
        return p;
    }

    bool contains(Complex z) const {
        switch (kind) {
            case PrimKind::Disk: return std::abs(z - center) < radius;
            case PrimKind::HalfPlane: {
                double v = axis == 0 ? z.real() : z.imag();
                return greater ? v > value : v < value;
            }
            case PrimKind::Rectangle:
                return z.real() > re0 && z.real() < re1 && z.imag() > im0 && z.imag() < im1;
            case PrimKind::FullPlane: return true;
            case PrimKind::Point: return z == center;
            case PrimKind::LineRe: return z.real() == value;
            case PrimKind::LineIm: return z.imag() == value;
        }
        return false;
    }

    /// Distance from z to the boundary of the primitive (∞ for the plane).
    double boundary_distance(Complex z) const {
        switch (kind) {
            case PrimKind::Disk: return std::abs(std::abs(z - center) - radius);
            case PrimKind::HalfPlane: return std::abs((axis == 0 ? z.real() : z.imag()) - value);
            case PrimKind::Rectangle: {
                double best = std::numeric_limits<double>::infinity();
                for (auto [a, b] : edges()) best = std::min(best, segment_distance(z, a, b));
                return best;
            }
            case PrimKind::FullPlane: return std::numeric_limits<double>::infinity();
            case PrimKind::Point: return std::abs(z - center);
            case PrimKind::LineRe: return std::abs(z.real() - value);
            case PrimKind::LineIm: return std::abs(z.imag() - value);
        }
        return 0;
    }

    /// Whether the closed segment [p, q] meets a boundary curve of the
    /// primitive. Isolated points never separate an open planar set and are
    /// ignored.
    bool segment_crosses(Complex p, Complex q) const {
        switch (kind) {
            case PrimKind::Disk: {
                double near = segment_distance(center, p, q);
                double far = std::max(std::abs(p - center), std::abs(q - center));
                return near <= radius && radius <= far;
            }
            case PrimKind::HalfPlane:
                return axis == 0 ? between(value, p.real(), q.real()) : between(value, p.imag(), q.imag());
            case PrimKind::LineRe: return between(value, p.real(), q.real());
            case PrimKind::LineIm: return between(value, p.imag(), q.imag());
            case PrimKind::Rectangle:
                for (auto [a, b] : edges())
                    if (segments_intersect(p, q, a, b)) return true;
                return false;
            case PrimKind::FullPlane:
            case PrimKind::Point: return false;
        }
        return false;
    }

    /// Bounding box of the bounded geometry, if any.
    std::optional<std::array<double, 4>> extent() const {
        switch (kind) {
            case PrimKind::Disk:
                return std::array<double, 4>{center.real() - radius, center.real() + radius, center.imag() - radius,
                                             center.imag() + radius};
            case PrimKind::Rectangle: return std::array<double, 4>{re0, re1, im0, im1};
            case PrimKind::Point: return std::array<double, 4>{center.real(), center.real(), center.imag(), center.imag()};
            case PrimKind::HalfPlane:
                if (axis == 0) return std::array<double, 4>{value, value, 0, 0};
                return std::array<double, 4>{0, 0, value, value};
            case PrimKind::LineRe: return std::array<double, 4>{value, value, 0, 0};
            case PrimKind::LineIm: return std::array<double, 4>{0, 0, value, value};
            case PrimKind::FullPlane: return std::nullopt;
        }
        return std::nullopt;
    }

    static double segment_distance(Complex z, Complex a, Complex b) {
        Complex d = b - a;
        double len2 = std::norm(d);
        if (len2 == 0) return std::abs(z - a);
        double t = std::clamp(((z - a) * std::conj(d)).real() / len2, 0.0, 1.0);
        return std::abs(z - (a + t * d));
    }

private:
    static bool between(double v, double a, double b) { return std::min(a, b) <= v && v <= std::max(a, b); }

    std::array<std::pair<Complex, Complex>, 4> edges() const {
        Complex a{re0, im0}, b{re1, im0}, c{re1, im1}, d{re0, im1};
        return {{{a, b}, {b, c}, {c, d}, {d, a}}};
    }

    static double cross(Complex o, Complex a, Complex b) {
        return (a.real() - o.real()) * (b.imag() - o.imag()) - (a.imag() - o.imag()) * (b.real() - o.real());
    }

    static bool on_segment(Complex p, Complex a, Complex b) {
        return between(p.real(), a.real(), b.real()) && between(p.imag(), a.imag(), b.imag());
    }

    static bool segments_intersect(Complex p, Complex q, Complex a, Complex b) {
        double d1 = cross(a, b, p), d2 = cross(a, b, q), d3 = cross(p, q, a), d4 = cross(p, q, b);
        if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) return true;
        if (d1 == 0 && on_segment(p, a, b)) return true;
        if (d2 == 0 && on_segment(q, a, b)) return true;
        if (d3 == 0 && on_segment(a, p, q)) return true;
        if (d4 == 0 && on_segment(b, p, q)) return true;
        return false;
    }
};

enum class RegionOp { Leaf, Union, Intersection, Complement };

class Region {
public:
    Region() = default;
    explicit Region(Primitive p) : prim_(p) {}

    static Region leaf(Primitive p) { return Region(p); }
    static Region full_plane() { return Region(Primitive::full_plane()); }
    static Region unite(std::vector<Region> parts) { return combine(RegionOp::Union, std::move(parts)); }
    static Region intersect(std::vector<Region> parts) { return combine(RegionOp::Intersection, std::move(parts)); }
    static Region complement(Region r) {
        Region out;
        out.op_ = RegionOp::Complement;
        out.kids_.push_back(std::move(r));
        return out;
    }

    /// C ∖ {Re = 1/2}
    static Region omega0() { return complement(leaf(Primitive::line_re(0.5))); }
    /// C ∖ {-1}
    static Region omega1() { return complement(leaf(Primitive::point({-1.0, 0.0}))); }

    RegionOp op() const { return op_; }
    const Primitive& primitive() const { return prim_; }
    const std::vector<Region>& children() const { return kids_; }

    bool contains(Complex z) const {
        switch (op_) {
            case RegionOp::Leaf: return prim_.contains(z);
            case RegionOp::Union:
                return std::any_of(kids_.begin(), kids_.end(), [&](const Region& r) { return r.contains(z); });
            case RegionOp::Intersection:
                return std::all_of(kids_.begin(), kids_.end(), [&](const Region& r) { return r.contains(z); });
            case RegionOp::Complement: return !kids_.front().contains(z);
        }
        return false;
    }

    bool contains_zero() const { return contains(Complex(0, 0)); }

    std::vector<Primitive> primitives() const {
        std::vector<Primitive> out;
        collect(out);
        return out;
    }

    /// Distance from z to the nearest primitive boundary used in the tree.
    double boundary_distance(Complex z) const {
        double d = std::numeric_limits<double>::infinity();
        for (const auto& p : primitives()) d = std::min(d, p.boundary_distance(z));
        return d;
    }

    bool segment_crosses(Complex a, Complex b) const {
        for (const auto& p : primitives())
            if (p.segment_crosses(a, b)) return true;
        return false;
    }

    /// z ∈ Ω with boundary distance > margin.
    bool contains_with_margin(Complex z, double margin) const {
        return contains(z) && boundary_distance(z) > margin;
    }

private:
    static Region combine(RegionOp op, std::vector<Region> parts) {
        if (parts.empty()) throw DomainError("region union/intersection needs at least one operand");
        Region out;
        out.op_ = op;
        out.kids_ = std::move(parts);
        return out;
    }

    void collect(std::vector<Primitive>& out) const {
        if (op_ == RegionOp::Leaf) out.push_back(prim_);
        for (const auto& k : kids_) k.collect(out);
    }

    RegionOp op_ = RegionOp::Leaf;
    Primitive prim_;
    std::vector<Region> kids_;
};

inline double default_region_margin(Complex z) { return 1e-6 * (1.0 + std::abs(z)); }

// ---------------------------------------------------------------------------
// Components
// ---------------------------------------------------------------------------

struct BoundingBox {
    double re0 = -1, re1 = 1, im0 = -1, im1 = 1;

    void include(Complex z) {
        re0 = std::min(re0, z.real());
        re1 = std::max(re1, z.real());
        im0 = std::min(im0, z.imag());
        im1 = std::max(im1, z.imag());
    }
    bool contains(Complex z) const {
        return z.real() >= re0 && z.real() <= re1 && z.imag() >= im0 && z.imag() <= im1;
    }
};

/// Box around 0, every primitive's bounded geometry and the given points,
/// padded so that the outer ring of cells lies clear of bounded primitives.
inline BoundingBox auto_bbox(const Region& region, const std::vector<Complex>& points = {}) {
    BoundingBox b{0, 0, 0, 0};
    for (const auto& p : region.primitives())
        if (auto e = p.extent()) {
            b.include({(*e)[0], (*e)[2]});
            b.include({(*e)[1], (*e)[3]});
        }
    for (auto z : points) b.include(z);
    double w = std::max({b.re1 - b.re0, b.im1 - b.im0, 1.0});
    double pad = 0.5 * w + 1.0;
    return {b.re0 - pad, b.re1 + pad, b.im0 - pad, b.im1 + pad};
}

struct ComponentInfo {
    Complex representative;
    std::size_t cells = 0;
};

class OmegaComponents {
public:
    const Region& region() const { return region_; }
    const BoundingBox& bbox() const { return bbox_; }
    std::size_t resolution() const { return res_; }
    const std::vector<ComponentInfo>& components() const { return comps_; }
    std::size_t base_index() const { return base_; }
    std::size_t k() const { return comps_.size() - 1; }

    /// Component label of z, or nullopt when z ∉ Ω.
    std::optional<std::size_t> component_of(Complex z) const {
        if (!region_.contains(z)) return std::nullopt;
        if (!bbox_.contains(z)) {
            // Outside the box only lines and half-plane edges remain, and they
            // all run across the box, so moving straight onto the border
            // crosses nothing.
            const double ex = 1e-9 * (bbox_.re1 - bbox_.re0), ey = 1e-9 * (bbox_.im1 - bbox_.im0);
            Complex w{std::clamp(z.real(), bbox_.re0 + ex, bbox_.re1 - ex),
                      std::clamp(z.imag(), bbox_.im0 + ey, bbox_.im1 - ey)};
            if (region_.segment_crosses(z, w) || !region_.contains(w))
                throw DomainError("point lies outside the analyzed bounding box");
            z = w;
        }
        auto [i, j] = cell_of(z);
        // nearest cells first
        for (int radius = 0; radius <= 2; ++radius)
            for (int di = -radius; di <= radius; ++di)
                for (int dj = -radius; dj <= radius; ++dj) {
                    if (std::max(std::abs(di), std::abs(dj)) != radius) continue;
                    long ii = static_cast<long>(i) + di, jj = static_cast<long>(j) + dj;
                    if (ii < 0 || jj < 0 || ii >= static_cast<long>(res_) || jj >= static_cast<long>(res_)) continue;
                    int lab = labels_[static_cast<std::size_t>(ii) * res_ + static_cast<std::size_t>(jj)];
                    if (lab < 0) continue;
                    if (!region_.segment_crosses(z, center(static_cast<std::size_t>(ii), static_cast<std::size_t>(jj))))
                        return static_cast<std::size_t>(lab);
                }
        throw NumericalError("grid resolution " + std::to_string(res_) +
                             " cannot place a point near a region boundary; increase the resolution");
    }

    /// Index into the count vector (non-base components in label order).
    std::optional<std::size_t> count_slot(std::size_t component) const {
        if (component == base_) return std::nullopt;
        return component < base_ ? component : component - 1;
    }

    std::size_t component_of_slot(std::size_t slot) const { return slot < base_ ? slot : slot + 1; }

    friend OmegaComponents analyze_components(const Region&, std::optional<BoundingBox>, std::size_t);

private:
    std::pair<std::size_t, std::size_t> cell_of(Complex z) const {
        double fx = (z.real() - bbox_.re0) / (bbox_.re1 - bbox_.re0) * static_cast<double>(res_);
        double fy = (z.imag() - bbox_.im0) / (bbox_.im1 - bbox_.im0) * static_cast<double>(res_);
        auto clampi = [&](double f) {
            return static_cast<std::size_t>(std::clamp(f, 0.0, static_cast<double>(res_ - 1)));
        };
        return {clampi(fx), clampi(fy)};
    }

    Complex center(std::size_t i, std::size_t j) const {
        double dx = (bbox_.re1 - bbox_.re0) / static_cast<double>(res_);
        double dy = (bbox_.im1 - bbox_.im0) / static_cast<double>(res_);
        return {bbox_.re0 + (static_cast<double>(i) + 0.5) * dx, bbox_.im0 + (static_cast<double>(j) + 0.5) * dy};
    }

    Region region_;
    BoundingBox bbox_;
    std::size_t res_ = 0;
    std::vector<int> labels_;  // -1 outside Ω
    std::vector<ComponentInfo> comps_;
    std::size_t base_ = 0;
};

/// Labels the components of Ω ∩ bbox on a res × res grid of cells. 0 must
/// lie in Ω; its component is the base. The default box covers all bounded
/// primitive geometry with padding, so components are not split by clipping.
inline OmegaComponents analyze_components(const Region& region, std::optional<BoundingBox> bbox = std::nullopt,
                                          std::size_t resolution = 256) {
    if (!region.contains_zero()) throw DomainError("0 must lie in the region");
    if (resolution < 8 || resolution > 8192) throw DomainError("component resolution must be in [8, 8192]");
    OmegaComponents oc;
    oc.region_ = region;
    oc.bbox_ = bbox ? *bbox : auto_bbox(region);
    if (!oc.bbox_.contains(0)) throw DomainError("bounding box must contain 0");
    oc.res_ = resolution;
    const std::size_t n = resolution;
    std::vector<char> inside(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) inside[i * n + j] = region.contains(oc.center(i, j));
    oc.labels_.assign(n * n, -1);

    const auto prims = region.primitives();
    auto crosses = [&](Complex a, Complex b) {
        for (const auto& p : prims)
            if (p.segment_crosses(a, b)) return true;
        return false;
    };
    int next = 0;
    std::deque<std::pair<std::size_t, std::size_t>> queue;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (!inside[i * n + j] || oc.labels_[i * n + j] >= 0) continue;
            const int lab = next++;
            oc.comps_.push_back({oc.center(i, j), 0});
            oc.labels_[i * n + j] = lab;
            queue.emplace_back(i, j);
            while (!queue.empty()) {
                auto [ci, cj] = queue.front();
                queue.pop_front();
                ++oc.comps_[static_cast<std::size_t>(lab)].cells;
                const Complex here = oc.center(ci, cj);
                const long di[4] = {1, -1, 0, 0}, dj[4] = {0, 0, 1, -1};
                for (int d = 0; d < 4; ++d) {
                    long ni = static_cast<long>(ci) + di[d], nj = static_cast<long>(cj) + dj[d];
                    if (ni < 0 || nj < 0 || ni >= static_cast<long>(n) || nj >= static_cast<long>(n)) continue;
                    auto idx = static_cast<std::size_t>(ni) * n + static_cast<std::size_t>(nj);
                    if (!inside[idx] || oc.labels_[idx] >= 0) continue;
                    if (crosses(here, oc.center(static_cast<std::size_t>(ni), static_cast<std::size_t>(nj)))) continue;
                    oc.labels_[idx] = lab;
                    queue.emplace_back(static_cast<std::size_t>(ni), static_cast<std::size_t>(nj));
                }
            }
        }
    if (oc.comps_.empty()) throw NumericalError("no grid cell lies in the region; increase the resolution");

    // Every bounded primitive piece that sits in Ω must be seen by the grid.
    std::vector<Complex> probes{Complex(0, 0)};
    for (const auto& p : prims) {
        if (p.kind == PrimKind::Disk) probes.push_back(p.center);
        if (p.kind == PrimKind::Rectangle) probes.push_back({0.5 * (p.re0 + p.re1), 0.5 * (p.im0 + p.im1)});
    }
    for (auto z : probes)
        if (region.contains(z) && oc.bbox_.contains(z)) (void)oc.component_of(z);
    oc.base_ = *oc.component_of(0);
    return oc;
}

}  // namespace sgamma
