#ifndef QAMOD_SHAPES_HPP
#define QAMOD_SHAPES_HPP

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace qamod {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

inline double dist(Vec2 a, Vec2 b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

struct BBox {
    double x0 = 0.0, y0 = 0.0, x1 = 0.0, y1 = 0.0;

    void merge(const BBox& o) {
        x0 = std::min(x0, o.x0);
        y0 = std::min(y0, o.y0);
        x1 = std::max(x1, o.x1);
        y1 = std::max(y1, o.y1);
    }
};

enum class ShapeKind { Rect, Disk, Segment, Polygon, HalfplaneBox };

/// Closed planar shape. Rect stores corners (x0,y0)-(x1,y1); Disk stores
/// center (cx,cy) and radius r; Segment is a horizontal strip of the given
/// thickness centered on y; HalfplaneBox is a truncated upper half-plane
/// [x0,x1] x [0,y1] whose bottom face is the only true boundary.
struct Shape {
    ShapeKind kind = ShapeKind::Rect;
    double p0 = 0.0, p1 = 0.0, p2 = 0.0, p3 = 0.0;
    std::vector<Vec2> points;

    static Shape rect(double x0, double y0, double x1, double y1) {
        if (!(x1 > x0) || !(y1 > y0)) throw std::invalid_argument("rect: degenerate extents");
        Shape s;
        s.kind = ShapeKind::Rect;
        s.p0 = x0; s.p1 = y0; s.p2 = x1; s.p3 = y1;
        return s;
    }

    static Shape disk(double cx, double cy, double r) {
        if (!(r > 0.0)) throw std::invalid_argument("disk: radius must be positive");
        Shape s;
        s.kind = ShapeKind::Disk;
        s.p0 = cx; s.p1 = cy; s.p2 = r;
        return s;
    }

    static Shape segment(double x0, double x1, double y, double thickness) {
        if (!(x1 > x0)) throw std::invalid_argument("segment: x1 must exceed x0");
        if (!(thickness > 0.0)) throw std::invalid_argument("segment: thickness must be positive");
        Shape s;
        s.kind = ShapeKind::Segment;
        s.p0 = x0; s.p1 = x1; s.p2 = y; s.p3 = thickness;
        return s;
    }

    static Shape polygon(std::vector<Vec2> pts) {
        if (pts.size() < 3) throw std::invalid_argument("polygon: needs at least 3 points");
        Shape s;
        s.kind = ShapeKind::Polygon;
        s.points = std::move(pts);
        return s;
    }

    static Shape halfplane_box(double x0, double x1, double y1) {
        if (!(x1 > x0) || !(y1 > 0.0)) throw std::invalid_argument("halfplane_box: degenerate extents");
        Shape s;
        s.kind = ShapeKind::HalfplaneBox;
        s.p0 = x0; s.p1 = x1; s.p2 = y1;
        return s;
    }

    bool contains(Vec2 p) const {
        switch (kind) {
        case ShapeKind::Rect:
            return p.x >= p0 && p.x <= p2 && p.y >= p1 && p.y <= p3;
        case ShapeKind::Disk: {
            const double dx = p.x - p0, dy = p.y - p1;
            return dx * dx + dy * dy <= p2 * p2;
        }
        case ShapeKind::Segment:
            return p.x >= p0 && p.x <= p1 && std::abs(p.y - p2) <= 0.5 * p3;
        case ShapeKind::HalfplaneBox:
            return p.x >= p0 && p.x <= p1 && p.y >= 0.0 && p.y <= p2;
        case ShapeKind::Polygon: {
            // even-odd crossing rule; closed membership up to machine epsilon
            bool inside = false;
            const size_t n = points.size();
            for (size_t i = 0, j = n - 1; i < n; j = i++) {
                const Vec2& a = points[j];
                const Vec2& b = points[i];
                if ((b.y > p.y) != (a.y > p.y)) {
                    const double t = (p.y - b.y) / (a.y - b.y);
                    if (p.x < b.x + t * (a.x - b.x)) inside = !inside;
                }
            }
            return inside;
        }
        }
        return false;
    }

    BBox bbox() const {
        switch (kind) {
        case ShapeKind::Rect:
            return {p0, p1, p2, p3};
        case ShapeKind::Disk:
            return {p0 - p2, p1 - p2, p0 + p2, p1 + p2};
        case ShapeKind::Segment:
            return {p0, p2 - 0.5 * p3, p1, p2 + 0.5 * p3};
        case ShapeKind::HalfplaneBox:
            return {p0, 0.0, p1, p2};
        case ShapeKind::Polygon: {
            BBox b{points[0].x, points[0].y, points[0].x, points[0].y};
            for (const Vec2& q : points) b.merge({q.x, q.y, q.x, q.y});
            return b;
        }
        }
        return {};
    }

    /// Scale about the origin by lambda > 0.
    Shape scaled(double lambda) const {
        Shape s = *this;
        switch (kind) {
        case ShapeKind::Rect:
            s.p0 *= lambda; s.p1 *= lambda; s.p2 *= lambda; s.p3 *= lambda;
            break;
        case ShapeKind::Disk:
            s.p0 *= lambda; s.p1 *= lambda; s.p2 *= lambda;
            break;
        case ShapeKind::Segment:
            s.p0 *= lambda; s.p1 *= lambda; s.p2 *= lambda; s.p3 *= lambda;
            break;
        case ShapeKind::HalfplaneBox:
            s.p0 *= lambda; s.p1 *= lambda; s.p2 *= lambda;
            break;
        case ShapeKind::Polygon:
            for (Vec2& q : s.points) { q.x *= lambda; q.y *= lambda; }
            break;
        }
        return s;
    }

    std::string kind_name() const {
        switch (kind) {
        case ShapeKind::Rect: return "rect";
        case ShapeKind::Disk: return "disk";
        case ShapeKind::Segment: return "segment";
        case ShapeKind::Polygon: return "polygon";
        case ShapeKind::HalfplaneBox: return "halfplane_box";
        }
        return "?";
    }
};

/// Least-squares circle through a point cloud (mean center, mean radius).
/// Returns the maximum relative radial deviation of the points.
inline double fit_circle(const std::vector<Vec2>& pts, Vec2& center, double& radius) {
    if (pts.empty()) throw std::invalid_argument("fit_circle: empty point set");
    Vec2 c{0.0, 0.0};
    for (const Vec2& p : pts) { c.x += p.x; c.y += p.y; }
    c.x /= double(pts.size());
    c.y /= double(pts.size());
    double r = 0.0;
    for (const Vec2& p : pts) r += dist(p, c);
    r /= double(pts.size());
    double worst = 0.0;
    for (const Vec2& p : pts) worst = std::max(worst, std::abs(dist(p, c) - r));
    center = c;
    radius = r;
    return r > 0.0 ? worst / r : worst;
}

} // namespace qamod

#endif
