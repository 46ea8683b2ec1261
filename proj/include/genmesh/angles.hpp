#pragma once

#include <cmath>
#include <numbers>

#include "genmesh/simplex.hpp"

namespace genmesh {

namespace detail {

struct Vec3 {
    double x = 0, y = 0, z = 0;
};

inline Vec3 vec3(std::span<const double> p) {
    return {p[0], p.size() > 1 ? p[1] : 0.0, p.size() > 2 ? p[2] : 0.0};
}
inline Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
inline Vec3 operator*(double s, Vec3 a) { return {s * a.x, s * a.y, s * a.z}; }
inline Vec3 operator-(Vec3 a) { return {-a.x, -a.y, -a.z}; }
inline double dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Vec3 cross(Vec3 a, Vec3 b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(Vec3 a) { return std::sqrt(dot(a, a)); }

inline VertexId apex_of(const Simplex& t, const Simplex& shared) {
    for (VertexId v : t.vertices())
        if (!shared.contains(v)) return v;
    throw ArgumentError("simplex has no vertex outside the shared part");
}

}  // namespace detail

/// Dihedral angle in [0, pi] between two triangles in R^3 sharing an edge,
/// measured between the apex directions projected orthogonally to the edge.
inline double geometric_angle(const Simplex& t1, const Simplex& t2, const PointTable& pts) {
    using namespace detail;
    if (t1.dim() != 2 || t2.dim() != 2 || pts.dim() != 3)
        throw ArgumentError("geometric angle is defined for triangles in R^3");
    std::vector<VertexId> shared;
    std::set_intersection(t1.vertices().begin(), t1.vertices().end(), t2.vertices().begin(),
                          t2.vertices().end(), std::back_inserter(shared));
    if (shared.size() != 2) throw ArgumentError("triangles do not share an edge");
    Simplex edge(std::move(shared));
    Vec3 b = vec3(pts[edge[0]]), c = vec3(pts[edge[1]]);
    Vec3 u = c - b;
    double ul = norm(u);
    if (ul == 0.0) throw DegeneracyError("zero-length shared edge");
    u = (1.0 / ul) * u;
    auto project = [&](VertexId v) {
        Vec3 w = vec3(pts[v]) - b;
        return w - dot(w, u) * u;
    };
    Vec3 w1 = project(apex_of(t1, edge));
    Vec3 w2 = project(apex_of(t2, edge));
    double n1 = norm(w1), n2 = norm(w2);
    if (n1 <= kDegeneracyTol * ul || n2 <= kDegeneracyTol * ul)
        throw DegeneracyError("apex projects onto the shared edge");
    double cosv = dot(w1, w2) / (n1 * n2);
    cosv = std::clamp(cosv, -1.0, 1.0);
    return std::acos(cosv);
}

/// Rotation angle in (0, 2pi] from an oriented facet to a neighboring facet
/// around their shared codimension-1 interface, sweeping first through the
/// side the orientation designates as interior. Returns exactly 2pi for the
/// facet itself; satisfies angle([F],G) + angle(-[F],G) = 2pi and is symmetric
/// for consistently oriented pairs.
///
/// Triangles in R^3: the dihedral angle, complemented when the second apex
/// lies on the positive side of the oriented normal. Edges in R^2: the
/// counter-clockwise angle at the shared vertex from the edge to the other
/// edge, complemented when the shared vertex is the second one of the
/// orientation's ordering.
inline double oriented_angle(const OrientedSimplex& t1, const Simplex& t2, const PointTable& pts) {
    using namespace detail;
    constexpr double two_pi = 2.0 * std::numbers::pi;
    if (t1.simplex() == t2) return two_pi;

    if (t1.dim() == 2 && pts.dim() == 3) {
        std::vector<VertexId> sharedv;
        std::set_intersection(t1.simplex().vertices().begin(), t1.simplex().vertices().end(),
                              t2.vertices().begin(), t2.vertices().end(),
                              std::back_inserter(sharedv));
        if (sharedv.size() != 2) throw ArgumentError("triangles do not share an edge");
        Simplex edge(std::move(sharedv));
        double theta = geometric_angle(t1.simplex(), t2, pts);
        auto rep = t1.representative_ordering();
        Vec3 p0 = vec3(pts[rep[0]]), p1 = vec3(pts[rep[1]]), p2 = vec3(pts[rep[2]]);
        Vec3 n = cross(p1 - p0, p2 - p0);
        VertexId a = apex_of(t1.simplex(), edge);
        VertexId d = apex_of(t2, edge);
        Vec3 ad = vec3(pts[d]) - vec3(pts[a]);
        return dot(ad, n) < 0 ? theta : two_pi - theta;
    }

    if (t1.dim() == 1 && pts.dim() == 2) {
        if (t2.dim() != 1) throw ArgumentError("dimension mismatch");
        std::vector<VertexId> sharedv;
        std::set_intersection(t1.simplex().vertices().begin(), t1.simplex().vertices().end(),
                              t2.vertices().begin(), t2.vertices().end(),
                              std::back_inserter(sharedv));
        if (sharedv.size() != 1) throw ArgumentError("edges do not share exactly one vertex");
        VertexId p = sharedv[0];
        auto rep = t1.representative_ordering();
        bool shared_first = (rep[0] == p);
        VertexId q = shared_first ? rep[1] : rep[0];
        VertexId c = apex_of(t2, Simplex{p});
        auto pp = pts[p];
        double ux = pts[q][0] - pp[0], uy = pts[q][1] - pp[1];
        double vx = pts[c][0] - pp[0], vy = pts[c][1] - pp[1];
        if ((ux == 0 && uy == 0) || (vx == 0 && vy == 0))
            throw DegeneracyError("zero-length edge at shared vertex");
        double ccw = std::atan2(ux * vy - uy * vx, ux * vx + uy * vy);
        if (ccw <= 0) ccw += two_pi;  // (0, 2pi]
        double ang = shared_first ? ccw : two_pi - ccw;
        if (ang <= 0) ang += two_pi;
        return ang;
    }

    throw ArgumentError("oriented angle: expected edges in R^2 or triangles in R^3");
}

}  // namespace genmesh
