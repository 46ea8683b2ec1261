#pragma once

#include <algorithm>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "genmesh/angles.hpp"
#include "genmesh/boundary.hpp"
#include "genmesh/generalized_mesh.hpp"

namespace genmesh {

/// A regular volume mesh together with a marked set of its facets.
struct FractureSpec {
    GeometricMesh volume;      // dimension n in {2,3}
    Triangulation fracture;    // dimension n-1, subset of the volume facets

    void check() const {
        if (fracture.empty()) return;
        if (fracture.dim() != volume.dim() - 1)
            throw ArgumentError("fracture dimension must be one below the volume");
        std::unordered_set<Simplex, SimplexHash> vol_facets;
        for (const auto& k : volume.triangulation().elements())
            for (auto& f : facets(k)) vol_facets.insert(std::move(f));
        for (const auto& f : fracture.elements())
            if (!vol_facets.count(f))
                throw ArgumentError("fracture facet " + f.str() + " is not a facet of the volume mesh");
    }

    /// True when no fracture facet lies on the volume boundary.
    bool fracture_avoids_boundary() const {
        Triangulation bnd = triangulation_boundary(volume.triangulation());
        for (const auto& f : fracture.elements())
            if (bnd.contains(f)) return false;
        return true;
    }

    /// Stricter: no fracture subsimplex of any dimension lies on the volume
    /// boundary. Needed for the inflation equality to hold.
    bool fracture_strictly_interior() const {
        if (fracture.empty()) return true;
        Triangulation bnd = triangulation_boundary(volume.triangulation());
        std::unordered_set<Simplex, SimplexHash> bnd_sub;
        for (int d = 0; d < fracture.dim() + 1; ++d)
            for (auto& s : subsimplices(bnd, d)) bnd_sub.insert(std::move(s));
        for (int d = 0; d <= fracture.dim(); ++d)
            for (const auto& s : subsimplices(fracture, d))
                if (bnd_sub.count(s)) return false;
        return true;
    }
};

/// Severs the volume adjacency across every fracture facet: two elements stay
/// adjacent iff their shared facet is not marked.
inline GeneralizedMesh fractured_mesh(const FractureSpec& spec) {
    spec.check();
    std::unordered_set<Simplex, SimplexHash> marked;
    for (const auto& f : spec.fracture.elements()) marked.insert(f);
    const auto& tri = spec.volume.triangulation();
    return detail::mesh_from_elements(
        tri.dim(), spec.volume.num_vertices(), spec.volume.coords(), spec.volume.ambient_dim(),
        detail::flatten_elements(tri),
        [&](const std::vector<VertexId>& key) { return marked.count(Simplex(key)) > 0; });
}

/// Two-sided mesh of the fracture obtained through the surrounding volume:
/// elements are the fracture-realized boundary split facets of the fractured
/// mesh, with the boundary adjacency restricted to them.
struct ExtrinsicInflation {
    GeneralizedMesh mesh;
    std::vector<SplitFacet> origin;  // split facet (facet-of-element) per inflation element
};

inline ExtrinsicInflation extrinsic_inflation(const FractureSpec& spec) {
    spec.check();
    if (!spec.fracture_avoids_boundary())
        throw ArgumentError("extrinsic inflation requires the fracture to avoid the volume boundary");
    GeneralizedMesh fm = fractured_mesh(spec);
    GeneralizedBoundary gb = generalized_boundary(fm);

    std::unordered_set<Simplex, SimplexHash> marked;
    for (const auto& f : spec.fracture.elements()) marked.insert(f);

    std::vector<std::int32_t> keep;  // boundary element ids realizing fracture facets
    std::vector<std::int32_t> remap(static_cast<std::size_t>(gb.mesh.num_elements()), -1);
    for (ElementId e = 0; e < gb.mesh.num_elements(); ++e)
        if (marked.count(gb.mesh.realization(e))) {
            remap[static_cast<std::size_t>(e)] = static_cast<std::int32_t>(keep.size());
            keep.push_back(e);
        }

    const int bw = gb.mesh.row_width();
    std::vector<VertexId> elt;
    std::vector<ElementId> nei_elt;
    std::vector<std::int32_t> nei_fct;
    ExtrinsicInflation out;
    for (std::int32_t e : keep) {
        auto row = gb.mesh.element_row(e);
        elt.insert(elt.end(), row.begin(), row.end());
        out.origin.push_back(gb.origin[static_cast<std::size_t>(e)]);
        for (int p = 0; p < bw; ++p) {
            ElementId nb = gb.mesh.neighbor_at(e, p);
            std::int32_t mapped = (nb == kNoNeighbor) ? kNoNeighbor : remap[static_cast<std::size_t>(nb)];
            if (mapped < 0) {  // neighbor outside the fracture part: drop the edge
                nei_elt.push_back(kNoNeighbor);
                nei_fct.push_back(-1);
            } else {
                nei_elt.push_back(mapped);
                nei_fct.push_back(gb.mesh.neighbor_position(e, p));
            }
        }
    }
    out.mesh = GeneralizedMesh(gb.mesh.dim(), fm.num_vertices(), fm.coords(), fm.ambient_dim(),
                               std::move(elt), std::move(nei_elt), std::move(nei_fct));
    return out;
}

struct AngleTieWarning {
    Simplex pivot;
    std::string note;
};

/// Neighbor of the oriented facet [f] around the codimension-2 simplex `s`,
/// chosen as the incident fracture facet of smallest oriented angle (the
/// facet itself competes with angle 2pi), reoriented consistently with [f].
/// Near-ties within 1e-9 are broken toward the smallest element index and
/// reported.
inline OrientedSimplex intrinsic_neighbor(const Triangulation& fracture, const OrientedSimplex& f,
                                          const Simplex& s, const PointTable& pts,
                                          std::vector<AngleTieWarning>* warnings = nullptr) {
    if (!f.simplex().contains(s) || s.dim() != f.dim() - 1)
        throw ArgumentError("pivot is not a facet of the oriented facet");
    double best = std::numeric_limits<double>::infinity();
    ElementId best_id = kNoNeighbor;
    for (ElementId i = 0; i < fracture.size(); ++i) {
        if (!fracture[i].contains(s)) continue;
        double a = oriented_angle(f, fracture[i], pts);
        if (a < best - 1e-9) {
            best = a;
            best_id = i;
        } else if (a < best + 1e-9 && best_id != kNoNeighbor && i != best_id) {
            if (warnings)
                warnings->push_back({s, "angle tie at pivot " + s.str() + ", keeping facet " +
                                            std::to_string(best_id + 1)});
            if (a < best) best = a;
        }
    }
    if (best_id == kNoNeighbor) throw ArgumentError("no fracture facet incident to the pivot");
    const Simplex& g = fracture[best_id];
    OrientedSimplex even(g, Parity::even);
    return consistently_oriented_through(f, even, s) ? even : OrientedSimplex(g, Parity::odd);
}

/// Intrinsic two-sided inflation of a codimension-1 mesh, built without any
/// surrounding volume. Elements are the two orientations of every facet
/// (facet i yields elements 2i and 2i+1, even parity first). Around every
/// codimension-2 subsimplex the incident facets are sorted by angle and the
/// sides facing each angular gap are linked; this reproduces the pointwise
/// minimal-angle rule and is an involution by construction.
struct IntrinsicInflation {
    GeneralizedMesh mesh;
    std::vector<AngleTieWarning> warnings;

    static ElementId element_of(ElementId facet, Parity p) {
        return 2 * facet + (p == Parity::odd ? 1 : 0);
    }
    static ElementId facet_of(ElementId element) { return element / 2; }
    static Parity parity_of(ElementId element) {
        return element % 2 == 0 ? Parity::even : Parity::odd;
    }
};

inline IntrinsicInflation intrinsic_inflation(const GeometricMesh& gamma) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    const Triangulation& tri = gamma.triangulation();
    const int fdim = tri.dim();  // n-1
    const int n = fdim + 1;
    if (gamma.ambient_dim() != n || (n != 2 && n != 3))
        throw ArgumentError("intrinsic inflation expects a codimension-1 mesh in R^2 or R^3");
    PointTable pts = gamma.points();

    IntrinsicInflation out;
    const int w = fdim + 1;
    std::vector<VertexId> elt;
    elt.reserve(static_cast<std::size_t>(2 * tri.size() * w));
    for (ElementId i = 0; i < tri.size(); ++i)
        for (int copy = 0; copy < 2; ++copy)
            for (VertexId v : tri[i].vertices()) elt.push_back(v);
    std::vector<ElementId> nei_elt(elt.size(), kNoNeighbor);
    std::vector<std::int32_t> nei_fct(elt.size(), -1);

    auto link = [&](ElementId ea, const Simplex& sa, ElementId eb, const Simplex& sb) {
        ElementId fa = IntrinsicInflation::facet_of(ea), fb = IntrinsicInflation::facet_of(eb);
        int pa = -1, pb = -1;
        for (int j = 0; j < w; ++j) {
            if (!sa.contains(tri[fa][j])) pa = j;
            if (!sb.contains(tri[fb][j])) pb = j;
        }
        auto slot = [&](ElementId e, int p) {
            return static_cast<std::size_t>(e) * static_cast<std::size_t>(w) + static_cast<std::size_t>(p);
        };
        nei_elt[slot(ea, pa)] = eb;
        nei_fct[slot(ea, pa)] = pb;
        nei_elt[slot(eb, pb)] = ea;
        nei_fct[slot(eb, pb)] = pa;
    };

    // per codimension-2 subsimplex: incident facets sorted by angle
    for (const Simplex& s : subsimplices(tri, fdim - 1)) {
        std::vector<ElementId> inc;
        for (ElementId i = 0; i < tri.size(); ++i)
            if (tri[i].contains(s)) inc.push_back(i);

        if (inc.size() == 1) {
            // rim: the two orientations of the lone facet bind to each other
            ElementId f = inc[0];
            link(IntrinsicInflation::element_of(f, Parity::even), s,
                 IntrinsicInflation::element_of(f, Parity::odd), s);
            continue;
        }

        // Angular position of each incident facet around s in a fixed frame,
        // plus the parity of the copy whose small-angle sweep direction is
        // counter-clockwise in that frame. In 2D that is the copy whose
        // ordering starts at the pivot vertex; in 3D the even copy faces
        // counter-clockwise iff its normal opposes the ccw-perpendicular of
        // the apex direction (both are parallel to u x w).
        std::vector<double> phi(inc.size(), 0.0);
        std::vector<Parity> ccw_copy(inc.size(), Parity::even);
        {
            using namespace detail;
            Vec3 u{};
            Vec3 base = vec3(pts[s[0]]);
            if (n == 3) {
                u = vec3(pts[s[1]]) - base;
                u = (1.0 / norm(u)) * u;
            }
            std::vector<Vec3> w(inc.size());
            for (std::size_t t = 0; t < inc.size(); ++t) {
                VertexId a = apex_of(tri[inc[t]], s);
                Vec3 wv = vec3(pts[a]) - base;
                if (n == 3) wv = wv - dot(wv, u) * u;
                double l = norm(wv);
                if (l <= kDegeneracyTol) throw DegeneracyError("apex on the pivot");
                w[t] = (1.0 / l) * wv;
            }
            Vec3 e1 = w[0];
            Vec3 e2 = (n == 3) ? cross(u, e1) : Vec3{-e1.y, e1.x, 0.0};
            for (std::size_t t = 0; t < inc.size(); ++t) {
                double a = std::atan2(dot(w[t], e2), dot(w[t], e1));
                if (a < 0) a += two_pi;
                phi[t] = (t == 0) ? 0.0 : a;
                if (n == 2) {
                    // pivot-vertex-first ordering; even parity lists vertices ascending
                    ccw_copy[t] = (tri[inc[t]][0] == s[0]) ? Parity::even : Parity::odd;
                } else {
                    auto rep = OrientedSimplex(tri[inc[t]], Parity::even).representative_ordering();
                    Vec3 p0 = vec3(pts[rep[0]]);
                    Vec3 nrm = cross(vec3(pts[rep[1]]) - p0, vec3(pts[rep[2]]) - p0);
                    ccw_copy[t] = dot(cross(u, w[t]), nrm) < 0 ? Parity::even : Parity::odd;
                }
            }
        }
        std::vector<std::size_t> order(inc.size());
        for (std::size_t t = 0; t < order.size(); ++t) order[t] = t;
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            if (phi[a] != phi[b]) return phi[a] < phi[b];
            return inc[a] < inc[b];
        });
        for (std::size_t t = 0; t + 1 < order.size(); ++t)
            if (phi[order[t + 1]] - phi[order[t]] < 1e-9)
                out.warnings.push_back({s, "angular tie between facets " +
                                               std::to_string(inc[order[t]] + 1) + " and " +
                                               std::to_string(inc[order[t + 1]] + 1)});

        // link the sides facing each angular gap: the ccw-facing copy of each
        // facet binds to the cw-facing copy of the next facet around
        for (std::size_t t = 0; t < order.size(); ++t) {
            std::size_t t2 = (t + 1) % order.size();
            ElementId fa = inc[order[t]], fb = inc[order[t2]];
            Parity pa = ccw_copy[order[t]];
            Parity pb = flip(ccw_copy[order[t2]]);
            if (!consistently_oriented_through(OrientedSimplex(tri[fa], pa),
                                               OrientedSimplex(tri[fb], pb), s))
                throw IntegrityError("gap-facing sides are not consistently oriented at " +
                                     s.str());
            link(IntrinsicInflation::element_of(fa, pa), s,
                 IntrinsicInflation::element_of(fb, pb), s);
        }
    }

    out.mesh = GeneralizedMesh(fdim, gamma.num_vertices(), gamma.coords(), gamma.ambient_dim(),
                               std::move(elt), std::move(nei_elt), std::move(nei_fct));
    return out;
}

/// Result of checking that the extrinsic and intrinsic inflations agree under
/// the explicit orientation bijection.
struct InflationCheck {
    bool equal = true;
    std::string diff;  // first disagreement, empty when equal
    std::vector<ElementId> map;  // extrinsic element -> intrinsic element
};

/// Maps every extrinsic element (F, K) to the orientation of F induced by the
/// natural orientation of K, and checks realization equality and adjacency
/// equivariance edge by edge. Linear in the mesh size.
inline InflationCheck verify_inflation_theorem(const FractureSpec& spec) {
    InflationCheck res;
    auto fail = [&](std::string why) {
        res.equal = false;
        res.diff = std::move(why);
        return res;
    };

    ExtrinsicInflation ext = extrinsic_inflation(spec);
    GeneralizedMesh fm = fractured_mesh(spec);  // origin indices refer to this mesh
    MeshOrientation nat = natural_mesh_orientation(fm);

    GeometricMesh gamma(spec.fracture, spec.volume.coords(), spec.volume.ambient_dim());
    IntrinsicInflation intr = intrinsic_inflation(gamma);

    if (ext.mesh.num_elements() != intr.mesh.num_elements())
        return fail("element counts differ: extrinsic " + std::to_string(ext.mesh.num_elements()) +
                    ", intrinsic " + std::to_string(intr.mesh.num_elements()));

    res.map.assign(static_cast<std::size_t>(ext.mesh.num_elements()), kNoNeighbor);
    std::vector<char> hit(static_cast<std::size_t>(intr.mesh.num_elements()), 0);
    for (ElementId e = 0; e < ext.mesh.num_elements(); ++e) {
        SplitFacet sf = ext.origin[static_cast<std::size_t>(e)];
        Simplex f = ext.mesh.realization(e);
        ElementId fi = spec.fracture.index_of(f);
        if (fi == kNoNeighbor) return fail("extrinsic element realizes a non-fracture facet");
        Parity p = detail::induced_parity_canonical(fm, sf.element, sf.position) ^ nat[sf.element];
        ElementId ie = IntrinsicInflation::element_of(fi, p);
        res.map[static_cast<std::size_t>(e)] = ie;
        if (hit[static_cast<std::size_t>(ie)])
            return fail("orientation map is not injective at facet " + f.str());
        hit[static_cast<std::size_t>(ie)] = 1;
        if (intr.mesh.realization(ie) != f) return fail("realization mismatch at facet " + f.str());
    }

    const int w = ext.mesh.row_width();
    for (ElementId e = 0; e < ext.mesh.num_elements(); ++e) {
        ElementId ie = res.map[static_cast<std::size_t>(e)];
        for (int p = 0; p < w; ++p) {
            Simplex s = ext.mesh.facet_at(e, p);
            int ip = intr.mesh.position_of_facet(ie, s);
            if (ip < 0) return fail("pivot " + s.str() + " missing in the intrinsic mesh");
            ElementId xe = ext.mesh.neighbor_at(e, p);
            ElementId xi = intr.mesh.neighbor_at(ie, ip);
            ElementId want = (xe == kNoNeighbor) ? kNoNeighbor : res.map[static_cast<std::size_t>(xe)];
            if (want != xi)
                return fail("adjacency mismatch at facet " + ext.mesh.realization(e).str() +
                            " around " + s.str() + ": extrinsic links " +
                            (xe == kNoNeighbor ? std::string("nothing")
                                               : ext.mesh.realization(xe).str()) +
                            ", intrinsic links " +
                            (xi == kNoNeighbor ? std::string("nothing")
                                               : intr.mesh.realization(xi).str()));
        }
    }
    return res;
}

}  // namespace genmesh
