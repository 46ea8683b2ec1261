#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "genmesh/generalized_mesh.hpp"
#include "genmesh/subfacets.hpp"

namespace genmesh {

/// Split facets with no neighbor, ordered by (element, local position).
inline std::vector<SplitFacet> boundary_split_facets(const GeneralizedMesh& m) {
    std::vector<SplitFacet> out;
    if (m.dim() == 0) return out;
    for (ElementId k = 0; k < m.num_elements(); ++k)
        for (int a = 0; a < m.row_width(); ++a)
            if (m.neighbor_at(k, a) == kNoNeighbor) out.push_back({k, a});
    return out;
}

/// The walk of elements circling a codimension-2 pivot simplex, from one
/// boundary split facet to the opposite one. Elements never repeat; the facet
/// sequence is a sequence of facet uses (the same simplex may appear at both
/// ends, e.g. both sides of a slit).
struct BoundaryChain {
    Simplex pivot;
    std::vector<ElementId> elements;      // k_1 .. k_Q
    std::vector<Simplex> facets;          // F_0 .. F_Q (F_0, F_Q are the boundary sides)
    SplitFacet start;                     // (F_0 as seen from k_1)
    SplitFacet terminal;                  // (F_Q as seen from k_Q)
};

/// Walks around `pivot` starting at the boundary split facet `f`. The next
/// facet at each element is the unique facet distinct from the entering one
/// that still contains the pivot. Terminates at the opposite boundary split
/// facet; a walk longer than the element count means the adjacency tables are
/// corrupt and raises IntegrityError.
inline BoundaryChain chain_around(const GeneralizedMesh& m, SplitFacet f, const Simplex& pivot) {
    const int n = m.dim();
    if (n < 2) throw ArgumentError("chains need mesh dimension >= 2");
    if (m.neighbor_at(f.element, f.position) != kNoNeighbor)
        throw ArgumentError("chain must start at a boundary split facet");
    Simplex start_facet = m.facet_at(f.element, f.position);
    if (pivot.dim() != n - 2 || !start_facet.contains(pivot))
        throw ArgumentError("pivot is not a facet of the starting facet");

    BoundaryChain chain;
    chain.pivot = pivot;
    chain.start = f;
    chain.facets.push_back(start_facet);

    ElementId k = f.element;
    int entered_at = f.position;
    for (int guard = 0; guard <= m.num_elements(); ++guard) {
        chain.elements.push_back(k);
        // the two positions whose opposite facet contains the pivot are the
        // entering one and the exit
        auto row = m.element_row(k);
        int exit = -1;
        for (int a = 0; a < m.row_width(); ++a) {
            if (a == entered_at) continue;
            if (!pivot.contains(row[static_cast<std::size_t>(a)])) {
                exit = a;
                break;
            }
        }
        if (exit < 0) throw IntegrityError("no exit facet around pivot " + pivot.str());
        chain.facets.push_back(m.facet_at(k, exit));
        ElementId next = m.neighbor_at(k, exit);
        if (next == kNoNeighbor) {
            chain.terminal = {k, exit};
            return chain;
        }
        entered_at = m.neighbor_position(k, exit);
        k = next;
    }
    throw IntegrityError("chain around " + pivot.str() + " does not terminate");
}

/// The boundary as a generalized mesh, together with the originating split
/// facet of each boundary element.
struct GeneralizedBoundary {
    GeneralizedMesh mesh;
    std::vector<SplitFacet> origin;  // per boundary element

    std::int32_t index_of(SplitFacet f) const {
        auto it = lookup.find(encode(f));
        return it == lookup.end() ? -1 : it->second;
    }

    // internal
    static std::int64_t encode(SplitFacet f) {
        return (static_cast<std::int64_t>(f.element) << 8) | static_cast<std::int64_t>(f.position);
    }
    std::unordered_map<std::int64_t, std::int32_t> lookup;
};

/// Builds the boundary: elements are the boundary split facets, realized by
/// their facet simplex; two boundary elements are adjacent through a
/// codimension-2 simplex S exactly when a chain around S links them. Each
/// chain walk resolves both directions at once, and the involution property
/// (the reverse walk returns to the start, never to itself) is asserted.
inline GeneralizedBoundary generalized_boundary(const GeneralizedMesh& m) {
    GeneralizedBoundary out;
    const int n = m.dim();
    std::vector<SplitFacet> elems = (n >= 1) ? boundary_split_facets(m) : std::vector<SplitFacet>{};

    const int bw = std::max(n, 1);  // row width of the boundary mesh (dim n-1)
    std::vector<VertexId> elt;
    elt.reserve(elems.size() * static_cast<std::size_t>(bw));
    for (auto f : elems) {
        Simplex facet = m.facet_at(f.element, f.position);
        for (VertexId v : facet.vertices()) elt.push_back(v);
    }
    std::vector<ElementId> nei_elt(elt.size(), kNoNeighbor);
    std::vector<std::int32_t> nei_fct(elt.size(), -1);

    for (std::size_t i = 0; i < elems.size(); ++i)
        out.lookup.emplace(GeneralizedBoundary::encode(elems[i]), static_cast<std::int32_t>(i));
    out.origin = elems;

    if (n >= 2) {
        for (std::size_t i = 0; i < elems.size(); ++i) {
            Simplex facet = m.facet_at(elems[i].element, elems[i].position);
            for (int p = 0; p < bw; ++p) {
                if (nei_elt[i * static_cast<std::size_t>(bw) + static_cast<std::size_t>(p)] != kNoNeighbor)
                    continue;
                // pivot = facet minus its p-th vertex (rows are canonical here)
                std::vector<VertexId> pv;
                for (int j = 0; j < bw; ++j)
                    if (j != p) pv.push_back(facet[j]);
                Simplex pivot(std::move(pv));

                BoundaryChain chain = chain_around(m, elems[i], pivot);
                std::int32_t other = out.index_of(chain.terminal);
                if (other < 0) throw IntegrityError("chain ended on an unknown split facet");
                if (other == static_cast<std::int32_t>(i))
                    throw IntegrityError("boundary neighbor function has a fixed point at " +
                                         facet.str());
                Simplex other_facet =
                    m.facet_at(chain.terminal.element, chain.terminal.position);
                int p2 = -1;
                for (int j = 0; j < bw; ++j)
                    if (!pivot.contains(other_facet[j])) p2 = j;
                auto slot = [bw](std::int32_t e, int pos) {
                    return static_cast<std::size_t>(e) * static_cast<std::size_t>(bw) +
                           static_cast<std::size_t>(pos);
                };
                nei_elt[slot(static_cast<std::int32_t>(i), p)] = other;
                nei_fct[slot(static_cast<std::int32_t>(i), p)] = p2;
                nei_elt[slot(other, p2)] = static_cast<std::int32_t>(i);
                nei_fct[slot(other, p2)] = p;
            }
        }
    }

    // boundary of an n-mesh is (n-1)-dimensional; for n = 0 it is empty (and
    // kept 0-dimensional so the table width stays positive)
    out.mesh = GeneralizedMesh(std::max(n - 1, 0), m.num_vertices(), m.coords(), m.ambient_dim(),
                               std::move(elt), std::move(nei_elt), std::move(nei_fct));
    return out;
}

/// Orientation induced on the boundary: each boundary element (F, k) gets the
/// orientation of F induced by the orientation of k.
inline MeshOrientation induced_boundary_orientation(const GeneralizedMesh& m,
                                                    const MeshOrientation& o,
                                                    const GeneralizedBoundary& b) {
    MeshOrientation out;
    out.parity.reserve(b.origin.size());
    for (auto f : b.origin)
        out.parity.push_back(detail::induced_parity_canonical(m, f.element, f.position) ^
                             o[f.element]);
    return out;
}

/// For a regular mesh, the generalized boundary of its generalized mesh must
/// coincide (up to relabeling) with the generalized mesh of its triangulation
/// boundary. Checked with the explicit map sending a boundary facet F to the
/// split facet (F, K) of its unique incident element.
inline bool boundary_matches_regular(const GeometricMesh& mesh, std::string* why = nullptr) {
    auto complain = [&](const std::string& s) {
        if (why) *why = s;
        return false;
    };
    GeneralizedMesh vol = from_triangulation(mesh);
    GeneralizedBoundary gb = generalized_boundary(vol);
    Triangulation btri = triangulation_boundary(mesh.triangulation());
    if (btri.empty())
        return gb.origin.empty() ? true : complain("generalized boundary not empty");

    GeneralizedMesh bm = from_triangulation(btri, mesh.coords(), mesh.ambient_dim());
    if (bm.num_elements() != gb.mesh.num_elements()) return complain("element counts differ");

    // phi: boundary facet index -> generalized boundary element index
    std::vector<std::int32_t> phi(static_cast<std::size_t>(bm.num_elements()), -1);
    for (ElementId i = 0; i < btri.size(); ++i) {
        const Simplex& f = btri[i];
        std::int32_t found = -1;
        for (std::size_t e = 0; e < gb.origin.size(); ++e)
            if (gb.mesh.realization(static_cast<ElementId>(e)) == f) {
                if (found >= 0) return complain("facet realized twice in the boundary");
                found = static_cast<std::int32_t>(e);
            }
        if (found < 0) return complain("facet " + f.str() + " missing from the boundary");
        phi[static_cast<std::size_t>(i)] = found;
    }

    if (bm.dim() >= 1) {
        for (ElementId i = 0; i < bm.num_elements(); ++i)
            for (int p = 0; p < bm.row_width(); ++p) {
                ElementId j = bm.neighbor_at(i, p);
                Simplex s = bm.facet_at(i, p);
                std::int32_t gi = phi[static_cast<std::size_t>(i)];
                int gp = gb.mesh.position_of_facet(gi, s);
                if (gp < 0) return complain("pivot not found in the generalized boundary");
                ElementId gj = gb.mesh.neighbor_at(gi, gp);
                if (j == kNoNeighbor) {
                    if (gj != kNoNeighbor) return complain("extra adjacency at " + s.str());
                } else if (gj != phi[static_cast<std::size_t>(j)]) {
                    return complain("adjacency mismatch at " + s.str());
                }
            }
    }
    return true;
}

}  // namespace genmesh
