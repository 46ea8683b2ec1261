#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "genmesh/triangulation.hpp"

namespace genmesh {

/// A mesh of possibly-overlapping n-simplices with an explicit adjacency
/// graph: one optional neighbor per (element, facet) pair. Mirrors the tabular
/// layout (vtx / elt / nei_elt / nei_fct); indices are 0-based internally with
/// kNoNeighbor in place of the file format's 0 sentinel.
///
/// Element rows keep the vertex order they were constructed with; algorithms
/// must not assume rows are sorted. nei_fct holds the local facet position in
/// the neighbor row (the position of the omitted vertex).
class GeneralizedMesh {
  public:
    GeneralizedMesh() = default;

    GeneralizedMesh(int dim, int num_vertices, std::vector<double> coords, int ambient_dim,
                    std::vector<VertexId> elt, std::vector<ElementId> nei_elt,
                    std::vector<std::int32_t> nei_fct)
        : dim_(dim),
          num_vertices_(num_vertices),
          ambient_(ambient_dim),
          coords_(std::move(coords)),
          elt_(std::move(elt)),
          nei_elt_(std::move(nei_elt)),
          nei_fct_(std::move(nei_fct)) {
        const std::size_t w = static_cast<std::size_t>(row_width());
        if (elt_.size() % w != 0) throw ArgumentError("element table shape mismatch");
        if (nei_elt_.size() != elt_.size() || nei_fct_.size() != elt_.size())
            throw ArgumentError("adjacency table shape mismatch");
        if (ambient_ > 0 &&
            coords_.size() != static_cast<std::size_t>(num_vertices_) * static_cast<std::size_t>(ambient_))
            throw ArgumentError("coordinate table shape mismatch");
    }

    int dim() const { return dim_; }
    int row_width() const { return dim_ + 1; }
    int num_vertices() const { return num_vertices_; }
    int num_elements() const { return static_cast<int>(elt_.size()) / row_width(); }
    bool has_geometry() const { return ambient_ > 0; }
    int ambient_dim() const { return ambient_; }
    PointTable points() const { return {coords_.data(), num_vertices_, ambient_}; }

    std::span<const VertexId> element_row(ElementId k) const {
        return {elt_.data() + static_cast<std::size_t>(k) * row_width(),
                static_cast<std::size_t>(row_width())};
    }
    /// Canonical simplex attached to element k.
    Simplex realization(ElementId k) const { return Simplex(element_row(k)); }

    ElementId neighbor_at(ElementId k, int position) const {
        return nei_elt_[static_cast<std::size_t>(k) * row_width() + position];
    }
    int neighbor_position(ElementId k, int position) const {
        return nei_fct_[static_cast<std::size_t>(k) * row_width() + position];
    }

    /// Facet of element k opposite the vertex at `position`, in canonical form.
    Simplex facet_at(ElementId k, int position) const {
        auto row = element_row(k);
        std::vector<VertexId> f;
        f.reserve(row.size() - 1);
        for (int j = 0; j < row_width(); ++j)
            if (j != position) f.push_back(row[static_cast<std::size_t>(j)]);
        return Simplex(std::move(f));
    }

    /// Local position whose opposite facet equals `f`, or -1.
    int position_of_facet(ElementId k, const Simplex& f) const {
        auto row = element_row(k);
        for (int a = 0; a < row_width(); ++a)
            if (!f.contains(row[static_cast<std::size_t>(a)])) {
                bool all = true;
                for (int j = 0; j < row_width() && all; ++j)
                    if (j != a && !f.contains(row[static_cast<std::size_t>(j)])) all = false;
                if (all) return a;
            }
        return -1;
    }

    /// Neighbor of k through the facet `f` (kNoNeighbor encodes "none").
    ElementId neighbor(ElementId k, const Simplex& f) const {
        int pos = position_of_facet(k, f);
        if (pos < 0) throw ArgumentError("not a facet of the element: " + f.str());
        return neighbor_at(k, pos);
    }

    const std::vector<VertexId>& elt() const { return elt_; }
    const std::vector<ElementId>& nei_elt() const { return nei_elt_; }
    const std::vector<std::int32_t>& nei_fct() const { return nei_fct_; }
    const std::vector<double>& coords() const { return coords_; }

  private:
    int dim_ = 0;
    int num_vertices_ = 0;
    int ambient_ = 0;
    std::vector<double> coords_;
    std::vector<VertexId> elt_;
    std::vector<ElementId> nei_elt_;
    std::vector<std::int32_t> nei_fct_;
};

/// One side of a facet: the facet together with the element seeing it.
struct SplitFacet {
    ElementId element;
    int position;  // local facet position within the element row

    friend bool operator==(const SplitFacet&, const SplitFacet&) = default;
    friend auto operator<=>(const SplitFacet&, const SplitFacet&) = default;
};

struct MeshValidationReport {
    bool ok = true;
    std::string first_violation;
};

/// Checks the structural axioms: index ranges, reciprocity of the two
/// adjacency tables, facet match across each adjacency, no self-neighbors,
/// and non-degeneracy when geometry is attached.
inline MeshValidationReport validate(const GeneralizedMesh& m) {
    MeshValidationReport rep;
    auto fail = [&](std::string why) {
        rep.ok = false;
        rep.first_violation = std::move(why);
        return rep;
    };
    const int w = m.row_width();
    for (ElementId k = 0; k < m.num_elements(); ++k) {
        auto row = m.element_row(k);
        for (int a = 0; a < w; ++a) {
            if (row[static_cast<std::size_t>(a)] < 0 || row[static_cast<std::size_t>(a)] >= m.num_vertices())
                return fail("vertex id out of range in element " + std::to_string(k + 1));
            for (int b = a + 1; b < w; ++b)
                if (row[static_cast<std::size_t>(a)] == row[static_cast<std::size_t>(b)])
                    return fail("repeated vertex in element " + std::to_string(k + 1));
        }
        if (m.dim() == 0) continue;
        for (int a = 0; a < w; ++a) {
            ElementId j = m.neighbor_at(k, a);
            int b = m.neighbor_position(k, a);
            if (j == kNoNeighbor) continue;
            if (j < 0 || j >= m.num_elements())
                return fail("neighbor index out of range at element " + std::to_string(k + 1));
            if (j == k)
                return fail("element " + std::to_string(k + 1) + " adjacent to itself");
            if (b < 0 || b >= w)
                return fail("neighbor facet position out of range at element " +
                            std::to_string(k + 1));
            if (m.neighbor_at(j, b) != k || m.neighbor_position(j, b) != a)
                return fail("adjacency tables not symmetric between elements " +
                            std::to_string(k + 1) + " and " + std::to_string(j + 1));
            if (m.facet_at(k, a) != m.facet_at(j, b))
                return fail("adjacent elements " + std::to_string(k + 1) + " and " +
                            std::to_string(j + 1) + " disagree on the shared facet");
        }
    }
    if (m.has_geometry()) {
        PointTable pts = m.points();
        for (ElementId k = 0; k < m.num_elements(); ++k)
            if (!is_nondegenerate(m.realization(k), pts))
                return fail("degenerate element " + std::to_string(k + 1));
    }
    return rep;
}

namespace detail {

/// Shared facet-matching pass: for each facet shared by exactly two elements
/// not severed by `severed`, link them. Branching facets raise ArgumentError.
template <typename SeveredPred>
GeneralizedMesh mesh_from_elements(int dim, int num_vertices, std::vector<double> coords,
                                   int ambient, std::vector<VertexId> elt,
                                   SeveredPred&& severed) {
    const int w = dim + 1;
    const std::size_t nelt = elt.size() / static_cast<std::size_t>(w);
    std::vector<ElementId> nei_elt(elt.size(), kNoNeighbor);
    std::vector<std::int32_t> nei_fct(elt.size(), -1);

    // one packed key per facet use, sorted lexicographically
    struct Use {
        std::vector<VertexId> key;
        ElementId k;
        int a;
    };
    std::vector<Use> uses;
    uses.reserve(nelt * static_cast<std::size_t>(w));
    for (std::size_t k = 0; k < nelt; ++k) {
        for (int a = 0; a < w; ++a) {
            std::vector<VertexId> key;
            key.reserve(static_cast<std::size_t>(dim));
            for (int j = 0; j < w; ++j)
                if (j != a) key.push_back(elt[k * static_cast<std::size_t>(w) + static_cast<std::size_t>(j)]);
            std::sort(key.begin(), key.end());
            uses.push_back({std::move(key), static_cast<ElementId>(k), a});
        }
    }
    std::sort(uses.begin(), uses.end(), [](const Use& x, const Use& y) {
        if (x.key != y.key) return x.key < y.key;
        return x.k < y.k;
    });
    std::size_t i = 0;
    while (i < uses.size()) {
        std::size_t j = i;
        while (j < uses.size() && uses[j].key == uses[i].key) ++j;
        if (j - i > 2)
            throw ArgumentError("branching facet shared by " + std::to_string(j - i) +
                                " elements");
        if (j - i == 2 && !severed(uses[i].key)) {
            const Use& u = uses[i];
            const Use& v = uses[i + 1];
            nei_elt[static_cast<std::size_t>(u.k) * w + u.a] = v.k;
            nei_fct[static_cast<std::size_t>(u.k) * w + u.a] = v.a;
            nei_elt[static_cast<std::size_t>(v.k) * w + v.a] = u.k;
            nei_fct[static_cast<std::size_t>(v.k) * w + v.a] = u.a;
        }
        i = j;
    }
    return GeneralizedMesh(dim, num_vertices, std::move(coords), ambient, std::move(elt),
                           std::move(nei_elt), std::move(nei_fct));
}

inline std::vector<VertexId> flatten_elements(const Triangulation& tri) {
    std::vector<VertexId> elt;
    elt.reserve(static_cast<std::size_t>(tri.size()) * static_cast<std::size_t>(tri.dim() + 1));
    for (const auto& k : tri.elements())
        for (VertexId v : k.vertices()) elt.push_back(v);
    return elt;
}

}  // namespace detail

/// The generalized mesh representing a non-branching triangulation: identity
/// realization, adjacency exactly where two elements share a facet.
inline GeneralizedMesh from_triangulation(const Triangulation& tri,
                                          std::vector<double> coords = {}, int ambient = 0) {
    if (tri.empty()) throw ArgumentError("empty triangulation");
    int num_vertices = 0;
    for (const auto& k : tri.elements())
        for (VertexId v : k.vertices()) num_vertices = std::max(num_vertices, v + 1);
    if (ambient > 0)
        num_vertices = static_cast<int>(coords.size() / static_cast<std::size_t>(ambient));
    try {
        return detail::mesh_from_elements(tri.dim(), num_vertices, std::move(coords), ambient,
                                          detail::flatten_elements(tri),
                                          [](const std::vector<VertexId>&) { return false; });
    } catch (const ArgumentError&) {
        throw ArgumentError("triangulation is branching");
    }
}

inline GeneralizedMesh from_triangulation(const GeometricMesh& mesh) {
    return from_triangulation(mesh.triangulation(), mesh.coords(), mesh.ambient_dim());
}

/// Sorted duplicate-free list of the d-subsimplices over all elements.
inline std::vector<Simplex> subsimplices(const GeneralizedMesh& m, int d) {
    if (d < 0 || d > m.dim()) throw ArgumentError("subsimplex dimension out of range");
    std::vector<Simplex> all;
    for (ElementId k = 0; k < m.num_elements(); ++k)
        for (auto& s : subsimplices(m.realization(k), d)) all.push_back(std::move(s));
    std::sort(all.begin(), all.end());
    all.erase(std::unique(all.begin(), all.end()), all.end());
    return all;
}

/// Per-element orientation assignment, stored as parity against each
/// element's canonical (ascending) vertex order.
struct MeshOrientation {
    std::vector<Parity> parity;

    Parity operator[](ElementId k) const { return parity[static_cast<std::size_t>(k)]; }
};

/// Natural (positive-determinant) orientation of every element; requires
/// full-dimensional geometry.
inline MeshOrientation natural_mesh_orientation(const GeneralizedMesh& m) {
    if (!m.has_geometry() || m.ambient_dim() != m.dim())
        throw ArgumentError("natural orientation requires an n-mesh in R^n");
    MeshOrientation o;
    o.parity.reserve(static_cast<std::size_t>(m.num_elements()));
    PointTable pts = m.points();
    for (ElementId k = 0; k < m.num_elements(); ++k)
        o.parity.push_back(natural_orientation(m.realization(k), pts).parity());
    return o;
}

namespace detail {

/// Parity of the orientation induced on facet `a` of element k when the
/// element carries its canonical even orientation.
inline Parity induced_parity_canonical(const GeneralizedMesh& m, ElementId k, int a) {
    auto row = m.element_row(k);
    std::vector<VertexId> rep(row.begin(), row.end());
    Parity row_parity = sort_parity(rep);  // row order vs ascending
    std::vector<VertexId> sub = rep;
    sub.erase(sub.begin() + a);
    Parity p = sort_parity(sub);
    if ((a + 1) % 2 == 0) p = flip(p);
    // row_parity corrects for rows stored in non-ascending order
    return p ^ row_parity;
}

}  // namespace detail

/// True when every adjacent pair induces opposite orientations on its shared
/// facet under the given orientation.
inline bool check_orientation_compatibility(const GeneralizedMesh& m, const MeshOrientation& o) {
    if (static_cast<int>(o.parity.size()) != m.num_elements())
        throw ArgumentError("orientation size mismatch");
    const int w = m.row_width();
    for (ElementId k = 0; k < m.num_elements(); ++k)
        for (int a = 0; a < w; ++a) {
            ElementId j = m.neighbor_at(k, a);
            if (j == kNoNeighbor || j < k) continue;
            int b = m.neighbor_position(k, a);
            Parity pk = detail::induced_parity_canonical(m, k, a) ^ o[k];
            Parity pj = detail::induced_parity_canonical(m, j, b) ^ o[j];
            if (pk == pj) return false;
        }
    return true;
}

/// Breadth-first parity propagation over the adjacency graph; returns an
/// orientation making all adjacent pairs consistent, or nullopt if parity
/// conflicts make the mesh non-orientable.
inline std::optional<MeshOrientation> find_compatible_orientation(const GeneralizedMesh& m) {
    const int w = m.row_width();
    const int n = m.num_elements();
    std::vector<std::int8_t> state(static_cast<std::size_t>(n), -1);  // -1 unset, else parity
    std::vector<ElementId> queue;
    for (ElementId root = 0; root < n; ++root) {
        if (state[static_cast<std::size_t>(root)] != -1) continue;
        state[static_cast<std::size_t>(root)] = 0;
        queue.clear();
        queue.push_back(root);
        std::size_t head = 0;
        while (head < queue.size()) {
            ElementId k = queue[head++];
            for (int a = 0; a < w; ++a) {
                ElementId j = m.neighbor_at(k, a);
                if (j == kNoNeighbor) continue;
                int b = m.neighbor_position(k, a);
                // need (t(k,a) ^ p_k) != (t(j,b) ^ p_j)
                Parity t = detail::induced_parity_canonical(m, k, a) ^
                           detail::induced_parity_canonical(m, j, b);
                std::int8_t want = static_cast<std::int8_t>(
                    (static_cast<int>(t) ^ state[static_cast<std::size_t>(k)] ^ 1) & 1);
                if (state[static_cast<std::size_t>(j)] == -1) {
                    state[static_cast<std::size_t>(j)] = want;
                    queue.push_back(j);
                } else if (state[static_cast<std::size_t>(j)] != want) {
                    return std::nullopt;
                }
            }
        }
    }
    MeshOrientation o;
    o.parity.reserve(static_cast<std::size_t>(n));
    for (std::int8_t s : state) o.parity.push_back(s == 1 ? Parity::odd : Parity::even);
    return o;
}

/// Searches for a bijection of element indices preserving realizations and
/// adjacency. Backtracking over realization-compatible candidates; worst-case
/// exponential, intended as a desk-scale verification tool.
inline std::optional<std::vector<ElementId>> relabeling_equivalent(const GeneralizedMesh& m1,
                                                                   const GeneralizedMesh& m2) {
    if (m1.dim() != m2.dim() || m1.num_elements() != m2.num_elements()) return std::nullopt;
    const int n = m1.num_elements();
    const int w = m1.row_width();

    std::unordered_map<Simplex, std::vector<ElementId>, SimplexHash> groups2;
    for (ElementId k = 0; k < n; ++k) groups2[m2.realization(k)].push_back(k);

    // candidates per element of m1, filtered by degree pattern
    auto degree = [w](const GeneralizedMesh& m, ElementId k) {
        int d = 0;
        for (int a = 0; a < w; ++a)
            if (m.neighbor_at(k, a) != kNoNeighbor) ++d;
        return d;
    };
    std::vector<std::vector<ElementId>> candidates(static_cast<std::size_t>(n));
    for (ElementId k = 0; k < n; ++k) {
        auto it = groups2.find(m1.realization(k));
        if (it == groups2.end()) return std::nullopt;
        for (ElementId c : it->second)
            if (degree(m1, k) == degree(m2, c)) candidates[static_cast<std::size_t>(k)].push_back(c);
        if (candidates[static_cast<std::size_t>(k)].empty()) return std::nullopt;
    }

    // order by fewest candidates first
    std::vector<ElementId> order(static_cast<std::size_t>(n));
    for (ElementId k = 0; k < n; ++k) order[static_cast<std::size_t>(k)] = k;
    std::sort(order.begin(), order.end(), [&](ElementId a, ElementId b) {
        return candidates[static_cast<std::size_t>(a)].size() < candidates[static_cast<std::size_t>(b)].size();
    });

    std::vector<ElementId> phi(static_cast<std::size_t>(n), kNoNeighbor);
    std::vector<char> used(static_cast<std::size_t>(n), 0);

    // adjacency consistency of a tentative assignment phi[k] = c against
    // already-assigned neighbors (both directions follow from symmetry)
    auto consistent = [&](ElementId k, ElementId c) {
        for (int a = 0; a < w; ++a) {
            ElementId j = m1.neighbor_at(k, a);
            Simplex f = m1.facet_at(k, a);
            int pos2 = m2.position_of_facet(c, f);
            if (pos2 < 0) return false;  // realizations equal, should not happen
            ElementId j2 = m2.neighbor_at(c, pos2);
            if (j == kNoNeighbor) {
                if (j2 != kNoNeighbor) return false;
            } else {
                if (j2 == kNoNeighbor) return false;
                if (phi[static_cast<std::size_t>(j)] != kNoNeighbor &&
                    phi[static_cast<std::size_t>(j)] != j2)
                    return false;
            }
        }
        return true;
    };

    std::vector<std::size_t> choice(static_cast<std::size_t>(n), 0);
    int depth = 0;
    while (depth >= 0 && depth < n) {
        ElementId k = order[static_cast<std::size_t>(depth)];
        bool advanced = false;
        auto& cand = candidates[static_cast<std::size_t>(k)];
        for (std::size_t& idx = choice[static_cast<std::size_t>(depth)]; idx < cand.size(); ++idx) {
            ElementId c = cand[idx];
            if (used[static_cast<std::size_t>(c)] || !consistent(k, c)) continue;
            phi[static_cast<std::size_t>(k)] = c;
            used[static_cast<std::size_t>(c)] = 1;
            ++idx;
            ++depth;
            advanced = true;
            break;
        }
        if (!advanced) {
            choice[static_cast<std::size_t>(depth)] = 0;
            --depth;
            if (depth >= 0) {
                ElementId k2 = order[static_cast<std::size_t>(depth)];
                used[static_cast<std::size_t>(phi[static_cast<std::size_t>(k2)])] = 0;
                phi[static_cast<std::size_t>(k2)] = kNoNeighbor;
            }
        }
    }
    if (depth < 0) return std::nullopt;
    return phi;
}

}  // namespace genmesh
