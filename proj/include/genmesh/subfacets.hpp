#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <vector>

#include "genmesh/generalized_mesh.hpp"

namespace genmesh {

/// A subsimplex together with one connected component of its generalized
/// star. These are the degree-of-freedom objects: several of them may be
/// attached to the same subsimplex, one per component.
struct GeneralizedSubfacet {
    Simplex simplex;
    std::vector<ElementId> component;  // sorted ascending

    friend bool operator==(const GeneralizedSubfacet&, const GeneralizedSubfacet&) = default;
};

/// The set of generalized d-subfacets of a mesh, with the local-to-global
/// index map used for assembly.
///
/// Local slot convention: slot i of element k is the i-th (d+1)-subset of the
/// element's ascending vertex list, subsets in lexicographic order.
class SubfacetSet {
  public:
    int degree() const { return d_; }
    int size() const { return static_cast<int>(subfacets_.size()); }
    int slots_per_element() const { return slots_; }

    const GeneralizedSubfacet& operator[](int i) const {
        return subfacets_[static_cast<std::size_t>(i)];
    }
    const std::vector<GeneralizedSubfacet>& all() const { return subfacets_; }

    /// Global subfacet index for (element, local slot).
    std::int32_t global_index(ElementId k, int slot) const {
        return local_to_global_[static_cast<std::size_t>(k) * slots_ + slot];
    }

    /// The unique subfacet attached to `s` whose component contains `k`, or -1.
    std::int32_t find(const Simplex& s, ElementId k) const {
        for (int slot = 0; slot < slots_; ++slot) {
            std::int32_t g = global_index(k, slot);
            if (subfacets_[static_cast<std::size_t>(g)].simplex == s) return g;
        }
        return -1;
    }

    friend SubfacetSet generalized_subfacets(const GeneralizedMesh& m, int d);

  private:
    int d_ = 0;
    int slots_ = 0;
    std::vector<GeneralizedSubfacet> subfacets_;
    std::vector<std::int32_t> local_to_global_;  // nelt x slots_
};

namespace detail {

inline constexpr int kMaxSubfacetKey = 8;

struct SubsetUse {
    std::array<VertexId, kMaxSubfacetKey> key;
    ElementId element;
    std::int32_t slot;
};

inline int binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    long long r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return static_cast<int>(r);
}

}  // namespace detail

/// Enumerates the generalized d-subfacets: for every d-subsimplex S, one
/// subfacet per connected component of the graph joining elements of st(S)
/// that are adjacent through a facet containing S. Components are labeled
/// deterministically (search started from the smallest unvisited element,
/// subfacets emitted per S in that order).
inline SubfacetSet generalized_subfacets(const GeneralizedMesh& m, int d) {
    const int n = m.dim();
    if (d < 0 || d > n) throw ArgumentError("subfacet dimension out of range");
    if (d + 1 > detail::kMaxSubfacetKey)
        throw ArgumentError("subfacet dimension above supported packing width");
    const int w = m.row_width();
    const int slots = detail::binomial(n + 1, d + 1);
    const int nelt = m.num_elements();

    SubfacetSet out;
    out.d_ = d;
    out.slots_ = slots;
    out.local_to_global_.assign(static_cast<std::size_t>(nelt) * slots, -1);

    // every (element, slot) pair keyed by the subset vertices
    std::vector<detail::SubsetUse> uses;
    uses.reserve(static_cast<std::size_t>(nelt) * slots);
    std::vector<VertexId> row;
    std::vector<int> idx(static_cast<std::size_t>(d + 1));
    for (ElementId k = 0; k < nelt; ++k) {
        auto r = m.element_row(k);
        row.assign(r.begin(), r.end());
        std::sort(row.begin(), row.end());
        for (int i = 0; i <= d; ++i) idx[static_cast<std::size_t>(i)] = i;
        std::int32_t slot = 0;
        while (true) {
            detail::SubsetUse u;
            u.key.fill(-1);
            for (int i = 0; i <= d; ++i) u.key[static_cast<std::size_t>(i)] = row[static_cast<std::size_t>(idx[static_cast<std::size_t>(i)])];
            u.element = k;
            u.slot = slot++;
            uses.push_back(u);
            int i = d;
            while (i >= 0 && idx[static_cast<std::size_t>(i)] == w - (d + 1) + i) --i;
            if (i < 0) break;
            ++idx[static_cast<std::size_t>(i)];
            for (int j = i + 1; j <= d; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
        }
    }
    std::sort(uses.begin(), uses.end(), [](const detail::SubsetUse& a, const detail::SubsetUse& b) {
        if (a.key != b.key) return a.key < b.key;
        return a.element < b.element;
    });

    // walk each group st(S); components by depth-first search with an explicit
    // stack (adjacent through any facet containing S <=> the omitted vertex of
    // the shared facet lies outside S)
    std::vector<std::size_t> group;  // indices into `uses` of the current star
    std::vector<ElementId> stack;
    std::vector<ElementId> star_elems;
    std::size_t i = 0;
    while (i < uses.size()) {
        std::size_t j = i;
        while (j < uses.size() && uses[j].key == uses[i].key) ++j;

        star_elems.clear();
        for (std::size_t t = i; t < j; ++t) star_elems.push_back(uses[t].element);
        const auto& key = uses[i].key;
        auto in_star = [&](ElementId e) {
            auto it = std::lower_bound(star_elems.begin(), star_elems.end(), e);
            return it != star_elems.end() && *it == e
                       ? static_cast<std::size_t>(it - star_elems.begin())
                       : static_cast<std::size_t>(star_elems.size());
        };
        auto key_contains = [&](VertexId v) {
            for (int c = 0; c <= d; ++c)
                if (key[static_cast<std::size_t>(c)] == v) return true;
            return false;
        };

        std::vector<char> visited(star_elems.size(), 0);
        for (std::size_t start = 0; start < star_elems.size(); ++start) {
            if (visited[start]) continue;
            std::vector<ElementId> component;
            stack.clear();
            stack.push_back(star_elems[start]);
            visited[start] = 1;
            while (!stack.empty()) {
                ElementId k = stack.back();
                stack.pop_back();
                component.push_back(k);
                auto r = m.element_row(k);
                for (int a = 0; a < w; ++a) {
                    if (key_contains(r[static_cast<std::size_t>(a)])) continue;  // facet omitting this vertex misses S
                    ElementId nb = m.neighbor_at(k, a);
                    if (nb == kNoNeighbor) continue;
                    std::size_t pos = in_star(nb);
                    if (pos < star_elems.size() && !visited[pos]) {
                        visited[pos] = 1;
                        stack.push_back(nb);
                    }
                }
            }
            std::sort(component.begin(), component.end());
            std::int32_t id = static_cast<std::int32_t>(out.subfacets_.size());
            std::vector<VertexId> verts;
            for (int c = 0; c <= d; ++c) verts.push_back(key[static_cast<std::size_t>(c)]);
            out.subfacets_.push_back({Simplex(std::move(verts)), std::move(component)});
            for (ElementId k : out.subfacets_.back().component) {
                // all slots of k whose subset equals S point to this subfacet
                for (std::size_t t = i; t < j; ++t)
                    if (uses[t].element == k)
                        out.local_to_global_[static_cast<std::size_t>(k) * slots + uses[t].slot] = id;
            }
        }
        i = j;
    }
    return out;
}

/// Containment of generalized subfacets: the simplices nest one way and the
/// stars nest the other way. Requires dim(inner) < dim(outer).
inline bool contains(const GeneralizedSubfacet& inner, const GeneralizedSubfacet& outer) {
    if (inner.simplex.dim() >= outer.simplex.dim())
        throw ArgumentError("containment requires a strict dimension gap");
    return outer.simplex.contains(inner.simplex) &&
           std::includes(inner.component.begin(), inner.component.end(),
                         outer.component.begin(), outer.component.end());
}

/// Generalized vertices whose component contains both elements.
inline std::vector<std::int32_t> shared_generalized_vertices(const GeneralizedMesh& m,
                                                             const SubfacetSet& vertices,
                                                             ElementId k1, ElementId k2) {
    if (vertices.degree() != 0) throw ArgumentError("expected generalized vertices (d = 0)");
    std::vector<std::int32_t> out;
    for (int slot = 0; slot < vertices.slots_per_element(); ++slot) {
        std::int32_t g = vertices.global_index(k1, slot);
        const auto& comp = vertices[g].component;
        if (std::binary_search(comp.begin(), comp.end(), k2)) out.push_back(g);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace genmesh
