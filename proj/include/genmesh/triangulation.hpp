#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "genmesh/simplex.hpp"

namespace genmesh {

/// A finite set of equal-dimension simplices. Element order is the insertion
/// order (it fixes the external 1-based numbering); duplicates are rejected.
class Triangulation {
  public:
    Triangulation() = default;
    explicit Triangulation(std::vector<Simplex> elements) {
        for (auto& s : elements) add(std::move(s));
    }

    void add(Simplex s) {
        if (!elements_.empty() && s.dim() != dim())
            throw ArgumentError("mixed element dimensions in triangulation");
        if (!index_.emplace(s, static_cast<ElementId>(elements_.size())).second)
            throw ArgumentError("duplicate element " + s.str());
        elements_.push_back(std::move(s));
    }

    int dim() const { return elements_.empty() ? -1 : elements_.front().dim(); }
    int size() const { return static_cast<int>(elements_.size()); }
    bool empty() const { return elements_.empty(); }
    const std::vector<Simplex>& elements() const { return elements_; }
    const Simplex& operator[](ElementId k) const { return elements_[static_cast<std::size_t>(k)]; }

    bool contains(const Simplex& s) const { return index_.count(s) > 0; }
    ElementId index_of(const Simplex& s) const {
        auto it = index_.find(s);
        return it == index_.end() ? kNoNeighbor : it->second;
    }

    /// Set equality (element order does not matter).
    bool same_elements(const Triangulation& other) const {
        if (size() != other.size()) return false;
        for (const auto& s : elements_)
            if (!other.contains(s)) return false;
        return true;
    }

  private:
    std::vector<Simplex> elements_;
    std::unordered_map<Simplex, ElementId, SimplexHash> index_;
};

/// Union of the d-subsimplices of all elements, duplicate-free and sorted.
inline std::vector<Simplex> subsimplices(const Triangulation& m, int d) {
    std::vector<Simplex> all;
    for (const auto& k : m.elements())
        for (auto& s : subsimplices(k, d)) all.push_back(std::move(s));
    std::sort(all.begin(), all.end());
    all.erase(std::unique(all.begin(), all.end()), all.end());
    return all;
}

namespace detail {

/// (facet, element, local position) triples sorted by facet; equal facets are
/// grouped contiguously. Local position = index of the omitted vertex in the
/// element's canonical (ascending) vertex list.
struct FacetUse {
    Simplex facet;
    ElementId element;
    int position;
};

inline std::vector<FacetUse> sorted_facet_uses(const Triangulation& m) {
    std::vector<FacetUse> uses;
    const int n = m.dim();
    uses.reserve(static_cast<std::size_t>(m.size()) * (n + 1));
    for (ElementId k = 0; k < m.size(); ++k) {
        const auto& verts = m[k].vertices();
        for (int a = 0; a <= n; ++a) {
            std::vector<VertexId> f;
            f.reserve(static_cast<std::size_t>(n));
            for (int j = 0; j <= n; ++j)
                if (j != a) f.push_back(verts[static_cast<std::size_t>(j)]);
            uses.push_back({Simplex(std::move(f)), k, a});
        }
    }
    std::sort(uses.begin(), uses.end(), [](const FacetUse& x, const FacetUse& y) {
        if (x.facet != y.facet) return x.facet < y.facet;
        return x.element < y.element;
    });
    return uses;
}

}  // namespace detail

/// Facets incident to exactly one element, as an (n-1)-triangulation.
inline Triangulation triangulation_boundary(const Triangulation& m) {
    Triangulation out;
    if (m.dim() < 1) return out;
    auto uses = detail::sorted_facet_uses(m);
    std::size_t i = 0;
    while (i < uses.size()) {
        std::size_t j = i;
        while (j < uses.size() && uses[j].facet == uses[i].facet) ++j;
        if (j - i == 1) out.add(uses[i].facet);
        i = j;
    }
    return out;
}

/// Elements whose vertex set contains `s`.
inline Triangulation star(const Simplex& s, const Triangulation& m) {
    Triangulation out;
    for (const auto& k : m.elements())
        if (k.contains(s)) out.add(k);
    return out;
}

/// True when some facet is incident to three or more elements.
inline bool is_branching(const Triangulation& m) {
    if (m.dim() < 1) return false;
    auto uses = detail::sorted_facet_uses(m);
    std::size_t i = 0;
    while (i < uses.size()) {
        std::size_t j = i;
        while (j < uses.size() && uses[j].facet == uses[i].facet) ++j;
        if (j - i > 2) return true;
        i = j;
    }
    return false;
}

/// Breadth-first connectivity of st(s, m) under shared-facet adjacency.
inline bool is_face_connected_star(const Simplex& s, const Triangulation& m) {
    Triangulation st = star(s, m);
    if (st.size() <= 1) return true;
    // adjacency inside the star: two elements sharing a facet
    std::unordered_map<Simplex, std::vector<int>, SimplexHash> by_facet;
    for (int k = 0; k < st.size(); ++k)
        for (const auto& f : facets(st[k])) by_facet[f].push_back(k);
    std::vector<char> seen(static_cast<std::size_t>(st.size()), 0);
    std::vector<int> stack = {0};
    seen[0] = 1;
    int count = 1;
    while (!stack.empty()) {
        int k = stack.back();
        stack.pop_back();
        for (const auto& f : facets(st[k]))
            for (int j : by_facet[f])
                if (!seen[static_cast<std::size_t>(j)]) {
                    seen[static_cast<std::size_t>(j)] = 1;
                    ++count;
                    stack.push_back(j);
                }
    }
    return count == st.size();
}

/// A triangulation whose vertices carry coordinates in R^m, m >= n.
class GeometricMesh {
  public:
    GeometricMesh() = default;
    GeometricMesh(Triangulation tri, std::vector<double> coords, int ambient_dim)
        : tri_(std::move(tri)), coords_(std::move(coords)), ambient_(ambient_dim) {
        if (ambient_ <= 0 || coords_.size() % static_cast<std::size_t>(ambient_) != 0)
            throw ArgumentError("coordinate table shape mismatch");
        if (!tri_.empty() && ambient_ < tri_.dim())
            throw ArgumentError("ambient dimension below mesh dimension");
        for (const auto& k : tri_.elements())
            for (VertexId v : k.vertices())
                if (v >= num_vertices()) throw ArgumentError("vertex id out of range");
    }

    const Triangulation& triangulation() const { return tri_; }
    int dim() const { return tri_.dim(); }
    int ambient_dim() const { return ambient_; }
    int num_vertices() const { return static_cast<int>(coords_.size() / static_cast<std::size_t>(ambient_)); }
    PointTable points() const { return {coords_.data(), num_vertices(), ambient_}; }
    const std::vector<double>& coords() const { return coords_; }

  private:
    Triangulation tri_;
    std::vector<double> coords_;
    int ambient_ = 0;
};

namespace detail {

// Decides |K| cap |K'| == |K cap K'| for two non-degenerate simplices.
//
// Points of the intersection are pairs of barycentric weights (x, y) with
// V x = W y, sum x = sum y = 1, x, y >= 0. Barycentric coordinates are unique,
// so the intersection equals the hull of the common vertices iff no feasible
// point puts weight on a non-common vertex. The feasible set is a polytope in
// at most 2(n+1) variables; its maximum of any linear objective is attained at
// a basic solution, so small support enumeration is exact up to roundoff.
inline bool mesh_condition_pair(const Simplex& k1, const Simplex& k2, const PointTable& pts) {
    if (k1 == k2) return true;
    const int m = pts.dim();
    const int p = k1.num_vertices(), q = k2.num_vertices();
    const int nvar = p + q;
    const int nrow = m + 2;

    double scale = std::max(max_edge_length(k1, pts), max_edge_length(k2, pts));
    if (scale == 0.0) return false;

    std::vector<char> common(static_cast<std::size_t>(nvar), 0);
    for (int i = 0; i < p; ++i)
        if (k2.contains(k1[i])) common[static_cast<std::size_t>(i)] = 1;
    for (int j = 0; j < q; ++j)
        if (k1.contains(k2[j])) common[static_cast<std::size_t>(p + j)] = 1;

    // rows: m coordinate-match equations, then the two affine constraints
    std::vector<double> E(static_cast<std::size_t>(nrow) * nvar, 0.0);
    std::vector<double> b(static_cast<std::size_t>(nrow), 0.0);
    for (int c = 0; c < m; ++c) {
        for (int i = 0; i < p; ++i) E[static_cast<std::size_t>(c) * nvar + i] = pts[k1[i]][c] / scale;
        for (int j = 0; j < q; ++j) E[static_cast<std::size_t>(c) * nvar + p + j] = -pts[k2[j]][c] / scale;
    }
    for (int i = 0; i < p; ++i) E[static_cast<std::size_t>(m) * nvar + i] = 1.0;
    for (int j = 0; j < q; ++j) E[static_cast<std::size_t>(m + 1) * nvar + p + j] = 1.0;
    b[static_cast<std::size_t>(m)] = 1.0;
    b[static_cast<std::size_t>(m + 1)] = 1.0;

    const double tol = 1e-9;
    const int max_support = std::min(nvar, nrow);
    std::vector<int> comb;

    double worst = 0.0;
    // enumerate supports of size 1..max_support
    std::vector<int> sel(static_cast<std::size_t>(max_support));
    for (int size = 1; size <= max_support; ++size) {
        for (int i = 0; i < size; ++i) sel[static_cast<std::size_t>(i)] = i;
        while (true) {
            // least squares solve of E[:, sel] x = b via normal equations
            std::vector<double> G(static_cast<std::size_t>(size) * size, 0.0);
            std::vector<double> rhs(static_cast<std::size_t>(size), 0.0);
            for (int a = 0; a < size; ++a) {
                for (int c = a; c < size; ++c) {
                    double dot = 0.0;
                    for (int r = 0; r < nrow; ++r)
                        dot += E[static_cast<std::size_t>(r) * nvar + sel[static_cast<std::size_t>(a)]] *
                               E[static_cast<std::size_t>(r) * nvar + sel[static_cast<std::size_t>(c)]];
                    G[static_cast<std::size_t>(a) * size + c] = dot;
                    G[static_cast<std::size_t>(c) * size + a] = dot;
                }
                double dot = 0.0;
                for (int r = 0; r < nrow; ++r)
                    dot += E[static_cast<std::size_t>(r) * nvar + sel[static_cast<std::size_t>(a)]] * b[static_cast<std::size_t>(r)];
                rhs[static_cast<std::size_t>(a)] = dot;
            }
            // Gaussian solve; singular systems are skipped
            bool singular = false;
            std::vector<double> x = rhs;
            {
                std::vector<double> A = G;
                for (int c = 0; c < size && !singular; ++c) {
                    int piv = c;
                    for (int r = c + 1; r < size; ++r)
                        if (std::abs(A[static_cast<std::size_t>(r) * size + c]) >
                            std::abs(A[static_cast<std::size_t>(piv) * size + c]))
                            piv = r;
                    if (std::abs(A[static_cast<std::size_t>(piv) * size + c]) < 1e-14) {
                        singular = true;
                        break;
                    }
                    if (piv != c) {
                        for (int j = 0; j < size; ++j)
                            std::swap(A[static_cast<std::size_t>(c) * size + j], A[static_cast<std::size_t>(piv) * size + j]);
                        std::swap(x[static_cast<std::size_t>(c)], x[static_cast<std::size_t>(piv)]);
                    }
                    for (int r = c + 1; r < size; ++r) {
                        double f = A[static_cast<std::size_t>(r) * size + c] / A[static_cast<std::size_t>(c) * size + c];
                        for (int j = c; j < size; ++j)
                            A[static_cast<std::size_t>(r) * size + j] -= f * A[static_cast<std::size_t>(c) * size + j];
                        x[static_cast<std::size_t>(r)] -= f * x[static_cast<std::size_t>(c)];
                    }
                }
                if (!singular)
                    for (int c = size - 1; c >= 0; --c) {
                        for (int j = c + 1; j < size; ++j)
                            x[static_cast<std::size_t>(c)] -= A[static_cast<std::size_t>(c) * size + j] * x[static_cast<std::size_t>(j)];
                        x[static_cast<std::size_t>(c)] /= A[static_cast<std::size_t>(c) * size + c];
                    }
            }
            if (!singular) {
                bool ok = true;
                for (int a = 0; a < size; ++a)
                    if (x[static_cast<std::size_t>(a)] < -tol) ok = false;
                if (ok) {
                    // residual check: E_B x == b
                    for (int r = 0; r < nrow && ok; ++r) {
                        double acc = 0.0;
                        for (int a = 0; a < size; ++a)
                            acc += E[static_cast<std::size_t>(r) * nvar + sel[static_cast<std::size_t>(a)]] * x[static_cast<std::size_t>(a)];
                        if (std::abs(acc - b[static_cast<std::size_t>(r)]) > 1e-7) ok = false;
                    }
                }
                if (ok) {
                    double off = 0.0;
                    for (int a = 0; a < size; ++a)
                        if (!common[static_cast<std::size_t>(sel[static_cast<std::size_t>(a)])])
                            off += std::max(0.0, x[static_cast<std::size_t>(a)]);
                    worst = std::max(worst, off);
                }
            }
            int i = size - 1;
            while (i >= 0 && sel[static_cast<std::size_t>(i)] == nvar - size + i) --i;
            if (i < 0) break;
            ++sel[static_cast<std::size_t>(i)];
            for (int j = i + 1; j < size; ++j) sel[static_cast<std::size_t>(j)] = sel[static_cast<std::size_t>(j - 1)] + 1;
        }
    }
    (void)comb;
    return worst <= 1e-7;
}

}  // namespace detail

/// Pairwise intersection test: the hulls of any two elements must meet exactly
/// in the hull of their common subsimplex. Quadratic; intended for validation
/// at desk scale only.
inline bool satisfies_mesh_condition(const GeometricMesh& mesh, std::string* first_violation = nullptr) {
    const auto& tri = mesh.triangulation();
    PointTable pts = mesh.points();
    for (int i = 0; i < tri.size(); ++i)
        for (int j = i + 1; j < tri.size(); ++j)
            if (!detail::mesh_condition_pair(tri[i], tri[j], pts)) {
                if (first_violation)
                    *first_violation = "elements " + tri[i].str() + " and " + tri[j].str() +
                                       " intersect outside their common subsimplex";
                return false;
            }
    return true;
}

/// Necessary conditions for |M| to be a manifold with boundary. Full manifold
/// recognition is not attempted.
struct RegularityReport {
    bool facet_incidence_ok = true;   // every facet incident to <= 2 elements
    bool stars_connected_ok = true;   // every star face-connected
    bool mesh_condition_ok = true;    // only meaningful if mesh_condition_checked
    bool mesh_condition_checked = false;
    bool nondegenerate_ok = true;
    std::vector<std::string> details;

    bool pass() const {
        return facet_incidence_ok && stars_connected_ok && nondegenerate_ok &&
               (!mesh_condition_checked || mesh_condition_ok);
    }
};

inline RegularityReport validate_regularity(const GeometricMesh& mesh,
                                            bool check_mesh_condition = false) {
    RegularityReport rep;
    const auto& tri = mesh.triangulation();
    PointTable pts = mesh.points();

    for (const auto& k : tri.elements())
        if (!is_nondegenerate(k, pts)) {
            rep.nondegenerate_ok = false;
            rep.details.push_back("degenerate element " + k.str());
        }

    if (tri.dim() >= 1) {
        auto uses = detail::sorted_facet_uses(tri);
        std::size_t i = 0;
        while (i < uses.size()) {
            std::size_t j = i;
            while (j < uses.size() && uses[j].facet == uses[i].facet) ++j;
            if (j - i > 2) {
                rep.facet_incidence_ok = false;
                rep.details.push_back("facet " + uses[i].facet.str() + " incident to " +
                                      std::to_string(j - i) + " elements");
            }
            i = j;
        }
    }

    for (int d = 0; d < std::max(tri.dim(), 0); ++d)
        for (const auto& s : subsimplices(tri, d))
            if (!is_face_connected_star(s, tri)) {
                rep.stars_connected_ok = false;
                rep.details.push_back("star of " + s.str() + " is not face-connected");
            }

    if (check_mesh_condition) {
        rep.mesh_condition_checked = true;
        std::string why;
        if (!satisfies_mesh_condition(mesh, &why)) {
            rep.mesh_condition_ok = false;
            rep.details.push_back(why);
        }
    }
    return rep;
}

}  // namespace genmesh
