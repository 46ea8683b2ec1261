#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "genmesh/errors.hpp"

namespace genmesh {

using VertexId = std::int32_t;
using ElementId = std::int32_t;

/// Sentinel for "no neighbor" in adjacency tables (0 in the 1-based file format).
inline constexpr ElementId kNoNeighbor = -1;

/// Read-only view of a vertex coordinate table (one row of `dim` doubles per vertex).
class PointTable {
  public:
    PointTable() = default;
    PointTable(const double* data, int num_points, int dim)
        : data_(data), num_points_(num_points), dim_(dim) {}

    int size() const { return num_points_; }
    int dim() const { return dim_; }
    std::span<const double> operator[](VertexId v) const {
        return {data_ + static_cast<std::size_t>(v) * dim_, static_cast<std::size_t>(dim_)};
    }

  private:
    const double* data_ = nullptr;
    int num_points_ = 0;
    int dim_ = 0;
};

/// An abstract simplex: a set of vertex ids, stored strictly increasing.
class Simplex {
  public:
    Simplex() = default;

    explicit Simplex(std::vector<VertexId> vertices) : verts_(std::move(vertices)) {
        canonicalize();
    }
    Simplex(std::initializer_list<VertexId> vertices) : verts_(vertices) { canonicalize(); }
    explicit Simplex(std::span<const VertexId> vertices)
        : verts_(vertices.begin(), vertices.end()) {
        canonicalize();
    }

    /// Dimension n (vertex count minus one); -1 for the empty simplex.
    int dim() const { return static_cast<int>(verts_.size()) - 1; }
    int num_vertices() const { return static_cast<int>(verts_.size()); }
    const std::vector<VertexId>& vertices() const { return verts_; }
    VertexId operator[](int i) const { return verts_[static_cast<std::size_t>(i)]; }

    bool contains(VertexId v) const {
        return std::binary_search(verts_.begin(), verts_.end(), v);
    }
    bool contains(const Simplex& other) const {
        return std::includes(verts_.begin(), verts_.end(), other.verts_.begin(),
                             other.verts_.end());
    }

    friend bool operator==(const Simplex&, const Simplex&) = default;
    friend auto operator<=>(const Simplex& a, const Simplex& b) {
        return std::lexicographical_compare_three_way(a.verts_.begin(), a.verts_.end(),
                                                      b.verts_.begin(), b.verts_.end());
    }

    std::string str() const {
        std::string out = "{";
        for (std::size_t i = 0; i < verts_.size(); ++i) {
            if (i) out += ",";
            out += std::to_string(verts_[i]);
        }
        return out + "}";
    }

  private:
    void canonicalize() {
        std::sort(verts_.begin(), verts_.end());
        if (std::adjacent_find(verts_.begin(), verts_.end()) != verts_.end())
            throw ArgumentError("simplex has a repeated vertex");
        if (!verts_.empty() && verts_.front() < 0)
            throw ArgumentError("negative vertex id");
    }

    std::vector<VertexId> verts_;
};

struct SimplexHash {
    std::size_t operator()(const Simplex& s) const {
        std::size_t h = 1469598103934665603ull;
        for (VertexId v : s.vertices()) {
            h ^= static_cast<std::size_t>(v) + 0x9e3779b97f4a7c15ull;
            h *= 1099511628211ull;
        }
        return h;
    }
};

enum class Parity : std::uint8_t { even = 0, odd = 1 };

inline Parity operator^(Parity a, Parity b) {
    return static_cast<Parity>(static_cast<std::uint8_t>(a) ^ static_cast<std::uint8_t>(b));
}

inline Parity flip(Parity p) { return p ^ Parity::odd; }

/// Parity of the permutation sorting `ordering` ascending. O(k^2), k is tiny here.
inline Parity sort_parity(std::span<const VertexId> ordering) {
    int inversions = 0;
    for (std::size_t i = 0; i < ordering.size(); ++i)
        for (std::size_t j = i + 1; j < ordering.size(); ++j)
            if (ordering[i] > ordering[j]) ++inversions;
    return (inversions % 2 == 0) ? Parity::even : Parity::odd;
}

/// A simplex with an orientation, stored as the parity of any defining vertex
/// ordering relative to the canonical ascending order. For vertices (dim 0),
/// even means "+" and odd means "-".
class OrientedSimplex {
  public:
    OrientedSimplex() = default;
    OrientedSimplex(Simplex s, Parity p) : simplex_(std::move(s)), parity_(p) {}

    const Simplex& simplex() const { return simplex_; }
    Parity parity() const { return parity_; }
    int dim() const { return simplex_.dim(); }

    OrientedSimplex operator-() const { return {simplex_, flip(parity_)}; }

    /// A vertex ordering realizing this orientation (ascending, with the first
    /// two entries swapped when the parity is odd).
    std::vector<VertexId> representative_ordering() const {
        std::vector<VertexId> rep = simplex_.vertices();
        if (parity_ == Parity::odd && rep.size() >= 2) std::swap(rep[0], rep[1]);
        return rep;
    }

    friend bool operator==(const OrientedSimplex&, const OrientedSimplex&) = default;

  private:
    Simplex simplex_;
    Parity parity_ = Parity::even;
};

/// Orientation defined by an explicit vertex ordering.
inline OrientedSimplex orient(std::span<const VertexId> ordering) {
    return {Simplex(ordering), sort_parity(ordering)};
}
inline OrientedSimplex orient(std::initializer_list<VertexId> ordering) {
    return orient(std::span<const VertexId>(ordering.begin(), ordering.size()));
}

/// All d-subsimplices of `s`, in lexicographic (hence canonical) order.
inline std::vector<Simplex> subsimplices(const Simplex& s, int d) {
    const int n = s.dim();
    if (d < 0 || d > n) throw ArgumentError("subsimplex dimension out of range");
    const int k = d + 1;
    std::vector<Simplex> out;
    std::vector<int> idx(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;
    while (true) {
        std::vector<VertexId> verts(static_cast<std::size_t>(k));
        for (int i = 0; i < k; ++i) verts[static_cast<std::size_t>(i)] = s[idx[static_cast<std::size_t>(i)]];
        out.push_back(Simplex(std::move(verts)));
        int i = k - 1;
        while (i >= 0 && idx[static_cast<std::size_t>(i)] == n + 1 - k + i) --i;
        if (i < 0) break;
        ++idx[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < k; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
    }
    return out;
}

/// Facets (codimension-1 subsimplices) of `s`.
inline std::vector<Simplex> facets(const Simplex& s) {
    if (s.dim() < 1) return {};
    return subsimplices(s, s.dim() - 1);
}

/// Orientation induced on the facet obtained by omitting the vertex at
/// `omitted_position` (1-based) of a representative ordering of `s`:
/// the ordering with the entry removed, signed by (-1)^(position+1).
/// For an oriented edge this yields the signed-vertex convention
/// (first endpoint "-", second endpoint "+").
inline OrientedSimplex induced_facet_orientation(const OrientedSimplex& s, int omitted_position) {
    const int n = s.dim();
    if (n < 1) throw ArgumentError("induced orientation needs dim >= 1");
    if (omitted_position < 1 || omitted_position > n + 1)
        throw ArgumentError("omitted position out of range");
    std::vector<VertexId> rep = s.representative_ordering();
    rep.erase(rep.begin() + (omitted_position - 1));
    Parity p = sort_parity(rep);
    if (omitted_position % 2 == 0) p = flip(p);  // (-1)^(i+1)
    return {Simplex(std::move(rep)), p};
}

/// Orientation induced on the facet opposite vertex `v` of `s`.
inline OrientedSimplex induced_orientation_omitting(const OrientedSimplex& s, VertexId v) {
    std::vector<VertexId> rep = s.representative_ordering();
    auto it = std::find(rep.begin(), rep.end(), v);
    if (it == rep.end()) throw ArgumentError("vertex not in simplex");
    return induced_facet_orientation(s, static_cast<int>(it - rep.begin()) + 1);
}

/// True when `s1` and `s2` induce opposite orientations on the shared facet `f`.
/// This is the meaningful form when the two underlying simplices coincide.
inline bool consistently_oriented_through(const OrientedSimplex& s1, const OrientedSimplex& s2,
                                          const Simplex& f) {
    if (s1.dim() != s2.dim() || f.dim() != s1.dim() - 1)
        throw ArgumentError("facet dimension mismatch");
    if (!s1.simplex().contains(f) || !s2.simplex().contains(f))
        throw ArgumentError("not a shared facet");
    VertexId a = -1, b = -1;
    for (VertexId v : s1.simplex().vertices())
        if (!f.contains(v)) a = v;
    for (VertexId v : s2.simplex().vertices())
        if (!f.contains(v)) b = v;
    OrientedSimplex o1 = induced_orientation_omitting(s1, a);
    OrientedSimplex o2 = induced_orientation_omitting(s2, b);
    return o1.parity() != o2.parity();
}

/// True when two distinct n-simplices sharing a facet induce opposite
/// orientations on it.
inline bool consistently_oriented(const OrientedSimplex& s1, const OrientedSimplex& s2) {
    if (s1.simplex() == s2.simplex())
        throw ArgumentError("consistency of a simplex with itself requires an explicit facet");
    std::vector<VertexId> common;
    std::set_intersection(s1.simplex().vertices().begin(), s1.simplex().vertices().end(),
                          s2.simplex().vertices().begin(), s2.simplex().vertices().end(),
                          std::back_inserter(common));
    if (static_cast<int>(common.size()) != s1.dim())
        throw ArgumentError("simplices do not share a facet");
    return consistently_oriented_through(s1, s2, Simplex(std::move(common)));
}

namespace detail {

inline double det_small(double* a, int n) {
    // Gaussian elimination with partial pivoting; a is n x n row-major, destroyed.
    double det = 1.0;
    for (int c = 0; c < n; ++c) {
        int piv = c;
        for (int r = c + 1; r < n; ++r)
            if (std::abs(a[r * n + c]) > std::abs(a[piv * n + c])) piv = r;
        if (piv != c) {
            for (int j = 0; j < n; ++j) std::swap(a[c * n + j], a[piv * n + j]);
            det = -det;
        }
        double p = a[c * n + c];
        if (p == 0.0) return 0.0;
        det *= p;
        for (int r = c + 1; r < n; ++r) {
            double f = a[r * n + c] / p;
            for (int j = c; j < n; ++j) a[r * n + j] -= f * a[c * n + j];
        }
    }
    return det;
}

inline double max_edge_length(const Simplex& s, const PointTable& pts) {
    double best = 0.0;
    const auto& v = s.vertices();
    for (std::size_t i = 0; i < v.size(); ++i)
        for (std::size_t j = i + 1; j < v.size(); ++j) {
            double d2 = 0.0;
            auto pi = pts[v[i]], pj = pts[v[j]];
            for (int c = 0; c < pts.dim(); ++c) d2 += (pi[c] - pj[c]) * (pi[c] - pj[c]);
            best = std::max(best, std::sqrt(d2));
        }
    return best;
}

}  // namespace detail

inline constexpr double kDegeneracyTol = 1e-12;

/// Gram determinant of the edge vectors from the first vertex. Nonzero iff the
/// vertices are affinely independent; equals (n! vol)^2 for full-dimensional
/// simplices.
inline double gram_determinant(const Simplex& s, const PointTable& pts) {
    const int n = s.dim();
    const int m = pts.dim();
    if (n == 0) return 1.0;
    std::vector<double> e(static_cast<std::size_t>(n) * m);
    auto p0 = pts[s[0]];
    for (int i = 0; i < n; ++i) {
        auto pi = pts[s[i + 1]];
        for (int c = 0; c < m; ++c) e[static_cast<std::size_t>(i) * m + c] = pi[c] - p0[c];
    }
    std::vector<double> g(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double dot = 0.0;
            for (int c = 0; c < m; ++c)
                dot += e[static_cast<std::size_t>(i) * m + c] * e[static_cast<std::size_t>(j) * m + c];
            g[static_cast<std::size_t>(i) * n + j] = dot;
        }
    return detail::det_small(g.data(), n);
}

/// Affine independence test with the relative tolerance 1e-12 * (max edge)^n.
inline bool is_nondegenerate(const Simplex& s, const PointTable& pts) {
    const int n = s.dim();
    if (n == 0) return true;
    double scale = detail::max_edge_length(s, pts);
    if (scale == 0.0) return false;
    double vol_n = std::sqrt(std::max(0.0, gram_determinant(s, pts)));  // n! * vol
    return vol_n > kDegeneracyTol * std::pow(scale, n);
}

/// n-dimensional volume of the realization of `s`.
inline double simplex_volume(const Simplex& s, const PointTable& pts) {
    const int n = s.dim();
    double factorial = 1.0;
    for (int i = 2; i <= n; ++i) factorial *= i;
    return std::sqrt(std::max(0.0, gram_determinant(s, pts))) / factorial;
}

/// The orientation of a full-dimensional simplex whose edge-vector determinant
/// is positive. Throws DegeneracyError below the tolerance.
inline OrientedSimplex natural_orientation(const Simplex& k, const PointTable& pts) {
    const int n = k.dim();
    if (n != pts.dim())
        throw ArgumentError("natural orientation requires an n-simplex in R^n");
    std::vector<double> a(static_cast<std::size_t>(n) * n);
    auto p0 = pts[k[0]];
    for (int i = 0; i < n; ++i) {
        auto pi = pts[k[i + 1]];
        for (int c = 0; c < n; ++c) a[static_cast<std::size_t>(c) * n + i] = pi[c] - p0[c];
    }
    double det = detail::det_small(a.data(), n);
    double scale = detail::max_edge_length(k, pts);
    if (std::abs(det) <= kDegeneracyTol * std::pow(scale, n))
        throw DegeneracyError("degenerate simplex: " + k.str());
    return {k, det > 0 ? Parity::even : Parity::odd};
}

}  // namespace genmesh
