#pragma once

#include <vector>

#include "genmesh/simplex.hpp"

namespace genmesh {

/// Quadrature nodes in barycentric coordinates with weights summing to one.
struct SimplexQuadrature {
    int num_vertices;              // d+1 barycentric entries per node
    std::vector<double> nodes;     // row-major, num_nodes x num_vertices
    std::vector<double> weights;

    int size() const { return static_cast<int>(weights.size()); }
    std::span<const double> node(int q) const {
        return {nodes.data() + static_cast<std::size_t>(q) * num_vertices,
                static_cast<std::size_t>(num_vertices)};
    }
};

/// Symmetric rules exact for polynomials of degree >= 4 on edges/triangles
/// and degree 2 on tetrahedra (the assembled integrands have degree <= 2).
inline SimplexQuadrature simplex_quadrature(int dim) {
    SimplexQuadrature q;
    q.num_vertices = dim + 1;
    switch (dim) {
        case 0:
            q.nodes = {1.0};
            q.weights = {1.0};
            return q;
        case 1: {  // 3-point Gauss-Legendre mapped to barycentric
            const double a = 0.5 * (1.0 - std::sqrt(3.0 / 5.0));
            const double b = 0.5 * (1.0 + std::sqrt(3.0 / 5.0));
            q.nodes = {1 - a, a, 0.5, 0.5, 1 - b, b};
            q.weights = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};
            return q;
        }
        case 2: {  // 6-point degree-4 rule
            const double a1 = 0.445948490915965, b1 = 0.108103018168070;
            const double a2 = 0.091576213509771, b2 = 0.816847572980459;
            const double w1 = 0.223381589678011, w2 = 0.109951743655322;
            q.nodes = {a1, a1, b1, a1, b1, a1, b1, a1, a1,
                       a2, a2, b2, a2, b2, a2, b2, a2, a2};
            q.weights = {w1, w1, w1, w2, w2, w2};
            return q;
        }
        case 3: {  // 4-point degree-2 rule
            const double a = 0.585410196624969, b = 0.138196601125011;
            q.nodes = {a, b, b, b, b, a, b, b, b, b, a, b, b, b, b, a};
            q.weights = {0.25, 0.25, 0.25, 0.25};
            return q;
        }
        default:
            throw ArgumentError("no quadrature rule for this dimension");
    }
}

}  // namespace genmesh
