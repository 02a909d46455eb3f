#include "den/fem.hpp"

#include <cmath>

#include "den/errors.hpp"

namespace den {

namespace {

constexpr double kAreaTol = 1e-14;

struct TriGeom {
    double area;
    Eigen::Vector2d grad[3];  // gradients of the three barycentric basis functions
};

TriGeom triangle_geometry(const Mesh& mesh, std::int64_t t) {
    const auto& tri = mesh.triangles[static_cast<std::size_t>(t)];
    const Eigen::Vector2d p0 = mesh.nodes.row(tri[0]);
    const Eigen::Vector2d p1 = mesh.nodes.row(tri[1]);
    const Eigen::Vector2d p2 = mesh.nodes.row(tri[2]);
    const double twice_area = (p1.x() - p0.x()) * (p2.y() - p0.y()) - (p2.x() - p0.x()) * (p1.y() - p0.y());
    if (twice_area < 2.0 * kAreaTol)
        throw DegenerateTriangle("triangle " + std::to_string(t) + " has area below tolerance");
    TriGeom g;
    g.area = 0.5 * twice_area;
    // grad(phi_i) = rot90(opposite edge) / (2 area)
    g.grad[0] = Eigen::Vector2d(p1.y() - p2.y(), p2.x() - p1.x()) / twice_area;
    g.grad[1] = Eigen::Vector2d(p2.y() - p0.y(), p0.x() - p2.x()) / twice_area;
    g.grad[2] = Eigen::Vector2d(p0.y() - p1.y(), p1.x() - p0.x()) / twice_area;
    return g;
}

}  // namespace

SparseMatrix assemble_stiffness(const Mesh& mesh) {
    std::vector<Triplet> t;
    t.reserve(static_cast<std::size_t>(mesh.triangle_count()) * 9);
    for (std::int64_t e = 0; e < mesh.triangle_count(); ++e) {
        const TriGeom g = triangle_geometry(mesh, e);
        const auto& tri = mesh.triangles[static_cast<std::size_t>(e)];
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b)
                t.push_back({tri[static_cast<std::size_t>(a)], tri[static_cast<std::size_t>(b)],
                             Complex(g.area * g.grad[a].dot(g.grad[b]), 0.0)});
    }
    return SparseMatrix::from_triplets(mesh.node_count(), mesh.node_count(), std::move(t));
}

SparseMatrix assemble_mass_weighted(const Mesh& mesh, const Eigen::VectorXcd& n) {
    if (n.size() != mesh.node_count()) throw ShapeMismatch("field size does not match mesh node count");
    std::vector<Triplet> t;
    t.reserve(static_cast<std::size_t>(mesh.triangle_count()) * 9);
    for (std::int64_t e = 0; e < mesh.triangle_count(); ++e) {
        const TriGeom g = triangle_geometry(mesh, e);
        const auto& tri = mesh.triangles[static_cast<std::size_t>(e)];
        // Edge-midpoint values; midpoint m_ab lies opposite vertex c.
        const Complex n01 = 0.5 * (n(tri[0]) + n(tri[1]));
        const Complex n12 = 0.5 * (n(tri[1]) + n(tri[2]));
        const Complex n20 = 0.5 * (n(tri[2]) + n(tri[0]));
        const double w = g.area / 12.0;
        const Complex mloc[3][3] = {
            {w * (n01 + n20), w * n01, w * n20},
            {w * n01, w * (n01 + n12), w * n12},
            {w * n20, w * n12, w * (n12 + n20)},
        };
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b)
                t.push_back({tri[static_cast<std::size_t>(a)], tri[static_cast<std::size_t>(b)], mloc[a][b]});
    }
    return SparseMatrix::from_triplets(mesh.node_count(), mesh.node_count(), std::move(t));
}

SparseMatrix assemble_boundary_mass(const Mesh& mesh) {
    std::vector<Triplet> t;
    t.reserve(mesh.boundary_edges.size() * 4);
    for (const auto& edge : mesh.boundary_edges) {
        const Eigen::Vector2d p = mesh.nodes.row(edge[0]);
        const Eigen::Vector2d q = mesh.nodes.row(edge[1]);
        const double h = (q - p).norm();
        t.push_back({edge[0], edge[0], Complex(h / 3.0, 0.0)});
        t.push_back({edge[1], edge[1], Complex(h / 3.0, 0.0)});
        t.push_back({edge[0], edge[1], Complex(h / 6.0, 0.0)});
        t.push_back({edge[1], edge[0], Complex(h / 6.0, 0.0)});
    }
    return SparseMatrix::from_triplets(mesh.node_count(), mesh.node_count(), std::move(t));
}

AssembledSystem build_system(const Mesh& mesh, const Eigen::VectorXcd& n_values, double k_squared) {
    if (!(k_squared > 0.0)) throw ValidationError("k_squared must be positive");
    AssembledSystem sys;
    sys.stiffness = assemble_stiffness(mesh);
    sys.mass_weighted = assemble_mass_weighted(mesh, n_values);
    sys.boundary_mass = assemble_boundary_mass(mesh);
    sys.a = sys.stiffness.linear_combination(Complex(-1.0, 0.0), Complex(k_squared, 0.0), sys.mass_weighted);
    sys.b = sys.boundary_mass;
    sys.k_squared = k_squared;
    sys.mesh = &mesh;
    sys.n_values = n_values;
    return sys;
}

AssembledSystem build_system(const Mesh& mesh, const ParameterField& n, double k_squared) {
    return build_system(mesh, n.values, k_squared);
}

}  // namespace den
