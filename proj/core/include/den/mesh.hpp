#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace den {

/// Unstructured P1 triangulation with boundary topology. Immutable after
/// construction; safe for concurrent reads.
struct Mesh {
    Eigen::MatrixXd nodes;                            // N x 2
    std::vector<std::array<std::int64_t, 3>> triangles;       // CCW
    std::vector<std::array<std::int64_t, 2>> boundary_edges;  // oriented along the loop
    std::vector<std::int64_t> boundary_nodes;                 // sorted, unique

    std::int64_t node_count() const { return nodes.rows(); }
    std::int64_t triangle_count() const { return static_cast<std::int64_t>(triangles.size()); }

    double triangle_area(std::int64_t t) const;
    /// Indices of nodes not on the boundary, ascending.
    std::vector<std::int64_t> interior_nodes() const;
};

/// Uniform grid on [0,1]^2, each cell split along the lower-left to
/// upper-right diagonal. (subdivisions+1)^2 nodes.
Mesh generate_unit_square_mesh(std::int64_t subdivisions);

/// Concentric-ring disk mesh: ring j of radius j/R carries 6j nodes,
/// R = max(1, round(1/target_edge_length)). Boundary nodes lie on the unit
/// circle.
Mesh generate_unit_disk_mesh(double target_edge_length);

struct PointLocation {
    std::int64_t triangle;
    std::array<double, 3> barycentric;
};

/// Locate p in the mesh; ties on shared edges resolve to the lowest triangle
/// index. Points within snap tolerance 1e-8 outside the hull are snapped.
/// Throws PointOutsideMesh otherwise.
PointLocation locate_point(const Mesh& mesh, const Eigen::Vector2d& p);

/// Structural validity: index ranges, positive areas, boundary edges forming
/// closed loops of single-triangle edges, boundary node set consistency.
/// Throws ValidationError with a description when violated.
void validate_mesh(const Mesh& mesh);

void save_mesh(const std::string& path, const Mesh& mesh);
Mesh load_mesh(const std::string& path);

}  // namespace den
