#pragma once

#include "den/mesh.hpp"
#include "den/random_field.hpp"
#include "den/sparse.hpp"

namespace den {

/// The discrete Steklov operator pencil: A = -S + k^2 M_n, B = boundary mass.
struct AssembledSystem {
    SparseMatrix stiffness;      // S, real symmetric PSD
    SparseMatrix mass_weighted;  // M_n, complex symmetric
    SparseMatrix boundary_mass;  // M_b, real symmetric PSD, boundary support
    SparseMatrix a;              // -S + k^2 M_n
    SparseMatrix b;              // = boundary_mass
    double k_squared = 1.0;
    const Mesh* mesh = nullptr;
    Eigen::VectorXcd n_values;   // nodal refractive index used in M_n
};

/// P1 stiffness (integral of grad u . grad v); exact per-triangle gradients.
SparseMatrix assemble_stiffness(const Mesh& mesh);

/// n-weighted P1 mass by the edge-midpoint quadrature rule: midpoint values
/// are averages of the endpoint nodal values, each element contributes
/// (|K|/12) * (sum of adjacent midpoint values) per entry. Exact for
/// constant n since the rule integrates quadratics exactly.
SparseMatrix assemble_mass_weighted(const Mesh& mesh, const Eigen::VectorXcd& n);

/// Boundary mass: per edge of length h the 2x2 block [[h/3, h/6], [h/6, h/3]].
SparseMatrix assemble_boundary_mass(const Mesh& mesh);

AssembledSystem build_system(const Mesh& mesh, const ParameterField& n, double k_squared);
AssembledSystem build_system(const Mesh& mesh, const Eigen::VectorXcd& n_values, double k_squared);

}  // namespace den
