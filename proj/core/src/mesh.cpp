#include "den/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <set>

#include "den/container.hpp"
#include "den/errors.hpp"

namespace den {

namespace {

double signed_area(const Eigen::Vector2d& a, const Eigen::Vector2d& b, const Eigen::Vector2d& c) {
    return 0.5 * ((b.x() - a.x()) * (c.y() - a.y()) - (c.x() - a.x()) * (b.y() - a.y()));
}

}  // namespace

double Mesh::triangle_area(std::int64_t t) const {
    const auto& tri = triangles[static_cast<std::size_t>(t)];
    return signed_area(nodes.row(tri[0]), nodes.row(tri[1]), nodes.row(tri[2]));
}

std::vector<std::int64_t> Mesh::interior_nodes() const {
    std::vector<std::int64_t> out;
    out.reserve(static_cast<std::size_t>(node_count()));
    std::size_t b = 0;
    for (std::int64_t i = 0; i < node_count(); ++i) {
        if (b < boundary_nodes.size() && boundary_nodes[b] == i) {
            ++b;
        } else {
            out.push_back(i);
        }
    }
    return out;
}

Mesh generate_unit_square_mesh(std::int64_t n) {
    if (n < 1) throw ValidationError("subdivisions must be >= 1");
    Mesh m;
    const std::int64_t side = n + 1;
    m.nodes.resize(side * side, 2);
    for (std::int64_t iy = 0; iy < side; ++iy)
        for (std::int64_t ix = 0; ix < side; ++ix) {
            m.nodes(iy * side + ix, 0) = static_cast<double>(ix) / static_cast<double>(n);
            m.nodes(iy * side + ix, 1) = static_cast<double>(iy) / static_cast<double>(n);
        }
    auto id = [side](std::int64_t ix, std::int64_t iy) { return iy * side + ix; };
    for (std::int64_t iy = 0; iy < n; ++iy)
        for (std::int64_t ix = 0; ix < n; ++ix) {
            // Diagonal from (ix,iy) to (ix+1,iy+1), both triangles CCW.
            m.triangles.push_back({id(ix, iy), id(ix + 1, iy), id(ix + 1, iy + 1)});
            m.triangles.push_back({id(ix, iy), id(ix + 1, iy + 1), id(ix, iy + 1)});
        }
    for (std::int64_t ix = 0; ix < n; ++ix) m.boundary_edges.push_back({id(ix, 0), id(ix + 1, 0)});
    for (std::int64_t iy = 0; iy < n; ++iy) m.boundary_edges.push_back({id(n, iy), id(n, iy + 1)});
    for (std::int64_t ix = n; ix > 0; --ix) m.boundary_edges.push_back({id(ix, n), id(ix - 1, n)});
    for (std::int64_t iy = n; iy > 0; --iy) m.boundary_edges.push_back({id(0, iy), id(0, iy - 1)});
    std::set<std::int64_t> bset;
    for (const auto& e : m.boundary_edges) {
        bset.insert(e[0]);
        bset.insert(e[1]);
    }
    m.boundary_nodes.assign(bset.begin(), bset.end());
    return m;
}

Mesh generate_unit_disk_mesh(double target) {
    if (!(target > 0.0) || !(target < 1.0 + 1e-12))
        throw ValidationError("target_edge_length must lie in (0, 1]");
    const std::int64_t rings = std::max<std::int64_t>(1, std::llround(1.0 / target));
    Mesh m;
    // Ring j (0-based radius j/rings) carries 6j nodes; ring 0 is the center.
    std::vector<std::int64_t> ring_start(static_cast<std::size_t>(rings) + 1, 0);
    std::int64_t total = 1;
    for (std::int64_t j = 1; j <= rings; ++j) {
        ring_start[static_cast<std::size_t>(j)] = total;
        total += 6 * j;
    }
    m.nodes.resize(total, 2);
    m.nodes.row(0) << 0.0, 0.0;
    for (std::int64_t j = 1; j <= rings; ++j) {
        const double r = static_cast<double>(j) / static_cast<double>(rings);
        const std::int64_t cnt = 6 * j;
        for (std::int64_t k = 0; k < cnt; ++k) {
            const double th = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(cnt);
            m.nodes(ring_start[static_cast<std::size_t>(j)] + k, 0) = r * std::cos(th);
            m.nodes(ring_start[static_cast<std::size_t>(j)] + k, 1) = r * std::sin(th);
        }
    }
    auto ring_node = [&](std::int64_t j, std::int64_t k) {
        if (j == 0) return std::int64_t{0};
        const std::int64_t cnt = 6 * j;
        return ring_start[static_cast<std::size_t>(j)] + ((k % cnt) + cnt) % cnt;
    };
    // Annulus between ring j-1 and ring j: per sector, j "outer-apex" strips.
    for (std::int64_t j = 1; j <= rings; ++j) {
        for (std::int64_t s = 0; s < 6; ++s) {
            const std::int64_t in0 = s * (j - 1);   // first inner node of the sector
            const std::int64_t out0 = s * j;        // first outer node of the sector
            for (std::int64_t k = 0; k < j; ++k) {
                m.triangles.push_back({ring_node(j, out0 + k), ring_node(j, out0 + k + 1),
                                       ring_node(j - 1, in0 + k)});
                if (k + 1 < j)
                    m.triangles.push_back({ring_node(j, out0 + k + 1), ring_node(j - 1, in0 + k + 1),
                                           ring_node(j - 1, in0 + k)});
            }
        }
    }
    const std::int64_t outer = 6 * rings;
    for (std::int64_t k = 0; k < outer; ++k)
        m.boundary_edges.push_back({ring_node(rings, k), ring_node(rings, k + 1)});
    m.boundary_nodes.resize(static_cast<std::size_t>(outer));
    for (std::int64_t k = 0; k < outer; ++k)
        m.boundary_nodes[static_cast<std::size_t>(k)] = ring_start[static_cast<std::size_t>(rings)] + k;
    return m;
}

namespace {

std::array<double, 3> barycentric(const Mesh& mesh, std::int64_t t, const Eigen::Vector2d& p) {
    const auto& tri = mesh.triangles[static_cast<std::size_t>(t)];
    const Eigen::Vector2d a = mesh.nodes.row(tri[0]);
    const Eigen::Vector2d b = mesh.nodes.row(tri[1]);
    const Eigen::Vector2d c = mesh.nodes.row(tri[2]);
    const double area = signed_area(a, b, c);
    return {signed_area(p, b, c) / area, signed_area(a, p, c) / area, signed_area(a, b, p) / area};
}

}  // namespace

PointLocation locate_point(const Mesh& mesh, const Eigen::Vector2d& p) {
    constexpr double kInsideTol = 1e-12;
    constexpr double kSnapTol = 1e-8;
    std::int64_t best_t = -1;
    double best_min = -std::numeric_limits<double>::infinity();
    std::array<double, 3> best_bc{};
    for (std::int64_t t = 0; t < mesh.triangle_count(); ++t) {
        auto bc = barycentric(mesh, t, p);
        const double mn = std::min({bc[0], bc[1], bc[2]});
        if (mn >= -kInsideTol) return {t, bc};  // first hit wins the tie-break
        if (mn > best_min) {
            best_min = mn;
            best_t = t;
            best_bc = bc;
        }
    }
    // Outside all triangles: accept if the clamped point is within snap
    // tolerance in actual distance.
    if (best_t >= 0) {
        std::array<double, 3> bc = best_bc;
        for (auto& v : bc) v = std::max(v, 0.0);
        const double s = bc[0] + bc[1] + bc[2];
        for (auto& v : bc) v /= s;
        const auto& tri = mesh.triangles[static_cast<std::size_t>(best_t)];
        Eigen::Vector2d q = bc[0] * mesh.nodes.row(tri[0]) + bc[1] * mesh.nodes.row(tri[1]) +
                            bc[2] * mesh.nodes.row(tri[2]);
        if ((q - p).norm() <= kSnapTol) return {best_t, bc};
    }
    throw PointOutsideMesh("point (" + std::to_string(p.x()) + ", " + std::to_string(p.y()) +
                           ") lies outside the mesh");
}

void validate_mesh(const Mesh& mesh) {
    const std::int64_t n = mesh.node_count();
    for (const auto& tri : mesh.triangles) {
        for (auto v : tri)
            if (v < 0 || v >= n) throw ValidationError("triangle index out of range");
        if (signed_area(mesh.nodes.row(tri[0]), mesh.nodes.row(tri[1]), mesh.nodes.row(tri[2])) <= 0.0)
            throw ValidationError("triangle is not counterclockwise");
    }
    // Each boundary edge must belong to exactly one triangle.
    std::map<std::pair<std::int64_t, std::int64_t>, int> edge_use;
    for (const auto& tri : mesh.triangles)
        for (int k = 0; k < 3; ++k) {
            auto a = tri[static_cast<std::size_t>(k)], b = tri[static_cast<std::size_t>((k + 1) % 3)];
            edge_use[{std::min(a, b), std::max(a, b)}]++;
        }
    std::set<std::int64_t> bset;
    std::map<std::int64_t, std::int64_t> next;
    for (const auto& e : mesh.boundary_edges) {
        if (e[0] < 0 || e[0] >= n || e[1] < 0 || e[1] >= n)
            throw ValidationError("boundary edge index out of range");
        auto it = edge_use.find({std::min(e[0], e[1]), std::max(e[0], e[1])});
        if (it == edge_use.end() || it->second != 1)
            throw ValidationError("boundary edge not shared by exactly one triangle");
        bset.insert(e[0]);
        bset.insert(e[1]);
        if (!next.emplace(e[0], e[1]).second) throw ValidationError("boundary edges branch");
    }
    // Closed loops: every edge start must be some edge end exactly once.
    std::set<std::int64_t> ends;
    for (const auto& e : mesh.boundary_edges)
        if (!ends.insert(e[1]).second) throw ValidationError("boundary edges branch");
    if (ends != bset) throw ValidationError("boundary edges do not form closed loops");
    if (std::vector<std::int64_t>(bset.begin(), bset.end()) != mesh.boundary_nodes)
        throw ValidationError("boundary_nodes does not match boundary edge endpoints");
}

void save_mesh(const std::string& path, const Mesh& mesh) {
    Container c;
    c.put_f64("nodes", mesh.nodes);
    Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic> tris(mesh.triangle_count(), 3);
    for (std::int64_t t = 0; t < mesh.triangle_count(); ++t)
        for (int k = 0; k < 3; ++k) tris(t, k) = mesh.triangles[static_cast<std::size_t>(t)][static_cast<std::size_t>(k)];
    c.put_i64("triangles", tris);
    Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic> edges(
        static_cast<std::int64_t>(mesh.boundary_edges.size()), 2);
    for (std::size_t e = 0; e < mesh.boundary_edges.size(); ++e) {
        edges(static_cast<std::int64_t>(e), 0) = mesh.boundary_edges[e][0];
        edges(static_cast<std::int64_t>(e), 1) = mesh.boundary_edges[e][1];
    }
    c.put_i64("boundary_edges", edges);
    write_container(path, c);
}

Mesh load_mesh(const std::string& path) {
    Container c = read_container(path);
    Mesh m;
    m.nodes = c.get_f64("nodes");
    auto tris = c.get_i64("triangles");
    m.triangles.resize(static_cast<std::size_t>(tris.rows()));
    for (std::int64_t t = 0; t < tris.rows(); ++t)
        m.triangles[static_cast<std::size_t>(t)] = {tris(t, 0), tris(t, 1), tris(t, 2)};
    auto edges = c.get_i64("boundary_edges");
    m.boundary_edges.resize(static_cast<std::size_t>(edges.rows()));
    std::set<std::int64_t> bset;
    for (std::int64_t e = 0; e < edges.rows(); ++e) {
        m.boundary_edges[static_cast<std::size_t>(e)] = {edges(e, 0), edges(e, 1)};
        bset.insert(edges(e, 0));
        bset.insert(edges(e, 1));
    }
    m.boundary_nodes.assign(bset.begin(), bset.end());
    validate_mesh(m);
    return m;
}

}  // namespace den
