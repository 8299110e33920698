#include "vdflow/mesh.hpp"

#include "vdflow/errors.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace vdflow {

double Mesh::signed_area(int elem) const {
    const auto& t = triangles[elem];
    const Vec2 a = vertices[t[0]], b = vertices[t[1]], c = vertices[t[2]];
    return 0.5 * ((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y));
}

double Mesh::total_area() const {
    // Kahan summation keeps the partition-of-domain identity at 1e-14
    // relative even for meshes with many thousands of elements.
    double s = 0.0, carry = 0.0;
    for (int e = 0; e < element_count(); ++e) {
        const double y = signed_area(e) - carry;
        const double t = s + y;
        carry = (t - s) - y;
        s = t;
    }
    return s;
}

double Mesh::max_circumdiameter() const {
    double h = 0.0;
    for (const auto& t : triangles) {
        const Vec2 a = vertices[t[0]], b = vertices[t[1]], c = vertices[t[2]];
        const double la = (b - c).norm();
        const double lb = (c - a).norm();
        const double lc = (a - b).norm();
        const double area = 0.5 * std::abs((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y));
        if (area <= 0.0) continue;
        h = std::max(h, la * lb * lc / (2.0 * area));
    }
    return h;
}

void Mesh::build_connectivity() {
    std::vector<std::array<int, 2>> all;
    all.reserve(3 * triangles.size());
    for (const auto& t : triangles) {
        for (int k = 0; k < 3; ++k) {
            int a = t[k], b = t[(k + 1) % 3];
            if (a > b) std::swap(a, b);
            all.push_back({a, b});
        }
    }
    std::sort(all.begin(), all.end());
    all.erase(std::unique(all.begin(), all.end()), all.end());
    edges = std::move(all);

    auto edge_id = [&](int a, int b) {
        if (a > b) std::swap(a, b);
        const std::array<int, 2> key{a, b};
        const auto it = std::lower_bound(edges.begin(), edges.end(), key);
        return static_cast<int>(it - edges.begin());
    };

    tri_edges.assign(triangles.size(), {-1, -1, -1});
    std::vector<int> multiplicity(edges.size(), 0);
    for (size_t e = 0; e < triangles.size(); ++e) {
        const auto& t = triangles[e];
        for (int k = 0; k < 3; ++k) {
            const int id = edge_id(t[k], t[(k + 1) % 3]);
            tri_edges[e][k] = id;
            multiplicity[id]++;
        }
    }

    // Keep any tags already assigned, indexable by edge vertex pair.
    std::map<std::array<int, 2>, int> old_tags;
    for (const auto& be : boundary_edges) {
        if (be.edge >= 0 && be.edge < static_cast<int>(edges.size()))
            old_tags[edges[be.edge]] = be.tag;
    }
    boundary_edges.clear();
    for (size_t id = 0; id < edges.size(); ++id) {
        if (multiplicity[id] == 1) {
            const auto it = old_tags.find(edges[id]);
            boundary_edges.push_back({static_cast<int>(id), it == old_tags.end() ? 0 : it->second});
        }
    }
}

MeshValidation validate_mesh(const Mesh& m) {
    MeshValidation report;
    const int nv = m.vertex_count();

    for (int e = 0; e < m.element_count(); ++e) {
        const auto& t = m.triangles[e];
        bool in_range = true;
        for (int k = 0; k < 3; ++k) {
            if (t[k] < 0 || t[k] >= nv) {
                report.problems.push_back("triangle " + std::to_string(e) +
                                          ": vertex index out of range");
                in_range = false;
            }
        }
        if (in_range && m.signed_area(e) <= 0.0)
            report.problems.push_back("triangle " + std::to_string(e) +
                                      ": nonpositive signed area (orientation)");
    }

    // Edge multiplicity from scratch (does not trust tri_edges).
    std::map<std::array<int, 2>, int> mult;
    for (const auto& t : m.triangles) {
        for (int k = 0; k < 3; ++k) {
            int a = t[k], b = t[(k + 1) % 3];
            if (a > b) std::swap(a, b);
            mult[{a, b}]++;
        }
    }
    for (const auto& [key, count] : mult) {
        if (count > 2)
            report.problems.push_back("edge (" + std::to_string(key[0]) + "," +
                                      std::to_string(key[1]) + ") shared by " +
                                      std::to_string(count) + " triangles");
    }

    std::map<int, int> tag_count; // edge id -> number of tag entries
    for (const auto& be : m.boundary_edges) {
        if (be.edge < 0 || be.edge >= m.edge_count()) {
            report.problems.push_back("boundary edge entry with invalid edge id");
            continue;
        }
        tag_count[be.edge]++;
    }
    for (const auto& [edge, count] : tag_count) {
        if (count != 1)
            report.problems.push_back("edge " + std::to_string(edge) + " carries " +
                                      std::to_string(count) + " boundary tags");
    }
    for (int id = 0; id < m.edge_count(); ++id) {
        const auto it = mult.find(m.edges[id]);
        const int count = (it == mult.end()) ? 0 : it->second;
        const bool tagged = tag_count.count(id) > 0;
        if (count == 1 && !tagged)
            report.problems.push_back("boundary edge " + std::to_string(id) + " has no tag");
        if (count == 2 && tagged)
            report.problems.push_back("interior edge " + std::to_string(id) + " is tagged as boundary");
    }

    std::set<int> ids;
    for (const auto& tag : m.tags) {
        if (!ids.insert(tag.id).second)
            report.problems.push_back("duplicate boundary tag id " + std::to_string(tag.id));
    }

    std::vector<char> referenced(nv, 0);
    for (const auto& t : m.triangles)
        for (int k = 0; k < 3; ++k)
            if (t[k] >= 0 && t[k] < nv) referenced[t[k]] = 1;
    for (int v = 0; v < nv; ++v)
        if (!referenced[v])
            report.problems.push_back("vertex " + std::to_string(v) +
                                      " is not referenced by any triangle");
    return report;
}

Mesh generate_rectangle_mesh(double x0, double y0, double x1, double y1,
                             int nx, int ny, RectSideTags tags) {
    if (!(x0 < x1) || !(y0 < y1))
        throw InputError("generate_rectangle_mesh: extents must satisfy x0<x1, y0<y1");
    if (nx < 1 || ny < 1)
        throw InputError("generate_rectangle_mesh: cell counts must be >= 1");

    Mesh m;
    const double dx = (x1 - x0) / nx, dy = (y1 - y0) / ny;
    m.vertices.reserve((nx + 1) * (ny + 1));
    for (int j = 0; j <= ny; ++j)
        for (int i = 0; i <= nx; ++i)
            m.vertices.push_back({x0 + i * dx, y0 + j * dy});

    auto vid = [&](int i, int j) { return j * (nx + 1) + i; };
    m.triangles.reserve(2 * nx * ny);
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            const int a = vid(i, j), b = vid(i + 1, j), c = vid(i + 1, j + 1), d = vid(i, j + 1);
            if ((i + j) % 2 == 0) {
                m.triangles.push_back({a, b, c});
                m.triangles.push_back({a, c, d});
            } else {
                m.triangles.push_back({a, b, d});
                m.triangles.push_back({b, c, d});
            }
        }
    }
    m.build_connectivity();

    const double eps = 1e-12 * std::max(x1 - x0, y1 - y0);
    for (auto& be : m.boundary_edges) {
        const auto& e = m.edges[be.edge];
        const Vec2 pa = m.vertices[e[0]], pb = m.vertices[e[1]];
        if (std::abs(pa.y - y0) < eps && std::abs(pb.y - y0) < eps) be.tag = tags.bottom;
        else if (std::abs(pa.x - x1) < eps && std::abs(pb.x - x1) < eps) be.tag = tags.right;
        else if (std::abs(pa.y - y1) < eps && std::abs(pb.y - y1) < eps) be.tag = tags.top;
        else if (std::abs(pa.x - x0) < eps && std::abs(pb.x - x0) < eps) be.tag = tags.left;
    }

    std::set<int> used{tags.bottom, tags.right, tags.top, tags.left};
    const char* names[] = {"bottom", "right", "top", "left"};
    const int ids[] = {tags.bottom, tags.right, tags.top, tags.left};
    std::set<int> added;
    for (int k = 0; k < 4; ++k)
        if (added.insert(ids[k]).second) m.tags.push_back({ids[k], names[k]});
    return m;
}

Mesh generate_disk_mesh(double radius, int n_rings, int n_sectors, int boundary_tag) {
    if (radius <= 0.0) throw InputError("generate_disk_mesh: radius must be positive");
    if (n_rings < 1 || n_sectors < 3)
        throw InputError("generate_disk_mesh: need n_rings >= 1 and n_sectors >= 3");

    Mesh m;
    m.vertices.push_back({0.0, 0.0});
    for (int k = 1; k <= n_rings; ++k) {
        const double r = radius * k / n_rings;
        for (int j = 0; j < n_sectors; ++j) {
            const double th = 2.0 * M_PI * j / n_sectors;
            m.vertices.push_back({r * std::cos(th), r * std::sin(th)});
        }
    }
    auto vid = [&](int ring, int j) { return 1 + (ring - 1) * n_sectors + (j % n_sectors); };

    for (int j = 0; j < n_sectors; ++j)
        m.triangles.push_back({0, vid(1, j), vid(1, j + 1)});

    for (int k = 1; k < n_rings; ++k) {
        for (int j = 0; j < n_sectors; ++j) {
            const int a = vid(k, j), b = vid(k + 1, j), c = vid(k + 1, j + 1), d = vid(k, j + 1);
            if ((k + j) % 2 == 0) {
                m.triangles.push_back({a, b, c});
                m.triangles.push_back({a, c, d});
            } else {
                m.triangles.push_back({a, b, d});
                m.triangles.push_back({b, c, d});
            }
        }
    }
    m.build_connectivity();
    for (auto& be : m.boundary_edges) be.tag = boundary_tag;
    m.tags.push_back({boundary_tag, "boundary"});
    return m;
}

} // namespace vdflow
