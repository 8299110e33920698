#include "vdflow/msh_io.hpp"

#include "vdflow/errors.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

namespace vdflow {

namespace {

std::string next_content_line(std::istream& in) {
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) return line;
    }
    return {};
}

const char* element_type_name(int type) {
    switch (type) {
        case 3: return "quadrilateral";
        case 4: return "tetrahedron";
        case 5: return "hexahedron";
        case 15: return "point";
        default: return "unknown";
    }
}

} // namespace

Mesh import_gmsh(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ResourceError("import_gmsh: cannot open '" + path + "'");
    return import_gmsh(in, path);
}

Mesh import_gmsh(std::istream& in, const std::string& label) {
    Mesh mesh;
    std::map<long, int> node_index;            // file node id -> vertex index
    std::vector<std::pair<std::array<int, 2>, int>> tagged_lines;
    bool saw_format = false, saw_nodes = false, saw_elements = false;

    std::string line;
    while (!(line = next_content_line(in)).empty()) {
        if (line[0] != '$')
            throw MeshParseError(label + ": expected a $Section, got '" + line + "'");
        const std::string section = line.substr(1);

        if (section == "MeshFormat") {
            std::istringstream ls(next_content_line(in));
            std::string version;
            int file_type = -1, data_size = -1;
            ls >> version >> file_type >> data_size;
            if (version.rfind("2.2", 0) != 0 || file_type != 0)
                throw MeshParseError(label + ": $MeshFormat: unsupported version '" + version +
                                     "' (need 2.2 ASCII)");
            if (next_content_line(in) != "$EndMeshFormat")
                throw MeshParseError(label + ": $MeshFormat: missing $EndMeshFormat");
            saw_format = true;
        } else if (section == "Nodes") {
            std::istringstream hs(next_content_line(in));
            long count = -1;
            hs >> count;
            if (count < 0) throw MeshParseError(label + ": $Nodes: bad node count");
            for (long i = 0; i < count; ++i) {
                std::istringstream ls(next_content_line(in));
                long id;
                double x, y, z;
                if (!(ls >> id >> x >> y >> z))
                    throw MeshParseError(label + ": $Nodes: malformed node line");
                node_index[id] = mesh.vertex_count();
                mesh.vertices.push_back({x, y});
            }
            if (next_content_line(in) != "$EndNodes")
                throw MeshParseError(label + ": $Nodes: missing $EndNodes");
            saw_nodes = true;
        } else if (section == "Elements") {
            std::istringstream hs(next_content_line(in));
            long count = -1;
            hs >> count;
            if (count < 0) throw MeshParseError(label + ": $Elements: bad element count");
            auto resolve = [&](long id) {
                const auto it = node_index.find(id);
                if (it == node_index.end())
                    throw MeshIntegrityError(label + ": $Elements: reference to unknown node " +
                                             std::to_string(id));
                return it->second;
            };
            for (long i = 0; i < count; ++i) {
                std::istringstream ls(next_content_line(in));
                long id;
                int type, ntags;
                if (!(ls >> id >> type >> ntags))
                    throw MeshParseError(label + ": $Elements: malformed element line");
                int physical = 0;
                for (int t = 0; t < ntags; ++t) {
                    int tag;
                    ls >> tag;
                    if (t == 0) physical = tag;
                }
                if (type == 1) {
                    long a, b;
                    if (!(ls >> a >> b))
                        throw MeshParseError(label + ": $Elements: malformed line element");
                    int va = resolve(a), vb = resolve(b);
                    if (va > vb) std::swap(va, vb);
                    tagged_lines.push_back({{va, vb}, physical});
                } else if (type == 2) {
                    long a, b, c;
                    if (!(ls >> a >> b >> c))
                        throw MeshParseError(label + ": $Elements: malformed triangle element");
                    mesh.triangles.push_back({resolve(a), resolve(b), resolve(c)});
                } else {
                    throw MeshParseError(label + ": $Elements: unsupported element type " +
                                         std::to_string(type) + " (" + element_type_name(type) + ")");
                }
            }
            if (next_content_line(in) != "$EndElements")
                throw MeshParseError(label + ": $Elements: missing $EndElements");
            saw_elements = true;
        } else {
            std::cerr << "import_gmsh: ignoring section $" << section << "\n";
            const std::string end = "$End" + section;
            while (!(line = next_content_line(in)).empty() && line != end) {}
            if (line.empty())
                throw MeshParseError(label + ": unterminated section $" + section);
        }
    }

    if (!saw_format) throw MeshParseError(label + ": missing $MeshFormat section");
    if (!saw_nodes) throw MeshParseError(label + ": missing $Nodes section");
    if (!saw_elements) throw MeshParseError(label + ": missing $Elements section");

    // Normalize orientation before validation; generators downstream assume CCW.
    for (int e = 0; e < mesh.element_count(); ++e)
        if (mesh.signed_area(e) < 0.0) std::swap(mesh.triangles[e][1], mesh.triangles[e][2]);

    mesh.build_connectivity();

    std::set<int> tag_ids;
    for (const auto& [key, physical] : tagged_lines) {
        const auto it = std::lower_bound(mesh.edges.begin(), mesh.edges.end(), key);
        if (it == mesh.edges.end() || *it != key)
            throw MeshIntegrityError(label + ": boundary line (" + std::to_string(key[0]) + "," +
                                     std::to_string(key[1]) + ") is not a mesh edge");
        const int edge_id = static_cast<int>(it - mesh.edges.begin());
        for (auto& be : mesh.boundary_edges)
            if (be.edge == edge_id) be.tag = physical;
        tag_ids.insert(physical);
    }
    for (int id : tag_ids) mesh.tags.push_back({id, "physical" + std::to_string(id)});

    const MeshValidation report = validate_mesh(mesh);
    if (!report.ok())
        throw MeshIntegrityError(label + ": invalid mesh: " + report.problems.front() + " (" +
                                 std::to_string(report.problems.size()) + " problems)");
    return mesh;
}

void write_gmsh(const Mesh& m, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ResourceError("write_gmsh: cannot open '" + path + "' for writing");
    write_gmsh(m, out);
}

void write_gmsh(const Mesh& m, std::ostream& out) {
    out << "$MeshFormat\n2.2 0 8\n$EndMeshFormat\n";
    out << "$Nodes\n" << m.vertex_count() << "\n";
    char buf[96];
    for (int i = 0; i < m.vertex_count(); ++i) {
        std::snprintf(buf, sizeof buf, "%d %.17g %.17g 0\n", i + 1, m.vertices[i].x, m.vertices[i].y);
        out << buf;
    }
    out << "$EndNodes\n";
    out << "$Elements\n" << (m.boundary_edges.size() + m.triangles.size()) << "\n";
    long id = 1;
    for (const auto& be : m.boundary_edges) {
        const auto& e = m.edges[be.edge];
        out << id++ << " 1 2 " << be.tag << " " << be.tag << " " << e[0] + 1 << " " << e[1] + 1 << "\n";
    }
    for (const auto& t : m.triangles)
        out << id++ << " 2 2 0 0 " << t[0] + 1 << " " << t[1] + 1 << " " << t[2] + 1 << "\n";
    out << "$EndElements\n";
}

} // namespace vdflow
