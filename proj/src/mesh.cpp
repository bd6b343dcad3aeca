// Copyright The dgtd Authors
// SPDX-License-Identifier: Apache-2.0

#include "dgtd/mesh.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "dgtd/reference_element.hpp"

namespace dgtd
{

FacetKey Mesh::facet_key(int e, int f) const
{
  const auto lv = ReferenceElement::facet_vertices(dim, f);
  FacetKey key{-1, -1, -1};
  for (int k = 0; k < dim; ++k)
  {
    key[k] = elements[e][lv[k]];
  }
  std::sort(key.begin(), key.begin() + dim);
  return key;
}

std::vector<std::string> Mesh::tags() const
{
  std::set<std::string> out;
  for (const Facet &f : facets)
  {
    if (f.boundary())
    {
      out.insert(f.tag);
    }
  }
  return {out.begin(), out.end()};
}

std::vector<std::string> Mesh::region_names() const
{
  std::set<std::string> out(regions.begin(), regions.end());
  return {out.begin(), out.end()};
}

double ElementGeometry::inradius(int dim) const
{
  double boundary = 0.0;
  for (int f = 0; f <= dim; ++f)
  {
    boundary += facet_measure[f];
  }
  return dim * volume / boundary;
}

Vec3 ElementGeometry::to_physical(const Vec3 &r_hat) const
{
  const Eigen::Vector3d x = A * Eigen::Vector3d(r_hat[0], r_hat[1], r_hat[2]);
  return {x[0] + b[0], x[1] + b[1], x[2] + b[2]};
}

Vec3 ElementGeometry::to_reference(const Vec3 &r) const
{
  // A^{-1} = (A^{-T})^T
  const Eigen::Vector3d d(r[0] - b[0], r[1] - b[1], r[2] - b[2]);
  const Eigen::Vector3d x = inv_t.transpose() * d;
  return {x[0], x[1], x[2]};
}

ElementGeometry element_geometry(const Mesh &mesh, int element)
{
  if (element < 0 || element >= mesh.num_elements())
  {
    throw InvalidArgument("element_geometry: element id " + std::to_string(element) +
                          " out of range");
  }
  const int d = mesh.dim;
  const auto &ev = mesh.elements[element];
  ElementGeometry g;
  g.b = mesh.vertices[ev[0]];
  double scale = 0.0;
  for (int k = 1; k <= d; ++k)
  {
    const Vec3 edge = mesh.vertices[ev[k]] - g.b;
    scale = std::max(scale, norm(edge));
    for (int i = 0; i < d; ++i)
    {
      g.A(i, k - 1) = edge[i];
    }
  }
  g.det = g.A.determinant();
  if (!(std::abs(g.det) > 1e-13 * std::pow(scale, d)))
  {
    throw MeshError("degenerate element " + std::to_string(element));
  }
  if (g.det < 0.0)
  {
    throw MeshError("negatively oriented element " + std::to_string(element));
  }
  g.inv_t = g.A.inverse().transpose();
  g.volume = g.det / (d == 2 ? 2.0 : 6.0);
  Vec3 c{0.0, 0.0, 0.0};
  for (int k = 0; k <= d; ++k)
  {
    c = c + mesh.vertices[ev[k]];
  }
  g.centroid = (1.0 / (d + 1)) * c;
  for (int f = 0; f <= d; ++f)
  {
    const Vec3 nh = ReferenceElement::reference_normal(d, f);
    const Eigen::Vector3d n = g.inv_t * Eigen::Vector3d(nh[0], nh[1], nh[2]);
    const double len = n.norm();
    g.normals[f] = {n[0] / len, n[1] / len, n[2] / len};
    const auto lv = ReferenceElement::facet_vertices(d, f);
    const Vec3 t1 = mesh.vertices[ev[lv[1]]] - mesh.vertices[ev[lv[0]]];
    if (d == 2)
    {
      g.facet_measure[f] = norm(t1);
    }
    else
    {
      const Vec3 t2 = mesh.vertices[ev[lv[2]]] - mesh.vertices[ev[lv[0]]];
      g.facet_measure[f] = 0.5 * norm(cross(t1, t2));
    }
  }
  return g;
}

namespace
{

double signed_volume(const Mesh &mesh, const std::array<int, 4> &ev)
{
  const Vec3 &v0 = mesh.vertices[ev[0]];
  const Vec3 a = mesh.vertices[ev[1]] - v0;
  const Vec3 b = mesh.vertices[ev[2]] - v0;
  if (mesh.dim == 2)
  {
    return a[0] * b[1] - a[1] * b[0];
  }
  return dot(cross(a, b), mesh.vertices[ev[3]] - v0);
}

std::string point_string(const Vec3 &x)
{
  std::ostringstream os;
  os << "(" << x[0] << ", " << x[1] << ", " << x[2] << ")";
  return os.str();
}

}  // namespace

void build_facets(Mesh &mesh)
{
  const int d = mesh.dim;
  if (d != 2 && d != 3)
  {
    throw MeshError("mesh dimension must be 2 or 3");
  }
  if (mesh.regions.size() != mesh.elements.size())
  {
    mesh.regions.resize(mesh.elements.size(), "air");
  }
  mesh.facets.clear();
  mesh.element_facets.assign(mesh.elements.size(), {-1, -1, -1, -1});
  mesh.reoriented = 0;
  for (int e = 0; e < mesh.num_elements(); ++e)
  {
    auto &ev = mesh.elements[e];
    for (int k = 0; k <= d; ++k)
    {
      if (ev[k] < 0 || ev[k] >= mesh.num_vertices())
      {
        throw MeshError("element " + std::to_string(e) + " references vertex " +
                        std::to_string(ev[k]) + " out of range");
      }
    }
    if (signed_volume(mesh, ev) < 0.0)
    {
      std::swap(ev[d - 1], ev[d]);
      ++mesh.reoriented;
    }
  }

  std::map<FacetKey, int> seen;
  for (int e = 0; e < mesh.num_elements(); ++e)
  {
    for (int f = 0; f <= d; ++f)
    {
      const FacetKey key = mesh.facet_key(e, f);
      auto it = seen.find(key);
      if (it == seen.end())
      {
        Facet facet;
        facet.owner = e;
        facet.owner_facet = f;
        seen.emplace(key, mesh.num_facets());
        mesh.element_facets[e][f] = mesh.num_facets();
        mesh.facets.push_back(facet);
        continue;
      }
      Facet &facet = mesh.facets[it->second];
      if (facet.neighbor >= 0 || facet.owner == e)
      {
        Vec3 c{0.0, 0.0, 0.0};
        for (int k = 0; k < d; ++k)
        {
          c = c + mesh.vertices[key[k]];
        }
        throw MeshError("non-manifold facet at " + point_string((1.0 / d) * c));
      }
      facet.neighbor = e;
      facet.neighbor_facet = f;
      const auto lo = ReferenceElement::facet_vertices(d, facet.owner_facet);
      const auto ln = ReferenceElement::facet_vertices(d, f);
      const auto &oe = mesh.elements[facet.owner];
      std::array<int, 3> perm{0, 0, 0};
      for (int k = 0; k < d; ++k)
      {
        for (int i = 0; i < d; ++i)
        {
          if (mesh.elements[e][ln[i]] == oe[lo[k]])
          {
            perm[k] = i;
          }
        }
      }
      facet.neighbor_perm = ReferenceElement::permutation_id(d, perm);
      mesh.element_facets[e][f] = it->second;
    }
  }
  for (Facet &facet : mesh.facets)
  {
    if (facet.boundary())
    {
      auto it = mesh.boundary_tags.find(mesh.facet_key(facet.owner, facet.owner_facet));
      facet.tag = it == mesh.boundary_tags.end() ? std::string() : it->second;
    }
  }
}

double mesh_measure(const Mesh &mesh)
{
  double s = 0.0;
  for (int e = 0; e < mesh.num_elements(); ++e)
  {
    s += element_geometry(mesh, e).volume;
  }
  return s;
}

Mesh generate_structured(const StructuredSpec &spec)
{
  const int d = spec.dim;
  if (d != 2 && d != 3)
  {
    throw InvalidArgument("generate_structured: dimension must be 2 or 3");
  }
  std::array<int, 3> n{1, 1, 1};
  std::array<double, 3> h{1.0, 1.0, 1.0};
  for (int i = 0; i < d; ++i)
  {
    if (spec.cells[i] <= 0)
    {
      throw InvalidArgument("generate_structured: cell counts must be positive");
    }
    if (!(spec.box_max[i] > spec.box_min[i]))
    {
      throw InvalidArgument("generate_structured: box has non-positive extent");
    }
    n[i] = spec.cells[i];
    h[i] = (spec.box_max[i] - spec.box_min[i]) / n[i];
  }
  const int nz = d == 3 ? n[2] : 0;
  auto coord = [&](int axis, int i) {
    return i == n[axis] ? spec.box_max[axis] : spec.box_min[axis] + i * h[axis];
  };
  auto vid = [&](int i, int j, int k) { return (k * (n[1] + 1) + j) * (n[0] + 1) + i; };

  Mesh mesh;
  mesh.dim = d;
  std::vector<Vec3> all;
  for (int k = 0; k <= nz; ++k)
  {
    for (int j = 0; j <= n[1]; ++j)
    {
      for (int i = 0; i <= n[0]; ++i)
      {
        all.push_back({coord(0, i), coord(1, j), d == 3 ? coord(2, k) : 0.0});
      }
    }
  }

  auto in_hole = [&](const Vec3 &c) {
    if (!spec.has_hole)
    {
      return false;
    }
    for (int a = 0; a < d; ++a)
    {
      if (!(c[a] > spec.hole_min[a] && c[a] < spec.hole_max[a]))
      {
        return false;
      }
    }
    return true;
  };

  // Kuhn split: one tetrahedron per axis ordering, walking 000 -> 111.
  static const int orders[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                   {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  for (int k = 0; k < std::max(nz, 1); ++k)
  {
    for (int j = 0; j < n[1]; ++j)
    {
      for (int i = 0; i < n[0]; ++i)
      {
        const Vec3 center{spec.box_min[0] + (i + 0.5) * h[0], spec.box_min[1] + (j + 0.5) * h[1],
                          d == 3 ? spec.box_min[2] + (k + 0.5) * h[2] : 0.0};
        if (in_hole(center))
        {
          continue;
        }
        if (d == 2)
        {
          const int v00 = vid(i, j, 0), v10 = vid(i + 1, j, 0);
          const int v01 = vid(i, j + 1, 0), v11 = vid(i + 1, j + 1, 0);
          mesh.elements.push_back({v00, v10, v11, -1});
          mesh.elements.push_back({v00, v11, v01, -1});
        }
        else
        {
          for (const auto &ord : orders)
          {
            std::array<int, 3> c{i, j, k};
            std::array<int, 4> tet{vid(c[0], c[1], c[2]), 0, 0, 0};
            for (int s = 0; s < 3; ++s)
            {
              ++c[ord[s]];
              tet[s + 1] = vid(c[0], c[1], c[2]);
            }
            mesh.elements.push_back(tet);
          }
        }
      }
    }
  }
  if (mesh.elements.empty())
  {
    throw InvalidArgument("generate_structured: hole removes every cell");
  }

  // Compact away vertices only used by removed cells.
  std::vector<int> remap(all.size(), -1);
  for (auto &ev : mesh.elements)
  {
    for (int a = 0; a <= d; ++a)
    {
      if (remap[ev[a]] < 0)
      {
        remap[ev[a]] = 0;
      }
    }
  }
  for (std::size_t v = 0; v < all.size(); ++v)
  {
    if (remap[v] == 0)
    {
      remap[v] = mesh.num_vertices();
      mesh.vertices.push_back(all[v]);
    }
  }
  for (auto &ev : mesh.elements)
  {
    for (int a = 0; a <= d; ++a)
    {
      ev[a] = remap[ev[a]];
    }
  }
  mesh.regions.assign(mesh.elements.size(), "air");

  build_facets(mesh);

  static const char *face_names[3][2] = {{"xmin", "xmax"}, {"ymin", "ymax"}, {"zmin", "zmax"}};
  for (Facet &facet : mesh.facets)
  {
    if (!facet.boundary())
    {
      continue;
    }
    const FacetKey key = mesh.facet_key(facet.owner, facet.owner_facet);
    std::string tag = spec.hole_tag;
    for (int a = 0; a < d && tag == spec.hole_tag; ++a)
    {
      for (int side = 0; side < 2; ++side)
      {
        const double plane = side == 0 ? spec.box_min[a] : spec.box_max[a];
        bool on = true;
        for (int k = 0; k < d; ++k)
        {
          on = on && std::abs(mesh.vertices[key[k]][a] - plane) <= 1e-12 * (1.0 + std::abs(plane));
        }
        if (on)
        {
          tag = face_names[a][side];
          break;
        }
      }
    }
    facet.tag = tag;
    mesh.boundary_tags[key] = tag;
  }
  return mesh;
}

namespace
{

class LineReader
{
public:
  explicit LineReader(const std::string &path) : path_(path), in_(path)
  {
    if (!in_)
    {
      throw IoError("cannot open mesh file " + path);
    }
  }

  bool next(std::string &line)
  {
    while (std::getline(in_, line))
    {
      ++number_;
      if (!line.empty() && line.back() == '\r')
      {
        line.pop_back();
      }
      if (line.find_first_not_of(" \t") != std::string::npos)
      {
        return true;
      }
    }
    return false;
  }

  std::string require()
  {
    std::string line;
    if (!next(line))
    {
      fail("unexpected end of file");
    }
    return line;
  }

  [[noreturn]] void fail(const std::string &what) const
  {
    throw MeshError(path_ + ":" + std::to_string(number_) + ": " + what);
  }

private:
  std::string path_;
  std::ifstream in_;
  int number_ = 0;
};

}  // namespace

Mesh load_gmsh(const std::string &path)
{
  LineReader reader(path);
  std::map<int, std::string> names;
  std::map<long, int> node_index;
  std::vector<Vec3> nodes;
  struct RawElement
  {
    int type;
    int physical;
    std::vector<long> nodes;
  };
  std::vector<RawElement> raw;
  bool have_format = false;

  std::string line;
  while (reader.next(line))
  {
    std::istringstream head(line);
    std::string section;
    head >> section;
    if (section == "$MeshFormat")
    {
      std::istringstream is(reader.require());
      double version = 0.0;
      int file_type = -1;
      if (!(is >> version >> file_type) || version < 2.0 || version >= 3.0)
      {
        reader.fail("unsupported mesh format (expected ASCII 2.2)");
      }
      if (file_type != 0)
      {
        reader.fail("binary mesh files are not supported");
      }
      have_format = true;
      if (reader.require() != "$EndMeshFormat")
      {
        reader.fail("expected $EndMeshFormat");
      }
    }
    else if (section == "$PhysicalNames")
    {
      std::istringstream cnt(reader.require());
      int n = 0;
      if (!(cnt >> n) || n < 0)
      {
        reader.fail("bad physical name count");
      }
      for (int i = 0; i < n; ++i)
      {
        std::istringstream is(reader.require());
        int dim = 0, tag = 0;
        std::string name;
        if (!(is >> dim >> tag))
        {
          reader.fail("malformed physical name");
        }
        std::getline(is, name);
        const auto a = name.find('"');
        const auto b = name.rfind('"');
        if (a == std::string::npos || b == a)
        {
          reader.fail("physical name must be quoted");
        }
        names[tag] = name.substr(a + 1, b - a - 1);
      }
      if (reader.require() != "$EndPhysicalNames")
      {
        reader.fail("expected $EndPhysicalNames");
      }
    }
    else if (section == "$Nodes")
    {
      std::istringstream cnt(reader.require());
      long n = 0;
      if (!(cnt >> n) || n < 0)
      {
        reader.fail("bad node count");
      }
      for (long i = 0; i < n; ++i)
      {
        std::istringstream is(reader.require());
        long id = 0;
        Vec3 x{};
        if (!(is >> id >> x[0] >> x[1] >> x[2]))
        {
          reader.fail("malformed node");
        }
        node_index[id] = static_cast<int>(nodes.size());
        nodes.push_back(x);
      }
      if (reader.require() != "$EndNodes")
      {
        reader.fail("expected $EndNodes");
      }
    }
    else if (section == "$Elements")
    {
      std::istringstream cnt(reader.require());
      long n = 0;
      if (!(cnt >> n) || n < 0)
      {
        reader.fail("bad element count");
      }
      for (long i = 0; i < n; ++i)
      {
        std::istringstream is(reader.require());
        long id = 0;
        int type = 0, ntags = 0;
        if (!(is >> id >> type >> ntags) || ntags < 0)
        {
          reader.fail("malformed element");
        }
        int nn = 0;
        switch (type)
        {
        case 1:
          nn = 2;
          break;
        case 2:
          nn = 3;
          break;
        case 4:
          nn = 4;
          break;
        case 15:
          nn = 1;
          break;
        default:
          reader.fail("unsupported element type " + std::to_string(type));
        }
        RawElement el{type, 0, {}};
        for (int t = 0; t < ntags; ++t)
        {
          int tag = 0;
          if (!(is >> tag))
          {
            reader.fail("malformed element tags");
          }
          if (t == 0)
          {
            el.physical = tag;
          }
        }
        for (int k = 0; k < nn; ++k)
        {
          long v = 0;
          if (!(is >> v))
          {
            reader.fail("malformed element nodes");
          }
          auto it = node_index.find(v);
          if (it == node_index.end())
          {
            reader.fail("element references unknown node " + std::to_string(v));
          }
          el.nodes.push_back(it->second);
        }
        raw.push_back(std::move(el));
      }
      if (reader.require() != "$EndElements")
      {
        reader.fail("expected $EndElements");
      }
    }
    else if (!section.empty() && section[0] == '$')
    {
      // Skip unknown sections.
      const std::string end = "$End" + section.substr(1);
      std::string l;
      do
      {
        l = reader.require();
      } while (l != end);
    }
    else
    {
      reader.fail("unexpected content '" + line + "'");
    }
  }
  if (!have_format)
  {
    reader.fail("missing $MeshFormat header");
  }

  Mesh mesh;
  const bool has_tets = std::any_of(raw.begin(), raw.end(), [](const RawElement &r) { return r.type == 4; });
  mesh.dim = has_tets ? 3 : 2;
  const int cell_type = has_tets ? 4 : 2;
  const int facet_type = has_tets ? 2 : 1;
  auto name_of = [&](int physical) {
    auto it = names.find(physical);
    return it == names.end() ? std::to_string(physical) : it->second;
  };
  for (const RawElement &r : raw)
  {
    if (r.type == cell_type)
    {
      std::array<int, 4> ev{-1, -1, -1, -1};
      std::copy(r.nodes.begin(), r.nodes.end(), ev.begin());
      mesh.elements.push_back(ev);
      mesh.regions.push_back(r.physical == 0 ? std::string("air") : name_of(r.physical));
    }
    else if (r.type == facet_type)
    {
      FacetKey key{-1, -1, -1};
      std::copy(r.nodes.begin(), r.nodes.end(), key.begin());
      std::sort(key.begin(), key.begin() + mesh.dim);
      mesh.boundary_tags[key] = name_of(r.physical);
    }
  }
  if (mesh.elements.empty())
  {
    throw MeshError(path + ": no " + std::string(has_tets ? "tetrahedra" : "triangles") + " found");
  }
  mesh.vertices = std::move(nodes);
  if (mesh.dim == 2)
  {
    for (Vec3 &v : mesh.vertices)
    {
      v[2] = 0.0;
    }
  }
  build_facets(mesh);
  return mesh;
}

}  // namespace dgtd
