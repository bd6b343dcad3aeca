// Copyright The dgtd Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef DGTD_MESH_HPP
#define DGTD_MESH_HPP

#include <array>
#include <map>
#include <string>
#include <vector>

#include "dgtd/common.hpp"

namespace dgtd
{

/// One mesh facet. The owner is the lower-numbered incident element and fixes
/// the canonical vertex order of the facet; the neighbor records the
/// permutation that maps its own local facet vertex order onto that.
struct Facet
{
  int owner = -1;
  int owner_facet = -1;
  int neighbor = -1;  // -1 on the boundary
  int neighbor_facet = -1;
  int neighbor_perm = -1;
  std::string tag;  // boundary tag; empty for interior facets

  bool boundary() const { return neighbor < 0; }
};

using FacetKey = std::array<int, 3>;

/// Conforming simplicial mesh of dimension 2 or 3.
struct Mesh
{
  int dim = 2;
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 4>> elements;  // first dim + 1 entries used
  std::vector<std::string> regions;          // per element
  /// Boundary tags keyed by sorted facet vertex ids (third entry -1 in 2D).
  std::map<FacetKey, std::string> boundary_tags;

  // Filled by build_facets.
  std::vector<Facet> facets;
  std::vector<std::array<int, 4>> element_facets;  // facet id per local facet
  /// Number of elements whose vertex order was flipped to get positive orientation.
  int reoriented = 0;

  int num_elements() const { return static_cast<int>(elements.size()); }
  int num_facets() const { return static_cast<int>(facets.size()); }
  int num_vertices() const { return static_cast<int>(vertices.size()); }

  /// Sorted key of local facet f of element e.
  FacetKey facet_key(int e, int f) const;
  /// Distinct boundary tags in use, sorted.
  std::vector<std::string> tags() const;
  /// Distinct region tags in use, sorted.
  std::vector<std::string> region_names() const;
};

/// Affine map data of one element: r = A r_hat + b.
struct ElementGeometry
{
  Mat3 A = Mat3::Identity();  // leading dim x dim block; identity padding in 2D
  Vec3 b{0.0, 0.0, 0.0};
  double det = 1.0;
  Mat3 inv_t = Mat3::Identity();  // A^{-T}
  std::array<Vec3, 4> normals{};  // outward unit normal per local facet
  std::array<double, 4> facet_measure{};
  double volume = 0.0;
  Vec3 centroid{0.0, 0.0, 0.0};

  /// Inscribed-ball radius: dim * volume / boundary measure.
  double inradius(int dim) const;
  Vec3 to_physical(const Vec3 &r_hat) const;
  Vec3 to_reference(const Vec3 &r) const;
};

ElementGeometry element_geometry(const Mesh &mesh, int element);

struct StructuredSpec
{
  int dim = 2;
  Vec3 box_min{0.0, 0.0, 0.0};
  Vec3 box_max{1.0, 1.0, 1.0};
  std::array<int, 3> cells{1, 1, 1};
  /// Cells whose center lies inside this box are removed (hole_min < hole_max).
  bool has_hole = false;
  Vec3 hole_min{0.0, 0.0, 0.0};
  Vec3 hole_max{0.0, 0.0, 0.0};
  std::string hole_tag = "incidentfield";
};

/// Structured simplicial mesh of a box: 2 triangles per square cell or 6
/// tetrahedra per cube (Kuhn split). Regions are "air"; outer boundary facets
/// are tagged xmin, xmax, ymin, ymax, zmin, zmax and hole facets hole_tag.
Mesh generate_structured(const StructuredSpec &spec);

/// Reads an ASCII gmsh 2.2 mesh. Physical names become region tags
/// (elements of the top dimension) and boundary tags (facet elements).
Mesh load_gmsh(const std::string &path);

/// Fixes element orientation and completes the facet adjacency.
void build_facets(Mesh &mesh);

/// Total measure: sum of element volumes.
double mesh_measure(const Mesh &mesh);

}  // namespace dgtd

#endif  // DGTD_MESH_HPP
