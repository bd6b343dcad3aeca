// Copyright The dgtd Authors
// SPDX-License-Identifier: Apache-2.0

#include "dgtd/operators.hpp"

#include <algorithm>
#include <sstream>

#include "dgtd/parallel.hpp"

namespace dgtd
{

FieldLayout::FieldLayout(const Mesh &mesh, const ReferenceElement &ref)
    : dim(ref.dim()), num_elements(mesh.num_elements()), num_facets(mesh.num_facets()),
      e_modes(ref.e_modes()), h_modes(ref.h_modes()), hs_modes(ref.facet_modes()),
      e_comps(ref.e_components()), h_comps(ref.h_components()), hs_comps(ref.hs_components())
{
  if (mesh.dim != ref.dim())
  {
    throw InvalidArgument("mesh and reference element dimensions differ");
  }
}

namespace
{

bool is_spd(const Mat3 &b, int n)
{
  Eigen::LLT<Eigen::MatrixXd> llt(b.topLeftCorner(n, n));
  return llt.info() == Eigen::Success;
}

Mat3 padded_inverse(const Mat3 &b, int n)
{
  Mat3 inv = Mat3::Zero();
  inv.topLeftCorner(n, n) = b.topLeftCorner(n, n).inverse();
  return inv;
}

void apply_blocks(const MassBlocks &mass, const std::vector<Mat3> &blocks,
                  std::span<const double> x, std::span<double> y)
{
  if (x.size() != mass.size() || y.size() != mass.size())
  {
    throw InvalidArgument("mass application: vector size does not match the layout");
  }
  const int c = mass.comps;
  const std::size_t stride = std::size_t(c) * mass.modes;
  for (std::size_t b = 0; b < blocks.size(); ++b)
  {
    const Mat3 &m = blocks[b];
    const double *xb = x.data() + b * stride;
    double *yb = y.data() + b * stride;
    for (int mode = 0; mode < mass.modes; ++mode)
    {
      double tmp[3];
      for (int i = 0; i < c; ++i)
      {
        double s = 0.0;
        for (int j = 0; j < c; ++j)
        {
          s += m(i, j) * xb[mode * c + j];
        }
        tmp[i] = s;
      }
      for (int i = 0; i < c; ++i)
      {
        yb[mode * c + i] = tmp[i];
      }
    }
  }
}

}  // namespace

MassBlocks assemble_mass(const Mesh &mesh, const ReferenceElement &ref,
                         const std::vector<Mat3> &tensors, FieldKind kind, bool check_spd)
{
  if (static_cast<int>(tensors.size()) != mesh.num_elements())
  {
    throw InvalidArgument("assemble_mass: one material tensor per element required");
  }
  const int d = ref.dim();
  MassBlocks mass;
  mass.comps = kind == FieldKind::E ? ref.e_components() : ref.h_components();
  mass.modes = kind == FieldKind::E ? ref.e_modes() : ref.h_modes();
  mass.blocks.resize(tensors.size());
  mass.inverses.resize(tensors.size());
  for (int el = 0; el < mesh.num_elements(); ++el)
  {
    const ElementGeometry g = element_geometry(mesh, el);
    Mat3 b = Mat3::Zero();
    if (mass.comps == 1)
    {
      b(0, 0) = g.det * tensors[el](2, 2);
    }
    else
    {
      const Mat3 it = g.inv_t;
      b.topLeftCorner(d, d) =
          g.det * (it.transpose() * tensors[el] * it).topLeftCorner(d, d);
    }
    if (check_spd && !is_spd(b, mass.comps))
    {
      throw InvalidArgument("mass block of element " + std::to_string(el) +
                            " is not positive definite");
    }
    mass.blocks[el] = b;
    mass.inverses[el] = padded_inverse(b, mass.comps);
  }
  return mass;
}

MassBlocks assemble_facet_mass(const Mesh &mesh, const ReferenceElement &ref,
                               const std::vector<double> &coefficient)
{
  if (static_cast<int>(coefficient.size()) != mesh.num_facets())
  {
    throw InvalidArgument("assemble_facet_mass: one coefficient per facet required");
  }
  const int d = ref.dim();
  MassBlocks mass;
  mass.comps = ref.hs_components();
  mass.modes = ref.facet_modes();
  mass.blocks.resize(coefficient.size());
  mass.inverses.resize(coefficient.size());
  for (int f = 0; f < mesh.num_facets(); ++f)
  {
    if (!(coefficient[f] > 0.0))
    {
      throw InvalidArgument("assemble_facet_mass: coefficient must be positive on facet " +
                            std::to_string(f));
    }
    const Facet &facet = mesh.facets[f];
    const auto lv = ReferenceElement::facet_vertices(d, facet.owner_facet);
    const auto &ev = mesh.elements[facet.owner];
    const Vec3 t1 = mesh.vertices[ev[lv[1]]] - mesh.vertices[ev[lv[0]]];
    Mat3 b = Mat3::Zero();
    if (d == 2)
    {
      b(0, 0) = coefficient[f] * norm(t1);
    }
    else
    {
      const Vec3 t2 = mesh.vertices[ev[lv[2]]] - mesh.vertices[ev[lv[0]]];
      Eigen::Matrix2d g;
      g << dot(t1, t1), dot(t1, t2), dot(t1, t2), dot(t2, t2);
      b.topLeftCorner(2, 2) = coefficient[f] * norm(cross(t1, t2)) * g.inverse();
    }
    mass.blocks[f] = b;
    mass.inverses[f] = padded_inverse(b, mass.comps);
  }
  return mass;
}

std::vector<double> penalty_parameters(const Mesh &mesh, int degree, double kappa)
{
  if (!(kappa > 0.0))
  {
    throw InvalidArgument("penalty constant must be positive");
  }
  const int d = mesh.dim;
  std::vector<double> ratio(mesh.num_elements());
  for (int el = 0; el < mesh.num_elements(); ++el)
  {
    const ElementGeometry g = element_geometry(mesh, el);
    double boundary = 0.0;
    for (int f = 0; f <= d; ++f)
    {
      boundary += g.facet_measure[f];
    }
    ratio[el] = boundary / g.volume;
  }
  std::vector<double> alpha(mesh.num_facets());
  for (int f = 0; f < mesh.num_facets(); ++f)
  {
    const Facet &facet = mesh.facets[f];
    double r = ratio[facet.owner];
    if (!facet.boundary())
    {
      r = std::max(r, ratio[facet.neighbor]);
    }
    alpha[f] = kappa * (degree + 1) * (degree + d) * r;
  }
  return alpha;
}

void apply_mass(const MassBlocks &mass, std::span<const double> x, std::span<double> y)
{
  apply_blocks(mass, mass.blocks, x, y);
}

void apply_inverse_mass(const MassBlocks &mass, std::span<const double> x, std::span<double> y)
{
  apply_blocks(mass, mass.inverses, x, y);
}

MaxwellOperator::MaxwellOperator(const Mesh &mesh, const ReferenceElement &ref,
                                 const std::map<std::string, int> &incident_tags, int workers)
    : mesh_(mesh), ref_(ref), layout_(mesh, ref), workers_(std::max(1, workers))
{
  const int d = ref.dim();
  nq_ = static_cast<int>(ref.facet_rule().size());
  nc_ = d - 1;
  kinds_.resize(mesh.num_facets());
  source_.assign(mesh.num_facets(), -1);
  tangents_.resize(mesh.num_facets());
  incident_points_.resize(mesh.num_facets());
  for (int f = 0; f < mesh.num_facets(); ++f)
  {
    const Facet &facet = mesh.facets[f];
    const ElementGeometry g = element_geometry(mesh, facet.owner);
    const FacetTable &table = ref.facet_table(facet.owner_facet, 0);
    for (int k = 0; k < nc_; ++k)
    {
      const Vec3 &th = table.tangents[k];
      const Eigen::Vector3d t = g.A * Eigen::Vector3d(th[0], th[1], th[2]);
      tangents_[f][k] = {t[0], t[1], t[2]};
    }
    if (!facet.boundary())
    {
      kinds_[f] = FacetKind::Interior;
      continue;
    }
    if (facet.tag.empty())
    {
      Vec3 c{0, 0, 0};
      const FacetKey key = mesh.facet_key(facet.owner, facet.owner_facet);
      for (int k = 0; k < d; ++k)
      {
        c = c + mesh.vertices[key[k]];
      }
      c = (1.0 / d) * c;
      std::ostringstream os;
      os << "boundary facet without a tag at (" << c[0] << ", " << c[1] << ", " << c[2] << ")";
      throw ConfigError(os.str());
    }
    auto it = incident_tags.find(facet.tag);
    if (it == incident_tags.end())
    {
      kinds_[f] = FacetKind::Pec;
      continue;
    }
    kinds_[f] = FacetKind::Incident;
    source_[f] = it->second;
    for (const Vec3 &r : table.points)
    {
      incident_points_[f].push_back(g.to_physical(r));
    }
  }
}

namespace
{

// Tangential trace of a covariant vector field on one facet side:
// out[q * nc + k] = sum_l values(q, l) sum_j u[l * d + j] t_k[j].
void vector_trace(const RowMatrix &values, const double *u, int d, int nc,
                  const std::array<Vec3, 2> &t, std::vector<double> &proj, double *out)
{
  const int nm = static_cast<int>(values.cols());
  const int nq = static_cast<int>(values.rows());
  proj.resize(std::size_t(nm) * nc);
  for (int l = 0; l < nm; ++l)
  {
    for (int k = 0; k < nc; ++k)
    {
      double s = 0.0;
      for (int j = 0; j < d; ++j)
      {
        s += u[l * d + j] * t[k][j];
      }
      proj[l * nc + k] = s;
    }
  }
  for (int q = 0; q < nq; ++q)
  {
    const double *row = values.data() + std::size_t(q) * nm;
    for (int k = 0; k < nc; ++k)
    {
      double s = 0.0;
      for (int l = 0; l < nm; ++l)
      {
        s += row[l] * proj[l * nc + k];
      }
      out[q * nc + k] = s;
    }
  }
}

// Trace of a field with nc components stored mode-major: out[q * nc + k].
void plain_trace(const RowMatrix &values, const double *u, int nc, double *out)
{
  const int nm = static_cast<int>(values.cols());
  const int nq = static_cast<int>(values.rows());
  for (int q = 0; q < nq; ++q)
  {
    const double *row = values.data() + std::size_t(q) * nm;
    for (int k = 0; k < nc; ++k)
    {
      double s = 0.0;
      for (int l = 0; l < nm; ++l)
      {
        s += row[l] * u[l * nc + k];
      }
      out[q * nc + k] = s;
    }
  }
}

}  // namespace

void MaxwellOperator::e_density(std::span<const double> h, std::span<const double> hs,
                                bool with_h, bool with_hs, std::vector<double> &density) const
{
  const int d = ref_.dim();
  const int block = nq_ * nc_;
  density.assign(std::size_t(mesh_.num_facets()) * block, 0.0);
  parallel_for(mesh_.num_facets(), workers_, [&](int begin, int end) {
    std::vector<double> proj, own(block), nb(block), jump(block);
    for (int f = begin; f < end; ++f)
    {
      if (kinds_[f] == FacetKind::Incident)
      {
        continue;
      }
      const Facet &facet = mesh_.facets[f];
      double *out = density.data() + std::size_t(f) * block;
      if (with_h)
      {
        const FacetTable &to = ref_.facet_table(facet.owner_facet, 0);
        const double *ho = h.data() + layout_.h_offset(facet.owner);
        if (d == 3)
        {
          vector_trace(to.h_values, ho, 3, 2, to.tangents, proj, own.data());
        }
        else
        {
          plain_trace(to.h_values, ho, 1, own.data());
        }
        if (kinds_[f] == FacetKind::Interior)
        {
          const FacetTable &tn = ref_.facet_table(facet.neighbor_facet, facet.neighbor_perm);
          const double *hn = h.data() + layout_.h_offset(facet.neighbor);
          if (d == 3)
          {
            vector_trace(tn.h_values, hn, 3, 2, tn.tangents, proj, nb.data());
          }
          else
          {
            plain_trace(tn.h_values, hn, 1, nb.data());
          }
          for (int i = 0; i < block; ++i)
          {
            out[i] = 0.5 * (own[i] + nb[i]);
          }
        }
        else
        {
          for (int i = 0; i < block; ++i)
          {
            out[i] = own[i];
          }
        }
      }
      if (with_hs)
      {
        plain_trace(ref_.facet_basis_values(), hs.data() + layout_.hs_offset(f), nc_, jump.data());
        for (int i = 0; i < block; ++i)
        {
          out[i] += jump[i];
        }
      }
    }
  });
}

void MaxwellOperator::h_density(std::span<const double> e, bool with_e,
                                const IncidentFunction *incident, double t,
                                std::vector<double> &density, std::span<double> hs_res) const
{
  const int d = ref_.dim();
  const int block = nq_ * nc_;
  const int nf = ref_.facet_modes();
  const RowMatrix &fv = ref_.facet_basis_values();
  const auto &w = ref_.facet_rule().weights;
  // 2D: (e x n)_z = -sigma (e . t); 3D uses the tangential pair directly.
  const double dim_sign = d == 3 ? 1.0 : -1.0;
  density.assign(std::size_t(mesh_.num_facets()) * block, 0.0);
  parallel_for(mesh_.num_facets(), workers_, [&](int begin, int end) {
    std::vector<double> proj, own(block), nb(block), jump(block);
    for (int f = begin; f < end; ++f)
    {
      const Facet &facet = mesh_.facets[f];
      const FacetTable &to = ref_.facet_table(facet.owner_facet, 0);
      const double sigma = to.orientation;
      double *out = density.data() + std::size_t(f) * block;
      if (kinds_[f] == FacetKind::Incident)
      {
        if (incident != nullptr)
        {
          for (int q = 0; q < nq_; ++q)
          {
            const Vec3 einc = (*incident)(source_[f], incident_points_[f][q], t);
            for (int k = 0; k < nc_; ++k)
            {
              out[q * nc_ + k] = dim_sign * sigma * dot(einc, tangents_[f][k]);
            }
          }
        }
        continue;
      }
      if (!with_e)
      {
        continue;
      }
      vector_trace(to.e_values, e.data() + layout_.e_offset(facet.owner), d, nc_, to.tangents,
                   proj, own.data());
      if (kinds_[f] == FacetKind::Interior)
      {
        const FacetTable &tn = ref_.facet_table(facet.neighbor_facet, facet.neighbor_perm);
        vector_trace(tn.e_values, e.data() + layout_.e_offset(facet.neighbor), d, nc_,
                     tn.tangents, proj, nb.data());
        for (int i = 0; i < block; ++i)
        {
          out[i] = dim_sign * 0.5 * sigma * (nb[i] - own[i]);
          jump[i] = own[i] - nb[i];
        }
      }
      else
      {
        for (int i = 0; i < block; ++i)
        {
          out[i] = -dim_sign * sigma * own[i];
          jump[i] = own[i];
        }
      }
      if (hs_res.empty())
      {
        continue;
      }
      double *r = hs_res.data() + layout_.hs_offset(f);
      for (int m = 0; m < nf; ++m)
      {
        double z[2] = {0.0, 0.0};
        for (int q = 0; q < nq_; ++q)
        {
          const double wt = w[q] * fv(q, m);
          for (int k = 0; k < nc_; ++k)
          {
            z[k] += wt * jump[q * nc_ + k];
          }
        }
        if (d == 3)
        {
          r[m * 2 + 0] += -sigma * z[1];
          r[m * 2 + 1] += sigma * z[0];
        }
        else
        {
          r[m] += sigma * z[0];
        }
      }
    }
  });
}

void MaxwellOperator::gather(const std::vector<double> &e_dens, const std::vector<double> *h_dens,
                             std::span<const double> e, std::span<const double> h, bool volume,
                             std::span<double> e_res, std::span<double> h_res, bool overwrite) const
{
  const int d = ref_.dim();
  const int ne = ref_.e_modes();
  const int nh = ref_.h_modes();
  const int es = layout_.e_stride();
  const int hsd = layout_.h_stride();
  const int block = nq_ * nc_;
  const auto &w = ref_.facet_rule().weights;
  const RowMatrix &k = ref_.curl_matrix();
  const bool do_e = !e_res.empty();
  const bool do_h = !h_res.empty();
  parallel_for(mesh_.num_elements(), workers_, [&](int begin, int end) {
    std::vector<double> wd(block), y(std::max(ne, nh) * 2);
    for (int el = begin; el < end; ++el)
    {
      double *er = do_e ? e_res.data() + layout_.e_offset(el) : nullptr;
      double *hr = do_h ? h_res.data() + layout_.h_offset(el) : nullptr;
      if (overwrite)
      {
        if (do_e)
        {
          std::fill(er, er + es, 0.0);
        }
        if (do_h)
        {
          std::fill(hr, hr + hsd, 0.0);
        }
      }
      if (volume)
      {
        if (do_e)
        {
          Eigen::Map<Eigen::VectorXd> ev(er, es);
          ev.noalias() +=
              k.transpose() * Eigen::Map<const Eigen::VectorXd>(h.data() + layout_.h_offset(el), hsd);
        }
        if (do_h)
        {
          Eigen::Map<Eigen::VectorXd> hv(hr, hsd);
          hv.noalias() -= k * Eigen::Map<const Eigen::VectorXd>(e.data() + layout_.e_offset(el), es);
        }
      }
      for (int lf = 0; lf <= d; ++lf)
      {
        const int f = mesh_.element_facets[el][lf];
        const Facet &facet = mesh_.facets[f];
        const bool owner = facet.owner == el && facet.owner_facet == lf;
        const FacetTable &tab = ref_.facet_table(lf, owner ? 0 : facet.neighbor_perm);
        const double sigma = tab.orientation;
        const auto &t = tab.tangents;
        if (do_e && kinds_[f] != FacetKind::Incident)
        {
          const double *dens = e_dens.data() + std::size_t(f) * block;
          for (int q = 0; q < nq_; ++q)
          {
            for (int c = 0; c < nc_; ++c)
            {
              wd[q * nc_ + c] = w[q] * dens[q * nc_ + c];
            }
          }
          for (int l = 0; l < ne; ++l)
          {
            double y0 = 0.0, y1 = 0.0;
            for (int q = 0; q < nq_; ++q)
            {
              const double phi = tab.e_values(q, l);
              y0 += phi * wd[q * nc_];
              if (d == 3)
              {
                y1 += phi * wd[q * nc_ + 1];
              }
            }
            for (int j = 0; j < d; ++j)
            {
              er[l * d + j] += d == 3 ? sigma * (t[1][j] * y0 - t[0][j] * y1) : -sigma * t[0][j] * y0;
            }
          }
        }
        if (do_h && h_dens != nullptr)
        {
          const double *dens = h_dens->data() + std::size_t(f) * block;
          for (int q = 0; q < nq_; ++q)
          {
            for (int c = 0; c < nc_; ++c)
            {
              wd[q * nc_ + c] = w[q] * dens[q * nc_ + c];
            }
          }
          for (int m = 0; m < nh; ++m)
          {
            double y0 = 0.0, y1 = 0.0;
            for (int q = 0; q < nq_; ++q)
            {
              const double psi = tab.h_values(q, m);
              y0 += psi * wd[q * nc_];
              if (d == 3)
              {
                y1 += psi * wd[q * nc_ + 1];
              }
            }
            if (d == 3)
            {
              for (int j = 0; j < 3; ++j)
              {
                hr[m * 3 + j] += y1 * t[0][j] - y0 * t[1][j];
              }
            }
            else
            {
              hr[m] += y0;
            }
          }
        }
      }
    }
  });
}

void MaxwellOperator::apply_curl(std::span<const double> e, std::span<const double> h,
                                 std::span<double> e_res, std::span<double> h_res) const
{
  if (e.size() != layout_.e_size() || h.size() != layout_.h_size() ||
      e_res.size() != layout_.e_size() || h_res.size() != layout_.h_size())
  {
    throw InvalidArgument("apply_curl: vector sizes do not match the layout");
  }
  const RowMatrix &k = ref_.curl_matrix();
  const int es = layout_.e_stride();
  const int hsd = layout_.h_stride();
  parallel_for(mesh_.num_elements(), workers_, [&](int begin, int end) {
    for (int el = begin; el < end; ++el)
    {
      Eigen::Map<Eigen::VectorXd>(e_res.data() + layout_.e_offset(el), es).noalias() +=
          k.transpose() * Eigen::Map<const Eigen::VectorXd>(h.data() + layout_.h_offset(el), hsd);
      Eigen::Map<Eigen::VectorXd>(h_res.data() + layout_.h_offset(el), hsd).noalias() -=
          k * Eigen::Map<const Eigen::VectorXd>(e.data() + layout_.e_offset(el), es);
    }
  });
}

void MaxwellOperator::apply_flux(std::span<const double> e, std::span<const double> h,
                                 const IncidentFunction *incident, double t,
                                 std::span<double> e_res, std::span<double> h_res) const
{
  if (e.size() != layout_.e_size() || h.size() != layout_.h_size() ||
      e_res.size() != layout_.e_size() || h_res.size() != layout_.h_size())
  {
    throw InvalidArgument("apply_flux: vector sizes do not match the layout");
  }
  std::vector<double> ed, hd;
  e_density(h, {}, true, false, ed);
  h_density(e, true, incident, t, hd, {});
  gather(ed, &hd, e, h, false, e_res, h_res, false);
}

void MaxwellOperator::apply_penalty(std::span<const double> e, std::span<const double> hs,
                                    std::span<double> e_res, std::span<double> hs_res) const
{
  if (e.size() != layout_.e_size() || hs.size() != layout_.hs_size() ||
      e_res.size() != layout_.e_size() || hs_res.size() != layout_.hs_size())
  {
    throw InvalidArgument("apply_penalty: vector sizes do not match the layout");
  }
  std::vector<double> ed, hd;
  e_density({}, hs, false, true, ed);
  // h_density accumulates C_F^T e with a positive sign convention of -C_F^T.
  h_density(e, true, nullptr, 0.0, hd, hs_res);
  gather(ed, nullptr, {}, {}, false, e_res, {}, false);
}

void MaxwellOperator::e_rhs(std::span<const double> h, std::span<const double> hs,
                            std::span<double> out) const
{
  if (h.size() != layout_.h_size() || hs.size() != layout_.hs_size() ||
      out.size() != layout_.e_size())
  {
    throw InvalidArgument("e_rhs: vector sizes do not match the layout");
  }
  std::vector<double> ed;
  e_density(h, hs, true, true, ed);
  gather(ed, nullptr, {}, h, true, out, {}, true);
}

void MaxwellOperator::h_rhs(std::span<const double> e, const IncidentFunction *incident, double t,
                            std::span<double> h_out, std::span<double> hs_out) const
{
  if (e.size() != layout_.e_size() || h_out.size() != layout_.h_size() ||
      hs_out.size() != layout_.hs_size())
  {
    throw InvalidArgument("h_rhs: vector sizes do not match the layout");
  }
  std::fill(hs_out.begin(), hs_out.end(), 0.0);
  std::vector<double> hd;
  h_density(e, true, incident, t, hd, hs_out);
  const std::vector<double> none;
  gather(none, &hd, e, {}, true, {}, h_out, true);
}

}  // namespace dgtd
