#include "stmg/hierarchy.hpp"

#include <cmath>
#include <stdexcept>

namespace stmg
{

std::vector<HpEntry>
construct_hierarchy(double h_fine, double h_coarse, int p_fine, int p_coarse)
{
  if (!(h_fine <= h_coarse))
    throw std::invalid_argument("construct_hierarchy: h_fine must be <= h_coarse");
  if (!(p_fine >= p_coarse && p_coarse >= 1))
    throw std::invalid_argument("construct_hierarchy: need p_fine >= p_coarse >= 1");

  std::vector<HpEntry> list;
  double               h = h_fine;
  int                  p = p_fine;
  while (p > p_coarse)
    {
      list.insert(list.begin(), HpEntry{h, p});
      p /= 2;
      if (p < p_coarse)
        p = p_coarse;
    }
  while (h <= h_coarse * (1.0 + 1e-12))
    {
      list.insert(list.begin(), HpEntry{h, p});
      h *= 2.0;
    }
  if (list.empty())
    throw std::invalid_argument("construct_hierarchy: empty hierarchy");
  return list;
}

std::vector<LevelDescriptor>
combine_hierarchies(const std::vector<HpEntry> &spatial,
                    const std::vector<HpEntry> &temporal)
{
  if (spatial.empty() || temporal.empty())
    throw std::invalid_argument("combine_hierarchies: empty input");

  std::vector<HpEntry> sp = spatial;
  std::vector<HpEntry> tm = temporal;
  const std::size_t    n  = std::max(sp.size(), tm.size());
  while (sp.size() < n)
    sp.push_back(sp.back());
  while (tm.size() < n)
    tm.push_back(tm.back());

  const double h_finest   = sp.back().h;
  const double tau_finest = tm.back().h;
  const auto   coarsening = [](double h, double h_finest_) {
    return static_cast<int>(std::lround(std::log2(h / h_finest_)));
  };

  std::vector<LevelDescriptor> levels(n);
  for (std::size_t l = 0; l < n; ++l)
    {
      levels[l].index           = static_cast<int>(l);
      levels[l].h               = sp[l].h;
      levels[l].tau             = tm[l].h;
      levels[l].r               = sp[l].p;
      levels[l].k               = tm[l].p;
      levels[l].mesh_coarsening = coarsening(sp[l].h, h_finest);
      levels[l].time_coarsening = coarsening(tm[l].h, tau_finest);
      levels[l].kind_to_coarser = TransferKind::identity;
    }

  for (std::size_t l = 1; l < n; ++l)
    {
      const LevelDescriptor &coarse = levels[l - 1];
      LevelDescriptor &      fine   = levels[l];
      const bool h_step = fine.mesh_coarsening != coarse.mesh_coarsening;
      const bool p_step = fine.r != coarse.r;
      const bool k_step = fine.k != coarse.k;
      if (fine.time_coarsening != coarse.time_coarsening)
        throw std::invalid_argument(
          "combine_hierarchies: geometric coarsening in time is not used by "
          "the time-marching driver");
      if (h_step && p_step)
        throw std::invalid_argument(
          "combine_hierarchies: spatial h- and p-step on one level");
      if (h_step)
        fine.kind_to_coarser =
          k_step ? TransferKind::h_space_p_time : TransferKind::h_space;
      else if (p_step)
        fine.kind_to_coarser =
          k_step ? TransferKind::p_space_p_time : TransferKind::p_space;
      else if (k_step)
        fine.kind_to_coarser = TransferKind::p_time;
      else
        fine.kind_to_coarser = TransferKind::identity;
    }
  return levels;
}

LevelHierarchy
instantiate_levels(const Mesh &                        mesh,
                   const std::vector<LevelDescriptor> &descriptors,
                   const HierarchyParams &             params)
{
  if (descriptors.empty())
    throw std::invalid_argument("instantiate_levels: no levels");

  LevelHierarchy hierarchy;
  const int      finest_mesh = mesh.finest_level();

  for (const LevelDescriptor &desc : descriptors)
    {
      auto level  = std::make_unique<MultigridLevel>();
      level->desc = desc;
      const int s = finest_mesh - desc.mesh_coarsening;
      if (s < 0)
        throw std::invalid_argument("instantiate_levels: hierarchy deeper than mesh");
      level->vspace = std::make_unique<VelocitySpace>(mesh, s, desc.r);
      level->pspace = std::make_unique<PressureSpace>(mesh, s, desc.r);
      level->tmat =
        std::make_unique<TemporalMatrices>(temporal_matrices(desc.k, desc.tau));
      level->op = std::make_unique<SpaceTimeBlockOperator>(
        *level->vspace, *level->pspace, *level->tmat, params.nu,
        params.grad_div);
      level->coarse_direct = desc.index == 0;
      hierarchy.levels_.push_back(std::move(level));
    }

  // Transfers to the parent level and smoothers on all non-coarse levels.
  std::uint64_t patch_bytes = 0;
  for (int l = 1; l < hierarchy.n_levels(); ++l)
    {
      MultigridLevel &fine   = hierarchy.level(l);
      MultigridLevel &coarse = hierarchy.level(l - 1);
      TransferPair    pair;
      switch (fine.desc.kind_to_coarser)
        {
          case TransferKind::identity:
            pair = TransferPair::identity(*fine.vspace, *fine.pspace, fine.desc.k);
            break;
          case TransferKind::h_space:
            pair = build_h_space_transfer(*coarse.vspace, *coarse.pspace,
                                          *fine.vspace, *fine.pspace, fine.desc.k);
            break;
          case TransferKind::p_space:
            pair = build_p_space_transfer(*coarse.vspace, *coarse.pspace,
                                          *fine.vspace, *fine.pspace, fine.desc.k);
            break;
          case TransferKind::p_time:
            pair = build_p_time_transfer(coarse.desc.k, fine.desc.k,
                                         *fine.vspace, *fine.pspace);
            break;
          case TransferKind::h_space_p_time:
            pair = combine_space_time_transfer(
              build_h_space_transfer(*coarse.vspace, *coarse.pspace,
                                     *fine.vspace, *fine.pspace, fine.desc.k),
              build_p_time_transfer(coarse.desc.k, fine.desc.k,
                                    *fine.vspace, *fine.pspace));
            break;
          case TransferKind::p_space_p_time:
            pair = combine_space_time_transfer(
              build_p_space_transfer(*coarse.vspace, *coarse.pspace,
                                     *fine.vspace, *fine.pspace, fine.desc.k),
              build_p_time_transfer(coarse.desc.k, fine.desc.k,
                                    *fine.vspace, *fine.pspace));
            break;
        }
      fine.to_coarser = std::make_unique<TransferPair>(std::move(pair));

      fine.smoother = std::make_unique<VankaSmoother>(
        VankaSmoother::build(*fine.op, params.smoother));
      patch_bytes += 8 * fine.smoother->total_matrix_elements();
      if (patch_bytes > params.patch_memory_cap)
        throw std::runtime_error("instantiate_levels: patch matrix memory cap exceeded");
    }
  return hierarchy;
}

} // namespace stmg
