#pragma once

#include "stmg/dof_space.hpp"
#include "stmg/mesh.hpp"
#include "stmg/st_operator.hpp"
#include "stmg/transfer.hpp"
#include "stmg/vanka.hpp"

#include <memory>
#include <vector>

namespace stmg
{

/// One entry of a one-dimensional (spatial or temporal) coarsening sequence:
/// mesh size and polynomial degree, coarse first.
struct HpEntry
{
  double h;
  int    p;

  bool operator==(const HpEntry &) const = default;
};

/// Coarsening sequence: polynomial halving at the finest mesh size first,
/// then geometric doubling at the reached degree; returned coarse to fine.
std::vector<HpEntry> construct_hierarchy(double h_fine,
                                         double h_coarse,
                                         int    p_fine,
                                         int    p_coarse);

/// One level of the merged space-time hierarchy.
struct LevelDescriptor
{
  int    index;          // 0 = coarsest
  int    mesh_coarsening; // coarsening steps from the finest spatial mesh
  int    time_coarsening; // coarsening steps from the finest time mesh
  int    r;
  int    k;
  double h;
  double tau;
  TransferKind kind_to_coarser; // identity at index 0
};

/// Merge the two sequences level by level, padding the shorter at its fine
/// end with its finest entry.
std::vector<LevelDescriptor> combine_hierarchies(const std::vector<HpEntry> &spatial,
                                                 const std::vector<HpEntry> &temporal);

struct MultigridLevel
{
  LevelDescriptor                         desc;
  std::unique_ptr<VelocitySpace>          vspace;
  std::unique_ptr<PressureSpace>          pspace;
  std::unique_ptr<TemporalMatrices>       tmat;
  std::unique_ptr<SpaceTimeBlockOperator> op;
  std::unique_ptr<VankaSmoother>          smoother;   // absent on level 0
  std::unique_ptr<TransferPair>           to_coarser; // absent on level 0
  bool                                    coarse_direct = false;
};

struct HierarchyParams
{
  double       nu;
  double       tau;
  double       grad_div = 0.0;
  SmootherKind smoother = SmootherKind::cell;
  /// Cap on the memory of all stored patch matrices, in bytes.
  std::uint64_t patch_memory_cap = 8ull << 30;
};

class LevelHierarchy
{
public:
  int n_levels() const { return static_cast<int>(levels_.size()); }
  MultigridLevel &level(int l) { return *levels_[l]; }
  const MultigridLevel &level(int l) const { return *levels_[l]; }
  MultigridLevel &finest() { return *levels_.back(); }
  const MultigridLevel &finest() const { return *levels_.back(); }

  std::vector<std::unique_ptr<MultigridLevel>> levels_;
};

/// Instantiate spaces, operators, transfers, and smoothers for a descriptor
/// sequence; level 0 is flagged for the direct coarse solve.
LevelHierarchy instantiate_levels(const Mesh &                        mesh,
                                  const std::vector<LevelDescriptor> &descriptors,
                                  const HierarchyParams &             params);

} // namespace stmg
