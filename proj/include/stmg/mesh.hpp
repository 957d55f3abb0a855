#pragma once

#include <array>
#include <vector>

namespace stmg
{

struct Box
{
  double x0, y0, x1, y1;

  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
  double volume() const { return width() * height(); }
};

/// All cells sharing one vertex. Interior vertices own 4 cells in 2D,
/// boundary vertices fewer.
struct VertexStarPatch
{
  int              vertex;
  std::vector<int> cells;
};

/// Hierarchy of nested uniform Cartesian quadrilateral meshes of a
/// rectangular domain. Level s has (base_nx * 2^s) x (base_ny * 2^s) cells;
/// coarse cells are the exact union of their four children. Cell and vertex
/// ids are lexicographic by coordinate, immutable after construction.
class Mesh
{
public:
  static Mesh build_cartesian(const Box &domain, int base_nx, int base_ny, int levels);

  int n_levels() const { return levels_; }
  int finest_level() const { return levels_ - 1; }
  const Box &domain() const { return domain_; }

  int cells_x(int level) const { return base_nx_ << level; }
  int cells_y(int level) const { return base_ny_ << level; }
  int n_cells(int level) const { return cells_x(level) * cells_y(level); }
  int n_vertices(int level) const
  {
    return (cells_x(level) + 1) * (cells_y(level) + 1);
  }

  double hx(int level) const { return domain_.width() / cells_x(level); }
  double hy(int level) const { return domain_.height() / cells_y(level); }

  int cell_index(int level, int ix, int iy) const { return iy * cells_x(level) + ix; }
  std::array<int, 2> cell_coords(int level, int cell) const
  {
    return {cell % cells_x(level), cell / cells_x(level)};
  }
  Box cell_box(int level, int cell) const;

  int vertex_index(int level, int ix, int iy) const
  {
    return iy * (cells_x(level) + 1) + ix;
  }
  std::array<int, 2> vertex_coords(int level, int vertex) const
  {
    return {vertex % (cells_x(level) + 1), vertex / (cells_x(level) + 1)};
  }

  /// The four level-(s+1) children of a level-s cell.
  std::array<int, 4> children(int level, int cell) const;
  int parent(int level, int cell) const;

  /// Cells sharing the given vertex, sorted and duplicate-free.
  std::vector<int> cells_of_vertex(int level, int vertex) const;

  /// One patch per vertex, in lexicographic vertex order.
  std::vector<VertexStarPatch> enumerate_vertex_star_patches(int level) const;

  /// Cells sharing at least one vertex with the given cell, the cell
  /// included (3x3 window clipped at the boundary).
  std::vector<int> vertex_neighbors(int level, int cell) const;

private:
  Mesh(const Box &domain, int base_nx, int base_ny, int levels);

  void check_level(int level) const;

  Box domain_;
  int base_nx_, base_ny_;
  int levels_;
};

} // namespace stmg
