#include "stmg/mesh.hpp"

#include <algorithm>
#include <stdexcept>

namespace stmg
{

Mesh::Mesh(const Box &domain, int base_nx, int base_ny, int levels)
  : domain_(domain)
  , base_nx_(base_nx)
  , base_ny_(base_ny)
  , levels_(levels)
{}

Mesh
Mesh::build_cartesian(const Box &domain, int base_nx, int base_ny, int levels)
{
  if (base_nx < 1 || base_ny < 1)
    throw std::invalid_argument("Mesh: base cell counts must be >= 1");
  if (levels < 1)
    throw std::invalid_argument("Mesh: need at least one level");
  if (!(domain.width() > 0.0) || !(domain.height() > 0.0))
    throw std::invalid_argument("Mesh: domain box has non-positive extent");
  return Mesh(domain, base_nx, base_ny, levels);
}

void
Mesh::check_level(int level) const
{
  if (level < 0 || level >= levels_)
    throw std::out_of_range("Mesh: level out of range");
}

Box
Mesh::cell_box(int level, int cell) const
{
  check_level(level);
  const auto [ix, iy] = cell_coords(level, cell);
  const double dx = hx(level), dy = hy(level);
  return Box{domain_.x0 + ix * dx,
             domain_.y0 + iy * dy,
             domain_.x0 + (ix + 1) * dx,
             domain_.y0 + (iy + 1) * dy};
}

std::array<int, 4>
Mesh::children(int level, int cell) const
{
  check_level(level + 1);
  const auto [ix, iy] = cell_coords(level, cell);
  const int fine      = level + 1;
  return {cell_index(fine, 2 * ix, 2 * iy),
          cell_index(fine, 2 * ix + 1, 2 * iy),
          cell_index(fine, 2 * ix, 2 * iy + 1),
          cell_index(fine, 2 * ix + 1, 2 * iy + 1)};
}

int
Mesh::parent(int level, int cell) const
{
  check_level(level);
  if (level == 0)
    throw std::out_of_range("Mesh: level 0 cells have no parent");
  const auto [ix, iy] = cell_coords(level, cell);
  return cell_index(level - 1, ix / 2, iy / 2);
}

std::vector<int>
Mesh::cells_of_vertex(int level, int vertex) const
{
  check_level(level);
  if (vertex < 0 || vertex >= n_vertices(level))
    throw std::out_of_range("Mesh: unknown vertex id");
  const auto [vx, vy] = vertex_coords(level, vertex);
  const int nx = cells_x(level), ny = cells_y(level);

  std::vector<int> cells;
  for (int cy = vy - 1; cy <= vy; ++cy)
    for (int cx = vx - 1; cx <= vx; ++cx)
      if (cx >= 0 && cx < nx && cy >= 0 && cy < ny)
        cells.push_back(cell_index(level, cx, cy));
  std::sort(cells.begin(), cells.end());
  return cells;
}

std::vector<VertexStarPatch>
Mesh::enumerate_vertex_star_patches(int level) const
{
  check_level(level);
  std::vector<VertexStarPatch> patches;
  patches.reserve(n_vertices(level));
  for (int v = 0; v < n_vertices(level); ++v)
    patches.push_back(VertexStarPatch{v, cells_of_vertex(level, v)});
  return patches;
}

std::vector<int>
Mesh::vertex_neighbors(int level, int cell) const
{
  check_level(level);
  const auto [ix, iy] = cell_coords(level, cell);
  const int nx = cells_x(level), ny = cells_y(level);

  std::vector<int> cells;
  for (int cy = iy - 1; cy <= iy + 1; ++cy)
    for (int cx = ix - 1; cx <= ix + 1; ++cx)
      if (cx >= 0 && cx < nx && cy >= 0 && cy < ny)
        cells.push_back(cell_index(level, cx, cy));
  return cells;
}

} // namespace stmg
