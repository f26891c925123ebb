#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "dpc/grid.hpp"
#include "test_support.hpp"

using namespace dpc;
using test_support::brute_range;
using test_support::make_uniform;

TEST_CASE("grid side formulas") {
  CHECK(approx_grid_side(250.0, 2) == Catch::Approx(176.7766953).epsilon(1e-9));
  CHECK(sampled_grid_side(250.0, 0.5, 2) == Catch::Approx(88.38834765).epsilon(1e-9));
}

TEST_CASE("build maps points to floor-keyed cells") {
  const Dataset points = Dataset::from_rows({{0.5, 0.5}, {0.7, 0.2}, {3.1, 0.0}});
  Grid grid(points, 1.0);
  REQUIRE(grid.cell_count() == 2);
  CHECK(grid.cell(0).key == CellKey{0, 0});
  CHECK(grid.cell(0).members == std::vector<int>{0, 1});
  CHECK(grid.cell(1).key == CellKey{3, 0});
  CHECK(grid.cell(1).members == std::vector<int>{2});
  CHECK(grid.cell_of(1) == 0);
  CHECK(grid.cell_of(2) == 1);
}

TEST_CASE("empty dataset yields empty grid") {
  Dataset none;
  none.dim = 2;
  Grid grid(none, 5.0);
  CHECK(grid.cell_count() == 0);
}

TEST_CASE("negative coordinates use true floor") {
  const Dataset points = Dataset::from_rows({{-0.5, -2.5}, {0.5, 0.5}});
  Grid grid(points, 1.0);
  CHECK(grid.key_of(points.point(0)) == CellKey{-1, -3});
  CHECK(grid.key_of(points.point(1)) == CellKey{0, 0});
}

TEST_CASE("cells partition the dataset and respect the diameter bound") {
  for (int dim : {2, 3, 5}) {
    const Dataset points = make_uniform(1500, dim, 41 + dim);
    const double side = approx_grid_side(120.0, dim);
    Grid grid(points, side);

    std::size_t total = 0;
    std::set<int> seen;
    const double diameter = side * std::sqrt(static_cast<double>(dim));
    for (std::size_t ci = 0; ci < grid.cell_count(); ++ci) {
      const GridCell& cell = grid.cell(ci);
      CHECK_FALSE(cell.members.empty());
      total += cell.members.size();
      for (int id : cell.members) {
        CHECK(seen.insert(id).second);
        CHECK(grid.key_of(points.point(id)) == cell.key);
      }
      for (std::size_t a = 0; a < cell.members.size(); ++a)
        for (std::size_t b = a + 1; b < cell.members.size(); ++b)
          CHECK(distance(points.point(cell.members[a]),
                         points.point(cell.members[b])) <= diameter);
    }
    CHECK(total == points.size());

    // Rebuilding gives an identical structure.
    Grid again(points, side);
    REQUIRE(again.cell_count() == grid.cell_count());
    for (std::size_t ci = 0; ci < grid.cell_count(); ++ci) {
      CHECK(again.cell(ci).key == grid.cell(ci).key);
      CHECK(again.cell(ci).members == grid.cell(ci).members);
    }
  }
}

TEST_CASE("neighbor cells from a range result") {
  const Dataset points = Dataset::from_rows({{0.2, 0.2}, {0.8, 0.8}, {1.2, 0.2}});
  Grid grid(points, 1.0);
  REQUIRE(grid.cell_count() == 2);

  // Result entirely inside the cell: no neighbors.
  CHECK(neighbor_cells_from_result(grid, 0, std::vector<int>{0, 1}).empty());

  // Result spanning the adjacent cell: exactly that one.
  const auto n = neighbor_cells_from_result(grid, 0, std::vector<int>{0, 1, 2});
  REQUIRE(n.size() == 1);
  CHECK(grid.cell(n[0]).key == CellKey{1, 0});
}

TEST_CASE("neighbor count stays within the geometric bound") {
  for (int dim : {2, 3}) {
    const double d_cut = 150.0;
    const Dataset points = make_uniform(2000, dim, 59 + dim);
    Grid grid(points, approx_grid_side(d_cut, dim));
    const double per_dim = std::ceil(2.0 * std::sqrt(static_cast<double>(dim)) + 1.0);
    const double bound = std::pow(per_dim, dim);
    for (std::size_t ci = 0; ci < grid.cell_count(); ci += 7) {
      const int rep = grid.cell(ci).members.front();
      const auto result = brute_range(points, points.point(rep), d_cut);
      const auto neighbors =
          neighbor_cells_from_result(grid, static_cast<int>(ci), result);
      CHECK(static_cast<double>(neighbors.size()) <= bound);
      CHECK(std::is_sorted(neighbors.begin(), neighbors.end()));
    }
  }
}
