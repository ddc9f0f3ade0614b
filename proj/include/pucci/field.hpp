#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <memory>
#include <vector>

#include "pucci/domain.hpp"

namespace pucci {

enum class NodeClass : std::uint8_t { Exterior = 0, Interior = 1, Boundary = 2 };

/// Uniform lattice over the domain's bounding box with an
/// interior/boundary/exterior mask and precomputed wide-stencil tables.
///
/// Directions are the lattice vectors with coprime coordinates and
/// infinity-norm at most the stencil width, one per +/- pair, axes first.
/// Every interior node stores, per direction, the two arm lengths and value
/// sources of the centered second difference. Arms that would land outside
/// the domain are shortened to the boundary crossing ("cut" arms); their
/// value source is the boundary-band node beyond the crossing, which carries
/// the Dirichlet trace.
class Grid {
 public:
  DomainSpec domain;
  double h = 0.0;
  int stencil_width = 1;
  int dim = 2;
  int nx = 0, ny = 0;
  Point origin = Point::Zero();  // position of lattice node (0, 0)

  std::vector<std::uint8_t> mask;           // NodeClass per lattice node
  std::vector<std::int32_t> interior;       // lattice indices of interior nodes
  std::vector<std::int32_t> boundary_band;  // lattice indices carrying Dirichlet data
  std::vector<std::int32_t> interior_ordinal;  // lattice index -> interior position or -1
  std::vector<double> interior_bdist;          // distance to the boundary per interior node

  struct DirTable {
    Eigen::Vector2i e = Eigen::Vector2i::Zero();
    double weight = 0.0;  // angular quadrature weight; sums to the dimension
    double len = 0.0;     // |e| (Euclidean)
    bool cut = false;     // any shortened arm in this direction
    double full_c = 0.0;   // 1/(h|e|)^2
    double full_c0 = 0.0;  // 2/(h|e|)^2
    double full_inv_s = 0.0;
    // One entry per interior node. Second difference along e with the
    // boundary-shortened ("cut") arms:
    //   D_e u = c_p v_p + c_m v_m - c_0 u[self]
    // where v is the neighbor's nodal value for a full arm and the Dirichlet
    // trace at the recorded crossing for a cut arm (cut_* >= 0 indexes
    // cut_points). On nodal data (no trace attached) full arms are used
    // throughout, so second differences of quadratics stay exact.
    std::vector<std::int32_t> idx_p, idx_m;
    std::vector<std::int32_t> cut_p, cut_m;  // -1 for full arms
    std::vector<double> c_p, c_m, c_0;
    std::vector<double> s_p, s_m;          // arm lengths (Euclidean)
    std::vector<double> inv_s_p, inv_s_m;  // reciprocals for one-sided differences
  };
  std::vector<DirTable> dirs;
  std::vector<std::array<int, 2>> frames;  // orthogonal equal-length direction pairs
  std::vector<Point> cut_points;               // boundary crossings of cut arms
  std::vector<std::int32_t> cut_source_node;   // band node beyond each crossing

  std::size_t n_nodes() const { return static_cast<std::size_t>(nx) * ny; }
  std::size_t n_interior() const { return interior.size(); }

  std::int32_t node_index(int ix, int iy) const { return ix + nx * iy; }
  Point node_point(std::int32_t idx) const {
    const int iy = idx / nx, ix = idx % nx;
    return origin + h * Point(ix, iy);
  }
  NodeClass node_class(std::int32_t idx) const { return static_cast<NodeClass>(mask[idx]); }

  /// Largest second-difference diagonal coefficient over nodes and
  /// directions, h^-2 scaled; cut arms can make it much larger than 2 N.
  double max_diag_coefficient() const;
};

using GridPtr = std::shared_ptr<const Grid>;

/// Throws std::invalid_argument for bad h / stencil width, std::runtime_error
/// when the lattice yields fewer than 3 interior nodes.
GridPtr build_grid(const DomainSpec& domain, double h, int stencil_width);

/// Nodal scalar values over a grid's lattice. Exterior nodes hold zero.
class ScalarField {
 public:
  ScalarField() = default;
  explicit ScalarField(GridPtr g) : grid(std::move(g)) {
    values = Eigen::ArrayXd::Zero(static_cast<Eigen::Index>(grid->n_nodes()));
  }

  static ScalarField zeros(GridPtr g) { return ScalarField(std::move(g)); }
  static ScalarField constant(GridPtr g, double v);
  template <typename F>
  static ScalarField from_function(GridPtr g, F&& f) {
    ScalarField u(std::move(g));
    for (std::size_t i = 0; i < u.grid->n_nodes(); ++i) {
      const auto idx = static_cast<std::int32_t>(i);
      if (u.grid->node_class(idx) != NodeClass::Exterior)
        u.values[static_cast<Eigen::Index>(i)] = f(u.grid->node_point(idx));
    }
    return u;
  }

  GridPtr grid;
  Eigen::ArrayXd values;
  bool diverged = false;

  double operator[](std::int32_t idx) const { return values[idx]; }
  double& operator[](std::int32_t idx) { return values[idx]; }

  /// Sup norm over interior and boundary nodes.
  double sup_norm() const;
  /// Max over interior nodes (signed).
  double interior_max() const;
  double interior_min() const;
};

/// CSV rows "x[,y],value" over interior and boundary nodes.
void write_field_csv(const ScalarField& u, const std::string& path);
/// Binary dump: int64 dim, nx, ny then h and row-major lattice values as
/// little-endian 64-bit floats.
void write_field_binary(const ScalarField& u, const std::string& path);
/// Whitespace-separated columns (x [y] value) for plotting.
void write_field_plot(const ScalarField& u, const std::string& path);

}  // namespace pucci
