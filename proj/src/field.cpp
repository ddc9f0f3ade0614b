#include "pucci/field.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <stdexcept>

namespace pucci {

namespace {

int gcd_int(int a, int b) { return std::gcd(std::abs(a), std::abs(b)); }

std::vector<Eigen::Vector2i> enumerate_directions(int dim, int width) {
  std::vector<Eigen::Vector2i> out;
  if (dim == 1) {
    out.emplace_back(1, 0);
    return out;
  }
  // canonical representative of each +/- pair: x > 0, or x == 0 and y > 0
  out.emplace_back(1, 0);
  out.emplace_back(0, 1);
  for (int x = 1; x <= width; ++x)
    for (int y = -width; y <= width; ++y) {
      if (y == 0 || gcd_int(x, y) != 1) continue;
      if (std::max(x, std::abs(y)) > width) continue;
      out.emplace_back(x, y);
    }
  // sort by angle in [0, pi) for the quadrature weights
  std::sort(out.begin() + 2, out.end(), [](const Eigen::Vector2i& a, const Eigen::Vector2i& b) {
    return std::atan2(static_cast<double>(a.y()), a.x()) <
           std::atan2(static_cast<double>(b.y()), b.x());
  });
  return out;
}

// Angular Voronoi weights on the half-circle of directions; normalized so
// that sum w_e (e/|e|) (e/|e|)^T = I, which the D4 symmetry of the set makes
// exact once the trace condition sum w_e = dim holds.
std::vector<double> direction_weights(const std::vector<Eigen::Vector2i>& dirs, int dim) {
  const std::size_t n = dirs.size();
  if (dim == 1 || n == 1) return std::vector<double>(n, 1.0);
  std::vector<std::pair<double, std::size_t>> ang(n);
  for (std::size_t k = 0; k < n; ++k) {
    double a = std::atan2(static_cast<double>(dirs[k].y()), dirs[k].x());
    if (a < 0.0) a += M_PI;
    ang[k] = {a, k};
  }
  std::sort(ang.begin(), ang.end());
  std::vector<double> w(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double prev = i == 0 ? ang[n - 1].first - M_PI : ang[i - 1].first;
    const double next = i + 1 == n ? ang[0].first + M_PI : ang[i + 1].first;
    w[ang[i].second] = (next - prev) / 2.0 * (2.0 / M_PI);
  }
  return w;
}

}  // namespace

double Grid::max_diag_coefficient() const {
  double m = 0.0;
  for (const auto& d : dirs)
    for (double c : d.c_0) m = std::max(m, c * d.weight);
  return m;
}

GridPtr build_grid(const DomainSpec& domain, double h, int stencil_width) {
  if (!(h > 0.0)) throw std::invalid_argument("grid spacing must be > 0");
  if (stencil_width < 1 || stencil_width > 3)
    throw std::invalid_argument("stencil width must be 1, 2 or 3");

  auto g = std::make_shared<Grid>();
  g->domain = domain;
  g->h = h;
  g->stencil_width = stencil_width;
  g->dim = domain.dim();

  Point lo, hi;
  domain.bounding_box(lo, hi);
  const Point center = 0.5 * (lo + hi);
  const int pad = stencil_width + 1;
  const int mx = static_cast<int>(std::ceil((hi(0) - center(0)) / h - 1e-12)) + pad;
  const int my = g->dim == 2 ? static_cast<int>(std::ceil((hi(1) - center(1)) / h - 1e-12)) + pad : 0;
  g->nx = 2 * mx + 1;
  g->ny = 2 * my + 1;
  g->origin = center - h * Point(mx, my);
  if (g->dim == 1) g->origin(1) = 0.0;

  const std::size_t n = g->n_nodes();
  g->mask.assign(n, static_cast<std::uint8_t>(NodeClass::Exterior));
  g->interior_ordinal.assign(n, -1);

  for (std::size_t i = 0; i < n; ++i) {
    const auto idx = static_cast<std::int32_t>(i);
    if (domain.inside(g->node_point(idx))) {
      g->mask[i] = static_cast<std::uint8_t>(NodeClass::Interior);
      g->interior_ordinal[i] = static_cast<std::int32_t>(g->interior.size());
      g->interior.push_back(idx);
    }
  }
  if (g->interior.size() < 3) throw std::runtime_error("grid resolution too coarse: fewer than 3 interior nodes");

  const auto dvecs = enumerate_directions(g->dim, stencil_width);
  const auto weights = direction_weights(dvecs, g->dim);

  g->dirs.resize(dvecs.size());
  const std::size_t ni = g->interior.size();
  for (std::size_t k = 0; k < dvecs.size(); ++k) {
    auto& t = g->dirs[k];
    t.e = dvecs[k];
    t.weight = weights[k];
    t.len = std::sqrt(static_cast<double>(dvecs[k].squaredNorm()));
    const double full = h * t.len;
    t.full_c = 1.0 / (full * full);
    t.full_c0 = 2.0 / (full * full);
    t.full_inv_s = 1.0 / full;
    t.idx_p.resize(ni);
    t.idx_m.resize(ni);
    t.cut_p.assign(ni, -1);
    t.cut_m.assign(ni, -1);
    t.c_p.resize(ni);
    t.c_m.resize(ni);
    t.c_0.resize(ni);
    t.s_p.resize(ni);
    t.s_m.resize(ni);
    t.inv_s_p.resize(ni);
    t.inv_s_m.resize(ni);
  }

  auto mark_band = [&](std::int32_t idx) {
    if (g->mask[idx] == static_cast<std::uint8_t>(NodeClass::Exterior)) {
      g->mask[idx] = static_cast<std::uint8_t>(NodeClass::Boundary);
      g->boundary_band.push_back(idx);
    }
  };

  for (std::size_t i = 0; i < ni; ++i) {
    const std::int32_t self = g->interior[i];
    const int ix = self % g->nx, iy = self / g->nx;
    const Point x = g->node_point(self);
    for (std::size_t k = 0; k < g->dirs.size(); ++k) {
      auto& t = g->dirs[k];
      const double full = h * t.len;
      for (int sgn = 0; sgn < 2; ++sgn) {
        const int sx = sgn == 0 ? t.e.x() : -t.e.x();
        const int sy = sgn == 0 ? t.e.y() : -t.e.y();
        const std::int32_t nb = g->node_index(ix + sx, iy + sy);
        const Point xe = g->node_point(nb);
        double s = full;
        std::int32_t cut_id = -1;
        if (g->mask[nb] != static_cast<std::uint8_t>(NodeClass::Interior)) {
          double rho = domain.boundary_crossing(x, xe);
          if (rho > 1.0 - 1e-9) rho = 1.0;  // neighbor sits on the boundary
          rho = std::max(rho, 1e-6);
          s = rho * full;
          if (rho < 1.0) {
            t.cut = true;
            cut_id = static_cast<std::int32_t>(g->cut_points.size());
            g->cut_points.push_back(x + rho * (xe - x));
            g->cut_source_node.push_back(nb);
          }
          mark_band(nb);
        }
        if (sgn == 0) {
          t.idx_p[i] = nb;
          t.s_p[i] = s;
          t.cut_p[i] = cut_id;
        } else {
          t.idx_m[i] = nb;
          t.s_m[i] = s;
          t.cut_m[i] = cut_id;
        }
      }
      const double sp = t.s_p[i], sm = t.s_m[i];
      t.c_p[i] = 2.0 / (sp * (sp + sm));
      t.c_m[i] = 2.0 / (sm * (sp + sm));
      t.c_0[i] = 2.0 / (sp * sm);
      t.inv_s_p[i] = 1.0 / sp;
      t.inv_s_m[i] = 1.0 / sm;
    }
  }

  // orthogonal equal-length frames for the frame-extremal assembly
  if (g->dim == 2) {
    for (std::size_t k1 = 0; k1 < g->dirs.size(); ++k1)
      for (std::size_t k2 = k1 + 1; k2 < g->dirs.size(); ++k2) {
        const auto& a = g->dirs[k1].e;
        const auto& b = g->dirs[k2].e;
        if (a.dot(b) == 0 && a.squaredNorm() == b.squaredNorm())
          g->frames.push_back({static_cast<int>(k1), static_cast<int>(k2)});
      }
  }

  g->interior_bdist.resize(ni);
  for (std::size_t i = 0; i < ni; ++i)
    g->interior_bdist[i] = boundary_distance(domain, g->node_point(g->interior[i]));

  return g;
}

ScalarField ScalarField::constant(GridPtr g, double v) {
  ScalarField u(std::move(g));
  for (std::int32_t idx : u.grid->interior) u.values[idx] = v;
  for (std::int32_t idx : u.grid->boundary_band) u.values[idx] = v;
  return u;
}

double ScalarField::sup_norm() const {
  double m = 0.0;
  for (std::int32_t idx : grid->interior) m = std::max(m, std::abs(values[idx]));
  for (std::int32_t idx : grid->boundary_band) m = std::max(m, std::abs(values[idx]));
  return m;
}

double ScalarField::interior_max() const {
  double m = -std::numeric_limits<double>::infinity();
  for (std::int32_t idx : grid->interior) m = std::max(m, values[idx]);
  return m;
}

double ScalarField::interior_min() const {
  double m = std::numeric_limits<double>::infinity();
  for (std::int32_t idx : grid->interior) m = std::min(m, values[idx]);
  return m;
}

namespace {

void write_rows(const ScalarField& u, const std::string& path, char sep) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw std::runtime_error("cannot open " + path);
  const Grid& g = *u.grid;
  for (std::size_t i = 0; i < g.n_nodes(); ++i) {
    const auto idx = static_cast<std::int32_t>(i);
    if (g.node_class(idx) == NodeClass::Exterior) continue;
    const Point p = g.node_point(idx);
    if (g.dim == 1)
      std::fprintf(f, "%.17g%c%.17g\n", p(0), sep, u.values[idx]);
    else
      std::fprintf(f, "%.17g%c%.17g%c%.17g\n", p(0), sep, p(1), sep, u.values[idx]);
  }
  std::fclose(f);
}

}  // namespace

void write_field_csv(const ScalarField& u, const std::string& path) { write_rows(u, path, ','); }
void write_field_plot(const ScalarField& u, const std::string& path) { write_rows(u, path, ' '); }

void write_field_binary(const ScalarField& u, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path);
  const Grid& g = *u.grid;
  const std::int64_t header[3] = {g.dim, g.nx, g.ny};
  f.write(reinterpret_cast<const char*>(header), sizeof(header));
  f.write(reinterpret_cast<const char*>(&g.h), sizeof(double));
  f.write(reinterpret_cast<const char*>(u.values.data()),
          static_cast<std::streamsize>(sizeof(double) * g.n_nodes()));
}

}  // namespace pucci
