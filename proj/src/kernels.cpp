#include "dmv/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace dmv {

Mat2 viscous_stress(const Mat2& g, const FluidParams& p) {
  const double div = g.trace();
  const double bulk = p.lambda * div - p.mu * (2.0 / p.dim) * div;
  return {p.mu * (2.0 * g.xx) + bulk, p.mu * (g.xy + g.yx), p.mu * (g.yx + g.xy), p.mu * (2.0 * g.yy) + bulk};
}

namespace kernels {
namespace {

struct Cell {
  double rho = 0.0, z = 0.0, p = 0.0, c = 0.0;
  Vec2 u, m;
};

struct Flux {
  double r = 0.0;
  Vec2 m;
  double z = 0.0;
};

// One-layer ghosted storage for cell records and stresses.
template <class T>
class Halo {
 public:
  explicit Halo(const Grid2D& g) : nx_(g.nx()), data_(static_cast<std::size_t>(g.nx() + 2) * (g.ny() + 2)) {}
  T& at(int i, int j) { return data_[static_cast<std::size_t>(j + 1) * (nx_ + 2) + (i + 1)]; }
  const T& at(int i, int j) const { return data_[static_cast<std::size_t>(j + 1) * (nx_ + 2) + (i + 1)]; }

 private:
  int nx_;
  std::vector<T> data_;
};

Cell reflect(Cell c) {
  c.u = -c.u;
  c.m = -c.m;
  return c;
}

Halo<Cell> primitives(const ConservedState& s, const FluidParams& prm, bool par) {
  const Grid2D& g = s.grid();
  const int nx = g.nx(), ny = g.ny();
  Halo<Cell> h(g);
#pragma omp parallel for schedule(static) if (par)
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      Cell& c = h.at(i, j);
      c.rho = s.rho(i, j);
      c.z = s.z(i, j);
      c.m = s.mom(i, j);
      c.u = (1.0 / c.rho) * c.m;
      c.p = prm.a * std::pow(c.z, prm.gamma);
      c.c = std::sqrt(prm.gamma * c.p / c.rho);
    }
  }
  for (int j = 0; j < ny; ++j) {
    h.at(-1, j) = reflect(h.at(0, j));
    h.at(nx, j) = reflect(h.at(nx - 1, j));
  }
  for (int i = 0; i < nx; ++i) {
    h.at(i, -1) = reflect(h.at(i, 0));
    h.at(i, ny) = reflect(h.at(i, ny - 1));
  }
  return h;
}

Mat2 central_grad(const Halo<Cell>& h, int i, int j, double dx, double dy) {
  const Vec2 ddx = (1.0 / (2.0 * dx)) * (h.at(i + 1, j).u - h.at(i - 1, j).u);
  const Vec2 ddy = (1.0 / (2.0 * dy)) * (h.at(i, j + 1).u - h.at(i, j - 1).u);
  return {ddx.x, ddy.x, ddx.y, ddy.y};
}

Halo<Mat2> stresses(const Halo<Cell>& h, const Grid2D& g, const FluidParams& prm, bool par) {
  const int nx = g.nx(), ny = g.ny();
  const double dx = g.dx(), dy = g.dy();
  Halo<Mat2> st(g);
#pragma omp parallel for schedule(static) if (par)
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) st.at(i, j) = viscous_stress(central_grad(h, i, j, dx, dy), prm);
  for (int j = 0; j < ny; ++j) {
    st.at(-1, j) = st.at(0, j);
    st.at(nx, j) = st.at(nx - 1, j);
  }
  for (int i = 0; i < nx; ++i) {
    st.at(i, -1) = st.at(i, 0);
    st.at(i, ny) = st.at(i, ny - 1);
  }
  return st;
}

Flux xflux(const Cell& l, const Cell& r, const Mat2& sl, const Mat2& sr) {
  const double a = std::max(std::abs(l.u.x) + l.c, std::abs(r.u.x) + r.c);
  Flux f;
  f.r = 0.5 * (l.m.x + r.m.x) - 0.5 * a * (r.rho - l.rho);
  f.m = 0.5 * (l.u.x * l.m + r.u.x * r.m) + Vec2{0.5 * (l.p + r.p), 0.0} -
        0.5 * (Vec2{sl.xx, sl.yx} + Vec2{sr.xx, sr.yx}) - 0.5 * a * (r.m - l.m);
  f.z = 0.5 * (l.u.x * l.z + r.u.x * r.z) - 0.5 * a * (r.z - l.z);
  return f;
}

Flux yflux(const Cell& b, const Cell& t, const Mat2& sb, const Mat2& st) {
  const double a = std::max(std::abs(b.u.y) + b.c, std::abs(t.u.y) + t.c);
  Flux f;
  f.r = 0.5 * (b.m.y + t.m.y) - 0.5 * a * (t.rho - b.rho);
  f.m = 0.5 * (b.u.y * b.m + t.u.y * t.m) + Vec2{0.0, 0.5 * (b.p + t.p)} -
        0.5 * (Vec2{sb.xy, sb.yy} + Vec2{st.xy, st.yy}) - 0.5 * a * (t.m - b.m);
  f.z = 0.5 * (b.u.y * b.z + t.u.y * t.z) - 0.5 * a * (t.z - b.z);
  return f;
}

void combine(const Flux& w, const Flux& e, const Flux& s, const Flux& n, double dx, double dy, Rhs& out,
             std::size_t k) {
  out.rho[k] = -(1.0 / dx) * (e.r - w.r) - (1.0 / dy) * (n.r - s.r);
  out.mom[k] = -(1.0 / dx) * (e.m - w.m) - (1.0 / dy) * (n.m - s.m);
  out.z[k] = -(1.0 / dx) * (e.z - w.z) - (1.0 / dy) * (n.z - s.z);
}

void check_grid(const ConservedState& s, Rhs& out) {
  if (!(out.rho.grid() == s.grid())) out = Rhs(s.grid());
}

}  // namespace

TensorField velocity_gradient(const ConservedState& s, Backend) {
  return gradient(Ghosted<Vec2>(s.velocity(), Parity::odd));
}

void rhs(const ConservedState& s, const FluidParams& prm, Backend backend, Rhs& out) {
  check_grid(s, out);
  const Grid2D& g = s.grid();
  const int nx = g.nx(), ny = g.ny();
  const double dx = g.dx(), dy = g.dy();

  if (backend == Backend::serial) {
    const Halo<Cell> h = primitives(s, prm, false);
    const Halo<Mat2> st = stresses(h, g, prm, false);
    for (int j = 0; j < ny; ++j) {
      for (int i = 0; i < nx; ++i) {
        const Flux w = xflux(h.at(i - 1, j), h.at(i, j), st.at(i - 1, j), st.at(i, j));
        const Flux e = xflux(h.at(i, j), h.at(i + 1, j), st.at(i, j), st.at(i + 1, j));
        const Flux so = yflux(h.at(i, j - 1), h.at(i, j), st.at(i, j - 1), st.at(i, j));
        const Flux no = yflux(h.at(i, j), h.at(i, j + 1), st.at(i, j), st.at(i, j + 1));
        combine(w, e, so, no, dx, dy, out, g.index(i, j));
      }
    }
    return;
  }

  const Halo<Cell> h = primitives(s, prm, true);
  const Halo<Mat2> st = stresses(h, g, prm, true);
  // x-face (i, j) sits left of cell i; y-face (i, j) sits below cell j.
  std::vector<Flux> fx(static_cast<std::size_t>(nx + 1) * ny), fy(static_cast<std::size_t>(nx) * (ny + 1));
#pragma omp parallel
  {
#pragma omp for schedule(static) nowait
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i <= nx; ++i)
        fx[static_cast<std::size_t>(j) * (nx + 1) + i] = xflux(h.at(i - 1, j), h.at(i, j), st.at(i - 1, j), st.at(i, j));
#pragma omp for schedule(static)
    for (int j = 0; j <= ny; ++j)
      for (int i = 0; i < nx; ++i)
        fy[static_cast<std::size_t>(j) * nx + i] = yflux(h.at(i, j - 1), h.at(i, j), st.at(i, j - 1), st.at(i, j));
#pragma omp for schedule(static)
    for (int j = 0; j < ny; ++j) {
      for (int i = 0; i < nx; ++i) {
        const std::size_t xf = static_cast<std::size_t>(j) * (nx + 1) + i;
        const std::size_t yf = static_cast<std::size_t>(j) * nx + i;
        combine(fx[xf], fx[xf + 1], fy[yf], fy[yf + nx], dx, dy, out, g.index(i, j));
      }
    }
  }
}

double max_rate(const ConservedState& s, const FluidParams& prm, Backend backend) {
  const Grid2D& g = s.grid();
  const int nx = g.nx(), ny = g.ny();
  const double dx = g.dx(), dy = g.dy();
  const double visc = 2.0 * (2.0 * prm.mu + std::abs(prm.lambda)) * (1.0 / (dx * dx) + 1.0 / (dy * dy));
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i)
      if (!(s.rho(i, j) > 0.0))
        throw DomainError("nonpositive density at cell (" + std::to_string(i) + ", " + std::to_string(j) + ")");
  std::vector<double> rows(ny, 0.0);
#pragma omp parallel for schedule(static) if (backend == Backend::openmp)
  for (int j = 0; j < ny; ++j) {
    double m = 0.0;
    for (int i = 0; i < nx; ++i) {
      const double rho = s.rho(i, j);
      const Vec2 u = (1.0 / rho) * s.mom(i, j);
      const double c = thermo::sound_speed(rho, s.z(i, j) / rho, prm);
      m = std::max(m, (std::abs(u.x) + c) / dx + (std::abs(u.y) + c) / dy + visc / rho);
    }
    rows[j] = m;
  }
  return *std::max_element(rows.begin(), rows.end());
}

double dissipation_rate(const ConservedState& s, const FluidParams& prm, Backend backend) {
  const TensorField gu = velocity_gradient(s, backend);
  ScalarField d(s.grid());
  for (std::size_t k = 0; k < d.size(); ++k) d[k] = contract(viscous_stress(gu[k], prm), gu[k]);
  return integrate(d);
}

}  // namespace kernels
}  // namespace dmv
