#include "dmv/field.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace dmv {

Grid2D::Grid2D(int nx, int ny, double lx, double ly) : nx_(nx), ny_(ny), lx_(lx), ly_(ly) {
  if (nx < 4 || ny < 4) throw std::invalid_argument("Grid2D: need at least 4 cells per axis");
  if (!(lx > 0.0) || !(ly > 0.0)) throw std::invalid_argument("Grid2D: extents must be positive");
}

ConservedState ConservedState::uniform(const Grid2D& g, double rho, double theta, Vec2 u) {
  ConservedState s(g);
  for (std::size_t k = 0; k < g.size(); ++k) {
    s.rho[k] = rho;
    s.mom[k] = rho * u;
    s.z[k] = rho * theta;
  }
  return s;
}

ConservedState ConservedState::from_primitive(const ScalarField& rho, const VectorField& u,
                                              const ScalarField& theta) {
  if (!(rho.grid() == u.grid()) || !(rho.grid() == theta.grid()))
    throw std::invalid_argument("from_primitive: grid mismatch");
  ConservedState s(rho.grid());
  for (std::size_t k = 0; k < rho.size(); ++k) {
    s.rho[k] = rho[k];
    s.mom[k] = rho[k] * u[k];
    s.z[k] = rho[k] * theta[k];
  }
  return s;
}

VectorField ConservedState::velocity() const {
  VectorField u(grid());
  for (std::size_t k = 0; k < u.size(); ++k) u[k] = (1.0 / rho[k]) * mom[k];
  return u;
}

ScalarField ConservedState::theta() const {
  ScalarField t(grid());
  for (std::size_t k = 0; k < t.size(); ++k) t[k] = z[k] / rho[k];
  return t;
}

GhostedPrimitives apply_noslip_ghosts(const ConservedState& s) {
  return {Ghosted<double>(s.rho, Parity::even), Ghosted<Vec2>(s.velocity(), Parity::odd),
          Ghosted<double>(s.theta(), Parity::even)};
}

namespace {

// Derivative along one axis at position k of a line of n values, spacing h.
template <class T, class Get>
T line_derivative(int k, int n, double h, Get&& v) {
  if (k == 0) return (1.0 / (2.0 * h)) * (-3.0 * v(0) + 4.0 * v(1) - v(2));
  if (k == n - 1) return (1.0 / (2.0 * h)) * (3.0 * v(n - 1) - 4.0 * v(n - 2) + v(n - 3));
  return (1.0 / (2.0 * h)) * (v(k + 1) - v(k - 1));
}

template <class T>
T ddx(const Field<T>& f, int i, int j) {
  const auto& g = f.grid();
  return line_derivative<T>(i, g.nx(), g.dx(), [&](int k) { return f(k, j); });
}

template <class T>
T ddy(const Field<T>& f, int i, int j) {
  const auto& g = f.grid();
  return line_derivative<T>(j, g.ny(), g.dy(), [&](int k) { return f(i, k); });
}

template <class T>
T gddx(const Ghosted<T>& f, int i, int j) {
  return (1.0 / (2.0 * f.grid().dx())) * (f.at(i + 1, j) - f.at(i - 1, j));
}

template <class T>
T gddy(const Ghosted<T>& f, int i, int j) {
  return (1.0 / (2.0 * f.grid().dy())) * (f.at(i, j + 1) - f.at(i, j - 1));
}

template <class Out, class F>
Out cellwise(const Grid2D& g, F&& f) {
  Out out(g);
  const int nx = g.nx(), ny = g.ny();
#pragma omp parallel for schedule(static)
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) out(i, j) = f(i, j);
  return out;
}

}  // namespace

VectorField gradient(const ScalarField& f) {
  return cellwise<VectorField>(f.grid(), [&](int i, int j) { return Vec2{ddx(f, i, j), ddy(f, i, j)}; });
}

TensorField gradient(const VectorField& f) {
  return cellwise<TensorField>(f.grid(), [&](int i, int j) {
    const Vec2 dx = ddx(f, i, j), dy = ddy(f, i, j);
    return Mat2{dx.x, dy.x, dx.y, dy.y};
  });
}

ScalarField divergence(const VectorField& f) {
  return cellwise<ScalarField>(f.grid(), [&](int i, int j) { return ddx(f, i, j).x + ddy(f, i, j).y; });
}

VectorField divergence(const TensorField& f) {
  return cellwise<VectorField>(f.grid(), [&](int i, int j) {
    const Mat2 dx = ddx(f, i, j), dy = ddy(f, i, j);
    return Vec2{dx.xx + dy.xy, dx.yx + dy.yy};
  });
}

VectorField gradient(const Ghosted<double>& f) {
  return cellwise<VectorField>(f.grid(), [&](int i, int j) { return Vec2{gddx(f, i, j), gddy(f, i, j)}; });
}

TensorField gradient(const Ghosted<Vec2>& f) {
  return cellwise<TensorField>(f.grid(), [&](int i, int j) {
    const Vec2 dx = gddx(f, i, j), dy = gddy(f, i, j);
    return Mat2{dx.x, dy.x, dx.y, dy.y};
  });
}

ScalarField divergence(const Ghosted<Vec2>& f) {
  return cellwise<ScalarField>(f.grid(), [&](int i, int j) { return gddx(f, i, j).x + gddy(f, i, j).y; });
}

VectorField divergence(const Ghosted<Mat2>& f) {
  return cellwise<VectorField>(f.grid(), [&](int i, int j) {
    const Mat2 dx = gddx(f, i, j), dy = gddy(f, i, j);
    return Vec2{dx.xx + dy.xy, dx.yx + dy.yy};
  });
}

double integrate(const ScalarField& f) {
  const auto& g = f.grid();
  const int nx = g.nx(), ny = g.ny();
  std::vector<double> rows(ny, 0.0);
#pragma omp parallel for schedule(static)
  for (int j = 0; j < ny; ++j) {
    double s = 0.0;
    for (int i = 0; i < nx; ++i) s += f(i, j);
    rows[j] = s;
  }
  double total = 0.0;
  for (double r : rows) total += r;
  return total * g.cell_area();
}

double dirichlet_energy(const VectorField& u) {
  const auto& g = u.grid();
  const Ghosted<Vec2> ug(u, Parity::odd);
  const int nx = g.nx(), ny = g.ny();
  const double dx = g.dx(), dy = g.dy();
  std::vector<double> rows(ny + 1, 0.0);
  // Row j collects the x-faces of row j and the y-face below it; the extra
  // row holds the top wall faces.
#pragma omp parallel for schedule(static)
  for (int j = 0; j <= ny; ++j) {
    double s = 0.0;
    if (j < ny) {
      for (int i = -1; i < nx; ++i) {
        // Wall faces see the ghost through the half-cell distance.
        const double h = (i == -1 || i == nx - 1) ? 0.5 * dx : dx;
        const Vec2 d = (i == -1) ? ug.at(0, j) : (i == nx - 1 ? -ug.at(nx - 1, j) : ug.at(i + 1, j) - ug.at(i, j));
        s += norm2(d) / (h * h) * (i == -1 || i == nx - 1 ? 0.5 : 1.0);
      }
    }
    for (int i = 0; i < nx; ++i) {
      const bool wall = (j == 0 || j == ny);
      const double h = wall ? 0.5 * dy : dy;
      const Vec2 d = (j == 0) ? ug.at(i, 0) : (j == ny ? -ug.at(i, ny - 1) : ug.at(i, j) - ug.at(i, j - 1));
      s += norm2(d) / (h * h) * (wall ? 0.5 : 1.0);
    }
    rows[j] = s;
  }
  double total = 0.0;
  for (double r : rows) total += r;
  return total * g.cell_area();
}

double dirichlet_eigenvalue(const Grid2D& g, int max_iter, double rtol) {
  const int nx = g.nx(), ny = g.ny();
  const double ax = 1.0 / (g.dx() * g.dx()), ay = 1.0 / (g.dy() * g.dy());
  using Vec = std::vector<double>;
  auto apply = [&](const Vec& in, Vec& out) {
#pragma omp parallel for schedule(static)
    for (int j = 0; j < ny; ++j) {
      for (int i = 0; i < nx; ++i) {
        const double c = in[g.index(i, j)];
        const double l = i > 0 ? in[g.index(i - 1, j)] : -c;
        const double r = i < nx - 1 ? in[g.index(i + 1, j)] : -c;
        const double b = j > 0 ? in[g.index(i, j - 1)] : -c;
        const double t = j < ny - 1 ? in[g.index(i, j + 1)] : -c;
        out[g.index(i, j)] = ax * (2.0 * c - l - r) + ay * (2.0 * c - b - t);
      }
    }
  };
  auto dotv = [](const Vec& a, const Vec& b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
    return s;
  };
  // Conjugate gradients for A x = rhs; A is symmetric positive definite.
  auto solve = [&](const Vec& rhs, Vec& x) {
    const std::size_t n = rhs.size();
    std::fill(x.begin(), x.end(), 0.0);
    Vec r = rhs, p = rhs, ap(n);
    double rr = dotv(r, r);
    const double stop = 1e-28 * rr;
    for (std::size_t it = 0; it < 4 * n && rr > stop; ++it) {
      apply(p, ap);
      const double alpha = rr / dotv(p, ap);
      for (std::size_t k = 0; k < n; ++k) {
        x[k] += alpha * p[k];
        r[k] -= alpha * ap[k];
      }
      const double rr_new = dotv(r, r);
      const double beta = rr_new / rr;
      rr = rr_new;
      for (std::size_t k = 0; k < n; ++k) p[k] = r[k] + beta * p[k];
    }
  };
  // Inverse power iteration: power iteration on A^{-1}, Rayleigh quotient on A.
  Vec v(g.size(), 1.0), w(g.size()), av(g.size());
  double lambda_prev = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    const double nv = std::sqrt(dotv(v, v));
    for (double& x : v) x /= nv;
    apply(v, av);
    const double lambda = dotv(v, av);
    if (it > 0 && std::abs(lambda - lambda_prev) <= rtol * lambda) return lambda;
    lambda_prev = lambda;
    solve(v, w);
    v.swap(w);
  }
  return lambda_prev;
}

}  // namespace dmv
