#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace dmv {

struct Vec2 {
  double x = 0.0, y = 0.0;

  Vec2& operator+=(const Vec2& o) { x += o.x; y += o.y; return *this; }
  Vec2& operator-=(const Vec2& o) { x -= o.x; y -= o.y; return *this; }
  Vec2& operator*=(double s) { x *= s; y *= s; return *this; }
  friend Vec2 operator+(Vec2 a, const Vec2& b) { return a += b; }
  friend Vec2 operator-(Vec2 a, const Vec2& b) { return a -= b; }
  friend Vec2 operator-(const Vec2& a) { return {-a.x, -a.y}; }
  friend Vec2 operator*(double s, Vec2 a) { return a *= s; }
  friend Vec2 operator*(Vec2 a, double s) { return a *= s; }
  friend bool operator==(const Vec2&, const Vec2&) = default;
};

inline double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }
inline double norm2(const Vec2& a) { return dot(a, a); }

// 2x2 matrix; for velocity gradients row = component, column = derivative
// direction, i.e. xy = d u_x / d y.
struct Mat2 {
  double xx = 0.0, xy = 0.0, yx = 0.0, yy = 0.0;

  static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
  static Mat2 outer(const Vec2& a, const Vec2& b) { return {a.x * b.x, a.x * b.y, a.y * b.x, a.y * b.y}; }

  Mat2 transpose() const { return {xx, yx, xy, yy}; }
  double trace() const { return xx + yy; }
  Vec2 operator*(const Vec2& v) const { return {xx * v.x + xy * v.y, yx * v.x + yy * v.y}; }

  Mat2& operator+=(const Mat2& o) { xx += o.xx; xy += o.xy; yx += o.yx; yy += o.yy; return *this; }
  Mat2& operator-=(const Mat2& o) { xx -= o.xx; xy -= o.xy; yx -= o.yx; yy -= o.yy; return *this; }
  Mat2& operator*=(double s) { xx *= s; xy *= s; yx *= s; yy *= s; return *this; }
  friend Mat2 operator+(Mat2 a, const Mat2& b) { return a += b; }
  friend Mat2 operator-(Mat2 a, const Mat2& b) { return a -= b; }
  friend Mat2 operator-(const Mat2& a) { return {-a.xx, -a.xy, -a.yx, -a.yy}; }
  friend Mat2 operator*(double s, Mat2 a) { return a *= s; }
  friend bool operator==(const Mat2&, const Mat2&) = default;
};

// Frobenius contraction A : B.
inline double contract(const Mat2& a, const Mat2& b) {
  return a.xx * b.xx + a.xy * b.xy + a.yx * b.yx + a.yy * b.yy;
}

// Uniform Cartesian grid on [0, lx] x [0, ly]. Cell (i, j) has linear index
// j * nx + i (row-major, x fastest).
class Grid2D {
 public:
  Grid2D(int nx, int ny, double lx = 1.0, double ly = 1.0);

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  double lx() const { return lx_; }
  double ly() const { return ly_; }
  double dx() const { return lx_ / nx_; }
  double dy() const { return ly_ / ny_; }
  double cell_area() const { return dx() * dy(); }
  double area() const { return lx_ * ly_; }
  double xc(int i) const { return (i + 0.5) * dx(); }
  double yc(int j) const { return (j + 0.5) * dy(); }
  std::size_t size() const { return static_cast<std::size_t>(nx_) * ny_; }
  std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * nx_ + i; }

  friend bool operator==(const Grid2D&, const Grid2D&) = default;

 private:
  int nx_, ny_;
  double lx_, ly_;
};

// Cell-centred values on a grid.
template <class T>
class Field {
 public:
  explicit Field(const Grid2D& g, T init = T{}) : grid_(g), data_(g.size(), init) {}

  const Grid2D& grid() const { return grid_; }
  std::size_t size() const { return data_.size(); }

  T& operator()(int i, int j) { return data_[grid_.index(i, j)]; }
  const T& operator()(int i, int j) const { return data_[grid_.index(i, j)]; }
  T& operator[](std::size_t k) { return data_[k]; }
  const T& operator[](std::size_t k) const { return data_[k]; }

  std::span<T> values() { return data_; }
  std::span<const T> values() const { return data_; }

  friend bool operator==(const Field&, const Field&) = default;

 private:
  Grid2D grid_;
  std::vector<T> data_;
};

using ScalarField = Field<double>;
using VectorField = Field<Vec2>;
using TensorField = Field<Mat2>;

// Fills a field from f(x, y) at cell centres.
template <class F>
auto sample_field(const Grid2D& g, F&& f) {
  using T = decltype(f(0.0, 0.0));
  Field<T> out(g);
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) out(i, j) = f(g.xc(i), g.yc(j));
  return out;
}

// Reflection parity used to populate one layer of ghost cells.
// even: ghost = interior (zero normal gradient); odd: ghost = -interior
// (the wall-face average vanishes).
enum class Parity { even, odd };

// A field extended by one layer of ghost cells, indexable for
// i in [-1, nx], j in [-1, ny]. Corner ghosts are never read.
template <class T>
class Ghosted {
 public:
  explicit Ghosted(const Grid2D& g) : grid_(g), data_(static_cast<std::size_t>(g.nx() + 2) * (g.ny() + 2)) {}

  Ghosted(const Field<T>& f, Parity parity) : Ghosted(f.grid()) {
    const int nx = grid_.nx(), ny = grid_.ny();
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i) at(i, j) = f(i, j);
    fill(parity);
  }

  void fill(Parity parity) {
    const int nx = grid_.nx(), ny = grid_.ny();
    const double s = parity == Parity::even ? 1.0 : -1.0;
    for (int j = 0; j < ny; ++j) {
      at(-1, j) = s * at(0, j);
      at(nx, j) = s * at(nx - 1, j);
    }
    for (int i = 0; i < nx; ++i) {
      at(i, -1) = s * at(i, 0);
      at(i, ny) = s * at(i, ny - 1);
    }
  }

  const Grid2D& grid() const { return grid_; }
  T& at(int i, int j) { return data_[offset(i, j)]; }
  const T& at(int i, int j) const { return data_[offset(i, j)]; }

 private:
  std::size_t offset(int i, int j) const {
    return static_cast<std::size_t>(j + 1) * (grid_.nx() + 2) + (i + 1);
  }
  Grid2D grid_;
  std::vector<T> data_;
};

// Conserved unknowns: density, momentum rho u, and total potential
// temperature z = rho theta.
struct ConservedState {
  ScalarField rho;
  VectorField mom;
  ScalarField z;

  explicit ConservedState(const Grid2D& g) : rho(g), mom(g), z(g) {}

  const Grid2D& grid() const { return rho.grid(); }
  static ConservedState uniform(const Grid2D& g, double rho, double theta, Vec2 u = {});
  // Builds from primitive fields; all three must share a grid.
  static ConservedState from_primitive(const ScalarField& rho, const VectorField& u, const ScalarField& theta);

  VectorField velocity() const;
  ScalarField theta() const;

  friend bool operator==(const ConservedState&, const ConservedState&) = default;
};

// Primitive variables with no-slip ghost layers: velocity odd, density and
// potential temperature even.
struct GhostedPrimitives {
  Ghosted<double> rho;
  Ghosted<Vec2> u;
  Ghosted<double> theta;
};

GhostedPrimitives apply_noslip_ghosts(const ConservedState& s);

// Plain operators: central differences in the interior and second-order
// one-sided stencils in the boundary cells.
VectorField gradient(const ScalarField& f);
TensorField gradient(const VectorField& f);
ScalarField divergence(const VectorField& f);
VectorField divergence(const TensorField& f);

// Ghost-aware operators: central differences in every cell, reading the
// ghost layer at the walls.
VectorField gradient(const Ghosted<double>& f);
TensorField gradient(const Ghosted<Vec2>& f);
ScalarField divergence(const Ghosted<Vec2>& f);
VectorField divergence(const Ghosted<Mat2>& f);

// Sum of value * dx * dy in a fixed order (row partials, then rows in order);
// the result does not depend on the thread count.
double integrate(const ScalarField& f);

// Compact face-difference Dirichlet energy sum |grad u|^2 dx dy for a
// velocity with zero wall trace (odd ghosts).
double dirichlet_energy(const VectorField& u);

// Smallest eigenvalue of the compact 5-point Dirichlet Laplacian on g,
// estimated by inverse power iteration (conjugate-gradient inner solves).
double dirichlet_eigenvalue(const Grid2D& g, int max_iter = 200, double rtol = 1e-14);

// Elementwise helpers.
template <class T, class F>
auto map_field(const Field<T>& a, F&& f) {
  using R = decltype(f(a[0]));
  Field<R> out(a.grid());
  for (std::size_t k = 0; k < a.size(); ++k) out[k] = f(a[k]);
  return out;
}

template <class T, class U, class F>
auto zip_field(const Field<T>& a, const Field<U>& b, F&& f) {
  if (!(a.grid() == b.grid())) throw std::invalid_argument("zip_field: grid mismatch");
  using R = decltype(f(a[0], b[0]));
  Field<R> out(a.grid());
  for (std::size_t k = 0; k < a.size(); ++k) out[k] = f(a[k], b[k]);
  return out;
}

}  // namespace dmv
