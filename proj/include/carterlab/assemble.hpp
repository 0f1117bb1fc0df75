#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <cmath>
#include <string>
#include <vector>

#include "carterlab/blocks.hpp"
#include "carterlab/errors.hpp"
#include "carterlab/params.hpp"
#include "carterlab/slab.hpp"

namespace carterlab {

// Tensor grid on a coordinate rectangle with composite-trapezoid weights.
// Node index runs r-fastest: idx(i, j) = j * (nr + 1) + i.
struct Grid2D {
  Rect rect{};
  int nr = 0, nx = 0;  // cell counts
  double hr = 0, hx = 0;
  std::vector<double> r, x;    // nodes
  std::vector<double> wr, wx;  // trapezoid weights

  static Grid2D make(const Rect& rect, int nr, int nx) {
    if (nr < 2 || nx < 2) throw RangeError("grid needs at least two cells per direction");
    if (!(rect.r1 > rect.r0) || !(rect.x1 > rect.x0))
      throw RangeError("grid rectangle must have positive extent");
    Grid2D g;
    g.rect = rect;
    g.nr = nr;
    g.nx = nx;
    g.hr = (rect.r1 - rect.r0) / nr;
    g.hx = (rect.x1 - rect.x0) / nx;
    g.r.resize(nr + 1);
    g.x.resize(nx + 1);
    for (int i = 0; i <= nr; ++i) g.r[i] = rect.r0 + g.hr * i;
    for (int j = 0; j <= nx; ++j) g.x[j] = rect.x0 + g.hx * j;
    g.wr.assign(nr + 1, g.hr);
    g.wr.front() = g.wr.back() = g.hr / 2;
    g.wx.assign(nx + 1, g.hx);
    g.wx.front() = g.wx.back() = g.hx / 2;
    return g;
  }

  int idx(int i, int j) const { return j * (nr + 1) + i; }
  std::size_t size() const { return static_cast<std::size_t>(nr + 1) * (nx + 1); }
};

// Discrete slab wave operator for one azimuthal mode m:
//   M_A u_tt - 2 i m G_B u_t + H u = 0,
// where H is the flux-form divergence-free stiffness plus the m^2 Phi mass,
// M_A and G_B are diagonal quadrature masses. The flux form of H annihilates
// constants exactly in floating point, which the threshold analysis relies on.
struct SlabOperator {
  Grid2D grid;
  int m = 0;
  bool flat = false;
  std::vector<double> face_dr;  // Delta_r at r-midpoints, size nr
  std::vector<double> face_dx;  // Delta_x at x-midpoints, size nx
  std::vector<double> A, B, Phi;  // node values
  std::vector<double> wA, wB;     // diagonal of M_A and G_B
  std::vector<double> w;          // plain quadrature weights w_i w_j
  Eigen::SparseMatrix<double> H;

  std::size_t size() const { return grid.size(); }

  // (H u) via face fluxes; differences of equal node values cancel exactly.
  void apply_H(const double* u, double* out) const {
    const int nr = grid.nr, nx = grid.nx;
    const double hr = grid.hr, hx = grid.hx;
    for (std::size_t k = 0; k < size(); ++k) out[k] = 0.0;
    for (int j = 0; j <= nx; ++j) {
      const double wxj = grid.wx[j];
      for (int i = 0; i < nr; ++i) {
        const double F = face_dr[i] * (u[grid.idx(i + 1, j)] - u[grid.idx(i, j)]) / hr;
        out[grid.idx(i, j)] -= wxj * F;
        out[grid.idx(i + 1, j)] += wxj * F;
      }
    }
    for (int i = 0; i <= nr; ++i) {
      const double wri = grid.wr[i];
      for (int j = 0; j < nx; ++j) {
        const double F = face_dx[j] * (u[grid.idx(i, j + 1)] - u[grid.idx(i, j)]) / hx;
        out[grid.idx(i, j)] -= wri * F;
        out[grid.idx(i, j + 1)] += wri * F;
      }
    }
    if (m != 0) {
      const double m2 = static_cast<double>(m) * m;
      for (std::size_t k = 0; k < size(); ++k) out[k] += m2 * w[k] * Phi[k] * u[k];
    }
  }

  // q(u, u) as a sum of squares; nonnegative in floating point.
  double quad_form(const double* u) const {
    const int nr = grid.nr, nx = grid.nx;
    double q = 0.0;
    for (int j = 0; j <= nx; ++j)
      for (int i = 0; i < nr; ++i) {
        const double d = u[grid.idx(i + 1, j)] - u[grid.idx(i, j)];
        q += grid.wx[j] * face_dr[i] * d * d / grid.hr;
      }
    for (int i = 0; i <= nr; ++i)
      for (int j = 0; j < nx; ++j) {
        const double d = u[grid.idx(i, j + 1)] - u[grid.idx(i, j)];
        q += grid.wr[i] * face_dx[j] * d * d / grid.hx;
      }
    if (m != 0) {
      const double m2 = static_cast<double>(m) * m;
      for (std::size_t k = 0; k < size(); ++k) q += m2 * w[k] * Phi[k] * u[k] * u[k];
    }
    return q;
  }

  // same with unit coefficients: the plain discrete gradient square
  double grad_form(const double* u) const {
    const int nr = grid.nr, nx = grid.nx;
    double q = 0.0;
    for (int j = 0; j <= nx; ++j)
      for (int i = 0; i < nr; ++i) {
        const double d = u[grid.idx(i + 1, j)] - u[grid.idx(i, j)];
        q += grid.wx[j] * d * d / grid.hr;
      }
    for (int i = 0; i <= nr; ++i)
      for (int j = 0; j < nx; ++j) {
        const double d = u[grid.idx(i, j + 1)] - u[grid.idx(i, j)];
        q += grid.wr[i] * d * d / grid.hx;
      }
    return q;
  }

  double mass_total() const {
    double s = 0.0;
    for (double v : wA) s += v;
    return s;
  }
};

// Builds the discrete operator. The rectangle must be a certified strict slab
// unless the flat override is selected.
inline SlabOperator build_slab_operator(const FamilyParams& p, const Rect& rect, int nr,
                                        int nx, int m, bool flat_override = false) {
  SlabOperator op;
  op.grid = Grid2D::make(rect, nr, nx);
  op.m = m;
  op.flat = flat_override;
  const std::size_t n = op.grid.size();
  op.A.resize(n);
  op.B.resize(n);
  op.Phi.resize(n);
  op.w.resize(n);
  op.wA.resize(n);
  op.wB.resize(n);
  op.face_dr.resize(nr);
  op.face_dx.resize(nx);

  if (flat_override) {
    for (int i = 0; i < nr; ++i) op.face_dr[i] = 1.0;
    for (int j = 0; j < nx; ++j) op.face_dx[j] = 1.0;
    for (int j = 0; j <= nx; ++j)
      for (int i = 0; i <= nr; ++i) {
        const int k = op.grid.idx(i, j);
        op.A[k] = 1.0;
        op.B[k] = 0.0;
        op.Phi[k] = 1.0;
      }
  } else {
    const SlabReport rep = classify_slab(p, rect);
    if (rep.verdict != SlabVerdict::strict) {
      std::string why = rep.verdict == SlabVerdict::reject
                            ? "rectangle rejected on " +
                                  (rep.failing.empty() ? std::string("?") : rep.failing.front())
                            : "positivity could not be certified at the probed resolutions";
      throw NotStrictSlab(why);
    }
    for (int i = 0; i < nr; ++i) op.face_dr[i] = p.delta_r(op.grid.r[i] + op.grid.hr / 2);
    for (int j = 0; j < nx; ++j) op.face_dx[j] = p.delta_x(op.grid.x[j] + op.grid.hx / 2);
    for (int j = 0; j <= nx; ++j)
      for (int i = 0; i <= nr; ++i) {
        const int k = op.grid.idx(i, j);
        const auto iw = inverse_weights(p, op.grid.r[i], op.grid.x[j]);
        op.A[k] = iw.A;
        op.B[k] = iw.B;
        op.Phi[k] = iw.Phi;
      }
  }

  for (int j = 0; j <= nx; ++j)
    for (int i = 0; i <= nr; ++i) {
      const int k = op.grid.idx(i, j);
      op.w[k] = op.grid.wr[i] * op.grid.wx[j];
      op.wA[k] = op.w[k] * op.A[k];
      op.wB[k] = op.w[k] * op.B[k];
    }

  // assembled matrix, entry-for-entry the same stencil as apply_H
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(9 * n);
  for (int j = 0; j <= nx; ++j)
    for (int i = 0; i < nr; ++i) {
      const double c = op.grid.wx[j] * op.face_dr[i] / op.grid.hr;
      const int k0 = op.grid.idx(i, j), k1 = op.grid.idx(i + 1, j);
      trips.emplace_back(k0, k0, c);
      trips.emplace_back(k1, k1, c);
      trips.emplace_back(k0, k1, -c);
      trips.emplace_back(k1, k0, -c);
    }
  for (int i = 0; i <= nr; ++i)
    for (int j = 0; j < nx; ++j) {
      const double c = op.grid.wr[i] * op.face_dx[j] / op.grid.hx;
      const int k0 = op.grid.idx(i, j), k1 = op.grid.idx(i, j + 1);
      trips.emplace_back(k0, k0, c);
      trips.emplace_back(k1, k1, c);
      trips.emplace_back(k0, k1, -c);
      trips.emplace_back(k1, k0, -c);
    }
  if (m != 0) {
    const double m2 = static_cast<double>(m) * m;
    for (std::size_t k = 0; k < n; ++k)
      trips.emplace_back(static_cast<int>(k), static_cast<int>(k), m2 * op.w[k] * op.Phi[k]);
  }
  op.H.resize(static_cast<int>(n), static_cast<int>(n));
  op.H.setFromTriplets(trips.begin(), trips.end());
  op.H.makeCompressed();
  return op;
}

}  // namespace carterlab
