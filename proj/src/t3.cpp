#include "eqconj/t3.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "eqconj/conjugacy.hpp"
#include "eqconj/errors.hpp"
#include "eqconj/kernels.hpp"

namespace eqconj {
namespace {

double blend_value(double a, double b, double s) { return s == 0.0 ? a : (1.0 - s) * a + s * b; }

}  // namespace

double T3Conjugacy::y_value(double x, double y) const {
  const GridLocation l = locate(x, shape[0]);
  const double a = fiber_y[l.k](y);
  if (l.frac == 0.0) return a;
  return blend_value(a, fiber_y[(l.k + 1) % shape[0]](y), l.frac);
}

double T3Conjugacy::z_value(double x, double y, double z) const {
  const std::size_t nx = shape[0];
  const std::size_t ny = shape[1];
  const GridLocation lx = locate(x, nx);
  const GridLocation ly = locate(y, ny);
  auto at = [&](std::size_t i, std::size_t j) { return fiber_z[i * ny + j](z); };
  const std::size_t i1 = (lx.k + 1) % nx;
  const std::size_t j1 = (ly.k + 1) % ny;
  const double r0 = ly.frac == 0.0 ? at(lx.k, ly.k) : blend_value(at(lx.k, ly.k), at(lx.k, j1), ly.frac);
  if (lx.frac == 0.0) return r0;
  const double r1 = ly.frac == 0.0 ? at(i1, ly.k) : blend_value(at(i1, ly.k), at(i1, j1), ly.frac);
  return blend_value(r0, r1, lx.frac);
}

std::array<double, 3> T3Conjugacy::operator()(double x, double y, double z) const {
  return {base(x), y_value(x, y), z_value(x, y, z)};
}

std::array<double, 3> T3Conjugacy::inverse(double u, double v, double w) const {
  const std::size_t nx = shape[0];
  const std::size_t ny = shape[1];
  const double x = base.inverse(u);
  const GridLocation lx = locate(x, nx);
  const NodeCdf cy =
      lx.frac == 0.0 ? fiber_y[lx.k] : NodeCdf::blend(fiber_y[lx.k], fiber_y[(lx.k + 1) % nx], lx.frac);
  const double y = cy.inverse(v);
  const GridLocation ly = locate(y, ny);
  auto row = [&](std::size_t i) {
    const NodeCdf& a = fiber_z[i * ny + ly.k];
    return ly.frac == 0.0 ? a : NodeCdf::blend(a, fiber_z[i * ny + (ly.k + 1) % ny], ly.frac);
  };
  const NodeCdf cz = lx.frac == 0.0 ? row(lx.k) : NodeCdf::blend(row(lx.k), row((lx.k + 1) % nx), lx.frac);
  return {x, y, cz.inverse(w)};
}

T3Conjugacy t3_conjugacy(const TrigPotential& phi3, long d, const Shape<3>& shape, const FamilyConfig& cfg) {
  if (phi3.dim() != 3) throw InvalidArgument("t3_conjugacy: potential must live on T^3");
  if (shape[0] > kT3MaxBase || shape[1] > kT3MaxFiber || shape[2] > kT3MaxFiber) {
    throw InvalidArgument("t3_conjugacy: grid exceeds the resource bound (base <= 64, fibers <= 64^2)");
  }
  T3Conjugacy H;
  H.d = d;
  H.shape = shape;
  const TransferOperator<3> op = make_transfer<3>(phi3, d, shape);
  H.eig = solve_eigendata<3>(op, cfg.solver());
  H.mu = equilibrium_state<3>(H.eig);
  auto [bp, nu] = base_potential_and_measures<3>(op, cfg);
  H.Phi = std::move(bp);

  const std::size_t nx = shape[0];
  const std::size_t ny = shape[1];
  const std::size_t nz = shape[2];
  const TransferOperator<1> base_op = make_transfer_fine<1>(H.Phi.phi_fine, d, {nx});
  H.base_eig = solve_eigendata<1>(base_op, cfg.solver());
  H.mu_hat = equilibrium_state<1>(H.base_eig);
  H.base = NodeCdf::of(H.mu_hat.nodes.weights().values());

  H.mu_x = Field<3>(shape);
  std::vector<double> marg(ny);
  for (std::size_t i = 0; i < nx; ++i) {
    std::span<double> row = H.mu_x.slab(i);
    kernels::hadamard(H.eig.h.slab(i), nu.slab(i), row);
    const double mass = std::accumulate(row.begin(), row.end(), 0.0);
    kernels::scale(1.0 / mass, row);
    for (std::size_t j = 0; j < ny; ++j) {
      const std::span<const double> zs = row.subspan(j * nz, nz);
      marg[j] = std::accumulate(zs.begin(), zs.end(), 0.0);
      H.fiber_z.push_back(NodeCdf::of(zs));
    }
    H.fiber_y.push_back(NodeCdf::of(marg));
  }
  return H;
}

std::array<double, 3> T3SkewProduct::operator()(double u, double v, double w) const {
  const auto xyz = H.inverse(u, v, w);
  const double x = xyz[0];
  const double y = xyz[1];
  const std::size_t nx = H.shape[0];
  const std::size_t ny = H.shape[1];
  const GridLocation lx = locate(x, nx);
  const GridLocation ly = locate(y, ny);
  const std::size_t i1 = (lx.k + 1) % nx;
  const std::size_t j1 = (ly.k + 1) % ny;
  const double gyv = lx.frac == 0.0 ? gy[lx.k](v) : blend_value(gy[lx.k](v), gy[i1](v), lx.frac);
  auto zrow = [&](std::size_t i) {
    const double a = gz[i * ny + ly.k](w);
    return ly.frac == 0.0 ? a : blend_value(a, gz[i * ny + j1](w), ly.frac);
  };
  const double gzw = lx.frac == 0.0 ? zrow(lx.k) : blend_value(zrow(lx.k), zrow(i1), lx.frac);
  return {f(u), gyv, gzw};
}

T3SkewProduct t3_skew_product(const T3Conjugacy& H) {
  T3SkewProduct F;
  F.d = H.d;
  F.H = H;
  const std::size_t nx = H.shape[0];
  const std::size_t ny = H.shape[1];
  const std::size_t nz = H.shape[2];
  const CircleGrid gx(nx);
  const CircleGrid gy(ny);
  F.f = conjugate_expansion(H.base, H.base, H.d, nx);
  for (std::size_t i = 0; i < nx; ++i) {
    const std::size_t di = gx.times(i, H.d);
    F.gy.push_back(conjugate_expansion(H.fiber_y[i], H.fiber_y[di], H.d, ny));
    for (std::size_t j = 0; j < ny; ++j) {
      const std::size_t dj = gy.times(j, H.d);
      F.gz.push_back(conjugate_expansion(H.fiber_z[i * ny + j], H.fiber_z[di * ny + dj], H.d, nz));
    }
  }
  return F;
}

T3Checks t3_checks(const T3SkewProduct& F) {
  const T3Conjugacy& H = F.H;
  const std::size_t nx = H.shape[0];
  const std::size_t ny = H.shape[1];
  const std::size_t nz = H.shape[2];
  const CircleGrid gx(nx), gy(ny), gz(nz);
  T3Checks out;
  out.pressure_gap = H.pressure_gap();
  for (std::size_t i = 0; i < nx; ++i) {
    for (std::size_t j = 0; j < ny; ++j) {
      for (std::size_t k = 0; k < nz; ++k) {
        const auto h = H(gx.point(i), gy.point(j), gz.point(k));
        const auto lhs = F(h[0], h[1], h[2]);
        const auto rhs = H(gx.point(gx.times(i, H.d)), gy.point(gy.times(j, H.d)), gz.point(gz.times(k, H.d)));
        for (std::size_t a = 0; a < 3; ++a) {
          out.conjugacy_error = std::max(out.conjugacy_error, torus_distance(lhs[a], rhs[a]));
        }
      }
    }
  }
  const double hx = 0.5 / static_cast<double>(nx);
  const double hy = 0.5 / static_cast<double>(ny);
  const double hz = 0.5 / static_cast<double>(nz);
  const Field<3>& w = H.mu.nodes.weights();
  for (const TestFunction& psi : t3_test_suite()) {
    double acc = 0.0;
    for (std::size_t i = 0; i < nx; ++i) {
      const double x = gx.point(i);
      for (std::size_t j = 0; j < ny; ++j) {
        const double y = gy.point(j);
        for (std::size_t k = 0; k < nz; ++k) {
          const double z = gz.point(k);
          const double lo[3] = {H.base(x - hx), H.y_value(x, y - hy), H.z_value(x, y, z - hz)};
          const double hi[3] = {H.base(x + hx), H.y_value(x, y + hy), H.z_value(x, y, z + hz)};
          acc += w.at({i, j, k}) * box_average(psi, lo, hi);
        }
      }
    }
    out.pushforward_error = std::max(out.pushforward_error, std::abs(acc));
  }
  return out;
}

double t3_separable_deviation(const T3Conjugacy& H, const std::array<TrigPotential, 3>& parts,
                              const FamilyConfig& cfg) {
  std::array<NodeCdf, 3> ref;
  for (std::size_t a = 0; a < 3; ++a) {
    if (parts[a].dim() != 1) throw InvalidArgument("t3_separable_deviation: parts must be circle potentials");
    const EigenData<1> e = solve_eigendata<1>(parts[a], H.d, Shape<1>{H.shape[a]}, cfg.solver());
    ref[a] = NodeCdf::of(equilibrium_state<1>(e).nodes.weights().values());
  }
  auto dev = [](const NodeCdf& a, const NodeCdf& b) {
    double out = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) out = std::max(out, std::abs(a.half_node(k) - b.half_node(k)));
    return out;
  };
  double out = dev(H.base, ref[0]);
  for (const NodeCdf& c : H.fiber_y) out = std::max(out, dev(c, ref[1]));
  for (const NodeCdf& c : H.fiber_z) out = std::max(out, dev(c, ref[2]));
  return out;
}

double t3_identity_deviation(const T3Conjugacy& H) {
  auto dev = [](const NodeCdf& a) {
    double out = 0.0;
    const double n = static_cast<double>(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
      out = std::max(out, std::abs(a.half_node(k) - (static_cast<double>(k) + 0.5) / n));
    }
    return out;
  };
  double out = dev(H.base);
  for (const NodeCdf& c : H.fiber_y) out = std::max(out, dev(c));
  for (const NodeCdf& c : H.fiber_z) out = std::max(out, dev(c));
  return out;
}

}  // namespace eqconj
