#include "eqconj/conjugacy.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

namespace eqconj {

NodeCdf TorusConjugacy::fiber_at(double x) const {
  const GridLocation loc = locate(x, n_base());
  if (loc.frac == 0.0) return fibers[loc.k];
  return NodeCdf::blend(fibers[loc.k], fibers[(loc.k + 1) % n_base()], loc.frac);
}

double TorusConjugacy::fiber_value(double x, double y) const {
  const GridLocation loc = locate(x, n_base());
  const double a = fibers[loc.k](y);
  if (loc.frac == 0.0) return a;
  const double b = fibers[(loc.k + 1) % n_base()](y);
  return (1.0 - loc.frac) * a + loc.frac * b;
}

std::array<double, 2> TorusConjugacy::operator()(double x, double y) const {
  return {base(x), fiber_value(x, y)};
}

std::array<double, 2> TorusConjugacy::inverse(double u, double v) const {
  const double x = base.inverse(u);
  return {x, fiber_at(x).inverse(v)};
}

TorusConjugacy build_conjugacy(const ConditionalFamily& fam) {
  TorusConjugacy H;
  H.base = NodeCdf::of(fam.mu_hat.nodes.weights().values());
  H.fibers = fam.c_x;
  return H;
}

MonotoneCircleMap conjugate_expansion(const NodeCdf& src, const NodeCdf& dst, long d,
                                      std::size_t n_out) {
  const std::size_t n = src.size();
  if (dst.size() != n) throw InvalidArgument("conjugate_expansion: grids differ");
  const long degree = d * dst.degree();
  std::vector<double> knots(n + 1);
  std::vector<double> vals(n + 1);
  const double dn = static_cast<double>(n);
  for (std::size_t k = 0; k <= n; ++k) {
    const double t = (static_cast<double>(k) + 0.5) / dn;
    knots[k] = src.half_node(k % n) + static_cast<double>(k / n);
    vals[k] = dst(static_cast<double>(d) * t);
  }
  const double k0 = knots.front();
  const double period = static_cast<double>(src.degree());
  std::vector<double> out(n_out);
  for (std::size_t j = 0; j < n_out; ++j) {
    const double u = static_cast<double>(j) / static_cast<double>(n_out);
    const double q = std::floor((u - k0) / period);
    const double s = u - q * period;
    auto it = std::upper_bound(knots.begin(), knots.end(), s);
    std::size_t k = static_cast<std::size_t>(it - knots.begin());
    k = std::clamp<std::size_t>(k, 1, n) - 1;
    const double t = std::clamp((s - knots[k]) / (knots[k + 1] - knots[k]), 0.0, 1.0);
    out[j] = vals[k] + t * (vals[k + 1] - vals[k]) + q * static_cast<double>(degree);
  }
  return MonotoneCircleMap(std::move(out), degree);
}

double SkewProductMap::g_value(double u, double v) const {
  const GridLocation loc = locate(u, n_base());
  const double a = g[loc.k](v);
  if (loc.frac == 0.0) return a;
  const double b = g[(loc.k + 1) % n_base()](v);
  return (1.0 - loc.frac) * a + loc.frac * b;
}

SkewProductMap build_skew_product(const TorusConjugacy& H, long d) {
  const std::size_t nb = H.n_base();
  const std::size_t nf = H.n_fiber();
  const CircleGrid base(nb);
  SkewProductMap F;
  F.d = d;
  F.f = conjugate_expansion(H.base, H.base, d, nb);
  std::vector<MonotoneCircleMap> rows;
  rows.reserve(nb);
  for (std::size_t i = 0; i < nb; ++i) {
    rows.push_back(conjugate_expansion(H.fibers[i], H.fibers[base.times(i, d)], d, nf));
  }
  F.g.reserve(nb);
  for (std::size_t j = 0; j < nb; ++j) {
    const double x = H.base.inverse(base.point(j));
    const GridLocation loc = locate(x, nb);
    if (loc.frac == 0.0) {
      F.g.push_back(rows[loc.k]);
    } else {
      F.g.push_back(MonotoneCircleMap::blend(rows[loc.k], rows[(loc.k + 1) % nb], loc.frac));
    }
  }
  return F;
}

double DerivativeModel::Phi_tilde(double x) const {
  const double d = static_cast<double>(fam_.d);
  const Field<1>& hhat = fam_.base_eig.h;
  return fam_.Phi_at(x) + std::log(hhat(x)) - std::log(hhat(wrap01(d * x))) - fam_.base_eig.pressure;
}

double DerivativeModel::phi_tilde_fiber(double x, double y) const {
  const double d = static_cast<double>(fam_.d);
  const Field<1>& hhat = fam_.base_eig.h;
  const Field<2>& h = fam_.eig.h;
  const double dx = wrap01(d * x);
  const double dy = wrap01(d * y);
  return fam_.phi(x, y) + std::log(h(x, y) / hhat(x)) - std::log(h(dx, dy) / hhat(dx)) - fam_.Phi_at(x);
}

double DerivativeModel::phi_tilde(double x, double y) const {
  const double d = static_cast<double>(fam_.d);
  const Field<2>& h = fam_.eig.h;
  return fam_.phi(x, y) + std::log(h(x, y)) - std::log(h(wrap01(d * x), wrap01(d * y))) - fam_.eig.pressure;
}

double DerivativeModel::base_derivative(double u) const { return std::exp(-Phi_tilde(H_.base.inverse(u))); }

double DerivativeModel::fiber_derivative(double u, double v) const {
  const auto [x, y] = H_.inverse(u, v);
  return std::exp(-phi_tilde_fiber(x, y));
}

double DerivativeModel::jacobian_target(double u, double v) const {
  const auto [x, y] = H_.inverse(u, v);
  return std::exp(-phi_tilde(x, y));
}

GridFunction1D base_derivative_field(const ConditionalFamily& fam, const TorusConjugacy& H) {
  const DerivativeModel model(fam, H);
  return sample1d(H.n_base(), [&](double u) { return model.base_derivative(u); });
}

GridFunction2D fiber_derivative_field(const ConditionalFamily& fam, const TorusConjugacy& H) {
  const DerivativeModel model(fam, H);
  const std::size_t nb = H.n_base();
  const std::size_t nf = H.n_fiber();
  GridFunction2D out({nb, nf});
  for (std::size_t j = 0; j < nb; ++j) {
    const double u = static_cast<double>(j) / static_cast<double>(nb);
    const double x = H.base.inverse(u);
    const NodeCdf cx = H.fiber_at(x);
    for (std::size_t k = 0; k < nf; ++k) {
      const double y = cx.inverse(static_cast<double>(k) / static_cast<double>(nf));
      out.at({j, k}) = std::exp(-model.phi_tilde_fiber(x, y));
    }
  }
  return out;
}

GridFunction2D jacobian_field(const ConditionalFamily& fam, const TorusConjugacy& H) {
  const GridFunction1D fp = base_derivative_field(fam, H);
  GridFunction2D out = fiber_derivative_field(fam, H);
  for (std::size_t j = 0; j < out.extent(0); ++j) kernels::scale(fp[j], out.row(j));
  return out;
}

SkewProductMap assemble_skew_product(const ConditionalFamily& fam, const TorusConjugacy& H) {
  SkewProductMap F = build_skew_product(H, fam.d);
  F.f_prime = base_derivative_field(fam, H);
  F.g_prime = fiber_derivative_field(fam, H);
  return F;
}

ConjugacyError conjugacy_identity_error(const TorusConjugacy& H, const SkewProductMap& F) {
  const std::size_t nb = H.n_base();
  const std::size_t nf = H.n_fiber();
  const CircleGrid base(nb);
  const CircleGrid fiber(nf);
  const long d = F.d;
  ConjugacyError err;
  for (std::size_t i = 0; i < nb; ++i) {
    const double u = H.base.node(i);
    const double fu = F.f_value(u);
    const std::size_t di = base.times(i, d);
    const double target_u = H.base.node(di);
    const double eu = torus_distance(fu, target_u);
    for (std::size_t k = 0; k < nf; ++k) {
      const double v = H.fibers[i].node(k);
      const double gv = F.g_value(u, v);
      const double target_v = H.fibers[di].node(fiber.times(k, d));
      const double e = std::max(eu, torus_distance(gv, target_v));
      if (e > err.sup) err = {e, i, k};
    }
  }
  return err;
}

double box_average(const TestFunction& psi, std::span<const double> lo, std::span<const double> hi) {
  using C = std::complex<double>;
  constexpr double two_pi = 2.0 * std::numbers::pi;
  C acc(1.0, 0.0);
  for (std::size_t a = 0; a < lo.size(); ++a) {
    const double k = static_cast<double>(psi.freq[a]);
    const double w = hi[a] - lo[a];
    if (psi.freq[a] == 0 || w == 0.0) continue;
    // mean of exp(2 pi i k t) over [lo, hi] = exp(i pi k (lo + hi)) sinc(pi k w).
    const double arg = std::numbers::pi * k * w;
    const double sinc = std::sin(arg) / arg;
    const double center = wrap01(0.5 * k * (lo[a] + hi[a]));
    acc *= std::polar(sinc, two_pi * center);
  }
  return psi.is_sine ? acc.imag() : acc.real();
}

double box_average(const TestFunction& psi, const std::array<double, 2>& lo, const std::array<double, 2>& hi) {
  return box_average(psi, std::span<const double>(lo), std::span<const double>(hi));
}

double pushforward_integral(const ConditionalFamily& fam, const TorusConjugacy& H, const TestFunction& psi,
                            const std::function<std::array<double, 2>(double, double)>& sigma) {
  const std::size_t nb = fam.n_base();
  const std::size_t nf = fam.n_fiber();
  const double hb = 0.5 / static_cast<double>(nb);
  const double hf = 0.5 / static_cast<double>(nf);
  const Field<2>& w = fam.mu.nodes.weights();
  double acc = 0.0;
  for (std::size_t i = 0; i < nb; ++i) {
    const double x0 = static_cast<double>(i) / static_cast<double>(nb);
    for (std::size_t k = 0; k < nf; ++k) {
      const double y0 = static_cast<double>(k) / static_cast<double>(nf);
      const auto [x, y] = sigma ? sigma(x0, y0) : std::array<double, 2>{x0, y0};
      double u0 = H.base(x - hb);
      double u1 = H.base(x + hb);
      double v0 = H.fiber_value(x, y - hf);
      double v1 = H.fiber_value(x, y + hf);
      acc += w.at({i, k}) * box_average(psi, {std::min(u0, u1), std::min(v0, v1)}, {std::max(u0, u1), std::max(v0, v1)});
    }
  }
  return acc;
}

double pushforward_integral(const ConditionalFamily& fam, const TorusConjugacy& H, const TestFunction& psi) {
  return pushforward_integral(fam, H, psi, nullptr);
}

std::vector<double> fiber_transport_errors(const ConditionalFamily& fam, const TorusConjugacy& H) {
  const std::size_t nb = fam.n_base();
  const std::size_t nf = fam.n_fiber();
  const double hf = 0.5 / static_cast<double>(nf);
  std::vector<double> out(nb, 0.0);
  const std::vector<TestFunction> suite = fiber_test_suite();
  for (std::size_t i = 0; i < nb; ++i) {
    const NodeCdf& c = H.fibers[i];
    for (const TestFunction& psi : suite) {
      const TestFunction lifted{psi.name, {0, psi.freq[0]}, psi.is_sine};
      double acc = 0.0;
      for (std::size_t k = 0; k < nf; ++k) {
        const double y = static_cast<double>(k) / static_cast<double>(nf);
        acc += fam.mu_x.at({i, k}) * box_average(lifted, {0.0, c(y - hf)}, {0.0, c(y + hf)});
      }
      out[i] = std::max(out[i], std::abs(acc));
    }
  }
  return out;
}

double lebesgue_pullback_integral(const SkewProductMap& F, const TestFunction& psi) {
  const std::size_t nb = F.n_base();
  const std::size_t nf = F.n_fiber();
  double acc = 0.0;
  for (std::size_t j = 0; j < nb; ++j) {
    const double u = (static_cast<double>(j) + 0.5) / static_cast<double>(nb);
    const double fu = F.f_value(u);
    for (std::size_t k = 0; k < nf; ++k) {
      const double v = (static_cast<double>(k) + 0.5) / static_cast<double>(nf);
      const double p[2] = {fu, F.g_value(u, v)};
      acc += psi(p);
    }
  }
  return acc / static_cast<double>(nb * nf);
}

}  // namespace eqconj
