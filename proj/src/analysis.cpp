#include "eqconj/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "eqconj/errors.hpp"

namespace eqconj {

MarkovPartition::MarkovPartition(long d) : d_(d) {
  if (d < 2) throw InvalidArgument("MarkovPartition: d must be at least 2");
  for (long k = 0; k <= d; ++k) breaks_.push_back(static_cast<double>(k) / static_cast<double>(d));
}

int MarkovPartition::symbol(double x) const {
  const double t = wrap01(x);
  const int k = static_cast<int>(std::floor(static_cast<double>(d_) * t));
  return std::clamp(k, 0, static_cast<int>(d_) - 1);
}

bool MarkovPartition::is_markov() const {
  if (breaks_.front() != 0.0 || breaks_.back() != 1.0) return false;
  for (std::size_t k = 0; k + 1 < breaks_.size(); ++k) {
    if (!(breaks_[k + 1] > breaks_[k])) return false;
    // E_d maps [a, b) onto [d a, d b), which has length 1 exactly.
    const double image = static_cast<double>(d_) * (breaks_[k + 1] - breaks_[k]);
    if (std::abs(image - 1.0) > 1e-15) return false;
  }
  return true;
}

std::vector<int> coding(double x, long d, std::size_t n_symbols) {
  const MarkovPartition p(d);
  std::vector<int> out;
  out.reserve(n_symbols);
  double t = wrap01(x);
  for (std::size_t j = 0; j < n_symbols; ++j) {
    out.push_back(p.symbol(t));
    t = wrap01(static_cast<double>(d) * t);
  }
  return out;
}

std::vector<int> coding_rational(std::int64_t p, std::int64_t q, long d, std::size_t n_symbols) {
  if (q <= 0) throw InvalidArgument("coding_rational: denominator must be positive");
  if (d < 2) throw InvalidArgument("coding_rational: d must be at least 2");
  std::int64_t r = ((p % q) + q) % q;
  std::vector<int> out;
  out.reserve(n_symbols);
  for (std::size_t j = 0; j < n_symbols; ++j) {
    const std::int64_t dr = static_cast<std::int64_t>(d) * r;
    out.push_back(static_cast<int>(dr / q));
    r = dr % q;
  }
  return out;
}

std::string CircleSymmetry::describe() const {
  std::ostringstream os;
  os.precision(12);
  os << (reversing ? "x -> -x + " : "x -> x + ") << a;
  return os.str();
}

double commutation_defect(const CircleSymmetry& s, long d) {
  constexpr int kSamples = 64;
  const double dd = static_cast<double>(d);
  double out = 0.0;
  for (int i = 0; i < kSamples; ++i) {
    const double x = wrap01(static_cast<double>(i) / kSamples + 0.3819660112501051 / kSamples);
    out = std::max(out, torus_distance(s(wrap01(dd * x)), wrap01(dd * s(x))));
  }
  return out;
}

namespace {

double golden_min(const std::function<double(double)>& f, double lo, double hi) {
  const double r = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo;
  double b = hi;
  double c = b - r * (b - a);
  double e = a + r * (b - a);
  double fc = f(c);
  double fe = f(e);
  for (int it = 0; it < 200 && b - a > 1e-15; ++it) {
    if (fc <= fe) {
      b = e;
      e = c;
      fe = fc;
      c = b - r * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = e;
      fc = fe;
      e = a + r * (b - a);
      fe = f(e);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

SymmetryAudit enumerate_symmetries(long d, std::size_t resolution, double tol) {
  if (d < 2) throw InvalidArgument("enumerate_symmetries: d must be at least 2");
  if (resolution < 4096) throw InvalidArgument("enumerate_symmetries: search_resolution must be at least 4096");
  SymmetryAudit out;
  out.d = d;
  out.resolution = resolution;
  out.tol = tol;
  out.claimed_count = 2 * static_cast<std::size_t>(d);
  const double res = static_cast<double>(resolution);

  for (bool rev : {false, true}) {
    auto defect = [&](double a) { return commutation_defect({rev, wrap01(a)}, d); };
    std::vector<double> scan(resolution);
    for (std::size_t i = 0; i < resolution; ++i) scan[i] = defect(static_cast<double>(i) / res);
    std::vector<CircleSymmetry> cls;
    for (std::size_t i = 0; i < resolution; ++i) {
      const double prev = scan[(i + resolution - 1) % resolution];
      const double next = scan[(i + 1) % resolution];
      if (!(scan[i] <= prev && scan[i] < next)) continue;
      const double c = static_cast<double>(i) / res;
      double a = golden_min(defect, c - 1.0 / res, c + 1.0 / res);
      // Snap to the scan node when it already meets the tolerance.
      if (defect(c) <= defect(a)) a = c;
      if (defect(a) > tol) continue;
      const CircleSymmetry s{rev, wrap01(a) >= 1.0 - 0.5 * tol ? 0.0 : wrap01(a)};
      const bool dup = std::any_of(cls.begin(), cls.end(),
                                   [&](const CircleSymmetry& o) { return torus_distance(o.a, s.a) <= tol; });
      if (!dup) {
        cls.push_back(s);
        out.max_defect = std::max(out.max_defect, defect(s.a));
      }
    }
    std::sort(cls.begin(), cls.end(), [](const CircleSymmetry& x, const CircleSymmetry& y) { return x.a < y.a; });
    out.found.insert(out.found.end(), cls.begin(), cls.end());
    for (long k = 0; k < d - 1; ++k) out.algebraic.push_back({rev, static_cast<double>(k) / static_cast<double>(d - 1)});
  }

  out.agrees = out.found.size() == out.algebraic.size();
  for (std::size_t i = 0; out.agrees && i < out.found.size(); ++i) {
    out.agrees = out.found[i].reversing == out.algebraic[i].reversing &&
                 torus_distance(out.found[i].a, out.algebraic[i].a) <= tol;
  }
  std::ostringstream os;
  os << "d = " << d << ": brute force found " << out.found.size() << " symmetries commuting with E_d ("
     << out.found.size() / 2 << " orientation preserving, " << out.found.size() - out.found.size() / 2
     << " reversing); the claimed count 2d is " << out.claimed_count << "; "
     << (out.found.size() == out.claimed_count ? "counts agree" : "counts differ");
  out.diagnostic = os.str();
  return out;
}

std::vector<OrbitCandidate> conjugacy_orbit(const ConditionalFamily& fam, const TorusConjugacy& H,
                                            const SkewProductMap& F, const std::vector<CircleSymmetry>& base,
                                            const std::vector<CircleSymmetry>& fiber, double transport_tol) {
  const std::size_t nb = H.n_base();
  const std::size_t nf = H.n_fiber();
  const CircleGrid gb(nb);
  const CircleGrid gf(nf);
  const double dd = static_cast<double>(F.d);
  const std::vector<TestFunction> suite = torus_test_suite();
  std::vector<OrbitCandidate> out;
  for (const CircleSymmetry& sb : base) {
    for (const CircleSymmetry& sf : fiber) {
      OrbitCandidate c;
      c.base = sb;
      c.fiber = sf;
      auto Hp = [&](double x, double y) { return H(sb(x), sf(y)); };
      for (std::size_t i = 0; i < nb; ++i) {
        const double x = gb.point(i);
        for (std::size_t k = 0; k < nf; ++k) {
          const double y = gf.point(k);
          const auto h = Hp(x, y);
          const auto lhs = F(h[0], h[1]);
          const auto rhs = Hp(wrap01(dd * x), wrap01(dd * y));
          c.conjugacy_error = std::max(
              {c.conjugacy_error, torus_distance(lhs[0], rhs[0]), torus_distance(lhs[1], rhs[1])});
        }
      }
      const auto sigma = [&](double x, double y) { return std::array<double, 2>{sb(x), sf(y)}; };
      for (const TestFunction& psi : suite) {
        c.transport_error = std::max(c.transport_error, std::abs(pushforward_integral(fam, H, psi, sigma)));
      }
      c.transports_mu = c.transport_error <= transport_tol;
      c.label = "(" + sb.describe() + ") x (" + sf.describe() + "): " +
                (c.transports_mu ? "transports mu" : "transports sigma^{-1}_* mu");
      out.push_back(std::move(c));
    }
  }
  return out;
}

}  // namespace eqconj
