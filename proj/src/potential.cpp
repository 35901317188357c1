#include "eqconj/potential.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

namespace eqconj {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

long positive_mod(long a, long m) { return ((a % m) + m) % m; }

}  // namespace

TrigTerm TrigTerm::sine(double amp, std::vector<long> freq) {
  return {amp, std::move(freq), -std::numbers::pi / 2.0};
}

TrigPotential::TrigPotential(std::size_t dim, std::vector<TrigTerm> terms)
    : dim_(dim), terms_(std::move(terms)) {
  if (dim_ < 1 || dim_ > 3) throw InvalidArgument("potential dimension must be 1, 2 or 3");
  for (const TrigTerm& t : terms_) {
    if (t.freq.size() != dim_) throw InvalidArgument("trig term frequency length differs from dimension");
    if (!std::isfinite(t.amplitude) || !std::isfinite(t.phase)) {
      throw InvalidArgument("trig term amplitude/phase must be finite");
    }
  }
}

double TrigPotential::operator()(std::span<const double> x) const {
  double acc = 0.0;
  for (const TrigTerm& t : terms_) {
    double s = 0.0;
    for (std::size_t a = 0; a < dim_; ++a) s += static_cast<double>(t.freq[a]) * wrap01(x[a]);
    acc += t.amplitude * std::cos(kTwoPi * wrap01(s) + t.phase);
  }
  return acc;
}

template <std::size_t D>
Field<D> TrigPotential::sample(const Shape<D>& lattice) const {
  if (D != dim_) throw InvalidArgument("TrigPotential::sample: dimension mismatch");
  Field<D> out(lattice, 0.0);
  long period = 1;
  for (std::size_t a = 0; a < D; ++a) period = std::lcm(period, static_cast<long>(lattice[a]));
  std::vector<double> table(static_cast<std::size_t>(period));
  for (const TrigTerm& t : terms_) {
    for (long k = 0; k < period; ++k) {
      table[static_cast<std::size_t>(k)] =
          t.amplitude * std::cos(kTwoPi * static_cast<double>(k) / static_cast<double>(period) + t.phase);
    }
    std::array<long, D> step;
    for (std::size_t a = 0; a < D; ++a) {
      step[a] = positive_mod(t.freq[a] * (period / static_cast<long>(lattice[a])), period);
    }
    Shape<D> idx{};
    for (std::size_t flat = 0; flat < out.size(); ++flat) {
      std::size_t r = flat;
      long k = 0;
      for (std::size_t a = D; a-- > 0;) {
        idx[a] = r % lattice[a];
        r /= lattice[a];
        k = (k + step[a] * static_cast<long>(idx[a])) % period;
      }
      out[flat] += table[static_cast<std::size_t>(k)];
    }
  }
  return out;
}

template Field<1> TrigPotential::sample<1>(const Shape<1>&) const;
template Field<2> TrigPotential::sample<2>(const Shape<2>&) const;
template Field<3> TrigPotential::sample<3>(const Shape<3>&) const;

TrigPotential TrigPotential::sum(const TrigPotential& other) const {
  if (other.dim_ != dim_) throw InvalidArgument("TrigPotential::sum: dimension mismatch");
  std::vector<TrigTerm> t = terms_;
  t.insert(t.end(), other.terms_.begin(), other.terms_.end());
  return TrigPotential(dim_, std::move(t));
}

TrigPotential TrigPotential::compose_times(long d) const {
  std::vector<TrigTerm> t = terms_;
  for (TrigTerm& term : t) {
    for (long& f : term.freq) f *= d;
  }
  return TrigPotential(dim_, std::move(t));
}

TrigPotential TrigPotential::scaled(double s) const {
  std::vector<TrigTerm> t = terms_;
  for (TrigTerm& term : t) term.amplitude *= s;
  return TrigPotential(dim_, std::move(t));
}

double TrigPotential::oscillation(std::size_t per_axis) const {
  if (terms_.empty()) return 0.0;
  std::vector<double> v;
  if (dim_ == 1) v = sample<1>({per_axis}).storage();
  if (dim_ == 2) v = sample<2>({per_axis, per_axis}).storage();
  if (dim_ == 3) {
    const std::size_t n = std::min<std::size_t>(per_axis, 64);
    v = sample<3>({n, n, n}).storage();
  }
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return *hi - *lo;
}

std::string TrigPotential::describe() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  os.precision(6);
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    const TrigTerm& t = terms_[i];
    if (i > 0) os << " + ";
    os << t.amplitude << "*cos(2pi(";
    for (std::size_t a = 0; a < t.freq.size(); ++a) os << (a ? "," : "") << t.freq[a];
    os << ").x";
    if (t.phase != 0.0) os << (t.phase > 0 ? "+" : "") << t.phase;
    os << ")";
  }
  return os.str();
}

double TestFunction::operator()(std::span<const double> x) const {
  double s = 0.0;
  for (std::size_t a = 0; a < freq.size(); ++a) s += static_cast<double>(freq[a]) * wrap01(x[a]);
  const double angle = kTwoPi * wrap01(s);
  return is_sine ? std::sin(angle) : std::cos(angle);
}

namespace {

std::vector<TestFunction> suite(const std::vector<std::vector<long>>& freqs) {
  std::vector<TestFunction> out;
  for (const auto& f : freqs) {
    std::string tag;
    for (std::size_t a = 0; a < f.size(); ++a) tag += (a ? "," : "") + std::to_string(f[a]);
    out.push_back({"cos(" + tag + ")", f, false});
    out.push_back({"sin(" + tag + ")", f, true});
  }
  return out;
}

}  // namespace

std::vector<TestFunction> torus_test_suite() {
  return suite({{1, 0}, {0, 1}, {1, 1}, {1, -1}, {2, 0}, {0, 2}, {2, 1}, {1, 2}});
}

std::vector<TestFunction> fiber_test_suite() { return suite({{1}, {2}, {3}, {4}}); }

std::vector<TestFunction> t3_test_suite() {
  return suite({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 1, 1}});
}

}  // namespace eqconj
