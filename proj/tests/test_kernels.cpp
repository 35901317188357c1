#include <doctest.h>

#include <cstring>

#include "eqconj/kernels.hpp"
#include "support.hpp"

using namespace eqconj;

namespace {

std::vector<const kernels::KernelTable*> variants() {
  std::vector<const kernels::KernelTable*> v;
  if (const auto* t = kernels::avx2_table()) v.push_back(t);
  if (const auto* t = kernels::neon_table()) v.push_back(t);
  return v;
}

bool same_bits(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

}  // namespace

TEST_CASE("scalar kernels compute their definitions") {
  const auto& s = kernels::scalar_table();
  std::vector<double> x{1, 2, 3}, y{4, 5, 6}, out(3);
  s.axpy(2.0, x.data(), y.data(), 3);
  CHECK(y == std::vector<double>{6, 9, 12});
  s.hadamard(x.data(), y.data(), out.data(), 3);
  CHECK(out == std::vector<double>{6, 18, 36});
  s.scale(0.5, out.data(), 3);
  CHECK(out == std::vector<double>{3, 9, 18});
  std::vector<double> src{10, 20, 30};
  std::vector<std::int32_t> idx{2, 0, 1, 1};
  std::vector<double> w{0.5, 1.0, 0.25, 2.0};
  std::vector<double> g(2);
  s.stencil_gather(src.data(), idx.data(), w.data(), 2, 2, g.data());
  CHECK(g[0] == doctest::Approx(15 + 5));
  CHECK(g[1] == doctest::Approx(10 + 40));
}

TEST_CASE("vector kernels are bit-identical to scalar") {
  testing::Gen gen(7);
  const auto& s = kernels::scalar_table();
  for (const auto* t : variants()) {
    CAPTURE(t->name);
    for (std::size_t n : {0, 1, 3, 4, 5, 7, 8, 15, 16, 17, 63, 64, 65, 1000}) {
      const auto x = gen.vec(n, -3, 3);
      const auto y0 = gen.vec(n, -3, 3);
      const double a = gen.uniform(-2, 2);

      auto ys = y0, yv = y0;
      s.axpy(a, x.data(), ys.data(), n);
      t->axpy(a, x.data(), yv.data(), n);
      CHECK(same_bits(ys, yv));

      std::vector<double> hs(n), hv(n);
      s.hadamard(x.data(), y0.data(), hs.data(), n);
      t->hadamard(x.data(), y0.data(), hv.data(), n);
      CHECK(same_bits(hs, hv));

      ys = y0;
      yv = y0;
      s.scale(a, ys.data(), n);
      t->scale(a, yv.data(), n);
      CHECK(same_bits(ys, yv));

      const std::size_t taps = 3;
      const std::size_t m = n + 2;
      const auto src = gen.vec(m, -1, 1);
      std::vector<std::int32_t> idx(taps * n);
      for (auto& k : idx) k = static_cast<std::int32_t>(gen.integer(0, static_cast<long>(m) - 1));
      const auto w = gen.vec(taps * n, -1, 1);
      std::vector<double> gs(n), gv(n);
      s.stencil_gather(src.data(), idx.data(), w.data(), taps, n, gs.data());
      t->stencil_gather(src.data(), idx.data(), w.data(), taps, n, gv.data());
      CHECK(same_bits(gs, gv));
    }
  }
}

TEST_CASE("kernel selection") {
  CHECK_FALSE(kernels::select("no-such-variant"));
  CHECK(kernels::select("scalar"));
  CHECK(std::string(kernels::active().name) == "scalar");
  const auto avail = kernels::available();
  CHECK(std::find(avail.begin(), avail.end(), "scalar") != avail.end());
  for (auto name : avail) CHECK(kernels::select(name));
}
