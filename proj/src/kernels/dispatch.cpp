#include <atomic>
#include <cassert>
#include <cstdlib>

#include "eqconj/kernels.hpp"

namespace eqconj::kernels {
namespace {

const KernelTable* by_name(std::string_view name) {
  if (name == "scalar") return &scalar_table();
  if (name == "avx2") return avx2_table();
  if (name == "neon") return neon_table();
  return nullptr;
}

const KernelTable* initial_choice() {
  if (const char* env = std::getenv("EQCONJ_KERNELS")) {
    if (const KernelTable* t = by_name(env)) return t;
  }
  if (const KernelTable* t = avx2_table()) return t;
  if (const KernelTable* t = neon_table()) return t;
  return &scalar_table();
}

std::atomic<const KernelTable*>& slot() {
  static std::atomic<const KernelTable*> current{initial_choice()};
  return current;
}

}  // namespace

const KernelTable& active() { return *slot().load(std::memory_order_acquire); }

bool select(std::string_view name) {
  const KernelTable* t = by_name(name);
  if (t == nullptr) return false;
  slot().store(t, std::memory_order_release);
  return true;
}

std::vector<std::string_view> available() {
  std::vector<std::string_view> names{"scalar"};
  if (avx2_table() != nullptr) names.emplace_back("avx2");
  if (neon_table() != nullptr) names.emplace_back("neon");
  return names;
}

void stencil_gather(std::span<const double> src, std::span<const std::int32_t> idx,
                    std::span<const double> w, std::size_t taps, std::span<double> out) {
  assert(idx.size() == taps * out.size() && w.size() == idx.size());
  active().stencil_gather(src.data(), idx.data(), w.data(), taps, out.size(), out.data());
}

void axpy(double a, std::span<const double> x, std::span<double> y) {
  assert(x.size() == y.size());
  active().axpy(a, x.data(), y.data(), y.size());
}

void hadamard(std::span<const double> a, std::span<const double> b, std::span<double> out) {
  assert(a.size() == out.size() && b.size() == out.size());
  active().hadamard(a.data(), b.data(), out.data(), out.size());
}

void scale(double s, std::span<double> y) { active().scale(s, y.data(), y.size()); }

}  // namespace eqconj::kernels
