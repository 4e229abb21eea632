#include "nildist/kernels.hpp"

#include <cstdio>
#include <cstdlib>

namespace nildist::kernels {

namespace detail {
extern const Ops scalar_table;
#if defined(NILDIST_WITH_AVX2)
extern const Ops avx2_table;
#endif
}  // namespace detail

namespace {

[[maybe_unused]] bool cpu_has_avx2() {
#if defined(NILDIST_WITH_AVX2) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const Ops* lookup(std::string_view name) {
  if (name == "scalar") return &detail::scalar_table;
#if defined(NILDIST_WITH_AVX2)
  if (name == "avx2" && cpu_has_avx2()) return &detail::avx2_table;
#endif
  return nullptr;
}

const Ops* pick_active() {
  if (const char* env = std::getenv("NILDIST_KERNELS"); env && *env) {
    if (const Ops* t = lookup(env)) return t;
    std::fprintf(stderr, "nildist: NILDIST_KERNELS=%s not usable, using default\n",
                 env);
  }
#if defined(NILDIST_WITH_AVX2)
  if (cpu_has_avx2()) return &detail::avx2_table;
#endif
  return &detail::scalar_table;
}

}  // namespace

const Ops& scalar_ops() { return detail::scalar_table; }

const Ops& active() {
  static const Ops* table = pick_active();
  return *table;
}

const Ops* find(std::string_view name) { return lookup(name); }

std::vector<const Ops*> available() {
  std::vector<const Ops*> out{&detail::scalar_table};
#if defined(NILDIST_WITH_AVX2)
  if (cpu_has_avx2()) out.push_back(&detail::avx2_table);
#endif
  return out;
}

}  // namespace nildist::kernels
