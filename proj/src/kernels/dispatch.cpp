#include <cstdlib>
#include <string>

#include "kernel_tables.hpp"

namespace xling::kernels {

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::kScalar: return "scalar";
    case Isa::kAvx2: return "avx2";
    case Isa::kNeon: return "neon";
  }
  return "unknown";
}

const KernelTable& scalar_table() { return detail::kScalarTable; }

std::vector<const KernelTable*> available_tables() {
  std::vector<const KernelTable*> tables{&detail::kScalarTable};
#if defined(XLING_HAVE_AVX2)
  __builtin_cpu_init();
  if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) {
    tables.push_back(&detail::kAvx2Table);
  }
#endif
#if defined(XLING_HAVE_NEON)
  // Advanced SIMD is mandatory on AArch64.
  tables.push_back(&detail::kNeonTable);
#endif
  return tables;
}

namespace {

const KernelTable& select_table() {
  const auto tables = available_tables();
  if (const char* forced = std::getenv("XLING_KERNELS"); forced != nullptr && *forced != '\0') {
    for (const KernelTable* t : tables) {
      if (isa_name(t->isa) == forced) return *t;
    }
  }
  return *tables.back();
}

}  // namespace

const KernelTable& active() {
  static const KernelTable& table = select_table();
  return table;
}

}  // namespace xling::kernels
