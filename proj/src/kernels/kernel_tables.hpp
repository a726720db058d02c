#pragma once

#include "xling/kernels.hpp"

namespace xling::kernels::detail {

extern const KernelTable kScalarTable;
#if defined(XLING_HAVE_AVX2)
extern const KernelTable kAvx2Table;
#endif
#if defined(XLING_HAVE_NEON)
extern const KernelTable kNeonTable;
#endif

}  // namespace xling::kernels::detail
