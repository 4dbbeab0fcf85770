#pragma once

#include "anisolay/kernels.hpp"

namespace anisolay::kernels::detail {

extern const KernelTable scalar_table;
#if defined(ANISOLAY_HAVE_AVX2)
extern const KernelTable avx2_table;
#endif

}  // namespace anisolay::kernels::detail
