#pragma once

#include "fdwifi/kernels.hpp"

namespace fdwifi::kernels::detail {

extern const Table kScalarTable;
#if defined(FDWIFI_HAVE_AVX2_TU)
extern const Table kAvx2Table;
#endif

}  // namespace fdwifi::kernels::detail
