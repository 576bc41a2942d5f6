#pragma once

#if defined(__GLIBC__)
#include <malloc.h>
#endif

namespace msglance::cli {

// Training reallocates multi-megabyte activations every step. glibc would
// serve each one with a fresh mmap and page-fault it in; keep them on the heap.
inline void keep_large_blocks_on_heap() {
#if defined(__GLIBC__)
  mallopt(M_MMAP_THRESHOLD, 256 << 20);
  mallopt(M_TRIM_THRESHOLD, 512 << 20);
#endif
}

}  // namespace msglance::cli
