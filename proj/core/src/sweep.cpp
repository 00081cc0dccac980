#include "aeqnd/sweep.hpp"

#include <cstdlib>

namespace aeqnd {

int resolve_workers(int requested) {
  int n = std::max(1, requested);
  if (const char* env = std::getenv(kMaxWorkersEnv)) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && cap > 0) n = std::min<long>(n, cap);
  }
  return n;
}

}  // namespace aeqnd
