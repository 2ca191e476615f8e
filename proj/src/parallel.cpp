#include "ust/harness/parallel.hpp"

#include <cstdlib>
#include <string>

namespace ust {

int default_worker_count() {
  if (const char* env = std::getenv("UST_WORKERS")) {
    try {
      const int v = std::stoi(env);
      if (v >= 1) return v;
    } catch (...) {
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : int(hw);
}

}  // namespace ust
