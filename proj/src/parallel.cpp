#include "maxspec/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>

namespace maxspec {

std::size_t thread_count() {
  if (const char* env = std::getenv("MAXSPEC_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v >= 1) return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
      // fall through to the default
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return std::clamp<std::size_t>(hw == 0 ? 1 : hw, 1, 8);
}

}  // namespace maxspec
