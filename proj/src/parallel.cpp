#include "blockcoh/parallel.hpp"

#include <charconv>
#include <cstdlib>
#include <cstring>

namespace blockcoh {

unsigned default_thread_count() {
  const char* env = std::getenv("BLOCKFRAME_THREADS");
  if (!env) return 1;
  unsigned v = 0;
  const char* end = env + std::strlen(env);
  const auto [p, ec] = std::from_chars(env, end, v);
  if (ec != std::errc() || p != end || v == 0) return 1;
  return v;
}

}  // namespace blockcoh
