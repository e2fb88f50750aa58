#include "transpin/kernels.hpp"

#include <charconv>
#include <cstdlib>
#include <string>
#include <string_view>

#include "transpin/errors.hpp"

namespace transpin::kernels {

namespace {
int g_default_threads = 0;
}

void set_thread_cap(int threads) {
#ifdef _OPENMP
  if (g_default_threads == 0) g_default_threads = omp_get_max_threads();
  omp_set_num_threads(threads > 0 ? threads : g_default_threads);
#else
  (void)threads;
#endif
}

int thread_cap_from_env() {
  const char* raw = std::getenv("TRANSPIN_THREADS");
  if (raw == nullptr || *raw == '\0') return 0;
  const std::string_view s(raw);
  int value = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size() || value < 0) {
    throw ConfigError("TRANSPIN_THREADS must be a non-negative integer, got '" +
                      std::string(s) + "'");
  }
  return value;
}

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace transpin::kernels
