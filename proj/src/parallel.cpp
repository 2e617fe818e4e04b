#include "elball/parallel.hpp"

#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace elball {

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

int configure_threads_from_env() {
#ifdef _OPENMP
  if (const char* env = std::getenv("ELBALL_THREADS"); env != nullptr && *env != '\0') {
    try {
      const int cap = std::stoi(env);
      if (cap > 0 && cap < omp_get_max_threads()) omp_set_num_threads(cap);
    } catch (const std::exception&) {
      // Malformed values leave the OpenMP default in place.
    }
  }
#endif
  return max_threads();
}

}  // namespace elball
