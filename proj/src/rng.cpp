#include "eekit/rng.hpp"

#include "eekit/errors.hpp"

namespace eekit {

std::uint64_t SampleRng::bounded(std::uint64_t n) {
  if (n == 0) throw InternalError("SampleRng::bounded: n must be > 0");
  // Reject draws below 2^64 mod n, then reduce. Unbiased for any n.
  const std::uint64_t threshold = (0 - n) % n;
  for (;;) {
    const std::uint64_t r = gen_();
    if (r >= threshold) return r % n;
  }
}

}  // namespace eekit
