#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace eekit {

// Deterministic RNG for design sampling.
//
// mt19937_64 has a standard-specified output sequence, and bounded draws
// use modulo rejection instead of uniform_int_distribution (whose mapping
// is implementation-defined), so the same seed yields the same design on
// every platform. The algorithm identifier is recorded in plan files.
class SampleRng {
 public:
  static constexpr const char* kAlgorithmId = "mt19937_64+modrej/1";

  explicit SampleRng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next() { return gen_(); }

  // Uniform draw from [0, n), n > 0.
  std::uint64_t bounded(std::uint64_t n);

  int level(int levels) { return static_cast<int>(bounded(static_cast<std::uint64_t>(levels))); }

  // Fisher-Yates, high index down.
  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(bounded(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace eekit
