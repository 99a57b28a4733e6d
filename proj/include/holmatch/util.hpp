#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace holmatch {

uint64_t fnv1a64(std::string_view bytes);
std::string hex64(uint64_t v);

std::string read_file(const std::string& path);       // throws IoError
void write_file(const std::string& path, std::string_view content);
bool file_exists(const std::string& path);

// Runs fn(begin, end) over [0, n) split into contiguous chunks, one worker
// per chunk.  jobs <= 1 degenerates to a direct call; exceptions propagate.
void parallel_for(size_t n, int jobs,
                  const std::function<void(size_t, size_t)>& fn);

int default_jobs();

// Deterministic RNG: mt19937_64 driven through our own derivation helpers so
// sequences are identical across platforms (std distributions are not).
class Rng {
 public:
  explicit Rng(uint64_t seed) : eng_(seed) {}

  uint64_t next_u64() { return eng_(); }

  // Uniform in [0, n); n > 0.
  uint64_t below(uint64_t n) { return next_u64() % n; }

  // Uniform double in [0, 1).
  double unit() { return (next_u64() >> 11) * 0x1.0p-53; }

  bool chance(double p) { return unit() < p; }

  template <class T>
  const T& pick(const std::vector<T>& v) {
    return v[below(v.size())];
  }

  // Index drawn proportionally to non-negative weights.
  size_t pick_weighted(const std::vector<double>& weights);

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
  }

  Rng fork() { return Rng(next_u64() ^ 0x5851f42d4c957f2dULL); }

 private:
  std::mt19937_64 eng_;
};

}  // namespace holmatch
