#ifndef MSHLAB_RNG_HPP
#define MSHLAB_RNG_HPP

#include <atomic>
#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <thread>
#include <vector>

#include "mshlab/errors.hpp"
#include "mshlab/setting.hpp"

namespace mshlab {

namespace detail {
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}
}  // namespace detail

// Stateless counter-based generator: the value at a counter depends only on
// (seed, stream, counter), so any partition of the counter range across
// threads reproduces the serial draw sequence exactly.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream)
      : key_(detail::mix64(seed ^ detail::mix64(stream ^ 0xa5a5a5a5a5a5a5a5ULL))) {}

  std::uint64_t bits(std::uint64_t counter) const { return detail::mix64(key_ ^ detail::mix64(counter)); }

  // Uniform in [0, 1).
  double uniform(std::uint64_t counter) const {
    return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53;
  }

  // Standard normal pair by Box-Muller; consumes counters 2c and 2c+1.
  void gaussianPair(std::uint64_t c, double& g0, double& g1) const {
    const double u1 = std::max(uniform(2 * c), 0x1.0p-60);
    const double u2 = uniform(2 * c + 1);
    const double rad = std::sqrt(-2.0 * std::log(u1));
    g0 = rad * std::cos(2.0 * kPi * u2);
    g1 = rad * std::sin(2.0 * kPi * u2);
  }

 private:
  std::uint64_t key_;
};

// Monte Carlo controls shared by every sampling routine.
struct MCConfig {
  std::uint64_t seed = 42;
  std::uint64_t samplesPerShell = 200000;
  int shells = 32;
  int parallelism = 0;  // 0 = one worker per hardware thread
  bool forceMonteCarlo = false;
  std::string rngScheme = "counter-splitmix-v1";

  int workerCount() const {
    if (parallelism < 0) throw InvalidInput("parallelism must be non-negative");
    if (parallelism > 0) return parallelism;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
  }

  void validate() const {
    if (rngScheme != "counter-splitmix-v1")
      throw InvalidInput("unknown rng scheme: " + rngScheme);
    if (samplesPerShell == 0) throw InvalidInput("samplesPerShell must be positive");
    if (shells < 1) throw InvalidInput("shells must be positive");
    (void)workerCount();
  }
};

// Accumulated moments of one work chunk.
struct ChunkStats {
  double sum = 0.0;
  double sumSq = 0.0;
  std::uint64_t count = 0;
};

struct MeanStats {
  double mean = 0.0;
  double stderrOfMean = 0.0;
  std::uint64_t count = 0;
};

// Runs chunkFn(chunk) for chunk = 0..chunks-1 on a worker pool and merges
// results in chunk order, so the outcome is identical for any worker count.
inline std::vector<ChunkStats> runChunks(int chunks,
                                         const std::function<ChunkStats(int)>& chunkFn,
                                         int workers) {
  std::vector<ChunkStats> results(chunks);
  if (workers <= 1 || chunks <= 1) {
    for (int i = 0; i < chunks; ++i) results[i] = chunkFn(i);
    return results;
  }
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int i = next.fetch_add(1); i < chunks; i = next.fetch_add(1)) results[i] = chunkFn(i);
  };
  std::vector<std::thread> pool;
  const int k = std::min(workers, chunks);
  pool.reserve(k);
  for (int t = 0; t < k; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  return results;
}

inline MeanStats mergeChunks(const std::vector<ChunkStats>& chunks) {
  double sum = 0.0, sumSq = 0.0;
  std::uint64_t n = 0;
  for (const auto& c : chunks) {
    sum += c.sum;
    sumSq += c.sumSq;
    n += c.count;
  }
  MeanStats m;
  m.count = n;
  if (n == 0) return m;
  m.mean = sum / static_cast<double>(n);
  const double var = std::max(0.0, sumSq / static_cast<double>(n) - m.mean * m.mean);
  m.stderrOfMean = std::sqrt(var / static_cast<double>(n));
  return m;
}

}  // namespace mshlab

#endif
