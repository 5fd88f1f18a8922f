#include <gtest/gtest.h>

#include <atomic>
#include <vector>

#include "panic_lab/parallel.hpp"

using namespace panic_lab;

TEST(ThreadPool, EveryIndexVisitedOnce) {
  for (unsigned threads : {1u, 2u, 3u, 8u}) {
    ThreadPool pool(threads);
    for (std::size_t n : {0u, 1u, 7u, 100u, 1001u}) {
      std::vector<std::atomic<int>> hits(n);
      pool.parallel_for(n, [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) hits[i]++;
      });
      for (std::size_t i = 0; i < n; ++i) EXPECT_EQ(hits[i], 1) << threads << " " << n;
    }
  }
}

TEST(ThreadPool, ReusableAcrossManyJobs) {
  ThreadPool pool(4);
  std::atomic<long> total{0};
  for (int job = 0; job < 500; ++job) {
    pool.parallel_for(64, [&](std::size_t b, std::size_t e) {
      total += static_cast<long>(e - b);
    });
  }
  EXPECT_EQ(total, 500 * 64);
}

TEST(ResolveThreads, ZeroMeansHardware) {
  EXPECT_GE(resolve_threads(0), 1u);
  EXPECT_EQ(resolve_threads(3), 3u);
}
