#include <atomic>
#include <stdexcept>
#include <vector>

#include "doctest.h"

#include "phmm/parallel.hpp"

TEST_CASE("every index runs exactly once") {
  for (unsigned w : {1u, 2u, 5u}) {
    phmm::WorkerPool pool(w);
    CHECK(pool.size() == w);
    std::vector<std::atomic<int>> hits(1000);
    phmm::parallel_for(&pool, hits.size(), [&](std::size_t i) { ++hits[i]; });
    for (const auto& h : hits) REQUIRE(h.load() == 1);
  }
}

TEST_CASE("the pool is reusable and handles empty loops") {
  phmm::WorkerPool pool(3);
  std::atomic<long> sum{0};
  for (int round = 0; round < 20; ++round) {
    pool.run(100, [&](std::size_t i) { sum += static_cast<long>(i); });
  }
  CHECK(sum == 20 * 4950);
  pool.run(0, [](std::size_t) { FAIL("should not run"); });
}

TEST_CASE("the lowest failing index is rethrown") {
  phmm::WorkerPool pool(4);
  std::atomic<int> ran{0};
  try {
    pool.run(200, [&](std::size_t i) {
      ++ran;
      if (i == 17 || i == 150) throw std::runtime_error(std::to_string(i));
    });
    FAIL("expected an exception");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()) == "17");
  }
  CHECK(ran == 200);
  // still usable afterwards
  std::atomic<int> again{0};
  pool.run(10, [&](std::size_t) { ++again; });
  CHECK(again == 10);
}

TEST_CASE("nested loops run inline") {
  phmm::WorkerPool pool(3);
  std::vector<std::atomic<int>> hits(64);
  phmm::parallel_for(&pool, 8, [&](std::size_t i) {
    phmm::parallel_for(&pool, 8, [&](std::size_t j) { ++hits[i * 8 + j]; });
  });
  for (const auto& h : hits) REQUIRE(h.load() == 1);
}

TEST_CASE("serial fallback") {
  std::vector<int> order;
  phmm::parallel_for(nullptr, 5, [&](std::size_t i) { order.push_back(static_cast<int>(i)); });
  CHECK(order == std::vector<int>{0, 1, 2, 3, 4});
}
