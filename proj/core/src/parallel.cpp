#include "dspass/parallel.hpp"

#include <atomic>
#include <thread>
#include <vector>

#include "dspass/error.hpp"

namespace dspass {

namespace {
std::atomic<int> g_threads{1};
thread_local bool t_in_worker = false;
}  // namespace

void set_num_threads(int n) {
  if (n < 1) throw InvalidInput("thread count must be >= 1");
  g_threads.store(n, std::memory_order_relaxed);
}

int num_threads() { return g_threads.load(std::memory_order_relaxed); }

WorkerScope::WorkerScope() { t_in_worker = true; }
WorkerScope::~WorkerScope() { t_in_worker = false; }

void parallel_for(int n, const std::function<void(int)>& fn) {
  int workers = t_in_worker ? 1 : num_threads();
  if (workers > n) workers = n;
  if (workers <= 1 || n < 2) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  // Static block partition: worker w handles [begin_w, end_w). Each index is
  // processed by exactly one worker, so results match the serial schedule.
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  auto run_block = [&fn](int begin, int end) {
    WorkerScope guard;
    for (int i = begin; i < end; ++i) fn(i);
  };
  int chunk = n / workers;
  int rem = n % workers;
  int begin = 0;
  std::vector<std::pair<int, int>> blocks;
  for (int w = 0; w < workers; ++w) {
    int len = chunk + (w < rem ? 1 : 0);
    blocks.emplace_back(begin, begin + len);
    begin += len;
  }
  for (int w = 1; w < workers; ++w) {
    pool.emplace_back(run_block, blocks[w].first, blocks[w].second);
  }
  run_block(blocks[0].first, blocks[0].second);
  for (auto& t : pool) t.join();
}

}  // namespace dspass
