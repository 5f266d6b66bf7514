#pragma once

#include <functional>

namespace dspass {

/// Process-wide worker budget for kernel-internal parallelism. Thread count
/// never changes results: work is partitioned per output element and each
/// element is computed with the documented accumulation order.
void set_num_threads(int n);
int num_threads();

/// Runs fn(i) for i in [0, n). Splits across up to num_threads() workers
/// when the range is large enough; otherwise runs inline. Nested calls from
/// inside a worker run serially.
void parallel_for(int n, const std::function<void(int)>& fn);

/// Marks the current thread as a parallel worker for its lifetime so nested
/// parallel_for calls stay serial.
class WorkerScope {
 public:
  WorkerScope();
  ~WorkerScope();
  WorkerScope(const WorkerScope&) = delete;
  WorkerScope& operator=(const WorkerScope&) = delete;
};

}  // namespace dspass
