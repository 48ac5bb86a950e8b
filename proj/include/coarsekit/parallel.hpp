#pragma once

#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace coarsekit {

/// Index-parallel loop. Each f(i) must write only to its own slot, so the
/// merged result is independent of worker count and scheduling.
template <class F>
void parallel_for(std::size_t n, int workers, F&& f) {
	if (workers <= 1 || n <= 1) {
		for (std::size_t i = 0; i < n; ++i) f(i);
		return;
	}
	std::atomic<std::size_t> next{0};
	auto body = [&] {
		while (true) {
			const std::size_t i = next.fetch_add(1);
			if (i >= n) return;
			f(i);
		}
	};
	std::vector<std::thread> pool;
	const int k = std::min<std::size_t>(workers, n);
	pool.reserve(k);
	for (int w = 0; w < k; ++w) pool.emplace_back(body);
	for (auto& t : pool) t.join();
}

} // namespace coarsekit
