#pragma once

#include <cstdint>
#include <limits>
#include <queue>
#include <vector>

namespace coarsekit {

/// Dinic max-flow on small networks, int64 capacities.
class MaxFlow {
public:
	explicit MaxFlow(int n) : head_(n, -1), level_(n), it_(n) {}

	void add_edge(int u, int v, std::int64_t cap) {
		edges_.push_back({v, head_[u], cap});
		head_[u] = static_cast<int>(edges_.size()) - 1;
		edges_.push_back({u, head_[v], 0});
		head_[v] = static_cast<int>(edges_.size()) - 1;
	}

	std::int64_t run(int s, int t) {
		std::int64_t flow = 0;
		while (bfs(s, t)) {
			it_ = head_;
			std::int64_t f;
			while ((f = dfs(s, t, kInf)) > 0) flow += f;
		}
		s_ = s;
		return flow;
	}

	/// After run(): vertices reachable from s in the residual graph.
	std::vector<bool> source_side() const {
		std::vector<bool> vis(head_.size(), false);
		std::queue<int> q;
		vis[s_] = true;
		q.push(s_);
		while (!q.empty()) {
			const int u = q.front();
			q.pop();
			for (int e = head_[u]; e >= 0; e = edges_[e].next)
				if (edges_[e].cap > 0 && !vis[edges_[e].to]) {
					vis[edges_[e].to] = true;
					q.push(edges_[e].to);
				}
		}
		return vis;
	}

	static constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max() / 4;

private:
	struct Edge {
		int to;
		int next;
		std::int64_t cap;
	};

	bool bfs(int s, int t) {
		std::fill(level_.begin(), level_.end(), -1);
		std::queue<int> q;
		level_[s] = 0;
		q.push(s);
		while (!q.empty()) {
			const int u = q.front();
			q.pop();
			for (int e = head_[u]; e >= 0; e = edges_[e].next)
				if (edges_[e].cap > 0 && level_[edges_[e].to] < 0) {
					level_[edges_[e].to] = level_[u] + 1;
					q.push(edges_[e].to);
				}
		}
		return level_[t] >= 0;
	}

	std::int64_t dfs(int u, int t, std::int64_t lim) {
		if (u == t) return lim;
		for (int& e = it_[u]; e >= 0; e = edges_[e].next) {
			Edge& ed = edges_[e];
			if (ed.cap > 0 && level_[ed.to] == level_[u] + 1) {
				const std::int64_t f = dfs(ed.to, t, std::min(lim, ed.cap));
				if (f > 0) {
					ed.cap -= f;
					edges_[e ^ 1].cap += f;
					return f;
				}
			}
		}
		return 0;
	}

	std::vector<Edge> edges_;
	std::vector<int> head_, level_, it_;
	int s_ = 0;
};

struct CoverageMin {
	std::int64_t value = 0;      // min over Y (empty allowed) of cost(Y)
	std::vector<int> chosen;     // a minimizing Y, as candidate indices
};

/// Minimize  sum_{x in images(Y)} img_weight[x] - sum_{y in Y} cand_weight[y]
/// over subsets Y of the candidate list, by one s-t min-cut on the
/// coverage network (candidate -> image arcs of infinite capacity).
inline CoverageMin minimize_coverage(const std::vector<std::vector<int>>& images,
                                     const std::vector<std::int64_t>& cand_weight,
                                     const std::vector<std::int64_t>& img_weight) {
	const int nc = static_cast<int>(images.size());
	const int ni = static_cast<int>(img_weight.size());
	const int s = 0, t = 1 + nc + ni;
	MaxFlow mf(t + 1);
	std::int64_t total = 0;
	for (int y = 0; y < nc; ++y) {
		mf.add_edge(s, 1 + y, cand_weight[y]);
		total += cand_weight[y];
		for (int x : images[y]) mf.add_edge(1 + y, 1 + nc + x, MaxFlow::kInf);
	}
	for (int x = 0; x < ni; ++x) mf.add_edge(1 + nc + x, t, img_weight[x]);
	const std::int64_t cut = mf.run(s, t);
	CoverageMin out;
	out.value = cut - total;
	const auto side = mf.source_side();
	for (int y = 0; y < nc; ++y)
		if (side[1 + y]) out.chosen.push_back(y);
	return out;
}

} // namespace coarsekit
