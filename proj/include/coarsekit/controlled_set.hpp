#pragma once

#include <algorithm>
#include <optional>
#include <queue>
#include <stdexcept>
#include <utility>
#include <vector>

#include "layout.hpp"

namespace coarsekit {

/// A finite relation on a generalized box space, block-diagonal across
/// components. Pairs are kept sorted and deduplicated, so equality of
/// relations is plain vector equality.
struct ControlledSet {
	std::vector<std::pair<Point, Point>> pairs;

	ControlledSet() = default;
	explicit ControlledSet(std::vector<std::pair<Point, Point>> p) : pairs(std::move(p)) {
		std::sort(pairs.begin(), pairs.end());
		pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
	}

	std::size_t size() const { return pairs.size(); }
	bool empty() const { return pairs.empty(); }
	bool contains(Point x, Point y) const {
		return std::binary_search(pairs.begin(), pairs.end(), std::make_pair(x, y));
	}

	bool operator==(const ControlledSet& o) const { return pairs == o.pairs; }
	bool operator!=(const ControlledSet& o) const { return pairs != o.pairs; }
};

inline ControlledSet cs_diagonal(const ComponentLayout& layout) {
	std::vector<std::pair<Point, Point>> p;
	p.reserve(layout.total());
	for (Point x = 0; x < layout.total(); ++x) p.emplace_back(x, x);
	return ControlledSet(std::move(p));
}

/// Every pair must lie inside a single component.
inline bool cs_block_diagonal(const ControlledSet& t, const ComponentLayout& layout) {
	for (const auto& [x, y] : t.pairs) {
		if (!layout.contains(x) || !layout.contains(y)) return false;
		if (layout.component_of(x) != layout.component_of(y)) return false;
	}
	return true;
}

inline bool cs_subset(const ControlledSet& a, const ControlledSet& b) {
	return std::includes(b.pairs.begin(), b.pairs.end(), a.pairs.begin(), a.pairs.end());
}

inline ControlledSet cs_union(const ControlledSet& a, const ControlledSet& b) {
	std::vector<std::pair<Point, Point>> out;
	out.reserve(a.pairs.size() + b.pairs.size());
	std::set_union(a.pairs.begin(), a.pairs.end(), b.pairs.begin(), b.pairs.end(),
	               std::back_inserter(out));
	return ControlledSet(std::move(out));
}

inline ControlledSet cs_inverse(const ControlledSet& t) {
	std::vector<std::pair<Point, Point>> out;
	out.reserve(t.pairs.size());
	for (const auto& [x, y] : t.pairs) out.emplace_back(y, x);
	return ControlledSet(std::move(out));
}

namespace detail {
/// Index a relation by its second coordinate: for each z, the list of x
/// with (x, z) in T.
inline std::vector<std::vector<Point>> rows_by_col(const ControlledSet& t, int total) {
	std::vector<std::vector<Point>> idx(total);
	for (const auto& [x, y] : t.pairs) idx[y].push_back(x);
	return idx;
}
} // namespace detail

/// T1 o T2 = {(x, y) : exists z with (x, z) in T1 and (z, y) in T2}.
inline ControlledSet cs_compose(const ControlledSet& t1, const ControlledSet& t2) {
	Point top = 0;
	for (const auto& [x, y] : t1.pairs) top = std::max({top, x, y});
	for (const auto& [x, y] : t2.pairs) top = std::max({top, x, y});
	const auto left = detail::rows_by_col(t1, top + 1);
	std::vector<std::pair<Point, Point>> out;
	for (const auto& [z, y] : t2.pairs)
		for (Point x : left[z]) out.emplace_back(x, y);
	return ControlledSet(std::move(out));
}

inline ControlledSet cs_power(const ControlledSet& t, int n) {
	if (n < 1) throw std::invalid_argument("cs_power: n must be >= 1");
	ControlledSet acc = t;
	for (int i = 1; i < n; ++i) acc = cs_compose(acc, t);
	return acc;
}

/// T[Y] = {x : exists y in Y with (x, y) in T}.
inline PointSet cs_image(const ControlledSet& t, const PointSet& y) {
	std::vector<Point> out;
	for (const auto& [a, b] : t.pairs)
		if (y.contains(b)) out.push_back(a);
	return PointSet(std::move(out));
}

inline PointSet cs_image(const ControlledSet& t, Point x) {
	return cs_image(t, PointSet::singleton(x));
}

/// Smallest x (in global order) with Y subset of T[x], if any.
inline std::optional<Point> bounded_witness(const PointSet& y, const ControlledSet& t,
                                            const ComponentLayout& layout) {
	if (y.empty()) throw std::invalid_argument("bounded_witness: Y must be nonempty");
	for (Point x = 0; x < layout.total(); ++x) {
		if (ps_subset(y, cs_image(t, x))) return x;
	}
	return std::nullopt;
}

struct DegreeBound {
	int max_row = 0; // max_x #T[x]
	int max_col = 0; // max_x #T^{-1}[x]
};

inline DegreeBound uniform_degree(const ControlledSet& t) {
	Point top = -1;
	for (const auto& [x, y] : t.pairs) top = std::max({top, x, y});
	std::vector<int> row(top + 1, 0), col(top + 1, 0);
	for (const auto& [x, y] : t.pairs) {
		++row[y]; // x ranges over T[y]
		++col[x];
	}
	DegreeBound d;
	for (int v : row) d.max_row = std::max(d.max_row, v);
	for (int v : col) d.max_col = std::max(d.max_col, v);
	return d;
}

constexpr int kInfDist = 1 << 29;

/// Per-component shortest-path metric. Distances between distinct
/// components are treated as infinite; within a component unreachable
/// pairs also report kInfDist (disconnected components are legal).
struct ComponentMetric {
	ComponentLayout layout;
	std::vector<std::vector<int>> dist; // dist[m] is a sizes[m] x sizes[m] matrix, row-major

	ComponentMetric() = default;

	/// Graph metric of a symmetric adjacency relation (diagonal ignored).
	static ComponentMetric from_adjacency(const ComponentLayout& layout, const ControlledSet& adj) {
		ComponentMetric cm;
		cm.layout = layout;
		cm.dist.resize(layout.num_components());
		std::vector<std::vector<int>> nbrs(layout.total());
		for (const auto& [x, y] : adj.pairs)
			if (x != y) nbrs[y].push_back(x);
		for (int m = 0; m < layout.num_components(); ++m) {
			const int n = layout.sizes[m];
			cm.dist[m].assign(static_cast<std::size_t>(n) * n, kInfDist);
			for (int s = 0; s < n; ++s) {
				auto* row = cm.dist[m].data() + static_cast<std::size_t>(s) * n;
				std::queue<int> q;
				row[s] = 0;
				q.push(layout.global(m, s));
				while (!q.empty()) {
					const Point u = q.front();
					q.pop();
					const int du = row[layout.local_of(u)];
					for (Point v : nbrs[u]) {
						const int lv = layout.local_of(v);
						if (row[lv] > du + 1) {
							row[lv] = du + 1;
							q.push(v);
						}
					}
				}
			}
		}
		return cm;
	}

	int d(Point x, Point y) const {
		const int mx = layout.component_of(x);
		if (mx != layout.component_of(y)) return kInfDist;
		return dist[mx][static_cast<std::size_t>(layout.local_of(x)) * layout.sizes[mx] +
		               layout.local_of(y)];
	}

	int component_diameter(int m) const {
		int r = 0;
		for (int v : dist[m]) r = std::max(r, v == kInfDist ? 0 : v);
		return r;
	}

	bool component_connected(int m) const {
		for (int v : dist[m])
			if (v == kInfDist) return false;
		return true;
	}
};

/// {(x, y) : d(x, y) <= R}, per component. R = 0 gives the diagonal.
inline ControlledSet metric_entourage(const ComponentMetric& cm, int r) {
	if (r < 0) throw std::invalid_argument("metric_entourage: R must be >= 0");
	std::vector<std::pair<Point, Point>> out;
	for (int m = 0; m < cm.layout.num_components(); ++m) {
		const int n = cm.layout.sizes[m];
		for (int i = 0; i < n; ++i)
			for (int j = 0; j < n; ++j)
				if (cm.dist[m][static_cast<std::size_t>(i) * n + j] <= r)
					out.emplace_back(cm.layout.global(m, i), cm.layout.global(m, j));
	}
	return ControlledSet(std::move(out));
}

/// N_R(Y) = {x : d(x, Y) <= R}.
inline PointSet neighborhood_R(const ComponentMetric& cm, const PointSet& y, int r) {
	std::vector<Point> out;
	for (Point x = 0; x < cm.layout.total(); ++x)
		for (Point p : y.points)
			if (cm.d(x, p) <= r) {
				out.push_back(x);
				break;
			}
	return PointSet(std::move(out));
}

/// boundary_R(Y) = N_R(Y) \ Y.
inline PointSet boundary_R(const ComponentMetric& cm, const PointSet& y, int r) {
	return ps_minus(neighborhood_R(cm, y, r), y);
}

inline int diameter_of(const ComponentMetric& cm, const PointSet& y) {
	int r = 0;
	for (Point a : y.points)
		for (Point b : y.points) r = std::max(r, cm.d(a, b));
	return r;
}

} // namespace coarsekit
