#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace coarsekit {

using Point = std::int32_t;

/// Finite disjoint union of components X_1 | X_2 | ... | X_M.
/// Points are addressed by a single global index; the layout translates
/// between global indices and (component, local index).
struct ComponentLayout {
	std::vector<int> sizes;
	std::vector<int> offsets; // offsets[m] = global index of the first point of X_m

	ComponentLayout() = default;
	explicit ComponentLayout(std::vector<int> s) : sizes(std::move(s)) {
		offsets.resize(sizes.size());
		int acc = 0;
		for (std::size_t m = 0; m < sizes.size(); ++m) {
			if (sizes[m] < 1) throw std::invalid_argument("ComponentLayout: component size < 1");
			offsets[m] = acc;
			acc += sizes[m];
		}
		total_ = acc;
	}

	int total() const { return total_; }
	int num_components() const { return static_cast<int>(sizes.size()); }

	int component_of(Point x) const {
		auto it = std::upper_bound(offsets.begin(), offsets.end(), x);
		return static_cast<int>(it - offsets.begin()) - 1;
	}
	int local_of(Point x) const { return x - offsets[component_of(x)]; }
	Point global(int m, int local) const { return offsets[m] + local; }

	bool contains(Point x) const { return x >= 0 && x < total_; }

	bool operator==(const ComponentLayout& o) const { return sizes == o.sizes; }

private:
	int total_ = 0;
};

/// Sorted duplicate-free set of points.
struct PointSet {
	std::vector<Point> points;

	PointSet() = default;
	explicit PointSet(std::vector<Point> p) : points(std::move(p)) {
		std::sort(points.begin(), points.end());
		points.erase(std::unique(points.begin(), points.end()), points.end());
	}

	static PointSet singleton(Point x) { return PointSet({x}); }

	bool empty() const { return points.empty(); }
	std::size_t size() const { return points.size(); }
	bool contains(Point x) const {
		return std::binary_search(points.begin(), points.end(), x);
	}

	bool operator==(const PointSet& o) const { return points == o.points; }
	bool operator!=(const PointSet& o) const { return points != o.points; }
};

inline PointSet ps_union(const PointSet& a, const PointSet& b) {
	std::vector<Point> out;
	out.reserve(a.points.size() + b.points.size());
	std::set_union(a.points.begin(), a.points.end(), b.points.begin(), b.points.end(),
	               std::back_inserter(out));
	return PointSet(std::move(out));
}

inline PointSet ps_minus(const PointSet& a, const PointSet& b) {
	std::vector<Point> out;
	std::set_difference(a.points.begin(), a.points.end(), b.points.begin(), b.points.end(),
	                    std::back_inserter(out));
	return PointSet(std::move(out));
}

inline PointSet ps_intersect(const PointSet& a, const PointSet& b) {
	std::vector<Point> out;
	std::set_intersection(a.points.begin(), a.points.end(), b.points.begin(), b.points.end(),
	                      std::back_inserter(out));
	return PointSet(std::move(out));
}

inline bool ps_subset(const PointSet& a, const PointSet& b) {
	return std::includes(b.points.begin(), b.points.end(), a.points.begin(), a.points.end());
}

/// Whole component X_m as a point set.
inline PointSet ps_component(const ComponentLayout& layout, int m) {
	std::vector<Point> p(layout.sizes[m]);
	for (int i = 0; i < layout.sizes[m]; ++i) p[i] = layout.global(m, i);
	return PointSet(std::move(p));
}

} // namespace coarsekit
