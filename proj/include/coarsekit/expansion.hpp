#pragma once

#include <algorithm>
#include <bit>
#include <cstdlib>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "controlled_set.hpp"
#include "flow.hpp"
#include "layout.hpp"
#include "parallel.hpp"
#include "rational.hpp"

namespace coarsekit {

inline int default_enumeration_cap() {
	if (const char* s = std::getenv("COARSEKIT_CAP")) {
		const int v = std::atoi(s);
		if (v > 0) return v;
	}
	return 20;
}

struct ExpansionResult {
	Ratio value;
	PointSet witness;
};

namespace detail {

inline void require_one_component(const PointSet& b, const ComponentLayout& layout) {
	if (b.empty()) throw std::invalid_argument("expansion: B must be nonempty");
	const int m = layout.component_of(b.points.front());
	if (layout.component_of(b.points.back()) != m)
		throw std::invalid_argument("expansion: B must lie in one component");
}

/// T[.] restricted to the candidates of B, as lists of indices into a
/// shared image-point table.
struct ImageTable {
	std::vector<std::vector<int>> images; // per candidate
	std::vector<Point> image_points;      // index -> point

	ImageTable(const ControlledSet& t, const PointSet& b) {
		std::map<Point, int> idx;
		images.resize(b.size());
		for (std::size_t i = 0; i < b.size(); ++i) {
			for (Point x : cs_image(t, b.points[i]).points) {
				auto [it, fresh] = idx.emplace(x, static_cast<int>(image_points.size()));
				if (fresh) image_points.push_back(x);
				images[i].push_back(it->second);
			}
		}
	}
};

inline Ratio image_ratio(const ControlledSet& t, const PointSet& y) {
	return Ratio(static_cast<std::int64_t>(cs_image(t, y).size()),
	             static_cast<std::int64_t>(y.size()));
}

} // namespace detail

/// Exact minimum of #T[Y]/#Y over nonempty Y subset of B, by subset
/// enumeration. Witness is the lexicographically smallest minimizer.
inline ExpansionResult min_expansion_bruteforce(const ControlledSet& t, const PointSet& b,
                                                const ComponentLayout& layout,
                                                int cap = default_enumeration_cap()) {
	detail::require_one_component(b, layout);
	const int k = static_cast<int>(b.size());
	if (k > cap) throw std::invalid_argument("min_expansion_bruteforce: enumeration cap exceeded");
	if (k > 24) throw std::invalid_argument("min_expansion_bruteforce: B too large");

	const detail::ImageTable tab(t, b);
	const int nw = (static_cast<int>(tab.image_points.size()) + 63) / 64;
	std::vector<std::uint64_t> cand_mask(static_cast<std::size_t>(k) * std::max(nw, 1), 0);
	for (int i = 0; i < k; ++i)
		for (int x : tab.images[i]) cand_mask[static_cast<std::size_t>(i) * nw + x / 64] |= 1ull << (x % 64);

	// union masks for all subsets, built incrementally from the lowest bit
	std::vector<std::uint64_t> memo(static_cast<std::size_t>(1ull << k) * std::max(nw, 1), 0);
	Ratio best(std::numeric_limits<std::int32_t>::max(), 1);
	std::uint32_t best_mask = 0;
	auto lex_less = [&](std::uint32_t a, std::uint32_t c) {
		// compare {B[i] : bit i of a} with {B[i] : bit i of c} lexicographically
		while (a && c) {
			const int ia = std::countr_zero(a), ic = std::countr_zero(c);
			if (ia != ic) return ia < ic;
			a &= a - 1;
			c &= c - 1;
		}
		return a == 0 && c != 0;
	};
	for (std::uint32_t mask = 1; mask < (1u << k); ++mask) {
		const int low = std::countr_zero(mask);
		const std::uint32_t rest = mask & (mask - 1);
		auto* dst = memo.data() + static_cast<std::size_t>(mask) * nw;
		const auto* src = memo.data() + static_cast<std::size_t>(rest) * nw;
		const auto* add = cand_mask.data() + static_cast<std::size_t>(low) * nw;
		int count = 0;
		for (int w = 0; w < nw; ++w) {
			dst[w] = src[w] | add[w];
			count += std::popcount(dst[w]);
		}
		const Ratio r(count, std::popcount(mask));
		if (r < best || (r == best && lex_less(mask, best_mask))) {
			best = r;
			best_mask = mask;
		}
	}
	std::vector<Point> wit;
	for (int i = 0; i < k; ++i)
		if (best_mask & (1u << i)) wit.push_back(b.points[i]);
	return {best, PointSet(std::move(wit))};
}

/// Same minimum as the brute-force route, computed by Dinkelbach iteration
/// on g(lambda) = min (#T[Y] - lambda #Y) with each inner minimization an
/// s-t min-cut on the coverage network. Exact rationals throughout.
inline ExpansionResult min_expansion_mincut(const ControlledSet& t, const PointSet& b,
                                            const ComponentLayout& layout) {
	detail::require_one_component(b, layout);
	const detail::ImageTable tab(t, b);
	const int k = static_cast<int>(b.size());

	PointSet current = b;
	Ratio lambda = detail::image_ratio(t, b);
	const int max_iters = 2 * k + 5;
	for (int iter = 0; iter < max_iters; ++iter) {
		// min over Y (empty allowed) of lambda.den * #T[Y] - lambda.num * #Y
		const std::vector<std::int64_t> cw(k, lambda.num);
		const std::vector<std::int64_t> iw(tab.image_points.size(), lambda.den);
		const CoverageMin cm = minimize_coverage(tab.images, cw, iw);
		if (cm.value >= 0) break; // nothing beats lambda; current is optimal
		std::vector<Point> pts;
		pts.reserve(cm.chosen.size());
		for (int i : cm.chosen) pts.push_back(b.points[i]);
		current = PointSet(std::move(pts));
		const Ratio next = detail::image_ratio(t, current);
		if (!(next < lambda)) break;
		lambda = next;
	}
	return {lambda, current};
}

struct ComponentExpansion {
	int component = 0;
	Ratio min;
	PointSet witness;
	std::string method; // "brute" or "mincut"
};

struct ExpansionProfile {
	std::string bound_desc;
	std::vector<ComponentExpansion> rows;
};

/// Minimum expansion over all bound-bounded nonempty sets, per component.
/// Every bounded set lies in some ball bound[x], so the minimum over balls
/// equals the minimum over bounded sets.
inline ExpansionProfile expansion_profile(const ComponentLayout& layout, const ControlledSet& t,
                                          const ControlledSet& bound,
                                          int cap = default_enumeration_cap(), int workers = 1,
                                          std::string bound_desc = "") {
	struct BallTask {
		int component;
		PointSet ball;
	};
	std::vector<BallTask> tasks;
	for (int m = 0; m < layout.num_components(); ++m) {
		std::vector<PointSet> balls;
		for (int i = 0; i < layout.sizes[m]; ++i) {
			PointSet ball = cs_image(bound, layout.global(m, i));
			if (!ball.empty()) balls.push_back(std::move(ball));
		}
		std::sort(balls.begin(), balls.end(),
		          [](const PointSet& a, const PointSet& c) { return a.points < c.points; });
		balls.erase(std::unique(balls.begin(), balls.end()), balls.end());
		if (balls.empty())
			throw std::invalid_argument("expansion_profile: no nonempty bounded set in component");
		for (auto& bl : balls) tasks.push_back({m, std::move(bl)});
	}

	std::vector<std::pair<ExpansionResult, std::string>> results(tasks.size());
	parallel_for(tasks.size(), workers, [&](std::size_t i) {
		const auto& task = tasks[i];
		if (static_cast<int>(task.ball.size()) <= cap)
			results[i] = {min_expansion_bruteforce(t, task.ball, layout, cap), "brute"};
		else
			results[i] = {min_expansion_mincut(t, task.ball, layout), "mincut"};
	});

	ExpansionProfile profile;
	profile.bound_desc = std::move(bound_desc);
	profile.rows.resize(layout.num_components());
	for (int m = 0; m < layout.num_components(); ++m) profile.rows[m].component = m;
	std::vector<bool> seen(layout.num_components(), false);
	for (std::size_t i = 0; i < tasks.size(); ++i) {
		auto& row = profile.rows[tasks[i].component];
		const auto& [res, method] = results[i];
		if (!seen[tasks[i].component] || res.value < row.min ||
		    (res.value == row.min && res.witness.points < row.witness.points)) {
			row.min = res.value;
			row.witness = res.witness;
			row.method = method;
			seen[tasks[i].component] = true;
		}
	}
	return profile;
}

struct WeakExpanderReport {
	std::vector<int> depths;
	std::vector<std::vector<Ratio>> minima; // minima[d][m], d indexing depths
	std::vector<int> tail_start; // per depth: first m from which all minima exceed 1 + c
	Ratio c;
	int truncation_depth = 0; // number of components inspected
	bool consistent = false;  // every depth's tail minima exceed 1 + c
};

/// Profile minima for the bound schedule T~ = T^{on}. Consistency is a
/// liminf-style tail statement: small early components may dip below
/// 1 + c (a deep ball can swallow them whole) without refuting anything.
/// The verdict is a finite truncation, never a proof about the family.
inline WeakExpanderReport weak_expander_report(const ComponentLayout& layout,
                                               const ControlledSet& t,
                                               const std::vector<int>& depth_schedule,
                                               const Ratio& c,
                                               int cap = default_enumeration_cap(),
                                               int workers = 1) {
	if (depth_schedule.empty())
		throw std::invalid_argument("weak_expander_report: empty depth schedule");
	WeakExpanderReport report;
	report.depths = depth_schedule;
	report.c = c;
	report.truncation_depth = layout.num_components();
	const Ratio threshold = Ratio(1) + c;
	report.consistent = true;
	for (int n : depth_schedule) {
		const ControlledSet bound = cs_power(t, n);
		const ExpansionProfile prof =
		    expansion_profile(layout, t, bound, cap, workers, "T^" + std::to_string(n));
		std::vector<Ratio> row;
		row.reserve(prof.rows.size());
		for (const auto& r : prof.rows) row.push_back(r.min);
		int start = static_cast<int>(row.size());
		while (start > 0 && row[start - 1] > threshold) --start;
		report.tail_start.push_back(start);
		if (start == static_cast<int>(row.size())) report.consistent = false;
		report.minima.push_back(std::move(row));
	}
	return report;
}

struct FolnerWitness {
	int component = 0;
	PointSet set;
	Ratio ratio; // #T[Y]/#Y, exactly below 1 + eps
	Ratio eps;
};

/// Search one component for a proper subset Y with #T[Y] < (1+eps)#Y:
/// balls of growing radius from every start point, then exact per-ball
/// min-cut, both up to the radius cap. The whole component is excluded
/// (it is invariant for free), and an absent result means nothing was
/// found within the caps, not that nothing exists.
inline std::optional<FolnerWitness> folner_search(const ComponentLayout& layout, int m,
                                                  const ControlledSet& t, const Ratio& eps,
                                                  int radius_cap = 10) {
	if (!(eps > Ratio(0))) throw std::invalid_argument("folner_search: eps must be positive");
	const Ratio threshold = Ratio(1) + eps;
	const int n_local = layout.sizes[m];
	auto accept = [&](const PointSet& y) -> std::optional<FolnerWitness> {
		if (y.empty() || static_cast<int>(y.size()) >= n_local) return std::nullopt;
		const Ratio r = detail::image_ratio(t, y);
		if (r < threshold) return FolnerWitness{m, y, r, eps};
		return std::nullopt;
	};

	// balls of radius 0..radius_cap around every start point
	std::vector<PointSet> balls;
	for (int i = 0; i < n_local; ++i) {
		PointSet ball = PointSet::singleton(layout.global(m, i));
		for (int r = 0; r <= radius_cap; ++r) {
			if (r > 0) {
				PointSet next = cs_image(t, ball);
				if (next.size() == ball.size()) break;
				ball = std::move(next);
			}
			if (static_cast<int>(ball.size()) >= n_local) break;
			if (auto w = accept(ball)) return w;
			if (r > 0) balls.push_back(ball);
		}
	}

	// exact minimum over all subsets of each proper ball
	std::sort(balls.begin(), balls.end(),
	          [](const PointSet& a, const PointSet& b) { return a.points < b.points; });
	balls.erase(std::unique(balls.begin(), balls.end()), balls.end());
	for (const PointSet& ball : balls) {
		const ExpansionResult res = min_expansion_mincut(t, ball, layout);
		if (res.value < threshold) {
			if (auto w = accept(res.witness)) return w;
		}
	}
	return std::nullopt;
}

/// True iff #T^{oj}[x] is strictly increasing for j = 0..n, allowing
/// stabilization only once the ball covers the whole component.
inline bool ball_growth_check(const ComponentLayout& layout, const ControlledSet& t, Point x,
                              int n) {
	if (!cs_subset(cs_diagonal(layout), t))
		throw std::invalid_argument("ball_growth_check: T must contain the diagonal");
	const int comp_size = layout.sizes[layout.component_of(x)];
	PointSet ball = PointSet::singleton(x);
	for (int j = 0; j < n; ++j) {
		const PointSet next = cs_image(t, ball);
		if (next.size() <= ball.size() && static_cast<int>(ball.size()) < comp_size) return false;
		ball = next;
	}
	return true;
}

struct FiberResult {
	Point center = 0;       // the y of the chosen F-ball
	PointSet fiber;         // F[y]
	Ratio ratio;            // #(T[F[y]] \ F[y]) / #F[y]
	Ratio relation_ratio;   // #((T o F \ F) cap X_m^2) / #(F cap X_m^2)
};

/// Fiber-extraction pigeonhole: the best fiber ratio never exceeds the
/// relation-level ratio, because the relation quantities are fiber sums.
inline FiberResult best_fiber(const ComponentLayout& layout, const ControlledSet& f,
                              const ControlledSet& t, int m) {
	if (!cs_subset(cs_diagonal(layout), t))
		throw std::invalid_argument("best_fiber: T must contain the diagonal");
	FiberResult out;
	bool found = false;
	for (int i = 0; i < layout.sizes[m]; ++i) {
		const Point y = layout.global(m, i);
		const PointSet fiber = cs_image(f, y);
		if (fiber.empty()) continue;
		const PointSet grown = cs_image(t, fiber);
		const Ratio r(static_cast<std::int64_t>(ps_minus(grown, fiber).size()),
		              static_cast<std::int64_t>(fiber.size()));
		if (!found || r < out.ratio) {
			out.center = y;
			out.fiber = fiber;
			out.ratio = r;
			found = true;
		}
	}
	if (!found) throw std::invalid_argument("best_fiber: F has no nonempty fiber in component");

	const ControlledSet tf = cs_compose(t, f);
	std::int64_t num = 0, den = 0;
	for (const auto& [x, y] : tf.pairs)
		if (layout.component_of(y) == m && !f.contains(x, y)) ++num;
	for (const auto& [x, y] : f.pairs)
		if (layout.component_of(y) == m) ++den;
	out.relation_ratio = Ratio(num, den);
	return out;
}

/// Search for Y with diam(Y) <= S and #(boundary_R(Y) cap W) < eps #Y:
/// one exact min-cut per radius-floor(S/2) ball (every subset of such a
/// ball qualifies on diameter), then the balls of radius up to S
/// themselves as candidates, with the diameter checked explicitly.
/// Absent means not found within these caps.
inline std::optional<PointSet> ula_witness(const ComponentMetric& cm, const PointSet& w,
                                           const Ratio& eps, int r, int s, int component = -1) {
	if (!(eps > Ratio(0))) throw std::invalid_argument("ula_witness: eps must be positive");
	const ComponentLayout& layout = cm.layout;
	auto verify = [&](const PointSet& y) {
		if (y.empty() || diameter_of(cm, y) > s) return false;
		const auto hit = ps_intersect(boundary_R(cm, y, r), w);
		return Ratio(static_cast<std::int64_t>(hit.size()), 1) <
		       eps * Ratio(static_cast<std::int64_t>(y.size()), 1);
	};

	const int ball_radius = s / 2; // subsets of these balls have diameter <= S
	for (Point center = 0; center < layout.total(); ++center) {
		if (component >= 0 && layout.component_of(center) != component) continue;
		const PointSet ball = neighborhood_R(cm, PointSet::singleton(center), ball_radius);
		// candidates and their R-neighborhoods inside W
		std::map<Point, int> img_idx;
		std::vector<std::vector<int>> images(ball.size());
		std::vector<std::int64_t> cand_weight(ball.size());
		for (std::size_t i = 0; i < ball.size(); ++i) {
			const Point y = ball.points[i];
			cand_weight[i] = eps.num + (w.contains(y) ? eps.den : 0);
			for (Point x : neighborhood_R(cm, PointSet::singleton(y), r).points)
				if (w.contains(x)) {
					auto [it, fresh] = img_idx.emplace(x, static_cast<int>(img_idx.size()));
					images[i].push_back(it->second);
				}
		}
		const std::vector<std::int64_t> img_weight(img_idx.size(), eps.den);
		const CoverageMin res = minimize_coverage(images, cand_weight, img_weight);
		if (res.value < 0) {
			std::vector<Point> pts;
			for (int i : res.chosen) pts.push_back(ball.points[i]);
			PointSet y(std::move(pts));
			if (verify(y)) return y;
		}
	}

	// larger sets of small diameter that fit no half-radius ball: try the
	// balls themselves, checking the diameter directly
	for (Point center = 0; center < layout.total(); ++center) {
		if (component >= 0 && layout.component_of(center) != component) continue;
		PointSet ball = neighborhood_R(cm, PointSet::singleton(center), ball_radius);
		for (int rad = ball_radius + 1; rad <= s; ++rad) {
			ball = neighborhood_R(cm, ball, 1);
			if (verify(ball)) return ball;
		}
	}
	return std::nullopt;
}

} // namespace coarsekit
