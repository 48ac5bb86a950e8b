#include <gtest/gtest.h>

#include <random>

#include "coarsekit/controlled_set.hpp"
#include "coarsekit/layout.hpp"

using namespace coarsekit;

namespace {

// Delta plus cycle adjacency on one n-cycle component.
ControlledSet cycle_entourage(int n) {
	std::vector<std::pair<Point, Point>> p;
	for (int i = 0; i < n; ++i) {
		p.emplace_back(i, i);
		p.emplace_back((i + 1) % n, i);
		p.emplace_back((i + n - 1) % n, i);
	}
	return ControlledSet(std::move(p));
}

ControlledSet random_relation(const ComponentLayout& layout, std::mt19937& rng, int pairs) {
	std::uniform_int_distribution<int> comp(0, layout.num_components() - 1);
	std::vector<std::pair<Point, Point>> p;
	for (int t = 0; t < pairs; ++t) {
		const int m = comp(rng);
		std::uniform_int_distribution<int> pt(0, layout.sizes[m] - 1);
		p.emplace_back(layout.global(m, pt(rng)), layout.global(m, pt(rng)));
	}
	return ControlledSet(std::move(p));
}

PointSet random_subset(const ComponentLayout& layout, std::mt19937& rng) {
	std::vector<Point> pts;
	std::bernoulli_distribution take(0.3);
	for (Point x = 0; x < layout.total(); ++x)
		if (take(rng)) pts.push_back(x);
	return PointSet(std::move(pts));
}

} // namespace

TEST(Inverse, ExamplesAndInvolution) {
	const ComponentLayout layout({3});
	EXPECT_EQ(cs_inverse(cs_diagonal(layout)), cs_diagonal(layout));
	const ControlledSet sym = cycle_entourage(6);
	EXPECT_EQ(cs_inverse(sym), sym);
	const ControlledSet t(std::vector<std::pair<Point, Point>>{{0, 1}, {2, 2}});
	EXPECT_EQ(cs_inverse(t), ControlledSet(std::vector<std::pair<Point, Point>>{{1, 0}, {2, 2}}));
	std::mt19937 rng(11);
	const ComponentLayout big({5, 9, 4});
	for (int i = 0; i < 50; ++i) {
		const ControlledSet r = random_relation(big, rng, 30);
		EXPECT_EQ(cs_inverse(cs_inverse(r)), r);
	}
}

TEST(Compose, ExamplesAssociativityAndInverseLaw) {
	const ComponentLayout layout({6});
	const ControlledSet t = cycle_entourage(6);
	EXPECT_EQ(cs_compose(cs_diagonal(layout), t), t);

	// T o T on C6 is the distance <= 2 relation
	std::vector<std::pair<Point, Point>> d2;
	for (int i = 0; i < 6; ++i)
		for (int j = 0; j < 6; ++j) {
			const int d = std::min((i - j + 6) % 6, (j - i + 6) % 6);
			if (d <= 2) d2.emplace_back(i, j);
		}
	EXPECT_EQ(cs_compose(t, t), ControlledSet(std::move(d2)));

	// composition of shift graphs on Z/6
	std::vector<std::pair<Point, Point>> shift;
	for (int i = 0; i < 6; ++i) shift.emplace_back((i + 1) % 6, i);
	const ControlledSet s(std::move(shift));
	std::vector<std::pair<Point, Point>> shift2;
	for (int i = 0; i < 6; ++i) shift2.emplace_back((i + 2) % 6, i);
	EXPECT_EQ(cs_compose(s, s), ControlledSet(std::move(shift2)));

	std::mt19937 rng(5);
	const ComponentLayout big({7, 6});
	for (int i = 0; i < 50; ++i) {
		const ControlledSet a = random_relation(big, rng, 20);
		const ControlledSet b = random_relation(big, rng, 20);
		const ControlledSet c = random_relation(big, rng, 20);
		EXPECT_EQ(cs_compose(cs_compose(a, b), c), cs_compose(a, cs_compose(b, c)));
		EXPECT_EQ(cs_inverse(cs_compose(a, b)), cs_compose(cs_inverse(b), cs_inverse(a)));
	}
}

TEST(Power, ExamplesAndBallSizes) {
	const ComponentLayout layout({20});
	const ControlledSet t = cycle_entourage(20);
	EXPECT_EQ(cs_power(t, 1), t);
	EXPECT_EQ(cs_power(cs_diagonal(layout), 5), cs_diagonal(layout));
	EXPECT_THROW(cs_power(t, 0), std::invalid_argument);
	for (int n = 1; n < 10; ++n) {
		const PointSet ball = cs_image(cs_power(t, n), Point(0));
		EXPECT_EQ(static_cast<int>(ball.size()), 2 * n + 1) << "radius " << n;
	}
}

TEST(Image, ExamplesAndFunctoriality) {
	const ComponentLayout layout({6});
	const ControlledSet t = cycle_entourage(6);
	EXPECT_TRUE(cs_image(t, PointSet()).empty());
	const PointSet y({0, 1});
	EXPECT_EQ(cs_image(cs_diagonal(layout), y), y);
	EXPECT_EQ(cs_image(t, y), PointSet({5, 0, 1, 2}));

	std::mt19937 rng(23);
	const ComponentLayout big({8, 8});
	for (int i = 0; i < 80; ++i) {
		const ControlledSet a = random_relation(big, rng, 25);
		const ControlledSet b = random_relation(big, rng, 25);
		const PointSet s = random_subset(big, rng);
		const PointSet s2 = random_subset(big, rng);
		EXPECT_EQ(cs_image(cs_compose(a, b), s), cs_image(a, cs_image(b, s)));
		EXPECT_EQ(cs_image(a, ps_union(s, s2)), ps_union(cs_image(a, s), cs_image(a, s2)));
	}
}

TEST(BoundedWitness, Examples) {
	const ComponentLayout layout({6});
	EXPECT_EQ(bounded_witness(PointSet::singleton(4), cs_diagonal(layout), layout), Point(4));
	const ComponentMetric cm = ComponentMetric::from_adjacency(layout, cycle_entourage(6));
	EXPECT_EQ(bounded_witness(PointSet({0, 1, 2}), metric_entourage(cm, 1), layout), Point(1));
	EXPECT_THROW(bounded_witness(PointSet(), cs_diagonal(layout), layout), std::invalid_argument);

	// a set meeting two components has no witness
	const ComponentLayout two({3, 3});
	std::vector<std::pair<Point, Point>> full;
	for (int m = 0; m < 2; ++m)
		for (int i = 0; i < 3; ++i)
			for (int j = 0; j < 3; ++j) full.emplace_back(two.global(m, i), two.global(m, j));
	EXPECT_FALSE(bounded_witness(PointSet({0, 4}), ControlledSet(std::move(full)), two));
}

TEST(UniformDegree, ExamplesAndSubmultiplicativity) {
	const ComponentLayout layout({9});
	EXPECT_EQ(uniform_degree(cs_diagonal(layout)).max_row, 1);
	EXPECT_EQ(uniform_degree(cs_diagonal(layout)).max_col, 1);
	EXPECT_EQ(uniform_degree(cycle_entourage(9)).max_row, 3);
	EXPECT_EQ(uniform_degree(cycle_entourage(9)).max_col, 3);
	EXPECT_EQ(uniform_degree(ControlledSet()).max_row, 0);

	std::mt19937 rng(99);
	const ComponentLayout big({10, 10});
	for (int i = 0; i < 60; ++i) {
		const ControlledSet a = random_relation(big, rng, 30);
		const ControlledSet b = random_relation(big, rng, 30);
		EXPECT_LE(uniform_degree(cs_compose(a, b)).max_row,
		          uniform_degree(a).max_row * uniform_degree(b).max_row);
	}
}

TEST(MetricEntourage, ExamplesAndTriangle) {
	const ComponentLayout layout({6});
	const ComponentMetric cm = ComponentMetric::from_adjacency(layout, cycle_entourage(6));
	EXPECT_EQ(metric_entourage(cm, 0), cs_diagonal(layout));
	EXPECT_EQ(metric_entourage(cm, 1), cycle_entourage(6));
	std::vector<std::pair<Point, Point>> full;
	for (int i = 0; i < 6; ++i)
		for (int j = 0; j < 6; ++j) full.emplace_back(i, j);
	EXPECT_EQ(metric_entourage(cm, cm.component_diameter(0)), ControlledSet(std::move(full)));

	for (int r1 = 0; r1 <= 3; ++r1)
		for (int r2 = 0; r2 <= 3; ++r2)
			EXPECT_TRUE(cs_subset(cs_compose(metric_entourage(cm, r1), metric_entourage(cm, r2)),
			                      metric_entourage(cm, r1 + r2)));
}

TEST(Boundary, Examples) {
	const ComponentLayout layout({6});
	const ComponentMetric cm = ComponentMetric::from_adjacency(layout, cycle_entourage(6));
	EXPECT_TRUE(boundary_R(cm, ps_component(layout, 0), 2).empty());
	EXPECT_TRUE(boundary_R(cm, PointSet({2, 3}), 0).empty());
	EXPECT_EQ(boundary_R(cm, PointSet::singleton(0), 1), PointSet({1, 5}));
}

TEST(CoarseAxioms, GeneratedFamilyStaysClosed) {
	// start from Delta and two metric entourages; close under the operations
	// a few rounds and verify every produced relation is still controlled
	// (block-diagonal with finite degree), and unions/subsets behave
	const ComponentLayout layout({6, 8});
	std::vector<std::pair<Point, Point>> adj;
	for (int m = 0; m < 2; ++m) {
		const int n = layout.sizes[m];
		for (int i = 0; i < n; ++i) {
			adj.emplace_back(layout.global(m, i), layout.global(m, i));
			adj.emplace_back(layout.global(m, (i + 1) % n), layout.global(m, i));
			adj.emplace_back(layout.global(m, (i + n - 1) % n), layout.global(m, i));
		}
	}
	const ComponentMetric cm = ComponentMetric::from_adjacency(layout, ControlledSet(adj));
	std::vector<ControlledSet> fam = {cs_diagonal(layout), metric_entourage(cm, 1),
	                                  metric_entourage(cm, 2)};
	for (int round = 0; round < 2; ++round) {
		const std::size_t sz = fam.size();
		for (std::size_t i = 0; i < sz; ++i) {
			fam.push_back(cs_inverse(fam[i]));
			for (std::size_t j = 0; j < sz; ++j) {
				fam.push_back(cs_union(fam[i], fam[j]));
				fam.push_back(cs_compose(fam[i], fam[j]));
			}
		}
	}
	for (const ControlledSet& t : fam) {
		EXPECT_TRUE(cs_block_diagonal(t, layout));
		EXPECT_LE(uniform_degree(t).max_row, layout.total());
		// subsets of controlled sets are controlled: spot-check the even pairs
		std::vector<std::pair<Point, Point>> half;
		for (std::size_t i = 0; i < t.pairs.size(); i += 2) half.push_back(t.pairs[i]);
		EXPECT_TRUE(cs_block_diagonal(ControlledSet(std::move(half)), layout));
	}
}

TEST(Metric, DisconnectedComponentIsLegal) {
	// two 2-point pieces inside one component: distances across pieces stay infinite
	const ComponentLayout layout({4});
	ControlledSet adj(std::vector<std::pair<Point, Point>>{{0, 1}, {1, 0}, {2, 3}, {3, 2}});
	const ComponentMetric cm = ComponentMetric::from_adjacency(layout, adj);
	EXPECT_FALSE(cm.component_connected(0));
	EXPECT_EQ(cm.d(0, 1), 1);
	EXPECT_EQ(cm.d(0, 2), kInfDist);
	EXPECT_EQ(cm.component_diameter(0), 1);
}
