#pragma once

#include <algorithm>
#include <map>
#include <stdexcept>
#include <vector>

#include "controlled_set.hpp"
#include "layout.hpp"

namespace coarsekit {

/// Injective partial map between subsets of X. dom is strictly increasing
/// and img[t] is the image of dom[t]; img carries no duplicates.
struct PartialBijection {
	std::vector<Point> dom;
	std::vector<Point> img;

	static PartialBijection identity_on(const ComponentLayout& layout) {
		PartialBijection pb;
		pb.dom.resize(layout.total());
		pb.img.resize(layout.total());
		for (Point x = 0; x < layout.total(); ++x) {
			pb.dom[x] = x;
			pb.img[x] = x;
		}
		return pb;
	}

	std::size_t size() const { return dom.size(); }
	bool empty() const { return dom.empty(); }

	bool defined_at(Point x) const {
		return std::binary_search(dom.begin(), dom.end(), x);
	}
	Point apply(Point x) const {
		const auto it = std::lower_bound(dom.begin(), dom.end(), x);
		if (it == dom.end() || *it != x) throw std::out_of_range("PartialBijection: point outside domain");
		return img[it - dom.begin()];
	}

	PartialBijection inverse() const {
		std::vector<std::pair<Point, Point>> rev(dom.size());
		for (std::size_t t = 0; t < dom.size(); ++t) rev[t] = {img[t], dom[t]};
		std::sort(rev.begin(), rev.end());
		PartialBijection out;
		out.dom.reserve(rev.size());
		out.img.reserve(rev.size());
		for (const auto& [a, b] : rev) {
			out.dom.push_back(a);
			out.img.push_back(b);
		}
		return out;
	}

	/// Graph as a relation: pair (image, preimage) per the convention
	/// (x, y) in phi  <=>  x = phi(y).
	ControlledSet graph() const {
		std::vector<std::pair<Point, Point>> p(dom.size());
		for (std::size_t t = 0; t < dom.size(); ++t) p[t] = {img[t], dom[t]};
		return ControlledSet(std::move(p));
	}

	/// Both injectivity directions, checked exhaustively.
	bool valid() const {
		if (dom.size() != img.size()) return false;
		for (std::size_t t = 1; t < dom.size(); ++t)
			if (dom[t - 1] >= dom[t]) return false;
		std::vector<Point> s = img;
		std::sort(s.begin(), s.end());
		return std::adjacent_find(s.begin(), s.end()) == s.end();
	}

	bool operator==(const PartialBijection& o) const { return dom == o.dom && img == o.img; }
};

/// f o g (apply g first).
inline PartialBijection pb_compose(const PartialBijection& f, const PartialBijection& g) {
	PartialBijection out;
	for (std::size_t t = 0; t < g.dom.size(); ++t) {
		if (f.defined_at(g.img[t])) {
			out.dom.push_back(g.dom[t]);
			out.img.push_back(f.apply(g.img[t]));
		}
	}
	return out;
}

/// Decomposition of a controlled set containing the diagonal into the
/// diagonal plus partial bijections phi(1..k).
struct Label {
	ComponentLayout layout;
	ControlledSet source;
	std::vector<PartialBijection> parts; // parts[0] is the diagonal

	int k() const { return static_cast<int>(parts.size()) - 1; }

	/// phi(i) for i in {-k..k}; negative index means the inverse part.
	PartialBijection part(int i) const {
		if (i == 0) return parts[0];
		const int a = i < 0 ? -i : i;
		if (a > k()) throw std::out_of_range("Label: part index out of range");
		return i > 0 ? parts[a] : parts[a].inverse();
	}
};

/// Word over the alphabet I = {-k..k}. Applied left to right as a
/// composition: phi(g) = phi(g_1) o phi(g_2) o ... o phi(g_n).
struct Word {
	std::vector<int> letters;
};

namespace detail {

/// Proper edge coloring of a bipartite multigraph with max-degree colors,
/// by the alternating-chain recoloring argument behind Konig's theorem.
/// Edges are (row, col) pairs; returns one color id per edge.
inline std::vector<int> bipartite_edge_coloring(const std::vector<std::pair<Point, Point>>& edges,
                                                int num_vertices, int num_colors) {
	// at[side][v][c] = edge id colored c at vertex v, or -1
	std::vector<std::vector<int>> at_row(num_vertices, std::vector<int>(num_colors, -1));
	std::vector<std::vector<int>> at_col(num_vertices, std::vector<int>(num_colors, -1));
	std::vector<int> color(edges.size(), -1);

	auto free_color = [&](const std::vector<int>& slots) {
		for (int c = 0; c < static_cast<int>(slots.size()); ++c)
			if (slots[c] < 0) return c;
		throw std::logic_error("bipartite_edge_coloring: no free color");
	};

	for (int e = 0; e < static_cast<int>(edges.size()); ++e) {
		const auto [u, v] = edges[e]; // u = row endpoint, v = col endpoint
		const int cu = free_color(at_row[u]);
		const int cv = free_color(at_col[v]);
		if (cu != cv) {
			// Swap colors along the cu/cv alternating chain starting at v.
			// In a bipartite graph the chain never reaches u (u has no
			// cu-colored edge), so cu ends up free at both endpoints of e.
			std::vector<int> chain;
			int vert = v;
			bool col_side = true;
			int want = cu, other = cv;
			while (true) {
				const int eid = col_side ? at_col[vert][want] : at_row[vert][want];
				if (eid < 0) break;
				chain.push_back(eid);
				vert = col_side ? edges[eid].first : edges[eid].second;
				col_side = !col_side;
				std::swap(want, other);
			}
			for (int eid : chain) {
				const int c = color[eid];
				if (at_row[edges[eid].first][c] == eid) at_row[edges[eid].first][c] = -1;
				if (at_col[edges[eid].second][c] == eid) at_col[edges[eid].second][c] = -1;
			}
			for (int eid : chain) {
				const int c = color[eid] == cu ? cv : cu;
				color[eid] = c;
				at_row[edges[eid].first][c] = eid;
				at_col[edges[eid].second][c] = eid;
			}
		}
		color[e] = cu;
		at_row[u][cu] = e;
		at_col[v][cu] = e;
	}
	return color;
}

} // namespace detail

/// Decompose T (which must contain the diagonal) into the diagonal plus
/// k partial bijections, where k is the maximum off-diagonal row/column
/// degree. Off-diagonal parts come out pairwise disjoint.
inline Label label_decompose(const ControlledSet& t, const ComponentLayout& layout) {
	if (!cs_subset(cs_diagonal(layout), t))
		throw std::invalid_argument("label_decompose: T must contain the diagonal");
	if (!cs_block_diagonal(t, layout))
		throw std::invalid_argument("label_decompose: T must be block-diagonal");

	std::vector<std::pair<Point, Point>> off;
	for (const auto& [x, y] : t.pairs)
		if (x != y) off.emplace_back(x, y);

	std::vector<int> row_deg(layout.total(), 0), col_deg(layout.total(), 0);
	for (const auto& [x, y] : off) {
		++row_deg[x];
		++col_deg[y];
	}
	int k = 0;
	for (int v : row_deg) k = std::max(k, v);
	for (int v : col_deg) k = std::max(k, v);

	Label label;
	label.layout = layout;
	label.source = t;
	label.parts.resize(k + 1);
	label.parts[0] = PartialBijection::identity_on(layout);
	if (k == 0) return label;

	const auto colors = detail::bipartite_edge_coloring(off, layout.total(), k);
	std::vector<std::vector<std::pair<Point, Point>>> by_color(k); // (dom, img) pairs
	for (std::size_t e = 0; e < off.size(); ++e)
		by_color[colors[e]].push_back({off[e].second, off[e].first});
	for (int c = 0; c < k; ++c) {
		std::sort(by_color[c].begin(), by_color[c].end());
		auto& part = label.parts[c + 1];
		for (const auto& [d, i] : by_color[c]) {
			part.dom.push_back(d);
			part.img.push_back(i);
		}
	}
	return label;
}

/// phi(g) with the maximal valid domain. The empty-domain result is legal.
inline PartialBijection word_bijection(const Word& g, const Label& label) {
	if (g.letters.empty()) throw std::invalid_argument("word_bijection: empty word");
	PartialBijection acc = label.part(g.letters.back());
	for (auto it = g.letters.rbegin() + 1; it != g.letters.rend(); ++it)
		acc = pb_compose(label.part(*it), acc);
	return acc;
}

inline Word word_concat(const Word& g, const Word& h) {
	Word out = g;
	out.letters.insert(out.letters.end(), h.letters.begin(), h.letters.end());
	return out;
}

inline Word word_inverse(const Word& g) {
	Word out;
	out.letters.reserve(g.letters.size());
	for (auto it = g.letters.rbegin(); it != g.letters.rend(); ++it) out.letters.push_back(-*it);
	return out;
}

/// {x : phi(g) and phi(h) both defined at x and agree there}.
inline PointSet agreement_set(const Word& g, const Word& h, const Label& label) {
	const PartialBijection pg = word_bijection(g, label);
	const PartialBijection ph = word_bijection(h, label);
	std::vector<Point> out;
	for (std::size_t t = 0; t < pg.dom.size(); ++t) {
		const Point x = pg.dom[t];
		if (ph.defined_at(x) && ph.apply(x) == pg.img[t]) out.push_back(x);
	}
	return PointSet(std::move(out));
}

} // namespace coarsekit
