#pragma once

#include <algorithm>
#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "controlled_set.hpp"
#include "layout.hpp"
#include "rational.hpp"

namespace coarsekit {

struct ComponentExpanderCheck {
	int component = 0;
	bool connected = false;
	int degree_min = 0;
	int degree_max = 0;
	// how the vertex-expansion condition was decided
	std::string method; // "exhaustive" | "small-boundary" | "tanner" | "skipped"
	bool expansion_ok = false;
	PointSet witness;        // a violating Y (exact methods only, on failure)
	Ratio witness_ratio;     // #boundary(Y) / #Y for the witness
	double tanner_bound = 0; // certified expansion lower bound ("tanner" only)
};

struct ExpanderVerdict {
	Ratio c;
	bool connected_all = false;
	bool regular_all = false;
	bool sizes_increasing = false;
	bool expansion_all = false;
	bool ok = false;
	int common_degree = -1; // -1 unless every vertex of every component has it
	std::vector<ComponentExpanderCheck> components;
};

namespace detail {

/// Exhaustive subset scan, n <= 24. Finds a Y with #Y <= n/2 and
/// c * #Y > #boundary(Y), or reports none exists.
inline bool expansion_exhaustive(const std::vector<std::vector<int>>& rows, const Ratio& c,
                                 std::vector<int>& witness) {
	const int n = static_cast<int>(rows.size());
	std::vector<std::uint32_t> nbr(n, 0);
	for (int i = 0; i < n; ++i)
		for (int j : rows[i]) nbr[i] |= 1u << j;
	const int half = n / 2;
	for (std::uint32_t y = 1; y < (1u << n); ++y) {
		const int sz = __builtin_popcount(y);
		if (sz > half) continue;
		std::uint32_t nb = 0;
		for (std::uint32_t m = y; m;) {
			const int i = __builtin_ctz(m);
			m &= m - 1;
			nb |= nbr[i];
		}
		nb &= ~y;
		const int b = __builtin_popcount(nb);
		if (static_cast<std::int64_t>(c.den) * b < static_cast<std::int64_t>(c.num) * sz) {
			witness.clear();
			for (int i = 0; i < n; ++i)
				if (y & (1u << i)) witness.push_back(i);
			return false;
		}
	}
	return true;
}

struct SmallBoundarySet {
	std::vector<int> members;
	std::vector<int> boundary;
};

/// All connected vertex sets S with #S <= cap_size whose full boundary has
/// at most bmax vertices. Canonical enumeration: the seed is the minimum
/// vertex of S, growth only through the frontier. Returns false if the
/// step budget runs out.
inline bool connected_small_boundary_family(const std::vector<std::vector<int>>& rows, int cap_size,
                                            int bmax, std::int64_t budget,
                                            std::vector<SmallBoundarySet>& family) {
	const int n = static_cast<int>(rows.size());
	std::vector<char> in_s(n, 0), excluded(n, 0);
	std::vector<int> s;
	std::int64_t steps = 0;
	bool ok = true;

	auto rec = [&](auto&& self, int seed) -> void {
		if (!ok) return;
		if (++steps > budget) {
			ok = false;
			return;
		}
		// boundary of the current S, split into vertices that can never
		// join (below the seed, or branched away) and the live frontier
		std::vector<int> frontier, forbidden;
		std::vector<char> seen(n, 0);
		for (int u : s)
			for (int v : rows[u]) {
				if (in_s[v] || seen[v]) continue;
				seen[v] = 1;
				(v < seed || excluded[v] ? forbidden : frontier).push_back(v);
			}
		std::sort(frontier.begin(), frontier.end());
		const int b_full = static_cast<int>(forbidden.size() + frontier.size());
		if (b_full <= bmax) {
			SmallBoundarySet rec_set;
			rec_set.members = s;
			rec_set.boundary = forbidden;
			rec_set.boundary.insert(rec_set.boundary.end(), frontier.begin(), frontier.end());
			std::sort(rec_set.boundary.begin(), rec_set.boundary.end());
			family.push_back(std::move(rec_set));
		}
		if (static_cast<int>(s.size()) >= cap_size) return;
		const int room = cap_size - static_cast<int>(s.size());
		if (static_cast<int>(forbidden.size()) +
		        std::max(0, static_cast<int>(frontier.size()) - room) > bmax)
			return; // at least this many boundary vertices survive any extension
		for (int u : frontier) {
			in_s[u] = 1;
			s.push_back(u);
			self(self, seed);
			s.pop_back();
			in_s[u] = 0;
			excluded[u] = 1; // later branches must avoid u
			if (!ok) break;
		}
		for (int u : frontier) excluded[u] = 0;
	};

	for (int seed = 0; seed < n && ok; ++seed) {
		in_s[seed] = 1;
		s.assign(1, seed);
		rec(rec, seed);
		in_s[seed] = 0;
	}
	return ok;
}

/// Search for a violating union of pairwise non-adjacent family members.
/// Any Y with #Y <= cap_size and c * #Y > #boundary(Y) splits into such
/// members, so finding none proves the condition. Returns false on budget
/// exhaustion.
inline bool small_boundary_union_search(const std::vector<SmallBoundarySet>& family, int n,
                                        int cap_size, int bmax, const Ratio& c,
                                        std::int64_t budget, bool& found,
                                        std::vector<int>& witness) {
	std::vector<char> in_y(n, 0), in_b(n, 0);
	int y_size = 0, b_size = 0;
	std::int64_t steps = 0;
	bool ok = true;
	found = false;

	auto rec = [&](auto&& self, std::size_t idx) -> void {
		if (!ok || found) return;
		if (++steps > budget) {
			ok = false;
			return;
		}
		for (std::size_t j = idx; j < family.size(); ++j) {
			const auto& f = family[j];
			if (y_size + static_cast<int>(f.members.size()) > cap_size) continue;
			bool clash = false;
			for (int v : f.members)
				if (in_y[v] || in_b[v]) { // overlap, or adjacency to the current Y
					clash = true;
					break;
				}
			if (!clash)
				for (int v : f.boundary)
					if (in_y[v]) {
						clash = true;
						break;
					}
			if (clash) continue;
			std::vector<int> new_b;
			for (int v : f.members) in_y[v] = 1;
			y_size += static_cast<int>(f.members.size());
			for (int v : f.boundary)
				if (!in_b[v]) {
					in_b[v] = 1;
					new_b.push_back(v);
				}
			b_size += static_cast<int>(new_b.size());
			if (b_size <= bmax) {
				if (static_cast<std::int64_t>(c.den) * b_size <
				    static_cast<std::int64_t>(c.num) * y_size) {
					found = true;
					witness.clear();
					for (int v = 0; v < n; ++v)
						if (in_y[v]) witness.push_back(v);
				} else {
					self(self, j + 1);
				}
			}
			for (int v : new_b) in_b[v] = 0;
			b_size -= static_cast<int>(new_b.size());
			for (int v : f.members) in_y[v] = 0;
			y_size -= static_cast<int>(f.members.size());
			if (!ok || found) return;
		}
	};
	rec(rec, 0);
	return ok;
}

/// Exact certificate that the expansion condition holds on a connected
/// d-regular component, entirely in integer arithmetic. With B = A + I and
/// mu the largest |eigenvalue| of B orthogonal to the constant vector,
/// Tanner's neighborhood bound gives, for #Y <= n/2,
///   #boundary(Y)/#Y >= 2(d+1)^2/((d+1)^2 + mu^2) - 1,
/// so mu^2 <= (d+1)^2 (1-c)/(1+c) implies the condition. mu is bounded by
/// the closed-walk count: mu^128 <= tr(B^128) - (d+1)^128, and tr(B^128)
/// is an exact big integer (sum of squared entries of B^64).
inline bool trace_certificate(const std::vector<std::vector<int>>& rows, int d, const Ratio& c) {
	namespace mp = boost::multiprecision;
	if (c.num >= c.den) return false; // needs c < 1
	const int n = static_cast<int>(rows.size());
	const int squarings = 6; // B^(2^6) = B^64, so the trace covers B^128
	std::vector<mp::cpp_int> cur(static_cast<std::size_t>(n) * n), nxt;
	for (int i = 0; i < n; ++i) {
		cur[static_cast<std::size_t>(i) * n + i] = 1;
		for (int j : rows[i]) cur[static_cast<std::size_t>(i) * n + j] += 1;
	}
	for (int s = 0; s < squarings; ++s) {
		nxt.assign(static_cast<std::size_t>(n) * n, 0);
		for (int i = 0; i < n; ++i)
			for (int l = 0; l < n; ++l) {
				const mp::cpp_int& v = cur[static_cast<std::size_t>(i) * n + l];
				if (v == 0) continue;
				const auto* row_l = cur.data() + static_cast<std::size_t>(l) * n;
				auto* out = nxt.data() + static_cast<std::size_t>(i) * n;
				for (int j = 0; j < n; ++j)
					if (row_l[j] != 0) out[j] += v * row_l[j];
			}
		cur.swap(nxt);
	}
	mp::cpp_int t2k = 0;
	for (const auto& v : cur) t2k += v * v;
	const mp::cpp_int tk = t2k - mp::pow(mp::cpp_int(d + 1), 128);
	if (tk < 0) return false; // only possible on disconnected input; bail out
	// mu^2 <= (tk)^(1/64) must stay below (d+1)^2 (1-c)/(1+c)
	const mp::cpp_int thr_num = mp::cpp_int(d + 1) * (d + 1) * (c.den - c.num);
	const mp::cpp_int thr_den = c.den + c.num;
	return tk * mp::pow(thr_den, 64) <= mp::pow(thr_num, 64);
}

/// Certified lower bound on min #boundary(Y)/#Y over #Y <= n/2 for a
/// connected d-regular graph, from the second singular value of A + I
/// (vertex-expander mixing bound at density 1/2). Power iteration on
/// (A+I)^2 with the constant top eigenvector deflated exactly.
inline double tanner_expansion_bound(const std::vector<std::vector<int>>& rows, int d) {
	const int n = static_cast<int>(rows.size());
	std::vector<double> v(n), tmp(n), tmp2(n);
	std::uint64_t s = 0x853c49e6748fea9bull;
	for (int i = 0; i < n; ++i) {
		s = s * 6364136223846793005ull + 1442695040888963407ull;
		v[i] = 0.25 + static_cast<double>(s >> 40) / static_cast<double>(1ull << 24);
	}
	auto apply_b = [&](const std::vector<double>& x, std::vector<double>& out) {
		for (int i = 0; i < n; ++i) {
			double acc = x[i];
			for (int j : rows[i]) acc += x[j];
			out[i] = acc;
		}
	};
	auto project_and_normalize = [&] {
		double mean = 0.0;
		for (double x : v) mean += x;
		mean /= n;
		double nrm = 0.0;
		for (double& x : v) {
			x -= mean;
			nrm += x * x;
		}
		nrm = std::sqrt(nrm);
		if (nrm == 0.0) throw std::runtime_error("tanner_expansion_bound: iterate vanished");
		for (double& x : v) x /= nrm;
	};
	project_and_normalize();
	double mu2 = 0.0;
	for (int iter = 0; iter < 100000; ++iter) {
		apply_b(v, tmp);
		apply_b(tmp, tmp2);
		v.swap(tmp2);
		project_and_normalize();
		apply_b(v, tmp);
		apply_b(tmp, tmp2);
		double lam = 0.0;
		for (int i = 0; i < n; ++i) lam += v[i] * tmp2[i];
		double res = 0.0;
		for (int i = 0; i < n; ++i) {
			const double dlt = tmp2[i] - lam * v[i];
			res += dlt * dlt;
		}
		mu2 = lam;
		if (std::sqrt(res) <= 1e-9) break;
	}
	const double top = static_cast<double>(d + 1) * (d + 1);
	// safety margin over the iteration error, then |N(Y)|/|Y| >= ratio
	const double mu2_safe = std::min(std::max(mu2 + 1e-6, 0.0), top);
	const double ratio = 2.0 * top / (mu2_safe + top);
	return ratio - 1.0;
}

} // namespace detail

/// Decide the expander conditions for the family of components under a
/// symmetric adjacency relation: connectivity, common regular degree,
/// strictly increasing sizes, and the vertex-expansion inequality
/// #boundary(Y) >= c #Y for all Y with #Y <= n/2.
inline ExpanderVerdict expander_check(const ComponentLayout& layout, const ControlledSet& adj,
                                      const Ratio& c, std::int64_t step_budget = 2'000'000) {
	if (c.num <= 0) throw std::invalid_argument("expander_check: c must be positive");
	if (!cs_block_diagonal(adj, layout))
		throw std::invalid_argument("expander_check: relation not block-diagonal");
	if (cs_inverse(adj) != adj)
		throw std::invalid_argument("expander_check: relation not symmetric");

	ExpanderVerdict out;
	out.c = c;
	out.connected_all = true;
	out.regular_all = true;
	out.expansion_all = true;
	out.sizes_increasing = true;
	for (int m = 1; m < layout.num_components(); ++m)
		if (layout.sizes[m] <= layout.sizes[m - 1]) out.sizes_increasing = false;

	int family_degree = -2; // -2 unset, -1 mixed
	for (int m = 0; m < layout.num_components(); ++m) {
		const int n = layout.sizes[m];
		const Point base = layout.global(m, 0);
		std::vector<std::vector<int>> rows(n);
		for (const auto& [x, y] : adj.pairs)
			if (layout.component_of(y) == m && x != y) rows[y - base].push_back(x - base);

		ComponentExpanderCheck cc;
		cc.component = m;
		cc.degree_min = n > 0 ? static_cast<int>(rows[0].size()) : 0;
		cc.degree_max = cc.degree_min;
		for (const auto& r : rows) {
			cc.degree_min = std::min(cc.degree_min, static_cast<int>(r.size()));
			cc.degree_max = std::max(cc.degree_max, static_cast<int>(r.size()));
		}
		if (cc.degree_min != cc.degree_max) out.regular_all = false;
		if (family_degree == -2) family_degree = cc.degree_min;
		if (cc.degree_min != cc.degree_max || cc.degree_min != family_degree) family_degree = -1;

		// connectivity by BFS
		{
			std::vector<char> vis(n, 0);
			std::vector<int> stack{0};
			vis[0] = 1;
			int cnt = 1;
			while (!stack.empty()) {
				const int u = stack.back();
				stack.pop_back();
				for (int w : rows[u])
					if (!vis[w]) {
						vis[w] = 1;
						++cnt;
						stack.push_back(w);
					}
			}
			cc.connected = (cnt == n);
		}
		if (!cc.connected) out.connected_all = false;

		const int half = n / 2;
		if (n <= 24) {
			cc.method = "exhaustive";
			std::vector<int> w;
			cc.expansion_ok = detail::expansion_exhaustive(rows, c, w);
			if (!cc.expansion_ok) {
				std::vector<Point> pts;
				for (int v : w) pts.push_back(base + v);
				cc.witness = PointSet(std::move(pts));
			}
		} else if (cc.connected && half > 0) {
			// a violating Y has c.den * #boundary < c.num * #Y <= c.num * half
			const int bmax =
			    static_cast<int>((static_cast<std::int64_t>(c.num) * half - 1) / c.den);
			std::vector<detail::SmallBoundarySet> family;
			bool exact = detail::connected_small_boundary_family(rows, half, bmax, step_budget,
			                                                     family);
			bool found = false;
			std::vector<int> w;
			if (exact)
				exact = detail::small_boundary_union_search(family, n, half, bmax, c, step_budget,
				                                            found, w);
			if (exact) {
				cc.method = "small-boundary";
				cc.expansion_ok = !found;
				if (found) {
					std::vector<Point> pts;
					for (int v : w) pts.push_back(base + v);
					cc.witness = PointSet(std::move(pts));
				}
			} else if (cc.degree_min == cc.degree_max && n <= 512 &&
			           detail::trace_certificate(rows, cc.degree_max, c)) {
				cc.method = "trace";
				cc.expansion_ok = true;
			} else if (cc.degree_min == cc.degree_max) {
				cc.method = "tanner";
				cc.tanner_bound = detail::tanner_expansion_bound(rows, cc.degree_max);
				cc.expansion_ok =
				    cc.tanner_bound >= static_cast<double>(c.num) / static_cast<double>(c.den);
			} else {
				cc.method = "skipped";
				cc.expansion_ok = false;
			}
		} else {
			cc.method = "skipped";
			cc.expansion_ok = false;
		}
		if (!cc.expansion_ok) out.expansion_all = false;
		if (!cc.expansion_ok && !cc.witness.empty()) {
			const PointSet bd = [&] {
				std::vector<Point> b;
				std::vector<char> iny(n, 0), inb(n, 0);
				for (Point p : cc.witness.points) iny[p - base] = 1;
				for (Point p : cc.witness.points)
					for (int v : rows[p - base])
						if (!iny[v] && !inb[v]) {
							inb[v] = 1;
							b.push_back(base + v);
						}
				return PointSet(std::move(b));
			}();
			cc.witness_ratio = Ratio(static_cast<std::int64_t>(bd.size()),
			                         static_cast<std::int64_t>(cc.witness.size()));
		}
		out.components.push_back(std::move(cc));
	}
	out.common_degree = family_degree >= 0 ? family_degree : -1;
	if (family_degree < 0) out.regular_all = false;
	out.ok = out.connected_all && out.regular_all && out.sizes_increasing && out.expansion_all;
	return out;
}

} // namespace coarsekit
