#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "controlled_set.hpp"
#include "layout.hpp"

namespace coarsekit {

/// One finite quotient G/H_m with the left translation action of a fixed
/// symmetric generating set (closed under inverse, containing identity).
struct FiniteQuotientAction {
	int size = 0;
	std::vector<std::vector<int>> generators; // one permutation of {0..size-1} per generator
	int identity = 0;
};

enum class TowerKind { Cyclic, SL2, Generic };

/// A truncated box space: finitely many quotient components sharing one
/// generator alphabet. Exact word arithmetic depends on the kind: integer
/// sums for the cyclic tower, integer 2x2 matrices for SL2, and a
/// designated reference component for loaded towers.
struct BoxSpaceSpec {
	TowerKind kind = TowerKind::Generic;
	std::vector<std::string> generator_names;
	std::vector<int> inverse_generator; // involution on generator indices
	int identity_generator = -1;
	std::vector<FiniteQuotientAction> components;
	int reference_component = -1; // Generic only; defaults to the largest component

	ComponentLayout layout() const {
		std::vector<int> sizes;
		sizes.reserve(components.size());
		for (const auto& c : components) sizes.push_back(c.size);
		return ComponentLayout(sizes);
	}

	int num_generators() const { return static_cast<int>(generator_names.size()); }

	int ref_component() const {
		if (reference_component >= 0) return reference_component;
		int best = 0;
		for (std::size_t m = 1; m < components.size(); ++m)
			if (components[m].size > components[best].size) best = static_cast<int>(m);
		return best;
	}
};

inline BoxSpaceSpec build_cyclic_tower(const std::vector<int>& sizes) {
	if (sizes.empty()) throw std::invalid_argument("build_cyclic_tower: empty size list");
	BoxSpaceSpec spec;
	spec.kind = TowerKind::Cyclic;
	spec.generator_names = {"a", "a-", "e"};
	spec.inverse_generator = {1, 0, 2};
	spec.identity_generator = 2;
	for (int n : sizes) {
		if (n < 2) throw std::invalid_argument("build_cyclic_tower: size must be >= 2");
		FiniteQuotientAction q;
		q.size = n;
		q.identity = 0;
		std::vector<int> plus(n), minus(n), id(n);
		for (int i = 0; i < n; ++i) {
			plus[i] = (i + 1) % n;
			minus[i] = (i + n - 1) % n;
			id[i] = i;
		}
		q.generators = {plus, minus, id};
		spec.components.push_back(std::move(q));
	}
	return spec;
}

namespace detail {

inline bool is_prime(int p) {
	if (p < 2) return false;
	for (int d = 2; d * d <= p; ++d)
		if (p % d == 0) return false;
	return true;
}

using Mat2 = std::array<int, 4>; // row-major (a b; c d)

inline Mat2 mat_mul_mod(const Mat2& x, const Mat2& y, int p) {
	auto r = [p](long long v) { return static_cast<int>(((v % p) + p) % p); };
	return {r(1LL * x[0] * y[0] + 1LL * x[1] * y[2]), r(1LL * x[0] * y[1] + 1LL * x[1] * y[3]),
	        r(1LL * x[2] * y[0] + 1LL * x[3] * y[2]), r(1LL * x[2] * y[1] + 1LL * x[3] * y[3])};
}

} // namespace detail

/// SL(2, Z/p) with left multiplication by the elementary matrices
/// a = (1 1; 0 1) and b = (1 0; 1 1) and their inverses. Elements are
/// enumerated lexicographically on matrix entries for stable indices.
inline BoxSpaceSpec build_sl2_tower(const std::vector<int>& primes) {
	if (primes.empty()) throw std::invalid_argument("build_sl2_tower: empty prime list");
	BoxSpaceSpec spec;
	spec.kind = TowerKind::SL2;
	spec.generator_names = {"a", "a-", "b", "b-", "e"};
	spec.inverse_generator = {1, 0, 3, 2, 4};
	spec.identity_generator = 4;
	for (int p : primes) {
		if (!detail::is_prime(p) || p < 3)
			throw std::invalid_argument("build_sl2_tower: entries must be primes >= 3");
		std::vector<detail::Mat2> els;
		std::vector<int> index_of(static_cast<std::size_t>(p) * p * p * p, -1);
		auto flat = [p](const detail::Mat2& m) {
			return ((static_cast<std::size_t>(m[0]) * p + m[1]) * p + m[2]) * p + m[3];
		};
		for (int a = 0; a < p; ++a)
			for (int b = 0; b < p; ++b)
				for (int c = 0; c < p; ++c)
					for (int d = 0; d < p; ++d)
						if ((((1LL * a * d - 1LL * b * c) % p) + p) % p == 1) {
							detail::Mat2 m{a, b, c, d};
							index_of[flat(m)] = static_cast<int>(els.size());
							els.push_back(m);
						}
		FiniteQuotientAction q;
		q.size = static_cast<int>(els.size());
		q.identity = index_of[flat({1, 0, 0, 1})];
		const std::vector<detail::Mat2> gens = {
		    {1, 1, 0, 1}, {1, p - 1, 0, 1}, {1, 0, 1, 1}, {1, 0, p - 1, 1}, {1, 0, 0, 1}};
		for (const auto& g : gens) {
			std::vector<int> perm(q.size);
			for (int x = 0; x < q.size; ++x)
				perm[x] = index_of[flat(detail::mat_mul_mod(g, els[x], p))];
			q.generators.push_back(std::move(perm));
		}
		spec.components.push_back(std::move(q));
	}
	return spec;
}

/// T_K = {(g x, x) : g in K} across all components.
inline ControlledSet cayley_generating_entourage(const BoxSpaceSpec& spec) {
	const ComponentLayout layout = spec.layout();
	std::vector<std::pair<Point, Point>> out;
	for (std::size_t m = 0; m < spec.components.size(); ++m) {
		const auto& q = spec.components[m];
		for (const auto& perm : q.generators)
			for (int x = 0; x < q.size; ++x)
				out.emplace_back(layout.global(static_cast<int>(m), perm[x]),
				                 layout.global(static_cast<int>(m), x));
	}
	return ControlledSet(std::move(out));
}

/// T_K^{on}, the action of K^n.
inline ControlledSet cayley_entourage(const BoxSpaceSpec& spec, int n) {
	if (n < 1) throw std::invalid_argument("cayley_entourage: n must be >= 1");
	return cs_power(cayley_generating_entourage(spec), n);
}

/// Exact group element key; comparable and order-stable. Cyclic: the
/// integer sum. SL2: the integer matrix lift. Generic: the permutation
/// induced on the reference component.
struct GroupElement {
	std::vector<std::int64_t> key;
	bool operator<(const GroupElement& o) const { return key < o.key; }
	bool operator==(const GroupElement& o) const { return key == o.key; }
};

class GroupCalculus {
public:
	explicit GroupCalculus(const BoxSpaceSpec& spec) : spec_(&spec) {
		switch (spec.kind) {
		case TowerKind::Cyclic:
			gen_keys_ = {{1}, {-1}, {0}};
			break;
		case TowerKind::SL2:
			gen_keys_ = {{1, 1, 0, 1}, {1, -1, 0, 1}, {1, 0, 1, 1}, {1, 0, -1, 1}, {1, 0, 0, 1}};
			break;
		case TowerKind::Generic: {
			const auto& q = spec.components[spec.ref_component()];
			for (const auto& perm : q.generators)
				gen_keys_.push_back(std::vector<std::int64_t>(perm.begin(), perm.end()));
			break;
		}
		}
	}

	GroupElement identity() const {
		return GroupElement{gen_keys_[spec_->identity_generator]};
	}

	/// x * g (append generator on the right).
	GroupElement mul_right(const GroupElement& x, int g) const { return mul(x.key, gen_keys_[g]); }

	/// g * x.
	GroupElement mul_left(int g, const GroupElement& x) const { return mul(gen_keys_[g], x.key); }

private:
	GroupElement mul(const std::vector<std::int64_t>& a, const std::vector<std::int64_t>& b) const {
		switch (spec_->kind) {
		case TowerKind::Cyclic:
			return GroupElement{{a[0] + b[0]}};
		case TowerKind::SL2:
			return GroupElement{{a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3],
			                     a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]}};
		case TowerKind::Generic: {
			// composition of permutations: (a o b)[x] = a[b[x]]
			std::vector<std::int64_t> r(b.size());
			for (std::size_t i = 0; i < b.size(); ++i) r[i] = a[static_cast<std::size_t>(b[i])];
			return GroupElement{std::move(r)};
		}
		}
		throw std::logic_error("unreachable");
	}

	const BoxSpaceSpec* spec_;
	std::vector<std::vector<std::int64_t>> gen_keys_;
};

/// K^n as a finite set of group elements, each carried by one canonical
/// reduced word (shortest, then lexicographically smallest).
struct FreeBall {
	int radius = 0;
	std::vector<std::vector<int>> words; // generator-index sequences; the empty word is identity
};

inline FreeBall free_ball(const BoxSpaceSpec& spec, int radius) {
	if (radius < 0) throw std::invalid_argument("free_ball: radius must be >= 0");
	GroupCalculus calc(spec);
	FreeBall ball;
	ball.radius = radius;
	std::map<GroupElement, std::vector<int>> seen;
	std::vector<std::pair<GroupElement, std::vector<int>>> frontier;
	seen[calc.identity()] = {};
	frontier.push_back({calc.identity(), {}});
	ball.words.push_back({});
	for (int step = 0; step < radius; ++step) {
		std::vector<std::pair<GroupElement, std::vector<int>>> next;
		for (const auto& [el, w] : frontier) {
			for (int g = 0; g < spec.num_generators(); ++g) {
				if (g == spec.identity_generator) continue;
				if (!w.empty() && spec.inverse_generator[w.back()] == g) continue; // reduced only
				GroupElement e2 = calc.mul_right(el, g);
				if (seen.count(e2)) continue;
				std::vector<int> w2 = w;
				w2.push_back(g);
				seen.emplace(e2, w2);
				next.push_back({std::move(e2), w2});
				ball.words.push_back(std::move(w2));
			}
		}
		frontier = std::move(next);
	}
	return ball;
}

/// Coset of a word in component m: apply the letter permutations to the
/// identity coset, rightmost letter first. Returns a global point index.
inline Point eval_word(const BoxSpaceSpec& spec, const std::vector<int>& word, int m) {
	const auto& q = spec.components[m];
	int x = q.identity;
	for (auto it = word.rbegin(); it != word.rend(); ++it) x = q.generators[*it][x];
	return spec.layout().global(m, x);
}

/// True iff distinct elements of K^{n+1} land on distinct cosets in
/// component m, with group-level identity decided exactly.
inline bool injectivity_check(const BoxSpaceSpec& spec, int m, int n) {
	if (m < 0 || m >= static_cast<int>(spec.components.size()))
		throw std::invalid_argument("injectivity_check: bad component index");
	const FreeBall ball = free_ball(spec, n + 1);
	std::vector<Point> images;
	images.reserve(ball.words.size());
	for (const auto& w : ball.words) images.push_back(eval_word(spec, w, m));
	std::sort(images.begin(), images.end());
	return std::adjacent_find(images.begin(), images.end()) == images.end();
}

struct FolnerPullback {
	std::vector<std::vector<int>> words; // F, as canonical reduced words
	std::size_t kf_size = 0;             // #(K F), exact group-level count
	std::size_t image_size = 0;          // #(T_K[Y]) in the component
	PointSet pushforward;                // q_m(F), equals Y
};

/// Inverse image of a bounded Y (containing the identity coset) under the
/// injective restriction of q_m to K^{n+1}. Realizes the Folner transfer:
/// #F = #Y and #(K F) matches #(T_K[Y]) at the group level.
inline FolnerPullback folner_pullback(const BoxSpaceSpec& spec, int m, const PointSet& y, int n) {
	if (!injectivity_check(spec, m, n))
		throw std::invalid_argument("folner_pullback: q_m is not injective on K^{n+1}");
	const ComponentLayout layout = spec.layout();
	const Point id_global = layout.global(m, spec.components[m].identity);
	if (!y.contains(id_global))
		throw std::invalid_argument("folner_pullback: Y must contain the identity coset");
	const ControlledSet tk = cayley_generating_entourage(spec);
	if (!bounded_witness(y, cs_power(tk, n), layout))
		throw std::invalid_argument("folner_pullback: Y is not T_K^{on}-bounded");

	GroupCalculus calc(spec);
	const FreeBall ball = free_ball(spec, n + 1);
	FolnerPullback out;
	std::vector<GroupElement> f_elements;
	std::vector<Point> push;
	for (const auto& w : ball.words) {
		const Point img = eval_word(spec, w, m);
		if (y.contains(img)) {
			out.words.push_back(w);
			push.push_back(img);
			GroupElement e = calc.identity();
			for (int g : w) e = calc.mul_right(e, g);
			f_elements.push_back(std::move(e));
		}
	}
	if (out.words.size() != y.size())
		throw std::invalid_argument("folner_pullback: Y is not contained in the image of K^{n+1}");
	out.pushforward = PointSet(std::move(push));

	std::vector<GroupElement> kf;
	for (int g = 0; g < spec.num_generators(); ++g)
		for (const auto& e : f_elements) kf.push_back(calc.mul_left(g, e));
	std::sort(kf.begin(), kf.end());
	kf.erase(std::unique(kf.begin(), kf.end()), kf.end());
	out.kf_size = kf.size();
	out.image_size = cs_image(tk, y).size();
	return out;
}

} // namespace coarsekit
