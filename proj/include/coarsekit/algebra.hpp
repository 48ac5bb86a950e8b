#pragma once

#include <complex>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "controlled_set.hpp"
#include "label.hpp"
#include "layout.hpp"
#include "parallel.hpp"

namespace coarsekit {

/// Finite-propagation operator on one component, sparse over local indices.
/// Word operators carry small-integer entries, so arithmetic on them is
/// exact in double precision.
struct FinPropOperator {
	int m = 0;
	int n = 0;     // component size
	Point base = 0; // global index of local 0
	std::map<std::pair<int, int>, std::complex<double>> a; // (row, col) -> entry

	std::complex<double> at(int x, int y) const {
		const auto it = a.find({x, y});
		return it == a.end() ? std::complex<double>(0.0) : it->second;
	}

	/// Global positions of the nonzero entries.
	ControlledSet support() const {
		std::vector<std::pair<Point, Point>> p;
		for (const auto& [xy, v] : a)
			if (v != std::complex<double>(0.0)) p.emplace_back(base + xy.first, base + xy.second);
		return ControlledSet(std::move(p));
	}
};

/// Element of the diagonal subalgebra on one component.
struct DiagonalFunction {
	int m = 0;
	Point base = 0;
	std::vector<std::complex<double>> values;
};

inline FinPropOperator op_zero(const ComponentLayout& layout, int m) {
	FinPropOperator op;
	op.m = m;
	op.n = layout.sizes[m];
	op.base = layout.global(m, 0);
	return op;
}

inline FinPropOperator op_identity(const ComponentLayout& layout, int m) {
	FinPropOperator op = op_zero(layout, m);
	for (int i = 0; i < op.n; ++i) op.a[{i, i}] = 1.0;
	return op;
}

/// The partial isometry v(g): 0/1 matrix of phi(g) restricted to component m.
inline FinPropOperator op_from_word(const Word& g, const Label& label, int m) {
	const PartialBijection pb = word_bijection(g, label);
	FinPropOperator op = op_zero(label.layout, m);
	for (std::size_t t = 0; t < pb.dom.size(); ++t) {
		if (label.layout.component_of(pb.dom[t]) != m) continue;
		op.a[{static_cast<int>(pb.img[t] - op.base), static_cast<int>(pb.dom[t] - op.base)}] = 1.0;
	}
	return op;
}

inline FinPropOperator op_mul(const FinPropOperator& a, const FinPropOperator& b) {
	if (a.m != b.m) throw std::invalid_argument("op_mul: component mismatch");
	// rows of b indexed by row coordinate for the middle contraction
	std::vector<std::vector<std::pair<int, std::complex<double>>>> b_rows(b.n);
	for (const auto& [xy, v] : b.a) b_rows[xy.first].push_back({xy.second, v});
	FinPropOperator out = a;
	out.a.clear();
	for (const auto& [xz, u] : a.a)
		for (const auto& [y, v] : b_rows[xz.second]) out.a[{xz.first, y}] += u * v;
	for (auto it = out.a.begin(); it != out.a.end();)
		it = it->second == std::complex<double>(0.0) ? out.a.erase(it) : std::next(it);
	return out;
}

inline FinPropOperator op_adjoint(const FinPropOperator& a) {
	FinPropOperator out = a;
	out.a.clear();
	for (const auto& [xy, v] : a.a) out.a[{xy.second, xy.first}] = std::conj(v);
	return out;
}

/// Conditional expectation onto the diagonal.
inline DiagonalFunction cond_expect(const FinPropOperator& a) {
	DiagonalFunction d;
	d.m = a.m;
	d.base = a.base;
	d.values.assign(a.n, 0.0);
	for (const auto& [xy, v] : a.a)
		if (xy.first == xy.second) d.values[xy.first] = v;
	return d;
}

inline FinPropOperator diag_to_op(const DiagonalFunction& d, const ComponentLayout& layout) {
	FinPropOperator op = op_zero(layout, d.m);
	for (int i = 0; i < op.n; ++i)
		if (d.values[i] != std::complex<double>(0.0)) op.a[{i, i}] = d.values[i];
	return op;
}

/// p(g) = E(v(g)): indicator of the fixed-point set of phi(g) on X_m.
inline DiagonalFunction word_projection(const Word& g, const Label& label, int m) {
	return cond_expect(op_from_word(g, label, m));
}

/// theta_m(a) = (1/#X_m) sum_x a[x][x].
inline std::complex<double> component_trace(const FinPropOperator& a) {
	std::complex<double> s = 0.0;
	for (const auto& [xy, v] : a.a)
		if (xy.first == xy.second) s += v;
	return s / static_cast<double>(a.n);
}

inline bool op_equal(const FinPropOperator& a, const FinPropOperator& b, double tol = 1e-12) {
	if (a.m != b.m || a.n != b.n) return false;
	for (const auto& [xy, v] : a.a)
		if (std::abs(v - b.at(xy.first, xy.second)) > tol) return false;
	for (const auto& [xy, v] : b.a)
		if (std::abs(v - a.at(xy.first, xy.second)) > tol) return false;
	return true;
}

struct RelationSuiteReport {
	int trials = 0;
	int pass_product = 0;     // v(g) v(h) = v(g*h)
	int pass_adjoint = 0;     // v(g)* = v(g^-1)
	int pass_diagonal = 0;    // E(alternating product) is a 0/1 diagonal
	int pass_expectation = 0; // E(v) = p(g) v*v, g the leading word
	std::vector<std::string> violations; // ordered by trial index
	bool all_passed() const { return violations.empty(); }
};

/// Randomized check of the word-operator identities on component m.
/// Failures are collected, not thrown, so corrupted labels can be probed.
inline RelationSuiteReport relation_suite(const Label& label, int m, int trials,
                                          std::uint64_t seed = 1, int workers = 1) {
	if (trials < 1) throw std::invalid_argument("relation_suite: trials must be >= 1");
	const int k = label.k();
	struct Slot {
		bool product = false, adjoint = false, diagonal = false, expectation = false;
		std::string note;
	};
	std::vector<Slot> slots(trials);

	auto random_word = [&](std::mt19937_64& rng, int max_len) {
		std::uniform_int_distribution<int> len(1, max_len);
		std::uniform_int_distribution<int> letter(-k, k);
		Word w;
		const int l = len(rng);
		for (int i = 0; i < l; ++i) w.letters.push_back(letter(rng));
		return w;
	};

	parallel_for(trials, workers, [&](std::size_t t) {
		std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ull + t);
		Slot& s = slots[t];
		const Word g = random_word(rng, 4);
		const Word h = random_word(rng, 4);

		const FinPropOperator vg = op_from_word(g, label, m);
		const FinPropOperator vh = op_from_word(h, label, m);
		s.product = op_equal(op_mul(vg, vh), op_from_word(word_concat(g, h), label, m));
		s.adjoint = op_equal(op_adjoint(vg), op_from_word(word_inverse(g), label, m));

		// alternating product v(g_1) p(h_1) ... v(g_r) p(h_r)
		std::uniform_int_distribution<int> rdist(1, 3);
		const int r = rdist(rng);
		FinPropOperator v = op_identity(label.layout, m);
		Word lead;
		for (int i = 0; i < r; ++i) {
			const Word gi = random_word(rng, 3);
			const Word hi = random_word(rng, 3);
			lead = word_concat(lead, gi);
			v = op_mul(v, op_from_word(gi, label, m));
			v = op_mul(v, diag_to_op(word_projection(hi, label, m), label.layout));
		}
		const DiagonalFunction ev = cond_expect(v);
		bool zero_one = true;
		for (const auto& c : ev.values)
			if (std::abs(c) > 1e-12 && std::abs(c - 1.0) > 1e-12) zero_one = false;
		s.diagonal = zero_one;

		const FinPropOperator rhs =
		    op_mul(diag_to_op(word_projection(lead, label, m), label.layout),
		           op_mul(op_adjoint(v), v));
		s.expectation = op_equal(diag_to_op(ev, label.layout), rhs);

		if (!(s.product && s.adjoint && s.diagonal && s.expectation)) {
			std::ostringstream os;
			os << "trial " << t << ":";
			if (!s.product) os << " product";
			if (!s.adjoint) os << " adjoint";
			if (!s.diagonal) os << " diagonal";
			if (!s.expectation) os << " expectation";
			s.note = os.str();
		}
	});

	RelationSuiteReport rep;
	rep.trials = trials;
	for (const Slot& s : slots) {
		rep.pass_product += s.product;
		rep.pass_adjoint += s.adjoint;
		rep.pass_diagonal += s.diagonal;
		rep.pass_expectation += s.expectation;
		if (!s.note.empty()) rep.violations.push_back(s.note);
	}
	return rep;
}

} // namespace coarsekit
