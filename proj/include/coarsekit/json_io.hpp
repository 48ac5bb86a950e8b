#pragma once

#include <nlohmann/json.hpp>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "algebra.hpp"
#include "controlled_set.hpp"
#include "expander_check.hpp"
#include "expansion.hpp"
#include "label.hpp"
#include "layout.hpp"
#include "rational.hpp"
#include "spectral.hpp"
#include "tower.hpp"

namespace coarsekit {

using nlohmann::json;

// ---- controlled sets: {"sizes":[...], "pairs":[[m,i,j],...]} (local indices)

inline json controlled_set_to_json(const ComponentLayout& layout, const ControlledSet& t) {
	if (!cs_block_diagonal(t, layout))
		throw std::invalid_argument("controlled_set_to_json: relation not block-diagonal");
	json pairs = json::array();
	for (const auto& [x, y] : t.pairs) {
		const int m = layout.component_of(x);
		pairs.push_back({m, layout.local_of(x), layout.local_of(y)});
	}
	return json{{"sizes", layout.sizes}, {"pairs", pairs}};
}

inline std::pair<ComponentLayout, ControlledSet> controlled_set_from_json(const json& j) {
	const ComponentLayout layout(j.at("sizes").get<std::vector<int>>());
	std::vector<std::pair<Point, Point>> pairs;
	for (const auto& e : j.at("pairs")) {
		if (!e.is_array() || e.size() != 3)
			throw std::invalid_argument("controlled set JSON: each pair must be [m,i,j]");
		const int m = e[0].get<int>(), a = e[1].get<int>(), b = e[2].get<int>();
		if (m < 0 || m >= layout.num_components() || a < 0 || a >= layout.sizes[m] || b < 0 ||
		    b >= layout.sizes[m])
			throw std::invalid_argument("controlled set JSON: pair out of range");
		pairs.emplace_back(layout.global(m, a), layout.global(m, b));
	}
	return {layout, ControlledSet(std::move(pairs))};
}

// ---- labels: {"k":k, "parts":[{"dom":[...],"img":[...]},...]} (global indices,
//      off-diagonal parts only; the diagonal is implicit)

inline json label_to_json(const Label& label) {
	json parts = json::array();
	for (int i = 1; i <= label.k(); ++i)
		parts.push_back(json{{"dom", label.parts[i].dom}, {"img", label.parts[i].img}});
	return json{{"k", label.k()}, {"parts", parts}};
}

inline std::vector<PartialBijection> label_parts_from_json(const json& j) {
	std::vector<PartialBijection> parts;
	for (const auto& p : j.at("parts")) {
		PartialBijection pb;
		pb.dom = p.at("dom").get<std::vector<Point>>();
		pb.img = p.at("img").get<std::vector<Point>>();
		if (!pb.valid()) throw std::invalid_argument("label JSON: part is not a partial bijection");
		parts.push_back(std::move(pb));
	}
	if (static_cast<int>(parts.size()) != j.at("k").get<int>())
		throw std::invalid_argument("label JSON: k does not match the part count");
	return parts;
}

// ---- towers: {"generators":[names], "components":[{"size":n,"perms":[[...],...],"identity":i}]}

inline json tower_to_json(const BoxSpaceSpec& spec) {
	json comps = json::array();
	for (const auto& q : spec.components)
		comps.push_back(json{{"size", q.size}, {"perms", q.generators}, {"identity", q.identity}});
	return json{{"generators", spec.generator_names}, {"components", comps}};
}

inline BoxSpaceSpec tower_from_json(const json& j) {
	BoxSpaceSpec spec;
	spec.kind = TowerKind::Generic;
	spec.generator_names = j.at("generators").get<std::vector<std::string>>();
	const int ng = static_cast<int>(spec.generator_names.size());
	if (ng == 0) throw std::invalid_argument("tower JSON: empty generator list");
	for (const auto& c : j.at("components")) {
		FiniteQuotientAction q;
		q.size = c.at("size").get<int>();
		q.identity = c.at("identity").get<int>();
		q.generators = c.at("perms").get<std::vector<std::vector<int>>>();
		if (q.size < 1 || q.identity < 0 || q.identity >= q.size)
			throw std::invalid_argument("tower JSON: bad component size or identity");
		if (static_cast<int>(q.generators.size()) != ng)
			throw std::invalid_argument("tower JSON: generator count mismatch");
		for (const auto& perm : q.generators) {
			if (static_cast<int>(perm.size()) != q.size)
				throw std::invalid_argument("tower JSON: permutation length mismatch");
			std::vector<char> hit(q.size, 0);
			for (int v : perm) {
				if (v < 0 || v >= q.size || hit[v])
					throw std::invalid_argument("tower JSON: not a permutation");
				hit[v] = 1;
			}
		}
		spec.components.push_back(std::move(q));
	}
	if (spec.components.empty()) throw std::invalid_argument("tower JSON: no components");

	// identity generator and the inverse involution, deduced from the
	// permutations (they must agree across every component)
	auto is_identity = [&](int g) {
		for (const auto& q : spec.components)
			for (int x = 0; x < q.size; ++x)
				if (q.generators[g][x] != x) return false;
		return true;
	};
	auto are_inverse = [&](int g, int h) {
		for (const auto& q : spec.components)
			for (int x = 0; x < q.size; ++x)
				if (q.generators[g][q.generators[h][x]] != x) return false;
		return true;
	};
	spec.identity_generator = -1;
	for (int g = 0; g < ng; ++g)
		if (is_identity(g)) {
			spec.identity_generator = g;
			break;
		}
	if (spec.identity_generator < 0)
		throw std::invalid_argument("tower JSON: no identity generator");
	spec.inverse_generator.assign(ng, -1);
	for (int g = 0; g < ng; ++g) {
		if (spec.inverse_generator[g] >= 0) continue;
		for (int h = 0; h < ng; ++h)
			if (are_inverse(g, h)) {
				spec.inverse_generator[g] = h;
				spec.inverse_generator[h] = g;
				break;
			}
		if (spec.inverse_generator[g] < 0)
			throw std::invalid_argument("tower JSON: generator set not symmetric");
	}
	return spec;
}

// ---- operators: {"m":m, "entries":[[x,y,"re","im"],...]} (local indices)

inline std::string real_str(double v) {
	std::ostringstream os;
	os.precision(17);
	os << v;
	return os.str();
}

inline json operator_to_json(const FinPropOperator& op) {
	json entries = json::array();
	for (const auto& [xy, v] : op.a)
		entries.push_back({xy.first, xy.second, real_str(v.real()), real_str(v.imag())});
	return json{{"m", op.m}, {"entries", entries}};
}

inline FinPropOperator operator_from_json(const json& j, const ComponentLayout& layout) {
	FinPropOperator op;
	op.m = j.at("m").get<int>();
	if (op.m < 0 || op.m >= layout.num_components())
		throw std::invalid_argument("operator JSON: bad component index");
	op.n = layout.sizes[op.m];
	op.base = layout.global(op.m, 0);
	for (const auto& e : j.at("entries")) {
		if (!e.is_array() || e.size() != 4)
			throw std::invalid_argument("operator JSON: each entry must be [x,y,re,im]");
		const int x = e[0].get<int>(), y = e[1].get<int>();
		if (x < 0 || x >= op.n || y < 0 || y >= op.n)
			throw std::invalid_argument("operator JSON: entry out of range");
		op.a[{x, y}] = {std::stod(e[2].get<std::string>()), std::stod(e[3].get<std::string>())};
	}
	return op;
}

// ---- result reports

inline json point_set_to_json(const PointSet& s) { return json(s.points); }

inline json profile_to_json(const ExpansionProfile& profile) {
	json rows = json::array();
	for (const auto& r : profile.rows)
		rows.push_back(json{{"component", r.component},
		                    {"min", r.min.str()},
		                    {"witness", point_set_to_json(r.witness)},
		                    {"bound", profile.bound_desc},
		                    {"method", r.method}});
	return json{{"bound", profile.bound_desc}, {"components", rows}};
}

inline std::string profile_to_csv(const ExpansionProfile& profile, const ComponentLayout& layout) {
	std::ostringstream os;
	os << "m,n,min\n";
	for (const auto& r : profile.rows)
		os << r.component << "," << layout.sizes[r.component] << "," << r.min.str() << "\n";
	return os.str();
}

inline json weak_report_to_json(const WeakExpanderReport& rep) {
	json rows = json::array();
	for (std::size_t d = 0; d < rep.depths.size(); ++d) {
		json mins = json::array();
		for (const auto& r : rep.minima[d]) mins.push_back(r.str());
		rows.push_back(json{{"depth", rep.depths[d]},
		                    {"minima", mins},
		                    {"tail_start", rep.tail_start[d]}});
	}
	return json{{"c", rep.c.str()},
	            {"truncation_depth", rep.truncation_depth},
	            {"rows", rows},
	            {"consistent", rep.consistent}};
}

inline json folner_to_json(const FolnerWitness& w) {
	return json{{"component", w.component},
	            {"eps", w.eps.str()},
	            {"ratio", w.ratio.str()},
	            {"witness", point_set_to_json(w.set)}};
}

inline json fiber_to_json(const FiberResult& r) {
	return json{{"center", r.center},
	            {"fiber", point_set_to_json(r.fiber)},
	            {"ratio", r.ratio.str()},
	            {"relation_ratio", r.relation_ratio.str()}};
}

inline json spectral_to_json(const SpectralReport& r) {
	return json{{"component", r.component}, {"lambda1", r.lambda1},   {"lambda2", r.lambda2},
	            {"gap", r.gap},             {"residual", r.residual}, {"degenerate", r.degenerate}};
}

inline json expander_verdict_to_json(const ExpanderVerdict& v) {
	json comps = json::array();
	for (const auto& c : v.components) {
		json row{{"component", c.component},
		         {"connected", c.connected},
		         {"degree_min", c.degree_min},
		         {"degree_max", c.degree_max},
		         {"method", c.method},
		         {"expansion_ok", c.expansion_ok}};
		if (!c.expansion_ok && !c.witness.empty()) {
			row["witness"] = point_set_to_json(c.witness);
			row["witness_ratio"] = c.witness_ratio.str();
		}
		if (c.method == "tanner") row["tanner_bound"] = c.tanner_bound;
		comps.push_back(std::move(row));
	}
	return json{{"c", v.c.str()},
	            {"connected_all", v.connected_all},
	            {"regular_all", v.regular_all},
	            {"sizes_increasing", v.sizes_increasing},
	            {"expansion_all", v.expansion_all},
	            {"common_degree", v.common_degree},
	            {"ok", v.ok},
	            {"components", comps}};
}

inline json relation_suite_to_json(const RelationSuiteReport& rep) {
	return json{{"trials", rep.trials},
	            {"pass_product", rep.pass_product},
	            {"pass_adjoint", rep.pass_adjoint},
	            {"pass_diagonal", rep.pass_diagonal},
	            {"pass_expectation", rep.pass_expectation},
	            {"violations", rep.violations},
	            {"all_passed", rep.all_passed()}};
}

} // namespace coarsekit
