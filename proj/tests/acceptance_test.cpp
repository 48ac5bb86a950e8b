// Acceptance gate: one line per criterion, PASS or FAIL, exit nonzero if
// any criterion fails. Every verdict here is recomputed from scratch.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "coarsekit/algebra.hpp"
#include "coarsekit/expander_check.hpp"
#include "coarsekit/expansion.hpp"
#include "coarsekit/json_io.hpp"
#include "coarsekit/spectral.hpp"
#include "coarsekit/tower.hpp"

using namespace coarsekit;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void report(const std::string& name, bool ok, double seconds, const std::string& note = "") {
	std::cout << (ok ? "PASS" : "FAIL") << " - " << name << " (" << seconds << " s)";
	if (!note.empty()) std::cout << " -- " << note;
	std::cout << std::endl;
	if (!ok) ++failures;
}

struct Timer {
	std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
	double seconds() const {
		return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
	}
};

ControlledSet random_bounded_degree(const ComponentLayout& layout, std::mt19937& rng,
                                    int max_degree, int attempts) {
	std::vector<int> row(layout.total(), 0), col(layout.total(), 0);
	std::vector<std::pair<Point, Point>> pairs;
	for (Point x = 0; x < layout.total(); ++x) pairs.emplace_back(x, x);
	std::uniform_int_distribution<int> comp(0, layout.num_components() - 1);
	for (int t = 0; t < attempts; ++t) {
		const int m = comp(rng);
		std::uniform_int_distribution<int> pt(0, layout.sizes[m] - 1);
		const Point x = layout.global(m, pt(rng)), y = layout.global(m, pt(rng));
		if (x == y || row[x] >= max_degree || col[y] >= max_degree) continue;
		++row[x];
		++col[y];
		pairs.emplace_back(x, y);
	}
	return ControlledSet(std::move(pairs));
}

int max_offdiag_degree(const ControlledSet& t, const ComponentLayout& layout) {
	std::vector<int> row(layout.total(), 0), col(layout.total(), 0);
	int k = 0;
	for (const auto& [x, y] : t.pairs)
		if (x != y) k = std::max({k, ++row[x], ++col[y]});
	return k;
}

// exhaustive minimum edge coloring of the off-diagonal bipartite multigraph
bool colorable_with(const std::vector<std::pair<Point, Point>>& edges, int colors,
                    std::size_t at, std::vector<std::vector<bool>>& ru,
                    std::vector<std::vector<bool>>& cu) {
	if (at == edges.size()) return true;
	const auto [r, c] = edges[at];
	for (int col = 0; col < colors; ++col) {
		if (ru[r][col] || cu[c][col]) continue;
		ru[r][col] = cu[c][col] = true;
		if (colorable_with(edges, colors, at + 1, ru, cu)) return true;
		ru[r][col] = cu[c][col] = false;
	}
	return false;
}

int oracle_min_colors(const ControlledSet& t, const ComponentLayout& layout) {
	std::vector<std::pair<Point, Point>> edges;
	for (const auto& [x, y] : t.pairs)
		if (x != y) edges.emplace_back(x, y);
	if (edges.empty()) return 0;
	for (int colors = 1;; ++colors) {
		std::vector<std::vector<bool>> ru(layout.total(), std::vector<bool>(colors, false));
		std::vector<std::vector<bool>> cu(layout.total(), std::vector<bool>(colors, false));
		if (colorable_with(edges, colors, 0, ru, cu)) return colors;
	}
}

bool is_cyclic_interval(const PointSet& y, const ComponentLayout& layout) {
	if (y.empty()) return false;
	const int m = layout.component_of(y.points.front());
	const int n = layout.sizes[m];
	std::vector<char> in(n, 0);
	for (Point p : y.points) {
		if (layout.component_of(p) != m) return false;
		in[layout.local_of(p)] = 1;
	}
	int gaps = 0;
	for (int i = 0; i < n; ++i)
		if (in[i] && !in[(i + 1) % n]) ++gaps;
	return gaps == 1 || static_cast<int>(y.size()) == n;
}

void criterion_label_optimality() {
	Timer timer;
	std::mt19937 rng(101);
	bool ok = true;
	std::string note;
	for (int trial = 0; trial < 200 && ok; ++trial) {
		// half the trials stay tiny (one component, few edges) so the
		// exhaustive coloring oracle can be consulted
		const bool small = trial % 2 == 0;
		std::uniform_int_distribution<int> ncomp(1, small ? 1 : 3);
		std::uniform_int_distribution<int> size(small ? 3 : 8, small ? 12 : 64);
		std::vector<int> sizes(ncomp(rng));
		for (int& s : sizes) s = size(rng);
		const ComponentLayout layout(sizes);
		const ControlledSet t =
		    random_bounded_degree(layout, rng, 8, small ? layout.total() : 4 * layout.total());
		const Label label = label_decompose(t, layout);

		ControlledSet covered = label.parts[0].graph();
		for (int i = 1; i <= label.k(); ++i) {
			if (!label.parts[i].valid()) ok = false;
			covered = cs_union(covered, label.parts[i].graph());
		}
		if (covered != t) ok = false;
		if (label.k() != max_offdiag_degree(t, layout)) ok = false;
		if (small && label.k() != oracle_min_colors(t, layout)) ok = false;
		if (!ok) note = "trial " + std::to_string(trial);
	}
	const double s = timer.seconds();
	report("label optimality on 200 random controlled sets", ok && s < 60.0, s, note);
}

void criterion_solver_equivalence() {
	Timer timer;
	std::mt19937 rng(202);
	bool ok = true;
	for (int trial = 0; trial < 100 && ok; ++trial) {
		const int n = 8 + static_cast<int>(rng() % 9);
		const ComponentLayout layout({n});
		std::vector<std::pair<Point, Point>> p;
		std::uniform_int_distribution<int> pt(0, n - 1);
		for (int t = 0; t < 3 * n; ++t) p.emplace_back(pt(rng), pt(rng));
		const ControlledSet t(std::move(p));
		std::vector<Point> pool;
		std::bernoulli_distribution take(0.8);
		for (int i = 0; i < n; ++i)
			if (take(rng)) pool.push_back(i);
		if (pool.empty()) pool.push_back(0);
		const PointSet b(std::move(pool));
		if (min_expansion_bruteforce(t, b, layout, 24).value !=
		    min_expansion_mincut(t, b, layout).value)
			ok = false;
	}
	const double s = timer.seconds();
	report("min-cut solver equals brute force on 100 random instances", ok && s < 60.0, s);
}

void criterion_folner_on_cyclic() {
	Timer timer;
	const BoxSpaceSpec spec = build_cyclic_tower({6, 12, 25, 30, 42, 60, 100, 150, 200});
	const ComponentLayout layout = spec.layout();
	const ControlledSet t = cayley_generating_entourage(spec);
	bool ok = true;
	std::string note;
	for (int m = 0; m < layout.num_components() && ok; ++m) {
		if (layout.sizes[m] < 25) continue;
		const auto w = folner_search(layout, m, t, Ratio(1, 10));
		if (!w || !is_cyclic_interval(w->set, layout) || !(w->ratio < Ratio(11, 10))) {
			ok = false;
			note = "component " + std::to_string(m);
		}
	}
	const ExpansionProfile prof = expansion_profile(layout, t, t, 20, 8, "T^1");
	for (std::size_t m = 1; m < prof.rows.size() && ok; ++m)
		if (!(prof.rows[m].min <= prof.rows[m - 1].min)) {
			ok = false;
			note = "profile not non-increasing";
		}
	const double s = timer.seconds();
	report("almost-invariant interval witnesses on cyclic towers up to 200", ok && s < 30.0, s,
	       note);
}

void criterion_expander_family() {
	Timer timer;
	const BoxSpaceSpec spec = build_sl2_tower({3, 5, 7, 11, 13});
	const ComponentLayout layout = spec.layout();
	const ControlledSet tk = cayley_generating_entourage(spec);
	std::vector<std::pair<Point, Point>> offdiag;
	for (const auto& [x, y] : tk.pairs)
		if (x != y) offdiag.emplace_back(x, y);
	const ControlledSet adj(std::move(offdiag));
	bool ok = true;
	std::string note;

	const ExpanderVerdict v = expander_check(layout, adj, Ratio(1, 10));
	if (!v.connected_all || !v.regular_all || v.common_degree != 4) {
		ok = false;
		note = "not a connected 4-regular family";
	}
	for (int m = 0; m < 2 && ok; ++m) { // p = 3 and p = 5 decided exactly
		const auto& c = v.components[m];
		const bool exact =
		    c.method == "exhaustive" || c.method == "small-boundary" || c.method == "trace";
		if (!exact || !c.expansion_ok) {
			ok = false;
			note = "p in {3,5} not certified exactly (method " + c.method + ")";
		}
	}
	for (int m = 0; m < layout.num_components() && ok; ++m) {
		const SpectralReport sr = spectral_report(layout, adj, m);
		if (!(sr.gap >= 0.2) || !(sr.residual <= 1e-9)) {
			ok = false;
			note = "spectral gap too small in component " + std::to_string(m);
		}
	}
	WeakExpanderReport rep;
	if (ok) {
		rep = weak_expander_report(layout, tk, {1, 2, 3}, Ratio(1, 10), 20, 8);
		if (!rep.consistent) {
			ok = false;
			note = "weak-expansion verdict inconsistent at c = 1/10";
		}
	}
	// profile minima frozen at the first verified run
	if (ok) {
		std::ostringstream got;
		for (std::size_t d = 0; d < rep.minima.size(); ++d) {
			got << "depth" << rep.depths[d] << ":";
			for (const Ratio& r : rep.minima[d]) got << " " << r.str();
			got << ";";
		}
		const std::string golden =
		    "depth1: 13/5 17/5 17/5 17/5 17/5;"
		    "depth2: 23/13 43/17 35/13 35/13 35/13;"
		    "depth3: 24/23 91/43 7/3 83/35 83/35;";
		if (got.str() != golden) {
			ok = false;
			note = "profile drifted from golden: " + got.str();
		}
	}
	const double s = timer.seconds();
	report("SL2 towers form a certified expander family", ok && s < 300.0, s, note);
}

void criterion_fiber_pigeonhole() {
	Timer timer;
	std::mt19937 rng(505);
	bool ok = true;
	for (int trial = 0; trial < 500 && ok; ++trial) {
		const int n = 5 + static_cast<int>(rng() % 26);
		const ComponentLayout layout({n});
		std::uniform_int_distribution<int> pt(0, n - 1);
		std::vector<std::pair<Point, Point>> fp, tp;
		for (int e = 0; e < 2 * n; ++e) fp.emplace_back(pt(rng), pt(rng));
		for (int e = 0; e < 2 * n; ++e) tp.emplace_back(pt(rng), pt(rng));
		for (int i = 0; i < n; ++i) tp.emplace_back(i, i);
		const ControlledSet f(std::move(fp)), t(std::move(tp));
		const FiberResult r = best_fiber(layout, f, t, 0);
		if (!(r.ratio <= r.relation_ratio)) ok = false;
	}
	const double s = timer.seconds();
	report("fiber pigeonhole on 500 random relations", ok && s < 30.0, s);
}

void criterion_ball_growth() {
	Timer timer;
	const BoxSpaceSpec spec = build_sl2_tower({3, 5, 7});
	const ComponentLayout layout = spec.layout();
	const ControlledSet t = cayley_generating_entourage(spec);
	const WeakExpanderReport rep = weak_expander_report(layout, t, {1, 2, 3}, Ratio(1, 10), 20, 8);
	bool ok = true;
	std::string note;
	for (std::size_t d = 0; d < rep.depths.size() && ok; ++d) {
		const int n = rep.depths[d];
		for (int m = 0; m < layout.num_components() && ok; ++m) {
			if (!(rep.minima[d][m] > Ratio(1))) continue; // not expansion-positive there
			if (layout.sizes[m] <= n) {
				ok = false;
				note = "component too small for its depth";
			}
			for (int i = 0; i < layout.sizes[m] && ok; ++i)
				if (!ball_growth_check(layout, t, layout.global(m, i), n)) {
					ok = false;
					note = "ball growth stalled at depth " + std::to_string(n);
				}
		}
	}
	const double s = timer.seconds();
	report("balls grow strictly wherever expansion is positive (SL2 p <= 7)", ok && s < 60.0, s,
	       note);
}

void criterion_operator_identities() {
	Timer timer;
	bool ok = true;
	std::string note;
	const BoxSpaceSpec cyc = build_cyclic_tower({6, 12});
	const BoxSpaceSpec sl2 = build_sl2_tower({3, 5});
	std::mt19937 rng(707);
	for (const BoxSpaceSpec* spec : {&cyc, &sl2}) {
		const ComponentLayout layout = spec->layout();
		const ControlledSet t =
		    cs_union(cayley_generating_entourage(*spec), cs_diagonal(layout));
		const Label label = label_decompose(t, layout);
		for (int m = 0; m < layout.num_components() && ok; ++m) {
			const RelationSuiteReport rep = relation_suite(label, m, 1000, 11, 8);
			if (!rep.all_passed()) {
				ok = false;
				note = rep.violations.front();
			}
			std::uniform_int_distribution<int> letter(-label.k(), label.k());
			std::uniform_int_distribution<int> len(1, 4);
			for (int trial = 0; trial < 200 && ok; ++trial) {
				Word g;
				for (int i = len(rng); i > 0; --i) g.letters.push_back(letter(rng));
				const std::complex<double> th =
				    component_trace(diag_to_op(word_projection(g, label, m), layout));
				const PartialBijection pb = word_bijection(g, label);
				int fixed = 0;
				for (std::size_t i = 0; i < pb.dom.size(); ++i)
					if (layout.component_of(pb.dom[i]) == m && pb.dom[i] == pb.img[i]) ++fixed;
				if (std::abs(th - std::complex<double>(fixed / double(layout.sizes[m]))) > 1e-12) {
					ok = false;
					note = "trace vs fixed-point count";
				}
			}
		}
	}
	const double s = timer.seconds();
	report("word-operator identities on cyclic and SL2 labels", ok && s < 120.0, s, note);
}

void criterion_local_almost_invariance() {
	Timer timer;
	bool ok = true;
	std::string note;
	const BoxSpaceSpec cyc = build_cyclic_tower({6, 12, 25, 30, 60, 120});
	const ComponentLayout layout = cyc.layout();
	const ControlledSet t = cayley_generating_entourage(cyc);
	const ComponentMetric cm = ComponentMetric::from_adjacency(layout, t);
	for (int m = 0; m < layout.num_components() && ok; ++m) {
		const auto fw = folner_search(layout, m, t, Ratio(1, 10));
		if (!fw) continue;
		const int s_cap = diameter_of(cm, fw->set);
		const auto uw = ula_witness(cm, ps_component(layout, m), Ratio(1, 10), 1, s_cap, m);
		if (!uw) {
			ok = false;
			note = "no local witness on component " + std::to_string(m);
		}
	}
	if (ok) {
		const BoxSpaceSpec sl2 = build_sl2_tower({5});
		const ComponentMetric scm =
		    ComponentMetric::from_adjacency(sl2.layout(), cayley_generating_entourage(sl2));
		if (ula_witness(scm, ps_component(sl2.layout(), 0), Ratio(1, 20), 1, 4, 0)) {
			ok = false;
			note = "unexpected witness on SL2 p = 5";
		}
	}
	const double s = timer.seconds();
	report("local almost-invariance matches the global search", ok && s < 60.0, s, note);
}

void criterion_cli_determinism() {
	Timer timer;
	bool ok = true;
	std::string note;
	const std::string bin = CLI_BINARY_PATH;
	const fs::path dir = fs::temp_directory_path() / "coarsekit_acceptance";
	fs::create_directories(dir);
	const std::string tower = (dir / "tower.json").string();
	auto shell = [&](const std::string& cmd) { return std::system(cmd.c_str()) == 0; };
	auto slurp = [&](const fs::path& p) {
		std::ifstream in(p, std::ios::binary);
		std::stringstream ss;
		ss << in.rdbuf();
		return ss.str();
	};
	if (!shell(bin + " gen cyclic --sizes 6,12,30 --out " + tower)) ok = false;
	const std::vector<std::string> commands = {
	    "expansion --tower " + tower + " --depth 2",
	    "weakexp --tower " + tower + " --depth 1,2 --c 1/10",
	    "algebra-suite --tower " + tower + " --trials 300",
	};
	for (const std::string& cmd : commands) {
		if (!ok) break;
		const fs::path a = dir / "w1.json", b = dir / "w8.json";
		shell(bin + " " + cmd + " --workers 1 --out " + a.string());
		shell(bin + " " + cmd + " --workers 8 --out " + b.string());
		if (slurp(a).empty() || slurp(a) != slurp(b)) {
			ok = false;
			note = "output differs for: " + cmd;
		}
	}
	fs::remove_all(dir);
	const double s = timer.seconds();
	report("CLI reports are byte-identical across worker counts", ok, s, note);
}

} // namespace

int main() {
	criterion_label_optimality();
	criterion_solver_equivalence();
	criterion_folner_on_cyclic();
	criterion_expander_family();
	criterion_fiber_pigeonhole();
	criterion_ball_growth();
	criterion_operator_identities();
	criterion_local_almost_invariance();
	criterion_cli_determinism();
	std::cout << (failures == 0 ? "all criteria passed" : "criteria failed: ") << (failures == 0 ? "" : std::to_string(failures))
	          << "\n";
	return failures == 0 ? 0 : 1;
}
