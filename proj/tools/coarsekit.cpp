#include <CLI11.hpp>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "coarsekit/json_io.hpp"

namespace ck = coarsekit;
using ck::json;

namespace {

std::vector<int> parse_int_list(const std::string& s) {
	std::vector<int> out;
	std::stringstream ss(s);
	std::string tok;
	while (std::getline(ss, tok, ',')) {
		if (tok.empty()) continue;
		out.push_back(std::stoi(tok));
	}
	if (out.empty()) throw std::invalid_argument("empty integer list: '" + s + "'");
	return out;
}

json read_json_file(const std::string& path) {
	std::ifstream in(path);
	if (!in) throw std::runtime_error("cannot open " + path);
	json j;
	in >> j;
	return j;
}

void write_report(const std::string& out_path, const std::string& text) {
	if (out_path.empty()) {
		std::cout << text << "\n";
		return;
	}
	std::ofstream out(out_path);
	if (!out) throw std::runtime_error("cannot write " + out_path);
	out << text << "\n";
}

ck::BoxSpaceSpec load_tower(const std::string& path) {
	return ck::tower_from_json(read_json_file(path));
}

/// Off-diagonal part of the generating entourage, the component adjacency.
ck::ControlledSet adjacency_of(const ck::BoxSpaceSpec& spec) {
	const ck::ControlledSet tk = ck::cayley_generating_entourage(spec);
	std::vector<std::pair<ck::Point, ck::Point>> p;
	for (const auto& [x, y] : tk.pairs)
		if (x != y) p.emplace_back(x, y);
	return ck::ControlledSet(std::move(p));
}

} // namespace

int main(int argc, char** argv) {
	CLI::App app{"coarsekit: controlled-set algebra, box spaces, and expansion profiles"};
	app.require_subcommand(1);

	std::string tower_path, rel_path, out_path, format = "json";
	std::string sizes_arg, primes_arg, depth_arg = "1", eps_arg, c_arg;
	int radius_r = 1, diam_s = 4, cap = ck::default_enumeration_cap();
	int workers = static_cast<int>(std::thread::hardware_concurrency());
	if (workers < 1) workers = 1;
	std::uint64_t seed = 1;
	int trials = 1000;

	auto add_common = [&](CLI::App* cmd) {
		cmd->add_option("--out", out_path, "output path (default: stdout)");
	};

	CLI::App* gen = app.add_subcommand("gen", "build a tower file");
	CLI::App* gen_cyclic = gen->add_subcommand("cyclic", "cyclic tower Z/m");
	gen_cyclic->add_option("--sizes", sizes_arg, "comma-separated component sizes")->required();
	add_common(gen_cyclic);
	CLI::App* gen_sl2 = gen->add_subcommand("sl2", "SL(2, Z/p) tower");
	gen_sl2->add_option("--primes", primes_arg, "comma-separated primes >= 3")->required();
	add_common(gen_sl2);
	CLI::App* gen_load = gen->add_subcommand("load", "validate and normalize a tower file");
	gen_load->add_option("--tower", tower_path, "tower JSON path")->required();
	add_common(gen_load);
	gen->require_subcommand(1);

	auto add_source = [&](CLI::App* cmd, bool allow_rel) {
		cmd->add_option("--tower", tower_path, "tower JSON path");
		if (allow_rel) cmd->add_option("--rel", rel_path, "controlled-set JSON path");
		add_common(cmd);
	};

	CLI::App* c_label = app.add_subcommand("label", "decompose a relation into partial bijections");
	add_source(c_label, true);
	c_label->add_option("--depth", depth_arg, "entourage power (tower input)");

	CLI::App* c_exp = app.add_subcommand("expansion", "per-component minimum expansion profile");
	add_source(c_exp, true);
	c_exp->add_option("--depth", depth_arg, "bound schedule power");
	c_exp->add_option("--cap", cap, "exhaustive enumeration cap");
	c_exp->add_option("--workers", workers, "worker threads");
	c_exp->add_option("--format", format, "json|csv");

	CLI::App* c_weak = app.add_subcommand("weakexp", "weak-expansion consistency over a depth schedule");
	add_source(c_weak, false);
	c_weak->add_option("--depth", depth_arg, "comma-separated depth schedule");
	c_weak->add_option("--c", c_arg, "expansion constant p/q")->required();
	c_weak->add_option("--cap", cap, "exhaustive enumeration cap");
	c_weak->add_option("--workers", workers, "worker threads");
	c_weak->add_option("--format", format, "json|csv");

	CLI::App* c_folner = app.add_subcommand("folner", "search components for almost-invariant sets");
	add_source(c_folner, false);
	c_folner->add_option("--eps", eps_arg, "tolerance p/q")->required();

	CLI::App* c_spec = app.add_subcommand("spectrum", "adjacency spectral gap per component");
	add_source(c_spec, false);

	CLI::App* c_check = app.add_subcommand("expander-check", "expander conditions for the family");
	add_source(c_check, false);
	c_check->add_option("--c", c_arg, "expansion constant p/q")->required();

	CLI::App* c_fiber = app.add_subcommand("fiber", "best fiber of the depth entourage");
	add_source(c_fiber, false);
	c_fiber->add_option("--depth", depth_arg, "entourage power for the fibered relation");

	CLI::App* c_ula = app.add_subcommand("ula", "bounded-diameter local Folner witnesses");
	add_source(c_ula, false);
	c_ula->add_option("--eps", eps_arg, "tolerance p/q")->required();
	c_ula->add_option("--R", radius_r, "boundary radius");
	c_ula->add_option("--S", diam_s, "diameter cap");

	CLI::App* c_alg = app.add_subcommand("algebra-suite", "word-operator identity suite");
	add_source(c_alg, false);
	c_alg->add_option("--trials", trials, "random trials per component");
	c_alg->add_option("--seed", seed, "64-bit seed");
	c_alg->add_option("--workers", workers, "worker threads");

	try {
		app.parse(argc, argv);
	} catch (const CLI::ParseError& e) {
		const int code = app.exit(e);
		return code == 0 ? 0 : 2;
	}

	try {
		// resolved config embedded in every report; deliberately excludes
		// --workers and --out so reports are byte-identical across both
		json config;

		if (gen->parsed()) {
			ck::BoxSpaceSpec spec;
			if (gen_cyclic->parsed())
				spec = ck::build_cyclic_tower(parse_int_list(sizes_arg));
			else if (gen_sl2->parsed())
				spec = ck::build_sl2_tower(parse_int_list(primes_arg));
			else
				spec = load_tower(tower_path);
			write_report(out_path, ck::tower_to_json(spec).dump(2));
			return 0;
		}

		// every remaining subcommand works over a tower or a raw relation
		std::optional<ck::BoxSpaceSpec> spec;
		ck::ComponentLayout layout;
		ck::ControlledSet base; // T
		if (!tower_path.empty()) {
			spec = load_tower(tower_path);
			layout = spec->layout();
			base = ck::cayley_generating_entourage(*spec);
			config["tower"] = tower_path;
		} else if (!rel_path.empty()) {
			std::tie(layout, base) = ck::controlled_set_from_json(read_json_file(rel_path));
			config["rel"] = rel_path;
		} else {
			std::cerr << "error: need --tower or --rel\n";
			return 2;
		}
		config["truncation_depth"] = layout.num_components();

		if (c_label->parsed()) {
			const int depth = parse_int_list(depth_arg).at(0);
			config["command"] = "label";
			config["depth"] = depth;
			const ck::ControlledSet t =
			    ck::cs_union(ck::cs_power(base, depth), ck::cs_diagonal(layout));
			const ck::Label label = ck::label_decompose(t, layout);
			json rep{{"config", config}, {"label", ck::label_to_json(label)}};
			write_report(out_path, rep.dump(2));
			return 0;
		}

		if (c_exp->parsed()) {
			const int depth = parse_int_list(depth_arg).at(0);
			config["command"] = "expansion";
			config["depth"] = depth;
			config["cap"] = cap;
			const ck::ControlledSet bound = ck::cs_power(base, depth);
			const ck::ExpansionProfile prof = ck::expansion_profile(
			    layout, base, bound, cap, workers, "T^" + std::to_string(depth));
			if (format == "csv") {
				write_report(out_path, ck::profile_to_csv(prof, layout));
			} else {
				json rep{{"config", config}, {"profile", ck::profile_to_json(prof)}};
				write_report(out_path, rep.dump(2));
			}
			return 0;
		}

		if (c_weak->parsed()) {
			const std::vector<int> depths = parse_int_list(depth_arg);
			const ck::Ratio c = ck::Ratio::parse(c_arg);
			config["command"] = "weakexp";
			config["depths"] = depths;
			config["c"] = c.str();
			config["cap"] = cap;
			const ck::WeakExpanderReport rep =
			    ck::weak_expander_report(layout, base, depths, c, cap, workers);
			if (format == "csv") {
				std::ostringstream os;
				os << "depth,m,min\n";
				for (std::size_t d = 0; d < rep.depths.size(); ++d)
					for (std::size_t m = 0; m < rep.minima[d].size(); ++m)
						os << rep.depths[d] << "," << m << "," << rep.minima[d][m].str() << "\n";
				write_report(out_path, os.str());
			} else {
				json out{{"config", config}, {"report", ck::weak_report_to_json(rep)}};
				write_report(out_path, out.dump(2));
			}
			return rep.consistent ? 0 : 1;
		}

		if (c_folner->parsed()) {
			const ck::Ratio eps = ck::Ratio::parse(eps_arg);
			config["command"] = "folner";
			config["eps"] = eps.str();
			json rows = json::array();
			bool any = false;
			for (int m = 0; m < layout.num_components(); ++m) {
				const auto w = ck::folner_search(layout, m, base, eps);
				if (w) {
					any = true;
					rows.push_back(ck::folner_to_json(*w));
				} else {
					rows.push_back(json{{"component", m}, {"witness", nullptr}});
				}
			}
			json rep{{"config", config}, {"components", rows}};
			write_report(out_path, rep.dump(2));
			return any ? 0 : 1;
		}

		if (c_spec->parsed()) {
			config["command"] = "spectrum";
			const ck::ControlledSet adj = spec ? adjacency_of(*spec) : [&] {
				std::vector<std::pair<ck::Point, ck::Point>> p;
				for (const auto& [x, y] : base.pairs)
					if (x != y) p.emplace_back(x, y);
				return ck::ControlledSet(std::move(p));
			}();
			json rows = json::array();
			for (int m = 0; m < layout.num_components(); ++m)
				rows.push_back(ck::spectral_to_json(ck::spectral_report(layout, adj, m)));
			json rep{{"config", config}, {"components", rows}};
			write_report(out_path, rep.dump(2));
			return 0;
		}

		if (c_check->parsed()) {
			const ck::Ratio c = ck::Ratio::parse(c_arg);
			config["command"] = "expander-check";
			config["c"] = c.str();
			const ck::ControlledSet adj = spec ? adjacency_of(*spec) : base;
			const ck::ExpanderVerdict v = ck::expander_check(layout, adj, c);
			json rep{{"config", config}, {"verdict", ck::expander_verdict_to_json(v)}};
			write_report(out_path, rep.dump(2));
			return v.ok ? 0 : 1;
		}

		if (c_fiber->parsed()) {
			const int depth = parse_int_list(depth_arg).at(0);
			config["command"] = "fiber";
			config["depth"] = depth;
			const ck::ControlledSet f = ck::cs_power(base, depth);
			const ck::ControlledSet t =
			    ck::cs_union(base, ck::cs_diagonal(layout));
			json rows = json::array();
			for (int m = 0; m < layout.num_components(); ++m)
				rows.push_back(ck::fiber_to_json(ck::best_fiber(layout, f, t, m)));
			json rep{{"config", config}, {"components", rows}};
			write_report(out_path, rep.dump(2));
			return 0;
		}

		if (c_ula->parsed()) {
			const ck::Ratio eps = ck::Ratio::parse(eps_arg);
			config["command"] = "ula";
			config["eps"] = eps.str();
			config["R"] = radius_r;
			config["S"] = diam_s;
			const ck::ComponentMetric cm = ck::ComponentMetric::from_adjacency(layout, base);
			json rows = json::array();
			bool any = false;
			for (int m = 0; m < layout.num_components(); ++m) {
				const auto w =
				    ck::ula_witness(cm, ck::ps_component(layout, m), eps, radius_r, diam_s, m);
				if (w) {
					any = true;
					rows.push_back(
					    json{{"component", m}, {"witness", ck::point_set_to_json(*w)}});
				} else {
					rows.push_back(json{{"component", m}, {"witness", nullptr}});
				}
			}
			json rep{{"config", config}, {"components", rows}};
			write_report(out_path, rep.dump(2));
			return any ? 0 : 1;
		}

		if (c_alg->parsed()) {
			config["command"] = "algebra-suite";
			config["trials"] = trials;
			config["seed"] = seed;
			const ck::ControlledSet t = ck::cs_union(base, ck::cs_diagonal(layout));
			const ck::Label label = ck::label_decompose(t, layout);
			json rows = json::array();
			bool all_ok = true;
			for (int m = 0; m < layout.num_components(); ++m) {
				const ck::RelationSuiteReport rep =
				    ck::relation_suite(label, m, trials, seed, workers);
				all_ok = all_ok && rep.all_passed();
				json row = ck::relation_suite_to_json(rep);
				row["component"] = m;
				rows.push_back(std::move(row));
			}
			json rep{{"config", config}, {"components", rows}};
			write_report(out_path, rep.dump(2));
			return all_ok ? 0 : 1;
		}

		std::cerr << "error: unknown subcommand\n";
		return 2;
	} catch (const std::exception& e) {
		std::cerr << "error: " << e.what() << "\n";
		return 2;
	}
}
