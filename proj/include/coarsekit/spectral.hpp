#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "controlled_set.hpp"
#include "layout.hpp"

namespace coarsekit {

/// Top of the adjacency spectrum of one component. Floating point is used
/// here only; every accept/reject verdict elsewhere stays exact.
struct SpectralReport {
	int component = 0;
	double lambda1 = 0.0;
	double lambda2 = 0.0;
	double gap = 0.0;      // lambda1 - lambda2
	double residual = 0.0; // max ||A v - lambda v||_2 over the two pairs
	bool degenerate = false; // single vertex: no second eigenvalue
};

namespace detail {

/// Deflated power iteration on the shifted matrix A + shift*I. Rows are
/// adjacency lists; returns (eigenvalue of A, eigenvector, residual).
inline void power_pair(const std::vector<std::vector<int>>& rows, double shift,
                       const std::vector<double>* deflate, std::uint64_t seed,
                       double& value, std::vector<double>& vec, double& residual) {
	const int n = static_cast<int>(rows.size());
	vec.assign(n, 0.0);
	// deterministic start vector from a simple LCG
	std::uint64_t s = seed * 6364136223846793005ull + 1442695040888963407ull;
	for (int i = 0; i < n; ++i) {
		s = s * 6364136223846793005ull + 1442695040888963407ull;
		vec[i] = 0.25 + static_cast<double>(s >> 40) / static_cast<double>(1ull << 24);
	}
	std::vector<double> next(n);
	auto project = [&] {
		if (!deflate) return;
		double dot = 0.0;
		for (int i = 0; i < n; ++i) dot += vec[i] * (*deflate)[i];
		for (int i = 0; i < n; ++i) vec[i] -= dot * (*deflate)[i];
	};
	auto normalize = [&] {
		double nrm = 0.0;
		for (double v : vec) nrm += v * v;
		nrm = std::sqrt(nrm);
		if (nrm == 0.0) throw std::runtime_error("power_pair: iterate vanished");
		for (double& v : vec) v /= nrm;
	};
	project();
	normalize();
	value = 0.0;
	for (int iter = 0; iter < 200000; ++iter) {
		for (int i = 0; i < n; ++i) {
			double acc = shift * vec[i];
			for (int j : rows[i]) acc += vec[j];
			next[i] = acc;
		}
		vec.swap(next);
		project();
		normalize();
		// Rayleigh quotient and residual of the normalized iterate
		double lam = 0.0;
		for (int i = 0; i < n; ++i) {
			double acc = shift * vec[i];
			for (int j : rows[i]) acc += vec[j];
			next[i] = acc;
			lam += vec[i] * acc;
		}
		double res = 0.0;
		for (int i = 0; i < n; ++i) {
			const double d = next[i] - lam * vec[i];
			res += d * d;
		}
		res = std::sqrt(res);
		if (res <= 1e-10) {
			value = lam - shift;
			residual = res;
			return;
		}
		value = lam - shift;
		residual = res;
	}
	if (residual > 1e-9) throw std::runtime_error("power_pair: iteration did not converge");
}

} // namespace detail

/// lambda1 and lambda2 (second largest signed eigenvalue) of the symmetric
/// adjacency relation restricted to component m. Dense solve up to n = 512,
/// shifted deflated power iteration beyond that.
inline SpectralReport spectral_report(const ComponentLayout& layout, const ControlledSet& adj,
                                      int m) {
	if (m < 0 || m >= layout.num_components())
		throw std::out_of_range("spectral_report: component index");
	const int n = layout.sizes[m];
	const Point base = layout.global(m, 0);
	SpectralReport rep;
	rep.component = m;
	if (n == 1) {
		rep.lambda1 = adj.contains(base, base) ? 1.0 : 0.0;
		rep.lambda2 = rep.lambda1;
		rep.gap = 0.0;
		rep.degenerate = true;
		return rep;
	}

	std::vector<std::vector<int>> rows(n);
	for (const auto& [x, y] : adj.pairs) {
		if (layout.component_of(y) != m) continue;
		if (layout.component_of(x) != m)
			throw std::invalid_argument("spectral_report: relation not block-diagonal");
		if (x != y) rows[y - base].push_back(x - base);
	}
	for (int i = 0; i < n; ++i)
		for (int j : rows[i])
			if (std::find(rows[j].begin(), rows[j].end(), i) == rows[j].end())
				throw std::invalid_argument("spectral_report: relation not symmetric");

	if (n <= 512) {
		Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
		for (int i = 0; i < n; ++i)
			for (int j : rows[i]) a(i, j) = 1.0;
		Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
		if (es.info() != Eigen::Success) throw std::runtime_error("spectral_report: solver failed");
		rep.lambda1 = es.eigenvalues()(n - 1);
		rep.lambda2 = es.eigenvalues()(n - 2);
		const auto v1 = es.eigenvectors().col(n - 1);
		const auto v2 = es.eigenvectors().col(n - 2);
		rep.residual = std::max((a * v1 - rep.lambda1 * v1).norm(), (a * v2 - rep.lambda2 * v2).norm());
	} else {
		// Shift by the max degree so the top of the spectrum dominates in
		// magnitude even when A has large negative eigenvalues.
		int dmax = 0;
		for (const auto& r : rows) dmax = std::max(dmax, static_cast<int>(r.size()));
		const double shift = static_cast<double>(dmax) + 1.0;
		std::vector<double> v1, v2;
		double r1 = 0.0, r2 = 0.0;
		detail::power_pair(rows, shift, nullptr, 0x9e3779b97f4a7c15ull, rep.lambda1, v1, r1);
		detail::power_pair(rows, shift, &v1, 0xbf58476d1ce4e5b9ull, rep.lambda2, v2, r2);
		rep.residual = std::max(r1, r2);
	}
	rep.gap = rep.lambda1 - rep.lambda2;
	return rep;
}

} // namespace coarsekit
