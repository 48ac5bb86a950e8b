#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace coarsekit {

/// Exact nonnegative rational. All expansion verdicts go through this type;
/// floating point is reserved for spectral diagnostics.
struct Ratio {
	std::int64_t num = 0;
	std::int64_t den = 1;

	Ratio() = default;
	Ratio(std::int64_t n, std::int64_t d) : num(n), den(d) { normalize(); }
	explicit Ratio(std::int64_t n) : num(n), den(1) {}

	void normalize() {
		if (den == 0) throw std::invalid_argument("Ratio: zero denominator");
		if (den < 0) { num = -num; den = -den; }
		const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
		if (g > 1) { num /= g; den /= g; }
	}

	double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }

	std::string str() const { return std::to_string(num) + "/" + std::to_string(den); }

	static Ratio parse(const std::string& s) {
		const auto pos = s.find('/');
		if (pos == std::string::npos) return Ratio(std::stoll(s), 1);
		return Ratio(std::stoll(s.substr(0, pos)), std::stoll(s.substr(pos + 1)));
	}
};

inline __int128 cross_l(const Ratio& a, const Ratio& b) {
	return static_cast<__int128>(a.num) * b.den;
}
inline __int128 cross_r(const Ratio& a, const Ratio& b) {
	return static_cast<__int128>(b.num) * a.den;
}

inline bool operator==(const Ratio& a, const Ratio& b) { return a.num == b.num && a.den == b.den; }
inline bool operator!=(const Ratio& a, const Ratio& b) { return !(a == b); }
inline bool operator<(const Ratio& a, const Ratio& b) { return cross_l(a, b) < cross_r(a, b); }
inline bool operator<=(const Ratio& a, const Ratio& b) { return cross_l(a, b) <= cross_r(a, b); }
inline bool operator>(const Ratio& a, const Ratio& b) { return b < a; }
inline bool operator>=(const Ratio& a, const Ratio& b) { return b <= a; }

inline Ratio operator+(const Ratio& a, const Ratio& b) {
	return Ratio(a.num * b.den + b.num * a.den, a.den * b.den);
}
inline Ratio operator-(const Ratio& a, const Ratio& b) {
	return Ratio(a.num * b.den - b.num * a.den, a.den * b.den);
}
inline Ratio operator*(const Ratio& a, const Ratio& b) { return Ratio(a.num * b.num, a.den * b.den); }
inline Ratio operator/(const Ratio& a, const Ratio& b) {
	if (b.num == 0) throw std::invalid_argument("Ratio: division by zero");
	return Ratio(a.num * b.den, a.den * b.num);
}

} // namespace coarsekit
