#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace webskein {

// Laurent polynomial in v = q^{1/2} with exact integer coefficients.
// Stored densely from the lowest nonzero exponent; the zero polynomial is empty.
class LPoly {
public:
    LPoly() = default;
    LPoly(long c);
    LPoly(const mpz_class& c);

    static LPoly monomial(int exp, const mpz_class& c = 1);
    static LPoly from_terms(const std::map<int, mpz_class>& terms);

    bool is_zero() const { return c_.empty(); }
    int low() const { return low_; }
    int high() const { return low_ + int(c_.size()) - 1; }
    mpz_class coeff(int exp) const;
    std::vector<std::pair<int, mpz_class>> terms() const;
    size_t num_terms() const;

    LPoly& operator+=(const LPoly& o);
    LPoly& operator-=(const LPoly& o);
    LPoly& operator*=(const LPoly& o);
    LPoly& operator*=(const mpz_class& s);
    friend LPoly operator+(LPoly a, const LPoly& b) { return a += b; }
    friend LPoly operator-(LPoly a, const LPoly& b) { return a -= b; }
    friend LPoly operator*(const LPoly& a, const LPoly& b);
    friend LPoly operator*(LPoly a, const mpz_class& s) { return a *= s; }
    LPoly operator-() const;
    bool operator==(const LPoly& o) const { return low_ == o.low_ && c_ == o.c_; }
    bool operator!=(const LPoly& o) const { return !(*this == o); }

    // multiply by v^k
    LPoly shifted(int k) const;
    LPoly pow(unsigned e) const;
    mpz_class at_one() const;

    // q-rendering, e.g. "q^2 - q^{1/2} + 3 - 2q^{-1}"
    std::string to_string() const;
    // [[exponent_of_v, "coefficient"], ...] in decreasing exponent order
    nlohmann::json to_json() const;
    static LPoly from_json(const nlohmann::json& j);

private:
    void trim();
    int low_ = 0;
    std::vector<mpz_class> c_;
};

LPoly qint(int m);
LPoly qfactorial(int m);
LPoly qbinom(int m, int k);
LPoly qconj(const LPoly& f);

// v^e as an LPoly
inline LPoly vpow(int e) { return LPoly::monomial(e); }

}  // namespace webskein
