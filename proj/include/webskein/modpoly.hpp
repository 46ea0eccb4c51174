#pragma once

#include <map>
#include <string>
#include <vector>

#include "webskein/lpoly.hpp"

namespace webskein {

// Laurent polynomial over Z/p, coefficients kept in [0, p).
class ModPoly {
public:
    ModPoly() = default;
    explicit ModPoly(long p);
    ModPoly(long p, const std::map<int, long>& terms);
    static ModPoly from_lpoly(const LPoly& f, long p);

    long modulus() const { return p_; }
    const std::map<int, long>& terms() const { return t_; }
    bool is_zero() const { return t_.empty(); }
    long coeff(int e) const;
    int degree() const { return t_.empty() ? -1 : t_.rbegin()->first; }
    int low() const { return t_.empty() ? 0 : t_.begin()->first; }

    ModPoly operator+(const ModPoly& o) const;
    ModPoly operator-(const ModPoly& o) const;
    ModPoly operator*(const ModPoly& o) const;
    bool operator==(const ModPoly& o) const { return p_ == o.p_ && t_ == o.t_; }
    bool operator!=(const ModPoly& o) const { return !(*this == o); }

    // shift so the lowest exponent is 0 (v is a unit)
    ModPoly normalized() const;
    ModPoly shifted(int k) const;
    std::string to_string() const;
    nlohmann::json to_json() const;

private:
    void add_term(int e, long c);
    long p_ = 2;
    std::map<int, long> t_;
};

struct IdealSpec {
    enum class Kind { In, PQp };
    Kind kind = Kind::PQp;
    int n = 0;
    long p = 2;

    static IdealSpec In(int n, long p);
    static IdealSpec PQp(long p);
    std::string describe() const;
};

bool is_prime(long p);

// exponents mod 2p, coefficients mod p
ModPoly reduce_mod_pqp(const LPoly& f, long p);
// monic generator of the ideal generated by the inputs in F_p[v], v-units cleared
ModPoly gcd_fp(const std::vector<ModPoly>& polys, long p);
// remainder of a modulo b in F_p[v]; both taken with lowest exponent 0
ModPoly rem_fp(const ModPoly& a, const ModPoly& b);
std::vector<ModPoly> ideal_generators(const IdealSpec& spec);
bool in_ideal(const LPoly& f, const IdealSpec& spec);
// canonical residue of f in the quotient by the ideal
ModPoly residue(const LPoly& f, const IdealSpec& spec);

}  // namespace webskein
