#include "webskein/modpoly.hpp"

#include <cstdlib>
#include <sstream>
#include <stdexcept>

namespace webskein {

namespace {

long mod(long a, long p) {
    long r = a % p;
    return r < 0 ? r + p : r;
}

long inv_mod(long a, long p) {
    long t = 0, nt = 1, r = p, nr = mod(a, p);
    while (nr != 0) {
        long q = r / nr;
        long tmp = t - q * nt;
        t = nt;
        nt = tmp;
        tmp = r - q * nr;
        r = nr;
        nr = tmp;
    }
    return mod(t, p);
}

}  // namespace

bool is_prime(long p) {
    if (p < 2) return false;
    for (long d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

ModPoly::ModPoly(long p) : p_(p) {
    if (p < 1) throw std::invalid_argument("modulus must be positive");
}

ModPoly::ModPoly(long p, const std::map<int, long>& terms) : ModPoly(p) {
    for (auto& [e, c] : terms) add_term(e, c);
}

void ModPoly::add_term(int e, long c) {
    long v = mod(coeff(e) + mod(c, p_), p_);
    if (v == 0)
        t_.erase(e);
    else
        t_[e] = v;
}

long ModPoly::coeff(int e) const {
    auto it = t_.find(e);
    return it == t_.end() ? 0 : it->second;
}

ModPoly ModPoly::from_lpoly(const LPoly& f, long p) {
    ModPoly r(p);
    mpz_class pp(p);
    for (auto& [e, c] : f.terms()) {
        mpz_class m = c % pp;
        r.add_term(e, m.get_si());
    }
    return r;
}

ModPoly ModPoly::operator+(const ModPoly& o) const {
    if (p_ != o.p_) throw std::invalid_argument("modulus mismatch");
    ModPoly r = *this;
    for (auto& [e, c] : o.t_) r.add_term(e, c);
    return r;
}

ModPoly ModPoly::operator-(const ModPoly& o) const {
    if (p_ != o.p_) throw std::invalid_argument("modulus mismatch");
    ModPoly r = *this;
    for (auto& [e, c] : o.t_) r.add_term(e, p_ - c);
    return r;
}

ModPoly ModPoly::operator*(const ModPoly& o) const {
    if (p_ != o.p_) throw std::invalid_argument("modulus mismatch");
    ModPoly r(p_);
    for (auto& [e1, c1] : t_)
        for (auto& [e2, c2] : o.t_) r.add_term(e1 + e2, long((__int128)c1 * c2 % p_));
    return r;
}

ModPoly ModPoly::shifted(int k) const {
    ModPoly r(p_);
    for (auto& [e, c] : t_) r.t_[e + k] = c;
    return r;
}

ModPoly ModPoly::normalized() const { return t_.empty() ? *this : shifted(-low()); }

std::string ModPoly::to_string() const {
    if (t_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto it = t_.rbegin(); it != t_.rend(); ++it) {
        if (!first) os << " + ";
        first = false;
        auto [e, c] = *it;
        if (e == 0)
            os << c;
        else {
            if (c != 1) os << c;
            os << "v";
            if (e != 1) os << "^" << (e < 0 ? "{" + std::to_string(e) + "}" : std::to_string(e));
        }
    }
    os << " (mod " << p_ << ")";
    return os.str();
}

nlohmann::json ModPoly::to_json() const {
    nlohmann::json j = nlohmann::json::array();
    for (auto it = t_.rbegin(); it != t_.rend(); ++it) j.push_back({it->first, std::to_string(it->second)});
    return j;
}

IdealSpec IdealSpec::In(int n, long p) {
    if (n < 1 || p < 2) throw std::invalid_argument("In(n,p) requires n >= 1 and p >= 2");
    IdealSpec s;
    s.kind = Kind::In;
    s.n = n;
    s.p = p;
    return s;
}

IdealSpec IdealSpec::PQp(long p) {
    if (p < 2) throw std::invalid_argument("PQp(p) requires p >= 2");
    IdealSpec s;
    s.kind = Kind::PQp;
    s.p = p;
    return s;
}

std::string IdealSpec::describe() const {
    if (kind == Kind::PQp) return "(p, q^p-1) with p=" + std::to_string(p);
    return "I_n with n=" + std::to_string(n) + ", p=" + std::to_string(p);
}

ModPoly reduce_mod_pqp(const LPoly& f, long p) {
    if (p < 2) throw std::invalid_argument("reduce_mod_pqp requires p >= 2");
    ModPoly r(p);
    ModPoly base = ModPoly::from_lpoly(f, p);
    std::map<int, long> acc;
    for (auto& [e, c] : base.terms()) {
        long k = mod(e, 2 * p);
        acc[int(k)] = mod(acc[int(k)] + c, p);
    }
    return ModPoly(p, acc);
}

ModPoly rem_fp(const ModPoly& a0, const ModPoly& b0) {
    long p = a0.modulus();
    ModPoly a = a0.normalized(), b = b0.normalized();
    if (b.is_zero()) throw std::invalid_argument("division by zero polynomial");
    int db = b.degree();
    long lead_inv = inv_mod(b.coeff(db), p);
    while (!a.is_zero() && a.degree() >= db) {
        int da = a.degree();
        long f = long((__int128)a.coeff(da) * lead_inv % p);
        a = a - ModPoly(p, {{da - db, f}}) * b;
    }
    return a;
}

ModPoly gcd_fp(const std::vector<ModPoly>& polys, long p) {
    if (!is_prime(p)) throw std::invalid_argument("composite modulus: gcd undefined");
    ModPoly g(p);
    for (auto& f0 : polys) {
        if (f0.modulus() != p) throw std::invalid_argument("modulus mismatch");
        ModPoly a = g.normalized(), b = f0.normalized();
        while (!b.is_zero()) {
            ModPoly r = rem_fp(a, b);
            a = b;
            b = r.normalized();
        }
        g = a;
    }
    if (g.is_zero()) return g;
    g = g.normalized();
    long li = inv_mod(g.coeff(g.degree()), p);
    return g * ModPoly(p, {{0, li}});
}

std::vector<ModPoly> ideal_generators(const IdealSpec& spec) {
    std::vector<ModPoly> gens;
    if (spec.kind == IdealSpec::Kind::PQp) {
        gens.push_back(ModPoly(spec.p, {{2 * int(spec.p), 1}, {0, -1}}));
        return gens;
    }
    for (int i = 1; i <= spec.n / 2; ++i) {
        LPoly b = qbinom(spec.n, i);
        gens.push_back(ModPoly::from_lpoly(b.pow(unsigned(spec.p)) - b, spec.p));
    }
    return gens;
}

namespace {

// remainder in F_p[v] without shifting; a has no negative exponents, b(0) != 0
ModPoly poly_rem(ModPoly a, const ModPoly& b) {
    long p = a.modulus();
    int db = b.degree();
    long lead_inv = inv_mod(b.coeff(db), p);
    while (!a.is_zero() && a.degree() >= db) {
        int da = a.degree();
        long f = long((__int128)a.coeff(da) * lead_inv % p);
        a = a - ModPoly(p, {{da - db, f}}) * b;
    }
    return a;
}

}  // namespace

ModPoly residue(const LPoly& f, const IdealSpec& spec) {
    if (spec.kind == IdealSpec::Kind::PQp) return reduce_mod_pqp(f, spec.p);
    if (!is_prime(spec.p)) throw std::invalid_argument("membership test requires prime period");
    long p = spec.p;
    ModPoly fm = ModPoly::from_lpoly(f, p);
    ModPoly g = gcd_fp(ideal_generators(spec), p);
    if (g.is_zero() || fm.is_zero()) return fm;
    if (g.degree() == 0) return ModPoly(p);
    // f = v^low * f0; bring v^low into F_p[v]/(g), using v^-1 = -(g - g(0)) / (g(0) v)
    int low = fm.low();
    ModPoly r = poly_rem(fm.shifted(-low), g);
    ModPoly step(p, {{1, 1}});
    if (low < 0) {
        long c0inv = inv_mod(g.coeff(0), p);
        step = (g - ModPoly(p, {{0, g.coeff(0)}})).shifted(-1) * ModPoly(p, {{0, p - c0inv}});
    }
    for (int k = 0; k < std::abs(low); ++k) r = poly_rem(r * step, g);
    return r;
}

bool in_ideal(const LPoly& f, const IdealSpec& spec) { return residue(f, spec).is_zero(); }

}  // namespace webskein
