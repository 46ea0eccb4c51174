#include "webskein/lpoly.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace webskein {

LPoly::LPoly(long c) {
    if (c != 0) c_.push_back(mpz_class(c));
}

LPoly::LPoly(const mpz_class& c) {
    if (c != 0) c_.push_back(c);
}

LPoly LPoly::monomial(int exp, const mpz_class& c) {
    LPoly r;
    if (c != 0) {
        r.low_ = exp;
        r.c_.push_back(c);
    }
    return r;
}

LPoly LPoly::from_terms(const std::map<int, mpz_class>& terms) {
    LPoly r;
    for (auto& [e, c] : terms) r += monomial(e, c);
    return r;
}

void LPoly::trim() {
    size_t a = 0;
    while (a < c_.size() && c_[a] == 0) ++a;
    if (a == c_.size()) {
        c_.clear();
        low_ = 0;
        return;
    }
    size_t b = c_.size();
    while (c_[b - 1] == 0) --b;
    if (a > 0 || b < c_.size()) {
        c_ = std::vector<mpz_class>(c_.begin() + a, c_.begin() + b);
        low_ += int(a);
    }
}

mpz_class LPoly::coeff(int exp) const {
    if (c_.empty() || exp < low_ || exp > high()) return 0;
    return c_[exp - low_];
}

std::vector<std::pair<int, mpz_class>> LPoly::terms() const {
    std::vector<std::pair<int, mpz_class>> r;
    for (size_t i = 0; i < c_.size(); ++i)
        if (c_[i] != 0) r.emplace_back(low_ + int(i), c_[i]);
    return r;
}

size_t LPoly::num_terms() const {
    return size_t(std::count_if(c_.begin(), c_.end(), [](const mpz_class& x) { return x != 0; }));
}

LPoly& LPoly::operator+=(const LPoly& o) {
    if (o.c_.empty()) return *this;
    if (c_.empty()) return *this = o;
    int lo = std::min(low_, o.low_);
    int hi = std::max(high(), o.high());
    if (lo < low_ || hi > high()) {
        std::vector<mpz_class> n(size_t(hi - lo + 1));
        for (size_t i = 0; i < c_.size(); ++i) n[low_ - lo + i] = std::move(c_[i]);
        c_ = std::move(n);
        low_ = lo;
    }
    for (size_t i = 0; i < o.c_.size(); ++i) c_[o.low_ - low_ + i] += o.c_[i];
    trim();
    return *this;
}

LPoly& LPoly::operator-=(const LPoly& o) { return *this += -o; }

LPoly LPoly::operator-() const {
    LPoly r = *this;
    for (auto& x : r.c_) x = -x;
    return r;
}

LPoly operator*(const LPoly& a, const LPoly& b) {
    LPoly r;
    if (a.c_.empty() || b.c_.empty()) return r;
    r.low_ = a.low_ + b.low_;
    r.c_.assign(a.c_.size() + b.c_.size() - 1, 0);
    for (size_t i = 0; i < a.c_.size(); ++i) {
        if (a.c_[i] == 0) continue;
        for (size_t j = 0; j < b.c_.size(); ++j) r.c_[i + j] += a.c_[i] * b.c_[j];
    }
    r.trim();
    return r;
}

LPoly& LPoly::operator*=(const LPoly& o) { return *this = *this * o; }

LPoly& LPoly::operator*=(const mpz_class& s) {
    if (s == 0) {
        c_.clear();
        low_ = 0;
        return *this;
    }
    for (auto& x : c_) x *= s;
    return *this;
}

LPoly LPoly::shifted(int k) const {
    LPoly r = *this;
    if (!r.c_.empty()) r.low_ += k;
    return r;
}

LPoly LPoly::pow(unsigned e) const {
    LPoly r(1), b = *this;
    while (e) {
        if (e & 1) r *= b;
        e >>= 1;
        if (e) b = b * b;
    }
    return r;
}

mpz_class LPoly::at_one() const {
    mpz_class s = 0;
    for (auto& x : c_) s += x;
    return s;
}

namespace {

std::string qpower(int e) {
    if (e % 2 == 0) {
        int k = e / 2;
        if (k == 1) return "q";
        if (k >= 0 && k < 10) return "q^" + std::to_string(k);
        return "q^{" + std::to_string(k) + "}";
    }
    return "q^{" + std::to_string(e) + "/2}";
}

}  // namespace

std::string LPoly::to_string() const {
    if (c_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (int i = int(c_.size()) - 1; i >= 0; --i) {
        const mpz_class& c = c_[i];
        if (c == 0) continue;
        int e = low_ + i;
        mpz_class a = abs(c);
        if (first) {
            if (c < 0) os << "-";
        } else {
            os << (c < 0 ? " - " : " + ");
        }
        first = false;
        if (e == 0) {
            os << a.get_str();
        } else {
            if (a != 1) os << a.get_str();
            os << qpower(e);
        }
    }
    return os.str();
}

nlohmann::json LPoly::to_json() const {
    nlohmann::json j = nlohmann::json::array();
    for (int i = int(c_.size()) - 1; i >= 0; --i)
        if (c_[i] != 0) j.push_back({low_ + i, c_[i].get_str()});
    return j;
}

LPoly LPoly::from_json(const nlohmann::json& j) {
    if (!j.is_array()) throw std::invalid_argument("polynomial JSON must be an array of [exp, coeff]");
    LPoly r;
    for (auto& t : j) {
        if (!t.is_array() || t.size() != 2) throw std::invalid_argument("polynomial term must be [exp, coeff]");
        mpz_class c;
        if (t[1].is_string())
            c = mpz_class(t[1].get<std::string>());
        else
            c = mpz_class(t[1].get<long>());
        r += monomial(t[0].get<int>(), c);
    }
    return r;
}

LPoly qint(int m) {
    if (m < 0) throw std::invalid_argument("qint requires m >= 0");
    LPoly r;
    for (int e = -(m - 1); e <= m - 1; e += 2) r += LPoly::monomial(e);
    return r;
}

LPoly qfactorial(int m) {
    LPoly r(1);
    for (int i = 2; i <= m; ++i) r *= qint(i);
    return r;
}

LPoly qbinom(int m, int k) {
    if (k < 0 || k > m) return LPoly();
    if (k > m - k) k = m - k;
    thread_local std::map<std::pair<int, int>, LPoly> local;
    auto it = local.find({m, k});
    if (it != local.end()) return it->second;
    LPoly r(1);
    // Pascal: [m,k] = v^{k}[m-1,k] + v^{-(m-k)}[m-1,k-1] (symmetric form)
    if (k > 0) r = qbinom(m - 1, k).shifted(k) + qbinom(m - 1, k - 1).shifted(-(m - k));
    local.emplace(std::make_pair(m, k), r);
    return r;
}

LPoly qconj(const LPoly& f) {
    LPoly r;
    for (auto& [e, c] : f.terms()) r += LPoly::monomial(-e, c);
    return r;
}

}  // namespace webskein
