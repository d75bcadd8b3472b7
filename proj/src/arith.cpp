#include "ribbon/arith.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace ribbon {

Int checked_mul(Int a, Int b) {
    Int r;
    if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("integer overflow in multiplication");
    return r;
}

Int checked_add(Int a, Int b) {
    Int r;
    if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("integer overflow in addition");
    return r;
}

Int gcd(Int a, Int b) {
    a = a < 0 ? -a : a;
    b = b < 0 ? -b : b;
    while (b != 0) {
        Int t = a % b;
        a = b;
        b = t;
    }
    return a;
}

Int isqrt(Int n) {
    if (n < 0) throw std::domain_error("isqrt of negative number");
    Int r = 0;
    Int bit = Int{1} << 62;
    while (bit > n) bit >>= 2;
    while (bit != 0) {
        if (n >= r + bit) {
            n -= r + bit;
            r = (r >> 1) + bit;
        } else {
            r >>= 1;
        }
        bit >>= 2;
    }
    return r;
}

bool is_perfect_square(Int n) {
    if (n < 0) return false;
    Int r = isqrt(n);
    return r * r == n;
}

// ---------------------------------------------------------------------------

Fraction::Fraction(Int num, Int den) {
    if (den == 0) throw std::invalid_argument("fraction with zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    Int g = gcd(num, den);
    if (g == 0) g = 1;
    num_ = num / g;
    den_ = den / g;
}

std::strong_ordering operator<=>(const Fraction& a, const Fraction& b) {
    __int128 lhs = static_cast<__int128>(a.num()) * b.den();
    __int128 rhs = static_cast<__int128>(b.num()) * a.den();
    return lhs <=> rhs;
}

std::string Fraction::str() const { return std::to_string(num_) + "/" + std::to_string(den_); }

std::ostream& operator<<(std::ostream& os, const Fraction& f) { return os << f.str(); }

// ---------------------------------------------------------------------------

CFString::CFString(std::vector<Int> terms) : terms_(std::move(terms)) {
    for (Int a : terms_)
        if (a < 2) throw std::invalid_argument("continued fraction term " + std::to_string(a) + " is below 2");
}

CFString CFString::reversed() const {
    CFString r;
    r.terms_.assign(terms_.rbegin(), terms_.rend());
    return r;
}

CFString CFString::canonical() const {
    CFString r = reversed();
    return r < *this ? r : *this;
}

std::string CFString::str() const {
    std::string s = "[";
    for (std::size_t i = 0; i < terms_.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(terms_[i]);
    }
    return s + "]";
}

std::ostream& operator<<(std::ostream& os, const CFString& s) { return os << s.str(); }

CFString cf_expand(const Fraction& f) {
    Int p = f.num();
    Int q = f.den();
    if (p <= q) throw std::invalid_argument("cf_expand needs a fraction > 1, got " + f.str());
    std::vector<Int> terms;
    // p/q = a - 1/(q/(a q - p)) with a = ceil(p/q)
    while (q != 0) {
        Int a = (p + q - 1) / q;
        terms.push_back(a);
        Int r = checked_mul(a, q) - p;
        p = q;
        q = r;
    }
    return CFString(std::move(terms));
}

std::optional<Fraction> cf_evaluate(const CFString& s) {
    if (s.empty()) return std::nullopt;
    const auto& t = s.terms();
    // evaluate from the back: x = a_n, x = a_i - 1/x
    Int num = t.back();
    Int den = 1;
    for (std::size_t i = t.size() - 1; i-- > 0;) {
        Int next_num = checked_mul(t[i], num) - den;
        den = num;
        num = next_num;
    }
    return Fraction(num, den);
}

// ---------------------------------------------------------------------------

LensSpace lens_normalize(Int p, Int q) {
    if (p <= 0) throw std::invalid_argument("lens space parameter p must be positive, got " + std::to_string(p));
    Int r = ((q % p) + p) % p;
    if (gcd(p, r) != 1)
        throw std::invalid_argument("lens space parameters " + std::to_string(p) + "," + std::to_string(q) +
                                    " are not coprime");
    return LensSpace(p, r);
}

Fraction LensSpace::fraction() const {
    if (p_ < 2) throw std::logic_error("S^3 has no lens fraction");
    return Fraction(p_, q_);
}

std::string LensSpace::str() const {
    if (is_sphere()) return "S3";
    return "L(" + std::to_string(p_) + "," + std::to_string(q_) + ")";
}

std::ostream& operator<<(std::ostream& os, const LensSpace& l) { return os << l.str(); }

LensSpace lens_reverse(const LensSpace& l) { return lens_normalize(l.p(), l.p() - l.q()); }

bool lens_homeomorphic(const LensSpace& a, const LensSpace& b, bool oriented) {
    if (a.p() != b.p()) return false;
    const Int p = a.p();
    auto same = [p](Int x, Int y) { return ((x - y) % p + p) % p == 0; };
    const Int prod = checked_mul(a.q(), b.q());
    if (same(a.q(), b.q()) || same(prod, 1)) return true;
    if (oriented) return false;
    return same(a.q(), -b.q()) || same(prod, -1);
}

std::optional<FnWitness> fn_witness(const Fraction& f, Int n) {
    const Int p = f.num();
    const Int q = f.den();
    if (n < 2 || p % n != 0) return std::nullopt;
    const Int sq = p / n;
    if (!is_perfect_square(sq)) return std::nullopt;
    const Int m = isqrt(sq);
    if (m < 2) return std::nullopt;
    const Int nm = n * m;
    if ((q - 1) % nm != 0) return std::nullopt;
    const Int k = (q - 1) / nm;
    if (k <= 0 || k >= m || gcd(m, k) != 1) return std::nullopt;
    return FnWitness{n, m, k};
}

std::vector<FnWitness> fn_membership(const Fraction& f) {
    std::vector<FnWitness> out;
    const Int p = f.num();
    for (Int d = 1; d * d <= p; ++d) {
        if (p % d != 0) continue;
        if (auto w = fn_witness(f, d)) out.push_back(*w);
        if (d * d != p)
            if (auto w = fn_witness(f, p / d)) out.push_back(*w);
    }
    std::sort(out.begin(), out.end());
    return out;
}

Int h1_order(const std::vector<LensSpace>& summands) {
    Int r = 1;
    for (const auto& l : summands) r = checked_mul(r, l.p());
    return r;
}

bool square_ratio_check(const std::vector<LensSpace>& y1, const std::vector<LensSpace>& y2) {
    const Int n1 = h1_order(y1);
    const Int n2 = h1_order(y2);
    if (n2 % n1 != 0) return false;
    return is_perfect_square(n2 / n1);
}

}  // namespace ribbon
