#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace ribbon {

using Int = std::int64_t;

/// Checked arithmetic; throws std::overflow_error instead of wrapping.
Int checked_mul(Int a, Int b);
Int checked_add(Int a, Int b);

Int gcd(Int a, Int b);
bool is_perfect_square(Int n);
Int isqrt(Int n);

/// Exact positive rational num/den in lowest terms.
class Fraction {
public:
    Fraction(Int num, Int den);

    Int num() const { return num_; }
    Int den() const { return den_; }

    std::string str() const;

    friend bool operator==(const Fraction&, const Fraction&) = default;
    friend std::strong_ordering operator<=>(const Fraction& a, const Fraction& b);

private:
    Int num_;
    Int den_;
};

std::ostream& operator<<(std::ostream& os, const Fraction& f);

/// Negative continued fraction [a1,...,an]^- with every term >= 2.
/// The empty string stands for the rank-0 lattice (the fraction of S^3).
class CFString {
public:
    CFString() = default;
    explicit CFString(std::vector<Int> terms);

    const std::vector<Int>& terms() const { return terms_; }
    std::size_t rank() const { return terms_.size(); }
    bool empty() const { return terms_.empty(); }

    CFString reversed() const;
    /// Lexicographic minimum of the string and its reversal.
    CFString canonical() const;

    std::string str() const;

    friend auto operator<=>(const CFString&, const CFString&) = default;

private:
    std::vector<Int> terms_;
};

std::ostream& operator<<(std::ostream& os, const CFString& s);

/// Expansion of f > 1 into its unique negative continued fraction.
CFString cf_expand(const Fraction& f);

/// Exact value of the string; std::nullopt is the rank-0 value of the empty string.
std::optional<Fraction> cf_evaluate(const CFString& s);

/// Oriented lens space L(p,q), stored with 0 <= q < p; (1,0) is S^3.
class LensSpace {
public:
    LensSpace() = default;

    Int p() const { return p_; }
    Int q() const { return q_; }
    bool is_sphere() const { return p_ == 1; }

    /// p/q for p >= 2.
    Fraction fraction() const;

    std::string str() const;

    friend auto operator<=>(const LensSpace&, const LensSpace&) = default;

private:
    friend LensSpace lens_normalize(Int p, Int q);
    LensSpace(Int p, Int q) : p_(p), q_(q) {}

    Int p_ = 1;
    Int q_ = 0;
};

std::ostream& operator<<(std::ostream& os, const LensSpace& l);

LensSpace lens_normalize(Int p, Int q);
inline LensSpace sphere() { return lens_normalize(1, 0); }

/// -L(p,q) = L(p,p-q).
LensSpace lens_reverse(const LensSpace& l);

bool lens_homeomorphic(const LensSpace& a, const LensSpace& b, bool oriented);

/// p = n m^2, q = n m k + 1 with m > k > 0 coprime.
struct FnWitness {
    Int n;
    Int m;
    Int k;

    friend auto operator<=>(const FnWitness&, const FnWitness&) = default;
};

/// All witnesses of p/q lying in F_n, over every n >= 2, sorted by n.
std::vector<FnWitness> fn_membership(const Fraction& f);

/// Witness for the given index n, if any.
std::optional<FnWitness> fn_witness(const Fraction& f, Int n);

/// |H_1| of a connected sum, i.e. the product of the orders of its summands.
Int h1_order(const std::vector<LensSpace>& summands);

/// Whether h1_order(y2) == u^2 * h1_order(y1) for an integer u >= 1.
bool square_ratio_check(const std::vector<LensSpace>& y1, const std::vector<LensSpace>& y2);

}  // namespace ribbon
