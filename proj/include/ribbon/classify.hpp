#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ribbon/arith.hpp"
#include "ribbon/search.hpp"

namespace ribbon {

/// Multiset of lens spaces; S^3 summands are dropped and the rest kept sorted.
/// The empty sum is S^3.
class ConnectedSum {
public:
    ConnectedSum() = default;
    explicit ConnectedSum(std::vector<LensSpace> summands);

    const std::vector<LensSpace>& summands() const { return summands_; }
    std::size_t size() const { return summands_.size(); }
    bool is_sphere() const { return summands_.empty(); }
    ConnectedSum reversed() const;
    ConnectedSum operator+(const ConnectedSum& other) const;
    /// "S3" or e.g. "L(7,3)#L(7,4)".
    std::string str() const;

    friend bool operator==(const ConnectedSum&, const ConnectedSum&) = default;

private:
    std::vector<LensSpace> summands_;
};

enum class PairTag { T1, T2, T3, T4, T5, T6, T7 };

std::string to_string(PairTag t);

/// One ribbon summand of a decomposition. `left` is the Y1 side (absent means S^3),
/// `right` the one or two Y2 summands it accounts for, as given in the input.
/// `reversed` records that the defining condition holds after reversing both sides.
struct PairType {
    PairTag tag = PairTag::T1;
    std::optional<LensSpace> left;
    std::vector<LensSpace> right;
    bool reversed = false;
    Int n = 0;                         // F_n index for T2, T5, T6, T7
    std::vector<FnWitness> witnesses;  // (m,k) for the F_n fractions involved

    /// e.g. "T2 n=2 (m=2,k=1)".
    std::string str() const;
    friend bool operator==(const PairType&, const PairType&) = default;
};

enum class Answer { Yes, No, Inconclusive };

std::string to_string(Answer a);

struct OracleCall {
    Fraction fraction{1, 1};
    Membership status = Membership::Inconclusive;
    friend bool operator==(const OracleCall&, const OracleCall&) = default;
};

struct Verdict {
    Answer answer = Answer::No;
    std::vector<PairType> witness;
    /// "square-ratio", "divisibility" or "no-matching" when the answer is no.
    std::string obstruction;
    std::vector<OracleCall> oracle_trace;

    friend bool operator==(const Verdict&, const Verdict&) = default;
};

/// Source of answers for p/q in R. Tests inject fakes.
class MembershipOracle {
public:
    virtual ~MembershipOracle() = default;
    virtual Membership membership(const Fraction& f) = 0;
    virtual std::string name() const = 0;
};

/// Double-embedding search, memoized per instance.
class SearchOracle : public MembershipOracle {
public:
    explicit SearchOracle(SearchOptions options = {}, SearchCache* cache = nullptr);
    Membership membership(const Fraction& f) override;
    std::string name() const override { return "double-embedding"; }

private:
    SearchOptions options_;
    SearchCache* cache_;
    std::map<Fraction, Membership> memo_;
};

struct Condition {
    std::string name;
    bool passed = true;
    std::string detail;
};

struct NecessaryReport {
    std::vector<Condition> conditions;
    bool all_passed() const;
    /// Name of the first failing condition, empty if none.
    std::string first_failure() const;
};

/// Square ratio of homology orders; for single lens spaces also n1 | n2.
NecessaryReport necessary_conditions(const ConnectedSum& y1, const ConnectedSum& y2);

Verdict ribbon_leq_lens(const LensSpace& l1, const LensSpace& l2, MembershipOracle& oracle);

/// Rational-ball forms (1)-(4) for M1#M2, up to overall reversal and order.
Verdict two_summand_ball(const LensSpace& m1, const LensSpace& m2);

Verdict ribbon_leq_sum(const ConnectedSum& y1, const ConnectedSum& y2, MembershipOracle& oracle);

/// Sides reconstructed from a witness: (Y1, Y2).
std::pair<ConnectedSum, ConnectedSum> replay(const std::vector<PairType>& witness);

/// Re-checks the defining arithmetic of a pair (T3 consults the oracle).
bool pair_condition_holds(const PairType& pair, MembershipOracle& oracle);

/// K(p,q); U = K(1,0).
class TwoBridgeLink {
public:
    TwoBridgeLink(Int p, Int q);
    static TwoBridgeLink unknot() { return {1, 0}; }

    Int p() const { return cover_.p(); }
    Int q() const { return cover_.q(); }
    bool is_knot() const { return p() % 2 == 1; }
    bool is_unknot() const { return cover_.is_sphere(); }
    TwoBridgeLink mirror() const;
    /// Branched double cover.
    const LensSpace& cover() const { return cover_; }
    std::string str() const;

    friend bool operator==(const TwoBridgeLink&, const TwoBridgeLink&) = default;

private:
    LensSpace cover_;
};

Verdict chi_leq_bridge(const std::vector<TwoBridgeLink>& k1, const std::vector<TwoBridgeLink>& k2,
                       MembershipOracle& oracle);

}  // namespace ribbon
