#include "ribbon/classify.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

namespace ribbon {

ConnectedSum::ConnectedSum(std::vector<LensSpace> summands) {
    for (auto& l : summands)
        if (!l.is_sphere()) summands_.push_back(l);
    std::sort(summands_.begin(), summands_.end());
}

ConnectedSum ConnectedSum::reversed() const {
    std::vector<LensSpace> out;
    for (const auto& l : summands_) out.push_back(lens_reverse(l));
    return ConnectedSum(std::move(out));
}

ConnectedSum ConnectedSum::operator+(const ConnectedSum& other) const {
    auto all = summands_;
    all.insert(all.end(), other.summands_.begin(), other.summands_.end());
    return ConnectedSum(std::move(all));
}

std::string ConnectedSum::str() const {
    if (summands_.empty()) return "S3";
    std::string s;
    for (std::size_t i = 0; i < summands_.size(); ++i) s += (i ? "#" : "") + summands_[i].str();
    return s;
}

std::string to_string(PairTag t) { return "T" + std::to_string(static_cast<int>(t) + 1); }

std::string to_string(Answer a) {
    switch (a) {
        case Answer::Yes: return "yes";
        case Answer::No: return "no";
        case Answer::Inconclusive: return "inconclusive";
    }
    return "?";
}

std::string PairType::str() const {
    std::string s = to_string(tag);
    if (n > 0) s += " n=" + std::to_string(n);
    for (const auto& w : witnesses) s += " (m=" + std::to_string(w.m) + ",k=" + std::to_string(w.k) + ")";
    s += " " + (left ? left->str() : std::string("S3")) + " ->";
    for (std::size_t i = 0; i < right.size(); ++i) s += (i ? "#" : " ") + right[i].str();
    if (reversed) s += " reversed";
    return s;
}

SearchOracle::SearchOracle(SearchOptions options, SearchCache* cache) : options_(options), cache_(cache) {}

Membership SearchOracle::membership(const Fraction& f) {
    if (auto it = memo_.find(f); it != memo_.end()) return it->second;
    const Membership m = r_membership(f, options_, cache_).status;
    memo_.emplace(f, m);
    return m;
}

bool NecessaryReport::all_passed() const {
    return std::all_of(conditions.begin(), conditions.end(), [](const Condition& c) { return c.passed; });
}

std::string NecessaryReport::first_failure() const {
    for (const auto& c : conditions)
        if (!c.passed) return c.name;
    return {};
}

NecessaryReport necessary_conditions(const ConnectedSum& y1, const ConnectedSum& y2) {
    NecessaryReport r;
    const Int n1 = h1_order(y1.summands()), n2 = h1_order(y2.summands());
    r.conditions.push_back({"square-ratio", square_ratio_check(y1.summands(), y2.summands()),
                            std::to_string(n2) + "/" + std::to_string(n1)});
    if (y1.size() <= 1 && y2.size() <= 1)
        r.conditions.push_back(
            {"divisibility", n2 % n1 == 0, std::to_string(n1) + " | " + std::to_string(n2)});
    return r;
}

namespace {

Answer kleene_and(Answer a, Answer b) {
    if (a == Answer::No || b == Answer::No) return Answer::No;
    if (a == Answer::Inconclusive || b == Answer::Inconclusive) return Answer::Inconclusive;
    return Answer::Yes;
}

Answer from_membership(Membership m) {
    switch (m) {
        case Membership::Member: return Answer::Yes;
        case Membership::NonMember: return Answer::No;
        default: return Answer::Inconclusive;
    }
}

// Oracle calls made on behalf of one verdict, in first-call order.
class TracedOracle {
public:
    explicit TracedOracle(MembershipOracle& oracle) : oracle_(oracle) {}

    Membership operator()(const LensSpace& l) {
        const Fraction f = l.fraction();
        for (const auto& c : trace_)
            if (c.fraction == f) return c.status;
        const Membership m = oracle_.membership(f);
        trace_.push_back({f, m});
        return m;
    }

    // l or its reversal in R
    std::pair<Answer, bool> either(const LensSpace& l) {
        const Answer a = from_membership((*this)(l));
        if (a == Answer::Yes) return {a, false};
        const Answer b = from_membership((*this)(lens_reverse(l)));
        if (b == Answer::Yes) return {b, true};
        return {(a == Answer::Inconclusive || b == Answer::Inconclusive) ? Answer::Inconclusive : Answer::No, false};
    }

    std::vector<OracleCall> trace() const { return trace_; }

private:
    MembershipOracle& oracle_;
    std::vector<OracleCall> trace_;
};

bool is_ln1(const LensSpace& l) { return l.p() >= 2 && l.q() == 1; }
bool is_ln_minus(const LensSpace& l) { return l.p() >= 2 && l.q() == l.p() - 1; }

// T1 or T2 pairing of a Y1 summand with a Y2 summand.
std::optional<PairType> lens_pair(const LensSpace& a, const LensSpace& b) {
    if (a.is_sphere() || b.is_sphere()) return std::nullopt;
    if (lens_homeomorphic(a, b, true)) return PairType{PairTag::T1, a, {b}, false, 0, {}};
    for (bool rev : {false, true}) {
        const LensSpace x = rev ? lens_reverse(a) : a;
        const LensSpace y = rev ? lens_reverse(b) : b;
        if (!is_ln1(x)) continue;
        if (auto w = fn_witness(y.fraction(), x.p())) return PairType{PairTag::T2, a, {b}, rev, x.p(), {*w}};
    }
    return std::nullopt;
}

Verdict no(std::string why) {
    Verdict v;
    v.answer = Answer::No;
    v.obstruction = std::move(why);
    return v;
}

}  // namespace

Verdict ribbon_leq_lens(const LensSpace& l1, const LensSpace& l2, MembershipOracle& oracle) {
    const auto nec = necessary_conditions(ConnectedSum({l1}), ConnectedSum({l2}));
    if (!nec.all_passed()) return no(nec.first_failure());

    TracedOracle traced(oracle);
    bool pending = false;
    Verdict v;
    if (l1.is_sphere() && l2.is_sphere()) {
        v.answer = Answer::Yes;
        v.witness.push_back({PairTag::T1, l1, {l2}, false, 0, {}});
        return v;
    }
    if (auto pair = lens_pair(l1, l2)) {
        v.answer = Answer::Yes;
        v.witness.push_back(*pair);
        return v;
    }
    if (l1.is_sphere()) {
        for (bool rev : {false, true}) {
            const LensSpace b = rev ? lens_reverse(l2) : l2;
            const Answer a = from_membership(traced(b));
            if (a == Answer::Yes) {
                v.answer = Answer::Yes;
                v.witness.push_back({PairTag::T3, std::nullopt, {l2}, rev, 0, {}});
                v.oracle_trace = traced.trace();
                return v;
            }
            if (a == Answer::Inconclusive) pending = true;
        }
    }
    v = pending ? Verdict{Answer::Inconclusive, {}, {}, {}} : no("no-matching");
    v.oracle_trace = traced.trace();
    return v;
}

Verdict two_summand_ball(const LensSpace& m1, const LensSpace& m2) {
    if (m1.is_sphere() || m2.is_sphere()) return no("no-matching");
    auto yes = [](PairType p) {
        Verdict v;
        v.answer = Answer::Yes;
        v.witness.push_back(std::move(p));
        return v;
    };
    for (bool rev : {false, true}) {
        for (bool swap : {false, true}) {
            const LensSpace& x = swap ? m2 : m1;
            const LensSpace& y = swap ? m1 : m2;
            const LensSpace a = rev ? lens_reverse(x) : x;
            const LensSpace b = rev ? lens_reverse(y) : y;
            if (lens_homeomorphic(a, lens_reverse(b), true)) return yes({PairTag::T4, std::nullopt, {x, y}, rev, 0, {}});
            if (is_ln_minus(a))
                if (auto w = fn_witness(b.fraction(), a.p()))
                    return yes({PairTag::T5, std::nullopt, {x, y}, rev, a.p(), {*w}});
            for (const auto& w1 : fn_membership(lens_reverse(a).fraction()))
                if (auto w2 = fn_witness(b.fraction(), w1.n))
                    return yes({PairTag::T6, std::nullopt, {x, y}, rev, w1.n, {w1, *w2}});
            if (auto w1 = fn_witness(a.fraction(), 2))
                if (auto w2 = fn_witness(b.fraction(), 2))
                    return yes({PairTag::T7, std::nullopt, {x, y}, rev, 2, {*w1, *w2}});
        }
    }
    return no("no-matching");
}

namespace {

struct Partial {
    Answer answer = Answer::No;
    std::vector<PairType> witness;
};

class SumMatcher {
public:
    SumMatcher(const ConnectedSum& y1, const ConnectedSum& y2, TracedOracle& oracle)
        : left_(y1.summands()), right_(y2.summands()), oracle_(oracle), used_(right_.size(), false) {}

    Partial run() { return match(0); }

private:
    static void absorb(Partial& best, Partial candidate) {
        if (candidate.answer == Answer::Yes) {
            best = std::move(candidate);
        } else if (candidate.answer == Answer::Inconclusive && best.answer == Answer::No) {
            best.answer = Answer::Inconclusive;
        }
    }

    Partial match(std::size_t i) {
        if (i == left_.size()) {
            std::vector<LensSpace> rest;
            for (std::size_t j = 0; j < right_.size(); ++j)
                if (!used_[j]) rest.push_back(right_[j]);
            return partition(rest);
        }
        Partial best;
        for (std::size_t j = 0; j < right_.size(); ++j) {
            if (used_[j]) continue;
            if (j > 0 && !used_[j - 1] && right_[j - 1] == right_[j]) continue;
            auto pair = lens_pair(left_[i], right_[j]);
            if (!pair) continue;
            used_[j] = true;
            Partial sub = match(i + 1);
            used_[j] = false;
            if (sub.answer == Answer::Yes) sub.witness.insert(sub.witness.begin(), *pair);
            absorb(best, std::move(sub));
            if (best.answer == Answer::Yes) return best;
        }
        return best;
    }

    Partial partition(const std::vector<LensSpace>& rest) {
        if (rest.empty()) return {Answer::Yes, {}};
        if (auto it = memo_.find(rest); it != memo_.end()) return it->second;
        Partial best;
        const LensSpace x = rest.front();
        std::vector<LensSpace> tail(rest.begin() + 1, rest.end());

        Partial sub = partition(tail);
        if (sub.answer != Answer::No) {
            const auto [r, rev] = oracle_.either(x);
            Partial t3{kleene_and(r, sub.answer), {}};
            if (t3.answer == Answer::Yes) {
                t3.witness.push_back({PairTag::T3, std::nullopt, {x}, rev, 0, {}});
                t3.witness.insert(t3.witness.end(), sub.witness.begin(), sub.witness.end());
            }
            absorb(best, std::move(t3));
        }
        for (std::size_t j = 1; j < rest.size() && best.answer != Answer::Yes; ++j) {
            if (j > 1 && rest[j] == rest[j - 1]) continue;
            const Verdict ball = two_summand_ball(x, rest[j]);
            if (ball.answer != Answer::Yes) continue;
            std::vector<LensSpace> others;
            for (std::size_t k = 1; k < rest.size(); ++k)
                if (k != j) others.push_back(rest[k]);
            Partial pair = partition(others);
            if (pair.answer == Answer::Yes) pair.witness.insert(pair.witness.begin(), ball.witness.front());
            absorb(best, std::move(pair));
        }
        memo_[rest] = best;
        return best;
    }

    const std::vector<LensSpace>& left_;
    const std::vector<LensSpace>& right_;
    TracedOracle& oracle_;
    std::vector<bool> used_;
    std::map<std::vector<LensSpace>, Partial> memo_;
};

}  // namespace

Verdict ribbon_leq_sum(const ConnectedSum& y1, const ConnectedSum& y2, MembershipOracle& oracle) {
    const auto nec = necessary_conditions(y1, y2);
    if (!nec.all_passed()) return no(nec.first_failure());
    TracedOracle traced(oracle);
    SumMatcher matcher(y1, y2, traced);
    Partial p = matcher.run();
    Verdict v;
    v.answer = p.answer;
    v.witness = std::move(p.witness);
    if (v.answer == Answer::No) v.obstruction = "no-matching";
    v.oracle_trace = traced.trace();
    return v;
}

std::pair<ConnectedSum, ConnectedSum> replay(const std::vector<PairType>& witness) {
    std::vector<LensSpace> a, b;
    for (const auto& p : witness) {
        if (p.left) a.push_back(*p.left);
        b.insert(b.end(), p.right.begin(), p.right.end());
    }
    return {ConnectedSum(std::move(a)), ConnectedSum(std::move(b))};
}

bool pair_condition_holds(const PairType& pair, MembershipOracle& oracle) {
    auto orient = [&](const LensSpace& l) { return pair.reversed ? lens_reverse(l) : l; };
    const bool sphere_left = !pair.left || pair.left->is_sphere();
    switch (pair.tag) {
        case PairTag::T1:
            return pair.right.size() == 1 && pair.left && lens_homeomorphic(*pair.left, pair.right[0], true);
        case PairTag::T2: {
            if (pair.right.size() != 1 || !pair.left || pair.witnesses.size() != 1) return false;
            const LensSpace a = orient(*pair.left), b = orient(pair.right[0]);
            const auto w = fn_witness(b.fraction(), pair.n);
            // L(n,1) itself never lies in F_n
            return is_ln1(a) && a.p() == pair.n && w && *w == pair.witnesses[0] && fn_membership(a.fraction()).empty();
        }
        case PairTag::T3:
            return sphere_left && pair.right.size() == 1 &&
                   oracle.membership(orient(pair.right[0]).fraction()) == Membership::Member;
        default: {
            if (!sphere_left || pair.right.size() != 2) return false;
            const LensSpace a = orient(pair.right[0]), b = orient(pair.right[1]);
            switch (pair.tag) {
                case PairTag::T4: return lens_homeomorphic(a, lens_reverse(b), true);
                case PairTag::T5: return is_ln_minus(a) && a.p() == pair.n && fn_witness(b.fraction(), pair.n);
                case PairTag::T6:
                    return pair.n >= 2 && fn_witness(lens_reverse(a).fraction(), pair.n) &&
                           fn_witness(b.fraction(), pair.n);
                case PairTag::T7: return fn_witness(a.fraction(), 2) && fn_witness(b.fraction(), 2);
                default: return false;
            }
        }
    }
}

TwoBridgeLink::TwoBridgeLink(Int p, Int q) : cover_(lens_normalize(p, q)) {}

TwoBridgeLink TwoBridgeLink::mirror() const {
    const LensSpace r = lens_reverse(cover_);
    return {r.p(), r.q()};
}

std::string TwoBridgeLink::str() const {
    if (is_unknot()) return "U";
    return "K(" + std::to_string(p()) + "," + std::to_string(q()) + ")";
}

Verdict chi_leq_bridge(const std::vector<TwoBridgeLink>& k1, const std::vector<TwoBridgeLink>& k2,
                       MembershipOracle& oracle) {
    std::vector<LensSpace> a, b;
    for (const auto& k : k1) a.push_back(k.cover());
    for (const auto& k : k2) b.push_back(k.cover());
    const ConnectedSum y1(a), y2(b);
    if (y1.size() <= 1 && y2.size() <= 1) {
        const LensSpace l1 = y1.is_sphere() ? sphere() : y1.summands()[0];
        const LensSpace l2 = y2.is_sphere() ? sphere() : y2.summands()[0];
        return ribbon_leq_lens(l1, l2, oracle);
    }
    return ribbon_leq_sum(y1, y2, oracle);
}

}  // namespace ribbon
