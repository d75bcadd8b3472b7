#include <functional>
#include <map>
#include <set>
#include <random>

#include "doctest.h"
#include "ribbon/classify.hpp"

using namespace ribbon;

namespace {

// Answers from a table; everything else gets the default.
class FakeOracle : public MembershipOracle {
public:
    explicit FakeOracle(Membership fallback) : fallback_(fallback) {}
    std::map<Fraction, Membership> table;
    std::size_t calls = 0;
    Membership membership(const Fraction& f) override {
        ++calls;
        const auto it = table.find(f);
        return it == table.end() ? fallback_ : it->second;
    }
    std::string name() const override { return "fake"; }

private:
    Membership fallback_;
};

std::vector<LensSpace> lenses_up_to(Int max_p) {
    std::vector<LensSpace> out;
    for (Int p = 2; p <= max_p; ++p)
        for (Int q = 1; q < p; ++q)
            if (gcd(p, q) == 1) out.push_back(lens_normalize(p, q));
    return out;
}

std::vector<ConnectedSum> sums_up_to(Int max_p, std::size_t max_summands) {
    const auto lenses = lenses_up_to(max_p);
    std::vector<ConnectedSum> out{ConnectedSum()};
    std::vector<LensSpace> cur;
    std::function<void(std::size_t)> go = [&](std::size_t start) {
        if (!cur.empty()) out.emplace_back(cur);
        if (cur.size() == max_summands) return;
        for (std::size_t i = start; i < lenses.size(); ++i) {
            cur.push_back(lenses[i]);
            go(i);
            cur.pop_back();
        }
    };
    go(0);
    return out;
}

LensSpace L(Int p, Int q) { return lens_normalize(p, q); }

SearchOptions quick() {
    SearchOptions o;
    o.node_budget = 50'000'000;
    o.time_budget = std::chrono::milliseconds(120'000);
    return o;
}

}  // namespace

TEST_CASE("connected sums normalize") {
    const ConnectedSum y({L(7, 4), sphere(), L(7, 3)});
    CHECK(y.size() == 2);
    CHECK(y.str() == "L(7,3)#L(7,4)");
    CHECK(ConnectedSum().str() == "S3");
    CHECK(ConnectedSum({sphere()}).is_sphere());
    CHECK(y.reversed() == y);
    CHECK((ConnectedSum({L(2, 1)}) + ConnectedSum({L(3, 1)})).size() == 2);
}

TEST_CASE("necessary conditions") {
    CHECK(necessary_conditions(ConnectedSum({L(2, 1)}), ConnectedSum({L(8, 5)})).all_passed());
    CHECK(necessary_conditions(ConnectedSum({L(3, 1)}), ConnectedSum({L(6, 1)})).first_failure() == "square-ratio");
    const auto report = necessary_conditions(ConnectedSum({L(4, 1)}), ConnectedSum({L(2, 1)}));
    bool divisibility_failed = false;
    for (const auto& c : report.conditions)
        if (c.name == "divisibility") divisibility_failed = !c.passed;
    CHECK(divisibility_failed);
    CHECK_FALSE(report.all_passed());
    // 54 = 3^2 * 6: both pass
    const auto only = necessary_conditions(ConnectedSum({L(6, 1)}), ConnectedSum({L(54, 1)}));
    CHECK(only.all_passed());
}

TEST_CASE("lens examples") {
    SearchOracle oracle;
    const auto same = ribbon_leq_lens(L(3, 1), L(3, 1), oracle);
    CHECK(same.answer == Answer::Yes);
    REQUIRE(same.witness.size() == 1);
    CHECK(same.witness[0].tag == PairTag::T1);

    const auto t2 = ribbon_leq_lens(L(2, 1), L(8, 5), oracle);
    CHECK(t2.answer == Answer::Yes);
    REQUIRE(t2.witness.size() == 1);
    CHECK(t2.witness[0].tag == PairTag::T2);
    CHECK(t2.witness[0].n == 2);
    CHECK(t2.witness[0].str() == "T2 n=2 (m=2,k=1) L(2,1) -> L(8,5)");

    const auto back = ribbon_leq_lens(L(8, 5), L(2, 1), oracle);
    CHECK(back.answer == Answer::No);
    CHECK(back.obstruction == "square-ratio");

    const auto ball = ribbon_leq_lens(sphere(), L(4, 1), oracle);
    CHECK(ball.answer == Answer::Yes);
    CHECK(ball.witness.at(0).tag == PairTag::T3);
    CHECK(ribbon_leq_lens(sphere(), sphere(), oracle).answer == Answer::Yes);
}

TEST_CASE("two-summand balls") {
    const auto t4 = two_summand_ball(L(7, 4), L(7, 3));
    CHECK(t4.answer == Answer::Yes);
    CHECK(t4.witness.at(0).tag == PairTag::T4);
    const auto t5 = two_summand_ball(L(2, 1), L(8, 5));
    CHECK(t5.answer == Answer::Yes);
    CHECK(t5.witness.at(0).tag == PairTag::T5);
    CHECK(t5.witness.at(0).n == 2);
    CHECK(two_summand_ball(L(2, 1), L(3, 1)).answer == Answer::No);
    // symmetric in the two summands
    for (const auto& a : lenses_up_to(9))
        for (const auto& b : lenses_up_to(9))
            CHECK(two_summand_ball(a, b).answer == two_summand_ball(b, a).answer);
}

TEST_CASE("sum examples") {
    SearchOracle oracle;
    const auto mixed = ribbon_leq_sum(ConnectedSum({L(2, 1), L(3, 1)}), ConnectedSum({L(8, 5), L(3, 1)}), oracle);
    CHECK(mixed.answer == Answer::Yes);
    REQUIRE(mixed.witness.size() == 2);
    std::multiset<PairTag> tags;
    for (const auto& w : mixed.witness) tags.insert(w.tag);
    CHECK(tags == std::multiset<PairTag>{PairTag::T1, PairTag::T2});

    const auto ball = ribbon_leq_sum(ConnectedSum(), ConnectedSum({L(7, 4), L(7, 3)}), oracle);
    CHECK(ball.answer == Answer::Yes);
    REQUIRE(ball.witness.size() == 1);
    CHECK(ball.witness[0].tag == PairTag::T4);

    const auto two = ribbon_leq_sum(ConnectedSum(), ConnectedSum({L(2, 1)}), oracle);
    CHECK(two.answer == Answer::No);
    CHECK(two.obstruction == "square-ratio");
}

TEST_CASE("bridge examples") {
    SearchOracle oracle;
    CHECK(chi_leq_bridge({TwoBridgeLink(2, 1)}, {TwoBridgeLink(8, 5)}, oracle).answer == Answer::Yes);
    CHECK(chi_leq_bridge({TwoBridgeLink::unknot()}, {TwoBridgeLink(7, 4), TwoBridgeLink(7, 3)}, oracle).answer ==
          Answer::Yes);
    CHECK(chi_leq_bridge({TwoBridgeLink(3, 1)}, {TwoBridgeLink(3, 1)}, oracle).answer == Answer::Yes);
    CHECK(TwoBridgeLink(7, 3).mirror() == TwoBridgeLink(7, 4));
    CHECK(TwoBridgeLink::unknot().str() == "U");
    CHECK(TwoBridgeLink(7, 3).is_knot());
    CHECK_FALSE(TwoBridgeLink(8, 3).is_knot());
}

TEST_CASE("inconclusive oracle answers poison only the branches that need them") {
    FakeOracle unknown(Membership::Inconclusive);
    const auto v = ribbon_leq_lens(sphere(), L(9, 2), unknown);
    CHECK(v.answer == Answer::Inconclusive);
    CHECK_FALSE(v.oracle_trace.empty());

    FakeOracle yes(Membership::Member);
    CHECK(ribbon_leq_lens(sphere(), L(9, 2), yes).answer == Answer::Yes);
    FakeOracle no(Membership::NonMember);
    const auto refused = ribbon_leq_lens(sphere(), L(9, 2), no);
    CHECK(refused.answer == Answer::No);
    CHECK(refused.obstruction == "no-matching");

    // a T4 pair settles the question regardless of the oracle
    const auto sum = ribbon_leq_sum(ConnectedSum(), ConnectedSum({L(7, 4), L(7, 3)}), unknown);
    CHECK(sum.answer == Answer::Yes);

    // obstructions never reach the oracle
    FakeOracle counting(Membership::Inconclusive);
    CHECK(ribbon_leq_lens(L(8, 5), L(2, 1), counting).answer == Answer::No);
    CHECK(counting.calls == 0);

    // a leftover summand whose only route is the oracle stays undecided
    const auto stuck = ribbon_leq_sum(ConnectedSum({L(3, 1)}), ConnectedSum({L(3, 1), L(9, 2)}), unknown);
    CHECK(stuck.answer == Answer::Inconclusive);
    const auto resolved = ribbon_leq_sum(ConnectedSum({L(3, 1)}), ConnectedSum({L(3, 1), L(9, 2)}), yes);
    CHECK(resolved.answer == Answer::Yes);
}

TEST_CASE("lens trichotomy up to 20") {
    SearchCache cache;
    SearchOracle oracle(quick(), &cache);
    auto lenses = lenses_up_to(20);
    lenses.insert(lenses.begin(), sphere());
    std::size_t yes = 0;
    for (const auto& l1 : lenses)
        for (const auto& l2 : lenses) {
            const auto v = ribbon_leq_lens(l1, l2, oracle);
            REQUIRE(v.answer != Answer::Inconclusive);
            if (v.answer == Answer::No) {
                CHECK(v.witness.empty());
                CHECK_FALSE(v.obstruction.empty());
                continue;
            }
            ++yes;
            INFO(l1.str() << " <= " << l2.str());
            REQUIRE(v.witness.size() == 1);
            const auto& w = v.witness[0];
            CHECK(pair_condition_holds(w, oracle));
            const auto [a, b] = replay(v.witness);
            CHECK(a == ConnectedSum({l1}));
            CHECK(b == ConnectedSum({l2}));
            if (lens_homeomorphic(l1, l2, true)) CHECK(w.tag == PairTag::T1);
            if (w.tag == PairTag::T2) {
                CHECK((l1.q() == 1 || l1.q() == l1.p() - 1));
                CHECK(fn_membership(Fraction(w.n, 1)).empty());
                CHECK(w.n == l1.p());
            }
            if (w.tag == PairTag::T3) CHECK(l1.is_sphere());
            CHECK(necessary_conditions(ConnectedSum({l1}), ConnectedSum({l2})).all_passed());
        }
    CHECK(yes > lenses.size());
}

TEST_CASE("sum invariants") {
    SearchCache cache;
    SearchOracle oracle(quick(), &cache);
    const auto sums = sums_up_to(8, 2);
    std::vector<std::pair<ConnectedSum, ConnectedSum>> yes_pairs;
    for (const auto& y1 : sums)
        for (const auto& y2 : sums) {
            if (y1.size() > y2.size()) continue;
            const auto v = ribbon_leq_sum(y1, y2, oracle);
            REQUIRE(v.answer != Answer::Inconclusive);
            if (!square_ratio_check(y1.summands(), y2.summands())) {
                CHECK(v.answer == Answer::No);
                CHECK(v.obstruction == "square-ratio");
            }
            if (v.answer == Answer::Yes) {
                const auto [a, b] = replay(v.witness);
                CHECK(a == y1);
                CHECK(b == y2);
                for (const auto& w : v.witness) CHECK(pair_condition_holds(w, oracle));
                yes_pairs.emplace_back(y1, y2);
            }
        }
    REQUIRE(yes_pairs.size() > 10);

    std::mt19937_64 rng(20201);
    std::uniform_int_distribution<std::size_t> pick(0, yes_pairs.size() - 1);
    for (int i = 0; i < 150; ++i) {
        const auto& [a1, a2] = yes_pairs[pick(rng)];
        const auto& [b1, b2] = yes_pairs[pick(rng)];
        INFO((a1 + b1).str() << " <= " << (a2 + b2).str());
        CHECK(ribbon_leq_sum(a1 + b1, a2 + b2, oracle).answer == Answer::Yes);
    }
}

TEST_CASE("reflexivity") {
    SearchOracle oracle(quick());
    for (const auto& y : sums_up_to(12, 2)) CHECK(ribbon_leq_sum(y, y, oracle).answer == Answer::Yes);
    for (const auto& y : sums_up_to(6, 3)) CHECK(ribbon_leq_sum(y, y, oracle).answer == Answer::Yes);
}

TEST_CASE("mirror coherence") {
    SearchCache cache;
    SearchOracle oracle(quick(), &cache);
    std::vector<TwoBridgeLink> links{TwoBridgeLink::unknot()};
    for (const auto& l : lenses_up_to(12)) links.emplace_back(l.p(), l.q());
    for (const auto& a : links)
        for (const auto& b : links) {
            const auto v = chi_leq_bridge({a}, {b}, oracle);
            const auto m = chi_leq_bridge({a.mirror()}, {b.mirror()}, oracle);
            INFO(a.str() << " vs " << b.str());
            CHECK(v.answer == m.answer);
        }
    for (const auto& a : links)
        for (const auto& b : links) {
            if (a.p() > 7 || b.p() > 7) continue;
            const std::vector<TwoBridgeLink> two{a, b};
            const std::vector<TwoBridgeLink> two_m{a.mirror(), b.mirror()};
            CHECK(chi_leq_bridge({}, two, oracle).answer == chi_leq_bridge({}, two_m, oracle).answer);
        }
}
