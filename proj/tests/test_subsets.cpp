#include <set>

#include "doctest.h"
#include "ribbon/subsets.hpp"

using namespace ribbon;

namespace {

std::set<LinearSubset> canonical_set(const std::vector<LinearSubset>& v) {
    std::set<LinearSubset> out;
    for (const auto& s : v) out.insert(canonical_form(s));
    return out;
}

// Every 2-final contraction of s, as canonical forms.
std::set<LinearSubset> contractions(const LinearSubset& s) {
    std::set<LinearSubset> out;
    for (std::size_t h = 0; h < s.ambient_rank(); ++h)
        for (std::size_t a = 0; a < s.size(); ++a)
            for (std::size_t b = 0; b < s.size(); ++b)
                if (is_two_final_contraction(s, h, a, b)) out.insert(canonical_form(contract(s, h, a, b)));
    return out;
}

std::vector<LinearSubset> expansion_closure(const LinearSubset& start, std::size_t depth) {
    std::vector<LinearSubset> all{start}, level{start};
    for (std::size_t d = 0; d < depth; ++d) {
        std::vector<LinearSubset> next;
        for (const auto& s : level)
            for (const auto& comp : intersection_graph(s).components)
                for (auto& t : two_final_expansions(s, comp)) next.push_back(t);
        all.insert(all.end(), next.begin(), next.end());
        level = std::move(next);
    }
    return all;
}

}  // namespace

TEST_CASE("linear subset examples") {
    CHECK(is_linear_subset({{1, 1, 0}, {0, 1, -1}, {-1, 1, 0}}));
    CHECK_FALSE(is_linear_subset({{1}}));
    CHECK_FALSE(is_linear_subset({{1, 1, 0}, {1, 1, 1}}));  // adjacent pairing 2
    CHECK_FALSE(is_linear_subset({{1, 1, 0}, {0, 1, 1}, {1, 0, 1}}));  // v1.v3 = 1
    CHECK_THROWS_AS(LinearSubset(2, {{1, 1, 0}}), std::invalid_argument);
    CHECK_THROWS_AS(LinearSubset(1, {{2}, {2}}), std::invalid_argument);
}

TEST_CASE("intersection graph") {
    const auto core = core_triple(2, 4);
    const auto g = intersection_graph(core);
    CHECK(g.component_count() == 1);
    CHECK(g.components[0].size() == 3);
    CHECK(g.degree(1) == 2);

    const LinearSubset two_strings(4, {{1, -1, 0, 0}, {0, -1, 1, 0}, {0, 0, 0, 2}});
    CHECK(intersection_graph(two_strings).component_count() == 2);
    CHECK(intersection_graph(LinearSubset(2, {{1, 1}})).component_count() == 1);
}

TEST_CASE("linked and irreducible") {
    CHECK(linked({1, 1, 0}, {0, 1, -1}));
    CHECK_FALSE(linked({1, 0}, {0, 1}));
    CHECK(linked({1, 1}, {-1, 1}));
    CHECK(irreducible_components(core_triple(2, 4)).size() == 1);
    const LinearSubset disjoint(4, {{1, 1, 0, 0}, {0, 0, 1, 1}});
    CHECK(irreducible_components(disjoint).size() == 2);
    CHECK(irreducible_components(LinearSubset(3, {})).empty());
}

TEST_CASE("contraction faults") {
    const auto core = core_triple(2, 4);
    // coordinate 2 meets all three vectors
    try {
        contract(core, 2, 0, 1);
        FAIL("expected a contraction error");
    } catch (const ContractionError& e) {
        CHECK(e.fault() == ContractionFault::CoordinateSupport);
    }
    try {
        contract(core, 3, 1, 0);  // v_t = v_0 has norm 2
        FAIL("expected a contraction error");
    } catch (const ContractionError& e) {
        CHECK(e.fault() == ContractionFault::NormBound);
    }
    const LinearSubset big(2, {{2, 1}});
    try {
        contract(big, 0, 0, 0);
        FAIL("expected a contraction error");
    } catch (const ContractionError& e) {
        CHECK(e.fault() == ContractionFault::BadIndex);
    }
    const LinearSubset coeff(3, {{2, 0, 0}, {0, 1, 1}});
    try {
        contract(coeff, 1, 1, 0);
        FAIL("expected a contraction error");
    } catch (const ContractionError& e) {
        CHECK(e.fault() == ContractionFault::CoefficientBound);
    }
}

TEST_CASE("the m=2 core triple has exactly two expansions") {
    const auto core = core_triple(2, 4);
    const auto ex = two_final_expansions(core, {0, 1, 2});
    REQUIRE(ex.size() == 2);
    const LinearSubset first(5, {{0, 0, 0, 1, 1}, {0, 0, 1, 1, 0}, {1, 1, 1, 0, 0}, {0, 0, 1, -1, 1}});
    const LinearSubset second(5, {{0, 0, 1, 1, 1}, {1, 1, 1, 0, 0}, {0, 0, 1, -1, 0}, {0, 0, 0, -1, 1}});
    CHECK(canonical_set(ex) == std::set<LinearSubset>{canonical_form(first), canonical_form(second)});
    for (const auto& s : ex) {
        CHECK(contractions(s).count(canonical_form(core)) == 1);
        const auto bad = detect_bad_components(s);
        REQUIRE(bad.size() == 1);
        CHECK(bad[0].m() == 2);
        CHECK(stably_isometric_linear(bad_component_complement(s, bad[0]), CFString({2})));
    }
}

TEST_CASE("no expansions for components without an eligible coordinate") {
    const LinearSubset s(2, {{1, 1}});
    CHECK(two_final_expansions(s, {0}).empty());
    const LinearSubset ends(3, {{2, 0, 0}, {0, 1, 1}});
    for (const auto& t : two_final_expansions(ends, {0, 1})) CHECK(is_linear_subset(t.vectors()));
}

TEST_CASE("bad components") {
    for (Int m = 2; m <= 5; ++m) {
        const auto core = core_triple(m, static_cast<std::size_t>(m) + 2);
        const auto bad = detect_bad_components(core);
        REQUIRE(bad.size() == 1);
        CHECK(bad[0].central_norm == m + 1);
        CHECK(bad[0].contraction_trace.empty());
        const CFString twos(std::vector<Int>(static_cast<std::size_t>(m - 1), 2));
        CHECK(stably_isometric_linear(bad_component_complement(core, bad[0]), twos));
    }
    const LinearSubset all_twos(3, {{1, -1, 0}, {0, -1, 1}});
    CHECK(detect_bad_components(all_twos).empty());
    const LinearSubset chain(4, {{1, -1, 0, 0}, {0, -1, 1, 0}, {0, 0, 1, -1}});
    CHECK(detect_bad_components(chain).empty());
}

TEST_CASE("complement for m=3 after one expansion") {
    const auto core = core_triple(3, 5);
    for (const auto& s : two_final_expansions(core, {0, 1, 2})) {
        const auto bad = detect_bad_components(s);
        REQUIRE(bad.size() == 1);
        CHECK(bad[0].contraction_trace.size() == 1);
        CHECK(stably_isometric_linear(bad_component_complement(s, bad[0]), CFString({2, 2})));
    }
}

TEST_CASE("moves are inverse to each other") {
    for (Int m = 2; m <= 4; ++m) {
        for (const auto& s : expansion_closure(core_triple(m, static_cast<std::size_t>(m) + 2), 2)) {
            REQUIRE(is_linear_subset(s.vectors()));
            const auto graph = intersection_graph(s);
            REQUIRE(detect_bad_components(s).size() <= graph.component_count());
            for (const auto& comp : graph.components)
                for (const auto& t : two_final_expansions(s, comp)) {
                    REQUIRE(is_linear_subset(t.vectors()));
                    REQUIRE(contractions(t).count(canonical_form(s)) == 1);
                    REQUIRE(intersection_graph(t).component_count() == graph.component_count());
                    REQUIRE(detect_bad_components(t).size() == detect_bad_components(s).size());
                }
            // conversely every 2-final contraction expands back
            for (std::size_t h = 0; h < s.ambient_rank(); ++h)
                for (std::size_t a = 0; a < s.size(); ++a)
                    for (std::size_t b = 0; b < s.size(); ++b) {
                        if (!is_two_final_contraction(s, h, a, b)) continue;
                        const auto c = contract(s, h, a, b);
                        REQUIRE(is_linear_subset(c.vectors()));
                        std::set<LinearSubset> back;
                        for (const auto& comp : intersection_graph(c).components)
                            for (const auto& t : two_final_expansions(c, comp)) back.insert(canonical_form(t));
                        REQUIRE(back.count(canonical_form(s)) == 1);
                    }
        }
    }
}

TEST_CASE("canonical form ignores signed coordinate permutations") {
    const LinearSubset a(3, {{1, 1, 0}, {0, 1, -1}});
    const LinearSubset b(3, {{0, -1, 1}, {-1, -1, 0}});  // coordinates reversed, middle negated
    CHECK(canonical_form(a) == canonical_form(b));
    CHECK(canonical_form(canonical_form(a)) == canonical_form(a));
}
