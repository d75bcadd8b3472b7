#include "ribbon/selfcheck.hpp"

#include <algorithm>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include "ribbon/classify.hpp"
#include "ribbon/subsets.hpp"

namespace ribbon {

namespace {

using Clock = std::chrono::steady_clock;

template <typename F>
CriterionResult timed(int id, std::string title, F body) {
    CriterionResult r;
    r.id = id;
    r.title = std::move(title);
    const auto start = Clock::now();
    try {
        body(r);
    } catch (const std::exception& e) {
        r.passed = false;
        r.detail = std::string("exception: ") + e.what();
    }
    r.elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start);
    return r;
}

std::vector<LensSpace> lens_spaces(Int max_p, bool with_sphere) {
    std::vector<LensSpace> out;
    if (with_sphere) out.push_back(sphere());
    for (Int p = 2; p <= max_p; ++p)
        for (Int q = 1; q < p; ++q)
            if (gcd(p, q) == 1) out.push_back(lens_normalize(p, q));
    return out;
}

std::string pair_text(const LensSpace& a, const LensSpace& b) { return a.str() + " <= " + b.str(); }

}  // namespace

CriterionResult check_cf_round_trip(const SelfcheckConfig& config) {
    return timed(1, "continued-fraction round trip", [&](CriterionResult& r) {
        std::size_t count = 0;
        for (Int p = 2; p <= config.cf_max_p; ++p)
            for (Int q = 1; q < p; ++q) {
                if (gcd(p, q) != 1) continue;
                const Fraction f(p, q);
                const CFString s = cf_expand(f);
                const auto back = cf_evaluate(s);
                const bool terms_ok = std::all_of(s.terms().begin(), s.terms().end(), [](Int a) { return a >= 2; });
                if (!back || *back != f || !terms_ok) {
                    r.detail = "failed at " + f.str() + " -> " + s.str();
                    return;
                }
                ++count;
            }
        r.passed = true;
        r.detail = std::to_string(count) + " fractions, p <= " + std::to_string(config.cf_max_p);
    });
}

CriterionResult check_primitivity_equivalence(const SelfcheckConfig& config) {
    return timed(2, "primitivity characterizations agree", [&](CriterionResult& r) {
        std::mt19937_64 rng(config.seed);
        std::uniform_int_distribution<Int> entry(-config.lattice_entry_bound, config.lattice_entry_bound);
        std::size_t tested = 0, primitive = 0;
        while (tested < config.random_lattices) {
            const std::size_t n = 1 + rng() % config.lattice_max_rank;
            const std::size_t k = 1 + rng() % n;
            std::vector<IntVector> rows(k, IntVector(n));
            for (auto& row : rows)
                for (auto& a : row) a = entry(rng);
            if (matrix_rank(IntMatrix::from_rows(rows, n)) != k) continue;
            const EmbeddedLattice e{n, rows};
            const bool by_snf = primitivity_test(e);
            const bool by_sat = primitivity_by_saturation(e);
            if (by_snf != by_sat) {
                r.detail = "SNF and saturation disagree on sample " + std::to_string(tested);
                return;
            }
            const EmbeddedLattice perp = orthogonal_complement(e);
            if (!perp.vectors.empty() && (!primitivity_test(perp) || !primitivity_by_saturation(perp))) {
                r.detail = "complement not primitive on sample " + std::to_string(tested);
                return;
            }
            primitive += by_snf ? 1 : 0;
            ++tested;
        }
        r.passed = true;
        r.detail = std::to_string(tested) + " random sublattices, " + std::to_string(primitive) + " primitive";
    });
}

CriterionResult check_bad_component_stability(const SelfcheckConfig& config) {
    return timed(3, "bad-component complement stable under 2-final expansions", [&](CriterionResult& r) {
        std::size_t states = 0;
        for (Int m : config.core_m) {
            const CFString expected(std::vector<Int>(static_cast<std::size_t>(m - 1), 2));
            std::vector<LinearSubset> level{core_triple(m, static_cast<std::size_t>(m) + 2)};
            for (std::size_t depth = 0; depth <= config.max_expansions; ++depth) {
                std::vector<LinearSubset> next;
                std::set<LinearSubset> seen;
                for (const auto& s : level) {
                    ++states;
                    const auto bad = detect_bad_components(s);
                    const auto graph = intersection_graph(s);
                    if (bad.size() != 1 || graph.component_count() != 1) {
                        r.detail = "m=" + std::to_string(m) + " depth " + std::to_string(depth) + ": b(S)=" +
                                   std::to_string(bad.size());
                        return;
                    }
                    if (bad[0].m() != m) {
                        r.detail = "m=" + std::to_string(m) + ": central norm changed";
                        return;
                    }
                    const EmbeddedLattice perp = bad_component_complement(s, bad[0]);
                    if (!stably_isometric_linear(perp, expected)) {
                        r.detail = "m=" + std::to_string(m) + ": complement not stably " + expected.str();
                        return;
                    }
                    if (depth == config.max_expansions) continue;
                    for (auto& t : two_final_expansions(s, graph.components[0]))
                        if (seen.insert(canonical_form(t)).second) next.push_back(std::move(t));
                }
                level = std::move(next);
            }
        }
        r.passed = true;
        r.detail = std::to_string(states) + " subsets checked";
    });
}

CriterionResult check_fn_converse(const SelfcheckConfig& config, SearchCache* cache) {
    return timed(4, "F_n witnesses, T2 verdicts and ribbon embeddings", [&](CriterionResult& r) {
        SearchOracle oracle(config.search, cache);
        std::size_t count = 0;
        for (Int n : config.fn_indices)
            for (Int m = 2; m <= config.fn_max_m; ++m)
                for (Int k = 1; k < m; ++k) {
                    if (gcd(m, k) != 1) continue;
                    const Fraction f(n * m * m, n * m * k + 1);
                    const std::string at = std::to_string(n) + "," + std::to_string(m) + "," + std::to_string(k);
                    const auto ws = fn_membership(f);
                    if (std::find(ws.begin(), ws.end(), FnWitness{n, m, k}) == ws.end()) {
                        r.detail = "missing witness (" + at + ")";
                        return;
                    }
                    const auto v = ribbon_leq_lens(lens_normalize(n, 1), lens_normalize(f.num(), f.den()), oracle);
                    if (v.answer != Answer::Yes || v.witness.size() != 1 || v.witness[0].tag != PairTag::T2 ||
                        v.witness[0].n != n) {
                        r.detail = "classifier did not give T2 (" + at + ")";
                        return;
                    }
                    const CFString twos(std::vector<Int>(static_cast<std::size_t>(n - 1), 2));
                    const auto e = find_ribbon_embedding(twos, cf_expand(f), config.search, cache);
                    if (e.outcome != SearchOutcome::Found ||
                        !verify_certificate(SearchProblem::ribbon({twos}, {cf_expand(f)}), *e.certificate)) {
                        r.detail = "no ribbon embedding (" + at + "): " + to_string(e.outcome);
                        return;
                    }
                    ++count;
                }
        r.passed = true;
        r.detail = std::to_string(count) + " triples (n,m,k)";
    });
}

CriterionResult check_oracle_agreement(const SelfcheckConfig& config, SearchCache* cache) {
    return timed(5, "classifier yes implies ribbon embedding", [&](CriterionResult& r) {
        SearchOracle oracle(config.search, cache);
        const auto spaces = lens_spaces(config.lens_max_p, true);
        std::size_t yes = 0, found = 0, pairs = 0;
        for (const auto& a : spaces)
            for (const auto& b : spaces) {
                ++pairs;
                const Verdict v = ribbon_leq_lens(a, b, oracle);
                if (v.answer == Answer::Inconclusive) {
                    r.detail = "inconclusive verdict for " + pair_text(a, b);
                    return;
                }
                const CFString l1 = a.is_sphere() ? CFString() : cf_expand(Fraction(a.p(), a.p() - a.q()));
                const CFString l2 = b.is_sphere() ? CFString() : cf_expand(b.fraction());
                const auto e = find_ribbon_embedding(l1, l2, config.search, cache);
                if (e.outcome == SearchOutcome::Inconclusive) {
                    r.detail = "inconclusive search for " + pair_text(a, b);
                    return;
                }
                if (v.answer == Answer::Yes && e.outcome != SearchOutcome::Found) {
                    r.detail = "classifier yes but no embedding for " + pair_text(a, b);
                    return;
                }
                yes += v.answer == Answer::Yes ? 1 : 0;
                found += e.outcome == SearchOutcome::Found ? 1 : 0;
            }
        r.passed = true;
        r.detail = std::to_string(pairs) + " pairs, " + std::to_string(yes) + " yes, " + std::to_string(found) +
                   " embeddings";
    });
}

CriterionResult check_r_invariance(const SelfcheckConfig& config, SearchCache* cache) {
    return timed(6, "R-oracle invariance", [&](CriterionResult& r) {
        std::size_t members = 0, count = 0;
        for (Int p = 2; p <= config.r_max_p; ++p)
            for (Int q = 1; q < p; ++q) {
                if (gcd(p, q) != 1) continue;
                Int inv = 1;
                while ((inv * q) % p != 1) ++inv;
                const auto base = r_membership(Fraction(p, q), config.search, cache).status;
                const auto by_inverse = r_membership(Fraction(p, inv), config.search, cache).status;
                const auto by_reversal = r_membership(Fraction(p, p - q), config.search, cache).status;
                const std::string at = std::to_string(p) + "/" + std::to_string(q);
                if (base == Membership::Inconclusive) {
                    r.detail = "inconclusive at " + at;
                    return;
                }
                if (base != by_inverse || base != by_reversal) {
                    r.detail = "not invariant at " + at;
                    return;
                }
                if (base == Membership::Member && !is_perfect_square(p)) {
                    r.detail = "member with non-square order at " + at;
                    return;
                }
                members += base == Membership::Member ? 1 : 0;
                ++count;
            }
        r.passed = true;
        r.detail = std::to_string(count) + " fractions, " + std::to_string(members) + " members";
    });
}

CriterionResult check_sum_replay(const SelfcheckConfig& config, SearchCache* cache) {
    return timed(7, "connected-sum witness replay and monotonicity", [&](CriterionResult& r) {
        SearchOracle oracle(config.search, cache);
        const auto spaces = lens_spaces(config.sum_max_p, false);
        // multisets of at most `limit` summands
        std::vector<ConnectedSum> sums{ConnectedSum()};
        std::function<void(std::size_t, std::vector<LensSpace>&)> grow = [&](std::size_t from,
                                                                             std::vector<LensSpace>& cur) {
            if (cur.size() == config.sum_max_summands) return;
            for (std::size_t i = from; i < spaces.size(); ++i) {
                cur.push_back(spaces[i]);
                sums.emplace_back(cur);
                grow(i, cur);
                cur.pop_back();
            }
        };
        std::vector<LensSpace> cur;
        grow(0, cur);

        std::vector<std::pair<ConnectedSum, ConnectedSum>> yes_pairs;
        std::size_t checked = 0;
        for (const auto& y1 : sums)
            for (const auto& y2 : sums) {
                if (y1.size() + y2.size() > config.sum_max_summands) continue;
                ++checked;
                const Verdict v = ribbon_leq_sum(y1, y2, oracle);
                if (v.answer == Answer::Inconclusive) {
                    r.detail = "inconclusive for " + y1.str() + " <= " + y2.str();
                    return;
                }
                if (v.answer != Answer::Yes) continue;
                const auto [a, b] = replay(v.witness);
                if (a != y1 || b != y2) {
                    r.detail = "witness does not replay for " + y1.str() + " <= " + y2.str();
                    return;
                }
                for (const auto& p : v.witness)
                    if (!pair_condition_holds(p, oracle)) {
                        r.detail = "pair condition fails: " + p.str();
                        return;
                    }
                yes_pairs.emplace_back(y1, y2);
            }

        std::mt19937_64 rng(config.seed);
        std::size_t composed = 0;
        for (std::size_t s = 0; s < config.monotonicity_samples && !yes_pairs.empty(); ++s) {
            const auto& [a1, a2] = yes_pairs[rng() % yes_pairs.size()];
            const auto& [b1, b2] = yes_pairs[rng() % yes_pairs.size()];
            const Verdict v = ribbon_leq_sum(a1 + b1, a2 + b2, oracle);
            if (v.answer != Answer::Yes) {
                r.detail = "composition not yes: " + (a1 + b1).str() + " <= " + (a2 + b2).str();
                return;
            }
            ++composed;
        }
        r.passed = true;
        r.detail = std::to_string(checked) + " pairs, " + std::to_string(yes_pairs.size()) + " yes, " +
                   std::to_string(composed) + " compositions";
    });
}

std::vector<CriterionResult> run_selfcheck(const SelfcheckConfig& config, unsigned jobs, SearchCache* cache) {
    std::vector<std::function<CriterionResult()>> tasks{
        [&] { return check_cf_round_trip(config); },
        [&] { return check_primitivity_equivalence(config); },
        [&] { return check_bad_component_stability(config); },
        [&] { return check_fn_converse(config, cache); },
        [&] { return check_oracle_agreement(config, cache); },
        [&] { return check_r_invariance(config, cache); },
        [&] { return check_sum_replay(config, cache); },
    };
    std::vector<CriterionResult> results(tasks.size());
    if (jobs <= 1) {
        for (std::size_t i = 0; i < tasks.size(); ++i) results[i] = tasks[i]();
        return results;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < std::min<std::size_t>(jobs, tasks.size()); ++w)
        pool.emplace_back([&] {
            for (std::size_t i; (i = next.fetch_add(1)) < tasks.size();) results[i] = tasks[i]();
        });
    for (auto& t : pool) t.join();
    return results;
}

std::string format_line(const CriterionResult& r) {
    std::ostringstream os;
    os << (r.passed ? "PASS " : "FAIL ") << r.id << " " << r.title << " (" << r.detail << ") ["
       << r.elapsed.count() << " ms]";
    return os.str();
}

}  // namespace ribbon
