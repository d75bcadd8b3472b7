#pragma once

#include <chrono>
#include <cstdint>
#include <string>
#include <vector>

#include "ribbon/search.hpp"

namespace ribbon {

/// Sizes of the cross-validation suites. Defaults are the full acceptance scale.
struct SelfcheckConfig {
    Int cf_max_p = 200;
    std::size_t random_lattices = 200;
    std::size_t lattice_max_rank = 6;
    Int lattice_entry_bound = 3;
    std::uint64_t seed = 0x5eed2020;
    std::vector<Int> core_m{2, 3, 4, 5};
    std::size_t max_expansions = 3;
    std::vector<Int> fn_indices{2, 3, 4};
    Int fn_max_m = 3;
    Int lens_max_p = 12;
    Int r_max_p = 36;
    Int sum_max_p = 12;
    std::size_t sum_max_summands = 3;
    std::size_t monotonicity_samples = 300;
    SearchOptions search;
};

struct CriterionResult {
    int id = 0;
    std::string title;
    bool passed = false;
    std::string detail;
    std::chrono::milliseconds elapsed{0};
};

CriterionResult check_cf_round_trip(const SelfcheckConfig& config);
CriterionResult check_primitivity_equivalence(const SelfcheckConfig& config);
CriterionResult check_bad_component_stability(const SelfcheckConfig& config);
CriterionResult check_fn_converse(const SelfcheckConfig& config, SearchCache* cache = nullptr);
CriterionResult check_oracle_agreement(const SelfcheckConfig& config, SearchCache* cache = nullptr);
CriterionResult check_r_invariance(const SelfcheckConfig& config, SearchCache* cache = nullptr);
CriterionResult check_sum_replay(const SelfcheckConfig& config, SearchCache* cache = nullptr);

/// Criteria 1-7, optionally run concurrently (results stay in criterion order).
std::vector<CriterionResult> run_selfcheck(const SelfcheckConfig& config, unsigned jobs = 1,
                                           SearchCache* cache = nullptr);

/// One line: "PASS 1 <title> (<detail>) [<ms> ms]".
std::string format_line(const CriterionResult& r);

}  // namespace ribbon
