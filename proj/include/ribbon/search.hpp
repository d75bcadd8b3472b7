#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "ribbon/arith.hpp"
#include "ribbon/lattice.hpp"

namespace ribbon {

/// Full-rank isometric embedding problem for Lambda(s_1) (+) ... (+) Lambda(s_k) into Z^N,
/// N the total rank. In ribbon mode the summands before `ribbon_split` form Lambda_1 and
/// must span exactly the orthogonal complement of the remaining summands (Lambda_2).
struct SearchProblem {
    std::vector<CFString> summands;
    std::optional<std::size_t> ribbon_split;

    static SearchProblem plain(std::vector<CFString> summands);
    static SearchProblem ribbon(std::vector<CFString> lambda1, std::vector<CFString> lambda2);

    std::size_t ambient_rank() const;
    bool is_ribbon() const { return ribbon_split.has_value(); }
    /// Text form, e.g. "plain:[2,2,2]" or "ribbon:[2]|[2,3,2]".
    std::string key() const;

    friend bool operator==(const SearchProblem&, const SearchProblem&) = default;
};

/// One vector per basis element, grouped by summand in problem order.
struct Certificate {
    std::vector<std::vector<IntVector>> groups;
    std::uint64_t nodes = 0;
    std::chrono::nanoseconds wall{0};

    /// Equality ignores wall time.
    friend bool operator==(const Certificate& a, const Certificate& b) {
        return a.groups == b.groups && a.nodes == b.nodes;
    }
};

enum class SearchOutcome { Found, Absent, Inconclusive };

std::string to_string(SearchOutcome o);

struct SearchResult {
    SearchOutcome outcome = SearchOutcome::Inconclusive;
    std::optional<Certificate> certificate;
    std::uint64_t nodes = 0;
    std::chrono::nanoseconds wall{0};
    /// "search", "determinant" (index obstruction, no search needed), "cache",
    /// "node budget" or "time budget".
    std::string reason;
};

struct SearchOptions {
    std::uint64_t node_budget = 100'000'000;
    std::chrono::milliseconds time_budget{60'000};
    unsigned workers = 1;

    /// Defaults overridden by RIBBON_NODE_BUDGET, RIBBON_TIME_BUDGET_MS and RIBBON_JOBS.
    static SearchOptions from_environment();
};

/// Problems with their certificates keyed by canonical form, persisted as JSON.
class SearchCache {
public:
    static constexpr const char* kVersion = "ribbon-search/1";

    struct Entry {
        SearchOutcome outcome = SearchOutcome::Absent;
        std::vector<std::vector<IntVector>> vectors;
        std::uint64_t nodes = 0;
    };

    SearchCache() = default;
    explicit SearchCache(std::filesystem::path path);

    /// Loads entries from `path`; certificates failing verification and entries of
    /// other engine versions are dropped. Returns the number of entries kept.
    std::size_t load(const std::filesystem::path& path);
    void save(const std::filesystem::path& path) const;
    /// Saves to the path given at construction, if any.
    void flush() const;

    std::optional<Entry> lookup(const std::string& key) const;
    void store(const std::string& key, Entry entry);
    std::size_t size() const;

    std::string to_json() const;
    void from_json(const std::string& text);

private:
    mutable std::mutex mutex_;
    std::map<std::string, Entry> entries_;
    std::optional<std::filesystem::path> path_;
};

/// Exhaustive search up to signed coordinate permutations. Absent is a proof of
/// non-existence; budget exhaustion yields Inconclusive.
SearchResult find_embedding(const SearchProblem& problem, const SearchOptions& options = {},
                            SearchCache* cache = nullptr);

/// Embedding of Lambda(lambda1) (+) Lambda(lambda2) with phi(Lambda_1) = phi(Lambda_2)^perp.
SearchResult find_ribbon_embedding(const CFString& lambda1, const CFString& lambda2,
                                   const SearchOptions& options = {}, SearchCache* cache = nullptr);

/// Independent check of pairings, rank and (ribbon mode) the complement condition.
bool verify_certificate(const SearchProblem& problem, const Certificate& certificate);

enum class Membership { Member, NonMember, Inconclusive };

std::string to_string(Membership m);

struct MembershipResult {
    Membership status = Membership::Inconclusive;
    /// Embeddings of Lambda(p/q) and Lambda(p/(p-q)); absent for S^3 and quick rejects.
    std::optional<Certificate> forward;
    std::optional<Certificate> backward;
    std::string reason;
};

/// Double-embedding test standing in for membership of p/q in R: p must be a
/// square and both Lambda(p/q) and Lambda(p/(p-q)) must embed with full rank.
/// Fraction 1/1 is S^3 and always a member.
MembershipResult r_membership(const Fraction& f, const SearchOptions& options = {}, SearchCache* cache = nullptr);

}  // namespace ribbon
