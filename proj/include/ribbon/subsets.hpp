#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ribbon/lattice.hpp"

namespace ribbon {

/// Pairing conditions of a linear subset: v_i.v_i >= 2, v_i.v_{i+1} in {0,1},
/// v_i.v_j = 0 for |i-j| > 1.
bool is_linear_subset(const std::vector<IntVector>& vectors);

/// Ordered linear subset of Z^N. Contraction traces produce subsets with fewer
/// vectors than coordinates, so only size <= ambient rank is enforced here;
/// full() tells whether this is a top-level S = {v_1..v_N} in Z^N.
class LinearSubset {
public:
    LinearSubset() = default;
    LinearSubset(std::size_t ambient_rank, std::vector<IntVector> vectors);

    std::size_t ambient_rank() const { return ambient_rank_; }
    std::size_t size() const { return vectors_.size(); }
    bool full() const { return size() == ambient_rank_; }
    const std::vector<IntVector>& vectors() const { return vectors_; }
    const IntVector& operator[](std::size_t i) const { return vectors_[i]; }
    Int norm(std::size_t i) const { return dot(vectors_[i], vectors_[i]); }

    EmbeddedLattice lattice() const { return {ambient_rank_, vectors_}; }

    friend bool operator==(const LinearSubset&, const LinearSubset&) = default;
    friend auto operator<=>(const LinearSubset&, const LinearSubset&) = default;

private:
    std::size_t ambient_rank_ = 0;
    std::vector<IntVector> vectors_;
};

/// Canonical representative under signed permutations of the coordinates:
/// every column's first nonzero entry positive, columns sorted in decreasing
/// lexicographic order (unused coordinates last).
LinearSubset canonical_form(const LinearSubset& s);

struct IntersectionGraph {
    std::size_t vertices = 0;
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    /// Components as runs of consecutive indices.
    std::vector<std::vector<std::size_t>> components;

    std::size_t component_count() const { return components.size(); }
    std::size_t degree(std::size_t v) const;
};

IntersectionGraph intersection_graph(const LinearSubset& s);

/// Some coordinate is nonzero in both vectors.
bool linked(const IntVector& v, const IntVector& w);

/// Maximal irreducible subsets (index blocks, each sorted; blocks ordered by first index).
std::vector<std::vector<std::size_t>> irreducible_components(const LinearSubset& s);

enum class ContractionFault {
    CoefficientBound,  // some |v_i . e_j| > 1
    NormBound,         // v_t . v_t <= 2
    CoordinateSupport, // e_h meets a vector other than v_s, v_t (or misses one of them)
    BadIndex,
};

class ContractionError : public std::invalid_argument {
public:
    ContractionError(ContractionFault fault, const std::string& what)
        : std::invalid_argument(what), fault_(fault) {}
    ContractionFault fault() const { return fault_; }

private:
    ContractionFault fault_;
};

/// Removes v_s and coordinate e_h, replacing v_t by v_t - (e_h . v_t) e_h.
LinearSubset contract(const LinearSubset& s, std::size_t h, std::size_t vs, std::size_t vt);

struct ContractionStep {
    std::size_t coordinate;  // h, in the coordinates of the state it applies to
    std::size_t removed;     // s, index in that state
    std::size_t shrunk;      // t, index in that state
};

/// Whether (h, s, t) is a 2-final contraction of s.
bool is_two_final_contraction(const LinearSubset& s, std::size_t h, std::size_t vs, std::size_t vt);

/// All 2-final expansions applied to one connected component of the intersection
/// graph, deduplicated up to signed coordinate permutation. The new coordinate is
/// appended last.
std::vector<LinearSubset> two_final_expansions(const LinearSubset& s, const std::vector<std::size_t>& component);

struct BadComponent {
    std::vector<std::size_t> indices;  // the component in S
    std::array<std::size_t, 3> core;   // indices in S of the triple reached by contractions
    Int central_norm = 0;              // v_t . v_t = m + 1
    std::vector<ContractionStep> contraction_trace;

    Int m() const { return central_norm - 1; }
};

std::vector<BadComponent> detect_bad_components(const LinearSubset& s);

/// Orthogonal complement of the component's span. The result is checked to be
/// stably isometric to Lambda(2,...,2) with m-1 terms.
EmbeddedLattice bad_component_complement(const LinearSubset& s, const BadComponent& c);

/// {e_{m+1}+e_{m+2}, e_1+...+e_{m+1}, e_{m+1}-e_{m+2}} in Z^ambient (ambient >= m+2).
LinearSubset core_triple(Int m, std::size_t ambient_rank);

}  // namespace ribbon
