#include "ribbon/subsets.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

namespace ribbon {

bool is_linear_subset(const std::vector<IntVector>& vectors) {
    for (std::size_t i = 0; i < vectors.size(); ++i) {
        if (dot(vectors[i], vectors[i]) < 2) return false;
        for (std::size_t j = i + 1; j < vectors.size(); ++j) {
            const Int d = dot(vectors[i], vectors[j]);
            if (j == i + 1 ? (d != 0 && d != 1) : d != 0) return false;
        }
    }
    return true;
}

LinearSubset::LinearSubset(std::size_t ambient_rank, std::vector<IntVector> vectors)
    : ambient_rank_(ambient_rank), vectors_(std::move(vectors)) {
    for (const auto& v : vectors_)
        if (v.size() != ambient_rank_) throw std::invalid_argument("vector length differs from the ambient rank");
    if (vectors_.size() > ambient_rank_) throw std::invalid_argument("more vectors than coordinates");
    if (!is_linear_subset(vectors_)) throw std::invalid_argument("vectors do not form a linear subset");
}

LinearSubset canonical_form(const LinearSubset& s) {
    const std::size_t n = s.ambient_rank();
    std::vector<IntVector> cols(n, IntVector(s.size()));
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < s.size(); ++i) cols[j][i] = s[i][j];
        auto lead = std::find_if(cols[j].begin(), cols[j].end(), [](Int a) { return a != 0; });
        if (lead != cols[j].end() && *lead < 0)
            for (auto& a : cols[j]) a = -a;
    }
    std::sort(cols.begin(), cols.end(), std::greater<>());
    std::vector<IntVector> rows(s.size(), IntVector(n));
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < s.size(); ++i) rows[i][j] = cols[j][i];
    return LinearSubset(n, std::move(rows));
}

std::size_t IntersectionGraph::degree(std::size_t v) const {
    return static_cast<std::size_t>(
        std::count_if(edges.begin(), edges.end(), [v](const auto& e) { return e.first == v || e.second == v; }));
}

IntersectionGraph intersection_graph(const LinearSubset& s) {
    IntersectionGraph g;
    g.vertices = s.size();
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i == 0 || dot(s[i - 1], s[i]) != 1) g.components.emplace_back();
        g.components.back().push_back(i);
        if (i + 1 < s.size() && dot(s[i], s[i + 1]) == 1) g.edges.emplace_back(i, i + 1);
    }
    return g;
}

bool linked(const IntVector& v, const IntVector& w) {
    for (std::size_t k = 0; k < std::min(v.size(), w.size()); ++k)
        if (v[k] != 0 && w[k] != 0) return true;
    return false;
}

std::vector<std::vector<std::size_t>> irreducible_components(const LinearSubset& s) {
    std::vector<std::size_t> parent(s.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (std::size_t k = 0; k < s.ambient_rank(); ++k) {
        std::size_t first = s.size();
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (s[i][k] == 0) continue;
            if (first == s.size())
                first = i;
            else
                parent[find(i)] = find(first);
        }
    }
    std::map<std::size_t, std::vector<std::size_t>> blocks;
    for (std::size_t i = 0; i < s.size(); ++i) blocks[find(i)].push_back(i);
    std::vector<std::vector<std::size_t>> out;
    for (auto& [root, b] : blocks) out.push_back(std::move(b));
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

bool coefficients_bounded(const LinearSubset& s) {
    for (const auto& v : s.vectors())
        for (Int a : v)
            if (a < -1 || a > 1) return false;
    return true;
}

}  // namespace

LinearSubset contract(const LinearSubset& s, std::size_t h, std::size_t vs, std::size_t vt) {
    if (h >= s.ambient_rank() || vs >= s.size() || vt >= s.size() || vs == vt)
        throw ContractionError(ContractionFault::BadIndex, "contraction indices out of range");
    if (!coefficients_bounded(s))
        throw ContractionError(ContractionFault::CoefficientBound, "some coefficient exceeds 1 in absolute value");
    if (s.norm(vt) <= 2)
        throw ContractionError(ContractionFault::NormBound,
                               "v_" + std::to_string(vt) + " has norm " + std::to_string(s.norm(vt)) + ", need > 2");
    for (std::size_t j = 0; j < s.size(); ++j) {
        const bool hit = s[j][h] != 0;
        if (hit != (j == vs || j == vt))
            throw ContractionError(ContractionFault::CoordinateSupport,
                                   "coordinate " + std::to_string(h) + " is not supported exactly on v_s and v_t");
    }
    std::vector<IntVector> out;
    out.reserve(s.size() - 1);
    for (std::size_t j = 0; j < s.size(); ++j) {
        if (j == vs) continue;
        IntVector v = s[j];
        v.erase(v.begin() + static_cast<std::ptrdiff_t>(h));
        out.push_back(std::move(v));
    }
    return LinearSubset(s.ambient_rank() - 1, std::move(out));
}

bool is_two_final_contraction(const LinearSubset& s, std::size_t h, std::size_t vs, std::size_t vt) {
    if (h >= s.ambient_rank() || vs >= s.size() || vt >= s.size() || vs == vt) return false;
    if (!coefficients_bounded(s) || s.norm(vt) <= 2 || s.norm(vs) != 2) return false;
    for (std::size_t j = 0; j < s.size(); ++j)
        if ((s[j][h] != 0) != (j == vs || j == vt)) return false;
    const auto g = intersection_graph(s);
    return g.degree(vs) == 1 && g.degree(vt) == 1;
}

std::vector<LinearSubset> two_final_expansions(const LinearSubset& s, const std::vector<std::size_t>& component) {
    std::vector<LinearSubset> out;
    if (component.size() < 2 || !coefficients_bounded(s)) return out;
    const std::size_t lo = component.front();
    const std::size_t hi = component.back();
    const std::size_t n = s.ambient_rank();
    std::set<LinearSubset> seen;

    // v_s = e_new + sign * e_x attaches next to one end; the other end picks up
    // the new coordinate with the sign that makes it orthogonal to v_s.
    for (const auto& [attach, grow] : {std::pair{lo, hi}, std::pair{hi, lo}}) {
        for (std::size_t x = 0; x < n; ++x) {
            if (s[attach][x] == 0 || s[grow][x] == 0) continue;
            bool exclusive = true;
            for (std::size_t j = 0; j < s.size() && exclusive; ++j)
                if (j != attach && j != grow && s[j][x] != 0) exclusive = false;
            if (!exclusive) continue;

            const Int sign = s[attach][x];
            std::vector<IntVector> vecs;
            for (const auto& v : s.vectors()) {
                IntVector w(v);
                w.push_back(0);
                vecs.push_back(std::move(w));
            }
            vecs[grow][n] = -sign * s[grow][x];
            IntVector fresh(n + 1, 0);
            fresh[n] = 1;
            fresh[x] = sign;
            const auto pos = static_cast<std::ptrdiff_t>(attach == lo ? lo : hi + 1);
            vecs.insert(vecs.begin() + pos, std::move(fresh));
            if (!is_linear_subset(vecs)) continue;
            LinearSubset expanded(n + 1, std::move(vecs));
            if (seen.insert(canonical_form(expanded)).second) out.push_back(std::move(expanded));
        }
    }
    return out;
}

namespace {

struct SearchState {
    LinearSubset subset;
    std::vector<std::size_t> origin;  // current index -> index in the original S
    std::size_t lo;
    std::size_t hi;
};

bool is_core(const LinearSubset& s, std::size_t lo, std::size_t hi) {
    if (hi != lo + 2) return false;
    const std::size_t t = lo + 1;
    if (s.norm(lo) != 2 || s.norm(hi) != 2 || s.norm(t) <= 2) return false;
    for (std::size_t i : {lo, t, hi})
        for (Int a : s[i])
            if (a < -1 || a > 1) return false;
    for (std::size_t j = 0; j < s.ambient_rank(); ++j) {
        bool exact = true;
        for (std::size_t i = 0; i < s.size() && exact; ++i) {
            const bool in_core = i == lo || i == t || i == hi;
            if ((s[i][j] != 0) != in_core) exact = false;
        }
        if (exact) return true;
    }
    return false;
}

bool search_core(const SearchState& st, std::set<std::pair<LinearSubset, std::size_t>>& visited,
                 std::vector<ContractionStep>& trace, BadComponent& found) {
    if (st.hi < st.lo + 2) return false;
    if (is_core(st.subset, st.lo, st.hi)) {
        found.core = {st.origin[st.lo], st.origin[st.lo + 1], st.origin[st.hi]};
        found.central_norm = st.subset.norm(st.lo + 1);
        found.contraction_trace = trace;
        return true;
    }
    if (!visited.insert({canonical_form(st.subset), st.lo}).second) return false;
    for (const auto& [vs, vt] : {std::pair{st.lo, st.hi}, std::pair{st.hi, st.lo}}) {
        for (std::size_t h = 0; h < st.subset.ambient_rank(); ++h) {
            if (!is_two_final_contraction(st.subset, h, vs, vt)) continue;
            SearchState next{contract(st.subset, h, vs, vt), st.origin, st.lo, st.hi - 1};
            next.origin.erase(next.origin.begin() + static_cast<std::ptrdiff_t>(vs));
            trace.push_back({h, vs, vt});
            if (search_core(next, visited, trace, found)) return true;
            trace.pop_back();
        }
    }
    return false;
}

}  // namespace

std::vector<BadComponent> detect_bad_components(const LinearSubset& s) {
    std::vector<BadComponent> out;
    const auto graph = intersection_graph(s);
    for (const auto& comp : graph.components) {
        if (comp.size() < 3) continue;
        SearchState st{s, {}, comp.front(), comp.back()};
        st.origin.resize(s.size());
        std::iota(st.origin.begin(), st.origin.end(), 0);
        std::set<std::pair<LinearSubset, std::size_t>> visited;
        std::vector<ContractionStep> trace;
        BadComponent bc;
        bc.indices = comp;
        if (search_core(st, visited, trace, bc)) out.push_back(std::move(bc));
    }
    return out;
}

EmbeddedLattice bad_component_complement(const LinearSubset& s, const BadComponent& c) {
    EmbeddedLattice span{s.ambient_rank(), {}};
    for (std::size_t i : c.indices) span.vectors.push_back(s[i]);
    EmbeddedLattice perp = orthogonal_complement(span);
    const CFString expected(std::vector<Int>(static_cast<std::size_t>(c.m() - 1), 2));
    if (!stably_isometric_linear(perp, expected))
        throw std::logic_error("complement of a bad component is not stably Lambda(2,...,2)");
    return perp;
}

LinearSubset core_triple(Int m, std::size_t ambient_rank) {
    if (m < 2) throw std::invalid_argument("core triple needs m >= 2");
    const auto mm = static_cast<std::size_t>(m);
    if (ambient_rank < mm + 2) throw std::invalid_argument("core triple needs ambient rank >= m + 2");
    IntVector a(ambient_rank, 0), b(ambient_rank, 0), c(ambient_rank, 0);
    a[mm] = 1;
    a[mm + 1] = 1;
    for (std::size_t i = 0; i <= mm; ++i) b[i] = 1;
    c[mm] = 1;
    c[mm + 1] = -1;
    return LinearSubset(ambient_rank, {a, b, c});
}

}  // namespace ribbon
