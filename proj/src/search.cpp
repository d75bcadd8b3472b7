#include "ribbon/search.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <numeric>
#include <fstream>
#include <sstream>
#include <thread>

#include "json.hpp"

namespace ribbon {

SearchProblem SearchProblem::plain(std::vector<CFString> summands) {
    std::erase_if(summands, [](const CFString& s) { return s.empty(); });
    return {std::move(summands), std::nullopt};
}

SearchProblem SearchProblem::ribbon(std::vector<CFString> lambda1, std::vector<CFString> lambda2) {
    std::erase_if(lambda1, [](const CFString& s) { return s.empty(); });
    std::erase_if(lambda2, [](const CFString& s) { return s.empty(); });
    SearchProblem p;
    p.ribbon_split = lambda1.size();
    p.summands = std::move(lambda1);
    p.summands.insert(p.summands.end(), lambda2.begin(), lambda2.end());
    return p;
}

std::size_t SearchProblem::ambient_rank() const {
    std::size_t n = 0;
    for (const auto& s : summands) n += s.rank();
    return n;
}

std::string SearchProblem::key() const {
    std::string k = is_ribbon() ? "ribbon:" : "plain:";
    for (std::size_t i = 0; i < summands.size(); ++i) {
        if (i > 0) k += (is_ribbon() && i == *ribbon_split) ? "|" : ";";
        k += summands[i].str();
    }
    if (is_ribbon() && *ribbon_split == summands.size()) k += "|";
    if (is_ribbon() && *ribbon_split == 0 && !summands.empty()) k.insert(k.find(':') + 1, "|");
    return k;
}

std::string to_string(SearchOutcome o) {
    switch (o) {
        case SearchOutcome::Found: return "found";
        case SearchOutcome::Absent: return "absent";
        case SearchOutcome::Inconclusive: return "inconclusive";
    }
    return "?";
}

std::string to_string(Membership m) {
    switch (m) {
        case Membership::Member: return "member";
        case Membership::NonMember: return "non-member";
        case Membership::Inconclusive: return "inconclusive";
    }
    return "?";
}

SearchOptions SearchOptions::from_environment() {
    SearchOptions o;
    if (const char* v = std::getenv("RIBBON_NODE_BUDGET")) o.node_budget = std::stoull(v);
    if (const char* v = std::getenv("RIBBON_TIME_BUDGET_MS")) o.time_budget = std::chrono::milliseconds(std::stoll(v));
    if (const char* v = std::getenv("RIBBON_JOBS")) o.workers = static_cast<unsigned>(std::max(1, std::stoi(v)));
    return o;
}

namespace {

using Clock = std::chrono::steady_clock;

struct Layout {
    std::size_t n = 0;
    std::vector<Int> norm;
    std::vector<char> adjacent_prev;
    std::size_t primitive_prefix = 0;  // ribbon: rows [0, prefix) must span a primitive sublattice
};

Layout layout_of(const SearchProblem& p) {
    Layout l;
    l.n = p.ambient_rank();
    for (std::size_t k = 0; k < p.summands.size(); ++k) {
        const auto& t = p.summands[k].terms();
        for (std::size_t i = 0; i < t.size(); ++i) {
            l.norm.push_back(t[i]);
            l.adjacent_prev.push_back(i > 0 ? 1 : 0);
        }
        if (p.is_ribbon() && k + 1 == *p.ribbon_split) l.primitive_prefix = l.norm.size();
    }
    return l;
}

// Column reduction of the assigned rows: the span is primitive iff every pivot is +-1.
bool rows_primitive(const std::vector<IntVector>& rows, std::size_t n) {
    try {
        std::vector<IntVector> a(rows);
        std::size_t pc = 0;
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (pc >= n) return false;
            for (std::size_t j = pc + 1; j < n; ++j) {
                if (a[i][j] == 0) continue;
                if (a[i][pc] == 0) {
                    for (std::size_t r = i; r < a.size(); ++r) std::swap(a[r][pc], a[r][j]);
                    continue;
                }
                // Euclid on the two columns
                while (a[i][j] != 0) {
                    const Int q = a[i][pc] / a[i][j];
                    for (std::size_t r = i; r < a.size(); ++r) {
                        a[r][pc] = checked_add(a[r][pc], -checked_mul(q, a[r][j]));
                        std::swap(a[r][pc], a[r][j]);
                    }
                }
            }
            if (a[i][pc] != 1 && a[i][pc] != -1) return false;
            ++pc;
        }
        return true;
    } catch (const std::overflow_error&) {
        return primitivity_test(EmbeddedLattice{n, rows}) && matrix_rank(IntMatrix::from_rows(rows, n)) == rows.size();
    }
}

struct Control {
    std::atomic<std::uint64_t> nodes{0};
    std::atomic<bool> stop{false};
    std::atomic<int> budget_hit{0};  // 1 nodes, 2 time
    std::uint64_t node_budget = 0;
    Clock::time_point deadline;
    std::mutex mutex;
    std::optional<std::vector<IntVector>> solution;
};

struct Partial {
    std::vector<IntVector> rows;
    std::vector<int> cls;        // columns with identical history share a class
    std::vector<char> zero_col;  // column still all zero
    std::vector<std::vector<Int>> suffix;  // suffix[j][c] = sum_{c' >= c} rows[j][c']^2
};

class Engine {
public:
    Engine(const Layout& layout, Control& control) : l_(layout), ctl_(control) {}

    Partial root() const {
        Partial p;
        p.cls.assign(l_.n, 0);
        p.zero_col.assign(l_.n, 1);
        return p;
    }

    void candidates(const Partial& p, std::vector<IntVector>& out) {
        const std::size_t i = p.rows.size();
        const std::size_t n = l_.n;
        prev_same_.assign(n, -1);
        std::vector<int> last(n + 1, -1);
        for (std::size_t c = 0; c < n; ++c) {
            auto cl = static_cast<std::size_t>(p.cls[c]);
            prev_same_[c] = last[cl];
            last[cl] = static_cast<int>(c);
        }
        target_.assign(i, 0);
        if (i > 0 && l_.adjacent_prev[i]) target_[i - 1] = 1;
        partial_.assign(i, 0);
        x_.assign(n, 0);
        out.clear();
        dfs(p, 0, l_.norm[i], out);
    }

    static void extend(Partial& p, const IntVector& x) {
        const std::size_t n = x.size();
        // refine classes by the new entry, renumbering in coordinate order
        std::vector<std::pair<int, Int>> keys;
        std::vector<int> cls(n);
        for (std::size_t c = 0; c < n; ++c) {
            const std::pair<int, Int> key{p.cls[c], x[c]};
            auto it = std::find(keys.begin(), keys.end(), key);
            if (it == keys.end()) {
                keys.push_back(key);
                cls[c] = static_cast<int>(keys.size() - 1);
            } else {
                cls[c] = static_cast<int>(it - keys.begin());
            }
            if (x[c] != 0) p.zero_col[c] = 0;
        }
        p.cls = std::move(cls);
        std::vector<Int> suf(n + 1, 0);
        for (std::size_t c = n; c-- > 0;) suf[c] = suf[c + 1] + x[c] * x[c];
        p.suffix.push_back(std::move(suf));
        p.rows.push_back(x);
    }

    bool admissible(const Partial& p) const {
        const std::size_t k = p.rows.size();
        if (l_.primitive_prefix == 0 || k > l_.primitive_prefix) return true;
        return rows_primitive(p.rows, l_.n);
    }

    // true on success (solution stored); false when exhausted or stopped
    bool explore(Partial& p) {
        if (p.rows.size() == l_.n) {
            std::lock_guard lock(ctl_.mutex);
            if (!ctl_.solution) ctl_.solution = p.rows;
            ctl_.stop = true;
            return true;
        }
        std::vector<IntVector> cands;
        candidates(p, cands);
        for (const auto& x : cands) {
            if (ctl_.stop.load(std::memory_order_relaxed)) return false;
            if (!tick()) return false;
            Partial next = p;
            extend(next, x);
            if (!admissible(next)) continue;
            if (explore(next)) return true;
        }
        return false;
    }

    bool tick() {
        const auto count = ctl_.nodes.fetch_add(1, std::memory_order_relaxed) + 1;
        if (count > ctl_.node_budget) {
            int expected = 0;
            ctl_.budget_hit.compare_exchange_strong(expected, 1);
            ctl_.stop = true;
            return false;
        }
        if ((count & 0x3ff) == 0 && Clock::now() > ctl_.deadline) {
            int expected = 0;
            ctl_.budget_hit.compare_exchange_strong(expected, 2);
            ctl_.stop = true;
            return false;
        }
        return true;
    }

private:
    void dfs(const Partial& p, std::size_t c, Int remaining, std::vector<IntVector>& out) {
        const std::size_t i = p.rows.size();
        const std::size_t n = l_.n;
        if (c == n) {
            if (remaining != 0) return;
            for (std::size_t j = 0; j < i; ++j)
                if (partial_[j] != target_[j]) return;
            out.push_back(x_);
            return;
        }
        Int hi = isqrt(remaining);
        Int lo = p.zero_col[c] ? 0 : -hi;
        if (prev_same_[c] >= 0) hi = std::min(hi, x_[static_cast<std::size_t>(prev_same_[c])]);
        for (Int v = hi; v >= lo; --v) {
            const Int rest = remaining - v * v;
            bool ok = true;
            for (std::size_t j = 0; j < i; ++j) {
                const Int d = partial_[j] + v * p.rows[j][c];
                const Int diff = target_[j] - d;
                if (diff * diff > rest * p.suffix[j][c + 1]) {
                    ok = false;
                    break;
                }
            }
            if (!ok) continue;
            x_[c] = v;
            for (std::size_t j = 0; j < i; ++j) partial_[j] += v * p.rows[j][c];
            dfs(p, c + 1, rest, out);
            for (std::size_t j = 0; j < i; ++j) partial_[j] -= v * p.rows[j][c];
        }
        x_[c] = 0;
    }

    const Layout& l_;
    Control& ctl_;
    std::vector<int> prev_same_;
    std::vector<Int> target_;
    std::vector<Int> partial_;
    IntVector x_;
};

struct Canonical {
    SearchProblem problem;
    std::vector<std::size_t> source;  // canonical summand k comes from original summand source[k]
    std::vector<char> reversed;
};

Canonical canonicalize(const SearchProblem& p) {
    Canonical c;
    const std::size_t k = p.summands.size();
    std::vector<std::size_t> order(k);
    std::iota(order.begin(), order.end(), 0);
    const std::size_t split = p.ribbon_split.value_or(0);
    auto by_canonical = [&](std::size_t a, std::size_t b) {
        return p.summands[a].canonical() < p.summands[b].canonical();
    };
    std::stable_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(split), by_canonical);
    std::stable_sort(order.begin() + static_cast<std::ptrdiff_t>(split), order.end(), by_canonical);
    c.problem.ribbon_split = p.ribbon_split;
    for (std::size_t idx : order) {
        const CFString canon = p.summands[idx].canonical();
        c.reversed.push_back(canon != p.summands[idx] ? 1 : 0);
        c.source.push_back(idx);
        c.problem.summands.push_back(canon);
    }
    return c;
}

std::vector<std::vector<IntVector>> group_rows(const SearchProblem& p, const std::vector<IntVector>& rows) {
    std::vector<std::vector<IntVector>> groups;
    std::size_t at = 0;
    for (const auto& s : p.summands) {
        groups.emplace_back(rows.begin() + static_cast<std::ptrdiff_t>(at),
                            rows.begin() + static_cast<std::ptrdiff_t>(at + s.rank()));
        at += s.rank();
    }
    return groups;
}

std::vector<std::vector<IntVector>> to_original(const Canonical& c, const std::vector<std::vector<IntVector>>& groups) {
    std::vector<std::vector<IntVector>> out(groups.size());
    for (std::size_t k = 0; k < groups.size(); ++k) {
        auto g = groups[k];
        if (c.reversed[k]) std::reverse(g.begin(), g.end());
        out[c.source[k]] = std::move(g);
    }
    return out;
}

// Full-rank sublattices of Z^N have square determinant; in ribbon mode the
// complement of Lambda_2 has determinant det(Lambda_2)/index^2 and must equal det(Lambda_1).
bool determinant_obstructed(const SearchProblem& p) {
    Int d1 = 1, d2 = 1;
    for (std::size_t k = 0; k < p.summands.size(); ++k) {
        const Int d = cf_evaluate(p.summands[k])->num();
        if (p.is_ribbon() && k < *p.ribbon_split)
            d1 = checked_mul(d1, d);
        else
            d2 = checked_mul(d2, d);
    }
    if (!p.is_ribbon()) return !is_perfect_square(d2);
    return d2 % d1 != 0 || !is_perfect_square(d2 / d1);
}

SearchResult run_engine(const SearchProblem& problem, const SearchOptions& options) {
    const Layout layout = layout_of(problem);
    Control ctl;
    ctl.node_budget = options.node_budget;
    ctl.deadline = Clock::now() + options.time_budget;

    const unsigned workers = std::max(1u, options.workers);
    if (workers == 1 || layout.n < 4) {
        Engine engine(layout, ctl);
        Partial root = engine.root();
        engine.explore(root);
    } else {
        // expand breadth-first until there is enough work to share
        Engine engine(layout, ctl);
        std::vector<Partial> frontier{engine.root()};
        std::vector<IntVector> cands;
        while (!frontier.empty() && frontier.size() < 8 * workers && frontier.front().rows.size() < layout.n &&
               !ctl.stop) {
            std::vector<Partial> next;
            for (const auto& p : frontier) {
                engine.candidates(p, cands);
                for (const auto& x : cands) {
                    if (!engine.tick()) break;
                    Partial q = p;
                    Engine::extend(q, x);
                    if (engine.admissible(q)) next.push_back(std::move(q));
                }
            }
            frontier = std::move(next);
        }
        if (!ctl.stop && !frontier.empty() && frontier.front().rows.size() == layout.n) {
            ctl.solution = frontier.front().rows;
            ctl.stop = true;
        }
        std::atomic<std::size_t> next_item{0};
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                Engine local(layout, ctl);
                for (;;) {
                    const std::size_t idx = next_item.fetch_add(1);
                    if (idx >= frontier.size() || ctl.stop) return;
                    Partial p = frontier[idx];
                    local.explore(p);
                }
            });
        for (auto& t : pool) t.join();
    }

    SearchResult r;
    r.nodes = ctl.nodes.load();
    if (ctl.solution) {
        r.outcome = SearchOutcome::Found;
        r.reason = "search";
        Certificate cert;
        cert.groups = group_rows(problem, *ctl.solution);
        cert.nodes = r.nodes;
        r.certificate = std::move(cert);
    } else if (ctl.budget_hit != 0) {
        r.outcome = SearchOutcome::Inconclusive;
        r.reason = ctl.budget_hit == 1 ? "node budget" : "time budget";
    } else {
        r.outcome = SearchOutcome::Absent;
        r.reason = "search";
    }
    return r;
}

}  // namespace

bool verify_certificate(const SearchProblem& problem, const Certificate& certificate) {
    const std::size_t n = problem.ambient_rank();
    if (certificate.groups.size() != problem.summands.size()) return false;
    std::vector<IntVector> all;
    std::vector<std::pair<std::size_t, std::size_t>> where;  // (summand, position)
    for (std::size_t k = 0; k < problem.summands.size(); ++k) {
        if (certificate.groups[k].size() != problem.summands[k].rank()) return false;
        for (std::size_t i = 0; i < certificate.groups[k].size(); ++i) {
            if (certificate.groups[k][i].size() != n) return false;
            all.push_back(certificate.groups[k][i]);
            where.emplace_back(k, i);
        }
    }
    const GramLattice g = gram_of(EmbeddedLattice{n, all});
    for (std::size_t a = 0; a < all.size(); ++a)
        for (std::size_t b = 0; b < all.size(); ++b) {
            Int expect = 0;
            if (where[a].first == where[b].first) {
                const auto ia = where[a].second, ib = where[b].second;
                if (ia == ib)
                    expect = problem.summands[where[a].first].terms()[ia];
                else if (ia + 1 == ib || ib + 1 == ia)
                    expect = 1;
            }
            if (g.gram(a, b) != expect) return false;
        }
    if (n > 0 && matrix_rank(IntMatrix::from_rows(all, n)) != n) return false;
    if (problem.is_ribbon()) {
        EmbeddedLattice l1{n, {}}, l2{n, {}};
        for (std::size_t a = 0; a < all.size(); ++a)
            (where[a].first < *problem.ribbon_split ? l1 : l2).vectors.push_back(all[a]);
        const auto perp = orthogonal_complement(l2);
        // Hermite normal forms agree iff the lattices coincide
        if (lattice_basis(perp.vectors, n) != lattice_basis(l1.vectors, n)) return false;
    }
    return true;
}

SearchResult find_embedding(const SearchProblem& problem, const SearchOptions& options, SearchCache* cache) {
    const auto start = Clock::now();
    const Canonical canon = canonicalize(problem);
    const std::string key = canon.problem.key();
    auto finish = [&](SearchResult r) {
        if (r.certificate) {
            r.certificate->groups = to_original(canon, r.certificate->groups);
            if (!verify_certificate(problem, *r.certificate))
                throw std::logic_error("embedding search produced an invalid certificate for " + problem.key());
        }
        r.wall = Clock::now() - start;
        if (r.certificate) r.certificate->wall = r.wall;
        return r;
    };

    if (cache) {
        if (auto hit = cache->lookup(key)) {
            SearchResult r;
            r.outcome = hit->outcome;
            r.nodes = hit->nodes;
            r.reason = "cache";
            if (hit->outcome == SearchOutcome::Found) r.certificate = Certificate{hit->vectors, hit->nodes, {}};
            return finish(std::move(r));
        }
    }
    if (determinant_obstructed(canon.problem)) {
        SearchResult r;
        r.outcome = SearchOutcome::Absent;
        r.reason = "determinant";
        return finish(std::move(r));
    }
    SearchResult r = run_engine(canon.problem, options);
    if (r.certificate && !verify_certificate(canon.problem, *r.certificate))
        throw std::logic_error("embedding search produced an invalid certificate for " + key);
    if (cache && r.outcome != SearchOutcome::Inconclusive)
        cache->store(key, {r.outcome, r.certificate ? r.certificate->groups : std::vector<std::vector<IntVector>>{},
                           r.nodes});
    return finish(std::move(r));
}

SearchResult find_ribbon_embedding(const CFString& lambda1, const CFString& lambda2, const SearchOptions& options,
                                   SearchCache* cache) {
    return find_embedding(SearchProblem::ribbon({lambda1}, {lambda2}), options, cache);
}

MembershipResult r_membership(const Fraction& f, const SearchOptions& options, SearchCache* cache) {
    MembershipResult r;
    if (f.num() == 1 && f.den() == 1) {
        r.status = Membership::Member;
        r.reason = "S3 bounds a ball";
        return r;
    }
    if (f.num() <= f.den()) throw std::invalid_argument("r_membership needs p > q > 0 or 1, got " + f.str());
    if (!is_perfect_square(f.num())) {
        r.status = Membership::NonMember;
        r.reason = "order is not a square";
        return r;
    }
    const auto forward = find_embedding(SearchProblem::plain({cf_expand(f)}), options, cache);
    if (forward.outcome == SearchOutcome::Absent) {
        r.status = Membership::NonMember;
        r.reason = "Lambda(p/q) does not embed";
        return r;
    }
    const Fraction dual(f.num(), f.num() - f.den());
    const auto backward = find_embedding(SearchProblem::plain({cf_expand(dual)}), options, cache);
    r.forward = forward.certificate;
    r.backward = backward.certificate;
    if (backward.outcome == SearchOutcome::Absent) {
        r.status = Membership::NonMember;
        r.reason = "Lambda(p/(p-q)) does not embed";
        r.forward.reset();
        r.backward.reset();
    } else if (forward.outcome == SearchOutcome::Found && backward.outcome == SearchOutcome::Found) {
        r.status = Membership::Member;
        r.reason = "both embeddings found";
    } else {
        r.status = Membership::Inconclusive;
        r.reason = "search budget exhausted";
    }
    return r;
}

namespace {

CFString parse_cf_token(const std::string& tok) {
    if (tok.size() < 2 || tok.front() != '[' || tok.back() != ']') throw std::invalid_argument("bad summand " + tok);
    std::vector<Int> terms;
    std::stringstream ss(tok.substr(1, tok.size() - 2));
    std::string part;
    while (std::getline(ss, part, ','))
        if (!part.empty()) terms.push_back(std::stoll(part));
    return CFString(std::move(terms));
}

std::vector<CFString> parse_side(const std::string& text) {
    std::vector<CFString> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ';'))
        if (!tok.empty()) out.push_back(parse_cf_token(tok));
    return out;
}

SearchProblem parse_key(const std::string& key) {
    const auto colon = key.find(':');
    if (colon == std::string::npos) throw std::invalid_argument("bad cache key " + key);
    const std::string kind = key.substr(0, colon), body = key.substr(colon + 1);
    if (kind == "plain") return SearchProblem::plain(parse_side(body));
    if (kind == "ribbon") {
        const auto bar = body.find('|');
        if (bar == std::string::npos) throw std::invalid_argument("bad cache key " + key);
        return SearchProblem::ribbon(parse_side(body.substr(0, bar)), parse_side(body.substr(bar + 1)));
    }
    throw std::invalid_argument("bad cache key " + key);
}

}  // namespace

SearchCache::SearchCache(std::filesystem::path path) : path_(std::move(path)) {
    if (std::filesystem::exists(*path_)) load(*path_);
}

std::size_t SearchCache::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read cache " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    from_json(buf.str());
    return size();
}

void SearchCache::save(const std::filesystem::path& path) const {
    const std::string text = to_json();
    const auto tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp);
        if (!out) throw std::runtime_error("cannot write cache " + path.string());
        out << text << '\n';
    }
    std::filesystem::rename(tmp, path);
}

void SearchCache::flush() const {
    if (path_) save(*path_);
}

std::optional<SearchCache::Entry> SearchCache::lookup(const std::string& key) const {
    std::lock_guard lock(mutex_);
    auto it = entries_.find(key);
    if (it == entries_.end()) return std::nullopt;
    return it->second;
}

void SearchCache::store(const std::string& key, Entry entry) {
    std::lock_guard lock(mutex_);
    entries_[key] = std::move(entry);
}

std::size_t SearchCache::size() const {
    std::lock_guard lock(mutex_);
    return entries_.size();
}

// Integers are written as decimal strings so nothing is lost to JSON number handling.
std::string SearchCache::to_json() const {
    std::lock_guard lock(mutex_);
    nlohmann::ordered_json j;
    j["version"] = kVersion;
    auto arr = nlohmann::ordered_json::array();
    for (const auto& [key, e] : entries_) {
        nlohmann::ordered_json item;
        item["key"] = key;
        item["outcome"] = to_string(e.outcome);
        auto groups = nlohmann::ordered_json::array();
        for (const auto& g : e.vectors) {
            auto vs = nlohmann::ordered_json::array();
            for (const auto& v : g) {
                auto row = nlohmann::ordered_json::array();
                for (Int a : v) row.push_back(std::to_string(a));
                vs.push_back(row);
            }
            groups.push_back(vs);
        }
        item["vectors"] = groups;
        item["nodes"] = std::to_string(e.nodes);
        arr.push_back(item);
    }
    j["entries"] = arr;
    return j.dump(1);
}

void SearchCache::from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    if (j.value("version", std::string{}) != kVersion) return;
    std::map<std::string, Entry> kept;
    for (const auto& item : j.at("entries")) {
        try {
            const std::string key = item.at("key").get<std::string>();
            const std::string outcome = item.at("outcome").get<std::string>();
            Entry e;
            e.nodes = std::stoull(item.at("nodes").get<std::string>());
            if (outcome == "absent") {
                e.outcome = SearchOutcome::Absent;
            } else if (outcome == "found") {
                e.outcome = SearchOutcome::Found;
                for (const auto& g : item.at("vectors")) {
                    std::vector<IntVector> vs;
                    for (const auto& row : g) {
                        IntVector v;
                        for (const auto& a : row) v.push_back(std::stoll(a.get<std::string>()));
                        vs.push_back(std::move(v));
                    }
                    e.vectors.push_back(std::move(vs));
                }
                const SearchProblem problem = parse_key(key);
                if (problem.key() != key || !verify_certificate(problem, Certificate{e.vectors, e.nodes, {}})) continue;
            } else {
                continue;
            }
            kept[key] = std::move(e);
        } catch (const std::exception&) {
            continue;
        }
    }
    std::lock_guard lock(mutex_);
    for (auto& [k, e] : kept) entries_[k] = std::move(e);
}

}  // namespace ribbon
