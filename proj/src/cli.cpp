#include "ribbon/cli.hpp"

#include <cctype>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "ribbon/selfcheck.hpp"

namespace ribbon::cli {

namespace {

Int parse_int(const std::string& s, const std::string& token) {
    if (s.empty() || !std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); }))
        throw UsageError(token, "expected a non-negative integer");
    try {
        return std::stoll(s);
    } catch (const std::out_of_range&) {
        throw UsageError(token, "integer out of range");
    }
}

// Strips an orientation sign: '-' or '~' reverse, '+' keeps.
std::pair<std::string, bool> split_sign(const std::string& token) {
    if (!token.empty() && (token[0] == '-' || token[0] == '~')) return {token.substr(1), true};
    if (!token.empty() && token[0] == '+') return {token.substr(1), false};
    return {token, false};
}

std::pair<Int, Int> parse_ratio(const std::string& body, const std::string& token) {
    const auto slash = body.find('/');
    if (slash == std::string::npos) return {parse_int(body, token), 1};
    return {parse_int(body.substr(0, slash), token), parse_int(body.substr(slash + 1), token)};
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : text) {
        if (c == ',' || c == '#') {
            out.push_back(cur);
            cur.clear();
        } else if (!std::isspace(static_cast<unsigned char>(c))) {
            cur += c;
        }
    }
    out.push_back(cur);
    if (out.size() == 1 && out[0].empty()) return {};
    for (const auto& piece : out)
        if (piece.empty()) throw UsageError(text, "empty summand");
    return out;
}

std::string s(Int v) { return std::to_string(v); }
Int i(const Json& j) { return std::stoll(j.get<std::string>()); }

}  // namespace

LensSpace parse_lens(const std::string& token) {
    const auto [body, rev] = split_sign(token);
    if (body == "S3") return sphere();
    const auto [p, q] = parse_ratio(body, token);
    if (p < 1) throw UsageError(token, "lens order must be positive");
    if (gcd(p, q) != 1) throw UsageError(token, "parameters are not coprime");
    const LensSpace l = lens_normalize(p, q);
    return rev ? lens_reverse(l) : l;
}

ConnectedSum parse_sum(const std::string& text) {
    std::vector<LensSpace> out;
    for (const auto& tok : split_list(text)) out.push_back(parse_lens(tok));
    return ConnectedSum(std::move(out));
}

Fraction parse_fraction(const std::string& token) {
    const auto [body, rev] = split_sign(token);
    const auto [p, q] = parse_ratio(body, token);
    if (p == 1 && q == 1 && !rev) return {1, 1};
    if (!(p > q && q > 0)) throw UsageError(token, "expected p/q with p > q > 0");
    if (gcd(p, q) != 1) throw UsageError(token, "parameters are not coprime");
    return rev ? Fraction(p, p - q) : Fraction(p, q);
}

CFString parse_cf(const std::string& token) {
    if (!token.empty() && token.front() == '[') {
        if (token.back() != ']') throw UsageError(token, "unterminated continued fraction");
        std::vector<Int> terms;
        std::stringstream ss(token.substr(1, token.size() - 2));
        std::string part;
        while (std::getline(ss, part, ',')) terms.push_back(parse_int(part, token));
        for (Int a : terms)
            if (a < 2) throw UsageError(token, "continued-fraction terms must be >= 2");
        return CFString(std::move(terms));
    }
    const Fraction f = parse_fraction(token);
    if (f.num() == 1) return {};
    return cf_expand(f);
}

std::vector<TwoBridgeLink> parse_links(const std::string& text) {
    std::vector<TwoBridgeLink> out;
    for (const auto& tok : split_list(text)) {
        if (tok == "U") {
            out.push_back(TwoBridgeLink::unknot());
            continue;
        }
        const LensSpace l = parse_lens(tok);
        out.emplace_back(l.p(), l.q());
    }
    return out;
}

Json to_json(const LensSpace& l) { return Json{{"p", s(l.p())}, {"q", s(l.q())}}; }

LensSpace lens_from_json(const Json& j) { return lens_normalize(i(j.at("p")), i(j.at("q"))); }

Json to_json(const PairType& p) {
    Json j;
    j["tag"] = to_string(p.tag);
    j["left"] = p.left ? to_json(*p.left) : Json(nullptr);
    j["right"] = Json::array();
    for (const auto& l : p.right) j["right"].push_back(to_json(l));
    j["reversed"] = p.reversed;
    j["n"] = s(p.n);
    j["witnesses"] = Json::array();
    for (const auto& w : p.witnesses) j["witnesses"].push_back(Json{{"n", s(w.n)}, {"m", s(w.m)}, {"k", s(w.k)}});
    j["text"] = p.str();
    return j;
}

PairType pair_from_json(const Json& j) {
    PairType p;
    const std::string tag = j.at("tag").get<std::string>();
    if (tag.size() != 2 || tag[0] != 'T' || tag[1] < '1' || tag[1] > '7') throw std::invalid_argument("bad tag " + tag);
    p.tag = static_cast<PairTag>(tag[1] - '1');
    if (!j.at("left").is_null()) p.left = lens_from_json(j.at("left"));
    for (const auto& l : j.at("right")) p.right.push_back(lens_from_json(l));
    p.reversed = j.at("reversed").get<bool>();
    p.n = i(j.at("n"));
    for (const auto& w : j.at("witnesses")) p.witnesses.push_back({i(w.at("n")), i(w.at("m")), i(w.at("k"))});
    return p;
}

Answer answer_from_string(const std::string& str) {
    if (str == "yes") return Answer::Yes;
    if (str == "no") return Answer::No;
    if (str == "inconclusive") return Answer::Inconclusive;
    throw std::invalid_argument("bad answer " + str);
}

Membership membership_from_string(const std::string& str) {
    if (str == "member") return Membership::Member;
    if (str == "non-member") return Membership::NonMember;
    if (str == "inconclusive") return Membership::Inconclusive;
    throw std::invalid_argument("bad membership " + str);
}

Json to_json(const Verdict& v) {
    Json j;
    j["answer"] = to_string(v.answer);
    j["witness"] = Json::array();
    for (const auto& p : v.witness) j["witness"].push_back(to_json(p));
    j["obstruction"] = v.obstruction.empty() ? Json(nullptr) : Json(v.obstruction);
    j["oracle_trace"] = Json::array();
    for (const auto& c : v.oracle_trace)
        j["oracle_trace"].push_back(Json{{"fraction", c.fraction.str()}, {"status", to_string(c.status)}});
    return j;
}

Verdict verdict_from_json(const Json& j) {
    Verdict v;
    v.answer = answer_from_string(j.at("answer").get<std::string>());
    for (const auto& p : j.at("witness")) v.witness.push_back(pair_from_json(p));
    if (!j.at("obstruction").is_null()) v.obstruction = j.at("obstruction").get<std::string>();
    for (const auto& c : j.at("oracle_trace")) {
        const std::string f = c.at("fraction").get<std::string>();
        const auto slash = f.find('/');
        const Fraction fr = slash == std::string::npos ? Fraction(std::stoll(f), 1)
                                                       : Fraction(std::stoll(f.substr(0, slash)), std::stoll(f.substr(slash + 1)));
        v.oracle_trace.push_back({fr, membership_from_string(c.at("status").get<std::string>())});
    }
    return v;
}

Json to_json(const Certificate& c) {
    Json groups = Json::array();
    for (const auto& g : c.groups) {
        Json vs = Json::array();
        for (const auto& v : g) {
            Json row = Json::array();
            for (Int a : v) row.push_back(s(a));
            vs.push_back(row);
        }
        groups.push_back(vs);
    }
    return Json{{"vectors", groups}, {"nodes", std::to_string(c.nodes)}};
}

Certificate certificate_from_json(const Json& j) {
    Certificate c;
    for (const auto& g : j.at("vectors")) {
        std::vector<IntVector> vs;
        for (const auto& row : g) {
            IntVector v;
            for (const auto& a : row) v.push_back(i(a));
            vs.push_back(std::move(v));
        }
        c.groups.push_back(std::move(vs));
    }
    c.nodes = std::stoull(j.at("nodes").get<std::string>());
    return c;
}

Json to_json(const MembershipResult& r) {
    Json j;
    j["status"] = to_string(r.status);
    j["reason"] = r.reason;
    j["forward"] = r.forward ? to_json(*r.forward) : Json(nullptr);
    j["backward"] = r.backward ? to_json(*r.backward) : Json(nullptr);
    return j;
}

MembershipResult membership_from_json(const Json& j) {
    MembershipResult r;
    r.status = membership_from_string(j.at("status").get<std::string>());
    r.reason = j.at("reason").get<std::string>();
    if (!j.at("forward").is_null()) r.forward = certificate_from_json(j.at("forward"));
    if (!j.at("backward").is_null()) r.backward = certificate_from_json(j.at("backward"));
    return r;
}

namespace {

int exit_for(Answer a) {
    switch (a) {
        case Answer::Yes: return kYes;
        case Answer::No: return kNo;
        default: return kInconclusive;
    }
}

int exit_for(Membership m) {
    switch (m) {
        case Membership::Member: return kYes;
        case Membership::NonMember: return kNo;
        default: return kInconclusive;
    }
}

int exit_for(SearchOutcome o) {
    switch (o) {
        case SearchOutcome::Found: return kYes;
        case SearchOutcome::Absent: return kNo;
        default: return kInconclusive;
    }
}

Json document(const std::string& command) { return Json{{"schema", kSchema}, {"command", command}}; }

void print_vectors(std::ostream& out, const Certificate& c) {
    for (std::size_t g = 0; g < c.groups.size(); ++g)
        for (const auto& v : c.groups[g]) {
            out << "  " << g << ": (";
            for (std::size_t k = 0; k < v.size(); ++k) out << (k ? "," : "") << v[k];
            out << ")\n";
        }
}

void print_verdict(std::ostream& out, const Verdict& v) {
    out << to_string(v.answer);
    if (!v.obstruction.empty()) out << " (" << v.obstruction << ")";
    out << "\n";
    for (const auto& p : v.witness) out << "  " << p.str() << "\n";
    for (const auto& c : v.oracle_trace) out << "  oracle " << c.fraction.str() << ": " << to_string(c.status) << "\n";
}

struct Settings {
    std::string format = "text";
    std::optional<std::uint64_t> node_budget;
    std::optional<std::int64_t> time_budget_ms;
    std::optional<unsigned> jobs;
    std::optional<std::string> cache_path;
    bool reverse = false;
};

SearchOptions search_options(const Settings& st) {
    SearchOptions o = SearchOptions::from_environment();
    if (st.node_budget) o.node_budget = *st.node_budget;
    if (st.time_budget_ms) o.time_budget = std::chrono::milliseconds(*st.time_budget_ms);
    if (st.jobs) o.workers = std::max(1u, *st.jobs);
    return o;
}

std::optional<std::string> cache_location(const Settings& st) {
    if (st.cache_path) return st.cache_path;
    if (const char* env = std::getenv("RIBBON_CACHE"); env && *env) return std::string(env);
    return std::nullopt;
}

}  // namespace

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
    // "-p/q" would be taken for an option; '~' is the internal spelling of reversal
    std::vector<std::string> args;
    for (const auto& a : raw_args)
        args.push_back(a.size() > 1 && a[0] == '-' && std::isdigit(static_cast<unsigned char>(a[1])) ? "~" + a.substr(1)
                                                                                                   : a);

    CLI::App app{"Ribbon cobordisms between lens spaces and their connected sums", "ribbon"};
    app.fallthrough();
    app.require_subcommand(1);
    Settings st;
    app.add_option("--format", st.format, "text or json")->check(CLI::IsMember({"text", "json"}));
    app.add_option("--node-budget", st.node_budget, "search node budget per problem");
    app.add_option("--time-budget-ms", st.time_budget_ms, "search time budget per problem")->check(CLI::PositiveNumber);
    app.add_option("--jobs", st.jobs, "search workers; selfcheck runs criteria concurrently")
        ->check(CLI::PositiveNumber);
    app.add_option("--cache", st.cache_path, "certificate cache file");
    app.add_flag("--reverse", st.reverse, "reverse the orientation of every lens space in the query");

    std::string a1, a2;
    auto* cf = app.add_subcommand("cf", "negative continued fraction of p/q");
    cf->add_option("fraction", a1)->required();

    auto* lens = app.add_subcommand("lens", "lens-space utilities");
    auto* cmp = lens->add_subcommand("cmp", "homeomorphism test");
    bool oriented = false;
    cmp->add_option("first", a1)->required();
    cmp->add_option("second", a2)->required();
    cmp->add_flag("--oriented", oriented, "orientation-preserving homeomorphism only");
    lens->require_subcommand(1);

    auto* fn = app.add_subcommand("fn", "all F_n witnesses of p/q");
    fn->add_option("fraction", a1)->required();

    auto* inr = app.add_subcommand("in-r", "membership of p/q in R (double-embedding oracle)");
    inr->add_option("fraction", a1)->required();

    auto* rib = app.add_subcommand("ribbon", "is there a ribbon cobordism L(p1,q1) -> L(p2,q2)?");
    rib->add_option("first", a1)->required();
    rib->add_option("second", a2)->required();

    auto* ribsum = app.add_subcommand("ribbon-sum", "ribbon cobordism between connected sums");
    ribsum->add_option("first", a1, "summands separated by ',' or '#'; empty for S3")->required();
    ribsum->add_option("second", a2)->required();

    auto* bridge = app.add_subcommand("bridge", "ribbon chi-concordance between sums of 2-bridge links");
    bridge->add_option("first", a1, "p/q for K(p,q), U for the unknot")->required();
    bridge->add_option("second", a2)->required();

    auto* embed = app.add_subcommand("embed", "raw full-rank embedding search");
    std::string summand_text;
    std::optional<std::size_t> split;
    embed->add_option("--summands", summand_text, "'[a1,...]' strings or fractions, separated by ';' or spaces")
        ->required();
    embed->add_option("--ribbon-split", split, "summands before this index form Lambda_1");

    auto* self = app.add_subcommand("selfcheck", "run the cross-validation suites");
    std::optional<Int> max_p;
    self->add_option("--max-p", max_p, "order bound for the lens-pair and sum suites (R suite uses 3x)")
        ->check(CLI::Range(2, 60));

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kYes;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kYes;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        return kUsage;
    }

    const bool json = st.format == "json";
    auto maybe_reverse = [&](const LensSpace& l) { return st.reverse ? lens_reverse(l) : l; };
    try {
        const SearchOptions options = search_options(st);
        std::optional<SearchCache> cache;
        if (auto path = cache_location(st)) cache.emplace(*path);
        SearchCache* cache_ptr = cache ? &*cache : nullptr;
        auto finish = [&](int code) {
            if (cache) cache->flush();
            return code;
        };

        if (cf->parsed()) {
            const Fraction f = parse_fraction(a1);
            if (f.num() == 1) throw UsageError(a1, "expected p/q with p > q > 0");
            const CFString c = cf_expand(f);
            const auto back = cf_evaluate(c);
            if (json) {
                Json d = document("cf");
                d["fraction"] = f.str();
                d["terms"] = Json::array();
                for (Int a : c.terms()) d["terms"].push_back(s(a));
                d["evaluates_to"] = back->str();
                d["round_trip"] = *back == f;
                out << d.dump(2) << "\n";
            } else {
                out << c.str() << "\n";
            }
            return kYes;
        }
        if (cmp->parsed()) {
            const LensSpace x = parse_lens(a1), y = parse_lens(a2);
            const bool same = lens_homeomorphic(x, y, oriented);
            if (json) {
                Json d = document("lens cmp");
                d["first"] = to_json(x);
                d["second"] = to_json(y);
                d["oriented"] = oriented;
                d["homeomorphic"] = same;
                out << d.dump(2) << "\n";
            } else {
                out << x.str() << (same ? " ~ " : " !~ ") << y.str() << (oriented ? " (oriented)" : "") << "\n";
            }
            return same ? kYes : kNo;
        }
        if (fn->parsed()) {
            const Fraction f = parse_fraction(a1);
            const auto ws = f.num() == 1 ? std::vector<FnWitness>{} : fn_membership(f);
            if (json) {
                Json d = document("fn");
                d["fraction"] = f.str();
                d["witnesses"] = Json::array();
                for (const auto& w : ws) d["witnesses"].push_back(Json{{"n", s(w.n)}, {"m", s(w.m)}, {"k", s(w.k)}});
                out << d.dump(2) << "\n";
            } else if (ws.empty()) {
                out << f.str() << " lies in no F_n\n";
            } else {
                for (const auto& w : ws)
                    out << f.str() << " in F_" << w.n << " (m=" << w.m << ",k=" << w.k << ")\n";
            }
            return ws.empty() ? kNo : kYes;
        }
        if (inr->parsed()) {
            const Fraction f = parse_fraction(a1);
            const MembershipResult r = r_membership(f, options, cache_ptr);
            if (json) {
                Json d = document("in-r");
                d["fraction"] = f.str();
                d["oracle"] = "double-embedding";
                d["result"] = to_json(r);
                out << d.dump(2) << "\n";
            } else {
                out << to_string(r.status) << " (" << r.reason << ")\n";
                if (r.forward) {
                    out << "Lambda(" << f.str() << "):\n";
                    print_vectors(out, *r.forward);
                }
                if (r.backward) {
                    out << "Lambda(" << Fraction(f.num(), f.num() - f.den()).str() << "):\n";
                    print_vectors(out, *r.backward);
                }
            }
            return finish(exit_for(r.status));
        }
        if (rib->parsed() || ribsum->parsed() || bridge->parsed()) {
            SearchOracle oracle(options, cache_ptr);
            Verdict v;
            Json query;
            if (rib->parsed()) {
                const LensSpace x = maybe_reverse(parse_lens(a1)), y = maybe_reverse(parse_lens(a2));
                v = ribbon_leq_lens(x, y, oracle);
                query = Json{{"first", to_json(x)}, {"second", to_json(y)}};
            } else if (ribsum->parsed()) {
                ConnectedSum x = parse_sum(a1), y = parse_sum(a2);
                if (st.reverse) {
                    x = x.reversed();
                    y = y.reversed();
                }
                v = ribbon_leq_sum(x, y, oracle);
                query = Json{{"first", Json::array()}, {"second", Json::array()}};
                for (const auto& l : x.summands()) query["first"].push_back(to_json(l));
                for (const auto& l : y.summands()) query["second"].push_back(to_json(l));
            } else {
                auto x = parse_links(a1), y = parse_links(a2);
                if (st.reverse) {
                    for (auto& k : x) k = k.mirror();
                    for (auto& k : y) k = k.mirror();
                }
                v = chi_leq_bridge(x, y, oracle);
                query = Json{{"first", Json::array()}, {"second", Json::array()}};
                for (const auto& k : x) query["first"].push_back(to_json(k.cover()));
                for (const auto& k : y) query["second"].push_back(to_json(k.cover()));
            }
            if (json) {
                Json d = document(rib->parsed() ? "ribbon" : ribsum->parsed() ? "ribbon-sum" : "bridge");
                d["query"] = query;
                d["oracle"] = oracle.name();
                d["verdict"] = to_json(v);
                out << d.dump(2) << "\n";
            } else {
                print_verdict(out, v);
            }
            return finish(exit_for(v.answer));
        }
        if (embed->parsed()) {
            std::vector<CFString> summands;
            std::string token;
            std::stringstream ss(summand_text);
            while (ss >> token) {
                std::stringstream parts(token);
                std::string piece;
                while (std::getline(parts, piece, ';'))
                    if (!piece.empty()) summands.push_back(parse_cf(piece));
            }
            SearchProblem problem = SearchProblem::plain(summands);
            if (split) {
                if (*split > summands.size()) throw UsageError(std::to_string(*split), "ribbon split out of range");
                problem = SearchProblem::ribbon({summands.begin(), summands.begin() + static_cast<std::ptrdiff_t>(*split)},
                                                {summands.begin() + static_cast<std::ptrdiff_t>(*split), summands.end()});
            }
            const SearchResult r = find_embedding(problem, options, cache_ptr);
            if (json) {
                Json d = document("embed");
                d["problem"] = problem.key();
                d["outcome"] = to_string(r.outcome);
                d["reason"] = r.reason;
                d["nodes"] = std::to_string(r.nodes);
                d["certificate"] = r.certificate ? to_json(*r.certificate) : Json(nullptr);
                out << d.dump(2) << "\n";
            } else {
                out << problem.key() << ": " << to_string(r.outcome) << " (" << r.reason << ", " << r.nodes
                    << " nodes)\n";
                if (r.certificate) print_vectors(out, *r.certificate);
            }
            return finish(exit_for(r.outcome));
        }
        if (self->parsed()) {
            SelfcheckConfig config;
            config.search = options;
            config.search.workers = 1;
            if (max_p) {
                config.lens_max_p = *max_p;
                config.sum_max_p = *max_p;
                config.r_max_p = 3 * *max_p;
            }
            const auto results = run_selfcheck(config, st.jobs.value_or(1), cache_ptr);
            bool ok = true;
            Json d = document("selfcheck");
            d["criteria"] = Json::array();
            for (const auto& r : results) {
                ok = ok && r.passed;
                if (json)
                    d["criteria"].push_back(Json{{"id", s(r.id)}, {"title", r.title}, {"passed", r.passed}, {"detail", r.detail}});
                else
                    out << format_line(r) << "\n";
            }
            if (json) out << d.dump(2) << "\n";
            return finish(ok ? kYes : kNo);
        }
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::invalid_argument& e) {
        err << "usage error: " << e.what() << "\n";
        return kUsage;
    }
    return kUsage;
}

}  // namespace ribbon::cli
