#include <cstdlib>
#include <sstream>

#include "doctest.h"
#include "ribbon/cli.hpp"

using namespace ribbon;
using namespace ribbon::cli;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome call(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

Json call_json(std::vector<std::string> args) {
    args.insert(args.begin(), {"--format", "json"});
    const auto r = call(args);
    return Json::parse(r.out);
}

// Environment variable set for the lifetime of the guard.
struct EnvGuard {
    std::string name;
    EnvGuard(const std::string& n, const std::string& value) : name(n) { ::setenv(n.c_str(), value.c_str(), 1); }
    ~EnvGuard() { ::unsetenv(name.c_str()); }
};

}  // namespace

TEST_CASE("lens tokens") {
    CHECK(parse_lens("8/3") == lens_normalize(8, 3));
    CHECK(parse_lens("-8/3") == lens_normalize(8, 5));
    CHECK(parse_lens("~8/3") == lens_normalize(8, 5));
    CHECK(parse_lens("+8/3") == lens_normalize(8, 3));
    CHECK(parse_lens("5") == lens_normalize(5, 1));
    CHECK(parse_lens("S3").is_sphere());
    CHECK(parse_lens("1").is_sphere());
    for (const std::string bad : {"4/2", "abc", "3/", "/3", "2/3/4", "0/1", ""}) {
        INFO(bad);
        try {
            parse_lens(bad);
            FAIL("accepted a bad token");
        } catch (const UsageError& e) {
            CHECK(e.token() == bad);
        }
    }
}

TEST_CASE("sums, fractions, strings and links") {
    CHECK(parse_sum("7/4,7/3") == ConnectedSum({lens_normalize(7, 4), lens_normalize(7, 3)}));
    CHECK(parse_sum("7/4#7/3") == parse_sum("7/3,7/4"));
    CHECK(parse_sum("").is_sphere());
    CHECK(parse_sum("-7/3") == ConnectedSum({lens_normalize(7, 4)}));
    CHECK_THROWS_AS(parse_sum("7/4,,7/3"), UsageError);

    CHECK(parse_fraction("8/5") == Fraction(8, 5));
    CHECK(parse_fraction("1") == Fraction(1, 1));
    CHECK_THROWS_AS(parse_fraction("5/8"), UsageError);
    CHECK_THROWS_AS(parse_fraction("6/4"), UsageError);

    CHECK(parse_cf("[2,3,2]") == CFString({2, 3, 2}));
    CHECK(parse_cf("8/5") == CFString({2, 3, 2}));
    CHECK_THROWS_AS(parse_cf("[1,2]"), UsageError);
    CHECK_THROWS_AS(parse_cf("[2,x]"), UsageError);

    const auto links = parse_links("U,7/4");
    REQUIRE(links.size() == 2);
    CHECK(links[0].is_unknot());
    CHECK(links[1] == TwoBridgeLink(7, 4));
}

TEST_CASE("exit codes follow the verdict") {
    CHECK(call({"ribbon", "2/1", "8/5"}).code == kYes);
    CHECK(call({"ribbon", "8/5", "2/1"}).code == kNo);
    CHECK(call({"in-r", "4/3"}).code == kYes);
    CHECK(call({"in-r", "2/1"}).code == kNo);
    CHECK(call({"cf", "7/4"}).code == kYes);
    CHECK(call({"lens", "cmp", "7/2", "7/5", "--oriented"}).code == kNo);
    CHECK(call({"lens", "cmp", "7/2", "7/5"}).code == kYes);
    CHECK(call({"fn", "7/4"}).code == kNo);
    CHECK(call({"fn", "8/5"}).code == kYes);
    CHECK(call({"embed", "--summands", "[2]"}).code == kNo);
    CHECK(call({"embed", "--summands", "[2] [2,3,2]", "--ribbon-split", "1"}).code == kYes);
    CHECK(call({"--node-budget", "1", "in-r", "49/19"}).code == kInconclusive);
}

TEST_CASE("usage errors name the offending token") {
    const auto r = call({"ribbon", "4/2", "3/1"});
    CHECK(r.code == kUsage);
    CHECK(r.err.find("'4/2'") != std::string::npos);
    CHECK(call({}).code == kUsage);
    CHECK(call({"frobnicate"}).code == kUsage);
    CHECK(call({"ribbon", "3/1"}).code == kUsage);
    CHECK(call({"--format", "yaml", "cf", "7/4"}).code == kUsage);
    CHECK(call({"--node-budget", "-5", "in-r", "4/3"}).code == kUsage);
    CHECK(call({"embed", "--summands", "[2]", "--ribbon-split", "3"}).code == kUsage);
}

TEST_CASE("text output") {
    const auto r = call({"ribbon", "2/1", "8/5"});
    CHECK(r.out.find("T2 n=2 (m=2,k=1)") != std::string::npos);
    CHECK(call({"cf", "7/4"}).out.find("[2,4]") == 0);
    CHECK(call({"ribbon", "8/5", "2/1"}).out.find("square-ratio") != std::string::npos);
    // a leading '-' on a positional is a reversal, not an option
    CHECK(call({"ribbon", "-8/3", "2/1"}).code == kNo);
    CHECK(call({"lens", "cmp", "-7/2", "7/5", "--oriented"}).code == kYes);
}

TEST_CASE("structured output round trips") {
    SearchOracle oracle;
    for (const auto& [a, b] : std::vector<std::pair<std::string, std::string>>{
             {"2/1", "8/5"}, {"8/5", "2/1"}, {"3/1", "3/1"}, {"S3", "4/1"}, {"4/1", "16/7"}}) {
        const auto doc = call_json({"ribbon", a, b});
        CHECK(doc.at("schema") == kSchema);
        const auto v = verdict_from_json(doc.at("verdict"));
        CHECK(v == ribbon_leq_lens(parse_lens(a), parse_lens(b), oracle));
        CHECK(to_json(v) == doc.at("verdict"));
    }
    const auto sum = call_json({"ribbon-sum", "", "7/4,7/3"});
    const auto v = verdict_from_json(sum.at("verdict"));
    CHECK(v.answer == Answer::Yes);
    CHECK(to_json(v) == sum.at("verdict"));

    const auto member = call_json({"in-r", "4/3"});
    const auto m = membership_from_json(member.at("result"));
    const auto direct = r_membership(Fraction(4, 3));
    CHECK(m.status == direct.status);
    CHECK(m.reason == direct.reason);
    CHECK(m.forward == direct.forward);
    CHECK(m.backward == direct.backward);
    CHECK(to_json(m) == member.at("result"));

    for (const auto& l : {lens_normalize(7, 3), sphere()}) CHECK(lens_from_json(to_json(l)) == l);
    PairType p;
    p.tag = PairTag::T6;
    p.right = {lens_normalize(8, 5), lens_normalize(12, 7)};
    p.reversed = true;
    p.n = 2;
    CHECK(pair_from_json(to_json(p)) == p);
    Certificate c;
    c.groups = {{{1, 1, 0}, {0, -1, 1}}, {{2}}};
    c.nodes = 12;
    CHECK(certificate_from_json(to_json(c)) == c);
    CHECK(to_json(c)["vectors"][0][1][1] == "-1");
    for (auto a : {Answer::Yes, Answer::No, Answer::Inconclusive}) CHECK(answer_from_string(to_string(a)) == a);
    for (auto s : {Membership::Member, Membership::NonMember, Membership::Inconclusive})
        CHECK(membership_from_string(to_string(s)) == s);
}

TEST_CASE("flags take precedence over the environment") {
    ::unsetenv("RIBBON_NODE_BUDGET");
    {
        EnvGuard tiny("RIBBON_NODE_BUDGET", "1");
        CHECK(call({"in-r", "49/19"}).code == kInconclusive);
        CHECK(call({"--node-budget", "100000000", "in-r", "49/19"}).code != kInconclusive);
        CHECK(call({"in-r", "49/19", "--node-budget", "100000000"}).code != kInconclusive);
    }
    CHECK(call({"in-r", "49/19"}).code != kInconclusive);

    const auto path = std::filesystem::temp_directory_path() / "ribbon-cli-cache.json";
    std::filesystem::remove(path);
    {
        EnvGuard cache("RIBBON_CACHE", path.string());
        CHECK(call({"in-r", "4/3"}).code == kYes);
    }
    CHECK(std::filesystem::exists(path));
    SearchCache loaded(path);
    CHECK(loaded.size() == 2);
    std::filesystem::remove(path);
}

TEST_CASE("global reversal") {
    // reversing both sides keeps the answer
    CHECK(call({"--reverse", "ribbon", "2/1", "8/5"}).code == kYes);
    const auto doc = call_json({"--reverse", "ribbon", "2/1", "8/5"});
    CHECK(doc.at("query").at("second").at("q") == "3");
}

TEST_CASE("selfcheck on a small scale") {
    const auto r = call({"selfcheck", "--max-p", "6"});
    CHECK(r.code == kYes);
    CHECK(r.out.find("FAIL") == std::string::npos);
    CHECK(r.out.find("PASS 7") != std::string::npos);
}
