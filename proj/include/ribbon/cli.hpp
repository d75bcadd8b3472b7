#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "ribbon/classify.hpp"
#include "ribbon/search.hpp"

namespace ribbon::cli {

using Json = nlohmann::ordered_json;

constexpr const char* kSchema = "ribbon-cli/1";

enum ExitCode : int { kYes = 0, kNo = 1, kInconclusive = 2, kUsage = 64 };

/// Thrown for malformed command-line tokens; carries the offending token.
class UsageError : public std::invalid_argument {
public:
    UsageError(const std::string& token, const std::string& why)
        : std::invalid_argument(why + ": '" + token + "'"), token_(token) {}
    const std::string& token() const { return token_; }

private:
    std::string token_;
};

/// "p/q", "-p/q" (reversed), "+p/q", "p" (= p/1), "S3", "1", "1/0".
LensSpace parse_lens(const std::string& token);
/// Summands separated by ',' or '#'; the empty string is S^3.
ConnectedSum parse_sum(const std::string& text);
/// p/q with p > q > 0, or 1 for S^3.
Fraction parse_fraction(const std::string& token);
/// "[a1,...,an]" or a fraction token expanded into its continued fraction.
CFString parse_cf(const std::string& token);
/// Like parse_sum but for links: "p/q" is K(p,q), "U" or "" the unknot.
std::vector<TwoBridgeLink> parse_links(const std::string& text);

Json to_json(const LensSpace& l);
LensSpace lens_from_json(const Json& j);
Json to_json(const PairType& p);
PairType pair_from_json(const Json& j);
Json to_json(const Verdict& v);
Verdict verdict_from_json(const Json& j);
Json to_json(const Certificate& c);
Certificate certificate_from_json(const Json& j);
Json to_json(const MembershipResult& r);
MembershipResult membership_from_json(const Json& j);

Answer answer_from_string(const std::string& s);
Membership membership_from_string(const std::string& s);

/// Entry point; `args` excludes the program name. Returns the exit status.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ribbon::cli
