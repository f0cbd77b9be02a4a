#pragma once

#include <array>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace reqforge::judge {

inline constexpr int kCsuqItems = 19;
inline constexpr int kCsuqMin = 1;
inline constexpr int kCsuqMax = 7;

class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct CsuqResponse {
    std::array<int, kCsuqItems> items{};  // items[0] is Q1
};

/// JSON array of 19 integers in [1,7]. Throws std::invalid_argument.
CsuqResponse csuq_response_from_json(const nlohmann::json& j);

/// Item numbers are 1-based.
struct CsuqMapping {
    std::vector<int> overall;
    std::vector<int> usability;
    std::vector<int> information;
    std::vector<int> interface;
    std::set<int> reversed;
};

/// Overall = Q19, Usability = Q1..Q8, Information = Q9..Q13, Interface = Q14..Q18; Q4 and Q5 reversed.
CsuqMapping default_csuq_mapping();

/// {"overall": [...], "usability": [...], "information": [...], "interface": [...], "reversed": [...]};
/// absent keys keep the default. Throws ConfigError.
CsuqMapping csuq_mapping_from_json(const nlohmann::json& j);

struct CsuqScores {
    double overall = 0;
    double usability = 0;
    double information_quality = 0;
    double interface_quality = 0;

    bool operator==(const CsuqScores&) const = default;
};

inline int reverse_item(int x) { return kCsuqMax + kCsuqMin - x; }

/// Throws ConfigError for empty subscales or item numbers outside 1..19.
CsuqScores score_csuq(const CsuqResponse& response, const CsuqMapping& mapping = default_csuq_mapping());

/// "overall 4.0 usability 4.0 information 4.0 interface 4.0"
std::string format_csuq(const CsuqScores& scores);

}  // namespace reqforge::judge
