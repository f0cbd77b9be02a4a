#include "reqforge/judge/csuq.hpp"

#include <cstdio>
#include <numeric>

namespace reqforge::judge {
namespace {

std::vector<int> range(int from, int to) {
    std::vector<int> out(static_cast<std::size_t>(to - from + 1));
    std::iota(out.begin(), out.end(), from);
    return out;
}

void check_items(const std::vector<int>& items, const char* subscale) {
    if (items.empty()) throw ConfigError(std::string("CSUQ subscale ") + subscale + " maps no items");
    for (int i : items) {
        if (i < 1 || i > kCsuqItems) {
            throw ConfigError(std::string("CSUQ subscale ") + subscale + " references item " + std::to_string(i) +
                              ", outside 1..19");
        }
    }
}

std::vector<int> item_list(const nlohmann::json& j, const char* key) {
    if (!j[key].is_array()) throw ConfigError(std::string("CSUQ mapping field ") + key + " must be a list");
    std::vector<int> out;
    for (const auto& v : j[key]) {
        if (!v.is_number_integer()) throw ConfigError(std::string("CSUQ mapping field ") + key + " must hold integers");
        out.push_back(v.get<int>());
    }
    return out;
}

double mean(const CsuqResponse& r, const std::vector<int>& items, const std::set<int>& reversed) {
    double sum = 0;
    for (int i : items) {
        const int x = r.items[static_cast<std::size_t>(i - 1)];
        sum += reversed.count(i) ? reverse_item(x) : x;
    }
    return sum / static_cast<double>(items.size());
}

std::string number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    std::string s = buf;
    if (s.size() > 1 && s.back() == '0') s.pop_back();
    return s;
}

}  // namespace

CsuqResponse csuq_response_from_json(const nlohmann::json& j) {
    if (!j.is_array() || j.size() != kCsuqItems) throw std::invalid_argument("CSUQ response must be an array of 19 integers");
    CsuqResponse r;
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_number_integer()) throw std::invalid_argument("CSUQ item " + std::to_string(i + 1) + " is not an integer");
        const int x = j[i].get<int>();
        if (x < kCsuqMin || x > kCsuqMax) {
            throw std::invalid_argument("CSUQ item " + std::to_string(i + 1) + " is " + std::to_string(x) + ", outside 1..7");
        }
        r.items[i] = x;
    }
    return r;
}

CsuqMapping default_csuq_mapping() { return {{19}, range(1, 8), range(9, 13), range(14, 18), {4, 5}}; }

CsuqMapping csuq_mapping_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ConfigError("CSUQ mapping must be a JSON object");
    auto m = default_csuq_mapping();
    if (j.contains("overall")) m.overall = item_list(j, "overall");
    if (j.contains("usability")) m.usability = item_list(j, "usability");
    if (j.contains("information")) m.information = item_list(j, "information");
    if (j.contains("interface")) m.interface = item_list(j, "interface");
    if (j.contains("reversed")) {
        const auto items = item_list(j, "reversed");
        m.reversed = {items.begin(), items.end()};
    }
    return m;
}

CsuqScores score_csuq(const CsuqResponse& response, const CsuqMapping& mapping) {
    check_items(mapping.overall, "overall");
    check_items(mapping.usability, "usability");
    check_items(mapping.information, "information");
    check_items(mapping.interface, "interface");
    for (int i : mapping.reversed) {
        if (i < 1 || i > kCsuqItems) throw ConfigError("CSUQ reversed item " + std::to_string(i) + " is outside 1..19");
    }
    for (int x : response.items) {
        if (x < kCsuqMin || x > kCsuqMax) throw std::invalid_argument("CSUQ item value outside 1..7");
    }
    return {mean(response, mapping.overall, mapping.reversed), mean(response, mapping.usability, mapping.reversed),
            mean(response, mapping.information, mapping.reversed), mean(response, mapping.interface, mapping.reversed)};
}

std::string format_csuq(const CsuqScores& s) {
    return "overall " + number(s.overall) + " usability " + number(s.usability) + " information " +
           number(s.information_quality) + " interface " + number(s.interface_quality);
}

}  // namespace reqforge::judge
