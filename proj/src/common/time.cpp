#include "reqforge/common/time.hpp"

#include <cstdio>
#include <ctime>
#include <stdexcept>

namespace reqforge {

Timestamp now_ms() {
    return std::chrono::time_point_cast<std::chrono::milliseconds>(std::chrono::system_clock::now());
}

std::string format_timestamp(Timestamp t) {
    using namespace std::chrono;
    const auto secs = floor<seconds>(t);
    const auto ms = (t - secs).count();
    const std::time_t tt = system_clock::to_time_t(secs);
    std::tm tm{};
    gmtime_r(&tt, &tm);
    char buf[96];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02d.%03dZ", tm.tm_year + 1900,
                  tm.tm_mon + 1, tm.tm_mday, tm.tm_hour, tm.tm_min, tm.tm_sec, static_cast<int>(ms));
    return buf;
}

Timestamp parse_timestamp(std::string_view text) {
    std::tm tm{};
    int ms = 0;
    int consumed = 0;
    const std::string s(text);
    if (std::sscanf(s.c_str(), "%4d-%2d-%2dT%2d:%2d:%2d.%3dZ%n", &tm.tm_year, &tm.tm_mon, &tm.tm_mday,
                    &tm.tm_hour, &tm.tm_min, &tm.tm_sec, &ms, &consumed) != 7 ||
        consumed != static_cast<int>(s.size())) {
        throw std::invalid_argument("malformed timestamp: " + s);
    }
    tm.tm_year -= 1900;
    tm.tm_mon -= 1;
    const std::time_t tt = timegm(&tm);
    return std::chrono::time_point_cast<std::chrono::milliseconds>(std::chrono::system_clock::from_time_t(tt)) +
           std::chrono::milliseconds(ms);
}

}  // namespace reqforge
