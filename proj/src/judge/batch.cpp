#include "reqforge/judge/batch.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

namespace reqforge::judge {
namespace fs = std::filesystem;
namespace {

std::optional<std::string> read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) return std::nullopt;
    return ss.str();
}

std::string csv_cell(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

}  // namespace

BatchReport batch_score(const fs::path& dir, DocKind kind, llm::Gateway& gateway) {
    std::vector<std::string> names;
    for (const auto& entry : fs::directory_iterator(dir)) {
        std::error_code ec;
        if (entry.is_directory(ec)) continue;
        names.push_back(entry.path().filename().string());
    }
    std::sort(names.begin(), names.end());

    BatchReport report{kind, {}};
    for (const auto& name : names) {
        BatchRow row;
        row.file = name;
        row.scenario = name.substr(0, name.find('.'));
        const auto doc = read_file(dir / name);
        if (!doc) {
            row.error = "unreadable file";
        } else {
            try {
                row.score = score_document(*doc, kind, gateway);
            } catch (const std::exception& e) {
                row.error = e.what();
            }
        }
        report.rows.push_back(std::move(row));
    }
    return report;
}

std::string report_to_csv(const BatchReport& report) {
    std::string out = "scenario,criterion_1,criterion_2,criterion_3\n";
    for (const auto& row : report.rows) {
        out += csv_cell(row.scenario);
        for (std::size_t i = 0; i < 3; ++i) out += "," + (row.score ? std::to_string(row.score->scores[i]) : "ERROR");
        out += "\n";
    }
    return out;
}

nlohmann::json report_to_json(const BatchReport& report) {
    nlohmann::json criteria = nlohmann::json::array();
    for (auto n : criteria_for(report.kind)) criteria.push_back(n);
    nlohmann::json rows = nlohmann::json::array();
    std::map<std::string, std::vector<DocScore>> by_scenario;
    for (const auto& row : report.rows) {
        nlohmann::json r = {{"file", row.file}, {"scenario", row.scenario}};
        if (row.score) {
            r["scores"] = row.score->scores;
            r["justifications"] = row.score->justification;
            by_scenario[row.scenario].push_back(*row.score);
        } else {
            r["error"] = row.error;
        }
        rows.push_back(std::move(r));
    }
    nlohmann::json aggregates = nlohmann::json::array();
    for (const auto& [scenario, scores] : by_scenario) {
        const auto best = aggregate_versions(scores);
        aggregates.push_back({{"scenario", scenario}, {"versions", scores.size()}, {"scores", best.scores}});
    }
    return {{"kind", to_string(report.kind)}, {"criteria", criteria}, {"rows", rows}, {"aggregates", aggregates}};
}

}  // namespace reqforge::judge
