#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "reqforge/judge/doc_score.hpp"

namespace reqforge::judge {

struct BatchRow {
    std::string file;      // name inside the corpus directory
    std::string scenario;  // file name up to the first '.'
    std::optional<DocScore> score;
    std::string error;     // set when score is empty
};

struct BatchReport {
    DocKind kind = DocKind::PRD;
    std::vector<BatchRow> rows;
};

/// Scores every regular file of `dir` in lexicographic name order. A file that cannot be
/// read or scored becomes an errored row and the batch continues. Gateway errors other
/// than a failed reply also mark the row.
BatchReport batch_score(const std::filesystem::path& dir, DocKind kind, llm::Gateway& gateway);

/// Header "scenario,criterion_1,criterion_2,criterion_3"; errored rows carry ERROR cells.
std::string report_to_csv(const BatchReport& report);

/// Rows plus, per scenario with several versions, the aggregated score.
nlohmann::json report_to_json(const BatchReport& report);

}  // namespace reqforge::judge
