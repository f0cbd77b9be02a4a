#pragma once

#include <optional>
#include <string>
#include <vector>

namespace reqforge {

/// Extra context appended to every generation request of a stage run.
struct GenerationNotes {
    std::vector<std::string> reviewer_feedback;  // human gate rejections of this stage, oldest first
    std::optional<std::string> retry_note;       // why the previous attempt's reply was rejected

    bool operator==(const GenerationNotes&) const = default;
};

/// `user_text` followed by the reviewer feedback block and the retry note, when present.
std::string append_notes(std::string user_text, const GenerationNotes& notes);

}  // namespace reqforge
