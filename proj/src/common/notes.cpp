#include "reqforge/common/notes.hpp"

namespace reqforge {

std::string append_notes(std::string user_text, const GenerationNotes& notes) {
    if (!notes.reviewer_feedback.empty()) {
        user_text += "\n\nReviewer feedback on earlier versions of this stage (address every point):";
        for (std::size_t i = 0; i < notes.reviewer_feedback.size(); ++i) {
            user_text += "\n" + std::to_string(i + 1) + ". " + notes.reviewer_feedback[i];
        }
    }
    if (notes.retry_note) {
        user_text += "\n\nYour previous reply was rejected: " + *notes.retry_note +
                     "\nReply again and follow the required format exactly.";
    }
    return user_text;
}

}  // namespace reqforge
