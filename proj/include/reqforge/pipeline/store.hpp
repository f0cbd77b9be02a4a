#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "reqforge/pipeline/types.hpp"

namespace reqforge::pipeline {

class SessionNotFound : public std::runtime_error {
public:
    explicit SessionNotFound(const std::string& id) : std::runtime_error("no session " + id), id_(id) {}
    const std::string& id() const noexcept { return id_; }

private:
    std::string id_;
};

class CorruptSession : public std::runtime_error {
public:
    CorruptSession(std::filesystem::path file, const std::string& why)
        : std::runtime_error(file.string() + ": " + why), file_(std::move(file)) {}
    const std::filesystem::path& file() const noexcept { return file_; }

private:
    std::filesystem::path file_;
};

/// One directory per session:
///   <root>/<id>/manifest.json
///   <root>/<id>/artifacts/NN-<stage>-<attempt>.json   (NN is the 1-based history position)
///   <root>/<id>/final_prompt.txt                       (completed sessions only)
/// Every file is replaced atomically, artifacts before the manifest that references them.
class SessionStore {
public:
    explicit SessionStore(std::filesystem::path root);

    void save(const PipelineSession& session) const;
    PipelineSession load(const std::string& id) const;
    bool exists(const std::string& id) const;
    /// Sorted ids of every directory holding a manifest.
    std::vector<std::string> list_ids() const;

    const std::filesystem::path& root() const noexcept { return root_; }
    std::filesystem::path session_dir(const std::string& id) const { return root_ / id; }
    /// `index` is the 0-based history position; the file name carries it 1-based.
    static std::string artifact_file_name(std::size_t index, const StageArtifact& artifact);

private:
    std::filesystem::path root_;
};

/// Rejects ids that are empty or could escape the store root.
bool valid_session_id(std::string_view id);

}  // namespace reqforge::pipeline
