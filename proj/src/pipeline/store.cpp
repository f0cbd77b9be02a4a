#include "reqforge/pipeline/store.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "reqforge/pipeline/serialize.hpp"

namespace reqforge::pipeline {
namespace fs = std::filesystem;
namespace {

void write_atomic(const fs::path& path, const std::string& content) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out << content;
        out.flush();
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
    }
    fs::rename(tmp, path);
}

std::string read_text(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CorruptSession(path, "file is missing or unreadable");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

nlohmann::json read_json(const fs::path& path) {
    const auto text = read_text(path);
    auto j = nlohmann::json::parse(text, nullptr, /*allow_exceptions=*/false);
    if (j.is_discarded()) throw CorruptSession(path, "not valid JSON");
    return j;
}

}  // namespace

bool valid_session_id(std::string_view id) {
    if (id.empty() || id.size() > 128 || id == "." || id == "..") return false;
    for (char c : id) {
        const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '-' ||
                        c == '_' || c == '.';
        if (!ok) return false;
    }
    return true;
}

SessionStore::SessionStore(fs::path root) : root_(std::move(root)) { fs::create_directories(root_); }

std::string SessionStore::artifact_file_name(std::size_t index, const StageArtifact& artifact) {
    char prefix[16];
    std::snprintf(prefix, sizeof prefix, "%02zu", index + 1);
    return std::string(prefix) + "-" + std::string(to_string(artifact.stage)) + "-" + std::to_string(artifact.attempt) +
           ".json";
}

void SessionStore::save(const PipelineSession& session) const {
    if (!valid_session_id(session.id)) throw std::invalid_argument("invalid session id \"" + session.id + "\"");
    const auto dir = session_dir(session.id);
    fs::create_directories(dir / "artifacts");

    auto manifest = session_to_json(session);
    auto& history = manifest["history"];
    for (std::size_t i = 0; i < session.history.size(); ++i) {
        const auto& artifact = session.history[i].artifact;
        const auto name = artifact_file_name(i, artifact);
        const auto path = dir / "artifacts" / name;
        const auto body = artifact_to_json(artifact).dump(2) + "\n";
        // Artifacts never change once written; skip the rewrite when the bytes already match.
        std::error_code ec;
        if (!fs::exists(path, ec) || read_text(path) != body) write_atomic(path, body);
        auto& entry = history[i];
        entry.erase("artifact");
        entry["artifact_file"] = "artifacts/" + name;
        entry["stage"] = to_string(artifact.stage);
        entry["attempt"] = artifact.attempt;
    }
    if (session.final_prompt) write_atomic(dir / "final_prompt.txt", *session.final_prompt);
    write_atomic(dir / "manifest.json", manifest.dump(2) + "\n");
}

PipelineSession SessionStore::load(const std::string& id) const {
    if (!valid_session_id(id)) throw SessionNotFound(id);
    const auto dir = session_dir(id);
    const auto manifest_path = dir / "manifest.json";
    std::error_code ec;
    if (!fs::is_regular_file(manifest_path, ec)) throw SessionNotFound(id);

    auto manifest = read_json(manifest_path);
    if (!manifest.is_object() || !manifest.contains("history") || !manifest["history"].is_array()) {
        throw CorruptSession(manifest_path, "manifest has no history list");
    }
    for (auto& entry : manifest["history"]) {
        if (!entry.is_object() || !entry.contains("artifact_file") || !entry["artifact_file"].is_string()) {
            throw CorruptSession(manifest_path, "history entry without artifact_file");
        }
        const auto rel = entry["artifact_file"].get<std::string>();
        if (rel.find("..") != std::string::npos) throw CorruptSession(manifest_path, "artifact path escapes the session");
        const auto path = dir / rel;
        auto artifact = read_json(path);
        try {
            (void)artifact_from_json(artifact);
        } catch (const std::exception& e) {
            throw CorruptSession(path, e.what());
        }
        entry["artifact"] = std::move(artifact);
    }
    try {
        auto session = session_from_json(manifest);
        if (session.id != id) throw std::invalid_argument("manifest belongs to session " + session.id);
        return session;
    } catch (const CorruptSession&) {
        throw;
    } catch (const std::exception& e) {
        throw CorruptSession(manifest_path, e.what());
    }
}

bool SessionStore::exists(const std::string& id) const {
    std::error_code ec;
    return valid_session_id(id) && fs::is_regular_file(session_dir(id) / "manifest.json", ec);
}

std::vector<std::string> SessionStore::list_ids() const {
    std::vector<std::string> ids;
    std::error_code ec;
    for (const auto& entry : fs::directory_iterator(root_, ec)) {
        const auto name = entry.path().filename().string();
        if (entry.is_directory() && exists(name)) ids.push_back(name);
    }
    std::sort(ids.begin(), ids.end());
    return ids;
}

}  // namespace reqforge::pipeline
