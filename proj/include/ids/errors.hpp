#pragma once

#include <stdexcept>
#include <string>

namespace ids {

// A required upstream artifact is absent or unreadable (CLI exit status 2).
struct MissingArtifactError : std::runtime_error {
    std::string path;
    explicit MissingArtifactError(std::string p)
        : std::runtime_error("missing artifact: " + p), path(std::move(p)) {}
};

// Configuration is invalid (CLI exit status 3).
struct ConfigError : std::runtime_error {
    std::string key;
    ConfigError(std::string k, const std::string& msg)
        : std::runtime_error("config key '" + k + "': " + msg), key(std::move(k)) {}
};

// Artifact exists but its version line does not match the loader.
struct ArtifactVersionError : std::runtime_error {
    std::string path;
    ArtifactVersionError(std::string p, const std::string& msg)
        : std::runtime_error("artifact " + p + ": " + msg), path(std::move(p)) {}
};

}  // namespace ids
