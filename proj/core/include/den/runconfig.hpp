#pragma once

#include <map>
#include <string>
#include <vector>

#include "den/den_model.hpp"
#include "den/random_field.hpp"
#include "den/trainer.hpp"

namespace den {

/// Line-based key=value run configuration ('#' starts a comment). Keys
/// outside the known schema are rejected; every output header echoes the
/// full configuration for provenance.
class RunConfig {
public:
    static RunConfig from_file(const std::string& path);
    static RunConfig from_string(const std::string& text);

    bool has(const std::string& key) const { return values_.count(key) != 0; }
    void set(const std::string& key, const std::string& value);

    std::string get_string(const std::string& key, const std::string& fallback) const;
    std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
    double get_double(const std::string& key, double fallback) const;

    /// Sorted "key=value" lines (the provenance echo).
    std::vector<std::string> echo() const;

    FieldSpec field_spec() const;
    DenConfig den_config() const;
    TrainConfig train_config() const;

private:
    static void validate_key(const std::string& key);
    std::map<std::string, std::string> values_;
};

}  // namespace den
