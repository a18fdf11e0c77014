#ifndef ACLAB_CONFIG_HPP
#define ACLAB_CONFIG_HPP

#include <map>
#include <string>
#include <vector>

namespace aclab {

inline const char* kVersion = "0.1.0";

/// Plain-text key=value configuration with optional [section] headers;
/// sectioned keys are addressed as "section.key". '#' starts a comment.
class Config {
  public:
    Config() = default;
    static Config from_file(const std::string& path);
    static Config from_string(const std::string& text);

    bool has(const std::string& key) const { return kv_.count(key) > 0; }
    std::string get(const std::string& key, const std::string& def) const;
    double get_real(const std::string& key, double def) const;
    long long get_int(const std::string& key, long long def) const;
    std::vector<double> get_list(const std::string& key,
                                 const std::vector<double>& def) const;
    void set(const std::string& key, const std::string& value) { kv_[key] = value; }

    const std::map<std::string, std::string>& items() const { return kv_; }

  private:
    std::map<std::string, std::string> kv_;
};

} // namespace aclab

#endif
