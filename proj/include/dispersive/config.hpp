#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace dispersive {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class KeyKind { integer, real, text, boolean, real_list };

struct KeyDescriptor {
  const char* section;
  const char* key;
  KeyKind kind;
  const char* default_value;
  const char* help;
};

// The full key table, in serialization order.
const std::vector<KeyDescriptor>& config_keys();

// Run configuration: every key from the table always has a value.  Values are
// stored as text and checked against their kind whenever they are set.
class RunConfig {
 public:
  RunConfig();

  static RunConfig parse(const std::string& text);
  static RunConfig load(const std::string& path);
  std::string serialize() const;
  std::uint64_t hash() const;

  // "section.key" addressing; unknown keys throw ConfigError naming the key.
  void set(const std::string& dotted, const std::string& value);
  // "section.key=value", as given to --set.
  void apply_override(const std::string& assignment);
  const std::string& raw(const std::string& dotted) const;

  long get_int(const std::string& dotted) const;
  double get_real(const std::string& dotted) const;
  const std::string& get_text(const std::string& dotted) const { return raw(dotted); }
  bool get_bool(const std::string& dotted) const;
  std::vector<double> get_real_list(const std::string& dotted) const;

  // Cross-key checks: grid shape, model ranges, data descriptor and time controls.
  void validate() const;

  bool operator==(const RunConfig& o) const { return values_ == o.values_; }

 private:
  std::map<std::string, std::string> values_;
};

std::string hex_hash(std::uint64_t h);

}  // namespace dispersive
