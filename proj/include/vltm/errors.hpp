#pragma once

#include <stdexcept>
#include <string>

namespace vltm {

/// Raised when a serialized artifact (impulse response, matrix, mask, config)
/// fails structural validation. `kind()` tells the caller which check failed
/// without parsing the message.
class format_error : public std::runtime_error {
 public:
  enum class kind {
    bad_magic,    // unrecognized leading magic bytes
    bad_version,  // recognized container, unsupported version
    bad_size,     // payload length disagrees with header dimensions
    bad_value,    // field fails a range or finiteness check
  };

  format_error(kind k, const std::string& what) : std::runtime_error(what), kind_(k) {}

  kind which() const { return kind_; }

 private:
  kind kind_;
};

/// Raised for invalid run configuration, scene files, or command-line
/// arguments; the message names the offending key or flag. Maps to CLI
/// exit code 2 (format_error maps to 3).
class config_error : public std::runtime_error {
 public:
  explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace vltm
