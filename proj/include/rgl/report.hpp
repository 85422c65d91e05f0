#pragma once

// Report emission: JSON documents tagged with schema "rgl/1" and CSV tables
// with 17 significant digits, written atomically.

#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "rgl/errors.hpp"

namespace rgl {

inline constexpr const char* kSchemaVersion = "rgl/1";

class IoError : public Error {
 public:
  using Error::Error;
};

using TableCell = std::variant<double, long long, std::string>;

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<TableCell>> rows;
};

/// "%.17g"; nan and inf spelled out.
std::string format_number(double x);

std::string to_csv(const Table& table);

/// {"schema": "rgl/1", "command": ..., "generated_at": ..., "result": body}
nlohmann::json report_document(const std::string& command, nlohmann::json body);

/// The document without its timestamp, for byte-level comparisons.
nlohmann::json strip_timestamp(nlohmann::json doc);

/// Writes through a temporary file in the same directory and renames it into
/// place; the temporary is removed if anything fails. Throws IoError.
void write_atomic(const std::string& path, const std::string& content);

/// Throws IoError unless a file can be created next to `path`.
void check_writable(const std::string& path);

}  // namespace rgl
