#pragma once

#include <filesystem>
#include <fstream>
#include <functional>
#include <string>

#include <json.hpp>

namespace stylo::jsonl {

using json = nlohmann::json;

// Calls fn(record, line_number) for each non-blank line. Parse failures throw
// Error{malformed_record} naming the file and line.
void for_each(const std::filesystem::path& path,
              const std::function<void(const json&, std::size_t)>& fn);

class Writer {
 public:
  explicit Writer(const std::filesystem::path& path);
  void write(const json& record);

 private:
  std::filesystem::path path_;
  std::ofstream out_;
};

// Typed field access that reports malformed-record with context.
const json& field(const json& record, const char* name, std::size_t line);
std::string string_field(const json& record, const char* name, std::size_t line);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& contents);

}  // namespace stylo::jsonl
