#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace stylo {

enum class ErrorKind {
  invalid_config,
  io,
  ineligible_document,
  insufficient_corpus,
  empty_corpus,
  empty_document,
  malformed_record,
  duplicate_id,
  missing_embedding,
  non_finite,
  zero_vector,
  missing_label_class,
  version_mismatch,
  corrupt_store,
  empty_input,
  empty_class,
  length_mismatch,
  empty_sequence,
  positive_logprob,
  unsupported_log_base,
  empty_group,
  insufficient_paragraphs,
  too_short_for_completion,
  missing_offline_record,
  endpoint_failure,
};

std::string_view to_string(ErrorKind kind);

// Process exit code for a failure of this kind: 2 config, 3 data, 4 endpoint.
int exit_code(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace stylo
