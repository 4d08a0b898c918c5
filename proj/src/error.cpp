#include "stylo/error.hpp"

namespace stylo {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_config: return "invalid-config";
    case ErrorKind::io: return "io";
    case ErrorKind::ineligible_document: return "ineligible-document";
    case ErrorKind::insufficient_corpus: return "insufficient-corpus";
    case ErrorKind::empty_corpus: return "empty-corpus";
    case ErrorKind::empty_document: return "empty-document";
    case ErrorKind::malformed_record: return "malformed-record";
    case ErrorKind::duplicate_id: return "duplicate-id";
    case ErrorKind::missing_embedding: return "missing-embedding";
    case ErrorKind::non_finite: return "non-finite";
    case ErrorKind::zero_vector: return "zero-vector";
    case ErrorKind::missing_label_class: return "missing-label-class";
    case ErrorKind::version_mismatch: return "version-mismatch";
    case ErrorKind::corrupt_store: return "corrupt-store";
    case ErrorKind::empty_input: return "empty-input";
    case ErrorKind::empty_class: return "empty-class";
    case ErrorKind::length_mismatch: return "length-mismatch";
    case ErrorKind::empty_sequence: return "empty-sequence";
    case ErrorKind::positive_logprob: return "positive-logprob";
    case ErrorKind::unsupported_log_base: return "unsupported-log-base";
    case ErrorKind::empty_group: return "empty-group";
    case ErrorKind::insufficient_paragraphs: return "insufficient-paragraphs";
    case ErrorKind::too_short_for_completion: return "too-short-for-completion";
    case ErrorKind::missing_offline_record: return "missing-offline-record";
    case ErrorKind::endpoint_failure: return "endpoint-failure";
  }
  return "unknown";
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_config:
      return 2;
    case ErrorKind::endpoint_failure:
      return 4;
    default:
      return 3;
  }
}

}  // namespace stylo
