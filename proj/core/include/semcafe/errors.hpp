#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace semcafe {

// Error taxonomy drives the CLI exit codes: io_parse -> 2, domain -> 1.
enum class ErrorCategory { io_parse, domain };

class Error : public std::runtime_error {
 public:
  Error(std::string code, ErrorCategory category, std::string detail)
      : std::runtime_error(code + ": " + detail),
        code_(std::move(code)),
        category_(category),
        detail_(std::move(detail)) {}

  const std::string& code() const noexcept { return code_; }
  ErrorCategory category() const noexcept { return category_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  std::string code_;
  ErrorCategory category_;
  std::string detail_;
};

namespace errors {

inline Error missing_file(std::string_view path) {
  return Error("MissingFile", ErrorCategory::io_parse,
               std::string(path) + " does not exist");
}

inline Error malformed_line(std::string_view file, std::size_t line_number,
                            std::string_view why) {
  return Error("MalformedLine", ErrorCategory::io_parse,
               std::string(file) + ":" + std::to_string(line_number) + ": " +
                   std::string(why));
}

inline Error cycle_detected(std::string_view type_path) {
  return Error("CycleDetected", ErrorCategory::domain,
               "subclass cycle: " + std::string(type_path));
}

inline Error dangling_reference(std::string_view what) {
  return Error("DanglingReference", ErrorCategory::domain, std::string(what));
}

inline Error missing_roots(std::size_t found) {
  return Error("MissingRoots", ErrorCategory::domain,
               "expected exactly 5 root types, found " + std::to_string(found));
}

inline Error invalid_root(std::string_view type, std::string_view parent) {
  return Error("InvalidRoot", ErrorCategory::domain,
               std::string(type) + " is declared a root but has parent " +
                   std::string(parent));
}

inline Error malformed_json(std::size_t line_number, std::string_view why) {
  return Error("MalformedJson", ErrorCategory::io_parse,
               "line " + std::to_string(line_number) + ": " + std::string(why));
}

inline Error duplicate_doc_id(std::string_view id) {
  return Error("DuplicateDocId", ErrorCategory::io_parse,
               "doc_id \"" + std::string(id) + "\" appears more than once");
}

inline Error missing_required_field(std::string_view field,
                                    std::size_t line_number) {
  return Error("MissingRequiredField", ErrorCategory::io_parse,
               "line " + std::to_string(line_number) + ": missing \"" +
                   std::string(field) + "\"");
}

inline Error dimension_mismatch(std::string_view detail) {
  return Error("DimensionMismatch", ErrorCategory::domain, std::string(detail));
}

inline Error single_class_corpus(std::string_view label) {
  return Error("SingleClassCorpus", ErrorCategory::domain,
               "every example is labeled \"" + std::string(label) + "\"");
}

inline Error empty_corpus() {
  return Error("EmptyCorpus", ErrorCategory::domain, "no training examples");
}

inline Error malformed_model_file(std::string_view why) {
  return Error("MalformedModelFile", ErrorCategory::io_parse, std::string(why));
}

inline Error layout_mismatch(std::string_view detail) {
  return Error("LayoutMismatch", ErrorCategory::domain, std::string(detail));
}

inline Error unlabeled_document(std::string_view doc_id) {
  return Error("UnlabeledDocument", ErrorCategory::domain,
               "document \"" + std::string(doc_id) + "\" carries no label");
}

inline Error degenerate_class(std::string_view label, std::size_t count) {
  return Error("DegenerateClass", ErrorCategory::domain,
               "label \"" + std::string(label) + "\" has " +
                   std::to_string(count) + " document(s), need at least 2");
}

inline Error length_mismatch(std::size_t gold, std::size_t pred) {
  return Error("LengthMismatch", ErrorCategory::domain,
               "gold has " + std::to_string(gold) + " labels, predictions " +
                   std::to_string(pred));
}

inline Error empty_input(std::string_view what) {
  return Error("EmptyInput", ErrorCategory::domain, std::string(what));
}

}  // namespace errors
}  // namespace semcafe
