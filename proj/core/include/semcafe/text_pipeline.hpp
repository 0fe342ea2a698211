#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace semcafe {

enum class Label { unreliable = 0, reliable = 1 };

std::string_view to_string(Label label);
std::optional<Label> label_from_string(std::string_view s);

// One article as ingested, before any cleaning.
struct RawDocument {
  std::string doc_id;
  std::string title;
  std::string body;  // plain text or HTML
  std::string published_date;
  std::string source_domain;
  std::string language;
  std::optional<Label> label;
  // Unknown JSON keys from the corpus line, kept verbatim (serialized object)
  // so write_corpus can round-trip them.
  std::string extra_json;
};

// An article after boilerplate stripping, cleaning, and tokenization.
struct CleanDocument {
  std::string doc_id;
  std::vector<std::string> title_tokens;
  std::vector<std::string> body_tokens;
  std::string normalized_text;
  std::string published_date;
  std::string source_domain;
  std::string language;
  std::optional<Label> label;
};

// Identity on plain text. On markup, keeps block-level segments whose
// link density (characters inside <a> / total characters) is at most
// `max_link_density` and whose text is at least `min_block_chars` long;
// script and style content is always dropped.
struct BoilerplateOptions {
  double max_link_density = 0.33;
  std::size_t min_block_chars = 25;
};

std::string strip_boilerplate(std::string_view html_or_text,
                              const BoilerplateOptions& opts = {});

// Removes URLs, replaces anything that is not an ASCII letter, digit, or
// whitespace with a space, lowercases, and collapses whitespace runs.
std::string clean_text(std::string_view text);

// Whitespace split of already-cleaned text. Never yields empty tokens.
std::vector<std::string> tokenize(std::string_view text);

CleanDocument preprocess(const RawDocument& doc,
                         const BoilerplateOptions& opts = {});

// JSON-Lines corpus, one object per line. Required keys: doc_id, title,
// body. Optional: published_date, source_domain, language, label.
std::vector<RawDocument> ingest_corpus(const std::filesystem::path& path);

std::string corpus_line_json(const RawDocument& doc);
void write_corpus(const std::filesystem::path& path,
                  std::span<const RawDocument> docs);

}  // namespace semcafe
