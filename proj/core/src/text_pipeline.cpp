#include "semcafe/text_pipeline.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "semcafe/errors.hpp"

namespace semcafe {

std::string_view to_string(Label label) {
  return label == Label::reliable ? "reliable" : "unreliable";
}

std::optional<Label> label_from_string(std::string_view s) {
  if (s == "reliable") return Label::reliable;
  if (s == "unreliable") return Label::unreliable;
  return std::nullopt;
}

namespace {

bool ascii_ieq(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(a[i])) !=
        std::tolower(static_cast<unsigned char>(b[i])))
      return false;
  }
  return true;
}

bool looks_like_markup(std::string_view s) {
  for (std::size_t i = 0; i + 1 < s.size(); ++i) {
    if (s[i] == '<') {
      char c = s[i + 1];
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '/' || c == '!')
        return true;
    }
  }
  return false;
}

const std::set<std::string, std::less<>> kBlockTags = {
    "address",  "article", "aside",  "blockquote", "body",   "div",
    "dl",       "dd",      "dt",     "fieldset",   "figure", "footer",
    "form",     "h1",      "h2",     "h3",         "h4",     "h5",
    "h6",       "header",  "hr",     "html",       "li",     "main",
    "nav",      "ol",      "p",      "pre",        "section", "table",
    "tbody",    "td",      "tfoot",  "th",         "thead",  "tr",
    "ul"};

std::string collapse_ws(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  bool pending_space = false;
  for (unsigned char c : s) {
    if (std::isspace(c)) {
      pending_space = !out.empty();
    } else {
      if (pending_space) out += ' ';
      pending_space = false;
      out += static_cast<char>(c);
    }
  }
  return out;
}

// Decodes the handful of entities that matter for word content; anything
// unrecognized is passed through.
void append_entity(std::string_view name, std::string& out) {
  if (name == "amp") out += '&';
  else if (name == "lt") out += '<';
  else if (name == "gt") out += '>';
  else if (name == "quot") out += '"';
  else if (name == "apos") out += '\'';
  else if (name == "nbsp") out += ' ';
  else if (!name.empty() && name[0] == '#') {
    int code = 0;
    for (std::size_t i = 1; i < name.size(); ++i) {
      unsigned char c = name[i];
      if (!std::isdigit(c)) { code = -1; break; }
      code = code * 10 + (c - '0');
    }
    if (code >= 32 && code < 127) out += static_cast<char>(code);
    else out += ' ';
  } else {
    out += '&';
    out += name;
    out += ';';
  }
}

struct Block {
  std::string text;
  std::size_t total_chars = 0;   // non-whitespace characters
  std::size_t linked_chars = 0;  // non-whitespace characters inside <a>
};

}  // namespace

std::string strip_boilerplate(std::string_view html_or_text,
                              const BoilerplateOptions& opts) {
  if (!looks_like_markup(html_or_text)) return std::string(html_or_text);

  std::vector<Block> blocks;
  Block current;
  int link_depth = 0;

  auto flush = [&] {
    if (current.total_chars > 0) blocks.push_back(std::move(current));
    current = Block{};
  };

  auto append_text = [&](std::string_view text) {
    std::size_t i = 0;
    while (i < text.size()) {
      char c = text[i];
      if (c == '&') {
        auto semi = text.find(';', i + 1);
        if (semi != std::string_view::npos && semi - i <= 10) {
          std::string decoded;
          append_entity(text.substr(i + 1, semi - i - 1), decoded);
          for (unsigned char d : decoded) {
            current.text += static_cast<char>(d);
            if (!std::isspace(d)) {
              ++current.total_chars;
              if (link_depth > 0) ++current.linked_chars;
            }
          }
          i = semi + 1;
          continue;
        }
      }
      current.text += c;
      if (!std::isspace(static_cast<unsigned char>(c))) {
        ++current.total_chars;
        if (link_depth > 0) ++current.linked_chars;
      }
      ++i;
    }
  };

  const std::string_view s = html_or_text;
  std::size_t pos = 0;
  while (pos < s.size()) {
    if (s[pos] != '<') {
      auto next = s.find('<', pos);
      if (next == std::string_view::npos) next = s.size();
      append_text(s.substr(pos, next - pos));
      pos = next;
      continue;
    }
    // Comments and doctype-ish declarations.
    if (s.compare(pos, 4, "<!--") == 0) {
      auto close = s.find("-->", pos + 4);
      pos = close == std::string_view::npos ? s.size() : close + 3;
      continue;
    }
    if (pos + 1 < s.size() && s[pos + 1] == '!') {
      auto close = s.find('>', pos);
      pos = close == std::string_view::npos ? s.size() : close + 1;
      continue;
    }
    // Parse a tag: name, then skip attributes respecting quotes.
    std::size_t i = pos + 1;
    bool closing = i < s.size() && s[i] == '/';
    if (closing) ++i;
    std::size_t name_begin = i;
    while (i < s.size() &&
           (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '-'))
      ++i;
    std::string tag(s.substr(name_begin, i - name_begin));
    std::transform(tag.begin(), tag.end(), tag.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    if (tag.empty()) {  // stray '<', treat as text
      append_text(s.substr(pos, 1));
      ++pos;
      continue;
    }
    char quote = 0;
    while (i < s.size()) {
      char c = s[i];
      if (quote) {
        if (c == quote) quote = 0;
      } else if (c == '"' || c == '\'') {
        quote = c;
      } else if (c == '>') {
        break;
      }
      ++i;
    }
    pos = i < s.size() ? i + 1 : s.size();

    if (!closing && (tag == "script" || tag == "style")) {
      // Drop raw content up to the matching end tag.
      std::string end_tag = "</" + tag;
      std::size_t scan = pos;
      while (scan < s.size()) {
        auto candidate = s.find('<', scan);
        if (candidate == std::string_view::npos) { scan = s.size(); break; }
        if (candidate + end_tag.size() <= s.size() &&
            ascii_ieq(s.substr(candidate, end_tag.size()), end_tag)) {
          auto close = s.find('>', candidate);
          scan = close == std::string_view::npos ? s.size() : close + 1;
          break;
        }
        scan = candidate + 1;
      }
      pos = scan;
      continue;
    }
    if (tag == "a") {
      if (closing) {
        if (link_depth > 0) --link_depth;
      } else {
        ++link_depth;
      }
      continue;
    }
    if (tag == "br") {
      current.text += ' ';
      continue;
    }
    if (kBlockTags.contains(tag)) {
      flush();
      link_depth = 0;
    }
  }
  flush();

  std::string out;
  for (const Block& block : blocks) {
    double density = block.total_chars == 0
                         ? 0.0
                         : static_cast<double>(block.linked_chars) /
                               static_cast<double>(block.total_chars);
    std::string text = collapse_ws(block.text);
    if (density <= opts.max_link_density &&
        text.size() >= opts.min_block_chars) {
      if (!out.empty()) out += '\n';
      out += text;
    }
  }
  return out;
}

std::string clean_text(std::string_view text) {
  // Pass 1: drop URL runs (maximal non-whitespace runs that contain "://"
  // or start with "www.", case-insensitively).
  std::string no_urls;
  no_urls.reserve(text.size());
  std::size_t pos = 0;
  while (pos < text.size()) {
    if (std::isspace(static_cast<unsigned char>(text[pos]))) {
      no_urls += text[pos];
      ++pos;
      continue;
    }
    std::size_t end = pos;
    while (end < text.size() &&
           !std::isspace(static_cast<unsigned char>(text[end])))
      ++end;
    std::string_view run = text.substr(pos, end - pos);
    bool is_url = run.find("://") != std::string_view::npos ||
                  (run.size() >= 4 && ascii_ieq(run.substr(0, 4), "www."));
    if (!is_url) no_urls += run;
    pos = end;
  }

  // Pass 2: anything but ASCII letters, digits, whitespace becomes a space;
  // letters lowercased; whitespace runs collapsed; ends trimmed.
  std::string out;
  out.reserve(no_urls.size());
  bool pending_space = false;
  for (unsigned char c : no_urls) {
    if (std::isalnum(c)) {
      if (pending_space && !out.empty()) out += ' ';
      pending_space = false;
      out += static_cast<char>(std::tolower(c));
    } else {
      pending_space = true;  // whitespace and specials both separate
    }
  }
  return out;
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::size_t pos = 0;
  while (pos < text.size()) {
    while (pos < text.size() &&
           std::isspace(static_cast<unsigned char>(text[pos])))
      ++pos;
    std::size_t end = pos;
    while (end < text.size() &&
           !std::isspace(static_cast<unsigned char>(text[end])))
      ++end;
    if (end > pos) tokens.emplace_back(text.substr(pos, end - pos));
    pos = end;
  }
  return tokens;
}

CleanDocument preprocess(const RawDocument& doc,
                         const BoilerplateOptions& opts) {
  CleanDocument out;
  out.doc_id = doc.doc_id;
  std::string clean_title = clean_text(doc.title);
  std::string clean_body = clean_text(strip_boilerplate(doc.body, opts));
  out.title_tokens = tokenize(clean_title);
  out.body_tokens = tokenize(clean_body);
  out.normalized_text = clean_title;
  if (!clean_title.empty() && !clean_body.empty()) out.normalized_text += ' ';
  out.normalized_text += clean_body;
  out.published_date = doc.published_date;
  out.source_domain = doc.source_domain;
  out.language = doc.language;
  out.label = doc.label;
  return out;
}

namespace {

const char* kRequiredFields[] = {"doc_id", "title", "body"};
const char* kKnownFields[] = {"doc_id",        "title",    "body",
                              "published_date", "source_domain",
                              "language",       "label"};

}  // namespace

std::vector<RawDocument> ingest_corpus(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw errors::missing_file(path.string());

  std::vector<RawDocument> docs;
  std::set<std::string> seen_ids;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;

    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw errors::malformed_json(line_number, e.what());
    }
    if (!obj.is_object())
      throw errors::malformed_json(line_number, "record is not a JSON object");

    for (const char* field : kRequiredFields) {
      if (!obj.contains(field))
        throw errors::missing_required_field(field, line_number);
      if (!obj[field].is_string())
        throw errors::malformed_json(
            line_number, std::string("\"") + field + "\" must be a string");
    }

    RawDocument doc;
    doc.doc_id = obj["doc_id"].get<std::string>();
    doc.title = obj["title"].get<std::string>();
    doc.body = obj["body"].get<std::string>();
    auto opt_string = [&](const char* key) -> std::string {
      if (!obj.contains(key)) return {};
      if (!obj[key].is_string())
        throw errors::malformed_json(
            line_number, std::string("\"") + key + "\" must be a string");
      return obj[key].get<std::string>();
    };
    doc.published_date = opt_string("published_date");
    doc.source_domain = opt_string("source_domain");
    doc.language = opt_string("language");
    if (obj.contains("label")) {
      doc.label = label_from_string(opt_string("label"));
      if (!doc.label)
        throw errors::malformed_json(
            line_number, "label must be \"reliable\" or \"unreliable\"");
    }

    nlohmann::json extras = nlohmann::json::object();
    for (auto it = obj.begin(); it != obj.end(); ++it) {
      bool known = false;
      for (const char* key : kKnownFields) known = known || it.key() == key;
      if (!known) extras[it.key()] = it.value();
    }
    if (!extras.empty()) doc.extra_json = extras.dump();

    if (!seen_ids.insert(doc.doc_id).second)
      throw errors::duplicate_doc_id(doc.doc_id);
    docs.push_back(std::move(doc));
  }
  return docs;
}

std::string corpus_line_json(const RawDocument& doc) {
  nlohmann::json obj;
  obj["doc_id"] = doc.doc_id;
  obj["title"] = doc.title;
  obj["body"] = doc.body;
  if (!doc.published_date.empty()) obj["published_date"] = doc.published_date;
  if (!doc.source_domain.empty()) obj["source_domain"] = doc.source_domain;
  if (!doc.language.empty()) obj["language"] = doc.language;
  if (doc.label) obj["label"] = std::string(to_string(*doc.label));
  if (!doc.extra_json.empty()) {
    nlohmann::json extras = nlohmann::json::parse(doc.extra_json);
    for (auto it = extras.begin(); it != extras.end(); ++it)
      obj[it.key()] = it.value();
  }
  return obj.dump();
}

void write_corpus(const std::filesystem::path& path,
                  std::span<const RawDocument> docs) {
  std::ofstream out(path, std::ios::trunc);
  if (!out)
    throw Error("MissingFile", ErrorCategory::io_parse,
                "cannot open " + path.string() + " for writing");
  for (const RawDocument& doc : docs) out << corpus_line_json(doc) << '\n';
}

}  // namespace semcafe
