#include "semcafe/fingerprint.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include <nlohmann/json.hpp>

#include "semcafe/errors.hpp"

namespace semcafe {

TypeVocabulary TypeVocabulary::build(std::span<const TypeDag> dags) {
  std::set<TypeId> all;
  for (const TypeDag& dag : dags) all.insert(dag.nodes.begin(), dag.nodes.end());
  return from_types(std::vector<TypeId>(all.begin(), all.end()));
}

TypeVocabulary TypeVocabulary::from_types(std::vector<TypeId> types) {
  std::sort(types.begin(), types.end());
  types.erase(std::unique(types.begin(), types.end()), types.end());
  TypeVocabulary vocab;
  vocab.types_ = std::move(types);
  for (std::uint32_t i = 0; i < vocab.types_.size(); ++i)
    vocab.index_.emplace(vocab.types_[i], i);
  return vocab;
}

std::optional<std::uint32_t> TypeVocabulary::index_of(
    const TypeId& type) const {
  auto it = index_.find(type);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::string TypeVocabulary::to_text() const {
  std::string out;
  for (const TypeId& type : types_) {
    out += type.value;
    out += '\n';
  }
  return out;
}

void TypeVocabulary::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::trunc);
  if (!out)
    throw Error("MissingFile", ErrorCategory::io_parse,
                "cannot open " + path.string() + " for writing");
  out << to_text();
}

TypeVocabulary TypeVocabulary::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw errors::missing_file(path.string());
  std::vector<TypeId> types;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto type = TypeId::parse(line);
    if (!type)
      throw errors::malformed_line(path.filename().string(), line_number,
                                   "invalid type id \"" + line + "\"");
    types.push_back(std::move(*type));
  }
  // Positions are line indices; an unsorted file would silently renumber.
  if (!std::is_sorted(types.begin(), types.end()))
    throw errors::malformed_line(path.filename().string(), line_number,
                                 "vocabulary is not sorted");
  return from_types(std::move(types));
}

std::string_view to_string(FingerprintMode mode) {
  return mode == FingerprintMode::unique_entity ? "unique_entity"
                                                : "mention_weighted";
}

std::optional<FingerprintMode> fingerprint_mode_from_string(
    std::string_view s) {
  if (s == "unique_entity") return FingerprintMode::unique_entity;
  if (s == "mention_weighted") return FingerprintMode::mention_weighted;
  return std::nullopt;
}

Fingerprint fingerprint_document(const std::string& doc_id,
                                 std::span<const EntityTypes> entities,
                                 const TypeVocabulary& vocab,
                                 FingerprintMode mode,
                                 std::size_t* dropped_types) {
  Fingerprint fp;
  fp.doc_id = doc_id;
  fp.dimension = vocab.size();
  for (const EntityTypes& et : entities) {
    TypeIndicator indicator = type_vector(et.dag, vocab);
    if (dropped_types) *dropped_types += indicator.dropped;
    std::uint64_t weight = mode == FingerprintMode::mention_weighted
                               ? et.entity.mention_count
                               : 1;
    if (weight == 0) continue;
    for (std::uint32_t pos : indicator.positions) fp.counts[pos] += weight;
  }
  return fp;
}

std::vector<EntityTypes> link_and_close(
    const KnowledgeBase& kb, const Matcher& matcher, const CleanDocument& doc,
    std::unordered_map<std::string, TypeDag>* closure_memo) {
  std::vector<EntityTypes> out;
  for (LinkedEntity& entity : link_document(kb, matcher, doc)) {
    TypeDag dag;
    if (entity.yago_id) {
      if (closure_memo) {
        auto [it, inserted] = closure_memo->try_emplace(entity.yago_id->local);
        if (inserted) it->second = closure(kb, *entity.yago_id);
        dag = it->second;
      } else {
        dag = closure(kb, *entity.yago_id);
      }
    }
    out.push_back(EntityTypes{std::move(entity), std::move(dag)});
  }
  return out;
}

std::vector<Fingerprint> fingerprint_corpus(
    std::span<const CleanDocument> docs, const KnowledgeBase& kb,
    const Matcher& matcher, const TypeVocabulary& vocab, FingerprintMode mode,
    std::size_t* dropped_types) {
  std::vector<Fingerprint> fingerprints;
  fingerprints.reserve(docs.size());
  std::unordered_map<std::string, TypeDag> memo;
  for (const CleanDocument& doc : docs) {
    std::vector<EntityTypes> entities = link_and_close(kb, matcher, doc, &memo);
    fingerprints.push_back(
        fingerprint_document(doc.doc_id, entities, vocab, mode, dropped_types));
  }
  return fingerprints;
}

std::string fingerprint_line_json(const Fingerprint& fp) {
  nlohmann::json counts = nlohmann::json::object();
  for (const auto& [pos, count] : fp.counts)
    counts[std::to_string(pos)] = count;
  nlohmann::json obj;
  obj["doc_id"] = fp.doc_id;
  obj["dim"] = fp.dimension;
  obj["counts"] = std::move(counts);
  return obj.dump();
}

void write_fingerprints(const std::filesystem::path& path,
                        std::span<const Fingerprint> fingerprints) {
  std::ofstream out(path, std::ios::trunc);
  if (!out)
    throw Error("MissingFile", ErrorCategory::io_parse,
                "cannot open " + path.string() + " for writing");
  for (const Fingerprint& fp : fingerprints)
    out << fingerprint_line_json(fp) << '\n';
}

std::vector<Fingerprint> read_fingerprints(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw errors::missing_file(path.string());
  std::vector<Fingerprint> fingerprints;
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
    Fingerprint fp;
    try {
      fp.doc_id = obj.at("doc_id").get<std::string>();
      fp.dimension = obj.at("dim").get<std::uint64_t>();
      for (const auto& [key, value] : obj.at("counts").items()) {
        std::uint32_t pos = static_cast<std::uint32_t>(std::stoul(key));
        std::uint64_t count = value.get<std::uint64_t>();
        if (pos >= fp.dimension)
          throw errors::malformed_json(
              line_number, "position " + key + " outside dimension " +
                               std::to_string(fp.dimension));
        if (count == 0) continue;  // zeros are never stored
        fp.counts[pos] = count;
      }
    } catch (const nlohmann::json::exception& e) {
      throw errors::malformed_json(line_number, e.what());
    } catch (const std::logic_error& e) {
      throw errors::malformed_json(line_number, e.what());
    }
    fingerprints.push_back(std::move(fp));
  }
  return fingerprints;
}

}  // namespace semcafe
