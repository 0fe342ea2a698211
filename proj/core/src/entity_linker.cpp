#include "semcafe/entity_linker.hpp"

#include <algorithm>

namespace semcafe {

Matcher Matcher::build(const KnowledgeBase& kb) {
  Matcher m;
  m.nodes_.emplace_back();  // root

  for (const auto& [surface, candidates] : kb.surface_forms) {
    std::vector<std::string> tokens = tokenize(surface);
    if (tokens.empty()) continue;

    std::uint32_t node = 0;
    for (const std::string& token : tokens) {
      auto [it, inserted] = m.token_ids_.emplace(
          token, static_cast<std::uint32_t>(m.token_ids_.size()));
      std::uint32_t token_id = it->second;
      (void)inserted;
      auto next = m.nodes_[node].next.find(token_id);
      if (next == m.nodes_[node].next.end()) {
        std::uint32_t fresh = static_cast<std::uint32_t>(m.nodes_.size());
        m.nodes_[node].next.emplace(token_id, fresh);
        m.nodes_.emplace_back();
        node = fresh;
      } else {
        node = next->second;
      }
    }
    m.nodes_[node].surface = static_cast<std::int32_t>(m.surfaces_.size());
    m.surfaces_.push_back(Surface{surface, candidates});
  }
  return m;
}

std::vector<Mention> Matcher::spot(std::span<const std::string> tokens) const {
  std::vector<Mention> mentions;
  std::size_t pos = 0;
  while (pos < tokens.size()) {
    std::uint32_t node = 0;
    std::int32_t best_surface = -1;
    std::size_t best_end = pos;

    for (std::size_t i = pos; i < tokens.size(); ++i) {
      auto token = token_ids_.find(tokens[i]);
      if (token == token_ids_.end()) break;
      auto next = nodes_[node].next.find(token->second);
      if (next == nodes_[node].next.end()) break;
      node = next->second;
      if (nodes_[node].surface >= 0) {
        best_surface = nodes_[node].surface;
        best_end = i + 1;
      }
    }

    if (best_surface >= 0) {
      const Surface& surface = surfaces_[static_cast<std::size_t>(best_surface)];
      Mention mention;
      mention.begin = pos;
      mention.end = best_end;
      mention.surface = surface.text;
      mention.candidates = surface.candidates;
      mentions.push_back(std::move(mention));
      pos = best_end;
    } else {
      ++pos;
    }
  }
  return mentions;
}

std::optional<EntityId> disambiguate(const KnowledgeBase& kb,
                                     const EntityId& dbpedia_id) {
  auto it = kb.same_as.find(dbpedia_id);
  if (it == kb.same_as.end() || it->second.empty()) return std::nullopt;

  const EntityId* best = nullptr;
  std::int64_t best_count = -1;
  for (const EntityId& candidate : it->second) {
    auto count_it = kb.property_counts.find(candidate);
    std::int64_t count = count_it == kb.property_counts.end()
                             ? 0
                             : count_it->second;
    // Candidates iterate in ascending local-name order, so strict '>' keeps
    // the lexicographically smallest on ties.
    if (count > best_count) {
      best_count = count;
      best = &candidate;
    }
  }
  return *best;
}

std::vector<LinkedEntity> link_document(const KnowledgeBase& kb,
                                        const Matcher& matcher,
                                        const CleanDocument& doc) {
  std::vector<std::string> stream;
  stream.reserve(doc.title_tokens.size() + doc.body_tokens.size());
  stream.insert(stream.end(), doc.title_tokens.begin(),
                doc.title_tokens.end());
  stream.insert(stream.end(), doc.body_tokens.begin(), doc.body_tokens.end());

  std::vector<LinkedEntity> linked;
  std::map<std::pair<EntityId, std::optional<EntityId>>, std::size_t> index;

  for (Mention& mention : matcher.spot(stream)) {
    mention.doc_id = doc.doc_id;
    for (const EntityId& dbp : mention.candidates) {
      std::optional<EntityId> yago = disambiguate(kb, dbp);
      auto key = std::make_pair(dbp, yago);
      auto it = index.find(key);
      if (it == index.end()) {
        index.emplace(std::move(key), linked.size());
        linked.push_back(LinkedEntity{dbp, std::move(yago), 1});
      } else {
        ++linked[it->second].mention_count;
      }
    }
  }
  return linked;
}

}  // namespace semcafe
