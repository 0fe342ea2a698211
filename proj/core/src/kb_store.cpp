#include "semcafe/kb_store.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <sstream>

#include "semcafe/errors.hpp"
#include "semcafe/text_pipeline.hpp"

namespace semcafe {
namespace {

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t pos = 0;
  while (true) {
    auto tab = line.find('\t', pos);
    if (tab == std::string::npos) {
      fields.push_back(line.substr(pos));
      break;
    }
    fields.push_back(line.substr(pos, tab - pos));
    pos = tab + 1;
  }
  return fields;
}

// Streams the records of one TSV file through `record`, skipping comments
// and blank lines. `record` gets (fields, line_number).
void for_each_record(
    const std::filesystem::path& file,
    const std::function<void(const std::vector<std::string>&, std::size_t)>&
        record) {
  std::ifstream in(file);
  if (!in) throw errors::missing_file(file.string());
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    record(split_tabs(line), line_number);
  }
}

void expect_columns(const std::vector<std::string>& fields, std::size_t n,
                    const std::filesystem::path& file, std::size_t line) {
  if (fields.size() != n)
    throw errors::malformed_line(
        file.filename().string(), line,
        "expected " + std::to_string(n) + " tab-separated fields, got " +
            std::to_string(fields.size()));
  for (const std::string& f : fields)
    if (f.empty())
      throw errors::malformed_line(file.filename().string(), line,
                                   "empty field");
}

EntityId parse_entity(Ns ns, const std::string& local,
                      const std::filesystem::path& file, std::size_t line) {
  if (!EntityId::valid_local_name(local))
    throw errors::malformed_line(file.filename().string(), line,
                                 "invalid entity name \"" + local + "\"");
  return EntityId{ns, local};
}

TypeId parse_type(const std::string& value, const std::filesystem::path& file,
                  std::size_t line) {
  auto type = TypeId::parse(value);
  if (!type)
    throw errors::malformed_line(
        file.filename().string(), line,
        "\"" + value + "\" is not a wordnet_<lemma>_<digits> type id");
  return *type;
}

// Iterative DFS over child->parent edges; reports the first cycle found as
// a "a > b > ... > a" path.
void check_acyclic(const std::map<TypeId, std::set<TypeId>>& subclass) {
  enum class Color { white, gray, black };
  std::map<TypeId, Color> color;
  for (const auto& [child, parents] : subclass) {
    (void)parents;
    color.emplace(child, Color::white);
  }

  std::vector<TypeId> path;
  std::function<void(const TypeId&)> visit = [&](const TypeId& node) {
    auto it = color.find(node);
    if (it == color.end()) return;  // leaf-only node, no outgoing edges
    if (it->second == Color::black) return;
    if (it->second == Color::gray) {
      std::ostringstream oss;
      auto start = std::find(path.begin(), path.end(), node);
      for (auto p = start; p != path.end(); ++p) oss << p->value << " > ";
      oss << node.value;
      throw errors::cycle_detected(oss.str());
    }
    it->second = Color::gray;
    path.push_back(node);
    for (const TypeId& parent : subclass.at(node)) visit(parent);
    path.pop_back();
    it->second = Color::black;
  };
  for (const auto& [child, parents] : subclass) {
    (void)parents;
    visit(child);
  }
}

}  // namespace

KnowledgeBase load_kb(const std::filesystem::path& directory,
                      Strictness strictness) {
  KnowledgeBase kb;

  const auto surfaces_file = directory / "surfaces.tsv";
  const auto sameas_file = directory / "sameas.tsv";
  const auto propcounts_file = directory / "propcounts.tsv";
  const auto types_file = directory / "types.tsv";
  const auto subclass_file = directory / "subclass.tsv";
  const auto roots_file = directory / "roots.tsv";
  for (const auto& f : {surfaces_file, sameas_file, propcounts_file,
                        types_file, subclass_file, roots_file}) {
    if (!std::filesystem::exists(f)) throw errors::missing_file(f.string());
  }

  for_each_record(surfaces_file, [&](const auto& fields, std::size_t line) {
    expect_columns(fields, 2, surfaces_file, line);
    EntityId target = parse_entity(Ns::dbpedia, fields[1], surfaces_file, line);
    std::string normalized = clean_text(fields[0]);
    if (normalized.empty()) {
      ++kb.load_stats.empty_surfaces_dropped;
      return;
    }
    kb.surface_forms[normalized].insert(std::move(target));
  });

  for_each_record(sameas_file, [&](const auto& fields, std::size_t line) {
    expect_columns(fields, 2, sameas_file, line);
    EntityId dbp = parse_entity(Ns::dbpedia, fields[0], sameas_file, line);
    EntityId yago = parse_entity(Ns::yago, fields[1], sameas_file, line);
    kb.same_as[dbp].insert(std::move(yago));
  });

  for_each_record(propcounts_file, [&](const auto& fields, std::size_t line) {
    expect_columns(fields, 2, propcounts_file, line);
    EntityId yago = parse_entity(Ns::yago, fields[0], propcounts_file, line);
    std::int64_t count = 0;
    try {
      std::size_t consumed = 0;
      count = std::stoll(fields[1], &consumed);
      if (consumed != fields[1].size()) throw std::invalid_argument("trail");
    } catch (const std::exception&) {
      throw errors::malformed_line(propcounts_file.filename().string(), line,
                                   "\"" + fields[1] + "\" is not an integer");
    }
    if (count < 0)
      throw errors::malformed_line(propcounts_file.filename().string(), line,
                                   "negative property count");
    kb.property_counts[yago] = count;
  });

  for_each_record(types_file, [&](const auto& fields, std::size_t line) {
    expect_columns(fields, 2, types_file, line);
    EntityId yago = parse_entity(Ns::yago, fields[0], types_file, line);
    kb.direct_types[yago].insert(parse_type(fields[1], types_file, line));
  });

  for_each_record(subclass_file, [&](const auto& fields, std::size_t line) {
    expect_columns(fields, 2, subclass_file, line);
    TypeId child = parse_type(fields[0], subclass_file, line);
    TypeId parent = parse_type(fields[1], subclass_file, line);
    kb.subclass[child].insert(std::move(parent));
  });

  for_each_record(roots_file, [&](const auto& fields, std::size_t line) {
    expect_columns(fields, 1, roots_file, line);
    kb.roots.insert(parse_type(fields[0], roots_file, line));
  });
  kb.load_stats.roots_found = kb.roots.size();

  check_acyclic(kb.subclass);

  if (strictness == Strictness::strict && kb.roots.size() != 5)
    throw errors::missing_roots(kb.roots.size());

  // Roots may not have parents.
  for (const TypeId& root : kb.roots) {
    auto it = kb.subclass.find(root);
    if (it == kb.subclass.end()) continue;
    if (strictness == Strictness::strict)
      throw errors::invalid_root(root.value, it->second.begin()->value);
    kb.load_stats.root_parent_edges_dropped += it->second.size();
    kb.subclass.erase(it);
  }

  // Every sameAs target needs a property count; lenient loads default to 0.
  for (const auto& [dbp, yagos] : kb.same_as) {
    (void)dbp;
    for (const EntityId& yago : yagos) {
      if (kb.property_counts.contains(yago)) continue;
      if (strictness == Strictness::strict)
        throw errors::dangling_reference(yago.render() +
                                         " has no property count");
      kb.property_counts.emplace(yago, 0);
      ++kb.load_stats.dangling_property_counts;
    }
  }

  return kb;
}

ValidationReport validate_kb(const KnowledgeBase& kb) {
  ValidationReport report;
  report.surface_form_count = kb.surface_forms.size();
  report.root_count = kb.roots.size();
  report.dangling_references = kb.load_stats.dangling_property_counts;

  std::set<EntityId> dbpedia_ids;
  for (const auto& [surface, ids] : kb.surface_forms) {
    (void)surface;
    dbpedia_ids.insert(ids.begin(), ids.end());
  }
  std::set<EntityId> yago_ids;
  for (const auto& [dbp, yagos] : kb.same_as) {
    dbpedia_ids.insert(dbp);
    yago_ids.insert(yagos.begin(), yagos.end());
  }
  for (const auto& [yago, count] : kb.property_counts) {
    (void)count;
    yago_ids.insert(yago);
  }
  for (const auto& [yago, types] : kb.direct_types) {
    (void)types;
    yago_ids.insert(yago);
  }
  report.dbpedia_entity_count = dbpedia_ids.size();
  report.yago_entity_count = yago_ids.size();

  std::set<TypeId> types;
  for (const auto& [yago, asserted] : kb.direct_types) {
    (void)yago;
    types.insert(asserted.begin(), asserted.end());
  }
  for (const auto& [child, parents] : kb.subclass) {
    types.insert(child);
    types.insert(parents.begin(), parents.end());
    report.subclass_edge_count += parents.size();
  }
  types.insert(kb.roots.begin(), kb.roots.end());
  report.type_count = types.size();

  // A type is reachable if some root can be reached by walking parent edges.
  std::map<TypeId, bool> reaches_root;
  std::function<bool(const TypeId&)> reaches = [&](const TypeId& t) -> bool {
    if (kb.roots.contains(t)) return true;
    auto memo = reaches_root.find(t);
    if (memo != reaches_root.end()) return memo->second;
    reaches_root[t] = false;  // acyclic, so a placeholder never resolves wrong
    bool ok = false;
    auto it = kb.subclass.find(t);
    if (it != kb.subclass.end())
      for (const TypeId& parent : it->second) ok = ok || reaches(parent);
    reaches_root[t] = ok;
    return ok;
  };
  for (const TypeId& t : types)
    if (!reaches(t)) report.unreachable_types.push_back(t);

  return report;
}

const std::set<EntityId>& surface_lookup(const KnowledgeBase& kb,
                                         std::string_view form) {
  static const std::set<EntityId> empty;
  auto it = kb.surface_forms.find(form);
  return it == kb.surface_forms.end() ? empty : it->second;
}

}  // namespace semcafe
