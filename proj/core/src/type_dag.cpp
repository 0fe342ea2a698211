#include "semcafe/type_dag.hpp"

#include <algorithm>
#include <deque>

#include "semcafe/fingerprint.hpp"

namespace semcafe {

TypeDag closure(const KnowledgeBase& kb, const EntityId& yago_id) {
  TypeDag dag;
  dag.entity = yago_id;

  auto direct = kb.direct_types.find(yago_id);
  if (direct == kb.direct_types.end()) return dag;

  std::deque<TypeId> frontier(direct->second.begin(), direct->second.end());
  for (const TypeId& t : direct->second) dag.nodes.insert(t);

  while (!frontier.empty()) {
    TypeId node = std::move(frontier.front());
    frontier.pop_front();

    if (kb.roots.contains(node)) {
      dag.reached_roots.insert(node);
      continue;  // never expand past a top-level category
    }
    auto parents = kb.subclass.find(node);
    if (parents == kb.subclass.end()) {
      dag.dead_ends.push_back(node);
      continue;
    }
    for (const TypeId& parent : parents->second) {
      dag.edges.emplace(node, parent);
      if (dag.nodes.insert(parent).second) frontier.push_back(parent);
    }
  }
  std::sort(dag.dead_ends.begin(), dag.dead_ends.end());
  return dag;
}

TypeIndicator type_vector(const TypeDag& dag, const TypeVocabulary& vocab) {
  TypeIndicator indicator;
  indicator.positions.reserve(dag.nodes.size());
  for (const TypeId& node : dag.nodes) {
    if (auto pos = vocab.index_of(node))
      indicator.positions.push_back(*pos);
    else
      ++indicator.dropped;
  }
  std::sort(indicator.positions.begin(), indicator.positions.end());
  return indicator;
}

void write_dag(std::ostream& out, const TypeDag& dag) {
  out << "entity\t" << dag.entity.render() << '\n';
  for (const auto& [child, parent] : dag.edges)
    out << child.value << '\t' << parent.value << '\n';
}

}  // namespace semcafe
