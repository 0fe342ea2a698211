#include "semcafe/ids.hpp"

#include <cctype>

namespace semcafe {

std::string_view to_string(Ns ns) {
  return ns == Ns::dbpedia ? "dbpedia" : "yago";
}

EntityId EntityId::dbpedia(std::string local_name) {
  return EntityId{Ns::dbpedia, std::move(local_name)};
}

EntityId EntityId::yago(std::string local_name) {
  return EntityId{Ns::yago, std::move(local_name)};
}

bool EntityId::valid_local_name(std::string_view name) {
  if (name.empty()) return false;
  for (unsigned char c : name) {
    if (std::isspace(c)) return false;
  }
  return true;
}

std::optional<EntityId> EntityId::parse(std::string_view rendered) {
  auto colon = rendered.find(':');
  if (colon == std::string_view::npos) return std::nullopt;
  std::string_view ns = rendered.substr(0, colon);
  std::string_view local = rendered.substr(colon + 1);
  if (!valid_local_name(local)) return std::nullopt;
  if (ns == "dbpedia") return EntityId::dbpedia(std::string(local));
  if (ns == "yago") return EntityId::yago(std::string(local));
  return std::nullopt;
}

std::string EntityId::render() const {
  std::string out(to_string(ns));
  out += ':';
  out += local;
  return out;
}

bool TypeId::valid(std::string_view v) {
  constexpr std::string_view prefix = "wordnet_";
  if (v.size() <= prefix.size() || v.substr(0, prefix.size()) != prefix)
    return false;
  auto last_underscore = v.rfind('_');
  // rfind cannot miss: the prefix itself ends in '_'. The lemma between
  // prefix and the digits segment must be non-empty.
  if (last_underscore <= prefix.size()) return false;
  std::string_view digits = v.substr(last_underscore + 1);
  if (digits.empty()) return false;
  for (unsigned char c : digits) {
    if (!std::isdigit(c)) return false;
  }
  return true;
}

std::optional<TypeId> TypeId::parse(std::string_view v) {
  if (!valid(v)) return std::nullopt;
  return TypeId{std::string(v)};
}

}  // namespace semcafe
