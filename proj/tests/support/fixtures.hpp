#pragma once

#include <unistd.h>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "semcafe/kb_store.hpp"
#include "semcafe/text_pipeline.hpp"

namespace semcafe::testing {

class TempDir {
 public:
  TempDir() {
    static std::atomic<unsigned> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("semcafe_test_" + std::to_string(::getpid()) + "_" +
             std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path file(const std::string& name) const {
    return path_ / name;
  }

 private:
  std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& path,
                       const std::vector<std::string>& lines) {
  std::ofstream out(path, std::ios::trunc);
  for (const std::string& line : lines) out << line << '\n';
}

// The five top-level categories every strict fixture uses.
inline std::vector<std::string> standard_roots() {
  return {"wordnet_person_100007846", "wordnet_organization_108008335",
          "wordnet_event_100029378", "wordnet_artifact_100021939",
          "wordnet_physical_entity_100001930"};
}

struct KbFixture {
  std::vector<std::string> surfaces;    // "surface\tdbpedia"
  std::vector<std::string> sameas;      // "dbpedia\tyago"
  std::vector<std::string> propcounts;  // "yago\tcount"
  std::vector<std::string> types;       // "yago\ttype"
  std::vector<std::string> subclass;    // "child\tparent"
  std::vector<std::string> roots = standard_roots();

  void write(const std::filesystem::path& dir) const {
    write_file(dir / "surfaces.tsv", surfaces);
    write_file(dir / "sameas.tsv", sameas);
    write_file(dir / "propcounts.tsv", propcounts);
    write_file(dir / "types.tsv", types);
    write_file(dir / "subclass.tsv", subclass);
    write_file(dir / "roots.tsv", roots);
  }
};

// surface "putin" -> dbpedia:Vladimir_Putin with three sameAs candidates;
// Vladimir_Putin holds the maximal property count.
inline KbFixture putin_fixture() {
  KbFixture kb;
  kb.surfaces = {"putin\tVladimir_Putin"};
  kb.sameas = {"Vladimir_Putin\tPutinland", "Vladimir_Putin\tVVP",
               "Vladimir_Putin\tVladimir_Putin"};
  kb.propcounts = {"Putinland\t3", "VVP\t5", "Vladimir_Putin\t412"};
  kb.types = {"Vladimir_Putin\twordnet_politician_110450303"};
  kb.subclass = {"wordnet_politician_110450303\twordnet_person_100007846"};
  return kb;
}

// Ukraine's type chain up to wordnet_physical_entity_100001930.
inline KbFixture ukraine_fixture() {
  KbFixture kb;
  kb.surfaces = {"ukraine\tUkraine"};
  kb.sameas = {"Ukraine\tUkraine"};
  kb.propcounts = {"Ukraine\t1000"};
  kb.types = {"Ukraine\twordnet_country_108544813"};
  kb.subclass = {
      "wordnet_country_108544813\twordnet_administrative_district_108491826",
      "wordnet_administrative_district_108491826\twordnet_district_108552138",
      "wordnet_district_108552138\twordnet_region_108630985",
      "wordnet_region_108630985\twordnet_object_100002684",
      "wordnet_object_100002684\twordnet_physical_entity_100001930"};
  return kb;
}

// The five entities of the worked example article, with their WordNet
// types chained to the top-level categories.
inline KbFixture table1_fixture() {
  KbFixture kb;
  kb.surfaces = {"NATO\tNATO",
                 "Russia\tRussia",
                 "RIA Novosti\tRIA_Novosti",
                 "ATACMS\tMGM-140_ATACMS",
                 "Anatoly Antonov\tAnatoly_Antonov",
                 "Antonov\tAnatoly_Antonov"};
  kb.sameas = {"NATO\tNATO", "Russia\tRussia", "RIA_Novosti\tRIA_Novosti",
               "MGM-140_ATACMS\tMGM-140_ATACMS",
               "Anatoly_Antonov\tAnatoly_Antonov"};
  kb.propcounts = {"NATO\t120", "Russia\t800", "RIA_Novosti\t45",
                   "MGM-140_ATACMS\t17", "Anatoly_Antonov\t9"};
  kb.types = {"NATO\twordnet_institution_108053576",
              "Russia\twordnet_war_100973077",
              "RIA_Novosti\twordnet_agency_108057206",
              "MGM-140_ATACMS\twordnet_missile_103773504",
              "Anatoly_Antonov\twordnet_ambassador_109787534"};
  kb.subclass = {
      "wordnet_missile_103773504\twordnet_weapon_104565375",
      "wordnet_weapon_104565375\twordnet_artifact_100021939",
      "wordnet_ambassador_109787534\twordnet_diplomat_110013927",
      "wordnet_diplomat_110013927\twordnet_person_100007846",
      "wordnet_war_100973077\twordnet_act_100030358",
      "wordnet_act_100030358\twordnet_event_100029378",
      "wordnet_agency_108057206\twordnet_institution_108053576",
      "wordnet_institution_108053576\twordnet_organization_108008335"};
  return kb;
}

inline RawDocument table1_article() {
  RawDocument doc;
  doc.doc_id = "edmo_659";
  doc.title =
      "The United States is pursuing a direct collision between NATO and "
      "Russia, Antonov said";
  doc.body =
      "Russian Ambassador to the United States Anatoly Antonov, in "
      "connection with the transfer of ATACMS operational-tactical missiles "
      "to Ukraine, said that the United States is pursuing a line towards a "
      "complete curtailment of bilateral relations and a direct clash "
      "between NATO and Russia. RIA Novosti reported.";
  doc.published_date = "2023-10-18";
  doc.source_domain = "ria.ru";
  doc.language = "ru";
  doc.label = Label::unreliable;
  return doc;
}

inline std::filesystem::path load_dir(const TempDir& tmp,
                                      const KbFixture& fixture) {
  fixture.write(tmp.path());
  return tmp.path();
}

}  // namespace semcafe::testing
