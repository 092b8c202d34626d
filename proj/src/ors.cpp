#include "internames/ors.hpp"
#include "internames/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>

namespace internames {

using nlohmann::json;

void
Ors::register_entity(const NamedEntity& e)
{
  auto key = e.name.to_uri();
  if (m_entities.count(key))
    throw Error(Errc::DuplicateName, key + " is already registered");
  for (const auto& kw : e.keywords())
    m_keyword_index[kw].insert(key);
  m_entities.emplace(key, e);
}

OrsResult
Ors::search(const OrsQuery& q) const
{
  OrsResult result;
  std::vector<std::string> keywords;
  for (const auto& kw : q.keywords) {
    auto toks = split_keywords(kw);
    keywords.insert(keywords.end(), toks.begin(), toks.end());
  }
  if (keywords.empty())
    return result;

  // intersect starting from the rarest keyword
  std::vector<const std::set<std::string>*> postings;
  for (const auto& kw : keywords) {
    auto it = m_keyword_index.find(kw);
    if (it == m_keyword_index.end())
      return result;
    postings.push_back(&it->second);
  }
  std::sort(postings.begin(), postings.end(),
            [] (auto* a, auto* b) { return a->size() < b->size(); });

  for (const auto& uri : *postings.front()) {
    bool ok = std::all_of(postings.begin() + 1, postings.end(),
                          [&] (auto* p) { return p->count(uri) > 0; });
    if (!ok)
      continue;
    const auto& e = m_entities.at(uri);
    ok = std::all_of(q.metadata_filters.begin(), q.metadata_filters.end(), [&] (const auto& f) {
      auto it = e.metadata.find(f.first);
      return it != e.metadata.end() && it->second == f.second;
    });
    if (ok)
      result.entries.push_back({e.name, e.metadata});
  }
  // set<string> iteration is already canonical-URI ascending
  return result;
}

const NamedEntity*
Ors::find(const Name& n) const
{
  auto it = m_entities.find(n.to_uri());
  return it == m_entities.end() ? nullptr : &it->second;
}

void
ors_register(Ors& ors, const NamedEntity& e)
{
  ors.register_entity(e);
}

OrsResult
ors_search(const Ors& ors, const OrsQuery& q)
{
  return ors.search(q);
}

std::string
serialize(const OrsQuery& q)
{
  json j;
  j["keywords"] = q.keywords;
  j["filters"] = q.metadata_filters;
  return j.dump();
}

OrsQuery
parse_ors_query(std::string_view body)
{
  try {
    auto j = json::parse(body);
    OrsQuery q;
    q.keywords = j.at("keywords").get<std::vector<std::string>>();
    q.metadata_filters = j.at("filters").get<std::map<std::string, std::string>>();
    return q;
  }
  catch (const json::exception& e) {
    throw Error(Errc::MalformedMessage, std::string("ORS query: ") + e.what());
  }
}

std::string
serialize(const OrsResult& r)
{
  json arr = json::array();
  for (const auto& e : r.entries)
    arr.push_back({{"name", e.name.to_uri()}, {"metadata", e.metadata}});
  return arr.dump();
}

OrsResult
parse_ors_result(std::string_view body)
{
  try {
    OrsResult r;
    for (const auto& item : json::parse(body)) {
      r.entries.push_back({Name::parse(item.at("name").get<std::string>()),
                           item.at("metadata").get<std::map<std::string, std::string>>()});
    }
    return r;
  }
  catch (const json::exception& e) {
    throw Error(Errc::MalformedMessage, std::string("ORS result: ") + e.what());
  }
}

} // namespace internames
