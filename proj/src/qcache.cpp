#include "congrua/qcache.hpp"

#include <cstdlib>
#include <fstream>

#include "json.hpp"

namespace congrua {

QExpansionCache::QExpansionCache(std::string path) : path_(std::move(path)) {
  if (path_.empty()) return;
  std::ifstream in(path_);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception&) {
      continue;  // a torn final line from an interrupted writer
    }
    std::vector<Integer> a{0};
    for (const auto& x : j.at("a_n")) a.push_back(x.is_string() ? Integer(x.get<std::string>()) : Integer(x.get<long>()));
    auto& slot = entries_[{j.at("level").get<long>(), j.at("weight").get<int>(), j.at("label").get<std::string>()}];
    if (a.size() > slot.size()) slot = std::move(a);
  }
}

std::optional<std::vector<Integer>> QExpansionCache::lookup(long level, int weight, const std::string& label,
                                                            std::size_t n) const {
  const auto it = entries_.find({level, weight, label});
  if (it == entries_.end() || it->second.size() <= n) return std::nullopt;
  return std::vector<Integer>(it->second.begin(), it->second.begin() + static_cast<long>(n) + 1);
}

void QExpansionCache::store(long level, int weight, const std::string& label, const std::vector<Integer>& a) {
  auto& slot = entries_[{level, weight, label}];
  if (a.size() <= slot.size()) return;
  slot = a;
  if (path_.empty()) return;
  nlohmann::json j;
  j["level"] = level;
  j["weight"] = weight;
  j["label"] = label;
  nlohmann::json list = nlohmann::json::array();
  for (std::size_t i = 1; i < a.size(); ++i) {
    if (a[i].fits_slong_p())
      list.push_back(a[i].get_si());
    else
      list.push_back(a[i].get_str());
  }
  j["a_n"] = std::move(list);
  std::ofstream out(path_, std::ios::app);
  out << j.dump() << '\n';
  if (!out) throw Error(ErrorKind::InvalidArgument, "cannot write cache " + path_);
}

namespace {

bool agrees(const std::vector<Integer>& a, const EigenformData& f) {
  for (const auto& [ell, v] : f.a)
    if (static_cast<std::size_t>(ell) < a.size() && a[static_cast<std::size_t>(ell)] != v) return false;
  return true;
}

}  // namespace

std::vector<Integer> QExpansionCache::load(long level, int weight, const EigenformData& f) const {
  const auto it = entries_.find({level, weight, f.label});
  if (it == entries_.end() || !agrees(it->second, f)) return {};
  return it->second;
}

std::vector<Integer> QExpansionCache::get(const ModularSymbolSpace& s, const EigenformData& f, std::size_t n) {
  if (auto a = lookup(s.level(), s.weight(), f.label, n); a && agrees(*a, f)) {
    ++hits_;
    return *a;
  }
  ++misses_;
  auto a = q_expansion(s, f, n);
  store(s.level(), s.weight(), f.label, a);
  return a;
}

std::string resolve_cache_path(const std::string& flag) {
  if (const char* env = std::getenv("CONGRUA_CACHE"); env && *env) return env;
  return flag;
}

}  // namespace congrua
