#pragma once

// Append-only JSON-lines store of q-expansions:
//   {"level": N, "weight": k, "label": "...", "a_n": [a_1, a_2, ...]}
// Coefficients that do not fit in 64 bits are written as decimal strings.

#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "congrua/modsym.hpp"

namespace congrua {

class QExpansionCache {
 public:
  // An empty path keeps everything in memory.
  explicit QExpansionCache(std::string path = {});

  const std::string& path() const { return path_; }
  // a[0..n] with a[0] = 0, from the store when it holds at least n terms that
  // agree with the eigenvalues in f, otherwise computed and appended.
  std::vector<Integer> get(const ModularSymbolSpace& s, const EigenformData& f, std::size_t n);
  // The longest stored expansion of f that agrees with its eigenvalues, or
  // an empty vector.
  std::vector<Integer> load(long level, int weight, const EigenformData& f) const;
  std::optional<std::vector<Integer>> lookup(long level, int weight, const std::string& label, std::size_t n) const;
  void store(long level, int weight, const std::string& label, const std::vector<Integer>& a);
  std::size_t hits() const { return hits_; }
  std::size_t misses() const { return misses_; }

 private:
  using Key = std::tuple<long, int, std::string>;
  std::string path_;
  std::map<Key, std::vector<Integer>> entries_;
  std::size_t hits_ = 0, misses_ = 0;
};

// CONGRUA_CACHE if set, else the given path.
std::string resolve_cache_path(const std::string& flag);

}  // namespace congrua
