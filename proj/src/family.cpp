#include "polyxform/family.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace polyxform {

std::vector<std::vector<MultiIndex>> IndexFamily::layers() const {
  std::vector<std::vector<MultiIndex>> out(static_cast<std::size_t>(nprime));
  for (const auto& [alpha, j] : pairs) out.at(static_cast<std::size_t>(j - 1)).push_back(alpha);
  for (auto& layer : out) std::sort(layer.begin(), layer.end(), DictLess{});
  return out;
}

void IndexFamily::validate() const {
  if (n < 1 || nprime < 1 || d < 0) throw std::invalid_argument("family: need n,nprime >= 1, d >= 0");
  if (pairs.empty()) throw std::invalid_argument("family: no pairs");
  std::set<std::pair<MultiIndex, int>> seen;
  for (const auto& p : pairs) {
    const auto& [alpha, j] = p;
    if (static_cast<int>(alpha.size()) != n)
      throw std::invalid_argument("family: multiindex length != n");
    for (int v : alpha)
      if (v < 0) throw std::invalid_argument("family: negative exponent");
    if (degree(alpha) > d) throw std::invalid_argument("family: |alpha| exceeds d");
    if (j < 1 || j > nprime) throw std::invalid_argument("family: layer index out of range");
    if (!seen.insert(p).second) throw std::invalid_argument("family: duplicate (alpha, j) pair");
  }
}

std::string IndexFamily::to_json() const {
  nlohmann::ordered_json j;
  j["n"] = n;
  j["nprime"] = nprime;
  j["d"] = d;
  auto arr = nlohmann::ordered_json::array();
  for (const auto& [alpha, layer] : pairs) arr.push_back({alpha, layer});
  j["pairs"] = std::move(arr);
  return j.dump();
}

IndexFamily IndexFamily::from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  IndexFamily fam;
  fam.n = j.at("n").get<int>();
  fam.nprime = j.at("nprime").get<int>();
  fam.d = j.at("d").get<int>();
  for (const auto& entry : j.at("pairs")) {
    if (!entry.is_array() || entry.size() != 2)
      throw std::invalid_argument("family json: each pair must be [alpha, j]");
    fam.pairs.emplace_back(entry.at(0).get<MultiIndex>(), entry.at(1).get<int>());
  }
  fam.validate();
  return fam;
}

IndexFamily full_family(int n, int nprime, int d) {
  IndexFamily fam;
  fam.n = n;
  fam.nprime = nprime;
  fam.d = d;
  for (int j = 1; j <= nprime; ++j)
    for (const auto& alpha : enumerate_multiindices(n, d)) fam.pairs.emplace_back(alpha, j);
  fam.validate();
  return fam;
}

}  // namespace polyxform
