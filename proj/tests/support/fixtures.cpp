#include "fixtures.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fixtures {

using namespace strongcore;

std::string path(const std::string& name) { return std::string(STRONGCORE_FIXTURES) + "/" + name; }

std::string read(const std::string& name) {
  std::ifstream in(path(name));
  if (!in) throw std::runtime_error("missing fixture " + name);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

Instance load(const std::string& name) { return parse_instance(read(name)); }

Agent agent(const HousingMarket& market, const char* name) {
  const auto found = market.find(name);
  if (!found) throw std::runtime_error(std::string("no agent ") + name);
  return *found;
}

ArcSet arcs(const HousingMarket& market, std::initializer_list<NamedArc> list) {
  ArcSet out;
  for (const auto& [tail, head] : list) out.push_back({agent(market, tail), agent(market, head)});
  normalize(out);
  return out;
}

Allocation allocation(const HousingMarket& market, std::initializer_list<NamedArc> list) {
  const ArcSet set = arcs(market, list);
  return Allocation::from_arcs(market.size(), set);
}

}  // namespace fixtures
