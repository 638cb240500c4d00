#pragma once

#include <initializer_list>
#include <string>
#include <utility>

#include "strongcore/market.hpp"

namespace fixtures {

std::string path(const std::string& name);
std::string read(const std::string& name);
strongcore::Instance load(const std::string& name);

using NamedArc = std::pair<const char*, const char*>;

strongcore::ArcSet arcs(const strongcore::HousingMarket& market, std::initializer_list<NamedArc> list);
strongcore::Allocation allocation(const strongcore::HousingMarket& market,
                                  std::initializer_list<NamedArc> list);
strongcore::Agent agent(const strongcore::HousingMarket& market, const char* name);

}  // namespace fixtures
