// SPDX-License-Identifier: Apache-2.0
#include "slopscope/source/adapter.hpp"

#include "slopscope/common/error.hpp"
#include "slopscope/python/adapter.hpp"

namespace slopscope::source {

AdapterRegistry AdapterRegistry::builtin() {
  AdapterRegistry registry;
  registry.add(python::make_adapter());
  return registry;
}

void AdapterRegistry::add(std::unique_ptr<GrammarAdapter> adapter) {
  if (by_language(adapter->language()) != nullptr) {
    throw UsageError("language '" + std::string(adapter->language()) + "' already has an adapter");
  }
  for (const std::string& ext : adapter->extensions()) {
    if (by_extension_.contains(ext)) throw UsageError("extension '" + ext + "' is claimed by two adapters");
  }
  for (const std::string& ext : adapter->extensions()) by_extension_.emplace(ext, adapter.get());
  adapters_.push_back(std::move(adapter));
}

const GrammarAdapter* AdapterRegistry::by_language(std::string_view language) const {
  for (const auto& a : adapters_) {
    if (a->language() == language) return a.get();
  }
  return nullptr;
}

const GrammarAdapter* AdapterRegistry::by_extension(std::string_view extension) const {
  auto it = by_extension_.find(extension);
  return it == by_extension_.end() ? nullptr : it->second;
}

std::vector<std::string> AdapterRegistry::languages() const {
  std::vector<std::string> out;
  for (const auto& a : adapters_) out.emplace_back(a->language());
  return out;
}

}  // namespace slopscope::source
