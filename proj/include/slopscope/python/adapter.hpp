// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>

#include "slopscope/source/adapter.hpp"

namespace slopscope::python {

std::unique_ptr<source::GrammarAdapter> make_adapter();

}  // namespace slopscope::python
