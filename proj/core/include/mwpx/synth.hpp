#pragma once

#include <cstdint>

#include "mwpx/corpus.hpp"

namespace mwpx {

/// Templated single-operation word problems with balanced ADD/SUB/MUL/DIV
/// categories. Deterministic for a fixed (count, seed).
Dataset make_synthetic_corpus(std::size_t count = 500, std::uint64_t seed = 42);

}  // namespace mwpx
