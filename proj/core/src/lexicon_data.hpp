#pragma once

namespace mwpx::data {

extern const char* const kBundledLexicon;
extern const char* const kBundledNames;

}  // namespace mwpx::data
