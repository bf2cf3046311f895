#pragma once

#include <string>
#include <string_view>

namespace sentsim {

enum class PromptKind { kMaskFill, kParaphrase, kScore };

struct PromptTemplate {
  PromptKind kind;
  std::string_view text;  // with named slots like <sentence1>
};

// The three task-description templates, also bundled verbatim under
// assets/prompts/. Rendering is plain slot substitution; the surrounding
// quotes are part of the template.
namespace prompts {

inline constexpr std::string_view kMaskFill =
    "Replace all <mask> tokens in '<masked-sentence>' to make a new sentence. "
    "The new sentence is:";

inline constexpr std::string_view kParaphrase =
    "Write two sentences that mean the same thing. Sentence 1: '<sentence1>' "
    "Sentence 2:";

inline constexpr std::string_view kScore =
    "The similarity score for two sentences is in the range from 0.0 to 1.0, "
    "0.0 means completely different and 1.0 means almost the same. Now given "
    "two sentences '<sentence1>' and '<sentence2>', please give a similarity "
    "score for these two sentences: The similarity score for these two "
    "sentences is";

}  // namespace prompts

const PromptTemplate& prompt_template(PromptKind kind);

// Replaces every occurrence of `slot` in `tmpl` with `value`.
std::string fill_slot(std::string_view tmpl, std::string_view slot,
                      std::string_view value);

}  // namespace sentsim
