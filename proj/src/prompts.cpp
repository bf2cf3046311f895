#include "sentsim/prompts.hpp"

#include "sentsim/error.hpp"

namespace sentsim {

const PromptTemplate& prompt_template(PromptKind kind) {
  static const PromptTemplate mask_fill{PromptKind::kMaskFill,
                                        prompts::kMaskFill};
  static const PromptTemplate paraphrase{PromptKind::kParaphrase,
                                         prompts::kParaphrase};
  static const PromptTemplate score{PromptKind::kScore, prompts::kScore};
  switch (kind) {
    case PromptKind::kMaskFill: return mask_fill;
    case PromptKind::kParaphrase: return paraphrase;
    case PromptKind::kScore: return score;
  }
  throw Error("unknown prompt kind");
}

std::string fill_slot(std::string_view tmpl, std::string_view slot,
                      std::string_view value) {
  std::string out;
  out.reserve(tmpl.size() + value.size());
  std::size_t pos = 0;
  while (pos < tmpl.size()) {
    const auto hit = tmpl.find(slot, pos);
    if (hit == std::string_view::npos) {
      out.append(tmpl.substr(pos));
      break;
    }
    out.append(tmpl.substr(pos, hit - pos));
    out.append(value);
    pos = hit + slot.size();
  }
  return out;
}

}  // namespace sentsim
