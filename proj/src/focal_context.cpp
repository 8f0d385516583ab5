#include "testmap/focal_context.hpp"

#include <algorithm>

#include "testmap/error.hpp"
#include "testmap/java_lexer.hpp"

namespace testmap {

namespace {

constexpr std::array<std::string_view, 5> kLevelNames = {"fm", "fm+fc", "fm+fc+c", "fm+fc+c+m",
                                                         "fm+fc+c+m+f"};

bool admits(ContextLevel level, SectionKind kind) {
  switch (kind) {
    case SectionKind::FocalMethod:
      return true;
    case SectionKind::ClassName:
      return level >= ContextLevel::FM_FC;
    case SectionKind::Constructor:
      return level >= ContextLevel::FM_FC_C;
    case SectionKind::MethodSignature:
      return level >= ContextLevel::FM_FC_C_M;
    case SectionKind::Field:
      return level >= ContextLevel::FM_FC_C_M_F;
  }
  return false;
}

std::string as_statement(std::string text) {
  while (!text.empty() && (text.back() == ';' || text.back() == ' ')) text.pop_back();
  return text + ";";
}

}  // namespace

std::string_view level_name(ContextLevel level) {
  return kLevelNames[static_cast<std::size_t>(level)];
}

std::optional<ContextLevel> level_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kLevelNames.size(); ++i) {
    if (kLevelNames[i] == name) return kAllLevels[i];
  }
  return std::nullopt;
}

FocalContextRendering render(const MappedTestCase& pair, ContextLevel level) {
  if (auto violations = validate(pair); !violations.empty()) {
    std::string msg = "cannot render an invalid pair:";
    for (const auto& v : violations) msg += " " + v + ";";
    throw Error(msg);
  }

  FocalContextRendering r;
  r.level = level;
  r.target_text = java::normalize_code(pair.test_case.body);

  const std::string focal = java::normalize_code(pair.focal_method.body);
  r.sections.push_back({SectionKind::FocalMethod, focal});
  if (level == ContextLevel::FM) {
    r.input_text = focal;
    r.focal_method_end = focal.size();
    return r;
  }

  const ClassInfo& cls = pair.focal_class;
  r.sections.push_back({SectionKind::ClassName, cls.identifier});
  if (admits(level, SectionKind::Constructor)) {
    for (const auto& m : cls.methods) {
      if (m.is_constructor) r.sections.push_back({SectionKind::Constructor, as_statement(m.signature)});
    }
  }
  if (admits(level, SectionKind::MethodSignature)) {
    for (const auto& m : cls.methods) {
      bool is_focal = m.identifier == pair.focal_method.identifier &&
                      m.signature == pair.focal_method.signature;
      if (!m.is_constructor && !is_focal && m.has_modifier("public")) {
        r.sections.push_back({SectionKind::MethodSignature, as_statement(m.signature)});
      }
    }
  }
  if (admits(level, SectionKind::Field)) {
    const std::string* previous = nullptr;
    for (const auto& f : cls.fields) {
      bool is_public = std::find(f.modifiers.begin(), f.modifiers.end(), "public") != f.modifiers.end();
      // one entry per declaration statement, even when it declares several names
      if (!is_public || (previous && *previous == f.declaration_text)) continue;
      previous = &f.declaration_text;
      r.sections.push_back({SectionKind::Field, as_statement(java::normalize_code(f.declaration_text))});
    }
  }

  std::string text = cls.identifier + " { " + focal;
  r.focal_method_end = text.size();
  for (std::size_t i = 2; i < r.sections.size(); ++i) text += " " + r.sections[i].text;
  text += " }";
  r.input_text = std::move(text);
  return r;
}

FocalContextRendering truncate(FocalContextRendering rendering, std::size_t max_tokens,
                               const bpe::Tokenizer& tokenizer) {
  if (max_tokens == 0) throw Error("max_tokens must be positive");
  rendering.tokens = tokenizer.tokenize(rendering.input_text);
  if (rendering.tokens.size() > max_tokens) {
    rendering.tokens.resize(max_tokens);
    rendering.input_text = bpe::Tokenizer::detokenize(rendering.tokens);
    rendering.truncated = true;
    rendering.focal_method_cut = rendering.input_text.size() < rendering.focal_method_end;
  }
  rendering.token_count = rendering.tokens.size();
  return rendering;
}

}  // namespace testmap
