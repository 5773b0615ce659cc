#pragma once

#include <optional>
#include <string>
#include <vector>

namespace matex {

// One markup-stripped paragraph, tagged with the headings it appeared under.
struct Paragraph {
  std::string section;
  std::string subsection;  // empty when the paragraph sits directly under a section
  std::string text;
};

// One paper: metadata plus its paragraphs in source order.
struct Document {
  std::string doc_id;
  std::optional<int> year;
  std::optional<std::string> country;  // first author's country, from metadata
  std::string title;
  std::vector<Paragraph> paragraphs;
};

}  // namespace matex
