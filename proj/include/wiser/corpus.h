#ifndef WISER_CORPUS_H_
#define WISER_CORPUS_H_

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "wiser/graph.h"

namespace wiser {

// One corpus entry. `id` is the ::id metadata value, or "doc<N>" (1-based
// position in the file) when the document carries none.
struct Document {
  std::string id;
  SemGraph graph;
};

struct CorpusError {
  size_t index = 0;  // 0-based document position
  std::string id;
  int line = 0;
  int column = 0;
  std::string message;

  std::string to_string() const;
};

struct Corpus {
  std::vector<Document> documents;
  std::vector<CorpusError> errors;

  bool ok() const { return errors.empty(); }
};

// Documents are separated by blank lines. Chunks that hold only plain '#'
// comments (no "# ::" metadata and no graph) are skipped.
Corpus parse_corpus(std::string_view text);
Corpus read_corpus(const std::filesystem::path& path);

std::string write_corpus(const std::vector<Document>& documents, int indent = 6);
void write_corpus_file(const std::filesystem::path& path,
                       const std::vector<Document>& documents, int indent = 6);

std::string read_text_file(const std::filesystem::path& path);

}  // namespace wiser

#endif  // WISER_CORPUS_H_
