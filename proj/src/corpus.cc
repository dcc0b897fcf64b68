#include "wiser/corpus.h"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace wiser {
namespace {

struct Chunk {
  std::string_view text;
  int first_line;
};

bool is_blank(std::string_view line) {
  return line.find_first_not_of(" \t\r") == std::string_view::npos;
}

std::vector<Chunk> split_chunks(std::string_view text) {
  std::vector<Chunk> chunks;
  size_t pos = 0;
  int line_no = 1;
  size_t chunk_start = std::string_view::npos;
  int chunk_line = 0;
  while (pos <= text.size()) {
    size_t eol = text.find('\n', pos);
    bool last = eol == std::string_view::npos;
    if (last) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    if (is_blank(line)) {
      if (chunk_start != std::string_view::npos) {
        chunks.push_back({text.substr(chunk_start, pos - chunk_start), chunk_line});
        chunk_start = std::string_view::npos;
      }
    } else if (chunk_start == std::string_view::npos) {
      chunk_start = pos;
      chunk_line = line_no;
    }
    if (last) break;
    pos = eol + 1;
    ++line_no;
  }
  if (chunk_start != std::string_view::npos) {
    chunks.push_back({text.substr(chunk_start), chunk_line});
  }
  return chunks;
}

bool is_comment_only(std::string_view chunk) {
  size_t pos = 0;
  while (pos < chunk.size()) {
    size_t eol = chunk.find('\n', pos);
    if (eol == std::string_view::npos) eol = chunk.size();
    std::string_view line = chunk.substr(pos, eol - pos);
    size_t first = line.find_first_not_of(" \t\r");
    if (first != std::string_view::npos) {
      if (line[first] != '#') return false;
      if (line.find("::") != std::string_view::npos) return false;
    }
    pos = eol + 1;
  }
  return true;
}

}  // namespace

std::string CorpusError::to_string() const {
  std::ostringstream out;
  out << "document " << (index + 1);
  if (!id.empty()) out << " (" << id << ")";
  if (line > 0) out << " line " << line << ", column " << column;
  out << ": " << message;
  return out.str();
}

Corpus parse_corpus(std::string_view text) {
  Corpus corpus;
  size_t index = 0;
  for (const Chunk& chunk : split_chunks(text)) {
    if (is_comment_only(chunk.text)) continue;
    std::string fallback_id = "doc" + std::to_string(index + 1);
    try {
      SemGraph graph = parse_graph(chunk.text, chunk.first_line);
      std::string id = graph.metadata_value("id").value_or(fallback_id);
      corpus.documents.push_back({std::move(id), std::move(graph)});
    } catch (const ParseError& e) {
      CorpusError err;
      err.index = index;
      err.id = fallback_id;
      // Best effort: recover the id from the header for the message.
      size_t at = chunk.text.find("::id ");
      if (at != std::string_view::npos) {
        size_t end = chunk.text.find_first_of(" \t\r\n", at + 5);
        err.id = std::string(chunk.text.substr(at + 5, end == std::string_view::npos
                                                           ? std::string_view::npos
                                                           : end - at - 5));
      }
      err.line = e.line();
      err.column = e.column();
      err.message = e.message();
      corpus.errors.push_back(std::move(err));
    }
    ++index;
  }
  return corpus;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

Corpus read_corpus(const std::filesystem::path& path) {
  return parse_corpus(read_text_file(path));
}

std::string write_corpus(const std::vector<Document>& documents, int indent) {
  std::ostringstream out;
  for (const auto& doc : documents) {
    for (const auto& [key, value] : doc.graph.metadata) {
      out << "# ::" << key;
      if (!value.empty()) out << ' ' << value;
      out << '\n';
    }
    out << serialize_graph(doc.graph, indent) << "\n\n";
  }
  return out.str();
}

void write_corpus_file(const std::filesystem::path& path,
                       const std::vector<Document>& documents, int indent) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << write_corpus(documents, indent);
}

}  // namespace wiser
