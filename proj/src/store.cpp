#include "srtchat/store.hpp"

#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "srtchat/errors.hpp"
#include "srtchat/utf8.hpp"

namespace srtchat {
namespace {

using ordered_json = nlohmann::ordered_json;

constexpr std::string_view kCorpusFormat = "corpus-v1";

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::filesystem::path& path, std::string_view data) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(data.data(), static_cast<std::streamsize>(data.size()));
  out.flush();
  if (!out) throw IoError("write failed for " + path.string());
}

bool ends_mid_line(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary | std::ios::ate);
  if (!in || in.tellg() <= 0) return false;
  in.seekg(-1, std::ios::end);
  char last = 0;
  in.get(last);
  return last != '\n';
}

void append_line(const std::filesystem::path& path, const std::string& line) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  const bool torn = ends_mid_line(path);
  std::ofstream out(path, std::ios::binary | std::ios::app);
  if (!out) throw IoError("cannot append to " + path.string());
  if (torn) out.put('\n');
  out << line << '\n';
  out.flush();
  if (!out) throw IoError("append failed for " + path.string());
}

// Calls fn(line, offset) for each line; a final line without '\n' is passed too.
template <typename Fn>
void for_each_line(std::string_view data, Fn&& fn) {
  std::size_t pos = 0;
  while (pos < data.size()) {
    std::size_t nl = data.find('\n', pos);
    std::size_t end = nl == std::string_view::npos ? data.size() : nl;
    std::string_view line = data.substr(pos, end - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    fn(line, pos);
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
}

std::string hex_name(std::string_view id) {
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out = "%";
  for (unsigned char c : id) {
    out.push_back(kHex[c >> 4]);
    out.push_back(kHex[c & 15]);
  }
  return out;
}

}  // namespace

StorePaths StorePaths::beside(const std::filesystem::path& corpus_path) {
  const auto dir = corpus_path.parent_path();
  return {corpus_path, dir / "learned.jsonl", dir / "sessions"};
}

std::string serialize_corpus(const Corpus& corpus) {
  std::string out;
  ordered_json header;
  header["format"] = kCorpusFormat;
  header["episodes"] = corpus.episode_offsets();
  out += header.dump();
  out += '\n';
  for (const auto& line : corpus.lines()) {
    ordered_json row;
    row["id"] = line.id;
    row["episode"] = line.episode;
    row["text"] = line.text;
    out += row.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
    out += '\n';
  }
  return out;
}

Corpus parse_corpus(std::string_view data, const StopList& stoplist) {
  bool have_header = false;
  std::vector<std::size_t> offsets;
  std::vector<DialogueLine> lines;
  for_each_line(data, [&](std::string_view line, std::size_t offset) {
    if (utf8::is_blank(line)) return;
    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw FormatError(offset, std::string(have_header ? "corrupt corpus line" : "corrupt corpus header") +
                                    ": " + e.what());
    }
    if (!have_header) {
      if (!obj.is_object() || !obj.contains("format")) throw FormatError(offset, "missing corpus header");
      if (obj["format"] != kCorpusFormat) {
        throw FormatError(offset, "unsupported corpus format " + obj["format"].dump());
      }
      if (!obj.contains("episodes") || !obj["episodes"].is_array()) {
        throw FormatError(offset, "corpus header lacks an episodes array");
      }
      try {
        offsets = obj["episodes"].get<std::vector<std::size_t>>();
      } catch (const nlohmann::json::exception&) {
        throw FormatError(offset, "episode offsets must be non-negative integers");
      }
      have_header = true;
      return;
    }
    try {
      lines.push_back(DialogueLine{obj.at("id").get<std::size_t>(), obj.at("text").get<std::string>(),
                                   obj.at("episode").get<std::size_t>(), {}});
    } catch (const nlohmann::json::exception& e) {
      throw FormatError(offset, std::string("bad corpus line: ") + e.what());
    }
  });
  if (!have_header) throw FormatError(0, "missing corpus header");
  Corpus corpus;
  try {
    corpus = Corpus(std::move(lines), std::move(offsets));
  } catch (const InvalidInputError& e) {
    throw FormatError(0, e.what());
  }
  corpus.vectorize(stoplist);
  return corpus;
}

void save_corpus(const Corpus& corpus, const std::filesystem::path& path) {
  write_file(path, serialize_corpus(corpus));
}

Corpus load_corpus(const std::filesystem::path& path, const StopList& stoplist) {
  return parse_corpus(read_file(path), stoplist);
}

std::string learned_to_json_line(const LearnedPair& pair) {
  ordered_json obj;
  obj["prompt"] = pair.prompt;
  obj["response"] = pair.response;
  obj["session_id"] = pair.session_id;
  obj["created_at"] = format_rfc3339(pair.created_at);
  return obj.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
}

LearnedLoad parse_learned(std::string_view data) {
  LearnedLoad result;
  for_each_line(data, [&](std::string_view line, std::size_t) {
    if (utf8::is_blank(line)) return;
    try {
      auto obj = nlohmann::json::parse(line);
      LearnedPair pair;
      pair.prompt = obj.at("prompt").get<std::string>();
      pair.response = obj.at("response").get<std::string>();
      pair.session_id = obj.value("session_id", "");
      auto at = parse_rfc3339(obj.at("created_at").get<std::string>());
      if (!at || utf8::is_blank(pair.prompt) || utf8::is_blank(pair.response)) {
        ++result.warnings;
        return;
      }
      pair.created_at = *at;
      result.pairs.push_back(std::move(pair));
    } catch (const nlohmann::json::exception&) {
      ++result.warnings;
    }
  });
  return result;
}

LearnedLoad load_learned(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) return {};
  return parse_learned(read_file(path));
}

void append_learned(const LearnedPair& pair, const std::filesystem::path& path) {
  if (utf8::is_blank(pair.prompt) || utf8::is_blank(pair.response)) {
    throw InvalidInputError("learned pairs need a non-blank prompt and response");
  }
  append_line(path, learned_to_json_line(pair));
}

void LearnedWriter::append(const LearnedPair& pair) {
  std::lock_guard lock(mutex_);
  append_learned(pair, path_);
}

std::filesystem::path session_file(const std::filesystem::path& sessions_dir, std::string_view session_id) {
  bool plain = !session_id.empty() && session_id.size() <= 128;
  for (char c : session_id) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '-' || c == '_';
    if (!ok) plain = false;
  }
  return sessions_dir / ((plain ? std::string(session_id) : hex_name(session_id)) + ".jsonl");
}

void append_transcript_entry(const std::filesystem::path& sessions_dir, std::string_view session_id,
                             const TranscriptEntry& entry) {
  ordered_json obj;
  obj["speaker"] = to_string(entry.speaker);
  obj["text"] = entry.text;
  obj["timestamp"] = format_rfc3339(entry.at);
  append_line(session_file(sessions_dir, session_id), obj.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace));
}

std::vector<TranscriptEntry> load_transcript(const std::filesystem::path& sessions_dir, std::string_view session_id,
                                             std::size_t* warnings) {
  std::vector<TranscriptEntry> out;
  std::size_t bad = 0;
  const auto path = session_file(sessions_dir, session_id);
  if (std::filesystem::exists(path)) {
    for_each_line(read_file(path), [&](std::string_view line, std::size_t) {
      if (utf8::is_blank(line)) return;
      try {
        auto obj = nlohmann::json::parse(line);
        const auto speaker = obj.at("speaker").get<std::string>();
        auto at = parse_rfc3339(obj.at("timestamp").get<std::string>());
        if ((speaker != "user" && speaker != "bot") || !at) {
          ++bad;
          return;
        }
        out.push_back({speaker == "user" ? Speaker::User : Speaker::Bot, obj.at("text").get<std::string>(), *at});
      } catch (const nlohmann::json::exception&) {
        ++bad;
      }
    });
  }
  if (warnings) *warnings = bad;
  return out;
}

}  // namespace srtchat
