#include "srtchat/synth.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <set>

#include "srtchat/errors.hpp"
#include "srtchat/srt.hpp"

namespace srtchat {
namespace {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(engine_() % n); }
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  bool chance(double p) { return unit() < p; }

 private:
  std::mt19937_64 engine_;
};

constexpr const char* kOnsets[] = {"b", "br", "c", "ch", "d", "dr", "f", "g", "gl", "h", "j", "k", "l", "m",
                                   "n", "p", "pl", "r", "s", "sh", "st", "t", "tr", "v", "w", "z"};
constexpr const char* kVowels[] = {"a", "e", "i", "o", "u", "ai", "ea", "oo", "ou"};
constexpr const char* kCodas[] = {"", "", "n", "r", "l", "m", "nd", "st", "x", "k"};
constexpr const char* kFiller[] = {"the", "you", "and", "are", "this", "that", "with", "what", "was", "have",
                                   "i", "a", "to", "of", "it", "we", "my", "me", "so", "oh"};
constexpr const char* kNoise[] = {"[door opens]", "(laughing)", "\xE2\x99\xAA theme music \xE2\x99\xAA", "[applause]",
                                  "<i>(sighs)</i>", "{\\an8}[phone rings]"};
constexpr const char* kSpeakers[] = {"ROSS", "MONICA", "JOEY", "PHOEBE", "CHANDLER", "RACHEL"};
constexpr char kEnders[] = {'.', '.', '?', '!'};

template <typename T, std::size_t N>
const T& pick(Rng& rng, const T (&items)[N]) {
  return items[rng.below(N)];
}

std::vector<std::string> make_vocabulary(Rng& rng, std::size_t size) {
  std::set<std::string> seen;
  std::vector<std::string> words;
  words.reserve(size);
  while (words.size() < size) {
    std::string w;
    const std::size_t syllables = 1 + rng.below(3);
    for (std::size_t s = 0; s < syllables; ++s) {
      w += pick(rng, kOnsets);
      w += pick(rng, kVowels);
    }
    w += pick(rng, kCodas);
    if (w.size() < 3 || !seen.insert(w).second) continue;
    words.push_back(std::move(w));
  }
  return words;
}

// Log-uniform rank: frequent words dominate, as in natural text.
const std::string& zipf_word(Rng& rng, const std::vector<std::string>& vocab) {
  const double r = std::pow(static_cast<double>(vocab.size()) + 1.0, rng.unit()) - 1.0;
  std::size_t rank = static_cast<std::size_t>(r);
  if (rank >= vocab.size()) rank = vocab.size() - 1;
  return vocab[rank];
}

std::string make_sentence(Rng& rng, const std::vector<std::string>& vocab) {
  const std::size_t words = 2 + rng.below(8);
  std::string out;
  for (std::size_t i = 0; i < words; ++i) {
    if (!out.empty()) out += ' ';
    out += rng.chance(0.3) ? std::string(pick(rng, kFiller)) : zipf_word(rng, vocab);
  }
  out[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(out[0])));
  out += pick(rng, kEnders);
  return out;
}

std::string perturb(Rng& rng, std::string text) {
  switch (rng.below(3)) {
    case 0: {  // typo
      const std::size_t at = rng.below(text.size());
      if (std::isalpha(static_cast<unsigned char>(text[at]))) text[at] = static_cast<char>('a' + rng.below(26));
      break;
    }
    case 1: {  // drop the first word
      if (auto sp = text.find(' '); sp != std::string::npos) text.erase(0, sp + 1);
      break;
    }
    default:
      break;
  }
  return text;
}

}  // namespace

SynthCorpus generate_synthetic(const SynthOptions& options) {
  if (options.lines == 0) throw InvalidInputError("synthetic corpus needs at least one line");
  if (options.vocab == 0) throw InvalidInputError("synthetic vocabulary needs at least one word");
  Rng rng(options.seed);
  const auto vocab = make_vocabulary(rng, options.vocab);
  std::size_t episodes = options.episodes ? options.episodes : (options.lines + 499) / 500;
  if (episodes > options.lines) episodes = options.lines;

  SynthCorpus out;
  for (std::size_t e = 0; e < episodes; ++e) {
    const std::size_t quota = options.lines / episodes + (e < options.lines % episodes ? 1 : 0);
    std::vector<SubtitleCue> cues;
    std::int64_t clock = 1000;
    auto push = [&](std::vector<std::string> payload) {
      SubtitleCue cue;
      cue.index = cues.size() + 1;
      cue.start_ms = clock;
      cue.end_ms = clock + 800 + static_cast<std::int64_t>(rng.below(2500));
      clock = cue.end_ms + 200;
      cue.lines = std::move(payload);
      cues.push_back(std::move(cue));
    };
    for (std::size_t k = 0; k < quota; ++k) {
      if (rng.chance(0.06)) {
        push({pick(rng, kNoise)});
        ++out.noise_cues;
      }
      std::string sentence = make_sentence(rng, vocab);
      out.dialogue.push_back(sentence);
      const double style = rng.unit();
      if (style < 0.08) {
        push({std::string(pick(rng, kSpeakers)) + ": " + sentence});
      } else if (style < 0.14) {
        push({"<i>" + sentence + "</i>"});
      } else if (style < 0.30 && sentence.find(' ') != std::string::npos) {
        const auto sp = sentence.find(' ');
        push({sentence.substr(0, sp), sentence.substr(sp + 1)});
      } else {
        push({sentence});
      }
    }
    char name[48];
    std::snprintf(name, sizeof name, "episode_%04zu.srt", e + 1);
    out.file_names.emplace_back(name);
    out.file_contents.push_back(format_srt(cues));
  }

  for (std::size_t q = 0; q < options.queries; ++q) {
    if (rng.chance(0.7)) {
      out.queries.push_back(perturb(rng, out.dialogue[rng.below(out.dialogue.size())]));
    } else {
      out.queries.push_back(make_sentence(rng, vocab));
    }
  }
  return out;
}

void write_synthetic(const SynthCorpus& synth, const std::filesystem::path& dir,
                     const std::filesystem::path& queries_path) {
  std::filesystem::create_directories(dir);
  for (std::size_t i = 0; i < synth.file_names.size(); ++i) {
    std::ofstream out(dir / synth.file_names[i], std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + (dir / synth.file_names[i]).string());
    out << synth.file_contents[i];
  }
  if (!queries_path.empty()) {
    if (queries_path.has_parent_path()) std::filesystem::create_directories(queries_path.parent_path());
    std::ofstream out(queries_path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + queries_path.string());
    for (const auto& q : synth.queries) out << q << '\n';
  }
}

}  // namespace srtchat
