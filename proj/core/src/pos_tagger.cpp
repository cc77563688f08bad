#include "reviewforge/pos_tagger.hpp"

#include <cctype>
#include <string>
#include <unordered_map>

namespace reviewforge {

namespace {

const std::unordered_map<std::string, PosTag>& lexicon() {
  static const std::unordered_map<std::string, PosTag> table = [] {
    std::unordered_map<std::string, PosTag> t;
    auto add = [&](PosTag tag, std::initializer_list<const char*> words) {
      for (const char* w : words) t.emplace(w, tag);
    };
    add(PosTag::kPron, {"i",    "me",   "my",    "mine",   "myself", "we",     "us",    "our",
                        "ours", "you",  "your",  "yours",  "he",     "him",    "his",   "she",
                        "her",  "hers", "it",    "its",    "they",   "them",   "their", "theirs",
                        "who",  "whom", "whose", "someone", "anyone", "everyone", "nothing",
                        "something", "everything", "anything"});
    add(PosTag::kDet, {"a", "an", "the", "this", "that", "these", "those", "each", "every",
                       "some", "any", "no", "all", "both", "few", "many", "most", "several",
                       "such", "which"});
    add(PosTag::kAdp, {"of", "in", "on", "at", "by", "with", "from", "about", "into", "over",
                       "under", "between", "through", "during", "without", "within", "near",
                       "against", "across", "around", "off", "up", "down", "out", "per"});
    add(PosTag::kCconj, {"and", "or", "but", "nor", "yet", "plus"});
    add(PosTag::kSconj, {"because", "although", "though", "while", "whereas", "if", "unless",
                         "until", "since", "when", "whenever", "where", "after", "before", "as",
                         "so", "than", "whether"});
    add(PosTag::kAux, {"am", "is", "are", "was", "were", "be", "been", "being", "have", "has",
                       "had", "do", "does", "did", "will", "would", "can", "could", "shall",
                       "should", "may", "might", "must"});
    add(PosTag::kPart, {"to", "not"});
    add(PosTag::kIntj, {"oh", "wow", "yum", "yuck", "ugh", "hey", "hmm", "ouch", "yes", "yeah",
                        "please", "thanks", "ok", "okay"});
    add(PosTag::kAdv, {"very", "really", "quite", "too", "also", "just", "here", "there", "now",
                       "then", "always", "never", "often", "again", "maybe", "perhaps", "however",
                       "definitely", "pretty", "well", "back", "even", "still", "once", "twice",
                       "n't", "not"});
    add(PosTag::kVerb, {"go", "went", "gone", "get", "got", "gotten", "make", "made", "come",
                        "came", "take", "took", "eat", "ate", "eaten", "try", "tried", "order",
                        "ordered", "love", "loved", "like", "liked", "want", "wanted", "say",
                        "said", "give", "gave", "think", "thought", "know", "knew", "recommend",
                        "wait", "waited", "ask", "asked", "feel", "felt", "find", "found"});
    add(PosTag::kAdj, {"good", "bad", "great", "nice", "best", "worst", "better", "worse",
                       "new", "old", "big", "small", "hot", "cold", "fresh", "friendly", "rude",
                       "slow", "fast", "clean", "dirty", "cheap", "expensive", "tasty", "bland",
                       "amazing", "awful", "excellent", "terrible", "delicious", "other", "only",
                       "first", "last", "same", "little", "much", "more", "less", "own"});
    return t;
  }();
  return table;
}

bool all_digits(std::string_view token) {
  for (char c : token)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return !token.empty();
}

bool has_suffix(std::string_view token, std::string_view suffix) {
  return token.size() > suffix.size() &&
         token.substr(token.size() - suffix.size()) == suffix;
}

}  // namespace

std::string_view pos_tag_name(PosTag tag) {
  static constexpr std::string_view names[kPosTagCount] = {
      "ADJ",  "ADP",  "ADV",   "AUX",   "CCONJ", "DET", "INTJ", "NOUN", "NUM",
      "PART", "PRON", "PROPN", "PUNCT", "SCONJ", "SYM", "VERB", "X"};
  return names[static_cast<std::size_t>(tag)];
}

PosTag tag_token(std::string_view token) {
  if (token.empty()) return PosTag::kX;
  const unsigned char first = static_cast<unsigned char>(token.front());
  if (!std::isalnum(first)) {
    switch (token.front()) {
      case '$':
      case '%':
      case '+':
      case '=':
      case '<':
      case '>':
      case '^':
      case '|':
      case '~':
        return PosTag::kSym;
      default:
        return PosTag::kPunct;
    }
  }
  if (std::isdigit(first)) return all_digits(token) ? PosTag::kNum : PosTag::kNoun;

  std::string lower(token);
  bool was_upper = std::isupper(first) != 0;
  for (auto& c : lower) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));

  const auto& lex = lexicon();
  if (auto it = lex.find(lower); it != lex.end()) return it->second;
  if (was_upper) return PosTag::kPropn;

  // Open-class suffix rules; order matters (first match wins). Noun suffixes
  // run before adjective suffixes so "ment" wins over the "ent" it contains.
  if (has_suffix(lower, "ly")) return PosTag::kAdv;
  if (has_suffix(lower, "ing") || has_suffix(lower, "ed") || has_suffix(lower, "ize") ||
      has_suffix(lower, "ise"))
    return PosTag::kVerb;
  if (has_suffix(lower, "tion") || has_suffix(lower, "sion") || has_suffix(lower, "ness") ||
      has_suffix(lower, "ment") || has_suffix(lower, "ity") || has_suffix(lower, "ship") ||
      has_suffix(lower, "ism"))
    return PosTag::kNoun;
  if (has_suffix(lower, "ous") || has_suffix(lower, "ful") || has_suffix(lower, "ive") ||
      has_suffix(lower, "able") || has_suffix(lower, "ible") || has_suffix(lower, "ish") ||
      has_suffix(lower, "est") || has_suffix(lower, "ier") || has_suffix(lower, "al") ||
      has_suffix(lower, "ent") || has_suffix(lower, "ant"))
    return PosTag::kAdj;
  return PosTag::kNoun;
}

std::vector<PosTag> pos_tag(const TokenSequence& tokens) {
  std::vector<PosTag> tags;
  tags.reserve(tokens.size());
  for (const auto& token : tokens) tags.push_back(tag_token(token));
  return tags;
}

}  // namespace reviewforge
