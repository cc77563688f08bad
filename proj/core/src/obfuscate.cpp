#include "reviewforge/obfuscate.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <map>
#include <stdexcept>

#include "json.hpp"
#include "reviewforge/io.hpp"
#include "reviewforge/parallel.hpp"

namespace reviewforge {

namespace {

// correct<TAB>misspelled
const char* const kDefaultRules[] = {
    "absence\tabscence",        "accidentally\taccidently",  "accommodate\taccomodate",
    "achieve\tacheive",         "across\taccross",           "address\tadress",
    "amateur\tamatuer",         "apparent\tapparant",        "appearance\tappearence",
    "argument\targuement",      "atmosphere\tatmoshpere",    "basically\tbasicly",
    "beginning\tbegining",      "believe\tbeleive",          "bizarre\tbizzare",
    "business\tbuisness",       "calendar\tcalender",        "cemetery\tcemetary",
    "coming\tcomming",          "committee\tcommitee",       "completely\tcompletly",
    "conscious\tconcious",      "convenience\tconvienence",  "definitely\tdefinately",
    "delicious\tdelicous",      "different\tdiffrent",       "disappear\tdissapear",
    "disappoint\tdissapoint",   "embarrass\tembarass",       "environment\tenviroment",
    "especially\tespecialy",    "exaggerate\texagerate",     "excellent\texcellant",
    "existence\texistance",     "experience\texperiance",    "familiar\tfamilar",
    "favorite\tfavourite",      "finally\tfinaly",           "foreign\tforiegn",
    "friend\tfreind",           "government\tgoverment",     "grateful\tgreatful",
    "guarantee\tgarantee",      "happened\thappend",         "harass\tharrass",
    "height\theigth",           "humorous\thumerous",        "immediately\timmediatly",
    "independent\tindependant", "interesting\tintresting",   "knowledge\tknowlege",
    "library\tlibary",          "maintenance\tmaintenence",  "minute\tminuet",
    "necessary\tneccessary",    "noticeable\tnoticable",     "occasion\toccassion",
    "occurred\toccured",        "occurrence\toccurence",     "personnel\tpersonel",
    "piece\tpeice",             "possession\tposession",     "preferred\tprefered",
    "privilege\tpriviledge",    "probably\tprobly",          "professor\tproffessor",
    "pronunciation\tpronounciation", "publicly\tpublically", "really\trealy",
    "receive\trecieve",         "recommend\treccomend",      "referred\trefered",
    "relevant\trelevent",       "religious\treligous",       "remember\tremeber",
    "restaurant\trestaraunt",   "rhythm\trythm",             "schedule\tschedual",
    "separate\tseperate",       "sincerely\tsincerly",       "speech\tspeach",
    "successful\tsuccesful",    "surprise\tsuprise",         "tomorrow\ttommorow",
    "truly\ttruely",            "until\tuntill",             "vacuum\tvacume",
    "vegetarian\tvegeterian",   "weird\twierd"};

bool is_single_lower_token(std::string_view s) {
  if (s.empty()) return false;
  for (unsigned char c : s) {
    if (std::isspace(c) || std::isupper(c)) return false;
  }
  return true;
}

struct KeyPos {
  int row;
  int col;
};

const std::unordered_map<char, KeyPos>& key_positions() {
  static const std::unordered_map<char, KeyPos> positions = [] {
    const char* rows[] = {"1234567890", "qwertyuiop", "asdfghjkl", "zxcvbnm"};
    std::unordered_map<char, KeyPos> map;
    for (int r = 0; r < 4; ++r)
      for (int c = 0; rows[r][c] != '\0'; ++c) map[rows[r][c]] = {r, c};
    return map;
  }();
  return positions;
}

}  // namespace

SpellingRuleSet SpellingRuleSet::defaults() {
  SpellingRuleSet rules;
  for (const char* line : kDefaultRules) {
    std::string_view sv(line);
    size_t tab = sv.find('\t');
    rules.add_rule(std::string(sv.substr(0, tab)), std::string(sv.substr(tab + 1)));
  }
  return rules;
}

SpellingRuleSet SpellingRuleSet::load(const std::filesystem::path& path) {
  SpellingRuleSet rules;
  auto lines = read_lines(path);
  for (size_t i = 0; i < lines.size(); ++i) {
    const std::string& line = lines[i];
    if (line.empty() || line[0] == '#') continue;
    size_t tab = line.find('\t');
    if (tab == std::string::npos)
      throw std::runtime_error(path.string() + ":" + std::to_string(i + 1) +
                               ": expected correct<TAB>misspelled");
    rules.add_rule(line.substr(0, tab), line.substr(tab + 1));
  }
  return rules;
}

void SpellingRuleSet::save(const std::filesystem::path& path) const {
  std::vector<std::string> lines;
  lines.reserve(rules_.size());
  for (const auto& [correct, wrong] : rules_) lines.push_back(correct + "\t" + wrong);
  write_lines(path, lines);
}

void SpellingRuleSet::add_rule(std::string correct, std::string misspelled) {
  if (!is_single_lower_token(correct) || !is_single_lower_token(misspelled))
    throw std::invalid_argument("spelling rule forms must be single lowercase tokens");
  if (correct == misspelled)
    throw std::invalid_argument("spelling rule must change the word: " + correct);
  if (index_.find(correct) != index_.end()) return;  // first rule wins
  index_.emplace(correct, rules_.size());
  rules_.emplace_back(std::move(correct), std::move(misspelled));
}

const std::string* SpellingRuleSet::find(std::string_view word) const {
  auto it = index_.find(std::string(word));
  return it == index_.end() ? nullptr : &rules_[it->second].second;
}

void KeyboardWeights::validate() const {
  for (double v : {substitution_adjacent, substitution_other, insertion, deletion, transposition,
                   real_word_boost}) {
    if (!(v > 0.0)) throw std::invalid_argument("keyboard weights must be positive");
  }
  if (!(substitution_adjacent < substitution_other))
    throw std::invalid_argument("adjacent substitutions must cost less than distant ones");
}

KeyboardWeights KeyboardWeights::load(const std::filesystem::path& path) {
  auto obj = nlohmann::json::parse(read_file(path));
  KeyboardWeights w;
  auto get = [&](const char* key, double& field) {
    if (obj.contains(key)) field = obj.at(key).get<double>();
  };
  get("substitution_adjacent", w.substitution_adjacent);
  get("substitution_other", w.substitution_other);
  get("insertion", w.insertion);
  get("deletion", w.deletion);
  get("transposition", w.transposition);
  get("real_word_boost", w.real_word_boost);
  w.validate();
  return w;
}

void KeyboardWeights::save(const std::filesystem::path& path) const {
  nlohmann::json obj{{"substitution_adjacent", substitution_adjacent},
                     {"substitution_other", substitution_other},
                     {"insertion", insertion},
                     {"deletion", deletion},
                     {"transposition", transposition},
                     {"real_word_boost", real_word_boost}};
  write_file(path, obj.dump(2) + "\n");
}

double KeyboardWeights::substitution_cost(char a, char b) const {
  return keys_adjacent(a, b) ? substitution_adjacent : substitution_other;
}

bool keys_adjacent(char a, char b) {
  const auto& pos = key_positions();
  auto ia = pos.find(static_cast<char>(std::tolower(static_cast<unsigned char>(a))));
  auto ib = pos.find(static_cast<char>(std::tolower(static_cast<unsigned char>(b))));
  if (ia == pos.end() || ib == pos.end()) return false;
  const KeyPos& p = ia->second;
  const KeyPos& q = ib->second;
  if (p.row == q.row) return std::abs(p.col - q.col) == 1;
  // Rows are staggered right: the key below column c sits between columns
  // c and c+1 of the row above.
  if (std::abs(p.row - q.row) != 1) return false;
  const KeyPos& upper = p.row < q.row ? p : q;
  const KeyPos& lower = p.row < q.row ? q : p;
  return upper.col == lower.col || upper.col == lower.col + 1;
}

std::vector<TypoCandidate> typo_candidates(const std::string& word,
                                           const KeyboardWeights& weights,
                                           const Vocabulary& dictionary) {
  weights.validate();
  std::map<std::string, double> cost_by_word;  // min cost per distinct result
  auto offer = [&](std::string candidate, double cost) {
    if (candidate == word || candidate.empty()) return;
    auto [it, inserted] = cost_by_word.emplace(std::move(candidate), cost);
    if (!inserted && cost < it->second) it->second = cost;
  };
  const size_t n = word.size();
  for (size_t i = 0; i < n; ++i) {
    for (char c = 'a'; c <= 'z'; ++c) {
      if (c == word[i]) continue;
      std::string candidate = word;
      candidate[i] = c;
      offer(std::move(candidate), weights.substitution_cost(word[i], c));
    }
  }
  for (size_t i = 0; i <= n; ++i) {
    for (char c = 'a'; c <= 'z'; ++c) {
      std::string candidate = word;
      candidate.insert(candidate.begin() + static_cast<std::ptrdiff_t>(i), c);
      offer(std::move(candidate), weights.insertion);
    }
  }
  for (size_t i = 0; i < n; ++i) {
    std::string candidate = word;
    candidate.erase(candidate.begin() + static_cast<std::ptrdiff_t>(i));
    offer(std::move(candidate), weights.deletion);
  }
  for (size_t i = 0; i + 1 < n; ++i) {
    if (word[i] == word[i + 1]) continue;
    std::string candidate = word;
    std::swap(candidate[i], candidate[i + 1]);
    offer(std::move(candidate), weights.transposition);
  }
  std::vector<TypoCandidate> candidates;
  candidates.reserve(cost_by_word.size());
  for (auto& [candidate, cost] : cost_by_word) {
    double weight = 1.0 / cost;
    if (dictionary.contains(candidate)) weight *= weights.real_word_boost;
    candidates.push_back({candidate, cost, weight});
  }
  return candidates;
}

std::string apply_spelling_rule(const std::string& word, const SpellingRuleSet& rules) {
  if (word.empty()) return word;
  const bool upper = std::isupper(static_cast<unsigned char>(word[0])) != 0;
  std::string key = word;
  key[0] = static_cast<char>(std::tolower(static_cast<unsigned char>(key[0])));
  const std::string* wrong = rules.find(key);
  if (!wrong) return word;
  std::string out = *wrong;
  if (upper && !out.empty()) out[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(out[0])));
  return out;
}

std::string inject_typo(const std::string& word, const KeyboardWeights& weights,
                        const Vocabulary& dictionary, Rng& rng) {
  if (word.size() < 2) return word;
  auto candidates = typo_candidates(word, weights, dictionary);
  if (candidates.empty()) return word;
  double total = 0.0;
  for (const auto& c : candidates) total += c.weight;
  const double r = rng.next_double() * total;
  double cum = 0.0;
  for (const auto& c : candidates) {
    cum += c.weight;
    if (r < cum) return c.word;
  }
  return candidates.back().word;  // guards the r == total rounding edge
}

TokenSequence obfuscate(const TokenSequence& review, double p_typo, double p_spell,
                        const SpellingRuleSet& rules, const KeyboardWeights& weights,
                        const Vocabulary& dictionary, Rng& rng) {
  if (!(p_typo >= 0.0 && p_typo <= 1.0) || !(p_spell >= 0.0 && p_spell <= 1.0))
    throw std::invalid_argument("obfuscation probabilities must be in [0, 1]");
  TokenSequence out;
  out.reserve(review.size());
  for (const auto& token : review) {
    if (!is_word_token(token)) {
      out.push_back(token);
      continue;
    }
    std::string replaced = apply_spelling_rule(token, rules);
    if (replaced != token && rng.next_bernoulli(p_spell)) {
      out.push_back(std::move(replaced));
      continue;
    }
    if (token.size() >= 2 && rng.next_bernoulli(p_typo)) {
      out.push_back(inject_typo(token, weights, dictionary, rng));
      continue;
    }
    out.push_back(token);
  }
  return out;
}

std::vector<TokenSequence> obfuscate_batch(const std::vector<TokenSequence>& reviews,
                                           double p_typo, double p_spell,
                                           const SpellingRuleSet& rules,
                                           const KeyboardWeights& weights,
                                           const Vocabulary& dictionary, std::uint64_t seed,
                                           unsigned jobs) {
  std::vector<TokenSequence> out(reviews.size());
  parallel_for(reviews.size(), jobs, [&](std::size_t i) {
    Rng rng = derive_rng(seed, i);
    out[i] = obfuscate(reviews[i], p_typo, p_spell, rules, weights, dictionary, rng);
  });
  return out;
}

}  // namespace reviewforge
