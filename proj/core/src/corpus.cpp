#include "reviewforge/corpus.hpp"

#include <algorithm>
#include <charconv>

#include "json.hpp"
#include "reviewforge/io.hpp"
#include "reviewforge/rng.hpp"

namespace reviewforge {

namespace {

using nlohmann::json;

void append_field(std::string& out, const std::string& field) {
  if (field.empty()) return;
  if (!out.empty()) out.push_back(' ');
  out.append(field);
}

std::string field_error(const std::string& where, const std::string& field,
                        const std::string& what) {
  std::string msg;
  if (!where.empty()) msg = where + ": ";
  msg += what + " field '" + field + "'";
  return msg;
}

const json* find_field(const json& obj, const std::string& name, const std::string& where) {
  auto it = obj.find(name);
  if (it == obj.end() || it->is_null()) throw IngestError(field_error(where, name, "missing"));
  return &*it;
}

std::string get_string(const json& obj, const std::string& name, const std::string& where) {
  const json* v = find_field(obj, name, where);
  if (!v->is_string()) throw IngestError(field_error(where, name, "non-string"));
  return v->get<std::string>();
}

int get_rating(const json& obj, const std::string& name, const std::string& where) {
  const json* v = find_field(obj, name, where);
  double d = 0.0;
  if (v->is_number()) {
    d = v->get<double>();
  } else if (v->is_string()) {
    const auto& s = v->get_ref<const std::string&>();
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), d);
    if (ec != std::errc{} || p != s.data() + s.size())
      throw IngestError(field_error(where, name, "non-numeric"));
  } else {
    throw IngestError(field_error(where, name, "non-numeric"));
  }
  int r = static_cast<int>(d);
  if (static_cast<double>(r) != d) throw IngestError(field_error(where, name, "non-integer"));
  return r;
}

std::vector<std::string> get_tags(const json& obj, const std::string& name,
                                  const std::string& where) {
  const json* v = find_field(obj, name, where);
  std::vector<std::string> tags;
  if (v->is_array()) {
    for (const auto& item : *v) {
      if (!item.is_string()) throw IngestError(field_error(where, name, "non-string entry in"));
      tags.push_back(item.get<std::string>());
    }
    return tags;
  }
  if (v->is_string()) {
    // Comma-separated form, as in the Yelp business dumps.
    const auto& s = v->get_ref<const std::string&>();
    size_t start = 0;
    while (start <= s.size()) {
      size_t end = s.find(',', start);
      if (end == std::string::npos) end = s.size();
      std::string tag = s.substr(start, end - start);
      // trim
      size_t a = tag.find_first_not_of(' ');
      size_t b = tag.find_last_not_of(' ');
      if (a != std::string::npos) tags.push_back(tag.substr(a, b - a + 1));
      start = end + 1;
    }
    return tags;
  }
  throw IngestError(field_error(where, name, "non-list"));
}

}  // namespace

TokenSequence Context::tokens() const { return tokenize(text()); }

std::string Context::text() const {
  std::string out;
  if (rating != 0) out = std::to_string(rating);
  append_field(out, name);
  append_field(out, city);
  append_field(out, state);
  for (const auto& tag : tags) append_field(out, tag);
  return out;
}

Context build_context(const RawRecord& record, bool lowercase) {
  if (record.rating < 1 || record.rating > 5)
    throw IngestError("rating out of range: " + std::to_string(record.rating));
  Context ctx;
  ctx.rating = record.rating;
  ctx.name = clean_text(record.business_name, lowercase);
  ctx.city = clean_text(record.city, lowercase);
  ctx.state = clean_text(record.state, lowercase);
  for (const auto& tag : record.tags) {
    std::string cleaned = clean_text(tag, lowercase);
    if (!cleaned.empty()) ctx.tags.push_back(std::move(cleaned));
  }
  return ctx;
}

RawRecord parse_record(const std::string& json_line, const FieldMap& fields,
                       const std::string& where) {
  json obj;
  try {
    obj = json::parse(json_line);
  } catch (const json::parse_error& e) {
    std::string msg;
    if (!where.empty()) msg = where + ": ";
    throw IngestError(msg + "invalid JSON: " + e.what());
  }
  if (!obj.is_object()) {
    std::string msg;
    if (!where.empty()) msg = where + ": ";
    throw IngestError(msg + "record is not a JSON object");
  }
  RawRecord rec;
  rec.review_text = get_string(obj, fields.review_text, where);
  rec.rating = get_rating(obj, fields.rating, where);
  rec.business_name = get_string(obj, fields.business_name, where);
  rec.city = get_string(obj, fields.city, where);
  rec.state = get_string(obj, fields.state, where);
  rec.tags = get_tags(obj, fields.tags, where);
  return rec;
}

std::vector<ReviewPair> make_pairs(const std::vector<RawRecord>& records,
                                   const IngestOptions& options, IngestStats* stats) {
  std::vector<std::string> keep;
  for (const auto& raw : options.keep_tags) {
    std::string cleaned = clean_text(raw, options.lowercase);
    if (!cleaned.empty()) keep.push_back(std::move(cleaned));
  }
  std::vector<ReviewPair> pairs;
  pairs.reserve(records.size());
  IngestStats local;
  for (const auto& rec : records) {
    ++local.parsed;
    Context ctx = build_context(rec, options.lowercase);
    if (!keep.empty()) {
      bool hit = std::any_of(ctx.tags.begin(), ctx.tags.end(), [&](const std::string& tag) {
        return std::find(keep.begin(), keep.end(), tag) != keep.end();
      });
      if (!hit) {
        ++local.dropped_by_tag;
        continue;
      }
    }
    TokenSequence review = tokenize(clean_text(rec.review_text, options.lowercase));
    if (review.empty()) {
      ++local.dropped_empty;
      continue;
    }
    ++local.kept;
    pairs.push_back({std::move(ctx), std::move(review)});
  }
  if (stats) *stats = local;
  return pairs;
}

std::vector<ReviewPair> ingest_jsonl(const std::filesystem::path& path,
                                     const IngestOptions& options, IngestStats* stats) {
  auto lines = read_lines(path);
  std::vector<RawRecord> records;
  records.reserve(lines.size());
  for (size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    records.push_back(parse_record(lines[i], options.fields, "line " + std::to_string(i + 1)));
  }
  return make_pairs(records, options, stats);
}

ParallelCorpus split_corpus(std::vector<ReviewPair> pairs, std::size_t n_val, std::size_t n_test,
                            std::uint64_t seed) {
  if (n_val + n_test >= pairs.size())
    throw std::invalid_argument("split sizes leave no training data: " + std::to_string(n_val) +
                                "+" + std::to_string(n_test) + " of " +
                                std::to_string(pairs.size()));
  Rng rng(seed);
  shuffle(pairs, rng);
  ParallelCorpus corpus;
  auto it = pairs.begin();
  corpus.val.assign(std::make_move_iterator(it), std::make_move_iterator(it + n_val));
  it += n_val;
  corpus.test.assign(std::make_move_iterator(it), std::make_move_iterator(it + n_test));
  it += n_test;
  corpus.train.assign(std::make_move_iterator(it), std::make_move_iterator(pairs.end()));
  return corpus;
}

void write_pair_files(const std::filesystem::path& context_path,
                      const std::filesystem::path& review_path,
                      const std::vector<ReviewPair>& pairs) {
  std::vector<std::string> contexts, reviews;
  contexts.reserve(pairs.size());
  reviews.reserve(pairs.size());
  for (const auto& pair : pairs) {
    contexts.push_back(pair.context.text());
    reviews.push_back(detokenize(pair.review));
  }
  write_lines(context_path, contexts);
  write_lines(review_path, reviews);
}

std::vector<ReviewPair> read_pair_files(const std::filesystem::path& context_path,
                                        const std::filesystem::path& review_path) {
  auto contexts = read_lines(context_path);
  auto reviews = read_lines(review_path);
  if (contexts.size() != reviews.size())
    throw std::runtime_error("aligned pair files differ in length: " + context_path.string() +
                             " has " + std::to_string(contexts.size()) + ", " +
                             review_path.string() + " has " + std::to_string(reviews.size()));
  std::vector<ReviewPair> pairs;
  pairs.reserve(contexts.size());
  for (size_t i = 0; i < contexts.size(); ++i) {
    ReviewPair pair;
    pair.context = parse_context_line(contexts[i]);
    pair.review = tokenize(reviews[i]);
    pairs.push_back(std::move(pair));
  }
  return pairs;
}

Context parse_context_line(const std::string& line) {
  Context context;
  TokenSequence ctx_tokens = tokenize(clean_text(line));
  size_t rest = 0;
  if (!ctx_tokens.empty() && ctx_tokens[0].size() == 1 && ctx_tokens[0][0] >= '1' &&
      ctx_tokens[0][0] <= '5') {
    context.rating = ctx_tokens[0][0] - '0';
    rest = 1;
  }
  context.name = detokenize(std::span<const std::string>(ctx_tokens).subspan(rest));
  return context;
}

}  // namespace reviewforge
