#pragma once

// Document-frequency thresholded vocabularies for title stems and cited
// references, and the per-document id sets derived from them.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "rfa/error.hpp"
#include "rfa/ingest.hpp"
#include "rfa/textpipe.hpp"

namespace rfa {

using TermId = std::uint32_t;

enum class VocabKind { word, reference };

inline std::string_view to_string(VocabKind k) { return k == VocabKind::word ? "word" : "reference"; }

// Term <-> dense id mapping. Ids follow descending document frequency, ties
// broken by term order.
class VocabIndex {
 public:
  VocabIndex() = default;

  // Keeps every term with doc_freq >= threshold.
  static VocabIndex build(VocabKind kind, const std::map<std::string, std::size_t>& doc_freq,
                          std::size_t threshold) {
    std::vector<std::pair<std::string, std::size_t>> kept;
    for (const auto& [term, df] : doc_freq)
      if (df >= threshold) kept.emplace_back(term, df);
    std::stable_sort(kept.begin(), kept.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });

    VocabIndex v;
    v.kind_ = kind;
    v.threshold_ = threshold;
    v.terms_.reserve(kept.size());
    v.doc_freq_.reserve(kept.size());
    for (auto& [term, df] : kept) {
      v.ids_.emplace(term, static_cast<TermId>(v.terms_.size()));
      v.terms_.push_back(std::move(term));
      v.doc_freq_.push_back(df);
    }
    return v;
  }

  VocabKind kind() const { return kind_; }
  std::size_t threshold() const { return threshold_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }

  std::optional<TermId> find(std::string_view term) const {
    auto it = ids_.find(std::string(term));
    if (it == ids_.end()) return std::nullopt;
    return it->second;
  }
  const std::string& term(TermId id) const { return terms_.at(id); }
  std::size_t doc_freq(TermId id) const { return doc_freq_.at(id); }
  const std::vector<std::string>& terms() const { return terms_; }

 private:
  VocabKind kind_ = VocabKind::word;
  std::size_t threshold_ = 1;
  std::vector<std::string> terms_;
  std::unordered_map<std::string, TermId> ids_;
  std::vector<std::size_t> doc_freq_;
};

// Vocabulary sizes at each pipeline stage.
struct VocabStats {
  std::size_t documents = 0;
  std::size_t raw_word_types = 0;         // distinct tokens before stopword removal
  std::size_t unstemmed_word_types = 0;   // distinct tokens after stopword removal
  std::size_t stemmed_word_types = 0;
  std::size_t retained_words = 0;
  std::size_t reference_types = 0;        // distinct normalized references
  std::size_t retained_references = 0;
};

struct Vocabularies {
  VocabIndex words;
  VocabIndex refs;
  VocabStats stats;
};

inline constexpr std::size_t kDefaultWordMinDf = 10;
inline constexpr std::size_t kDefaultRefMinDf = 10;
// Journal-set protocol: references cited by at least four documents.
inline constexpr std::size_t kJournalRefMinDf = 4;

/// Distinct normalized reference keys of one document, sorted; empty keys dropped.
inline std::vector<std::string> reference_set(const DocumentRecord& rec) {
  std::vector<std::string> keys;
  keys.reserve(rec.cited_refs.size());
  for (const auto& raw : rec.cited_refs) {
    auto key = normalize_reference(raw);
    if (!key.empty()) keys.push_back(std::move(key));
  }
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
  return keys;
}

/// Count document frequencies over the whole corpus and keep terms reaching
/// the thresholds. Throws DataError if either vocabulary ends up empty.
inline Vocabularies build_vocab(const Corpus& corpus, std::size_t word_min_df, std::size_t ref_min_df,
                                const StopwordList& stop = StopwordList::defaults()) {
  if (word_min_df < 1 || ref_min_df < 1) throw ConfigError("document-frequency thresholds must be >= 1");
  if (corpus.empty()) throw DataError("empty corpus");

  std::map<std::string, std::size_t> word_df;
  std::map<std::string, std::size_t> ref_df;
  std::unordered_map<std::string, char> raw_types;  // 1 = stopword
  std::unordered_map<std::string, char> unstemmed_types;

  for (const auto& rec : corpus.records()) {
    std::vector<std::string> stems;
    for (auto& tok : tokenize(rec.title)) {
      const bool is_stop = stop.contains(tok);
      raw_types.emplace(tok, is_stop);
      if (is_stop) continue;
      unstemmed_types.emplace(tok, 0);
      stems.push_back(porter_stem(tok));
    }
    for (auto& s : make_token_set(std::move(stems)).stems) ++word_df[s];
    for (auto& r : reference_set(rec)) ++ref_df[r];
  }

  Vocabularies v{VocabIndex::build(VocabKind::word, word_df, word_min_df),
                 VocabIndex::build(VocabKind::reference, ref_df, ref_min_df),
                 {}};
  v.stats.documents = corpus.size();
  v.stats.raw_word_types = raw_types.size();
  v.stats.unstemmed_word_types = unstemmed_types.size();
  v.stats.stemmed_word_types = word_df.size();
  v.stats.retained_words = v.words.size();
  v.stats.reference_types = ref_df.size();
  v.stats.retained_references = v.refs.size();

  if (v.words.empty() || v.refs.empty()) {
    throw DataError("no terms survive thresholds (words: " + std::to_string(v.words.size()) + " of " +
                    std::to_string(word_df.size()) + " at df >= " + std::to_string(word_min_df) +
                    ", references: " + std::to_string(v.refs.size()) + " of " + std::to_string(ref_df.size()) +
                    " at df >= " + std::to_string(ref_min_df) + ")");
  }
  return v;
}

/// `kind\tterm\tid\tdoc_freq`, words first, each in id order.
inline void write_vocab_tsv(std::ostream& out, const VocabIndex& words, const VocabIndex& refs) {
  out << "kind\tterm\tid\tdoc_freq\n";
  for (const VocabIndex* v : {&words, &refs}) {
    for (TermId id = 0; id < v->size(); ++id)
      out << to_string(v->kind()) << '\t' << v->term(id) << '\t' << id << '\t' << v->doc_freq(id) << '\n';
  }
}

// One document reduced to the retained vocabulary.
struct IndexedDocument {
  int year = 0;
  std::vector<TermId> words;  // sorted, distinct
  std::vector<TermId> refs;   // sorted, distinct
};

inline IndexedDocument index_document(const DocumentRecord& rec, const VocabIndex& words, const VocabIndex& refs,
                                      const StopwordList& stop = StopwordList::defaults()) {
  IndexedDocument doc;
  doc.year = rec.year;
  for (const auto& s : title_to_tokenset(rec.title, stop).stems)
    if (auto id = words.find(s)) doc.words.push_back(*id);
  for (const auto& r : reference_set(rec))
    if (auto id = refs.find(r)) doc.refs.push_back(*id);
  std::sort(doc.words.begin(), doc.words.end());
  std::sort(doc.refs.begin(), doc.refs.end());
  return doc;
}

inline std::vector<IndexedDocument> index_corpus(const Corpus& corpus, const VocabIndex& words, const VocabIndex& refs,
                                                 const StopwordList& stop = StopwordList::defaults()) {
  std::vector<IndexedDocument> docs;
  docs.reserve(corpus.size());
  for (const auto& rec : corpus.records()) docs.push_back(index_document(rec, words, refs, stop));
  return docs;
}

}  // namespace rfa
