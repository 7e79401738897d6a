// rfa: research-front activity indicator.
//
//   rfa ingest   --format wos --in a.txt [b.txt ...] --out corpus.tsv
//   rfa analyze  --in corpus.tsv --out series.csv [--word-min-df N] [--ref-min-df N] ...
//   rfa simulate --years 20 --docs-per-year 500 --kappa 0.8 --seed 42 --out synth.tsv
//   rfa vocab dump --in corpus.tsv --out vocab.tsv
//
// Exit codes: 0 success, 1 data error, 2 usage or configuration error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rfa/rfa.hpp"

namespace {

constexpr int kExitData = 1;
constexpr int kExitUsage = 2;

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw rfa::ConfigError("cannot read '" + path + "'");
  return in;
}

// Callers build the whole output in memory first, so a command that fails
// part-way leaves no partial file behind.
void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw rfa::ConfigError("cannot write '" + path + "'");
  out << content;
  if (!out.flush()) throw rfa::DataError("write failed for '" + path + "'");
}

unsigned threads_from_env() {
  const char* v = std::getenv("RFA_THREADS");
  if (v == nullptr || *v == '\0') return 0;
  char* end = nullptr;
  const long n = std::strtol(v, &end, 10);
  if (*end != '\0' || n < 0) throw rfa::ConfigError(std::string("RFA_THREADS must be a non-negative integer, got '") + v + "'");
  return static_cast<unsigned>(n);
}

rfa::Corpus read_corpus(const std::vector<std::string>& paths, const std::string& format, rfa::SkipReport& skipped) {
  rfa::Corpus merged;
  std::size_t ordinal = 1;
  for (const auto& path : paths) {
    auto in = open_input(path);
    rfa::Corpus part;
    try {
      if (format == "wos") {
        rfa::SkipReport local;
        part = rfa::parse_wos(in, local, ordinal);
        skipped.merge(local);
        ordinal += part.size() + local.total();
      } else {
        part = rfa::parse_canonical(in);
      }
    } catch (const rfa::ParseError& e) {
      throw rfa::ParseError(path + ": " + e.what());
    }
    for (auto rec : part.records())
      if (auto why = merged.try_add(std::move(rec))) skipped.add(*why);
  }
  return merged;
}

struct IngestArgs {
  std::string format = "wos";
  std::vector<std::string> inputs;
  std::string out;
};

int cmd_ingest(const IngestArgs& a) {
  rfa::SkipReport skipped;
  const auto corpus = read_corpus(a.inputs, a.format, skipped);
  std::ostringstream os;
  rfa::write_canonical(os, corpus);
  write_file(a.out, os.str());
  std::cerr << skipped.summary() << '\n';
  return 0;
}

struct AnalyzeArgs {
  std::string format = "canonical";
  std::vector<std::string> inputs;
  std::string out;
  std::size_t word_min_df = rfa::kDefaultWordMinDf;
  std::size_t ref_min_df = rfa::kDefaultRefMinDf;
  std::string stopwords;
  std::string count_mode = "pairs";
  std::string dump_vocab;
  std::vector<std::string> dump_tensor;  // YEAR PATH
};

int cmd_analyze(const AnalyzeArgs& a) {
  const auto stop = a.stopwords.empty() ? rfa::StopwordList::defaults() : rfa::StopwordList::from_file(a.stopwords);
  std::optional<int> dump_year;
  if (!a.dump_tensor.empty()) {
    try {
      std::size_t used = 0;
      dump_year = std::stoi(a.dump_tensor[0], &used);
      if (used != a.dump_tensor[0].size()) throw std::invalid_argument("trailing characters");
    } catch (const std::exception&) {
      throw rfa::ConfigError("--dump-tensor-year: invalid year '" + a.dump_tensor[0] + "'");
    }
  }

  rfa::SkipReport skipped;
  const auto corpus = read_corpus(a.inputs, a.format, skipped);
  if (skipped.total() > 0 || a.format == "wos") std::cerr << skipped.summary() << '\n';

  const auto vocab = rfa::build_vocab(corpus, a.word_min_df, a.ref_min_df, stop);
  const auto docs = rfa::index_corpus(corpus, vocab.words, vocab.refs, stop);

  rfa::SeriesOptions opts;
  opts.threads = threads_from_env();
  opts.count_mode = a.count_mode == "binary" ? rfa::CountMode::binary : rfa::CountMode::pairs;
  const auto series = rfa::mu_star_series(docs, vocab.words.size(), vocab.refs.size(), opts);

  std::ostringstream csv;
  rfa::write_series_csv(csv, series);
  write_file(a.out, csv.str());

  if (!a.dump_vocab.empty()) {
    std::ostringstream os;
    rfa::write_vocab_tsv(os, vocab.words, vocab.refs);
    write_file(a.dump_vocab, os.str());
  }
  if (dump_year) {
    const auto window =
        rfa::build_window_tensor(docs, vocab.words.size(), vocab.refs.size(), *dump_year - 1, *dump_year, opts.count_mode);
    std::ostringstream os;
    rfa::write_tensor_tsv(os, window.tensor);
    write_file(a.dump_tensor[1], os.str());
  }

  std::size_t gaps = 0;
  for (const auto& p : series) {
    if (p.gap) {
      ++gaps;
      std::cerr << "warning: " << p.year << ": empty window (gap)\n";
    } else if (p.one_slice_empty) {
      std::cerr << "warning: " << p.year << ": one year slice has no qualifying documents\n";
    }
  }
  const auto& s = vocab.stats;
  std::cout << "years " << series.front().year << "-" << series.back().year << " (" << series.size() << " windows, "
            << gaps << " gaps); words " << s.retained_words << " retained of " << s.stemmed_word_types
            << " stemmed types (" << s.unstemmed_word_types << " after stopwords, " << s.raw_word_types
            << " raw); references " << s.retained_references << " retained of " << s.reference_types
            << "; documents " << s.documents << '\n';
  return 0;
}

struct SimulateArgs {
  rfa::SynthConfig config;
  std::optional<double> kappa_end;
  std::string out;
};

int cmd_simulate(SimulateArgs a) {
  a.config.kappa_end = a.kappa_end;
  const auto corpus = rfa::generate(a.config);
  std::ostringstream os;
  rfa::write_canonical(os, corpus);
  write_file(a.out, os.str());
  return 0;
}

struct VocabArgs {
  std::string format = "canonical";
  std::vector<std::string> inputs;
  std::string out;
  std::size_t word_min_df = rfa::kDefaultWordMinDf;
  std::size_t ref_min_df = rfa::kDefaultRefMinDf;
  std::string stopwords;
};

int cmd_vocab_dump(const VocabArgs& a) {
  const auto stop = a.stopwords.empty() ? rfa::StopwordList::defaults() : rfa::StopwordList::from_file(a.stopwords);
  rfa::SkipReport skipped;
  const auto corpus = read_corpus(a.inputs, a.format, skipped);
  const auto vocab = rfa::build_vocab(corpus, a.word_min_df, a.ref_min_df, stop);
  std::ostringstream os;
  rfa::write_vocab_tsv(os, vocab.words, vocab.refs);
  write_file(a.out, os.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Research-front activity indicator: configurational information of title words, cited "
               "references and publication years"};
  app.require_subcommand(1);
  const std::vector<std::string> formats{"wos", "canonical"};

  IngestArgs ingest;
  auto* ing = app.add_subcommand("ingest", "Parse bibliographic exports into the canonical corpus TSV");
  ing->add_option("--format", ingest.format, "Input format")->check(CLI::IsMember(formats));
  ing->add_option("--in", ingest.inputs, "Input files")->required()->check(CLI::ExistingFile);
  ing->add_option("--out", ingest.out, "Output canonical TSV")->required();

  AnalyzeArgs analyze;
  auto* ana = app.add_subcommand("analyze", "Compute the yearly mu* series");
  ana->add_option("--in", analyze.inputs, "Input corpus files")->required()->check(CLI::ExistingFile);
  ana->add_option("--format", analyze.format, "Input format")->check(CLI::IsMember(formats));
  ana->add_option("--out", analyze.out, "Output series CSV")->required();
  ana->add_option("--word-min-df", analyze.word_min_df, "Minimum titles per retained stem")
      ->check(CLI::PositiveNumber);
  ana->add_option("--ref-min-df", analyze.ref_min_df, "Minimum citing documents per retained reference")
      ->check(CLI::PositiveNumber);
  ana->add_option("--stopwords", analyze.stopwords, "Stopword file replacing the built-in list");
  ana->add_option("--count-mode", analyze.count_mode, "Per-document cell contribution")
      ->check(CLI::IsMember({"pairs", "binary"}));
  ana->add_option("--dump-vocab", analyze.dump_vocab, "Write the vocabularies as TSV");
  ana->add_option("--dump-tensor-year", analyze.dump_tensor, "Write the window tensor ending in YEAR to PATH")
      ->expected(2)
      ->type_name("YEAR PATH");

  SimulateArgs sim;
  auto* simc = app.add_subcommand("simulate", "Generate a synthetic corpus");
  simc->add_option("--years", sim.config.years, "Number of years")->check(CLI::PositiveNumber);
  simc->add_option("--first-year", sim.config.first_year, "First calendar year")->check(CLI::Range(1900, 2100));
  simc->add_option("--docs-per-year", sim.config.docs_per_year, "Documents in the first year")
      ->check(CLI::PositiveNumber);
  simc->add_option("--growth", sim.config.growth, "Multiplicative growth of documents per year")
      ->check(CLI::PositiveNumber);
  simc->add_option("--kappa", sim.config.kappa, "Coupling strength")->check(CLI::Range(0.0, 1.0));
  simc->add_option("--kappa-end", sim.kappa_end, "Coupling strength in the last year (linear ramp)")
      ->check(CLI::Range(0.0, 1.0));
  simc->add_option("--drift", sim.config.drift, "Fraction of topic pool positions reshuffled per year")
      ->check(CLI::Range(0.0, 1.0));
  simc->add_option("--words", sim.config.n_words, "Latent word vocabulary size")->check(CLI::PositiveNumber);
  simc->add_option("--refs", sim.config.n_refs, "Latent reference pool size")->check(CLI::PositiveNumber);
  simc->add_option("--topics", sim.config.n_topics, "Latent topics")->check(CLI::PositiveNumber);
  simc->add_option("--words-per-doc", sim.config.words_per_doc, "Title words per document")
      ->check(CLI::PositiveNumber);
  simc->add_option("--refs-per-doc", sim.config.refs_per_doc, "References per document")
      ->check(CLI::PositiveNumber);
  simc->add_option("--seed", sim.config.seed, "Random seed");
  simc->add_option("--out", sim.out, "Output canonical TSV")->required();

  VocabArgs vocab;
  auto* voc = app.add_subcommand("vocab", "Vocabulary inspection");
  voc->require_subcommand(1);
  auto* dump = voc->add_subcommand("dump", "Write thresholded vocabularies as TSV");
  dump->add_option("--in", vocab.inputs, "Input corpus files")->required()->check(CLI::ExistingFile);
  dump->add_option("--format", vocab.format, "Input format")->check(CLI::IsMember(formats));
  dump->add_option("--out", vocab.out, "Output TSV")->required();
  dump->add_option("--word-min-df", vocab.word_min_df, "Minimum titles per retained stem")
      ->check(CLI::PositiveNumber);
  dump->add_option("--ref-min-df", vocab.ref_min_df, "Minimum citing documents per retained reference")
      ->check(CLI::PositiveNumber);
  dump->add_option("--stopwords", vocab.stopwords, "Stopword file replacing the built-in list");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*ing) return cmd_ingest(ingest);
    if (*ana) return cmd_analyze(analyze);
    if (*simc) return cmd_simulate(sim);
    if (*dump) return cmd_vocab_dump(vocab);
  } catch (const rfa::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}
