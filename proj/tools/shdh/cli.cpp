// Copyright 2026 The SHDH Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.hpp"

#include <fmt/format.h>

#include <CLI11.hpp>
#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <json.hpp>
#include <optional>
#include <string_view>
#include <thread>

#include "shdh/error.hpp"
#include "shdh/io.hpp"
#include "shdh/metrics.hpp"
#include "shdh/synthetic.hpp"
#include "shdh/train.hpp"

#ifndef SHDH_VERSION
#define SHDH_VERSION "0.0.0"
#endif

namespace shdh::cli {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

// ---------------------------------------------------------------------------
// Shared plumbing

std::string number(double v) { return fmt::format("{}", v); }

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

[[noreturn]] void invalid(const std::string& message) { throw Error(ErrorCode::kInvalidArgument, message); }

fs::path sibling(const std::string& path, std::string_view suffix) { return fs::path(path + std::string(suffix)); }

void write_json(const fs::path& path, const json& doc) { write_file_atomic(path, doc.dump(2) + "\n"); }

json manifest(std::string_view command, json config, json inputs, json outputs) {
  return json{{"command", command},
              {"tool_version", SHDH_VERSION},
              {"format_version", kFormatVersion},
              {"config", std::move(config)},
              {"inputs", std::move(inputs)},
              {"outputs", std::move(outputs)}};
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw Error(ErrorCode::kIoError, "cannot create directory '" + dir.string() + "'");
}

Taxonomy load_taxonomy(const std::string& path) { return parse_taxonomy(read_file(path)); }
FeatureMatrix load_features(const std::string& path) { return decode_features(read_file(path)); }
CodeDatabase load_codes(const std::string& path) { return decode_codes(read_file(path)); }
HashModel load_model(const std::string& path) { return decode_model(read_file(path)); }

// First field of every record of an id-tab-label file.
std::vector<std::string> load_ids(const std::string& path) {
  const std::string text = read_file(path);
  std::vector<std::string> ids;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string::npos) end = text.size();
    std::string_view line(text.data() + start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    const auto first = line.find_first_not_of(" \t");
    if (first != std::string_view::npos && line[first] != '#') ids.emplace_back(line.substr(0, line.find('\t')));
    start = end + 1;
  }
  return ids;
}

void require_count(std::size_t have, std::size_t want, const std::string& what) {
  if (have != want) {
    throw Error(ErrorCode::kShapeMismatch, what + " lists " + std::to_string(have) + " items but " +
                                               std::to_string(want) + " are required");
  }
}

void require_same_layout(const SegmentLayout& a, const SegmentLayout& b, const std::string& what) {
  if (!(a == b)) {
    throw Error(ErrorCode::kLayoutMismatch,
                what + " uses " + std::to_string(a.bits()) + " bits/K=" + std::to_string(a.height()) + "/" +
                    std::string(scheme_name(a.scheme())) + " but the database uses " + std::to_string(b.bits()) +
                    " bits/K=" + std::to_string(b.height()) + "/" + std::string(scheme_name(b.scheme())));
  }
}

std::vector<std::size_t> parse_hidden(const std::string& text) {
  std::vector<std::size_t> widths;
  if (text == "none") return widths;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t end = std::min(text.find(',', start), text.size());
    std::size_t w = 0;
    const char* first = text.data() + start;
    const char* last = text.data() + end;
    const auto [ptr, ec] = std::from_chars(first, last, w);
    if (ec != std::errc() || ptr != last || w == 0) {
      invalid("--hidden expects positive widths separated by commas, or 'none'; got '" + text + "'");
    }
    widths.push_back(w);
    start = end + 1;
  }
  return widths;
}

std::string hidden_text(const std::vector<std::size_t>& widths) {
  return widths.empty() ? std::string("none") : fmt::format("{}", fmt::join(widths, ","));
}

// --threads wins, then SHDH_THREADS, then the hardware concurrency.
unsigned resolve_threads(unsigned flag) {
  if (flag > 0) return flag;
  if (const char* env = std::getenv("SHDH_THREADS"); env != nullptr && *env != '\0') {
    unsigned v = 0;
    const std::string_view s(env);
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || v == 0) {
      invalid("SHDH_THREADS must be a positive integer, got '" + std::string(s) + "'");
    }
    return v;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

// Runs fn(i) for i in [0, n) over a fixed pool. Each index writes only its
// own slot, so results do not depend on the thread count. The error of the
// lowest failing index is rethrown.
template <typename Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn) {
  std::vector<std::exception_ptr> errors(n);
  const std::size_t workers = std::min<std::size_t>(threads, n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
        break;
      }
    }
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t i = w; i < n; i += workers) {
          try {
            fn(i);
          } catch (...) {
            errors[i] = std::current_exception();
            return;
          }
        }
      });
    }
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

// ---------------------------------------------------------------------------
// gen

struct GenOptions {
  std::string out_dir;
  SyntheticConfig config;
};

void add_gen(CLI::App& app, GenOptions& o) {
  auto* c = app.add_subcommand("gen", "Write a seeded synthetic hierarchical Gaussian mixture");
  c->add_option("--out-dir", o.out_dir, "Directory for taxonomy.tsv, train/query features and labels")->required();
  c->add_option("--superclasses", o.config.superclasses, "Layer-2 classes")->capture_default_str();
  c->add_option("--subclasses", o.config.subclasses, "Layer-3 classes per superclass")->capture_default_str();
  c->add_option("--dim", o.config.dim, "Feature dimension")->capture_default_str();
  c->add_option("--train", o.config.train, "Training (database) items")->capture_default_str();
  c->add_option("--query", o.config.query, "Query items")->capture_default_str();
  c->add_option("--superclass-spread", o.config.superclass_spread, "Std. dev. of superclass means")->capture_default_str();
  c->add_option("--subclass-spread", o.config.subclass_spread, "Std. dev. of subclass means around their superclass")
      ->capture_default_str();
  c->add_option("--noise", o.config.noise, "Std. dev. of items around their subclass mean")->capture_default_str();
  c->add_option("--seed", o.config.seed, "Random seed")->capture_default_str();
}

int cmd_gen(const GenOptions& o, std::ostream& out) {
  const SyntheticData data = make_synthetic(o.config);
  const fs::path dir(o.out_dir);
  ensure_dir(dir);
  write_file_atomic(dir / "taxonomy.tsv", data.taxonomy_text);
  write_file_atomic(dir / "train.shdf", encode_features(data.train_features));
  write_file_atomic(dir / "train_labels.tsv", labels_to_tsv(data.train_labels, data.taxonomy));
  write_file_atomic(dir / "query.shdf", encode_features(data.query_features));
  write_file_atomic(dir / "query_labels.tsv", labels_to_tsv(data.query_labels, data.taxonomy));
  const auto& c = o.config;
  write_json(dir / "manifest.json",
             manifest("gen",
                      {{"superclasses", c.superclasses},
                       {"subclasses", c.subclasses},
                       {"dim", c.dim},
                       {"train", c.train},
                       {"query", c.query},
                       {"superclass_spread", c.superclass_spread},
                       {"subclass_spread", c.subclass_spread},
                       {"noise", c.noise},
                       {"seed", c.seed}},
                      json::object(),
                      {{"taxonomy", "taxonomy.tsv"},
                       {"train_features", "train.shdf"},
                       {"train_labels", "train_labels.tsv"},
                       {"query_features", "query.shdf"},
                       {"query_labels", "query_labels.tsv"}}));
  out << fmt::format("wrote {} train and {} query items ({}-D, K={}) to {}\n", c.train, c.query, c.dim,
                     data.taxonomy.height(), dir.string());
  return 0;
}

// ---------------------------------------------------------------------------
// train

struct TrainOptions {
  std::string features, labels, taxonomy, out, log;
  int bits = 48;
  std::string scheme = "effective";
  std::vector<std::string> hidden{"512", "512"};
  TrainConfig config;
};

void add_train(CLI::App& app, TrainOptions& o) {
  auto* c = app.add_subcommand("train", "Learn a hash model from features, leaf labels and a taxonomy");
  c->add_option("--features", o.features, "Training features (.shdf)")->required();
  c->add_option("--labels", o.labels, "item-id<TAB>leaf-label per feature row")->required();
  c->add_option("--taxonomy", o.taxonomy, "parent<TAB>child edge list")->required();
  c->add_option("--out", o.out, "Model file to write (.shdm)")->required();
  c->add_option("--log", o.log, "Training log CSV (default: <out>.trainlog.csv)");
  c->add_option("--bits", o.bits, "Code length L")->capture_default_str();
  c->add_option("--scheme", o.scheme, "Segment scheme: effective | paper-literal")->capture_default_str();
  c->add_option("--hidden", o.hidden, "Hidden layer widths, comma separated, or 'none'")
      ->delimiter(',')
      ->capture_default_str();
  c->add_option("--iters", o.config.iterations, "SGD iterations T")->capture_default_str();
  c->add_option("--batch", o.config.batch, "Minibatch size")->capture_default_str();
  c->add_option("--alpha", o.config.alpha, "Weight of the trace term")->capture_default_str();
  c->add_option("--eta0", o.config.eta0, "Initial step size")->capture_default_str();
  c->add_option("--decay-every", o.config.decay_every, "Iterations between step-size decays")->capture_default_str();
  c->add_option("--decay", o.config.decay, "Step-size decay factor")->capture_default_str();
  c->add_option("--seed", o.config.seed, "Seed for initialization and batch sampling")->capture_default_str();
}

int cmd_train(const TrainOptions& o, std::ostream& out) {
  const Taxonomy tax = load_taxonomy(o.taxonomy);
  const SegmentLayout layout = segment_layout(o.bits, tax.height(), parse_scheme(o.scheme));
  const std::vector<std::size_t> hidden = parse_hidden(fmt::format("{}", fmt::join(o.hidden, ",")));
  o.config.validate();
  const FeatureMatrix features = load_features(o.features);
  const LabeledItems labels = parse_labels(read_file(o.labels), tax);
  require_count(labels.size(), features.rows(), "labels file '" + o.labels + "'");

  const Architecture arch{features.cols(), hidden, static_cast<std::size_t>(o.bits)};
  const TrainResult result = train(features, labels.labels, tax, arch, layout, o.config);

  const fs::path log_path = o.log.empty() ? sibling(o.out, ".trainlog.csv") : fs::path(o.log);
  write_file_atomic(o.out, encode_model(result.model));
  write_file_atomic(log_path, result.log.to_csv());
  const auto& c = o.config;
  write_json(sibling(o.out, ".manifest.json"),
             manifest("train",
                      {{"bits", o.bits},
                       {"scheme", o.scheme},
                       {"hidden", hidden_text(hidden)},
                       {"iterations", c.iterations},
                       {"batch", c.batch},
                       {"alpha", c.alpha},
                       {"eta0", c.eta0},
                       {"decay_every", c.decay_every},
                       {"decay", c.decay},
                       {"seed", c.seed},
                       {"height", tax.height()},
                       {"input_dim", features.cols()}},
                      {{"features", o.features}, {"labels", o.labels}, {"taxonomy", o.taxonomy}},
                      {{"model", o.out}, {"log", log_path.string()}}));
  const auto& first = result.log.records.front().loss;
  const auto& last = result.log.records.back().loss;
  out << fmt::format("trained {} iterations: J {} -> {}; model written to {}\n", c.iterations, number(first.total),
                     number(last.total), o.out);
  return 0;
}

// ---------------------------------------------------------------------------
// encode

struct EncodeOptions {
  std::string model, features, out;
};

void add_encode(CLI::App& app, EncodeOptions& o) {
  auto* c = app.add_subcommand("encode", "Encode feature rows into a packed code database");
  c->add_option("--model", o.model, "Model file (.shdm)")->required();
  c->add_option("--features", o.features, "Features to encode (.shdf)")->required();
  c->add_option("--out", o.out, "Code database to write (.shdc)")->required();
}

int cmd_encode(const EncodeOptions& o, std::ostream& out) {
  const HashModel model = load_model(o.model);
  const FeatureMatrix features = load_features(o.features);
  const CodeDatabase db = encode_batch(model, features);
  write_file_atomic(o.out, encode_codes(db));
  const auto& l = model.layout();
  write_json(sibling(o.out, ".manifest.json"),
             manifest("encode", {{"bits", l.bits()}, {"height", l.height()}, {"scheme", scheme_name(l.scheme())}},
                      {{"model", o.model}, {"features", o.features}}, {{"codes", o.out}}));
  out << fmt::format("encoded {} items into {}\n", db.size(), o.out);
  return 0;
}

// ---------------------------------------------------------------------------
// query

struct QueryOptions {
  std::string codes, ids, model, features, out = "-";
  std::vector<std::string> query_ids;
  std::vector<std::size_t> rows;
  std::size_t n = 10;
  bool oracle = false;
  unsigned threads = 0;
};

void add_query(CLI::App& app, QueryOptions& o) {
  auto* c = app.add_subcommand("query", "Rank database items for stored items or new feature rows");
  c->add_option("--codes", o.codes, "Code database (.shdc)")->required();
  c->add_option("--ids", o.ids, "Item ids of the database, first field per line (e.g. its labels file)");
  c->add_option("--query-id", o.query_ids, "Database item id to use as a query (repeatable; needs --ids)");
  c->add_option("--features", o.features, "Query feature rows (.shdf); needs --model");
  c->add_option("--model", o.model, "Model used to encode --features");
  c->add_option("--rows", o.rows, "Rows of --features to query (default: all)")->delimiter(',');
  c->add_option("-n,--top", o.n, "Results per query")->capture_default_str();
  c->add_flag("--oracle", o.oracle, "Use the scalar brute-force scan instead of lookup tables");
  c->add_option("--out", o.out, "Output TSV, '-' for stdout")->capture_default_str();
  c->add_option("--threads", o.threads, "Worker threads (default: SHDH_THREADS or hardware)");
}

struct NamedQuery {
  std::string name;
  std::vector<std::uint8_t> code;
};

int cmd_query(const QueryOptions& o, std::ostream& out) {
  const CodeDatabase db = load_codes(o.codes);
  if (db.empty()) throw Error(ErrorCode::kEmptyDatabase, "database '" + o.codes + "' holds no codes");
  std::vector<std::string> ids;
  if (!o.ids.empty()) {
    ids = load_ids(o.ids);
    require_count(ids.size(), db.size(), "id file '" + o.ids + "'");
  }

  std::vector<NamedQuery> queries;
  if (!o.query_ids.empty()) {
    if (ids.empty()) invalid("--query-id needs --ids to resolve item ids");
    for (const auto& qid : o.query_ids) {
      const auto it = std::find(ids.begin(), ids.end(), qid);
      if (it == ids.end()) throw Error(ErrorCode::kUnknownQueryId, "no database item with id '" + qid + "'");
      const auto code = db.code(static_cast<std::size_t>(it - ids.begin()));
      queries.push_back({qid, {code.begin(), code.end()}});
    }
  }
  if (!o.features.empty()) {
    if (o.model.empty()) invalid("--features needs --model to encode the query rows");
    const HashModel model = load_model(o.model);
    require_same_layout(model.layout(), db.layout(), "model '" + o.model + "'");
    const FeatureMatrix features = load_features(o.features);
    std::vector<std::size_t> rows = o.rows;
    if (rows.empty()) {
      rows.resize(features.rows());
      for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
    }
    for (const std::size_t r : rows) {
      if (r >= features.rows()) invalid("row " + std::to_string(r) + " outside the " + std::to_string(features.rows()) + "-row feature file");
    }
    const CodeDatabase encoded = encode_batch(model, features.select(rows));
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto code = encoded.code(i);
      queries.push_back({"row" + std::to_string(rows[i]), {code.begin(), code.end()}});
    }
  } else if (!o.rows.empty() || !o.model.empty()) {
    invalid("--rows and --model apply only together with --features");
  }
  if (queries.empty()) invalid("no queries: give --query-id or --features");

  std::vector<SearchResult> results(queries.size());
  parallel_for(queries.size(), resolve_threads(o.threads), [&](std::size_t i) {
    results[i] = o.oracle ? brute_force_topn(db, queries[i].code, o.n) : search_topn(db, queries[i].code, o.n);
  });

  std::string tsv = "query\trank\titem\tdistance\tinner_product\n";
  for (std::size_t q = 0; q < queries.size(); ++q) {
    for (std::size_t r = 0; r < results[q].size(); ++r) {
      const SearchHit& h = results[q][r];
      const std::string item = ids.empty() ? std::to_string(h.id) : ids[h.position];
      tsv += fmt::format("{}\t{}\t{}\t{}\t{}\n", queries[q].name, r + 1, item, number(h.distance), number(h.inner_product));
    }
  }
  if (o.out == "-") {
    out << tsv;
  } else {
    write_file_atomic(o.out, tsv);
    write_json(sibling(o.out, ".manifest.json"),
               manifest("query",
                        {{"top", o.n}, {"oracle", o.oracle}, {"query_ids", o.query_ids}, {"rows", o.rows},
                         {"threads", resolve_threads(o.threads)}},
                        {{"codes", o.codes}, {"ids", o.ids}, {"model", o.model}, {"features", o.features}},
                        {{"results", o.out}}));
  }
  return 0;
}

// ---------------------------------------------------------------------------
// eval

struct EvalOptions {
  std::string codes, labels, taxonomy, query_codes, query_features, query_labels, model, out_dir;
  std::string relevance = "shared-layers";
  std::vector<std::size_t> ns;
  std::size_t curve_points = 20;
  std::size_t radius_steps = 20;
  bool oracle = false;
  unsigned threads = 0;
};

void add_eval(CLI::App& app, EvalOptions& o) {
  auto* c = app.add_subcommand("eval", "Rank the database for every query and report hierarchy-aware metrics");
  c->add_option("--codes", o.codes, "Database codes (.shdc)")->required();
  c->add_option("--labels", o.labels, "Database item labels, one per code")->required();
  c->add_option("--taxonomy", o.taxonomy, "parent<TAB>child edge list")->required();
  c->add_option("--query-codes", o.query_codes, "Query codes (.shdc); needs --query-labels");
  c->add_option("--query-features", o.query_features, "Query features (.shdf); needs --model and --query-labels");
  c->add_option("--model", o.model, "Model used to encode --query-features");
  c->add_option("--query-labels", o.query_labels, "Query item labels");
  c->add_option("--out-dir", o.out_dir, "Directory for metrics.csv, summary.json and curve CSVs")->required();
  c->add_option("--relevance", o.relevance, "shared-layers | hier-similarity")->capture_default_str();
  c->add_option("--n", o.ns, "Cutoffs for the metrics table (default: 100, capped at the database size)")
      ->delimiter(',');
  c->add_option("--curve-points", o.curve_points, "Samples on the weighted-recall-vs-n curve")->capture_default_str();
  c->add_option("--radius-steps", o.radius_steps, "Intervals on the weighted-recall-vs-radius curve")
      ->capture_default_str();
  c->add_flag("--oracle", o.oracle, "Use the scalar brute-force scan instead of lookup tables");
  c->add_option("--threads", o.threads, "Worker threads (default: SHDH_THREADS or hardware)");
}

std::vector<std::size_t> curve_ns(std::size_t total, std::size_t points) {
  std::vector<std::size_t> ns;
  for (std::size_t j = 1; j <= points; ++j) {
    const std::size_t n = (j * total + points - 1) / points;
    if (n >= 1 && (ns.empty() || ns.back() != n)) ns.push_back(n);
  }
  return ns;
}

int cmd_eval(const EvalOptions& o, std::ostream& out) {
  const RelevanceMode mode = parse_relevance_mode(o.relevance);
  if (o.curve_points == 0) invalid("--curve-points must be >= 1");
  if (o.radius_steps == 0) invalid("--radius-steps must be >= 1");
  const Taxonomy tax = load_taxonomy(o.taxonomy);
  const CodeDatabase db = load_codes(o.codes);
  if (db.empty()) throw Error(ErrorCode::kEmptyDatabase, "database '" + o.codes + "' holds no codes");
  const LabeledItems db_items = parse_labels(read_file(o.labels), tax);
  require_count(db_items.size(), db.size(), "labels file '" + o.labels + "'");

  std::vector<std::string> query_ids;
  std::vector<NodeId> query_labels;
  std::optional<CodeDatabase> encoded;
  const CodeDatabase* queries = &db;
  if (!o.query_codes.empty() && !o.query_features.empty()) invalid("give either --query-codes or --query-features");
  if (!o.query_codes.empty() || !o.query_features.empty()) {
    if (o.query_labels.empty()) invalid("query codes or features need --query-labels");
    if (!o.query_codes.empty()) {
      encoded = load_codes(o.query_codes);
      require_same_layout(encoded->layout(), db.layout(), "query codes '" + o.query_codes + "'");
    } else {
      if (o.model.empty()) invalid("--query-features needs --model");
      const HashModel model = load_model(o.model);
      require_same_layout(model.layout(), db.layout(), "model '" + o.model + "'");
      encoded = encode_batch(model, load_features(o.query_features));
    }
    const LabeledItems q = parse_labels(read_file(o.query_labels), tax);
    require_count(q.size(), encoded->size(), "query labels file '" + o.query_labels + "'");
    query_ids = q.ids;
    query_labels = q.labels;
    queries = &*encoded;
  } else {
    if (!o.query_labels.empty() || !o.model.empty()) invalid("--query-labels and --model need a query source");
    // Self-retrieval: every database item queries the whole database.
    query_ids = db_items.ids;
    query_labels = db_items.labels;
  }

  std::vector<std::size_t> ns = o.ns;
  if (ns.empty()) ns.push_back(std::min<std::size_t>(100, db.size()));
  const unsigned threads = resolve_threads(o.threads);

  std::vector<QueryRanking> rankings(queries->size());
  parallel_for(queries->size(), threads, [&](std::size_t i) {
    const auto code = queries->code(i);
    const SearchResult hits = o.oracle ? brute_force_topn(db, code, db.size()) : search_topn(db, code, db.size());
    rankings[i] = to_ranking(query_ids[i], query_labels[i], hits);
  });

  const MetricReport report = eval_queries(rankings, db_items.labels, tax, mode, ns);
  const std::vector<std::size_t> curve_n = curve_ns(db.size(), o.curve_points);
  const auto by_rank = weighted_recall_by_rank(rankings, db_items.labels, tax, mode, curve_n);
  std::vector<double> radii;
  for (std::size_t j = 0; j <= o.radius_steps; ++j) {
    radii.push_back(db.layout().max_distance() * static_cast<double>(j) / static_cast<double>(o.radius_steps));
  }
  const auto by_radius = weighted_recall_by_radius(rankings, db_items.labels, tax, mode, radii);

  const fs::path dir(o.out_dir);
  ensure_dir(dir);
  write_file_atomic(dir / "metrics.csv", report.to_csv());
  write_file_atomic(dir / "wr_by_n.csv", curve_to_csv(by_rank, "n", "weighted_recall"));
  write_file_atomic(dir / "wr_by_radius.csv", curve_to_csv(by_radius, "radius", "weighted_recall"));

  json metrics = json::array();
  for (std::size_t j = 0; j < ns.size(); ++j) {
    const MetricValues& m = report.mean[j];
    metrics.push_back({{"n", ns[j]},
                       {"ACG", number_or_null(m.acg)},
                       {"DCG", number_or_null(m.dcg)},
                       {"NDCG", number_or_null(m.ndcg)},
                       {"WR", m.weighted_recall ? number_or_null(*m.weighted_recall) : json(nullptr)}});
  }
  write_json(dir / "summary.json", {{"relevance", relevance_mode_name(mode)},
                                    {"dcg_formula", kDcgFormula},
                                    {"database_size", db.size()},
                                    {"queries", queries->size()},
                                    {"weighted_recall_excluded", report.weighted_recall_excluded},
                                    {"mean", metrics}});
  write_json(dir / "manifest.json",
             manifest("eval",
                      {{"relevance", relevance_mode_name(mode)},
                       {"n", ns},
                       {"curve_points", o.curve_points},
                       {"radius_steps", o.radius_steps},
                       {"oracle", o.oracle},
                       {"threads", threads},
                       {"self_retrieval", o.query_codes.empty() && o.query_features.empty()}},
                      {{"codes", o.codes},
                       {"labels", o.labels},
                       {"taxonomy", o.taxonomy},
                       {"query_codes", o.query_codes},
                       {"query_features", o.query_features},
                       {"query_labels", o.query_labels},
                       {"model", o.model}},
                      {{"metrics", "metrics.csv"},
                       {"summary", "summary.json"},
                       {"wr_by_n", "wr_by_n.csv"},
                       {"wr_by_radius", "wr_by_radius.csv"}}));
  for (std::size_t j = 0; j < ns.size(); ++j) {
    const MetricValues& m = report.mean[j];
    out << fmt::format("n={}: ACG={} DCG={} NDCG={} WR={}\n", ns[j], number(m.acg), number(m.dcg), number(m.ndcg),
                       m.weighted_recall ? number(*m.weighted_recall) : std::string("n/a"));
  }
  if (report.weighted_recall_excluded > 0) {
    out << fmt::format("{} queries with zero total relevance left out of mean WR\n", report.weighted_recall_excluded);
  }
  return 0;
}

// ---------------------------------------------------------------------------
// inspect

struct InspectOptions {
  std::vector<std::string> files;
};

void add_inspect(CLI::App& app, InspectOptions& o) {
  auto* c = app.add_subcommand("inspect", "Print the header of feature, code or model files");
  c->add_option("files", o.files, "Files to inspect")->required();
}

std::string describe_layout(const SegmentLayout& l) {
  std::string s = fmt::format("bits: {}\nheight: {}\nscheme: {}\ncode_bytes: {}\nsegments:", l.bits(), l.height(),
                              scheme_name(l.scheme()), l.code_bytes());
  for (const Segment& seg : l.segments()) {
    s += fmt::format(" layer{}={}bits@{}", seg.layer, seg.width, number(seg.weight));
  }
  return s + "\n";
}

int cmd_inspect(const InspectOptions& o, std::ostream& out) {
  for (const auto& path : o.files) {
    const std::string bytes = read_file(path);
    const std::string_view magic = file_magic(bytes);
    std::string text = fmt::format("file: {}\n", path);
    if (magic == "SHDF") {
      const FeatureMatrix f = decode_features(bytes);
      text += fmt::format("format: SHDF features\nversion: {}\nrows: {}\ndim: {}\n", kFormatVersion, f.rows(), f.cols());
    } else if (magic == "SHDC") {
      const CodeDatabase db = decode_codes(bytes);
      text += fmt::format("format: SHDC codes\nversion: {}\nitems: {}\n", kFormatVersion, db.size());
      text += describe_layout(db.layout());
    } else if (magic == "SHDM") {
      const HashModel m = decode_model(bytes);
      text += fmt::format("format: SHDM model\nversion: {}\nlayers:", kFormatVersion);
      for (const auto& l : m.layers()) text += fmt::format(" {}x{}", l.weight.rows(), l.weight.cols());
      text += fmt::format("\nparameters: {}\n", m.parameter_count());
      text += describe_layout(m.layout());
    } else {
      throw Error(ErrorCode::kBadFormat, "'" + path + "' is not a feature, code or model file");
    }
    out << text;
  }
  return 0;
}

// ---------------------------------------------------------------------------

// CLI11 reads the config file through the top-level app; accept --config
// anywhere on the command line by moving it to the front.
std::vector<std::string> hoist_config(const std::vector<std::string>& args) {
  std::vector<std::string> front, rest;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      front.push_back(args[i]);
      front.push_back(args[++i]);
    } else if (args[i].rfind("--config=", 0) == 0) {
      front.push_back(args[i]);
    } else {
      rest.push_back(args[i]);
    }
  }
  front.insert(front.end(), rest.begin(), rest.end());
  return front;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app("Supervised hierarchical hashing: train, encode, query and evaluate segmented binary codes", "shdh");
  app.require_subcommand(1);
  app.set_version_flag("--version", SHDH_VERSION);
  app.set_config("--config", "", "INI file of key=value lines under a [command] section; flags override it");
  app.allow_config_extras(CLI::config_extras_mode::error);

  GenOptions gen;
  TrainOptions train_opts;
  EncodeOptions encode;
  QueryOptions query;
  EvalOptions eval;
  InspectOptions inspect;
  add_gen(app, gen);
  add_train(app, train_opts);
  add_encode(app, encode);
  add_query(app, query);
  add_eval(app, eval);
  add_inspect(app, inspect);

  std::vector<std::string> reversed = hoist_config(args);
  std::reverse(reversed.begin(), reversed.end());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::FileError& e) {
    err << "error: " << error_name(ErrorCode::kFileNotFound) << ": " << e.what() << "\n";
    return exit_code_for(ErrorCode::kFileNotFound);
  } catch (const CLI::ParseError& e) {
    err << "error: " << error_name(ErrorCode::kInvalidArgument) << ": " << e.what() << "\n";
    return exit_code_for(ErrorCode::kInvalidArgument);
  }

  try {
    if (app.got_subcommand("gen")) return cmd_gen(gen, out);
    if (app.got_subcommand("train")) return cmd_train(train_opts, out);
    if (app.got_subcommand("encode")) return cmd_encode(encode, out);
    if (app.got_subcommand("query")) return cmd_query(query, out);
    if (app.got_subcommand("eval")) return cmd_eval(eval, out);
    if (app.got_subcommand("inspect")) return cmd_inspect(inspect, out);
  } catch (const Error& e) {
    err << "error: " << error_name(e.code()) << ": " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "error: INTERNAL: " << e.what() << "\n";
    return 1;
  }
  return 3;
}

}  // namespace shdh::cli
