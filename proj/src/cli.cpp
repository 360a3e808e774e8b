#include "astroturf/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iostream>
#include <regex>

#include "astroturf/analytics.hpp"
#include "astroturf/csv.hpp"
#include "astroturf/error.hpp"
#include "astroturf/eval.hpp"
#include "astroturf/features.hpp"
#include "astroturf/ingest.hpp"
#include "astroturf/manifest.hpp"
#include "astroturf/models.hpp"
#include "astroturf/parallel.hpp"
#include "astroturf/store.hpp"
#include "astroturf/svg.hpp"
#include "astroturf/synth.hpp"
#include "astroturf/trolls.hpp"

namespace astroturf::cli {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw DataError("cannot create " + dir.string() + ": " + ec.message());
}

fs::path parent_dir(const fs::path& file) {
    return file.has_parent_path() ? file.parent_path() : fs::path(".");
}

void write_text(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write " + path.string());
    out << content;
    if (!out) throw DataError("write failed: " + path.string());
}

// Missing a class is a property of the input files, not of the call.
void require_both_classes(const std::vector<int>& y, const std::string& source) {
    const auto bots = std::count(y.begin(), y.end(), 1);
    if (bots == 0 || bots == static_cast<std::ptrdiff_t>(y.size())) {
        throw DataError(source + ": labeled accounts must include both bots and humans (" + std::to_string(bots) +
                        " bots among " + std::to_string(y.size()) + ")");
    }
}

void write_table(const fs::path& path, const csv::Row& header, const std::vector<csv::Row>& rows) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write " + path.string());
    csv::write_row(out, header);
    for (const auto& r : rows) csv::write_row(out, r);
    if (!out) throw DataError("write failed: " + path.string());
}

std::string num(double v) { return csv::number(v); }
std::string num(std::uint64_t v) { return std::to_string(v); }

// "1d", "6h", "30m", "90s" or a bare number of seconds.
std::int64_t parse_duration(const std::string& s) {
    static const std::regex re(R"(^\s*(\d+)\s*([smhd]?)\s*$)");
    std::smatch m;
    if (!std::regex_match(s, m, re)) throw InvalidArgument("invalid duration '" + s + "' (expected e.g. 1d, 6h, 30m)");
    const std::int64_t n = std::stoll(m[1].str());
    const std::string unit = m[2].str();
    const std::int64_t mult = unit == "d" ? kSecondsPerDay : unit == "h" ? kSecondsPerHour : unit == "m" ? 60 : 1;
    if (n <= 0) throw InvalidArgument("duration must be positive: '" + s + "'");
    return n * mult;
}

// State shared by every subcommand for manifest bookkeeping.
struct Run {
    std::string command;
    Clock::time_point started = Clock::now();
    RunManifest manifest;

    explicit Run(std::string cmd) : command(std::move(cmd)) { manifest.command = command; }
    void input(const std::string& path) { manifest.input_digests[path] = sha256_path(path); }
    void config(const std::string& path) {
        if (!path.empty()) manifest.config_digest = sha256_path(path);
    }
    void finish(const fs::path& dir) {
        manifest.wall_time_seconds = std::chrono::duration<double>(Clock::now() - started).count();
        write_manifest(dir, manifest);
    }
};

void ranked_outputs(const fs::path& dir, const std::string& stem, const std::string& title, const std::string& key,
                    const analytics::RankedCounts& ranked) {
    std::vector<csv::Row> rows;
    std::vector<std::pair<std::string, double>> bars;
    std::size_t rank = 0;
    for (const auto& [k, c] : ranked.entries) {
        rows.push_back({std::to_string(++rank), k, std::to_string(c)});
        bars.emplace_back(k, static_cast<double>(c));
    }
    write_table(dir / (stem + ".csv"), {"rank", key, "count"}, rows);
    write_text(dir / (stem + ".svg"), svg::bar_chart(title, bars));
}

std::vector<csv::Row> roc_rows(const eval::RocResult& roc) {
    std::vector<csv::Row> rows;
    for (const auto& p : roc.points) rows.push_back({num(p.fpr), num(p.tpr)});
    return rows;
}

// ---- subcommands ---------------------------------------------------------

struct SynthArgs {
    std::string config, out;
    std::optional<std::uint64_t> seed;
};

void cmd_synth(const SynthArgs& a, std::ostream& out) {
    Run run("synth");
    auto cfg = a.config.empty() ? synth::SynthConfig{} : synth::SynthConfig::load(a.config);
    if (a.seed) cfg.seed = *a.seed;
    run.config(a.config);
    run.manifest.seed = cfg.seed;
    const auto corpus = synth::generate(cfg);
    synth::write(corpus, a.out);
    out << "synth: " << corpus.labels.size() << " accounts, " << corpus.tweets.size() << " tweets -> " << a.out << "\n";
    run.finish(a.out);
}

struct IngestArgs {
    std::string config, store;
    std::vector<std::string> inputs;
};

void cmd_ingest(const IngestArgs& a, std::ostream& out) {
    Run run("ingest");
    const auto cfg = a.config.empty() ? CorpusConfig::election_default() : CorpusConfig::load(a.config);
    run.config(a.config);
    std::vector<fs::path> files;
    for (const auto& pattern : a.inputs) {
        for (auto& p : expand_glob(pattern)) files.push_back(std::move(p));
    }
    std::sort(files.begin(), files.end());
    files.erase(std::unique(files.begin(), files.end()), files.end());
    for (const auto& f : files) run.input(f.string());
    auto result = ingest_files(files, cfg);
    const Store store(std::move(result.timelines));
    ensure_dir(a.store);
    store.save(a.store, &result.stats);
    const auto& s = result.stats;
    out << "ingest: " << s.records << " records, " << s.rejected << " rejected, " << s.off_topic << " off-topic, "
        << s.duplicates << " duplicates, " << s.exclusion.excluded << " excluded ("
        << csv::number(s.exclusion.excluded_fraction()) << "); store holds " << store.tweet_count() << " tweets from "
        << store.user_count() << " users\n";
    run.finish(a.store);
}

struct StatsArgs {
    std::string store, out, bin = "1d";
    std::size_t top = 10;
};

void cmd_stats(const StatsArgs& a, std::ostream& out) {
    Run run("stats");
    const auto width = parse_duration(a.bin);
    if (a.top < 1) throw InvalidArgument("--top must be at least 1");
    run.input(a.store);
    const auto store = Store::load(a.store);
    ensure_dir(a.out);

    const auto ts = analytics::tweet_type_timeseries(store, width);
    std::vector<csv::Row> rows;
    std::vector<std::string> xs;
    for (std::size_t i = 0; i < ts.bins; ++i) {
        csv::Row r{format_iso(ts.bin_start(i))};
        std::uint64_t total = 0;
        for (auto type : kTweetTypes) {
            auto it = ts.series.find(type);
            const std::uint64_t c = it == ts.series.end() ? 0 : it->second[i];
            total += c;
            r.push_back(std::to_string(c));
        }
        r.push_back(std::to_string(total));
        rows.push_back(std::move(r));
        xs.push_back(width % kSecondsPerDay == 0 ? format_day(ts.bin_start(i)) : format_iso(ts.bin_start(i)));
    }
    csv::Row header{"bin_start"};
    for (auto type : kTweetTypes) header.emplace_back(to_string(type));
    header.emplace_back("total");
    write_table(a.out / fs::path("timeseries.csv"), header, rows);
    std::vector<svg::Series> series;
    for (const auto& [type, counts] : ts.series) {
        series.push_back({std::string(to_string(type)), std::vector<double>(counts.begin(), counts.end())});
    }
    write_text(a.out / fs::path("timeseries.svg"), svg::line_chart("Tweets per bin by type", xs, series));

    const fs::path dir = a.out;
    ranked_outputs(dir, "top_hashtags", "Most frequent hashtags", "hashtag", analytics::top_hashtags(store, a.top));
    ranked_outputs(dir, "top_hashtag_pairs", "Most frequent hashtag pairs", "pair",
                   analytics::top_hashtag_pairs(store, a.top));
    ranked_outputs(dir, "top_media", "Most shared media", "media_id", analytics::top_media(store, a.top));
    ranked_outputs(dir, "top_quoted_users", "Most quoted accounts", "account",
                   analytics::top_referenced_users(store, a.top, analytics::ReferenceMode::Quoted));
    ranked_outputs(dir, "top_retweeted_users", "Most retweeted accounts", "account",
                   analytics::top_referenced_users(store, a.top, analytics::ReferenceMode::Retweeted));
    out << "stats: " << ts.total() << " tweets in " << ts.bins << " bins -> " << a.out << "\n";
    run.finish(a.out);
}

struct TrollArgs {
    std::string store, list, out;
};

void cmd_trolls(const TrollArgs& a, std::ostream& out) {
    Run run("trolls");
    run.input(a.store);
    run.input(a.list);
    const auto store = Store::load(a.store);
    const auto list = trolls::load_troll_list(a.list);
    const auto report = trolls::match_trolls(store, list);
    ensure_dir(a.out);
    const fs::path dir = a.out;

    std::vector<csv::Row> rows;
    std::size_t renamed = 0;
    for (const auto& m : report.matched_accounts) {
        renamed += m.renamed;
        rows.push_back({std::to_string(m.user_id), m.screen_name, num(m.tweets_total), num(m.originals),
                        num(m.retweets), num(m.quotes), num(m.replies), m.renamed ? "true" : "false",
                        format_iso(m.account_created_at)});
    }
    write_table(dir / "troll_accounts.csv",
                {"user_id", "screen_name", "tweets", "originals", "retweets", "quotes", "replies", "renamed",
                 "account_created_at"},
                rows);
    const auto& in = report.interaction;
    write_table(dir / "troll_summary.csv", {"metric", "value"},
                {{"list_size", num(std::uint64_t{report.list_size})},
                 {"matched", num(std::uint64_t{report.matched_accounts.size()})},
                 {"unmatched", num(std::uint64_t{report.unmatched})},
                 {"renamed", num(std::uint64_t{renamed})},
                 {"retweets_of_trolls_by_trolls", num(in.retweets_of_trolls_by_trolls)},
                 {"retweets_of_trolls_by_others", num(in.retweets_of_trolls_by_others)},
                 {"quotes_of_trolls_by_trolls", num(in.quotes_of_trolls_by_trolls)},
                 {"quotes_of_trolls_by_others", num(in.quotes_of_trolls_by_others)},
                 {"retweets_by_trolls", num(in.retweets_by_trolls)}});

    auto histogram = [&](const std::string& stem, const std::string& key, const std::string& title,
                         const std::map<std::string, std::uint64_t>& h, bool as_line) {
        std::vector<csv::Row> r;
        std::vector<std::pair<std::string, double>> bars;
        std::vector<std::string> xs;
        std::vector<double> ys;
        for (const auto& [k, c] : h) {
            r.push_back({k, num(c)});
            bars.emplace_back(k, static_cast<double>(c));
            xs.push_back(k);
            ys.push_back(static_cast<double>(c));
        }
        write_table(dir / (stem + ".csv"), {key, "count"}, r);
        write_text(dir / (stem + ".svg"),
                   as_line ? svg::line_chart(title, xs, {{"tweets", ys}}) : svg::bar_chart(title, bars));
    };
    histogram("creation_histogram", "month", "Troll account creation by month", report.creation_histogram, false);
    histogram("troll_activity", "day", "Troll tweets per day", report.activity_series, true);
    out << "trolls: " << report.matched_accounts.size() << " of " << report.list_size << " listed accounts matched ("
        << renamed << " renamed, " << report.unmatched << " unmatched)\n";
    run.finish(a.out);
}

struct FeatureArgs {
    std::string store, out;
    std::size_t min_tweets = 1;
    unsigned threads = 0;
};

void cmd_features(const FeatureArgs& a, std::ostream& out) {
    Run run("features");
    run.input(a.store);
    const auto store = Store::load(a.store);
    const auto corpus = features::build_corpus_stats(store);
    const auto table = features::extract_all(store, corpus, std::max<std::size_t>(a.min_tweets, 1), resolve_threads(a.threads));
    const fs::path dir = parent_dir(a.out);
    ensure_dir(dir);
    features::write_csv(table, a.out);
    out << "features: " << table.ids.size() << " accounts x " << features::kColumnCount << " columns -> " << a.out << "\n";
    run.finish(dir);
}

struct SuggestArgs {
    std::string features, store, out;
};

void cmd_labels_suggest(const SuggestArgs& a, std::ostream& out) {
    Run run("labels suggest");
    run.input(a.features);
    const auto table = features::read_csv(a.features);
    std::optional<Store> store;
    std::optional<features::CorpusStats> corpus;
    if (!a.store.empty()) {
        run.input(a.store);
        store = Store::load(a.store);
        corpus = features::build_corpus_stats(*store);
    }
    std::vector<csv::Row> rows;
    std::map<features::Verdict, std::size_t> counts;
    for (std::size_t i = 0; i < table.ids.size(); ++i) {
        std::optional<double> trending;
        if (store) {
            if (const auto* tl = store->find(table.ids[i])) trending = features::trending_url_ratio(*tl, *corpus);
        }
        const auto s = features::suggest_labels(table.ids[i], table.rows[i], trending);
        ++counts[s.verdict];
        std::string fired;
        for (const auto& r : s.fired_rules) fired += (fired.empty() ? "" : ";") + r;
        rows.push_back({std::to_string(s.account), std::string(features::to_string(s.verdict)), fired});
    }
    const fs::path dir = parent_dir(a.out);
    ensure_dir(dir);
    write_table(a.out, {"user_id", "verdict", "rules"}, rows);
    out << "labels suggest: " << counts[features::Verdict::Bot] << " bot, " << counts[features::Verdict::Human]
        << " human, " << counts[features::Verdict::Undecided] << " undecided\n";
    run.finish(dir);
}

std::map<std::string, double> parse_params(const std::vector<std::string>& params) {
    std::map<std::string, double> out;
    for (const auto& p : params) {
        const auto eq = p.find('=');
        if (eq == std::string::npos || eq == 0) throw InvalidArgument("--param expects name=value, got '" + p + "'");
        const std::string value = p.substr(eq + 1);
        double v = 0;
        if (value == "inf") {
            v = 0;  // unlimited depth
        } else {
            try {
                std::size_t used = 0;
                v = std::stod(value, &used);
                if (used != value.size()) throw std::invalid_argument(value);
            } catch (const std::exception&) {
                throw InvalidArgument("--param value is not a number: '" + p + "'");
            }
        }
        out[p.substr(0, eq)] = v;
    }
    return out;
}

struct TrainArgs {
    std::string features, labels, family = "gb", out;
    std::vector<std::string> params;
    std::uint64_t seed = 0;
    unsigned threads = 0;
};

void cmd_train(const TrainArgs& a, std::ostream& out) {
    Run run("train");
    models::ModelSpec spec{models::parse_family(a.family), parse_params(a.params), a.seed};
    spec.validate();
    run.manifest.seed = a.seed;
    run.input(a.features);
    run.input(a.labels);
    const auto data = eval::join_labels(features::read_csv(a.features), features::read_labels(a.labels));
    require_both_classes(data.y, a.features);
    const auto model = models::train(spec, data.x, data.y, resolve_threads(a.threads));
    const fs::path dir = parent_dir(a.out);
    ensure_dir(dir);
    models::save(model, a.out);
    out << "train: " << models::to_string(spec.family) << " (" << spec.describe() << ") on " << data.y.size()
        << " accounts -> " << a.out << "\n";
    run.finish(dir);
}

struct CvArgs {
    std::string features, labels, family = "gb", grid, out;
    std::uint64_t seed = 0;
    std::size_t folds = 10, repeats = 100, grid_repeats = 10;
    bool full = false;
    unsigned threads = 0;
};

void cmd_eval_cv(const CvArgs& a, std::ostream& out) {
    Run run("eval cv");
    const auto family = models::parse_family(a.family);
    run.manifest.seed = a.seed;
    run.config(a.grid);
    run.input(a.features);
    run.input(a.labels);
    const auto axes = a.grid.empty() ? eval::default_grid(family) : eval::load_grid(a.grid, family);
    const auto grid = eval::expand_grid(axes);
    for (const auto& point : grid) models::ModelSpec{family, point, a.seed}.validate();
    const auto data = eval::join_labels(features::read_csv(a.features), features::read_labels(a.labels));
    require_both_classes(data.y, a.features);

    eval::CvOptions options;
    options.folds = a.folds;
    options.seed = a.seed;
    options.threads = resolve_threads(a.threads);
    options.repeats = a.full ? a.repeats : a.grid_repeats;
    const auto search = eval::grid_search(family, grid, data.x, data.y, options, a.seed);
    // The chosen point is re-run with the full repeat count unless that
    // already happened during the search.
    eval::CvResult final_result = search.best_result();
    if (options.repeats != a.repeats) {
        options.repeats = a.repeats;
        final_result = eval::cross_validate(search.best_result().spec, data.x, data.y, options);
    }
    ensure_dir(a.out);
    const fs::path dir = a.out;

    std::vector<csv::Row> grid_rows;
    for (std::size_t i = 0; i < search.points.size(); ++i) {
        const auto& p = search.points[i];
        grid_rows.push_back({p.spec.describe(), num(p.auc.mean), num(p.auc.stddev), num(p.bounded_auc.mean),
                             num(p.bounded_auc.stddev), num(p.f1.mean), num(p.f1.stddev), i == search.best ? "true" : "false"});
    }
    write_table(dir / "grid.csv",
                {"params", "auc_mean", "auc_std", "bounded_auc_mean", "bounded_auc_std", "f1_mean", "f1_std", "chosen"},
                grid_rows);
    std::vector<csv::Row> cells;
    for (const auto& c : final_result.cells) {
        cells.push_back({num(std::uint64_t{c.repeat}), num(std::uint64_t{c.fold}), num(c.auc), num(c.bounded_auc), num(c.f1)});
    }
    write_table(dir / "cells.csv", {"repeat", "fold", "auc", "bounded_auc", "f1"}, cells);
    const auto& spec = final_result.spec;
    write_table(dir / "metrics.csv",
                {"family", "params", "folds", "repeats", "auc_mean", "auc_std", "bounded_auc_mean", "bounded_auc_std",
                 "f1_mean", "f1_std"},
                {{std::string(models::to_string(family)), spec.describe(), num(std::uint64_t{a.folds}),
                  num(std::uint64_t{a.repeats}), num(final_result.auc.mean), num(final_result.auc.stddev),
                  num(final_result.bounded_auc.mean), num(final_result.bounded_auc.stddev), num(final_result.f1.mean),
                  num(final_result.f1.stddev)}});
    const auto roc = eval::roc_and_auc(final_result.pooled_scores, final_result.pooled_labels);
    write_table(dir / "roc.csv", {"fpr", "tpr"}, roc_rows(roc));
    write_text(dir / "roc.svg", svg::roc_chart(std::string(models::to_string(family)) + " (" + spec.describe() + ")",
                                               roc.points, roc.auc, roc.bounded_auc));
    const auto model = models::train(spec, data.x, data.y, options.threads);
    models::save(model, dir / "model.json");
    out << "eval cv: " << models::to_string(family) << " " << spec.describe() << " AUC " << num(final_result.auc.mean)
        << " +- " << num(final_result.auc.stddev) << ", bounded AUC " << num(final_result.bounded_auc.mean) << ", F1 "
        << num(final_result.f1.mean) << "\n";
    run.finish(dir);
}

struct ExternalArgs {
    std::string scores, labels, out;
};

void cmd_eval_external(const ExternalArgs& a, std::ostream& out) {
    Run run("eval external");
    run.input(a.scores);
    run.input(a.labels);
    const auto table = csv::read(a.scores);
    std::size_t id_col = 0;
    bool found = false;
    for (const char* name : {"user_id", "account", "id"}) {
        if (auto it = std::find(table.header.begin(), table.header.end(), name); it != table.header.end()) {
            id_col = static_cast<std::size_t>(it - table.header.begin());
            found = true;
            break;
        }
    }
    if (!found) throw DataError(a.scores + ": no user_id/account/id column");
    const std::size_t score_col = table.column("score", a.scores);
    const auto labels = features::read_labels(a.labels);
    std::vector<double> scores;
    std::vector<int> y;
    std::size_t line = 1;
    for (const auto& row : table.rows) {
        ++line;
        if (row.size() <= std::max(id_col, score_col)) throw DataError(a.scores + ":" + std::to_string(line) + ": short row");
        UserId id = 0;
        double s = 0;
        try {
            id = std::stoull(row[id_col]);
            s = std::stod(row[score_col]);
        } catch (const std::exception&) {
            throw DataError(a.scores + ":" + std::to_string(line) + ": unparseable id or score");
        }
        auto it = labels.find(id);
        if (it == labels.end()) continue;
        scores.push_back(s);
        y.push_back(it->second == features::Label::Bot ? 1 : 0);
    }
    require_both_classes(y, a.scores);
    const auto roc = eval::roc_and_auc(scores, y);
    const double f1 = eval::f1_score(scores, y);
    ensure_dir(a.out);
    const fs::path dir = a.out;
    write_table(dir / "metrics.csv", {"accounts", "auc", "bounded_auc", "f1"},
                {{num(std::uint64_t{scores.size()}), num(roc.auc), num(roc.bounded_auc), num(f1)}});
    write_table(dir / "roc.csv", {"fpr", "tpr"}, roc_rows(roc));
    write_text(dir / "roc.svg", svg::roc_chart("External scores", roc.points, roc.auc, roc.bounded_auc));
    out << "eval external: " << scores.size() << " labeled accounts, AUC " << num(roc.auc) << ", bounded AUC "
        << num(roc.bounded_auc) << ", F1 " << num(f1) << "\n";
    run.finish(dir);
}

struct PredictArgs {
    std::string model, store, labels, out;
    std::size_t min_tweets = 30;
    unsigned threads = 0;
};

void cmd_predict(const PredictArgs& a, std::ostream& out) {
    Run run("predict");
    run.input(a.model);
    run.input(a.store);
    const auto model = models::load(a.model);
    const auto store = Store::load(a.store);
    std::map<UserId, features::Label> labels;
    if (!a.labels.empty()) {
        run.input(a.labels);
        labels = features::read_labels(a.labels);
    }
    const auto ex = eval::extrapolate(model, store, labels, a.min_tweets, resolve_threads(a.threads));
    ensure_dir(a.out);
    const fs::path dir = a.out;
    std::vector<csv::Row> rows;
    for (const auto& [id, s] : ex.scores) rows.push_back({std::to_string(id), num(s), s >= 0.5 ? "bot" : "human"});
    write_table(dir / "predictions.csv", {"user_id", "score", "prediction"}, rows);
    write_table(dir / "summary.csv", {"metric", "value"},
                {{"qualifying", num(std::uint64_t{ex.qualifying})},
                 {"predicted_bots", num(std::uint64_t{ex.predicted_bots})},
                 {"predicted_humans", num(std::uint64_t{ex.predicted_humans})},
                 {"labeled_bots", num(std::uint64_t{ex.labeled_bots})},
                 {"labeled_humans", num(std::uint64_t{ex.labeled_humans})},
                 {"total_bots", num(std::uint64_t{ex.total_bots()})},
                 {"total_humans", num(std::uint64_t{ex.total_humans()})},
                 {"bot_fraction", num(ex.bot_fraction())}});
    out << "predict: " << ex.qualifying << " accounts with >= " << a.min_tweets << " tweets; " << ex.total_bots()
        << " bots, " << ex.total_humans() << " humans (bot fraction " << num(ex.bot_fraction()) << ")\n";
    run.finish(dir);
}

const CLI::App* deepest_parsed(const CLI::App* app) {
    for (const auto* sub : app->get_subcommands()) {
        if (sub->parsed()) return deepest_parsed(sub);
    }
    return app;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Social bot and troll analysis for election tweet corpora", "astroturf"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kToolVersion));

    SynthArgs synth_args;
    auto* synth = app.add_subcommand("synth", "Generate a labeled synthetic corpus");
    synth->add_option("--config", synth_args.config, "synth TOML file (defaults built in)");
    synth->add_option("--out", synth_args.out, "output directory")->required();
    synth->add_option("--seed", synth_args.seed, "override the configured seed");

    IngestArgs ingest_args;
    auto* ingest = app.add_subcommand("ingest", "Parse, filter and store tweet records");
    ingest->add_option("--config", ingest_args.config, "corpus TOML file (election terms by default)");
    ingest->add_option("--in", ingest_args.inputs, "input file glob (repeatable)")->required();
    ingest->add_option("--store", ingest_args.store, "store directory to write")->required();

    StatsArgs stats_args;
    auto* stats = app.add_subcommand("stats", "Corpus statistics and charts");
    stats->add_option("--store", stats_args.store, "store directory")->required();
    stats->add_option("--out", stats_args.out, "output directory")->required();
    stats->add_option("--top", stats_args.top, "entries per ranking")->capture_default_str();
    stats->add_option("--bin", stats_args.bin, "time series bin width (e.g. 1d, 6h)")->capture_default_str();

    TrollArgs troll_args;
    auto* troll = app.add_subcommand("trolls", "Match a known-troll list against the store");
    troll->add_option("--store", troll_args.store, "store directory")->required();
    troll->add_option("--list", troll_args.list, "two-column troll CSV")->required();
    troll->add_option("--out", troll_args.out, "output directory")->required();

    FeatureArgs feature_args;
    auto* feats = app.add_subcommand("features", "Extract per-account features");
    feats->add_option("--store", feature_args.store, "store directory")->required();
    feats->add_option("--out", feature_args.out, "features CSV to write")->required();
    feats->add_option("--min-tweets", feature_args.min_tweets, "skip accounts with fewer tweets")->capture_default_str();
    feats->add_option("--threads", feature_args.threads, "worker threads (default: ASTROTURF_THREADS or all cores)");

    SuggestArgs suggest_args;
    auto* labels = app.add_subcommand("labels", "Labeling helpers");
    labels->require_subcommand(1);
    auto* suggest = labels->add_subcommand("suggest", "Rule-based bot/human label suggestions");
    suggest->add_option("--features", suggest_args.features, "features CSV")->required();
    suggest->add_option("--out", suggest_args.out, "suggestions CSV to write")->required();
    suggest->add_option("--store", suggest_args.store, "store directory; enables the trending-URL rule");

    TrainArgs train_args;
    auto* train = app.add_subcommand("train", "Train a classifier on labeled features");
    train->add_option("--features", train_args.features, "features CSV")->required();
    train->add_option("--labels", train_args.labels, "labels CSV")->required();
    train->add_option("--family", train_args.family, "gb, rf, ada, lr, knn or linsvc")->capture_default_str();
    train->add_option("--out", train_args.out, "model file to write")->required();
    train->add_option("--param", train_args.params, "hyperparameter name=value (repeatable)");
    train->add_option("--seed", train_args.seed, "model seed")->capture_default_str();
    train->add_option("--threads", train_args.threads, "worker threads");

    auto* ev = app.add_subcommand("eval", "Evaluate classifiers");
    ev->require_subcommand(1);
    CvArgs cv_args;
    auto* cv = ev->add_subcommand("cv", "Grid search with repeated stratified cross-validation");
    cv->add_option("--features", cv_args.features, "features CSV")->required();
    cv->add_option("--labels", cv_args.labels, "labels CSV")->required();
    cv->add_option("--family", cv_args.family, "model family")->capture_default_str();
    cv->add_option("--grid", cv_args.grid, "grid TOML file (default grid when omitted)");
    cv->add_option("--seed", cv_args.seed, "seed for folds and models")->capture_default_str();
    cv->add_option("--out", cv_args.out, "report directory")->required();
    cv->add_option("--folds", cv_args.folds, "folds per repeat")->capture_default_str();
    cv->add_option("--repeats", cv_args.repeats, "repeats for the chosen point")->capture_default_str();
    cv->add_option("--grid-repeats", cv_args.grid_repeats, "repeats per grid point")->capture_default_str();
    cv->add_flag("--full", cv_args.full, "use --repeats for every grid point");
    cv->add_option("--threads", cv_args.threads, "worker threads");
    ExternalArgs external_args;
    auto* external = ev->add_subcommand("external", "ROC/AUC report for externally produced scores");
    external->add_option("--scores", external_args.scores, "CSV with user_id and score columns")->required();
    external->add_option("--labels", external_args.labels, "labels CSV")->required();
    external->add_option("--out", external_args.out, "report directory")->required();

    PredictArgs predict_args;
    auto* predict = app.add_subcommand("predict", "Score unlabeled accounts and estimate the bot share");
    predict->add_option("--model", predict_args.model, "model file")->required();
    predict->add_option("--store", predict_args.store, "store directory")->required();
    predict->add_option("--out", predict_args.out, "output directory")->required();
    predict->add_option("--labels", predict_args.labels, "known labels merged into the totals");
    predict->add_option("--min-tweets", predict_args.min_tweets, "minimum tweets per account")->capture_default_str();
    predict->add_option("--threads", predict_args.threads, "worker threads");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << deepest_parsed(&app)->help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::CallForVersion&) {
        out << kToolVersion << "\n";
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << deepest_parsed(&app)->help();
        return kUsage;
    }

    try {
        if (synth->parsed()) cmd_synth(synth_args, out);
        else if (ingest->parsed()) cmd_ingest(ingest_args, out);
        else if (stats->parsed()) cmd_stats(stats_args, out);
        else if (troll->parsed()) cmd_trolls(troll_args, out);
        else if (feats->parsed()) cmd_features(feature_args, out);
        else if (suggest->parsed()) cmd_labels_suggest(suggest_args, out);
        else if (train->parsed()) cmd_train(train_args, out);
        else if (cv->parsed()) cmd_eval_cv(cv_args, out);
        else if (external->parsed()) cmd_eval_external(external_args, out);
        else if (predict->parsed()) cmd_predict(predict_args, out);
    } catch (const InvalidArgument& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kDataError;
    }
    return kOk;
}

int run(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return run(args, std::cout, std::cerr);
}

}  // namespace astroturf::cli
