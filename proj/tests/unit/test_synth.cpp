#include <doctest.h>

#include <set>

#include "astroturf/analytics.hpp"
#include "astroturf/error.hpp"
#include "astroturf/ingest.hpp"
#include "astroturf/synth.hpp"
#include "astroturf/trolls.hpp"
#include "helpers.hpp"

using namespace astroturf;
using namespace astroturf::synth;

namespace {

SynthConfig small_config() {
    SynthConfig c;
    c.n_humans = 40;
    c.n_bots = 10;
    c.span_days = 5;
    c.seed = 7;
    return c;
}

Store ingest_corpus(const Corpus& corpus, const std::filesystem::path& dir) {
    write(corpus, dir);
    return Store(ingest_files({dir / "corpus.ndjson"}, CorpusConfig::election_default()).timelines);
}

std::map<std::string, std::uint64_t> as_map(const analytics::RankedCounts& r) {
    return {r.entries.begin(), r.entries.end()};
}

}  // namespace

TEST_CASE("config validation and loading") {
    CHECK_NOTHROW(SynthConfig{}.validate());
    auto c = small_config();
    c.weight_amplifier = 0.5;
    CHECK_THROWS_AS(c.validate(), DataError);
    c = small_config();
    c.span_days = 0;
    CHECK_THROWS_AS(c.validate(), DataError);
    c = small_config();
    c.troll_renamed = {999};
    CHECK_THROWS_AS(c.validate(), DataError);

    const auto dir = testing::temp_dir("synth_config");
    {
        std::ofstream(dir / "s.toml") << "n_humans = 12\nn_bots = 3\nspan_days = 2.5\nfdp_fraction = 0.25\n"
                                         "troll_ids = [1000001, 1000002]\n";
    }
    const auto loaded = SynthConfig::load(dir / "s.toml");
    CHECK(loaded.n_humans == 12);
    CHECK(loaded.span_days == 2.5);
    CHECK(loaded.fdp_fraction == 0.25);
    CHECK(loaded.troll_ids == std::vector<UserId>{1000001, 1000002});
    {
        std::ofstream(dir / "bad.toml") << "n_humanz = 12\n";
    }
    CHECK_THROWS_AS(SynthConfig::load(dir / "bad.toml"), DataError);
}

TEST_CASE("generation is deterministic and seed-sensitive") {
    const auto dir = testing::temp_dir("synth_det");
    const auto c = small_config();
    write(generate(c), dir / "a");
    write(generate(c), dir / "b");
    for (const char* f : {"corpus.ndjson", "labels.csv", "truth.json"}) {
        CHECK(testing::slurp(dir / "a" / f) == testing::slurp(dir / "b" / f));
    }
    auto other = c;
    other.seed = 8;
    write(generate(other), dir / "c");
    CHECK(testing::slurp(dir / "a" / "corpus.ndjson") != testing::slurp(dir / "c" / "corpus.ndjson"));

    auto empty = c;
    empty.n_humans = 0;
    empty.n_bots = 0;
    CHECK(generate(empty).tweets.empty());
}

TEST_CASE("scheduler posts on a fixed clock") {
    SynthConfig c;
    c.n_humans = 0;
    c.n_bots = 1;
    c.span_days = 2;
    c.weight_scheduler = 1;
    c.weight_repeater = 0;
    c.weight_amplifier = 0;
    c.scheduler_interval_min_minutes = 30;
    c.scheduler_interval_max_minutes = 30;
    const auto corpus = generate(c);
    REQUIRE(corpus.tweets.size() == 96);
    std::set<std::int64_t> second_of_minute;
    for (std::size_t i = 0; i < corpus.tweets.size(); ++i) {
        second_of_minute.insert(to_unix(corpus.tweets[i].created_at) % 60);
        if (i > 0) CHECK(corpus.tweets[i].created_at - corpus.tweets[i - 1].created_at == seconds{1800});
    }
    CHECK(second_of_minute.size() == 1);
    CHECK(corpus.truth.accounts.begin()->second.archetype == Archetype::Scheduler);
}

TEST_CASE("labels and archetypes agree with the config") {
    const auto c = small_config();
    const auto corpus = generate(c);
    CHECK(corpus.labels.size() == c.n_humans + c.n_bots);
    std::size_t bots = 0;
    for (const auto& [id, label] : corpus.labels) {
        bots += label == features::Label::Bot;
        const auto& truth = corpus.truth.accounts.at(id);
        CHECK(truth.label == label);
        CHECK((truth.archetype == Archetype::Human) == (label == features::Label::Human));
        CHECK(id >= c.id_base);
        CHECK(id < c.id_base + c.n_humans + c.n_bots);
    }
    CHECK(bots == c.n_bots);
    std::uint64_t total = 0;
    for (const auto& [_, a] : corpus.truth.accounts) {
        total += a.tweets;
        CHECK(a.type_counts[0] + a.type_counts[1] + a.type_counts[2] + a.type_counts[3] == a.tweets);
    }
    CHECK(total == corpus.tweets.size());
    CHECK(corpus.truth.total_tweets == corpus.tweets.size());
    for (std::size_t i = 1; i < corpus.tweets.size(); ++i) {
        const auto& a = corpus.tweets[i - 1];
        const auto& b = corpus.tweets[i];
        CHECK(std::tie(a.created_at, a.tweet_id) < std::tie(b.created_at, b.tweet_id));
    }
    // Bookkeeping survives its JSON form.
    CHECK(Bookkeeping::from_json(corpus.truth.to_json()).to_json() == corpus.truth.to_json());
}

TEST_CASE("bookkeeping matches what ingest and analytics recover") {
    auto c = small_config();
    c.troll_ids = {c.id_base + 1, c.id_base + 2, c.id_base + 45};
    c.troll_renamed = {c.id_base + 2};
    c.troll_unlisted = 2;
    const auto corpus = generate(c);
    const auto dir = testing::temp_dir("synth_truth");
    const auto store = ingest_corpus(corpus, dir);
    const auto& truth = corpus.truth;

    CHECK(store.tweet_count() == truth.total_tweets);
    for (const auto& [id, acc] : truth.accounts) {
        const auto* tl = store.find(id);
        REQUIRE(tl != nullptr);
        CHECK(tl->tweets.size() == acc.tweets);
        CHECK(tl->profile.screen_name == truth.final_screen_names.at(id));
    }
    CHECK(as_map(analytics::top_hashtags(store, 100000)) == truth.hashtag_counts);
    CHECK(as_map(analytics::top_hashtag_pairs(store, 100000)) == truth.pair_counts);
    CHECK(as_map(analytics::top_media(store, 100000)) == truth.media_counts);

    auto keyed = [&](const std::map<UserId, std::uint64_t>& by_id) {
        std::map<std::string, std::uint64_t> out;
        for (const auto& [id, n] : by_id) out[store.display_key(id)] += n;
        return out;
    };
    CHECK(as_map(analytics::top_referenced_users(store, 100000, analytics::ReferenceMode::Retweeted)) ==
          keyed(truth.retweeted_counts));
    CHECK(as_map(analytics::top_referenced_users(store, 100000, analytics::ReferenceMode::Quoted)) ==
          keyed(truth.quoted_counts));

    const auto ts = analytics::tweet_type_timeseries(store);
    std::map<std::string, std::array<std::uint64_t, 4>> daily;
    for (std::size_t b = 0; b < ts.bins; ++b) {
        std::array<std::uint64_t, 4> row{};
        for (const auto& [type, counts] : ts.series) row[static_cast<std::size_t>(type)] = counts[b];
        if (row != std::array<std::uint64_t, 4>{}) daily[format_day(ts.bin_start(b))] = row;
    }
    CHECK(daily == truth.daily_type_counts);

    const auto list = trolls::load_troll_list(dir / "trolls.csv");
    const auto report = trolls::match_trolls(store, list);
    CHECK(report.list_size == truth.trolls.listed.size());
    CHECK(report.list_size == 5);
    CHECK(report.matched_ids() == truth.trolls.planted);
    CHECK(report.unmatched == 2);
    std::vector<UserId> renamed;
    for (const auto& a : report.matched_accounts) {
        if (a.renamed) renamed.push_back(a.user_id);
    }
    CHECK(renamed == truth.trolls.renamed);
    const auto& s = report.interaction;
    CHECK(s.retweets_of_trolls_by_trolls == truth.trolls.retweets_of_trolls_by_trolls);
    CHECK(s.retweets_of_trolls_by_others == truth.trolls.retweets_of_trolls_by_others);
    CHECK(s.quotes_of_trolls_by_trolls == truth.trolls.quotes_of_trolls_by_trolls);
    CHECK(s.quotes_of_trolls_by_others == truth.trolls.quotes_of_trolls_by_others);
    CHECK(s.retweets_by_trolls == truth.trolls.retweets_by_trolls);
}

TEST_CASE("fdp tagging drives the exclusion") {
    auto c = small_config();
    c.fdp_fraction = 0.25;
    const auto corpus = generate(c);
    const auto dir = testing::temp_dir("synth_fdp");
    write(corpus, dir);
    const auto result = ingest_files({dir / "corpus.ndjson"}, CorpusConfig::election_default());
    CHECK(result.stats.off_topic == 0);
    CHECK(result.stats.exclusion.total == corpus.tweets.size());
    CHECK(result.stats.exclusion.excluded == corpus.truth.fdp_tweets);
    CHECK(result.stats.exclusion.excluded_fraction() == doctest::Approx(0.25).epsilon(0.05));
}
