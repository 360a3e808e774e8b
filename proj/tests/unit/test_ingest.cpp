#include <doctest.h>

#include <fstream>
#include <random>

#include "astroturf/error.hpp"
#include "astroturf/ingest.hpp"
#include "astroturf/store.hpp"
#include "helpers.hpp"
#include "oracle/random_corpus.hpp"

using namespace astroturf;
using testing::make_store;
using testing::make_tweet;

namespace {

Tweet with_text(const std::string& text, std::vector<std::string> hashtags = {}) {
    auto t = make_tweet(1, 1, 1503532800, text);
    t.hashtags = std::move(hashtags);
    return t;
}

void write_lines(const std::filesystem::path& path, const std::vector<std::string>& lines) {
    std::ofstream out(path, std::ios::binary);
    for (const auto& l : lines) out << l << '\n';
}

}  // namespace

TEST_CASE("parse a platform record") {
    const auto t = parse_tweet(R"({"id": 42, "created_at": "Sun Sep 24 18:00:00 +0000 2017",
        "text": "RT @x: Die #AfD", "source": "<a href=\"h\">Twitter for iPhone</a>", "lang": "de",
        "user": {"id": "7", "screen_name": "anna", "name": "Anna", "followers_count": 3, "friends_count": 4,
                 "verified": false, "default_profile_image": true, "default_profile": true, "geo_enabled": false,
                 "created_at": "Mon Jan 02 10:00:00 +0000 2012"},
        "entities": {"hashtags": [{"text": "AfD"}], "urls": [{"expanded_url": "https://a.de/x", "url": "https://t.co/1"}],
                     "media": [{"id_str": "99"}], "user_mentions": [{"id": 8}]},
        "retweeted_status": {"id": 41, "user": {"id": 8}},
        "quoted_status": {"id": 40, "user": {"id": 9}},
        "in_reply_to_status_id": 39})");
    CHECK(t.tweet_id == 42);
    CHECK(t.author_id() == 7);
    CHECK(t.author.default_profile_image);
    CHECK(t.author.default_user_image);
    CHECK(t.hashtags == std::vector<std::string>{"afd"});
    CHECK(t.urls == std::vector<std::string>{"https://a.de/x"});
    CHECK(t.media_ids == std::vector<std::string>{"99"});
    CHECK(t.mentions == std::vector<UserId>{8});
    // Retweet wins over quote and reply.
    CHECK(t.tweet_type == TweetType::Retweet);
    CHECK(t.referenced_tweet_id == 41u);
    CHECK(t.referenced_author_id == 8u);
    CHECK(format_iso(t.author.account_created_at) == "2012-01-02T10:00:00Z");
}

TEST_CASE("tweet type precedence") {
    const std::string base = R"("id": 1, "created_at": "2017-09-24T18:00:00Z", "text": "x", "user": {"id": 2, "screen_name": "a"})";
    CHECK(parse_tweet("{" + base + "}").tweet_type == TweetType::Original);
    CHECK(parse_tweet("{" + base + R"(, "in_reply_to_status_id": 5})").tweet_type == TweetType::Reply);
    CHECK(parse_tweet("{" + base + R"(, "in_reply_to_status_id": null})").tweet_type == TweetType::Original);
    CHECK(parse_tweet("{" + base + R"(, "in_reply_to_status_id": 5, "quoted_status": {"id": 3}})").tweet_type ==
          TweetType::Quote);
    // Without an entity list hashtags come from the text.
    const auto t = parse_tweet(R"({"id": 1, "created_at": "2017-09-24T18:00:00Z", "text": "#Wahl und #AfD", "user": {"id": 2, "screen_name": "a"}})");
    CHECK(t.hashtags == std::vector<std::string>{"wahl", "afd"});
}

TEST_CASE("malformed records are rejected") {
    CHECK_THROWS_AS(parse_tweet("{"), ParseError);
    CHECK_THROWS_AS(parse_tweet("[]"), ParseError);
    CHECK_THROWS_AS(parse_tweet(R"({"id": 1, "text": "x", "user": {"id": 2, "screen_name": "a"}})"), ParseError);
    CHECK_THROWS_AS(parse_tweet(R"({"id": 1, "created_at": "soon", "text": "x", "user": {"id": 2, "screen_name": "a"}})"),
                    ParseError);
    CHECK_THROWS_AS(parse_tweet(R"({"id": -1, "created_at": "2017-09-24T18:00:00Z", "text": "x", "user": {"id": 2, "screen_name": "a"}})"),
                    ParseError);
    CHECK_THROWS_AS(parse_tweet(R"({"id": 1, "created_at": "2017-09-24T18:00:00Z", "text": 5, "user": {"id": 2, "screen_name": "a"}})"),
                    ParseError);
}

TEST_CASE("serialize/parse round trip on 1000 random records") {
    auto tweets = oracle::random_corpus(11, 40, 50);
    REQUIRE(tweets.size() >= 1000);
    tweets.resize(1000);
    for (auto& t : tweets) {
        // Replies always carry their parent id in the wire format.
        if (t.tweet_type == TweetType::Reply && !t.referenced_tweet_id) t.referenced_tweet_id = 3;
        if (t.tweet_type == TweetType::Original) {
            t.referenced_tweet_id.reset();
            t.referenced_author_id.reset();
        }
        const auto back = parse_tweet(serialize_tweet(t));
        CHECK(back == t);
        CHECK(serialize_tweet(back) == serialize_tweet(t));
    }
}

TEST_CASE("term matching") {
    const std::vector<std::string> cdu{"cdu"};
    CHECK(matches_terms(with_text("Die CDU gewinnt"), cdu));
    CHECK_FALSE(matches_terms(with_text("verafdet total"), {"afd"}));
    CHECK(matches_terms(with_text("verafdet total"), {"afd"}, MatchMode::Substring));
    CHECK(matches_terms(with_text("x", {"diegruenen"}), {"diegruenen"}));
    CHECK(matches_terms(with_text("Wählt Grüne!"), CorpusConfig::election_default().search_terms));
    CHECK_FALSE(matches_terms(with_text("Die Grünen"), {"grüne"}));
    CHECK_FALSE(matches_terms(with_text("cdu"), {}));
}

TEST_CASE("exclusion") {
    std::vector<Tweet> tweets;
    for (int i = 0; i < 100; ++i) tweets.push_back(with_text(i < 25 ? "Die FDP und die AfD" : "Die AfD"));
    auto config = CorpusConfig::election_default();
    auto stats = apply_exclusion(tweets, config);
    CHECK(stats.total == 100);
    CHECK(stats.excluded == 25);
    CHECK(stats.kept == 75);
    CHECK(tweets.size() == 75);
    CHECK(stats.excluded_fraction() == 0.25);

    config.exclusion_terms.clear();
    stats = apply_exclusion(tweets, config);
    CHECK(stats.excluded == 0);
    CHECK(stats.excluded_fraction() == 0.0);
    CHECK(tweets.size() == 75);
}

TEST_CASE("timelines: grouping, ordering, latest profile, duplicates") {
    auto a = make_tweet(2, 7, 200);
    auto b = make_tweet(1, 7, 100);
    a.author.screen_name = "renamed";
    auto dup = make_tweet(2, 7, 200, "other text");
    dup.author = a.author;
    std::map<UserId, UserTimeline> out;
    const auto dups = build_timelines({a, dup, b}, out);
    CHECK(dups == 1);
    REQUIRE(out.size() == 1);
    const auto& tl = out.at(7);
    REQUIRE(tl.tweets.size() == 2);
    CHECK(tl.tweets[0].tweet_id == 1);
    CHECK(tl.tweets[1].tweet_id == 2);
    CHECK(tl.tweets[1].text == "hello");  // the smaller serialization wins
    CHECK(tl.profile.screen_name == "renamed");
    // Independent of input order.
    std::map<UserId, UserTimeline> again;
    build_timelines({b, dup, a}, again);
    CHECK(again.at(7).tweets == tl.tweets);

    std::map<UserId, UserTimeline> renamed;
    b.author.screen_name = "original";
    build_timelines({a, b}, renamed);
    CHECK(renamed.at(7).profile.screen_name == "renamed");
}

TEST_CASE("ingest files and persist a store") {
    const auto dir = testing::temp_dir("ingest");
    std::vector<std::string> lines;
    auto tweets = oracle::random_corpus(21, 10, 20);
    std::size_t on_topic = 0, fdp = 0;
    for (std::size_t i = 0; i < tweets.size(); ++i) {
        auto& t = tweets[i];
        t.hashtags.clear();
        t.text = i % 3 == 0 ? "nichts" : (i % 3 == 1 ? "Die AfD" : "Die SPD und FDP");
        on_topic += i % 3 != 0;
        fdp += i % 3 == 2;
        lines.push_back(serialize_tweet(t));
    }
    lines.push_back("not json");
    lines.push_back(R"({"id": 5, "text": "afd", "user": {"id": 1, "screen_name": "a"}})");
    lines.push_back("   ");
    lines.push_back(lines.front());  // duplicate of an off-topic record
    lines.push_back(lines[1]);       // duplicate of an on-topic record
    write_lines(dir / "part1.ndjson", std::vector<std::string>(lines.begin(), lines.begin() + 50));
    write_lines(dir / "part2.ndjson", std::vector<std::string>(lines.begin() + 50, lines.end()));

    const auto files = expand_glob((dir / "*.ndjson").string());
    CHECK(files.size() == 2);
    const auto result = ingest_files(files, CorpusConfig::election_default());
    const auto& s = result.stats;
    CHECK(s.records == tweets.size() + 4);
    CHECK(s.rejected == 2);
    CHECK(s.rejected_by_reason.at("malformed record") == 1);
    CHECK(s.off_topic == tweets.size() - on_topic + 1);
    CHECK(s.exclusion.total == on_topic + 1);
    CHECK(s.exclusion.excluded == fdp);
    CHECK(s.duplicates == 1);
    CHECK(s.exclusion.kept == s.exclusion.total - s.exclusion.excluded);

    const Store store(result.timelines);
    CHECK(store.tweet_count() == on_topic - fdp);
    store.save(dir / "store", &s);
    const auto loaded = Store::load(dir / "store");
    CHECK(loaded.timelines() == store.timelines());
    // Idempotent and byte-identical on rebuild.
    Store(ingest_files(files, CorpusConfig::election_default()).timelines).save(dir / "store2", &s);
    for (const char* f : {"tweets.ndjson", "users.ndjson", "ingest_stats.json"}) {
        CHECK(testing::slurp(dir / "store" / f) == testing::slurp(dir / "store2" / f));
    }
    CHECK_THROWS_AS(expand_glob((dir / "*.nothing").string()), DataError);
    CHECK_THROWS_AS(Store::load(dir / "missing"), DataError);
}

TEST_CASE("corpus config file") {
    const auto dir = testing::temp_dir("corpus_config");
    {
        std::ofstream(dir / "c.toml") << "search_terms = [\"AfD\", \"cdu\"]\nexclusion_terms = []\nmatch_mode = \"substring\"\n";
    }
    const auto c = CorpusConfig::load(dir / "c.toml");
    CHECK(c.search_terms == std::vector<std::string>{"afd", "cdu"});
    CHECK(c.exclusion_terms.empty());
    CHECK(c.match_mode == MatchMode::Substring);
    {
        std::ofstream(dir / "bad.toml") << "match_mode = \"fuzzy\"\n";
    }
    CHECK_THROWS_AS(CorpusConfig::load(dir / "bad.toml"), DataError);
}
