#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "astroturf/error.hpp"
#include "astroturf/features.hpp"
#include "astroturf/text.hpp"
#include "helpers.hpp"
#include "oracle/feature_oracle.hpp"
#include "oracle/random_corpus.hpp"

using namespace astroturf;
using namespace astroturf::features;
using testing::make_store;
using testing::make_tweet;

namespace {

FeatureVector features_of(const Store& store, UserId id) {
    const auto corpus = build_corpus_stats(store);
    const auto* tl = store.find(id);
    REQUIRE(tl != nullptr);
    return extract_features(*tl, tl->profile, corpus);
}

std::vector<Timestamp> stamps(std::initializer_list<std::int64_t> secs) {
    std::vector<Timestamp> out;
    for (auto s : secs) out.push_back(from_unix(s));
    return out;
}

}  // namespace

TEST_CASE("feature names and columns") {
    CHECK(feature_names().size() == 44);
    CHECK(column_names().size() == 59);
    CHECK(column_names()[twitter_client] == "twitter_client_00");
    CHECK(column_names()[twitter_client + 15] == "twitter_client_15");
    CHECK(column_names()[self_bot] == "self_bot");
}

TEST_CASE("every feature matches the naive oracle on random corpora") {
    std::size_t timelines = 0;
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        auto tweets = oracle::random_corpus(seed, 6, 40);
        const oracle::Corpus reference(tweets);
        const Store store = make_store(tweets);
        const auto corpus = build_corpus_stats(store);
        for (const auto& [id, tl] : store.timelines()) {
            const auto got = extract_features(tl, tl.profile, corpus);
            const auto want = oracle::features(reference, id);
            for (std::size_t c = 0; c < kColumnCount; ++c) {
                INFO("seed " << seed << " account " << id << " column " << column_names()[c]);
                CHECK(std::abs(got[c] - want[c]) <= 1e-9);
            }
            ++timelines;
        }
    }
    CHECK(timelines >= 50);
}

TEST_CASE("feature invariants on random corpora") {
    for (std::uint64_t seed = 100; seed < 120; ++seed) {
        auto tweets = oracle::random_corpus(seed, 5, 30);
        const Store store = make_store(tweets);
        const auto corpus = build_corpus_stats(store);
        for (const auto& [id, tl] : store.timelines()) {
            const auto f = extract_features(tl, tl.profile, corpus);
            for (double v : f) CHECK(std::isfinite(v));
            for (auto c : ratio_columns()) {
                CHECK(f[c] >= 0.0);
                CHECK(f[c] <= 1.0);
            }
            for (auto c : boolean_columns()) CHECK((f[c] == 0.0 || f[c] == 1.0));
            CHECK(f[orig_ratio] + f[retweet_ratio] + f[quote_ratio] + f[reply_ratio] == doctest::Approx(1.0).epsilon(1e-12));
            CHECK(f[total_tweets] >= 1);
            CHECK(f[avg_tweets_per_day] > 0);
            CHECK(f[vocabulary_diversity] > 0);
            CHECK(f[zip_ratio] > 0);
            CHECK(f[unique_url_ratio] <= f[url_ratio]);
            CHECK(f[unique_url_host_ratio] <= f[url_ratio]);
            CHECK(f[unique_mentions_ratio] <= f[mentions_ratio]);
            CHECK(f[unique_hashtags_ratio] <= f[hashtags_ratio]);
            CHECK(f[unique_users_retweet_ratio] <= f[retweet_ratio]);
            CHECK(f[unique_users_quotes_ratio] <= f[quote_ratio]);
            CHECK(f[unique_users_reply_ratio] <= f[reply_ratio]);
            // Pure function: a second call is bit-identical.
            CHECK(extract_features(tl, tl.profile, corpus) == f);
        }
    }
}

TEST_CASE("arrival order does not change features") {
    auto tweets = oracle::random_corpus(7, 5, 30);
    const Store a = make_store(tweets);
    std::mt19937_64 gen(3);
    std::shuffle(tweets.begin(), tweets.end(), gen);
    const Store b = make_store(tweets);
    const auto ca = build_corpus_stats(a);
    const auto cb = build_corpus_stats(b);
    for (const auto& [id, tl] : a.timelines()) {
        auto shuffled = *b.find(id);
        std::shuffle(shuffled.tweets.begin(), shuffled.tweets.end(), gen);
        CHECK(extract_features(tl, tl.profile, ca) == extract_features(shuffled, shuffled.profile, cb));
    }
}

TEST_CASE("single tweet with one URL") {
    auto t = make_tweet(1, 10, 1503532800, "hello https://example.org/x");
    t.urls = {"https://example.org/x"};
    const auto f = features_of(make_store({t}), 10);
    CHECK(f[url_ratio] == 1.0);
    CHECK(f[total_tweets] == 1.0);
    CHECK(f[retweet_ratio] == 0.0);
    CHECK(f[avg_longest_break] == 48.0);
    CHECK(f[avg_second_longest_break] == 48.0);
}

TEST_CASE("identical texts count as duplicates") {
    const auto f = features_of(make_store({make_tweet(1, 10, 1503532800, "same words here"),
                                           make_tweet(2, 10, 1503536400, "same words here")}),
                               10);
    CHECK(f[avg_duplicate_simhash] == 1.0);
    CHECK(f[duplicate_simhash_ratio] == 1.0);
    CHECK(f[vocabulary_diversity] == doctest::Approx(0.5));
}

TEST_CASE("empty timeline is rejected") {
    CorpusStats corpus;
    UserTimeline empty;
    CHECK_THROWS_AS(extract_features(empty, empty.profile, corpus), InvalidArgument);
}

TEST_CASE("user features") {
    auto t = make_tweet(1, 10, 1503532800);
    t.author.screen_name = "NewsBOTde";
    t.author.friends = 30;
    t.author.followers = 10;
    t.author.verified = true;
    const auto f = features_of(make_store({t}), 10);
    CHECK(f[self_bot] == 1.0);
    CHECK(f[friend_follower_ratio] == doctest::Approx(0.75));
    CHECK(f[is_verified] == 1.0);
    CHECK(f[total_friends] == 30);
}

TEST_CASE("client handling") {
    CHECK(client_name("<a href=\"http://twitter.com/download/iphone\" rel=\"nofollow\">Twitter for iPhone</a>") ==
          "Twitter for iPhone");
    CHECK(client_name("  dlvr.it ") == "dlvr.it");
    CHECK(is_official_client("TweetDeck"));
    CHECK_FALSE(is_official_client("IFTTT"));
}

TEST_CASE("simhash conventions") {
    CHECK(simhash64("") == 0);
    CHECK(simhash64("...!!") == 0);
    CHECK(simhash64("Die Wahl heute") == simhash64("die wahl, HEUTE!"));
    CHECK(hamming(simhash64("a b c"), simhash64("a b c")) == 0);
}

TEST_CASE("simhash: one changed token out of 50 stays within 12 bits") {
    std::mt19937_64 gen(2017);
    std::uniform_int_distribution<int> word(0, 4999);
    int worst = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        std::vector<std::string> tokens;
        for (int i = 0; i < 50; ++i) tokens.push_back("w" + std::to_string(word(gen)));
        std::string a, b;
        const int changed = static_cast<int>(gen() % 50);
        for (int i = 0; i < 50; ++i) {
            a += tokens[i] + " ";
            b += (i == changed ? "x" + std::to_string(word(gen)) : tokens[i]) + " ";
        }
        worst = std::max(worst, hamming(simhash64(a), simhash64(b)));
    }
    MESSAGE("worst Hamming distance over 1000 trials: " << worst);
    CHECK(worst <= 12);
}

TEST_CASE("chi-square of seconds") {
    std::vector<Timestamp> all_zero;
    for (int i = 0; i < 600; ++i) all_zero.push_back(from_unix(1503532800 + 60 * i));
    CHECK(seconds_chi_square(all_zero) == doctest::Approx(35400.0).epsilon(1e-12));

    std::vector<Timestamp> flat;
    for (int i = 0; i < 600; ++i) flat.push_back(from_unix(1503532800 + i));
    CHECK(seconds_chi_square(flat) == 0.0);

    // 99th percentile of chi-square with 59 degrees of freedom.
    constexpr double kCritical = 87.1660;
    int below = 0;
    for (int trial = 0; trial < 100; ++trial) {
        std::mt19937_64 gen(static_cast<std::uint64_t>(trial) + 1);
        std::uniform_int_distribution<std::int64_t> sec(0, 30 * 86400);
        std::vector<Timestamp> ts;
        for (int i = 0; i < 6000; ++i) ts.push_back(from_unix(1503532800 + sec(gen)));
        below += seconds_chi_square(ts) < kCritical;
    }
    CHECK(below >= 95);
}

TEST_CASE("longest breaks") {
    const std::int64_t t0 = 1503532800;
    SUBCASE("every 6h") {
        std::vector<Timestamp> ts;
        for (int i = 0; i <= 40; ++i) ts.push_back(from_unix(t0 + 6 * 3600 * i));
        const auto [a, b] = longest_breaks(ts);
        CHECK(a == 6.0 * 3600);
        CHECK(b == 6.0 * 3600);
    }
    SUBCASE("single tweet") {
        const auto [a, b] = longest_breaks(stamps({t0}));
        CHECK(a == 48.0 * 3600);
        CHECK(b == 48.0 * 3600);
    }
    SUBCASE("two windows") {
        // Window 1 [0,48h]: events 0,10h,48h -> gaps 10h, 38h. Window 2 [48h,50h]: events 48h,50h -> gap 2h only.
        const auto [a, b] = longest_breaks(stamps({t0, t0 + 10 * 3600, t0 + 50 * 3600}));
        CHECK(a == doctest::Approx((38.0 + 2.0) / 2 * 3600));
        CHECK(b == doctest::Approx((10.0 + 0.0) / 2 * 3600));
    }
    SUBCASE("matches the naive oracle") {
        std::mt19937_64 gen(5);
        for (int trial = 0; trial < 200; ++trial) {
            std::vector<long long> raw;
            const int n = 1 + static_cast<int>(gen() % 60);
            for (int i = 0; i < n; ++i) raw.push_back(t0 + static_cast<long long>(gen() % (10 * 86400)));
            std::sort(raw.begin(), raw.end());
            std::vector<Timestamp> ts;
            for (auto r : raw) ts.push_back(from_unix(r));
            const auto got = longest_breaks(ts);
            const auto want = oracle::breaks(raw, 48 * 3600);
            CHECK(got.first == doctest::Approx(want.first).epsilon(1e-12));
            CHECK(got.second == doctest::Approx(want.second).epsilon(1e-12));
        }
    }
}

TEST_CASE("zip ratio golden values") {
    const std::string line = std::string(99, 'a').replace(0, 10, "0123456789");
    std::vector<std::string> copies(100, line);
    const double repeated = compression_ratio(copies);
    CHECK(repeated < 0.1);
    // Exact value fixed from a zlib run at level 6.
    CHECK(repeated == doctest::Approx(72.0 / 9999.0).epsilon(1e-12));

    std::mt19937_64 gen(1);
    std::string hex;
    for (int i = 0; i < 4096; ++i) hex += "0123456789abcdef"[gen() % 16];
    CHECK(compression_ratio(std::vector<std::string>{hex}) > 0.5);
    CHECK(compression_ratio(std::vector<std::string>{"x"}) > 1.0);
}

TEST_CASE("label suggestions") {
    FeatureVector f{};
    SUBCASE("fixed-interval duplicate-text account") {
        f[duplicate_simhash_ratio] = 0.9;
        f[avg_longest_break] = 0.5;
        f[total_tweets] = 1440;
        const auto s = suggest_labels(1, f, std::nullopt);
        CHECK(s.verdict == Verdict::Bot);
        CHECK(s.fired_rules == std::vector<std::string>{"R1", "R2"});
    }
    SUBCASE("nightly sleeper with varied text") {
        f[duplicate_simhash_ratio] = 0.0;
        f[avg_longest_break] = 8;
        f[official_client] = 1;
        f[total_tweets] = 100;
        const auto s = suggest_labels(1, f, 0.0);
        CHECK(s.verdict == Verdict::Human);
        CHECK(s.fired_rules == std::vector<std::string>{"H1"});
    }
    SUBCASE("mixed signals") {
        f[duplicate_simhash_ratio] = 0.05;
        f[avg_longest_break] = 8;
        f[official_client] = 1;
        const auto s = suggest_labels(1, f, 0.5);
        CHECK(s.verdict == Verdict::Undecided);
        CHECK(s.fired_rules == std::vector<std::string>{"R3", "H1"});
    }
    SUBCASE("no signal") {
        f[avg_longest_break] = 5;
        CHECK(suggest_labels(1, f, std::nullopt).verdict == Verdict::Undecided);
    }
}

TEST_CASE("trending url ratio uses the corpus' daily top hashtags") {
    const std::int64_t t0 = 1503532800;
    std::vector<Tweet> tweets;
    for (int i = 0; i < 4; ++i) {
        auto t = make_tweet(static_cast<TweetId>(i + 1), 10, t0 + i * 60, "x #afd #btw17 https://a.de/x");
        t.hashtags = {"afd", "btw17"};
        if (i % 2 == 0) t.urls = {"https://a.de/x"};
        tweets.push_back(t);
    }
    const Store store = make_store(tweets);
    const auto corpus = build_corpus_stats(store);
    CHECK(trending_url_ratio(*store.find(10), corpus) == doctest::Approx(0.5));
}

TEST_CASE("feature csv round trip") {
    auto tweets = oracle::random_corpus(3, 4, 10);
    const Store store = make_store(tweets);
    const auto corpus = build_corpus_stats(store);
    const auto table = extract_all(store, corpus, 1, 2);
    const auto dir = testing::temp_dir("features_csv");
    write_csv(table, dir / "f.csv");
    const auto back = read_csv(dir / "f.csv");
    CHECK(back.ids == table.ids);
    CHECK(back.rows == table.rows);
    CHECK(extract_all(store, corpus, 100000, 1).ids.empty());
    // Thread count does not change the result.
    CHECK(extract_all(store, corpus, 1, 1).rows == table.rows);
}
