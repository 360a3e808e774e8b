#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "astroturf/features.hpp"
#include "astroturf/tweet.hpp"

namespace astroturf::synth {

enum class Archetype { Human, Scheduler, Repeater, Amplifier };
std::string_view to_string(Archetype a);

struct SynthConfig {
    std::uint64_t n_humans = 800;
    std::uint64_t n_bots = 200;
    double span_days = 30;
    std::uint64_t seed = 42;
    std::string start = "2017-08-24T00:00:00Z";
    // User ids are id_base + account index; tweet ids start at id_base * 100000.
    std::uint64_t id_base = 1000000;

    // Bot archetype mixture; must sum to 1.
    double weight_scheduler = 0.4;
    double weight_repeater = 0.3;
    double weight_amplifier = 0.3;
    double scheduler_interval_min_minutes = 30;
    double scheduler_interval_max_minutes = 180;
    double bot_rate_min = 10;  // tweets per day, repeater and amplifier
    double bot_rate_max = 40;

    double human_gap_min_hours = 6;
    double human_gap_max_hours = 9;
    double human_rate_min = 1.5;  // tweets per day
    double human_rate_max = 8;
    std::size_t vocabulary = 600;

    // Fraction of all tweets that receive the token "FDP" in their text.
    double fdp_fraction = 0.0;
    // Share of retweets/quotes/replies pointing at tweets outside the corpus.
    double external_reference_fraction = 0.1;

    std::vector<UserId> troll_ids;      // generated accounts written to trolls.csv
    std::vector<UserId> troll_renamed;  // subset that changes screen name halfway
    std::size_t troll_unlisted = 0;     // extra list ids that never tweet

    static SynthConfig load(const std::filesystem::path& path);
    void validate() const;
};

struct AccountTruth {
    Archetype archetype = Archetype::Human;
    features::Label label = features::Label::Human;
    std::uint64_t tweets = 0;
    std::array<std::uint64_t, 4> type_counts{};  // indexed by TweetType
};

// Tallies recorded while generating; the oracle for ingest/analytics/trolls tests.
struct Bookkeeping {
    std::map<UserId, AccountTruth> accounts;
    std::uint64_t total_tweets = 0;
    std::uint64_t fdp_tweets = 0;
    std::map<std::string, std::uint64_t> hashtag_counts;
    std::map<std::string, std::uint64_t> pair_counts;
    std::map<std::string, std::uint64_t> media_counts;
    std::map<UserId, std::uint64_t> retweeted_counts;  // by referenced author
    std::map<UserId, std::uint64_t> quoted_counts;
    std::map<std::string, std::array<std::uint64_t, 4>> daily_type_counts;  // "YYYY-MM-DD"
    std::map<UserId, std::string> final_screen_names;

    struct Trolls {
        std::vector<UserId> listed;     // every id written to trolls.csv
        std::vector<UserId> planted;    // listed ids present in the corpus
        std::vector<UserId> renamed;
        std::uint64_t retweets_of_trolls_by_trolls = 0;
        std::uint64_t retweets_of_trolls_by_others = 0;
        std::uint64_t quotes_of_trolls_by_trolls = 0;
        std::uint64_t quotes_of_trolls_by_others = 0;
        std::uint64_t retweets_by_trolls = 0;
    } trolls;

    nlohmann::json to_json() const;
    static Bookkeeping from_json(const nlohmann::json& j);
};

struct Corpus {
    std::vector<Tweet> tweets;  // ascending (created_at, tweet_id)
    std::map<UserId, features::Label> labels;
    Bookkeeping truth;
    std::vector<std::pair<UserId, std::string>> troll_list;  // (id, screen name) rows
};

// Deterministic for a fixed config. Zero accounts give an empty corpus.
Corpus generate(const SynthConfig& config);

// Writes corpus.ndjson, labels.csv, truth.json and, when trolls are planted,
// trolls.csv into `dir`.
void write(const Corpus& corpus, const std::filesystem::path& dir);

}  // namespace astroturf::synth
