#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "astroturf/store.hpp"

namespace astroturf::features {

inline constexpr std::size_t kClientBuckets = 16;
inline constexpr std::size_t kFeatureCount = 44;
inline constexpr std::size_t kColumnCount = kFeatureCount - 1 + kClientBuckets;
inline constexpr int kSimilarHamming = 3;
inline constexpr std::int64_t kBreakWindowSeconds = 48 * kSecondsPerHour;

// Column layout of a FeatureVector. The client tf-idf block occupies
// kClientBuckets consecutive columns starting at twitter_client.
enum Column : std::size_t {
    avg_tweets_per_day,
    total_tweets,
    orig_ratio,
    retweet_ratio,
    quote_ratio,
    reply_ratio,
    twitter_client,
    official_client = twitter_client + kClientBuckets,
    total_clients,
    unique_users_retweet_ratio,
    unique_users_quotes_ratio,
    unique_users_reply_ratio,
    longest_conversation,
    unique_users_conv_ratio,
    avg_text_len,
    std_text_len,
    url_ratio,
    unique_url_ratio,
    unique_url_host_ratio,
    vocabulary_diversity,
    mentions_ratio,
    hashtags_ratio,
    unique_mentions_ratio,
    unique_hashtags_ratio,
    ending_hashtags_ratio,
    starting_mention_ratio,
    starting_rt_ratio,
    zip_ratio,
    user_simhash,
    avg_duplicate_simhash,
    duplicate_simhash_ratio,
    chi_square_seconds,
    avg_longest_break,
    avg_second_longest_break,
    median_retweet,
    median_quote,
    total_friends,
    total_followers,
    friend_follower_ratio,
    has_default_profile_image,
    has_default_user_image,
    is_verified,
    has_geo_coordinates,
    self_bot,
    column_end
};
static_assert(column_end == kColumnCount);

// The 44 feature names, grouped metadata(14) / text(17) / time(5) / user(8).
const std::array<std::string_view, kFeatureCount>& feature_names();
// The 59 CSV column names: feature names with twitter_client expanded to
// twitter_client_00 .. twitter_client_15.
const std::vector<std::string>& column_names();
// Columns holding values in [0,1] by definition.
const std::vector<Column>& ratio_columns();
const std::vector<Column>& boolean_columns();

using FeatureVector = std::array<double, kColumnCount>;

// Corpus-wide context computed in one read-only pass over the store.
struct CorpusStats {
    struct TweetRef {
        Timestamp created_at{};
        UserId author = 0;
        TweetType type = TweetType::Original;
        std::optional<TweetId> parent;  // in-reply-to tweet for replies
    };

    Timestamp span_start{};
    Timestamp span_end{};
    std::size_t accounts = 0;
    std::map<std::string, std::uint64_t> client_document_frequency;
    std::unordered_map<TweetId, TweetRef> tweets;
    double median_retweet_hours = 0.0;  // fallback when an account has no pairs
    double median_quote_hours = 0.0;
    std::map<std::int64_t, std::set<std::string>> trending;  // UTC day index -> top-10 hashtags

    double span_days() const;
};

CorpusStats build_corpus_stats(const Store& store);

// Client name with any HTML anchor markup removed.
std::string client_name(std::string_view source);
bool is_official_client(std::string_view name);

// Token-vote fingerprint; texts without tokens map to 0.
std::uint64_t simhash64(std::string_view text);
int hamming(std::uint64_t a, std::uint64_t b);

// Pearson statistic of seconds-of-minute counts against n/60 per bin.
double seconds_chi_square(std::span<const Timestamp> timestamps);

// Mean over 48h windows (aligned to the first timestamp, last window cut at
// the last timestamp) of the largest and second-largest gap between
// consecutive events, window boundaries included as events. In seconds.
// A single distinct timestamp yields the window length for both.
std::pair<double, double> longest_breaks(std::span<const Timestamp> sorted_timestamps,
                                         std::int64_t window_seconds = kBreakWindowSeconds);

// DEFLATE (zlib, level 6) size of the newline-joined texts over their size.
double compression_ratio(std::span<const std::string> texts);

// Throws InvalidArgument for an empty timeline.
FeatureVector extract_features(const UserTimeline& timeline, const UserProfile& profile,
                               const CorpusStats& corpus);

// Features for every account with at least min_tweets tweets, ascending id.
struct FeatureTable {
    std::vector<UserId> ids;
    std::vector<FeatureVector> rows;
};

FeatureTable extract_all(const Store& store, const CorpusStats& corpus, std::size_t min_tweets = 1,
                         unsigned threads = 1);

void write_csv(const FeatureTable& table, const std::filesystem::path& path);
FeatureTable read_csv(const std::filesystem::path& path);

// ---- labeling heuristics -------------------------------------------------

enum class Verdict { Bot, Human, Undecided };
std::string_view to_string(Verdict v);

struct LabelSuggestion {
    UserId account = 0;
    Verdict verdict = Verdict::Undecided;
    std::vector<std::string> fired_rules;
};

// Fraction of the timeline's tweets carrying a URL and at least two hashtags
// that were trending (top-10) on the tweet's day.
double trending_url_ratio(const UserTimeline& timeline, const CorpusStats& corpus);

// Bot rules R1 (duplicate_simhash_ratio >= 0.5), R2 (avg_longest_break < 4h
// and total_tweets >= 200), R3 (trending_url_ratio >= 0.3); human rule H1
// (avg_longest_break >= 6h, official client, duplicate_simhash_ratio < 0.1).
// R3 is evaluated only when trending_ratio is supplied.
LabelSuggestion suggest_labels(UserId account, const FeatureVector& features,
                               std::optional<double> trending_ratio);

enum class Label { Human = 0, Bot = 1 };

// labels.csv: user_id,label with label in {bot, human}.
std::map<UserId, Label> read_labels(const std::filesystem::path& path);
void write_labels(const std::map<UserId, Label>& labels, const std::filesystem::path& path);

}  // namespace astroturf::features
