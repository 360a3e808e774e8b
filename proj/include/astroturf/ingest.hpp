#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "astroturf/tweet.hpp"

namespace astroturf {

enum class MatchMode { Token, Substring };

struct CorpusConfig {
    std::vector<std::string> search_terms;
    std::vector<std::string> exclusion_terms{"fdp"};
    MatchMode match_mode = MatchMode::Token;

    // Party terms used for the election collection, including the alternate
    // spellings for the Greens and the Left.
    static CorpusConfig election_default();
    // Reads `search_terms`, `exclusion_terms` and `match_mode` from a TOML file.
    static CorpusConfig load(const std::filesystem::path& path);
    void validate() const;
};

// Parses one newline-delimited record. Throws ParseError.
Tweet parse_tweet(std::string_view line);

// Inverse of parse_tweet: one line, no trailing newline, keys sorted.
std::string serialize_tweet(const Tweet& tweet);

// True when a term equals a hashtag or appears in the text. In token mode a
// text hit must be a whole token (boundaries are non-alphanumeric); in
// substring mode any case-insensitive occurrence counts.
bool matches_terms(const Tweet& tweet, const std::vector<std::string>& terms,
                   MatchMode mode = MatchMode::Token);

struct ExclusionStats {
    std::uint64_t total = 0;
    std::uint64_t excluded = 0;
    std::uint64_t kept = 0;

    double excluded_fraction() const {
        return total == 0 ? 0.0 : static_cast<double>(excluded) / static_cast<double>(total);
    }
};

// Drops every tweet matching an exclusion term.
ExclusionStats apply_exclusion(std::vector<Tweet>& tweets, const CorpusConfig& config);

struct IngestStats {
    std::uint64_t records = 0;        // non-empty input lines
    std::uint64_t rejected = 0;       // parse errors, including unparseable timestamps
    std::uint64_t off_topic = 0;      // parsed but matching no search term
    std::uint64_t duplicates = 0;     // repeated tweet_id
    ExclusionStats exclusion;         // over the on-topic tweets
    std::map<std::string, std::uint64_t> rejected_by_reason;
};

// Groups tweets by author, sorts each timeline by (created_at, tweet_id) and
// keeps the profile of each account's latest tweet. Tweets repeating an
// already-seen tweet_id are dropped (the lexicographically smallest
// serialization wins so the result does not depend on input order).
// Returns the number of dropped duplicates.
std::uint64_t build_timelines(std::vector<Tweet> tweets, std::map<UserId, UserTimeline>& out);

// Full ingest: read every input file, parse, filter by search terms, apply
// the exclusion and group into timelines.
struct IngestResult {
    std::map<UserId, UserTimeline> timelines;
    IngestStats stats;
};

IngestResult ingest_files(const std::vector<std::filesystem::path>& inputs, const CorpusConfig& config);

// Expands a shell glob; returns sorted matches, or throws when none match.
std::vector<std::filesystem::path> expand_glob(const std::string& pattern);

}  // namespace astroturf
