#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "astroturf/store.hpp"

namespace astroturf::analytics {

struct TimeSeries {
    std::int64_t bin_width_seconds = kSecondsPerDay;
    Timestamp origin{};
    std::size_t bins = 0;
    // Only types occurring in the store get a series; each spans all bins.
    std::map<TweetType, std::vector<std::uint64_t>> series;

    Timestamp bin_start(std::size_t i) const {
        return origin + seconds{bin_width_seconds * static_cast<std::int64_t>(i)};
    }
    std::uint64_t total() const;
};

// Sorted by count descending, ties by key ascending.
struct RankedCounts {
    std::vector<std::pair<std::string, std::uint64_t>> entries;

    static RankedCounts from_counts(const std::map<std::string, std::uint64_t>& counts, std::size_t k);
};

// Bins are aligned to UTC midnight when the width divides a day, otherwise
// to the earliest tweet's day.
TimeSeries tweet_type_timeseries(const Store& store, std::int64_t bin_width_seconds = kSecondsPerDay);

// One count per hashtag occurrence.
RankedCounts top_hashtags(const Store& store, std::size_t k);

// Distinct unordered pairs within a tweet, at most once per tweet, key "a+b" with a < b.
RankedCounts top_hashtag_pairs(const Store& store, std::size_t k);

RankedCounts top_media(const Store& store, std::size_t k);

enum class ReferenceMode { Quoted, Retweeted };

// Referenced authors of quotes or retweets, keyed by latest screen name
// (decimal user id when the author never tweeted in the store).
RankedCounts top_referenced_users(const Store& store, std::size_t k, ReferenceMode mode);

}  // namespace astroturf::analytics
